#pragma once

// The bound formula catalog for s((Z/kZ)^n) and the prime-power reduction
// engine, composed into a best-known-bound calculator with provenance.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "zerosum/arith.hpp"
#include "zerosum/numeric.hpp"

namespace zerosum {

enum class Method {
    EGZ1961,
    Reiher,
    ExactPowerOfTwo,
    HarborthLower,
    HarborthUpper,
    Elsholtz,
    PartitionRank,
    FoxSauermann,
    HegedusConditional,
    PropertyD_PrimePower,
    PropertyD_Composite,
    SubgroupReduction,
    CoprimeSplit,
    PrimeReduction,
    Oracle,
    Composite,  // min/max over routes
};

std::string_view method_name(Method m);

struct BoundRecord {
    enum class Direction { lower, upper };

    Direction direction{Direction::upper};
    Natural value;                   // integral bound used for comparisons
    std::optional<Real> real_value;  // analytic value, when the route has one
    Method method{Method::Composite};
    bool conditional_on_property_d{false};
    std::vector<BoundRecord> derivation;
    std::string note;
};

// 2k-1 (n=1), 4k-3 (n=2), 2^n+1 (k=2); absent otherwise.
std::optional<Natural> exact_known(GroupSpec g);

// (k-1)2^n + 1  <=  s  <=  (k-1)k^n + 1.
std::pair<BoundRecord, BoundRecord> bound_harborth(GroupSpec g);

// Lower bound (k-1) 2^n (9/8)^floor(n/3) + 1 (an exact integer for every n).
BoundRecord bound_elsholtz(GroupSpec g);

// Upper bound for s(F_p^n), odd prime p: carries the asymptotic value
// (p-1) 2^p (p J(p))^n and the exact-count refinement
// (p-1)(2^p - p - 2) N(p, n, floor(n(p-1)/3)) + 1; value = min of the two.
BoundRecord bound_partition_rank(unsigned p, unsigned n);

// 2p (p J(p))^n, odd prime p.
BoundRecord bound_fox_sauermann(unsigned p, unsigned n);

// (p-1) p^((1 - (p-2)^2 / (2 p^2 log p)) n + 1) + 1, conditional on property D.
BoundRecord bound_hegedus(unsigned p, unsigned n);

// (q-1) 4^n + 1 and the sharper (q-1) ceil(gamma_q^n) + 1, conditional.
BoundRecord bound_propertyD(const PrimePower& q, unsigned n);

// Exact telescoping value sum_i k ((q_i - 1) 4^n + 1) / (q_m ... q_i) over the
// ascending prime-power factors, checked against the closed form
// (k-1) 4^n + k; conditional.
BoundRecord bound_propertyD_general(std::uint64_t k, unsigned n);

// subgroup route: exp(G/H) (s(H) - 1) + s(G/H).
Natural reduce_subgroup(const Natural& exp_gh, const Natural& s_h, const Natural& s_gh);

// min over orderings of sum_i exp(G_1)...exp(G_{i-1}) s(G_i); exponents must
// be pairwise coprime.
Natural reduce_coprime_split(const std::vector<std::pair<std::uint64_t, Natural>>& parts);

// Strict bound k * sum_p s(F_p^n)/(p-1) in exact rationals, converted to the
// non-strict integer bound ceil(B) - 1. per_prime_upper must cover every
// prime dividing k.
BoundRecord reduce_to_primes(std::uint64_t k, unsigned n,
                           const std::map<std::uint64_t, Natural>& per_prime_upper);

struct OracleCache {
    std::map<GroupSpec, Natural> exact_values;
    std::set<GroupSpec> property_d_certified;
};

// Best lower/upper pair over all applicable routes, with derivation traces.
// Throws std::logic_error if lower > upper (correctness tripwire).
std::pair<BoundRecord, BoundRecord> best_bounds(GroupSpec g, bool assume_property_d,
                                                const OracleCache* cache = nullptr);

struct AsymptoticRate {
    Real rate{0};                         // J(p) p, or exactly 2 for k = 2^a
    std::uint64_t prime{};                // p = max prime dividing k
    std::uint64_t largest_prime_power{};  // differs from `prime` when k has a square factor
    bool wording_discrepancy{false};
    std::string note;
};

AsymptoticRate asymptotic_rate(std::uint64_t k);

}  // namespace zerosum
