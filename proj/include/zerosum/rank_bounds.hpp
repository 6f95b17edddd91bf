#pragma once

// Monomial counting (exact DP and the Markov-inequality bound), the constants
// J(p) and gamma_q, and the partition-rank / slice-rank upper-bound counts.

#include <cstdint>
#include <optional>
#include <vector>

#include "zerosum/arith.hpp"
#include "zerosum/numeric.hpp"

namespace zerosum {

// #{ v in {0..q-1}^n : sum v_i <= d }, exact.
Natural monomial_count_exact(unsigned q, unsigned n, unsigned d);

struct MinimizationResult {
    Real argmin{0};
    Real value{0};       // objective value at the reported minimum
    Real tolerance{0};   // achieved bracket width on the argmin
    bool at_lower_boundary{false};
    bool at_upper_boundary{false};
};

// min over (0,1) of (1-x^q)/(1-x) * x^(-e), merged with the boundary limits
// (q as x->1; 1 as x->0 when e == 0). Golden-section to relative 1e-12.
MinimizationResult minimize_inner(unsigned q, const Real& exponent);

struct MarkovBound {
    unsigned q{}, n{}, d{};
    MinimizationResult inner;
    Real bound{0};  // inner.value^n
};

// Requires 0 <= d <= (q-1) n.
MarkovBound markov_bound(unsigned q, unsigned n, unsigned d);

// Exact count paired with its Markov bound.
struct CountResult {
    unsigned q{}, n{}, d{};
    Natural exact;
    Real markov{0};
};
CountResult count_with_markov(unsigned q, unsigned n, unsigned d);

// (1/p) min over (0,1) of (1-x^p)/(1-x) x^(-(p-1)/3); odd prime p.
Real compute_J(unsigned p);

// inf over z > 1 of (z - z^-2) / (3 log z).
Real compute_limit_J();

// inf over (0,1) of (1-x^q)/(1-x) x^(-(q-1)/q); any q >= 2. Attained at the
// x -> 1 boundary exactly when q == 2 (value 2).
Real compute_gamma(unsigned q);

enum class BoundMode { exact, asymptotic, amplified };

struct RankBound {
    BoundMode mode{};
    unsigned degree{};              // d used by the exact count
    std::optional<Natural> exact;   // set in exact mode
    Real value{0};                  // numeric value in every mode
};

// Partition-rank bound for I_p: (2^p - p - 2) * N(p, n, floor(n(p-1)/3)) in
// exact mode, (2^p - p - 2) (p J(p))^n in asymptotic mode.
RankBound partition_rank_bound_Ip(unsigned p, unsigned n, BoundMode mode);

// Slice-rank bound for E_q: q * N(q, n, floor(n(q-1)/q)) exact,
// q * gamma_q^n asymptotic, gamma_q^n amplified.
RankBound slice_rank_bound_Eq(unsigned q, unsigned n, BoundMode mode);

// q^(1/m) * gamma_q^n for m in {1,2,4,8}, exhibiting the amplification step.
std::vector<Real> amplification_diagnostic(unsigned q, unsigned n);

}  // namespace zerosum
