#pragma once

// Modular arithmetic over Z/kZ and prime fields, prime-power factorization,
// and Lucas-digit binomial coefficients.

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "zerosum/numeric.hpp"

namespace zerosum {

bool is_prime(std::uint64_t n);

// q = p^r, p prime (checked by trial division), r >= 1.
struct PrimePower {
    std::uint64_t p{};
    unsigned r{};
    std::uint64_t q{};

    PrimePower(std::uint64_t base, unsigned exponent);

    // Throws std::invalid_argument unless value is a prime power >= 2.
    static PrimePower from_value(std::uint64_t value);
};

// Ascending prime-power factorization of k >= 2.
std::vector<PrimePower> factorize(std::uint64_t k);

// C(x~, m) mod p for any nonnegative lift x~ of x (mod q). Well defined for
// m <= q-1: m has at most r base-p digits and x mod p^r fixes the r lowest
// digits of every lift. Throws std::out_of_range for m >= q.
std::uint32_t binom_mod_p(std::uint32_t x, std::uint32_t m, const PrimePower& q);

// Exact integer binomial, the independent big-integer oracle.
Natural binom_exact(std::uint64_t a, std::uint64_t b);

struct WelldefReport {
    PrimePower q;
    unsigned lifts{0};
    bool well_defined{true};
    std::uint64_t cases_checked{0};
    std::string first_failure;  // empty when well_defined
};

// For every x, m in [0, q) checks that C(x + j*q, m) mod p is constant over
// the first `lifts` lifts, using exact big-integer binomials.
WelldefReport verify_binom_welldef(const PrimePower& q, unsigned lifts);

// Integer in [0, m), m >= 2.
struct Residue {
    std::uint32_t value{};
    std::uint32_t modulus{};

    Residue() = default;
    Residue(std::uint64_t v, std::uint32_t m);

    Residue operator+(Residue rhs) const;
    Residue operator-(Residue rhs) const;
    Residue operator*(Residue rhs) const;
    Residue operator-() const;
    Residue pow(std::uint64_t e) const;

    friend bool operator==(Residue, Residue) = default;
};

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod);

// Homocyclic group (Z/kZ)^n.
struct GroupSpec {
    std::uint32_t k{};
    std::uint32_t n{};

    GroupSpec() = default;
    GroupSpec(std::uint32_t k_, std::uint32_t n_);

    Natural order() const;            // k^n
    std::uint64_t order_u64() const;  // throws std::overflow_error past 2^63
    std::uint32_t exponent() const { return k; }

    friend auto operator<=>(const GroupSpec&, const GroupSpec&) = default;
};

std::ostream& operator<<(std::ostream&, const GroupSpec&);

// Element of (Z/kZ)^n: n coordinates sharing one modulus.
struct GroupVector {
    std::uint32_t modulus{};
    std::vector<std::uint32_t> coords;

    GroupVector() = default;
    GroupVector(std::uint32_t k, std::vector<std::uint32_t> c);

    GroupSpec group() const { return {modulus, static_cast<std::uint32_t>(coords.size())}; }
    bool is_zero() const;

    GroupVector operator+(const GroupVector& rhs) const;
    GroupVector operator-() const;

    // Row-major index in [0, k^n); coordinate 0 most significant.
    std::uint64_t flat_index() const;
    static GroupVector from_flat(GroupSpec g, std::uint64_t index);

    std::string to_string() const;  // "c0,c1,...,cn-1"

    friend bool operator==(const GroupVector&, const GroupVector&) = default;
    friend auto operator<=>(const GroupVector&, const GroupVector&) = default;
};

std::vector<GroupVector> all_elements(GroupSpec g);

}  // namespace zerosum
