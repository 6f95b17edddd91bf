#pragma once

// Pointwise evaluators for the explicit tensors: the zero-sum indicator F_p,
// the fixed-point indicators f_sigma, the signed distinctness sum, R_k, I_p,
// and E_q, plus the symbolic delta expansion of R_k.

#include <cstdint>
#include <vector>

#include "zerosum/arith.hpp"

namespace zerosum {

// Enumeration cap: identity checking targets k <= 5, evaluation allows up to
// 8! = 40320 permutations.
inline constexpr unsigned kMaxSymmetricGroup = 8;

struct Permutation {
    std::vector<std::uint8_t> images;               // images[i] = sigma(i), 0-based
    std::vector<std::vector<std::uint8_t>> cycles;  // disjoint cycle supports
    int sign{1};                                    // (-1)^(k - cycle_count)
    unsigned cycle_count{0};

    static Permutation from_images(std::vector<std::uint8_t> images);
    unsigned size() const { return static_cast<unsigned>(images.size()); }
};

// All k! elements of S_k in lexicographic image order; built once per k and
// shared read-only afterwards.
const std::vector<Permutation>& symmetric_group(unsigned k);

using Tuple = std::vector<GroupVector>;

// Product over coordinates of 1 - (sum of the tuple's i-th coordinates)^(p-1),
// evaluated in F_p. Requires prime modulus p and |t| == p.
std::uint32_t eval_F_p(const Tuple& t);

// 1 iff t is a fixed point of sigma, i.e. t[sigma(i)] == t[i] for all i.
bool eval_f_sigma(const Permutation& sigma, const Tuple& t);

// Sum over all of S_k of sgn(sigma) * f_sigma(t): 1 iff all entries distinct.
long long distinctness_sum(const Tuple& t);

// Sum restricted to permutations with >= 3 disjoint cycles; exact integer.
long long eval_R_k(const Tuple& t);

// (R_p mod p) * F_p in F_p; odd prime modulus p == |t|.
std::uint32_t eval_I_p(const Tuple& t);

// Product over coordinates of the truncated alternating binomial sum,
// evaluated in the prime subfield F_p of F_q. Requires |t| == q.
std::uint32_t eval_E_q(const Tuple& t, const PrimePower& q);

// One term of the R_k expansion: a set partition of {0..k-1} (singleton
// blocks stand for the constant factor 1) with an integer coefficient.
struct DeltaTerm {
    std::vector<std::vector<std::uint8_t>> partition;
    long long coeff{0};
};

// R_k as a combination of products of disjoint deltas: one term per partition
// with >= 3 blocks, coefficient prod over blocks of (-1)^(|A|-1) (|A|-1)!.
std::vector<DeltaTerm> expand_R_k(unsigned k);

long long eval_delta_combination(const std::vector<DeltaTerm>& terms, const Tuple& t);

}  // namespace zerosum
