#pragma once

// Brute-force ground truth at desk scale: zero-sum subsequence detection,
// exact s(G) by branch-and-bound, property-D certification, distinct
// zero-sum search, the Harborth witness, and exhaustive tensor verification.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zerosum/arith.hpp"

namespace zerosum {

struct SequenceMultiset {
    GroupSpec group;
    std::map<GroupVector, unsigned> counts;  // element -> multiplicity >= 1

    std::size_t length() const;
    void add(const GroupVector& v, unsigned mult = 1);
};

// Witness of a length-L zero-sum subsequence (respecting multiplicities), or
// nullopt when none exists. DP over support x chosen-count x partial sum.
std::optional<std::vector<GroupVector>> has_zero_sum_subseq(const SequenceMultiset& s,
                                                            unsigned length);

inline constexpr std::uint64_t kDefaultSearchCap = 1'000'000'000;

struct SearchReport {
    std::string task;
    GroupSpec group;
    bool complete{true};       // false: node cap hit, value is best-found only
    std::uint64_t value{0};    // s(G) for task "s"
    std::uint64_t nodes{0};
    double seconds{0};
    unsigned threads{1};
    std::uint64_t cap{0};

    std::optional<SequenceMultiset> witness;  // canonical extremal sequence

    bool property_d_holds{false};
    std::uint64_t extremal_count{0};
    std::vector<SequenceMultiset> extremals;   // capped at kMaxStoredExtremals
    std::vector<SequenceMultiset> violations;  // extremals with uneven multiplicity
};

inline constexpr std::size_t kMaxStoredExtremals = 4096;

// Exact s(G): 1 + max length of a multiset with no zero-sum subsequence of
// length k. Canonical multiset enumeration with branch-and-bound; the result
// is independent of the thread count.
SearchReport exact_s(GroupSpec g, std::uint64_t cap = kDefaultSearchCap, unsigned threads = 1);

// Enumerates every extremal sequence (length s(G)-1, zero-sum free at length
// k) and reports whether each one is a set repeated k-1 times.
SearchReport check_property_D(GroupSpec g, std::uint64_t cap = kDefaultSearchCap,
                              unsigned threads = 1);

// p pairwise-distinct elements of `a` summing to zero, or nullopt (certified
// by full search). Prime p.
std::optional<std::vector<GroupVector>> find_distinct_zero_sum(const std::vector<GroupVector>& a,
                                                               unsigned p);

// Every vector of {0,1}^n with multiplicity k-1; confirmed zero-sum free via
// the subsequence DP when k^n <= 512.
SequenceMultiset harborth_witness(std::uint32_t k, std::uint32_t n);

// True iff I_p restricted to a^p is the diagonal identity tensor. Requires
// that `a` has no p distinct elements summing to zero (throws
// std::invalid_argument with the offending tuple otherwise) and |a|^p <= 1e6.
bool diagonal_restriction_check(const std::vector<GroupVector>& a, unsigned p);

// ---- exhaustive tensor-identity verification -------------------------------

struct IdentityCheck {
    std::string name;
    std::uint64_t tuples{0};
    bool pass{false};
    std::string mismatch;  // first mismatching tuple, empty on pass
};

// Tuple budget for any single exhaustive sweep; larger grids are refused.
inline constexpr std::uint64_t kMaxSweepTuples = 1'000'000'000;

// Number of tuples each sweep would visit (domain^k), or nullopt on overflow.
std::optional<std::uint64_t> sweep_tuple_count(std::uint64_t domain, unsigned k);

// Signed permutation sum vs direct distinctness, all tuples in [set_size]^k.
IdentityCheck verify_distinctness(unsigned k, unsigned set_size);

// eval_R_k vs the four-case piecewise form (two-value case by C_2 stabilizer
// count), all tuples in [set_size]^k.
IdentityCheck verify_R_piecewise(unsigned k, unsigned set_size);

// eval_R_k vs the delta expansion, all tuples in [set_size]^k.
IdentityCheck verify_R_expansion(unsigned k, unsigned set_size);

// eval_I_p vs the three-case indicator, all tuples over (F_p^n)^p.
IdentityCheck verify_I(unsigned p, unsigned n);

// E_q vs the zero-sum indicator, all tuples over ((Z/qZ)^n)^q. Shares prefix
// state across tuples; identical values to eval_E_q pointwise.
IdentityCheck verify_E(unsigned q, unsigned n);

// The full small-parameter suite used by the acceptance gate.
std::vector<IdentityCheck> verify_identities_all_small();

// ---- sequence file format ---------------------------------------------------
// '#' comment lines, a header "group k n", then one element per line with
// comma-separated coordinates; multiplicity expressed by repetition.

void write_sequence(std::ostream& os, const SequenceMultiset& s);
SequenceMultiset read_sequence(std::istream& is);

}  // namespace zerosum
