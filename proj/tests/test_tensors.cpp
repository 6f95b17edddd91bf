#include "doctest.h"

#include <set>

#include "zerosum/tensors.hpp"

using namespace zerosum;

namespace {

Tuple labels(std::uint32_t mod, std::initializer_list<std::uint32_t> vals) {
    Tuple t;
    for (auto v : vals) t.emplace_back(mod, std::vector<std::uint32_t>{v});
    return t;
}

Tuple vectors(std::uint32_t mod, std::initializer_list<std::vector<std::uint32_t>> vals) {
    Tuple t;
    for (const auto& v : vals) t.emplace_back(mod, v);
    return t;
}

long long factorial(unsigned n) {
    long long f = 1;
    for (unsigned i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace

TEST_CASE("symmetric group enumeration and cycle classes") {
    for (unsigned k : {1u, 2u, 3u, 4u, 5u}) {
        const auto& group = symmetric_group(k);
        CHECK(static_cast<long long>(group.size()) == factorial(k));
        long long c1 = 0, c2 = 0, sign_sum = 0;
        for (const auto& sigma : group) {
            if (sigma.cycle_count == 1) ++c1;
            if (sigma.cycle_count == 2) ++c2;
            sign_sum += sigma.sign;
            // cycles partition {0..k-1}
            std::set<unsigned> seen;
            for (const auto& cycle : sigma.cycles)
                for (auto i : cycle) CHECK(seen.insert(i).second);
            CHECK(seen.size() == k);
        }
        if (k >= 2) CHECK(sign_sum == 0);
        // |C_1| = (k-1)!, |C_2| = (k-1)! sum_{j=1}^{k-1} 1/j
        CHECK(c1 == factorial(k - 1));
        long long expect_c2 = 0;
        for (unsigned j = 1; j < k; ++j) expect_c2 += factorial(k - 1) / j;
        CHECK(c2 == expect_c2);
    }
    CHECK_THROWS_AS(symmetric_group(9), std::invalid_argument);
}

TEST_CASE("F_p is the zero-sum indicator") {
    CHECK(eval_F_p(labels(3, {1, 1, 1})) == 1);
    CHECK(eval_F_p(labels(3, {0, 0, 0})) == 1);
    CHECK(eval_F_p(vectors(3, {{1, 0}, {0, 1}, {1, 1}})) == 0);
    CHECK(eval_F_p(labels(5, {1, 2, 3, 4, 0})) == 1);
    CHECK_THROWS_AS(eval_F_p(labels(4, {0, 0, 0, 0})), std::invalid_argument);  // non-prime
    CHECK_THROWS_AS(eval_F_p(labels(3, {0, 0})), std::invalid_argument);        // wrong length
}

TEST_CASE("f_sigma fixed-point indicator") {
    const auto& s3 = symmetric_group(3);
    const auto& identity = s3.front();  // lexicographically first = identity
    CHECK(identity.cycle_count == 3);
    CHECK(eval_f_sigma(identity, labels(5, {0, 1, 2})));

    Permutation swap12 = Permutation::from_images({1, 0, 2});
    CHECK(swap12.sign == -1);
    CHECK(eval_f_sigma(swap12, labels(5, {4, 4, 1})));
    CHECK(!eval_f_sigma(swap12, labels(5, {0, 1, 2})));
}

TEST_CASE("distinctness sum is the distinctness indicator") {
    CHECK(distinctness_sum(labels(5, {0, 1, 2})) == 1);
    CHECK(distinctness_sum(labels(5, {0, 0, 1})) == 0);
    CHECK(distinctness_sum(labels(5, {0, 0, 0})) == 0);
    CHECK(distinctness_sum(labels(7, {3, 1, 4, 5})) == 1);
}

TEST_CASE("R_k known values") {
    // R_3 is identically 1
    for (std::uint32_t a = 0; a < 3; ++a)
        for (std::uint32_t b = 0; b < 3; ++b)
            for (std::uint32_t c = 0; c < 3; ++c) CHECK(eval_R_k(labels(3, {a, b, c})) == 1);

    CHECK(eval_R_k(labels(5, {2, 2, 2, 2})) == -5);   // (-1)^3 3! (1/2 + 1/3)
    CHECK(eval_R_k(labels(5, {0, 0, 1, 1})) == -1);   // single C_2 stabilizer (0 1)(2 3)
    CHECK(eval_R_k(labels(7, {0, 0, 0, 0, 0})) == 26);  // 4! (1/2 + 1/3 + 1/4)
    CHECK_THROWS_AS(eval_R_k(labels(5, {0, 1})), std::invalid_argument);
}

TEST_CASE("I_p three-case indicator") {
    CHECK(eval_I_p(labels(3, {0, 1, 2})) == 1);  // distinct, sum 3 = 0
    for (std::uint32_t x = 0; x < 5; ++x) CHECK(eval_I_p(labels(5, {x, x, x, x, x})) == 1);
    CHECK(eval_I_p(labels(3, {0, 0, 1})) == 0);
    CHECK_THROWS_AS(eval_I_p(labels(2, {0, 1})), std::invalid_argument);  // p = 2 rejected
}

TEST_CASE("E_q zero-sum indicator") {
    PrimePower q4(2, 2), q3(3, 1);
    for (std::uint32_t x = 0; x < 4; ++x) CHECK(eval_E_q(labels(4, {x, x, x, x}), q4) == 1);
    CHECK(eval_E_q(labels(4, {1, 1, 1, 1}), q4) == 1);
    CHECK(eval_E_q(labels(4, {1, 1, 1, 0}), q4) == 0);
    CHECK(eval_E_q(vectors(3, {{1, 0}, {1, 0}, {0, 1}}), q3) == 0);
    CHECK(eval_E_q(vectors(3, {{1, 0}, {1, 1}, {1, 2}}), q3) == 1);
    CHECK_THROWS_AS(eval_E_q(labels(4, {0, 0, 0}), q4), std::invalid_argument);
}

TEST_CASE("expand_R_k term structure") {
    auto r3 = expand_R_k(3);
    REQUIRE(r3.size() == 1);
    CHECK(r3[0].coeff == 1);
    CHECK(r3[0].partition.size() == 3);  // all singletons: the constant term

    auto r4 = expand_R_k(4);
    REQUIRE(r4.size() == 7);
    int constants = 0, pairs = 0;
    for (const auto& term : r4) {
        if (term.partition.size() == 4) {
            ++constants;
            CHECK(term.coeff == 1);
        } else {
            ++pairs;
            CHECK(term.partition.size() == 3);  // one pair + two singletons
            CHECK(term.coeff == -1);
        }
    }
    CHECK(constants == 1);
    CHECK(pairs == 6);

    auto r5 = expand_R_k(5);
    int triples = 0, pair_pairs = 0, single_pairs = 0;
    for (const auto& term : r5) {
        std::size_t nontrivial = 0, largest = 0;
        for (const auto& block : term.partition) {
            if (block.size() > 1) ++nontrivial;
            largest = std::max(largest, block.size());
        }
        if (largest == 3) {
            ++triples;
            CHECK(term.coeff == 2);
        } else if (nontrivial == 2) {
            ++pair_pairs;
            CHECK(term.coeff == 1);
        } else if (nontrivial == 1) {
            ++single_pairs;
            CHECK(term.coeff == -1);
        } else {
            CHECK(term.coeff == 1);  // constant
        }
    }
    CHECK(triples == 10);
    CHECK(pair_pairs == 15);
    CHECK(single_pairs == 10);
    CHECK(r5.size() == 36);
}

TEST_CASE("delta expansion agrees with R_k pointwise") {
    for (unsigned k : {3u, 4u, 5u}) {
        auto terms = expand_R_k(k);
        std::vector<std::uint32_t> idx(k, 0);
        const std::uint32_t domain = 4;
        while (true) {
            Tuple t;
            for (auto i : idx) t.emplace_back(domain, std::vector<std::uint32_t>{i});
            CHECK(eval_delta_combination(terms, t) == eval_R_k(t));
            unsigned pos = k;
            bool done = true;
            while (pos-- > 0) {
                if (++idx[pos] < domain) {
                    done = false;
                    break;
                }
                idx[pos] = 0;
            }
            if (done) break;
        }
    }
}

TEST_CASE("inverse sums satisfy sum_{j=2}^{p-1} 1/j = -1 in F_p") {
    for (std::uint32_t p : {3u, 5u, 7u, 11u, 13u}) {
        std::uint64_t sum = 0;
        for (std::uint64_t j = 2; j < p; ++j) sum = (sum + pow_mod(j, p - 2, p)) % p;
        CHECK(sum == p - 1);
    }
}
