#include "doctest.h"

#include <random>
#include <sstream>

#include "zerosum/oracle.hpp"
#include "zerosum/tensors.hpp"

using namespace zerosum;

namespace {

SequenceMultiset make_seq(GroupSpec g, std::initializer_list<std::pair<std::uint64_t, unsigned>> items) {
    SequenceMultiset s;
    s.group = g;
    for (auto [flat, mult] : items) s.add(GroupVector::from_flat(g, flat), mult);
    return s;
}

// naive oracle: enumerate all sub-multisets by multiplicity choice
bool naive_has_zero_sum(const SequenceMultiset& s, unsigned length) {
    std::vector<std::pair<GroupVector, unsigned>> items(s.counts.begin(), s.counts.end());
    GroupVector zero = GroupVector::from_flat(s.group, 0);
    std::function<bool(std::size_t, unsigned, GroupVector)> rec =
        [&](std::size_t i, unsigned left, GroupVector sum) -> bool {
        if (left == 0) return sum.is_zero();
        if (i == items.size()) return false;
        GroupVector acc = sum;
        for (unsigned take = 0; take <= std::min(items[i].second, left); ++take) {
            if (rec(i + 1, left - take, acc)) return true;
            acc = acc + items[i].first;
        }
        return false;
    };
    return rec(0, length, zero);
}

bool witness_valid(const SequenceMultiset& s, const std::vector<GroupVector>& w, unsigned length) {
    if (w.size() != length) return false;
    std::map<GroupVector, unsigned> used;
    GroupVector sum = GroupVector::from_flat(s.group, 0);
    for (const auto& v : w) {
        ++used[v];
        sum = sum + v;
    }
    for (const auto& [v, m] : used) {
        auto it = s.counts.find(v);
        if (it == s.counts.end() || it->second < m) return false;
    }
    return sum.is_zero();
}

}  // namespace

TEST_CASE("has_zero_sum_subseq on the EGZ extremal example") {
    GroupSpec z3{3, 1};
    auto extremal = make_seq(z3, {{1, 2}, {2, 2}});  // {1,1,2,2}
    CHECK(!has_zero_sum_subseq(extremal, 3).has_value());

    auto triple = make_seq(z3, {{1, 3}});
    auto w = has_zero_sum_subseq(triple, 3);
    REQUIRE(w.has_value());
    CHECK(witness_valid(triple, *w, 3));
}

TEST_CASE("has_zero_sum_subseq over (Z/2Z)^2") {
    GroupSpec g{2, 2};
    auto s = make_seq(g, {{1, 1}, {2, 1}, {3, 1}});  // (0,1), (1,0), (1,1)
    CHECK(!has_zero_sum_subseq(s, 2).has_value());
    auto w = has_zero_sum_subseq(s, 3);
    REQUIRE(w.has_value());
    CHECK(witness_valid(s, *w, 3));
}

TEST_CASE("has_zero_sum_subseq agrees with naive enumeration on random inputs") {
    std::mt19937 rng(987654321);
    std::vector<GroupSpec> groups{{2, 1}, {3, 1}, {4, 1}, {5, 1}, {2, 2}, {3, 2}, {2, 3}, {9, 1}};
    for (int trial = 0; trial < 10000; ++trial) {
        GroupSpec g = groups[rng() % groups.size()];
        std::uint64_t order = g.order_u64();
        SequenceMultiset s;
        s.group = g;
        unsigned total = 1 + rng() % 10;
        for (unsigned i = 0; i < total; ++i) s.add(GroupVector::from_flat(g, rng() % order));
        unsigned length = 1 + rng() % total;
        auto dp = has_zero_sum_subseq(s, length);
        bool naive = naive_has_zero_sum(s, length);
        CHECK(dp.has_value() == naive);
        if (dp) CHECK(witness_valid(s, *dp, length));
    }
}

TEST_CASE("exact_s reproduces known constants on small groups") {
    CHECK(exact_s({2, 1}).value == 3);
    CHECK(exact_s({3, 1}).value == 5);
    CHECK(exact_s({4, 1}).value == 7);
    CHECK(exact_s({2, 2}).value == 5);
    auto rep = exact_s({3, 2});
    CHECK(rep.value == 9);
    CHECK(rep.complete);
    CHECK(rep.nodes > 0);
}

TEST_CASE("exact_s witnesses re-verify and extensions break") {
    std::mt19937 rng(424242);
    for (auto g : {GroupSpec{3, 1}, GroupSpec{5, 1}, GroupSpec{2, 3}, GroupSpec{3, 2}}) {
        auto rep = exact_s(g);
        REQUIRE(rep.witness.has_value());
        const auto& w = *rep.witness;
        CHECK(w.length() == rep.value - 1);
        CHECK(!has_zero_sum_subseq(w, g.k).has_value());
        // any single-element extension of an extremal sequence gains a zero-sum window
        std::uint64_t order = g.order_u64();
        for (int trial = 0; trial < 100; ++trial) {
            SequenceMultiset extended = w;
            extended.add(GroupVector::from_flat(g, rng() % order));
            CHECK(has_zero_sum_subseq(extended, g.k).has_value());
        }
    }
}

TEST_CASE("exact_s is deterministic across thread counts") {
    for (auto g : {GroupSpec{3, 2}, GroupSpec{5, 1}}) {
        auto one = exact_s(g, kDefaultSearchCap, 1);
        auto two = exact_s(g, kDefaultSearchCap, 2);
        auto eight = exact_s(g, kDefaultSearchCap, 8);
        CHECK(one.value == two.value);
        CHECK(two.value == eight.value);
        CHECK(one.nodes == two.nodes);
        CHECK(two.nodes == eight.nodes);
        CHECK(one.witness->counts == two.witness->counts);
        CHECK(two.witness->counts == eight.witness->counts);
    }
}

TEST_CASE("exact_s resolves the (Z/4Z)^2 frontier case") {
    auto rep = exact_s({4, 2}, 2'000'000'000, 2);
    CHECK(rep.complete);
    CHECK(rep.value == 13);  // matches the conditional bound (q-1)4^n+1 = 13 with equality

    auto d = check_property_D({4, 2}, 4'000'000'000, 2);
    CHECK(d.complete);
    CHECK(d.property_d_holds);
    CHECK(d.extremal_count == 192);
}

TEST_CASE("exact_s cap produces an inconclusive report") {
    auto rep = exact_s({3, 2}, 10, 1);
    CHECK(!rep.complete);
    CHECK(rep.cap == 10);
}

TEST_CASE("check_property_D certifies small groups with exact extremal counts") {
    auto z3 = check_property_D({3, 1});
    CHECK(z3.property_d_holds);
    CHECK(z3.extremal_count == 3);  // {a:2, b:2} for the three pairs a != b
    for (const auto& e : z3.extremals) {
        CHECK(e.length() == 4);
        for (const auto& [v, m] : e.counts) CHECK(m == 2);
    }

    auto z22 = check_property_D({2, 2});
    CHECK(z22.property_d_holds);
    CHECK(z22.extremal_count == 1);  // all four elements once

    auto z4 = check_property_D({4, 1});
    CHECK(z4.property_d_holds);
    CHECK(z4.extremal_count == 4);

    auto z5 = check_property_D({5, 1});
    CHECK(z5.property_d_holds);
    CHECK(z5.extremal_count == 10);

    auto z32 = check_property_D({3, 2});
    CHECK(z32.property_d_holds);
    CHECK(z32.extremal_count == 54);
    CHECK(z32.violations.empty());
}

TEST_CASE("check_property_D is deterministic across thread counts") {
    auto a = check_property_D({3, 2}, kDefaultSearchCap, 1);
    auto b = check_property_D({3, 2}, kDefaultSearchCap, 8);
    CHECK(a.extremal_count == b.extremal_count);
    CHECK(a.nodes == b.nodes);
    REQUIRE(a.extremals.size() == b.extremals.size());
    for (std::size_t i = 0; i < a.extremals.size(); ++i)
        CHECK(a.extremals[i].counts == b.extremals[i].counts);
}

TEST_CASE("find_distinct_zero_sum") {
    GroupSpec g{3, 2};
    auto all = all_elements(g);
    auto found = find_distinct_zero_sum(all, 3);
    REQUIRE(found.has_value());
    CHECK(found->size() == 3);
    CHECK(((*found)[0] + (*found)[1] + (*found)[2]).is_zero());
    CHECK(!((*found)[0] == (*found)[1]));
    CHECK(!((*found)[1] == (*found)[2]));

    std::vector<GroupVector> small{all[0], all[3]};  // {0, e1}
    CHECK(!find_distinct_zero_sum(small, 3).has_value());

    std::vector<GroupVector> four{all[0], all[3], all[1], all[4]};  // (0,0),(1,0),(0,1),(1,1)
    CHECK(!find_distinct_zero_sum(four, 3).has_value());

    // p = 5 over F_5: 0+1+2+3+4 = 10 = 0
    GroupSpec z5{5, 1};
    auto l5 = all_elements(z5);
    auto w5 = find_distinct_zero_sum(l5, 5);
    REQUIRE(w5.has_value());
    GroupVector sum = (*w5)[0];
    for (std::size_t i = 1; i < w5->size(); ++i) sum = sum + (*w5)[i];
    CHECK(sum.is_zero());
}

TEST_CASE("harborth witness is zero-sum free") {
    auto w31 = harborth_witness(3, 1);
    CHECK(w31.length() == 4);  // {0:2, 1:2}
    CHECK(!has_zero_sum_subseq(w31, 3).has_value());

    auto w22 = harborth_witness(2, 2);
    CHECK(w22.length() == 4);  // all four vectors once
    CHECK(!has_zero_sum_subseq(w22, 2).has_value());

    auto w32 = harborth_witness(3, 2);
    CHECK(w32.length() == 8);  // matches Reiher's s - 1
    CHECK(!has_zero_sum_subseq(w32, 3).has_value());
}

TEST_CASE("diagonal restriction check") {
    GroupSpec g{3, 2};
    auto all = all_elements(g);
    std::vector<GroupVector> four{all[0], all[3], all[1], all[4]};
    CHECK(diagonal_restriction_check(four, 3));

    std::vector<GroupVector> single{all[5]};
    CHECK(diagonal_restriction_check(single, 3));

    // the full line F_3 contains 0+1+2 = 0
    auto line = all_elements({3, 1});
    CHECK_THROWS_AS(diagonal_restriction_check(line, 3), std::invalid_argument);
}

TEST_CASE("identity sweeps pass on small grids with exact tuple counts") {
    auto d = verify_distinctness(3, 3);
    CHECK(d.pass);
    CHECK(d.tuples == 27);

    auto r = verify_R_piecewise(4, 3);
    CHECK(r.pass);
    CHECK(r.tuples == 81);

    auto e = verify_R_expansion(4, 3);
    CHECK(e.pass);
    CHECK(e.tuples == 81);

    auto i31 = verify_I(3, 1);
    CHECK(i31.pass);
    CHECK(i31.tuples == 27);

    auto e31 = verify_E(3, 1);
    CHECK(e31.pass);
    CHECK(e31.tuples == 27);

    auto e41 = verify_E(4, 1);
    CHECK(e41.pass);
    CHECK(e41.tuples == 256);
}

TEST_CASE("infeasible sweeps are refused with the tuple count") {
    auto refused = verify_I(7, 3);  // (7^3)^7 = 7^21 tuples
    CHECK(!refused.pass);
    CHECK(refused.mismatch.find("refused") != std::string::npos);
    CHECK(*sweep_tuple_count(343, 7) > kMaxSweepTuples);  // 7^21 tuples
    CHECK(*sweep_tuple_count(9, 9) == 387420489ull);
    CHECK(sweep_tuple_count(1u << 16, 8) == std::nullopt);  // uint64 overflow
}

TEST_CASE("sequence files round-trip") {
    auto w = harborth_witness(3, 2);
    std::stringstream ss;
    write_sequence(ss, w);
    auto back = read_sequence(ss);
    CHECK(back.group == w.group);
    CHECK(back.counts == w.counts);

    std::stringstream bad1("0,1\n");
    CHECK_THROWS_AS(read_sequence(bad1), std::invalid_argument);
    std::stringstream bad2("group 3 2\n0\n");
    CHECK_THROWS_AS(read_sequence(bad2), std::invalid_argument);
    std::stringstream bad3("group 3 2\n0,7\n");
    CHECK_THROWS_AS(read_sequence(bad3), std::invalid_argument);
    std::stringstream commented("# witness\ngroup 3 1\n# body\n1\n1\n2\n2\n");
    auto s = read_sequence(commented);
    CHECK(s.length() == 4);
    CHECK(!has_zero_sum_subseq(s, 3).has_value());
}
