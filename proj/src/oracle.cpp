#include "zerosum/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <chrono>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "zerosum/tensors.hpp"

namespace zerosum {

std::size_t SequenceMultiset::length() const {
    std::size_t len = 0;
    for (const auto& [v, m] : counts) len += m;
    return len;
}

void SequenceMultiset::add(const GroupVector& v, unsigned mult) {
    if (v.group() != group) throw std::invalid_argument("SequenceMultiset: element outside group");
    if (mult) counts[v] += mult;
}

namespace {

// flat addition table for search inner loops
struct GroupTable {
    GroupSpec spec;
    std::uint32_t order;
    std::vector<std::uint32_t> add;  // add[a * order + b]
    std::vector<std::uint32_t> neg;

    explicit GroupTable(GroupSpec g) : spec(g) {
        std::uint64_t o = g.order_u64();
        if (o > 1024) throw std::invalid_argument("oracle: group order beyond desk scale (1024)");
        order = static_cast<std::uint32_t>(o);
        add.resize(std::size_t{order} * order);
        neg.resize(order);
        std::vector<GroupVector> els = all_elements(g);
        for (std::uint32_t a = 0; a < order; ++a) {
            neg[a] = static_cast<std::uint32_t>((-els[a]).flat_index());
            for (std::uint32_t b = 0; b < order; ++b)
                add[std::size_t{a} * order + b] = static_cast<std::uint32_t>((els[a] + els[b]).flat_index());
        }
    }

    std::uint32_t sum(std::uint32_t a, std::uint32_t b) const { return add[std::size_t{a} * order + b]; }
};

// reach[c * order + g] = 1 iff some size-c sub-multiset sums to element g
struct ReachDP {
    std::uint32_t order{};
    unsigned window{};  // zero-sum window length k
    std::vector<std::uint8_t> bits;

    ReachDP(std::uint32_t order_, unsigned window_) : order(order_), window(window_) {
        bits.assign(std::size_t{window + 1} * order, 0);
        bits[0] = 1;  // empty selection sums to zero
    }

    void add_copy(const GroupTable& t, std::uint32_t e) {
        for (unsigned c = window; c-- > 0;) {
            const std::uint8_t* src = &bits[std::size_t{c} * order];
            std::uint8_t* dst = &bits[std::size_t{c + 1} * order];
            for (std::uint32_t g = 0; g < order; ++g)
                if (src[g]) dst[t.sum(g, e)] = 1;
        }
    }

    bool has_window_zero_sum() const { return bits[std::size_t{window} * order] != 0; }
};

SequenceMultiset multiset_from_mults(const GroupTable& t, const std::vector<std::uint8_t>& mults) {
    SequenceMultiset s;
    s.group = t.spec;
    for (std::uint32_t e = 0; e < t.order; ++e)
        if (mults[e]) s.counts.emplace(GroupVector::from_flat(t.spec, e), mults[e]);
    return s;
}

void run_tasks(unsigned threads, std::size_t n_tasks, const std::function<void(std::size_t)>& fn) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n_tasks)));
    if (threads == 1) {
        for (std::size_t i = 0; i < n_tasks; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n_tasks; i = next.fetch_add(1)) fn(i);
        });
    for (auto& th : pool) th.join();
}

struct TaskResult {
    std::uint64_t nodes{0};
    bool complete{true};
    unsigned best_len{0};
    std::vector<std::uint8_t> best_mults;                // for exact_s, empty if seed never beaten
    std::uint64_t extremal_count{0};                     // for property-D enumeration
    std::vector<std::vector<std::uint8_t>> extremals;    // capped
    std::vector<std::vector<std::uint8_t>> violations;   // capped
};

// Canonical depth-first enumeration of multisets over the group with
// per-element multiplicity at most k-1, in element order, with the zero-sum
// window DP maintained incrementally. Two modes:
//   maximize:   track max zero-sum-free length (prune <= bound)
//   enumerate:  collect all zero-sum-free multisets of length exactly target
struct Searcher {
    const GroupTable& table;
    unsigned k;
    std::uint64_t budget;
    bool enumerate{false};
    unsigned target{0};  // enumerate mode

    TaskResult res;
    std::vector<std::uint8_t> mults;
    unsigned local_best{0};

    Searcher(const GroupTable& t, unsigned k_, std::uint64_t budget_)
        : table(t), k(k_), budget(budget_), mults(t.order, 0) {}

    void record_extremal() {
        ++res.extremal_count;
        bool uniform = true;
        for (auto m : mults)
            if (m != 0 && m != k - 1) {
                uniform = false;
                break;
            }
        auto& sink = uniform ? res.extremals : res.violations;
        if (sink.size() < kMaxStoredExtremals) sink.push_back(mults);
    }

    void dfs(std::uint32_t i, unsigned len, const ReachDP& reach) {
        if (++res.nodes > budget) {
            res.complete = false;
            return;
        }
        if (enumerate) {
            if (len == target) {
                record_extremal();
                return;
            }
            if (len > target) return;
        } else if (len > local_best) {
            local_best = len;
            res.best_len = len;
            res.best_mults = mults;
        }
        if (i == table.order) return;
        std::uint64_t room = std::uint64_t{table.order - i} * (k - 1);
        if (enumerate ? (len + room < target) : (len + room <= local_best)) return;

        dfs(i + 1, len, reach);
        if (!res.complete) return;

        ReachDP scratch = reach;
        for (unsigned m = 1; m <= k - 1; ++m) {
            scratch.add_copy(table, i);
            if (scratch.has_window_zero_sum()) break;  // more copies keep the zero-sum
            if (enumerate && len + m > target) break;
            mults[i] = static_cast<std::uint8_t>(m);
            dfs(i + 1, len + m, scratch);
            if (!res.complete) break;
        }
        mults[i] = 0;
    }
};

struct TaskSpec {
    std::uint8_t m0, m1;
};

// Top two search-tree levels become independent tasks; the task list depends
// only on the group, so answers cannot depend on the thread count.
std::vector<TaskSpec> make_tasks(const GroupTable& t, unsigned k) {
    std::vector<TaskSpec> tasks;
    if (t.order == 1) return tasks;
    for (unsigned m0 = 0; m0 < k; ++m0)
        for (unsigned m1 = 0; m1 < k && t.order > 1; ++m1)
            tasks.push_back({static_cast<std::uint8_t>(m0), static_cast<std::uint8_t>(m1)});
    return tasks;
}

// Applies the fixed top-level multiplicities; returns false if they already
// contain a zero-sum window (task yields nothing).
bool apply_task(const GroupTable& table, const TaskSpec& task, ReachDP& reach,
                std::vector<std::uint8_t>& mults, unsigned& len) {
    struct Fix {
        std::uint32_t element;
        std::uint8_t mult;
    } fixes[2] = {{0, task.m0}, {1, task.m1}};
    for (const auto& fix : fixes) {
        for (unsigned c = 0; c < fix.mult; ++c) {
            reach.add_copy(table, fix.element);
            if (reach.has_window_zero_sum()) return false;
        }
        mults[fix.element] = fix.mult;
        len += fix.mult;
    }
    return true;
}

}  // namespace

std::optional<std::vector<GroupVector>> has_zero_sum_subseq(const SequenceMultiset& s,
                                                            unsigned length) {
    if (length < 1) throw std::invalid_argument("has_zero_sum_subseq: length must be >= 1");
    GroupTable table(s.group);
    const std::uint32_t order = table.order;

    struct Item {
        std::uint32_t element;
        unsigned mult;
    };
    std::vector<Item> items;
    for (const auto& [v, m] : s.counts)
        items.push_back({static_cast<std::uint32_t>(v.flat_index()), m});
    std::sort(items.begin(), items.end(),
              [](const Item& a, const Item& b) { return a.element < b.element; });

    // layers[t] = DP over the first t items
    std::vector<std::vector<std::uint8_t>> layers;
    layers.reserve(items.size() + 1);
    std::vector<std::uint8_t> cur(std::size_t{length + 1} * order, 0);
    cur[0] = 1;
    layers.push_back(cur);
    for (const auto& item : items) {
        std::vector<std::uint8_t> next = cur;
        for (unsigned j = 1; j <= std::min(item.mult, length); ++j) {
            // add the j-th copy
            for (unsigned c = length; c-- > 0;) {
                const std::uint8_t* src = &cur[std::size_t{c} * order];
                std::uint8_t* dst = &next[std::size_t{c + 1} * order];
                for (std::uint32_t g = 0; g < order; ++g)
                    if (src[g]) dst[table.sum(g, item.element)] = 1;
            }
            cur = next;
        }
        layers.push_back(cur);
    }
    if (!layers.back()[std::size_t{length} * order]) return std::nullopt;

    // backtrack: smallest feasible copy count per item, last item first
    std::vector<GroupVector> witness;
    unsigned c = length;
    std::uint32_t g = 0;
    for (std::size_t t = items.size(); t-- > 0;) {
        const auto& prev = layers[t];
        for (unsigned j = 0; j <= std::min(items[t].mult, c); ++j) {
            std::uint32_t back = g;
            for (unsigned step = 0; step < j; ++step) back = table.sum(back, table.neg[items[t].element]);
            if (prev[std::size_t{c - j} * order + back]) {
                for (unsigned step = 0; step < j; ++step)
                    witness.push_back(GroupVector::from_flat(s.group, items[t].element));
                c -= j;
                g = back;
                break;
            }
        }
    }
    assert(c == 0 && g == 0);
    std::sort(witness.begin(), witness.end());
    return witness;
}

SearchReport exact_s(GroupSpec g, std::uint64_t cap, unsigned threads) {
    auto t0 = std::chrono::steady_clock::now();
    GroupTable table(g);
    const unsigned k = g.k;

    SearchReport rep;
    rep.task = "s";
    rep.group = g;
    rep.threads = std::max(1u, threads);
    rep.cap = cap;

    // verified seed: the Harborth witness is zero-sum free, so pruning can
    // assume its length from the start
    SequenceMultiset seed = harborth_witness(g.k, g.n);
    unsigned seed_len = static_cast<unsigned>(seed.length());

    auto tasks = make_tasks(table, k);
    std::vector<TaskResult> results(tasks.size());
    std::uint64_t budget = std::max<std::uint64_t>(1, cap / std::max<std::size_t>(1, tasks.size()));

    run_tasks(rep.threads, tasks.size(), [&](std::size_t ti) {
        Searcher searcher(table, k, budget);
        searcher.local_best = seed_len;
        ReachDP reach(table.order, k);
        unsigned len = 0;
        if (apply_task(table, tasks[ti], reach, searcher.mults, len))
            searcher.dfs(2, len, reach);
        results[ti] = std::move(searcher.res);
    });

    unsigned best = seed_len;
    const std::vector<std::uint8_t>* best_mults = nullptr;
    for (const auto& r : results) {
        rep.nodes += r.nodes;
        rep.complete = rep.complete && r.complete;
        if (r.best_len > best || (r.best_len == best && best_mults && !r.best_mults.empty() &&
                                  r.best_mults < *best_mults)) {
            best = r.best_len;
            best_mults = &r.best_mults;
        }
    }
    rep.value = best + 1;
    rep.witness = best_mults ? multiset_from_mults(table, *best_mults) : seed;
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

SearchReport check_property_D(GroupSpec g, std::uint64_t cap, unsigned threads) {
    auto t0 = std::chrono::steady_clock::now();
    SearchReport rep = exact_s(g, cap, threads);
    rep.task = "property-d";
    if (!rep.complete) return rep;

    GroupTable table(g);
    const unsigned k = g.k;
    const unsigned target = static_cast<unsigned>(rep.value - 1);

    auto tasks = make_tasks(table, k);
    std::vector<TaskResult> results(tasks.size());
    std::uint64_t budget = std::max<std::uint64_t>(1, cap / std::max<std::size_t>(1, tasks.size()));

    run_tasks(rep.threads, tasks.size(), [&](std::size_t ti) {
        Searcher searcher(table, k, budget);
        searcher.enumerate = true;
        searcher.target = target;
        ReachDP reach(table.order, k);
        unsigned len = 0;
        if (apply_task(table, tasks[ti], reach, searcher.mults, len))
            searcher.dfs(2, len, reach);
        results[ti] = std::move(searcher.res);
    });

    std::vector<std::vector<std::uint8_t>> extremals, violations;
    for (auto& r : results) {
        rep.nodes += r.nodes;
        rep.complete = rep.complete && r.complete;
        rep.extremal_count += r.extremal_count;
        for (auto& e : r.extremals)
            if (extremals.size() < kMaxStoredExtremals) extremals.push_back(std::move(e));
        for (auto& v : r.violations)
            if (violations.size() < kMaxStoredExtremals) violations.push_back(std::move(v));
    }
    std::sort(extremals.begin(), extremals.end());
    std::sort(violations.begin(), violations.end());
    rep.property_d_holds = violations.empty();
    for (const auto& e : extremals) rep.extremals.push_back(multiset_from_mults(table, e));
    for (const auto& v : violations) rep.violations.push_back(multiset_from_mults(table, v));
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

namespace {

void require_uniform_set(const std::vector<GroupVector>& a) {
    for (const auto& v : a)
        if (v.group() != a.front().group())
            throw std::invalid_argument("element set: mixed groups");
}

}  // namespace

std::optional<std::vector<GroupVector>> find_distinct_zero_sum(const std::vector<GroupVector>& a,
                                                               unsigned p) {
    if (!is_prime(p)) throw std::invalid_argument("find_distinct_zero_sum: p must be prime");
    if (a.empty()) return std::nullopt;
    require_uniform_set(a);
    std::vector<GroupVector> set = a;
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    if (set.size() < p) return std::nullopt;

    auto lookup_after = [&](const GroupVector& v, std::size_t after) -> bool {
        auto it = std::lower_bound(set.begin() + after + 1, set.end(), v);
        return it != set.end() && *it == v;
    };

    if (p == 3) {
        // pair-complement shortcut: x3 = -(x1 + x2)
        for (std::size_t i = 0; i < set.size(); ++i)
            for (std::size_t j = i + 1; j < set.size(); ++j) {
                GroupVector need = -(set[i] + set[j]);
                if (set[j] < need && lookup_after(need, j)) return {{set[i], set[j], need}};
            }
        return std::nullopt;
    }

    std::vector<GroupVector> chosen;
    std::function<std::optional<std::vector<GroupVector>>(std::size_t, const GroupVector&)> rec =
        [&](std::size_t next, const GroupVector& partial) -> std::optional<std::vector<GroupVector>> {
        if (chosen.size() == p - 1) {
            GroupVector need = -partial;
            if (chosen.back() < need && lookup_after(need, next - 1)) {
                auto out = chosen;
                out.push_back(need);
                return out;
            }
            return std::nullopt;
        }
        for (std::size_t i = next; i + (p - 1 - chosen.size()) <= set.size(); ++i) {
            chosen.push_back(set[i]);
            if (auto w = rec(i + 1, partial + set[i])) return w;
            chosen.pop_back();
        }
        return std::nullopt;
    };
    GroupVector zero = GroupVector::from_flat(set.front().group(), 0);
    return rec(0, zero);
}

SequenceMultiset harborth_witness(std::uint32_t k, std::uint32_t n) {
    GroupSpec g{k, n};
    SequenceMultiset s;
    s.group = g;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        std::vector<std::uint32_t> coords(n);
        for (std::uint32_t i = 0; i < n; ++i) coords[i] = (mask >> (n - 1 - i)) & 1u;
        s.counts.emplace(GroupVector(k, std::move(coords)), k - 1);
    }
    if (g.order_u64() <= 512 && has_zero_sum_subseq(s, k))
        throw std::logic_error("harborth_witness: construction failed its own check");
    return s;
}

bool diagonal_restriction_check(const std::vector<GroupVector>& a, unsigned p) {
    if (a.empty()) return true;
    require_uniform_set(a);
    if (auto bad = find_distinct_zero_sum(a, p)) {
        std::ostringstream os;
        os << "diagonal_restriction_check: precondition fails, distinct zero-sum tuple:";
        for (const auto& v : *bad) os << " (" << v.to_string() << ")";
        throw std::invalid_argument(os.str());
    }
    double size = 1;
    for (unsigned i = 0; i < p; ++i) size *= static_cast<double>(a.size());
    if (size > 1e6)
        throw std::invalid_argument("diagonal_restriction_check: |A|^p exceeds 1e6 tuples");

    std::vector<std::size_t> idx(p, 0);
    Tuple t(p, a[0]);
    while (true) {
        for (unsigned i = 0; i < p; ++i) t[i] = a[idx[i]];
        bool diag = std::all_of(idx.begin(), idx.end(), [&](std::size_t v) { return v == idx[0]; });
        if (eval_I_p(t) != (diag ? 1u : 0u)) return false;
        unsigned pos = p;
        while (pos-- > 0) {
            if (++idx[pos] < a.size()) break;
            idx[pos] = 0;
            if (pos == 0) return true;
        }
    }
}

// ---- exhaustive identity sweeps ---------------------------------------------

std::optional<std::uint64_t> sweep_tuple_count(std::uint64_t domain, unsigned k) {
    std::uint64_t total = 1;
    for (unsigned i = 0; i < k; ++i) {
        if (domain != 0 && total > UINT64_MAX / domain) return std::nullopt;
        total *= domain;
    }
    return total;
}

namespace {

IdentityCheck refused(std::string name, std::uint64_t domain, unsigned k) {
    IdentityCheck c;
    c.name = std::move(name);
    c.pass = false;
    auto tuples = sweep_tuple_count(domain, k);
    std::ostringstream os;
    os << "refused: " << domain << "^" << k << " = ";
    if (tuples)
        os << *tuples;
    else
        os << "(overflow)";
    os << " tuples exceeds the sweep budget " << kMaxSweepTuples;
    c.mismatch = os.str();
    return c;
}

bool sweep_feasible(std::uint64_t domain, unsigned k) {
    auto t = sweep_tuple_count(domain, k);
    return t && *t <= kMaxSweepTuples;
}

// odometer over [domain]^k invoking fn for each tuple of indices
template <typename Fn>
std::uint64_t for_each_tuple(std::uint64_t domain, unsigned k, Fn&& fn) {
    std::vector<std::uint32_t> idx(k, 0);
    std::uint64_t count = 0;
    while (true) {
        fn(idx);
        ++count;
        unsigned pos = k;
        while (pos-- > 0) {
            if (++idx[pos] < domain) break;
            idx[pos] = 0;
            if (pos == 0) return count;
        }
    }
}

std::string tuple_string(const Tuple& t) {
    std::ostringstream os;
    for (std::size_t i = 0; i < t.size(); ++i) os << (i ? " (" : "(") << t[i].to_string() << ")";
    return os.str();
}

// exact integer (-1)^(k-1) (k-1)! sum_{j=2}^{k-1} 1/j
long long all_equal_constant(unsigned k) {
    long long fact = 1;
    for (unsigned i = 2; i < k; ++i) fact *= i;
    long long sum = 0;
    for (unsigned j = 2; j < k; ++j) sum += fact / j;
    return (k % 2 == 0) ? -sum : sum;
}

}  // namespace

IdentityCheck verify_distinctness(unsigned k, unsigned set_size) {
    IdentityCheck c;
    c.name = "distinctness-sum k=" + std::to_string(k) + " |X|=" + std::to_string(set_size);
    if (!sweep_feasible(set_size, k) || k > kMaxSymmetricGroup)
        return refused(c.name, set_size, k);
    const std::uint32_t mod = std::max(2u, set_size);
    c.pass = true;
    Tuple t(k, GroupVector(mod, {0}));
    c.tuples = for_each_tuple(set_size, k, [&](const std::vector<std::uint32_t>& idx) {
        if (!c.pass) return;
        for (unsigned i = 0; i < k; ++i) t[i] = GroupVector(mod, {idx[i]});
        auto sorted = idx;
        std::sort(sorted.begin(), sorted.end());
        bool distinct = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
        if (distinctness_sum(t) != (distinct ? 1 : 0)) {
            c.pass = false;
            c.mismatch = tuple_string(t);
        }
    });
    return c;
}

IdentityCheck verify_R_piecewise(unsigned k, unsigned set_size) {
    IdentityCheck c;
    c.name = "R-piecewise k=" + std::to_string(k) + " |X|=" + std::to_string(set_size);
    if (!sweep_feasible(set_size, k) || k > kMaxSymmetricGroup || k < 3)
        return refused(c.name, set_size, k);
    const std::uint32_t mod = std::max(2u, set_size);
    const long long constant = all_equal_constant(k);
    const auto& group = symmetric_group(k);
    c.pass = true;
    Tuple t(k, GroupVector(mod, {0}));
    c.tuples = for_each_tuple(set_size, k, [&](const std::vector<std::uint32_t>& idx) {
        if (!c.pass) return;
        for (unsigned i = 0; i < k; ++i) t[i] = GroupVector(mod, {idx[i]});
        auto sorted = idx;
        std::sort(sorted.begin(), sorted.end());
        auto values = static_cast<unsigned>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
        long long expected = 0;
        if (values == k) {
            expected = 1;
        } else if (values == 1) {
            expected = constant;
        } else if (values == 2) {
            long long stabilizers = 0;
            for (const auto& sigma : group)
                if (sigma.cycle_count == 2 && eval_f_sigma(sigma, t)) ++stabilizers;
            expected = (k % 2 == 0) ? -stabilizers : stabilizers;
        }
        if (eval_R_k(t) != expected) {
            c.pass = false;
            c.mismatch = tuple_string(t);
        }
    });
    return c;
}

IdentityCheck verify_R_expansion(unsigned k, unsigned set_size) {
    IdentityCheck c;
    c.name = "R-delta-expansion k=" + std::to_string(k) + " |X|=" + std::to_string(set_size);
    if (!sweep_feasible(set_size, k) || k > kMaxSymmetricGroup || k < 3)
        return refused(c.name, set_size, k);
    const std::uint32_t mod = std::max(2u, set_size);
    const auto terms = expand_R_k(k);
    c.pass = true;
    Tuple t(k, GroupVector(mod, {0}));
    c.tuples = for_each_tuple(set_size, k, [&](const std::vector<std::uint32_t>& idx) {
        if (!c.pass) return;
        for (unsigned i = 0; i < k; ++i) t[i] = GroupVector(mod, {idx[i]});
        if (eval_delta_combination(terms, t) != eval_R_k(t)) {
            c.pass = false;
            c.mismatch = tuple_string(t);
        }
    });
    return c;
}

IdentityCheck verify_I(unsigned p, unsigned n) {
    IdentityCheck c;
    c.name = "I-indicator p=" + std::to_string(p) + " n=" + std::to_string(n);
    GroupSpec g{p, n};
    std::uint64_t domain = g.order_u64();
    if (!sweep_feasible(domain, p) || p > kMaxSymmetricGroup) return refused(c.name, domain, p);
    auto els = all_elements(g);
    c.pass = true;
    Tuple t(p, els[0]);
    c.tuples = for_each_tuple(domain, p, [&](const std::vector<std::uint32_t>& idx) {
        if (!c.pass) return;
        for (unsigned i = 0; i < p; ++i) t[i] = els[idx[i]];
        auto sorted = idx;
        std::sort(sorted.begin(), sorted.end());
        bool all_equal = sorted.front() == sorted.back();
        bool distinct = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
        bool zero_sum = true;
        for (unsigned coord = 0; coord < n && zero_sum; ++coord) {
            std::uint64_t s = 0;
            for (const auto& v : t) s += v.coords[coord];
            zero_sum = (s % p == 0);
        }
        std::uint32_t expected = (all_equal || (distinct && zero_sum)) ? 1 : 0;
        if (eval_I_p(t) != expected) {
            c.pass = false;
            c.mismatch = tuple_string(t);
        }
    });
    return c;
}

IdentityCheck verify_E(unsigned q_value, unsigned n) {
    IdentityCheck c;
    c.name = "E-zero-sum q=" + std::to_string(q_value) + " n=" + std::to_string(n);
    PrimePower q = PrimePower::from_value(q_value);
    GroupSpec g{q_value, n};
    const std::uint64_t domain = g.order_u64();
    if (!sweep_feasible(domain, q_value)) return refused(c.name, domain, q_value);

    const auto p = static_cast<std::uint32_t>(q.p);
    const std::uint32_t qq = q_value;
    auto els = all_elements(g);

    // c[x][m] = (-1)^m C(x,m) mod p, and its prefix sums over m
    std::vector<std::vector<std::uint32_t>> coeff(qq, std::vector<std::uint32_t>(qq));
    std::vector<std::vector<std::uint32_t>> coeff_prefix(qq, std::vector<std::uint32_t>(qq));
    for (std::uint32_t x = 0; x < qq; ++x) {
        std::uint32_t acc = 0;
        for (std::uint32_t m = 0; m < qq; ++m) {
            std::uint32_t b = binom_mod_p(x, m, q);
            coeff[x][m] = (m % 2) ? (p - b) % p : b;
            acc = (acc + coeff[x][m]) % p;
            coeff_prefix[x][m] = acc;
        }
    }

    // per-coordinate DP state shared along tuple prefixes; the last position
    // folds with the prefix-sum table (only sum_s f[s] is needed at a leaf)
    std::vector<std::vector<std::uint32_t>> state(q_value + 1,
                                                  std::vector<std::uint32_t>(std::size_t{n} * qq, 0));
    std::vector<std::vector<std::uint32_t>> coord_sum(q_value + 1, std::vector<std::uint32_t>(n, 0));
    for (unsigned coord = 0; coord < n; ++coord) state[0][std::size_t{coord} * qq] = 1;

    std::uint64_t tuples = 0;
    bool pass = true;
    std::string mismatch;

    // sampled cross-check against the public evaluator
    const std::uint64_t total = *sweep_tuple_count(domain, q_value);
    const std::uint64_t sample_stride = std::max<std::uint64_t>(1, total / 512);
    Tuple sample_tuple(q_value, els[0]);
    std::vector<std::uint32_t> choice(q_value, 0);

    std::function<void(unsigned)> rec = [&](unsigned depth) {
        if (!pass) return;
        if (depth == q_value - 1) {
            const auto& f = state[depth];
            const auto& sums = coord_sum[depth];
            for (std::uint64_t e = 0; e < domain; ++e) {
                const auto& v = els[e];
                std::uint32_t value = 1;
                bool zero_sum = true;
                for (unsigned coord = 0; coord < n && (value || zero_sum); ++coord) {
                    const std::uint32_t x = v.coords[coord];
                    const std::uint32_t* frow = &f[std::size_t{coord} * qq];
                    std::uint64_t acc = 0;
                    for (std::uint32_t u = 0; u < qq; ++u)
                        acc += std::uint64_t{frow[u]} * coeff_prefix[x][qq - 1 - u];
                    value = value * static_cast<std::uint32_t>(acc % p) % p;
                    zero_sum = zero_sum && ((sums[coord] + x) % qq == 0);
                }
                ++tuples;
                if (value != (zero_sum ? 1u : 0u)) {
                    pass = false;
                    choice[depth] = static_cast<std::uint32_t>(e);
                    Tuple t;
                    for (unsigned i = 0; i < q_value; ++i) t.push_back(els[choice[i]]);
                    mismatch = tuple_string(t);
                    return;
                }
                if (tuples % sample_stride == 0) {
                    choice[depth] = static_cast<std::uint32_t>(e);
                    for (unsigned i = 0; i < q_value; ++i) sample_tuple[i] = els[choice[i]];
                    if (eval_E_q(sample_tuple, q) != (zero_sum ? 1u : 0u)) {
                        pass = false;
                        mismatch = "eval_E_q disagrees at " + tuple_string(sample_tuple);
                        return;
                    }
                }
            }
            return;
        }
        for (std::uint64_t e = 0; e < domain && pass; ++e) {
            const auto& v = els[e];
            choice[depth] = static_cast<std::uint32_t>(e);
            auto& next = state[depth + 1];
            const auto& cur = state[depth];
            for (unsigned coord = 0; coord < n; ++coord) {
                const std::uint32_t x = v.coords[coord];
                const std::uint32_t* frow = &cur[std::size_t{coord} * qq];
                std::uint32_t* grow = &next[std::size_t{coord} * qq];
                for (std::uint32_t s = 0; s < qq; ++s) {
                    std::uint64_t acc = 0;
                    for (std::uint32_t m = 0; m <= s; ++m)
                        acc += std::uint64_t{frow[s - m]} * coeff[x][m];
                    grow[s] = static_cast<std::uint32_t>(acc % p);
                }
                coord_sum[depth + 1][coord] = (coord_sum[depth][coord] + x) % qq;
            }
            rec(depth + 1);
        }
    };
    rec(0);

    c.tuples = tuples;
    c.pass = pass;
    c.mismatch = mismatch;
    return c;
}

std::vector<IdentityCheck> verify_identities_all_small() {
    std::vector<IdentityCheck> out;
    for (unsigned k : {3u, 4u, 5u}) {
        out.push_back(verify_distinctness(k, 5));
        out.push_back(verify_R_piecewise(k, 5));
        out.push_back(verify_R_expansion(k, 5));
    }
    out.push_back(verify_I(3, 1));
    out.push_back(verify_I(3, 2));
    out.push_back(verify_I(5, 1));
    for (unsigned q : {2u, 3u, 4u, 5u, 8u, 9u}) out.push_back(verify_E(q, 1));
    for (unsigned q : {2u, 3u, 4u}) out.push_back(verify_E(q, 2));
    return out;
}

// ---- sequence file format ---------------------------------------------------

void write_sequence(std::ostream& os, const SequenceMultiset& s) {
    os << "# zero-sum sequence, length " << s.length() << "\n";
    os << "group " << s.group.k << " " << s.group.n << "\n";
    for (const auto& [v, m] : s.counts)
        for (unsigned i = 0; i < m; ++i) os << v.to_string() << "\n";
}

SequenceMultiset read_sequence(std::istream& is) {
    SequenceMultiset s;
    std::string line;
    bool have_header = false;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        if (!have_header) {
            std::string tag;
            std::uint32_t k = 0, n = 0;
            if (!(ls >> tag >> k >> n) || tag != "group")
                throw std::invalid_argument("sequence file line " + std::to_string(lineno) +
                                            ": expected header 'group k n'");
            s.group = GroupSpec{k, n};
            have_header = true;
            continue;
        }
        std::vector<std::uint32_t> coords;
        std::string field;
        std::istringstream fields(line);
        while (std::getline(fields, field, ',')) coords.push_back(std::stoul(field));
        if (coords.size() != s.group.n)
            throw std::invalid_argument("sequence file line " + std::to_string(lineno) +
                                        ": expected " + std::to_string(s.group.n) + " coordinates");
        for (auto c : coords)
            if (c >= s.group.k)
                throw std::invalid_argument("sequence file line " + std::to_string(lineno) +
                                            ": coordinate outside [0, k)");
        s.add(GroupVector(s.group.k, coords));
    }
    if (!have_header) throw std::invalid_argument("sequence file: missing 'group k n' header");
    return s;
}

}  // namespace zerosum
