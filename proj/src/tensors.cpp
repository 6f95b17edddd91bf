#include "zerosum/tensors.hpp"

#include <algorithm>
#include <array>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace zerosum {

Permutation Permutation::from_images(std::vector<std::uint8_t> images) {
    Permutation p;
    p.images = std::move(images);
    const auto k = p.images.size();
    std::vector<bool> seen(k, false);
    for (std::size_t i = 0; i < k; ++i) {
        if (p.images[i] >= k || seen[p.images[i]])
            throw std::invalid_argument("Permutation: images are not a bijection");
        seen[p.images[i]] = true;
    }
    std::fill(seen.begin(), seen.end(), false);
    for (std::size_t i = 0; i < k; ++i) {
        if (seen[i]) continue;
        std::vector<std::uint8_t> cycle;
        std::size_t j = i;
        while (!seen[j]) {
            seen[j] = true;
            cycle.push_back(static_cast<std::uint8_t>(j));
            j = p.images[j];
        }
        p.cycles.push_back(std::move(cycle));
    }
    p.cycle_count = static_cast<unsigned>(p.cycles.size());
    p.sign = ((k - p.cycle_count) % 2 == 0) ? 1 : -1;
    return p;
}

const std::vector<Permutation>& symmetric_group(unsigned k) {
    if (k < 1 || k > kMaxSymmetricGroup)
        throw std::invalid_argument("symmetric_group: k must be in [1, 8]");
    static std::array<std::vector<Permutation>, kMaxSymmetricGroup + 1> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto& group = cache[k];
    if (group.empty()) {
        std::vector<std::uint8_t> im(k);
        std::iota(im.begin(), im.end(), std::uint8_t{0});
        do {
            group.push_back(Permutation::from_images(im));
        } while (std::next_permutation(im.begin(), im.end()));
    }
    return group;
}

namespace {

void require_uniform(const Tuple& t) {
    if (t.empty()) throw std::invalid_argument("tensor: empty tuple");
    for (const auto& v : t)
        if (v.modulus != t[0].modulus || v.coords.size() != t[0].coords.size())
            throw std::invalid_argument("tensor: tuple entries live in different groups");
}

}  // namespace

std::uint32_t eval_F_p(const Tuple& t) {
    require_uniform(t);
    const std::uint32_t p = t[0].modulus;
    if (!is_prime(p)) throw std::invalid_argument("eval_F_p: modulus must be prime");
    if (t.size() != p) throw std::invalid_argument("eval_F_p: tuple length must equal p");
    const std::size_t n = t[0].coords.size();
    std::uint64_t prod = 1;
    for (std::size_t i = 0; i < n && prod; ++i) {
        std::uint64_t s = 0;
        for (const auto& v : t) s += v.coords[i];
        std::uint64_t term = (1 + p - pow_mod(s % p, p - 1, p)) % p;
        prod = prod * term % p;
    }
    return static_cast<std::uint32_t>(prod);
}

bool eval_f_sigma(const Permutation& sigma, const Tuple& t) {
    if (sigma.size() != t.size())
        throw std::invalid_argument("eval_f_sigma: permutation and tuple sizes differ");
    for (std::size_t i = 0; i < t.size(); ++i)
        if (!(t[sigma.images[i]] == t[i])) return false;
    return true;
}

long long distinctness_sum(const Tuple& t) {
    require_uniform(t);
    const auto k = static_cast<unsigned>(t.size());
    if (k > kMaxSymmetricGroup)
        throw std::invalid_argument("distinctness_sum: k exceeds the S_k enumeration cap");
    long long sum = 0;
    for (const auto& sigma : symmetric_group(k))
        if (eval_f_sigma(sigma, t)) sum += sigma.sign;
    return sum;
}

long long eval_R_k(const Tuple& t) {
    require_uniform(t);
    const auto k = static_cast<unsigned>(t.size());
    if (k < 3) throw std::invalid_argument("eval_R_k: k must be >= 3");
    if (k > kMaxSymmetricGroup)
        throw std::invalid_argument("eval_R_k: k exceeds the S_k enumeration cap");
    long long sum = 0;
    for (const auto& sigma : symmetric_group(k))
        if (sigma.cycle_count >= 3 && eval_f_sigma(sigma, t)) sum += sigma.sign;
    return sum;
}

std::uint32_t eval_I_p(const Tuple& t) {
    require_uniform(t);
    const std::uint32_t p = t[0].modulus;
    if (p == 2) throw std::invalid_argument("eval_I_p: p must be an odd prime");
    long long r = eval_R_k(t);  // also validates size/prime via eval_F_p below
    std::uint32_t f = eval_F_p(t);
    std::uint32_t r_mod = static_cast<std::uint32_t>(((r % p) + p) % p);
    return r_mod * f % p;
}

std::uint32_t eval_E_q(const Tuple& t, const PrimePower& q) {
    require_uniform(t);
    if (t.size() != q.q) throw std::invalid_argument("eval_E_q: tuple length must equal q");
    if (t[0].modulus != q.q) throw std::invalid_argument("eval_E_q: modulus must equal q");
    const auto p = static_cast<std::uint32_t>(q.p);
    const auto qq = static_cast<std::uint32_t>(q.q);
    const std::size_t n = t[0].coords.size();

    // c[x][m] = (-1)^m C(x, m) mod p
    std::vector<std::vector<std::uint32_t>> c(qq, std::vector<std::uint32_t>(qq));
    for (std::uint32_t x = 0; x < qq; ++x)
        for (std::uint32_t m = 0; m < qq; ++m) {
            std::uint32_t b = binom_mod_p(x, m, q);
            c[x][m] = (m % 2) ? (p - b) % p : b;
        }

    std::uint64_t prod = 1;
    for (std::size_t i = 0; i < n && prod; ++i) {
        // f[s] = sum over (m_1..m_j) with sum s of prod (-1)^{m_l} C(x_l, m_l)
        std::vector<std::uint32_t> f(qq, 0);
        f[0] = 1;
        for (const auto& v : t) {
            const auto& cx = c[v.coords[i]];
            std::vector<std::uint32_t> next(qq, 0);
            for (std::uint32_t s = 0; s < qq; ++s) {
                std::uint64_t acc = 0;
                for (std::uint32_t m = 0; m <= s; ++m) acc += std::uint64_t{f[s - m]} * cx[m];
                next[s] = static_cast<std::uint32_t>(acc % p);
            }
            f = std::move(next);
        }
        std::uint64_t total = 0;
        for (auto fv : f) total += fv;
        prod = prod * (total % p) % p;
    }
    return static_cast<std::uint32_t>(prod);
}

namespace {

long long factorial(unsigned n) {
    long long r = 1;
    for (unsigned i = 2; i <= n; ++i) r *= i;
    return r;
}

void partitions_rec(unsigned k, unsigned next, std::vector<std::vector<std::uint8_t>>& blocks,
                    std::vector<DeltaTerm>& out) {
    if (next == k) {
        if (blocks.size() < 3) return;
        long long coeff = 1;
        for (const auto& b : blocks) {
            long long f = factorial(static_cast<unsigned>(b.size()) - 1);
            coeff *= (b.size() % 2 == 0) ? -f : f;
        }
        out.push_back({blocks, coeff});
        return;
    }
    // place `next` into an existing block or open a new one; indices, not
    // references: the recursion grows the vector
    for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
        blocks[bi].push_back(static_cast<std::uint8_t>(next));
        partitions_rec(k, next + 1, blocks, out);
        blocks[bi].pop_back();
    }
    blocks.push_back({static_cast<std::uint8_t>(next)});
    partitions_rec(k, next + 1, blocks, out);
    blocks.pop_back();
}

}  // namespace

std::vector<DeltaTerm> expand_R_k(unsigned k) {
    if (k < 3 || k > kMaxSymmetricGroup)
        throw std::invalid_argument("expand_R_k: k must be in [3, 8]");
    std::vector<DeltaTerm> out;
    std::vector<std::vector<std::uint8_t>> blocks;
    partitions_rec(k, 0, blocks, out);
    return out;
}

long long eval_delta_combination(const std::vector<DeltaTerm>& terms, const Tuple& t) {
    require_uniform(t);
    long long sum = 0;
    for (const auto& term : terms) {
        bool holds = true;
        for (const auto& block : term.partition) {
            for (std::size_t j = 1; j < block.size() && holds; ++j)
                holds = t[block[j]] == t[block[0]];
            if (!holds) break;
        }
        if (holds) sum += term.coeff;
    }
    return sum;
}

}  // namespace zerosum
