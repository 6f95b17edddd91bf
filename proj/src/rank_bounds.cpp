#include "zerosum/rank_bounds.hpp"

#include <cassert>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace zerosum {

Natural monomial_count_exact(unsigned q, unsigned n, unsigned d) {
    if (q < 2) throw std::invalid_argument("monomial_count_exact: q must be >= 2");
    if (n < 1) throw std::invalid_argument("monomial_count_exact: n must be >= 1");
    // row[s] = #{ v in {0..q-1}^j : sum v = s }, truncated at s <= d
    std::vector<Natural> row(d + 1, Natural(0));
    row[0] = 1;
    std::vector<Natural> prefix(d + 2);
    for (unsigned j = 0; j < n; ++j) {
        prefix[0] = 0;
        for (unsigned s = 0; s <= d; ++s) prefix[s + 1] = prefix[s] + row[s];
        for (unsigned s = d + 1; s-- > 0;) {
            unsigned lo = s >= q ? s - (q - 1) : 0;
            row[s] = prefix[s + 1] - prefix[lo];
        }
    }
    Natural total = 0;
    for (const auto& c : row) total += c;
    return total;
}

namespace {

// log of the inner objective: log((1-x^q)/(1-x)) - e log x, with the
// geometric sum evaluated directly for stability near x = 1.
Real log_objective(unsigned q, const Real& e, const Real& x) {
    Real geom = 1;  // Horner: 1 + x(1 + x(...))
    for (unsigned i = 1; i < q; ++i) geom = geom * x + 1;
    return log(geom) - e * log(x);
}

#ifndef NDEBUG
// Coarse 1000-point scan asserting the sampled objective descends to a single
// trough and ascends after it (unimodality is assumed, not proven).
void scan_unimodal(unsigned q, double e) {
    constexpr int kPoints = 1000;
    constexpr double kTol = 1e-7;
    double prev = 0;
    bool ascending = false;
    for (int i = 1; i <= kPoints; ++i) {
        double x = static_cast<double>(i) / (kPoints + 1);
        double geom = 1;
        for (unsigned j = 1; j < q; ++j) geom = geom * x + 1;
        double v = std::log(geom) - e * std::log(x);
        if (i > 1) {
            if (v > prev + kTol) ascending = true;
            assert(!(ascending && v < prev - kTol) && "inner objective is not unimodal");
        }
        prev = v;
    }
}
#endif

Real golden_section(const std::function<Real(const Real&)>& f, Real a, Real b, const Real& rel_tol,
                    Real* width_out) {
    static const Real inv_phi = (sqrt(Real(5)) - 1) / 2;
    Real c = b - inv_phi * (b - a);
    Real d = a + inv_phi * (b - a);
    Real fc = f(c), fd = f(d);
    while (b - a > rel_tol * (abs(a) + abs(b))) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if (width_out) *width_out = b - a;
    return (a + b) / 2;
}

const Real kEps("1e-12");
const Real kRelTol("1e-12");

}  // namespace

MinimizationResult minimize_inner(unsigned q, const Real& exponent) {
    if (q < 2) throw std::invalid_argument("minimize_inner: q must be >= 2");
#ifndef NDEBUG
    scan_unimodal(q, static_cast<double>(exponent));
#endif
    MinimizationResult res;
    Real x = golden_section([&](const Real& t) { return log_objective(q, exponent, t); }, kEps,
                            1 - kEps, kRelTol, &res.tolerance);
    res.argmin = x;
    res.value = exp(log_objective(q, exponent, x));
    // boundary limits: q as x -> 1; 1 as x -> 0 when the exponent vanishes
    if (Real(q) < res.value) {
        res.value = q;
        res.argmin = 1;
        res.at_upper_boundary = true;
    }
    if (exponent == 0 && Real(1) < res.value) {
        res.value = 1;
        res.argmin = 0;
        res.at_lower_boundary = true;
        res.at_upper_boundary = false;
    }
    return res;
}

MarkovBound markov_bound(unsigned q, unsigned n, unsigned d) {
    if (d > (q - 1) * std::uint64_t{n})
        throw std::out_of_range("markov_bound: d must lie in [0, (q-1)n]");
    MarkovBound out{q, n, d, minimize_inner(q, Real(d) / n), 0};
    out.bound = pow_n(out.inner.value, n);
    return out;
}

CountResult count_with_markov(unsigned q, unsigned n, unsigned d) {
    return {q, n, d, monomial_count_exact(q, n, d), markov_bound(q, n, d).bound};
}

Real compute_J(unsigned p) {
    if (p == 2) throw std::invalid_argument("compute_J: defined for odd primes only");
    if (!is_prime(p)) throw std::invalid_argument("compute_J: p must be prime");
    return minimize_inner(p, Real(p - 1) / 3).value / p;
}

Real compute_limit_J() {
    auto h = [](const Real& z) { return (z - 1 / (z * z)) / (3 * log(z)); };
    Real width;
    Real z = golden_section(h, 1 + Real("1e-9"), Real(100), kRelTol, &width);
    return h(z);
}

Real compute_gamma(unsigned q) {
    if (q < 2) throw std::invalid_argument("compute_gamma: q must be >= 2");
    return minimize_inner(q, Real(q - 1) / q).value;
}

RankBound partition_rank_bound_Ip(unsigned p, unsigned n, BoundMode mode) {
    if (p < 3 || !is_prime(p)) throw std::invalid_argument("partition_rank_bound_Ip: odd prime required");
    if (mode == BoundMode::amplified)
        throw std::invalid_argument("partition_rank_bound_Ip: amplified mode applies to E_q only");
    RankBound out;
    out.mode = mode;
    out.degree = static_cast<unsigned>(std::uint64_t{n} * (p - 1) / 3);
    Natural prefactor = pow_n(Natural(2), p) - p - 2;
    if (mode == BoundMode::exact) {
        out.exact = prefactor * monomial_count_exact(p, n, out.degree);
        out.value = Real(*out.exact);
    } else {
        out.value = Real(prefactor) * pow_n(compute_J(p) * p, n);
    }
    return out;
}

RankBound slice_rank_bound_Eq(unsigned q, unsigned n, BoundMode mode) {
    if (q < 2) throw std::invalid_argument("slice_rank_bound_Eq: q must be >= 2");
    RankBound out;
    out.mode = mode;
    out.degree = static_cast<unsigned>(std::uint64_t{n} * (q - 1) / q);
    switch (mode) {
        case BoundMode::exact:
            out.exact = Natural(q) * monomial_count_exact(q, n, out.degree);
            out.value = Real(*out.exact);
            break;
        case BoundMode::asymptotic:
            out.value = Real(q) * pow_n(compute_gamma(q), n);
            break;
        case BoundMode::amplified:
            out.value = pow_n(compute_gamma(q), n);
            break;
    }
    return out;
}

std::vector<Real> amplification_diagnostic(unsigned q, unsigned n) {
    Real base = pow_n(compute_gamma(q), n);
    std::vector<Real> out;
    for (unsigned m : {1u, 2u, 4u, 8u}) out.push_back(pow(Real(q), Real(1) / m) * base);
    return out;
}

}  // namespace zerosum
