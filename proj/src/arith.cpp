#include "zerosum/arith.hpp"

#include <ostream>
#include <sstream>
#include <stdexcept>

namespace zerosum {

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint64_t d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

PrimePower::PrimePower(std::uint64_t base, unsigned exponent) : p(base), r(exponent) {
    if (!is_prime(base)) throw std::invalid_argument("PrimePower: base is not prime");
    if (exponent < 1) throw std::invalid_argument("PrimePower: exponent must be >= 1");
    q = 1;
    for (unsigned i = 0; i < exponent; ++i) {
        if (q > UINT64_MAX / base) throw std::overflow_error("PrimePower: value overflow");
        q *= base;
    }
}

PrimePower PrimePower::from_value(std::uint64_t value) {
    if (value < 2) throw std::invalid_argument("PrimePower: value must be >= 2");
    auto fs = factorize(value);
    if (fs.size() != 1) throw std::invalid_argument("PrimePower: value is not a prime power");
    return fs.front();
}

std::vector<PrimePower> factorize(std::uint64_t k) {
    if (k < 2) throw std::invalid_argument("factorize: k must be >= 2");
    std::vector<PrimePower> out;
    std::uint64_t rest = k;
    for (std::uint64_t d = 2; d * d <= rest; d == 2 ? d = 3 : d += 2) {
        if (rest % d) continue;
        unsigned r = 0;
        while (rest % d == 0) {
            rest /= d;
            ++r;
        }
        out.emplace_back(d, r);
    }
    if (rest > 1) out.emplace_back(rest, 1);
    return out;  // trial division yields ascending bases
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
    if (mod == 1) return 0;
    unsigned __int128 r = 1, b = base % mod;
    while (exp) {
        if (exp & 1u) r = r * b % mod;
        b = b * b % mod;
        exp >>= 1u;
    }
    return static_cast<std::uint64_t>(r);
}

namespace {

// C(a, b) mod p for 0 <= a, b < p, via the multiplicative formula and a
// Fermat inverse.
std::uint64_t binom_digit_mod_p(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    if (b > a) return 0;
    b = std::min(b, a - b);
    std::uint64_t num = 1, den = 1;
    for (std::uint64_t i = 1; i <= b; ++i) {
        num = static_cast<std::uint64_t>((unsigned __int128)num * ((a + 1 - i) % p) % p);
        den = static_cast<std::uint64_t>((unsigned __int128)den * (i % p) % p);
    }
    return static_cast<std::uint64_t>((unsigned __int128)num * pow_mod(den, p - 2, p) % p);
}

}  // namespace

std::uint32_t binom_mod_p(std::uint32_t x, std::uint32_t m, const PrimePower& q) {
    if (m >= q.q) throw std::out_of_range("binom_mod_p: m must satisfy m <= q-1");
    if (x >= q.q) x = static_cast<std::uint32_t>(x % q.q);
    std::uint64_t xx = x, mm = m, result = 1;
    for (unsigned i = 0; i < q.r && result != 0; ++i) {
        result = result * binom_digit_mod_p(xx % q.p, mm % q.p, q.p) % q.p;
        xx /= q.p;
        mm /= q.p;
    }
    return static_cast<std::uint32_t>(result);
}

Natural binom_exact(std::uint64_t a, std::uint64_t b) {
    if (b > a) return 0;
    b = std::min(b, a - b);
    Natural r = 1;
    for (std::uint64_t i = 1; i <= b; ++i) {
        r *= a + 1 - i;
        r /= i;  // exact at every step
    }
    return r;
}

WelldefReport verify_binom_welldef(const PrimePower& q, unsigned lifts) {
    WelldefReport rep{q, lifts, true, 0, {}};
    for (std::uint32_t x = 0; x < q.q; ++x) {
        for (std::uint32_t m = 0; m < q.q; ++m) {
            Natural first = binom_exact(x, m) % q.p;
            for (unsigned j = 1; j < lifts; ++j) {
                Natural lifted = binom_exact(x + std::uint64_t{j} * q.q, m) % q.p;
                ++rep.cases_checked;
                if (lifted != first) {
                    rep.well_defined = false;
                    std::ostringstream os;
                    os << "C(" << x + std::uint64_t{j} * q.q << "," << m << ") mod " << q.p
                       << " = " << lifted << " but C(" << x << "," << m << ") mod " << q.p
                       << " = " << first;
                    rep.first_failure = os.str();
                    return rep;
                }
            }
            // cross-check the Lucas product against the exact residue
            if (binom_mod_p(x, m, q) != static_cast<std::uint32_t>(first)) {
                rep.well_defined = false;
                std::ostringstream os;
                os << "Lucas product disagrees with exact C(" << x << "," << m << ") mod " << q.p;
                rep.first_failure = os.str();
                return rep;
            }
            ++rep.cases_checked;
        }
    }
    return rep;
}

Residue::Residue(std::uint64_t v, std::uint32_t m) : value(static_cast<std::uint32_t>(v % m)), modulus(m) {
    if (m < 2) throw std::invalid_argument("Residue: modulus must be >= 2");
}

namespace {
void require_same_modulus(Residue a, Residue b) {
    if (a.modulus != b.modulus) throw std::invalid_argument("Residue: modulus mismatch");
}
}  // namespace

Residue Residue::operator+(Residue rhs) const {
    require_same_modulus(*this, rhs);
    return {std::uint64_t{value} + rhs.value, modulus};
}

Residue Residue::operator-(Residue rhs) const {
    require_same_modulus(*this, rhs);
    return {std::uint64_t{value} + modulus - rhs.value, modulus};
}

Residue Residue::operator*(Residue rhs) const {
    require_same_modulus(*this, rhs);
    return {std::uint64_t{value} * rhs.value, modulus};
}

Residue Residue::operator-() const { return {std::uint64_t{modulus} - value, modulus}; }

Residue Residue::pow(std::uint64_t e) const { return {pow_mod(value, e, modulus), modulus}; }

GroupSpec::GroupSpec(std::uint32_t k_, std::uint32_t n_) : k(k_), n(n_) {
    if (k < 2) throw std::invalid_argument("GroupSpec: k must be >= 2");
    if (n < 1) throw std::invalid_argument("GroupSpec: n must be >= 1");
}

Natural GroupSpec::order() const { return pow_n(Natural(k), n); }

std::uint64_t GroupSpec::order_u64() const {
    std::uint64_t o = 1;
    for (std::uint32_t i = 0; i < n; ++i) {
        if (o > (std::uint64_t{1} << 62) / k) throw std::overflow_error("GroupSpec: order exceeds 2^63");
        o *= k;
    }
    return o;
}

std::ostream& operator<<(std::ostream& os, const GroupSpec& g) {
    return os << "(Z/" << g.k << "Z)^" << g.n;
}

GroupVector::GroupVector(std::uint32_t k, std::vector<std::uint32_t> c)
    : modulus(k), coords(std::move(c)) {
    if (k < 2) throw std::invalid_argument("GroupVector: modulus must be >= 2");
    if (coords.empty()) throw std::invalid_argument("GroupVector: dimension must be >= 1");
    for (auto& x : coords) x %= k;
}

bool GroupVector::is_zero() const {
    for (auto x : coords)
        if (x) return false;
    return true;
}

GroupVector GroupVector::operator+(const GroupVector& rhs) const {
    if (modulus != rhs.modulus || coords.size() != rhs.coords.size())
        throw std::invalid_argument("GroupVector: group mismatch");
    GroupVector out = *this;
    for (std::size_t i = 0; i < coords.size(); ++i)
        out.coords[i] = (coords[i] + rhs.coords[i]) % modulus;
    return out;
}

GroupVector GroupVector::operator-() const {
    GroupVector out = *this;
    for (auto& x : out.coords) x = (modulus - x) % modulus;
    return out;
}

std::uint64_t GroupVector::flat_index() const {
    std::uint64_t idx = 0;
    for (auto x : coords) idx = idx * modulus + x;
    return idx;
}

GroupVector GroupVector::from_flat(GroupSpec g, std::uint64_t index) {
    std::vector<std::uint32_t> c(g.n);
    for (std::uint32_t i = g.n; i-- > 0;) {
        c[i] = static_cast<std::uint32_t>(index % g.k);
        index /= g.k;
    }
    return {g.k, std::move(c)};
}

std::string GroupVector::to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (i) os << ',';
        os << coords[i];
    }
    return os.str();
}

std::vector<GroupVector> all_elements(GroupSpec g) {
    std::uint64_t order = g.order_u64();
    std::vector<GroupVector> out;
    out.reserve(order);
    for (std::uint64_t i = 0; i < order; ++i) out.push_back(GroupVector::from_flat(g, i));
    return out;
}

}  // namespace zerosum
