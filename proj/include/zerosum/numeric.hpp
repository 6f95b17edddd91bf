#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace zerosum {

// Exact arbitrary-precision integer. Values named Natural are kept >= 0.
using Natural = boost::multiprecision::cpp_int;

// Exact rational, used wherever a formula produces a non-integer bound.
using Rational = boost::multiprecision::cpp_rational;

// 50 significant decimal digits; every analytic constant is computed in this
// type and rounded only on output.
using Real = boost::multiprecision::cpp_bin_float_50;

// x^e by repeated multiplication (exact for Natural, exponent at desk scale).
template <typename T>
T pow_n(T x, unsigned e) {
    T r{1};
    while (e) {
        if (e & 1u) r *= x;
        x *= x;
        e >>= 1u;
    }
    return r;
}

}  // namespace zerosum
