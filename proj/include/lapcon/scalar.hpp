#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <type_traits>

#include "lapcon/rational.hpp"

namespace lapcon {

/// Backend traits for the two scalar types the kernel is generic over:
/// exact rationals (bit-exact algebra) and float64 (tolerance-based).
template <class T>
struct scalar_traits;

template <>
struct scalar_traits<double> {
    static constexpr bool is_exact = false;
    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static double from_int(std::int64_t v) { return static_cast<double>(v); }
    static double abs(double x) { return std::fabs(x); }
    static double to_double(double x) { return x; }
};

template <>
struct scalar_traits<Rational> {
    static constexpr bool is_exact = true;
    static Rational zero() { return Rational(0); }
    static Rational one() { return Rational(1); }
    static Rational from_int(std::int64_t v) { return Rational(v); }
    static Rational abs(const Rational& x) { return x.abs(); }
    static double to_double(const Rational& x) { return x.to_double(); }
};

template <class T>
concept MatrixScalar = requires { scalar_traits<T>::is_exact; };

}  // namespace lapcon
