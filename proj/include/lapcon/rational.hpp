#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

#include "lapcon/bigint.hpp"
#include "lapcon/error.hpp"

namespace lapcon {

/// Exact rational number. Always in lowest terms with positive denominator;
/// zero is canonically 0/1. Field arithmetic is exact by construction.
class Rational {
public:
    Rational() : den_(1) {}
    Rational(std::int64_t v) : num_(v), den_(1) {}  // NOLINT: implicit by design
    Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) { normalize(); }
    Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }

    /// Accepts "p", "-p", "p/q", decimal literals like "0.25" or "-3.5",
    /// and scientific notation ("2.5e-3"). Decimals convert exactly.
    static Rational from_string(std::string_view s) {
        if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
            Rational base = from_string(s.substr(0, e));
            BigInt exp_big = BigInt::from_decimal(s.substr(e + 1));
            if (exp_big.abs() > BigInt(9999)) throw ParseError("exponent out of range");
            auto exp = exp_big.to_int64();
            Rational ten_pow(1);
            for (std::int64_t i = 0; i < (exp < 0 ? -exp : exp); ++i)
                ten_pow *= Rational(10);
            return exp < 0 ? base / ten_pow : base * ten_pow;
        }
        if (auto slash = s.find('/'); slash != std::string_view::npos) {
            BigInt n = BigInt::from_decimal(s.substr(0, slash));
            BigInt d = BigInt::from_decimal(s.substr(slash + 1));
            return Rational(std::move(n), std::move(d));
        }
        if (auto dot = s.find('.'); dot != std::string_view::npos) {
            std::string digits(s.substr(0, dot));
            std::string_view frac = s.substr(dot + 1);
            if (frac.empty()) throw ParseError("trailing decimal point");
            digits.append(frac);
            BigInt n = BigInt::from_decimal(digits);
            BigInt d(1);
            for (std::size_t i = 0; i < frac.size(); ++i) d = d * BigInt(10);
            return Rational(std::move(n), std::move(d));
        }
        return Rational(BigInt::from_decimal(s), BigInt(1));
    }

    [[nodiscard]] const BigInt& numerator() const { return num_; }
    [[nodiscard]] const BigInt& denominator() const { return den_; }
    [[nodiscard]] bool is_zero() const { return num_.is_zero(); }
    [[nodiscard]] bool is_integer() const { return den_ == BigInt(1); }
    [[nodiscard]] int sign() const { return num_.sign(); }

    [[nodiscard]] Rational abs() const {
        Rational r = *this;
        r.num_ = r.num_.abs();
        return r;
    }

    Rational operator-() const {
        Rational r = *this;
        r.num_ = -r.num_;
        return r;
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.is_zero()) throw InvalidInput("rational division by zero");
        return Rational(a.num_ * b.den_, a.den_ * b.num_);
    }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        return (a.num_ * b.den_) <=> (b.num_ * a.den_);
    }

    [[nodiscard]] Rational reciprocal() const {
        if (is_zero()) throw InvalidInput("reciprocal of zero");
        return Rational(den_, num_);
    }

    /// "p" for integers, "p/q" otherwise.
    [[nodiscard]] std::string to_string() const {
        if (is_integer()) return num_.to_string();
        return num_.to_string() + "/" + den_.to_string();
    }

    [[nodiscard]] double to_double() const {
        // keep both operands in double range before dividing
        std::size_t nb = num_.bit_length(), db = den_.bit_length();
        if (nb < 1000 && db < 1000) return num_.to_double() / den_.to_double();
        std::size_t drop = std::max(nb, db) - 512;
        BigInt scale(1);
        // 2^drop via repeated doubling of the shift in to_double is cheaper,
        // but this path only triggers on astronomically large operands.
        for (std::size_t i = 0; i < drop; ++i) scale = scale * BigInt(2);
        return (num_ / scale).to_double() / (den_ / scale).to_double();
    }

private:
    BigInt num_;
    BigInt den_;

    void normalize() {
        if (den_.is_zero()) throw InvalidInput("rational with zero denominator");
        if (num_.is_zero()) {
            den_ = BigInt(1);
            return;
        }
        if (den_.sign() < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        BigInt g = BigInt::gcd(num_, den_);
        if (!(g == BigInt(1))) {
            num_ = num_ / g;
            den_ = den_ / g;
        }
    }
};

}  // namespace lapcon
