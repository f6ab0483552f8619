#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lapcon/error.hpp"

namespace lapcon {

/// Arbitrary-precision signed integer. Sign-magnitude over base-2^32 limbs,
/// little-endian, no leading zero limbs (zero has an empty limb vector).
class BigInt {
public:
    BigInt() = default;

    BigInt(std::int64_t v) {  // NOLINT: implicit by design
        if (v == 0) return;
        sign_ = v < 0 ? -1 : 1;
        auto mag = v < 0 ? ~static_cast<std::uint64_t>(v) + 1 : static_cast<std::uint64_t>(v);
        mag_.push_back(static_cast<std::uint32_t>(mag));
        if (mag >> 32) mag_.push_back(static_cast<std::uint32_t>(mag >> 32));
    }

    /// Parses an optionally signed decimal string. Throws ParseError otherwise.
    static BigInt from_decimal(std::string_view s) {
        int sign = 1;
        if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
            if (s[0] == '-') sign = -1;
            s.remove_prefix(1);
        }
        if (s.empty()) throw ParseError("empty integer literal");
        BigInt r;
        std::uint32_t chunk = 0;
        int digits_in_chunk = 0;
        auto flush = [&](std::uint32_t base) {
            r.mul_small(base);
            r.add_small(chunk);
            chunk = 0;
            digits_in_chunk = 0;
        };
        for (char c : s) {
            if (c < '0' || c > '9') throw ParseError("invalid digit in integer literal");
            chunk = chunk * 10 + static_cast<std::uint32_t>(c - '0');
            if (++digits_in_chunk == 9) flush(1000000000u);
        }
        if (digits_in_chunk > 0) {
            std::uint32_t base = 10;
            for (int i = 1; i < digits_in_chunk; ++i) base *= 10;
            flush(base);
        }
        if (!r.mag_.empty()) r.sign_ = sign;
        return r;
    }

    [[nodiscard]] bool is_zero() const { return sign_ == 0; }
    [[nodiscard]] int sign() const { return sign_; }

    [[nodiscard]] BigInt abs() const {
        BigInt r = *this;
        if (r.sign_ < 0) r.sign_ = 1;
        return r;
    }

    BigInt operator-() const {
        BigInt r = *this;
        r.sign_ = -r.sign_;
        return r;
    }

    friend BigInt operator+(const BigInt& a, const BigInt& b) {
        if (a.sign_ == 0) return b;
        if (b.sign_ == 0) return a;
        BigInt r;
        if (a.sign_ == b.sign_) {
            r.mag_ = mag_add(a.mag_, b.mag_);
            r.sign_ = a.sign_;
        } else {
            int c = mag_cmp(a.mag_, b.mag_);
            if (c == 0) return BigInt{};
            const BigInt& big = c > 0 ? a : b;
            const BigInt& small = c > 0 ? b : a;
            r.mag_ = mag_sub(big.mag_, small.mag_);
            r.sign_ = big.sign_;
        }
        return r;
    }

    friend BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

    friend BigInt operator*(const BigInt& a, const BigInt& b) {
        if (a.sign_ == 0 || b.sign_ == 0) return BigInt{};
        BigInt r;
        r.mag_ = mag_mul(a.mag_, b.mag_);
        r.sign_ = a.sign_ * b.sign_;
        return r;
    }

    /// Truncated division (C++ semantics): quotient toward zero,
    /// remainder carries the dividend's sign.
    static std::pair<BigInt, BigInt> divmod(const BigInt& a, const BigInt& b) {
        if (b.sign_ == 0) throw InvalidInput("division by zero");
        if (a.sign_ == 0) return {BigInt{}, BigInt{}};
        auto [qm, rm] = mag_divmod(a.mag_, b.mag_);
        BigInt q, r;
        if (!qm.empty()) {
            q.mag_ = std::move(qm);
            q.sign_ = a.sign_ * b.sign_;
        }
        if (!rm.empty()) {
            r.mag_ = std::move(rm);
            r.sign_ = a.sign_;
        }
        return {q, r};
    }

    friend BigInt operator/(const BigInt& a, const BigInt& b) { return divmod(a, b).first; }
    friend BigInt operator%(const BigInt& a, const BigInt& b) { return divmod(a, b).second; }

    BigInt& operator+=(const BigInt& o) { return *this = *this + o; }
    BigInt& operator-=(const BigInt& o) { return *this = *this - o; }
    BigInt& operator*=(const BigInt& o) { return *this = *this * o; }

    friend bool operator==(const BigInt& a, const BigInt& b) {
        return a.sign_ == b.sign_ && a.mag_ == b.mag_;
    }

    friend std::strong_ordering operator<=>(const BigInt& a, const BigInt& b) {
        if (a.sign_ != b.sign_) return a.sign_ <=> b.sign_;
        int c = mag_cmp(a.mag_, b.mag_) * (a.sign_ < 0 ? -1 : 1);
        return c <=> 0;
    }

    /// Greatest common divisor, always nonnegative. Stein's binary algorithm,
    /// so normalizing rationals never runs long division.
    static BigInt gcd(BigInt a, BigInt b) {
        if (a.sign_ == 0) return b.abs();
        if (b.sign_ == 0) return a.abs();
        std::vector<std::uint32_t> u = a.mag_, v = b.mag_;
        std::size_t shift = std::min(mag_ctz(u), mag_ctz(v));
        mag_shr(u, shift);
        mag_shr(v, shift);
        mag_shr(u, mag_ctz(u));
        while (true) {
            mag_shr(v, mag_ctz(v));
            int c = mag_cmp(u, v);
            if (c == 0) break;
            if (c > 0) std::swap(u, v);
            v = mag_sub(v, u);
        }
        mag_shl(u, shift);
        BigInt g;
        g.mag_ = std::move(u);
        g.sign_ = 1;
        return g;
    }

    [[nodiscard]] std::string to_string() const {
        if (sign_ == 0) return "0";
        std::vector<std::uint32_t> m = mag_;
        std::string digits;
        while (!m.empty()) {
            std::uint64_t rem = 0;
            for (std::size_t i = m.size(); i-- > 0;) {
                std::uint64_t cur = (rem << 32) | m[i];
                m[i] = static_cast<std::uint32_t>(cur / 1000000000u);
                rem = cur % 1000000000u;
            }
            while (!m.empty() && m.back() == 0) m.pop_back();
            for (int i = 0; i < 9; ++i) {
                digits.push_back(static_cast<char>('0' + rem % 10));
                rem /= 10;
            }
        }
        while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
        std::string out;
        if (sign_ < 0) out.push_back('-');
        out.append(digits.rbegin(), digits.rend());
        return out;
    }

    [[nodiscard]] double to_double() const {
        if (sign_ == 0) return 0.0;
        double acc = 0.0;
        std::size_t top = mag_.size();
        std::size_t lo = top > 3 ? top - 3 : 0;  // 96 bits cover the mantissa
        for (std::size_t i = top; i-- > lo;) acc = acc * 4294967296.0 + mag_[i];
        acc = std::ldexp(acc, static_cast<int>(32 * lo));
        return sign_ < 0 ? -acc : acc;
    }

    /// Approximate bit length (exact): position of the highest set bit.
    [[nodiscard]] std::size_t bit_length() const {
        if (mag_.empty()) return 0;
        std::uint32_t top = mag_.back();
        std::size_t bits = (mag_.size() - 1) * 32;
        while (top) {
            ++bits;
            top >>= 1;
        }
        return bits;
    }

    [[nodiscard]] bool fits_int64() const {
        return *this >= BigInt{INT64_MIN} && *this <= BigInt{INT64_MAX};
    }

    [[nodiscard]] std::int64_t to_int64() const {
        std::uint64_t v = 0;
        if (mag_.size() > 1) v = (static_cast<std::uint64_t>(mag_[1]) << 32);
        if (!mag_.empty()) v |= mag_[0];
        // two's complement negate in unsigned space; INT64_MIN round-trips
        return static_cast<std::int64_t>(sign_ < 0 ? ~v + 1 : v);
    }

private:
    int sign_ = 0;
    std::vector<std::uint32_t> mag_;

    void trim() {
        while (!mag_.empty() && mag_.back() == 0) mag_.pop_back();
        if (mag_.empty()) sign_ = 0;
    }

    void mul_small(std::uint32_t f) {
        std::uint64_t carry = 0;
        for (auto& limb : mag_) {
            std::uint64_t cur = static_cast<std::uint64_t>(limb) * f + carry;
            limb = static_cast<std::uint32_t>(cur);
            carry = cur >> 32;
        }
        if (carry) mag_.push_back(static_cast<std::uint32_t>(carry));
    }

    void add_small(std::uint32_t v) {
        std::uint64_t carry = v;
        for (auto& limb : mag_) {
            if (!carry) break;
            std::uint64_t cur = limb + carry;
            limb = static_cast<std::uint32_t>(cur);
            carry = cur >> 32;
        }
        if (carry) mag_.push_back(static_cast<std::uint32_t>(carry));
    }

    using Mag = std::vector<std::uint32_t>;

    static int mag_cmp(const Mag& a, const Mag& b) {
        if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
        for (std::size_t i = a.size(); i-- > 0;) {
            if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
        }
        return 0;
    }

    static Mag mag_add(const Mag& a, const Mag& b) {
        const Mag& lo = a.size() < b.size() ? a : b;
        const Mag& hi = a.size() < b.size() ? b : a;
        Mag r(hi.size());
        std::uint64_t carry = 0;
        for (std::size_t i = 0; i < hi.size(); ++i) {
            std::uint64_t cur = carry + hi[i] + (i < lo.size() ? lo[i] : 0);
            r[i] = static_cast<std::uint32_t>(cur);
            carry = cur >> 32;
        }
        if (carry) r.push_back(static_cast<std::uint32_t>(carry));
        return r;
    }

    // requires a >= b
    static Mag mag_sub(const Mag& a, const Mag& b) {
        Mag r(a.size());
        std::int64_t borrow = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            std::int64_t cur = static_cast<std::int64_t>(a[i]) - borrow -
                               (i < b.size() ? static_cast<std::int64_t>(b[i]) : 0);
            if (cur < 0) {
                cur += (static_cast<std::int64_t>(1) << 32);
                borrow = 1;
            } else {
                borrow = 0;
            }
            r[i] = static_cast<std::uint32_t>(cur);
        }
        while (!r.empty() && r.back() == 0) r.pop_back();
        return r;
    }

    static Mag mag_mul(const Mag& a, const Mag& b) {
        Mag r(a.size() + b.size(), 0);
        for (std::size_t i = 0; i < a.size(); ++i) {
            std::uint64_t carry = 0;
            std::uint64_t ai = a[i];
            for (std::size_t j = 0; j < b.size(); ++j) {
                std::uint64_t cur = r[i + j] + ai * b[j] + carry;
                r[i + j] = static_cast<std::uint32_t>(cur);
                carry = cur >> 32;
            }
            std::size_t k = i + b.size();
            while (carry) {
                std::uint64_t cur = r[k] + carry;
                r[k] = static_cast<std::uint32_t>(cur);
                carry = cur >> 32;
                ++k;
            }
        }
        while (!r.empty() && r.back() == 0) r.pop_back();
        return r;
    }

    static std::size_t mag_ctz(const Mag& m) {
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] != 0) {
                std::uint32_t v = m[i];
                std::size_t bits = 0;
                while (!(v & 1)) {
                    v >>= 1;
                    ++bits;
                }
                return 32 * i + bits;
            }
        }
        return 0;
    }

    static void mag_shr(Mag& m, std::size_t bits) {
        if (bits == 0 || m.empty()) return;
        std::size_t limbs = bits / 32, rem = bits % 32;
        if (limbs >= m.size()) {
            m.clear();
            return;
        }
        m.erase(m.begin(), m.begin() + static_cast<std::ptrdiff_t>(limbs));
        if (rem) {
            for (std::size_t i = 0; i < m.size(); ++i) {
                m[i] >>= rem;
                if (i + 1 < m.size()) m[i] |= m[i + 1] << (32 - rem);
            }
        }
        while (!m.empty() && m.back() == 0) m.pop_back();
    }

    static void mag_shl(Mag& m, std::size_t bits) {
        if (bits == 0 || m.empty()) return;
        std::size_t limbs = bits / 32, rem = bits % 32;
        if (rem) {
            std::uint32_t carry = 0;
            for (auto& limb : m) {
                std::uint32_t nc = limb >> (32 - rem);
                limb = (limb << rem) | carry;
                carry = nc;
            }
            if (carry) m.push_back(carry);
        }
        m.insert(m.begin(), limbs, 0u);
    }

    // Knuth algorithm D, base 2^32.
    static std::pair<Mag, Mag> mag_divmod(const Mag& u_in, const Mag& v_in) {
        if (mag_cmp(u_in, v_in) < 0) return {Mag{}, u_in};
        if (v_in.size() == 1) {
            Mag q(u_in.size());
            std::uint64_t rem = 0;
            for (std::size_t i = u_in.size(); i-- > 0;) {
                std::uint64_t cur = (rem << 32) | u_in[i];
                q[i] = static_cast<std::uint32_t>(cur / v_in[0]);
                rem = cur % v_in[0];
            }
            while (!q.empty() && q.back() == 0) q.pop_back();
            Mag r;
            if (rem) r.push_back(static_cast<std::uint32_t>(rem));
            return {q, r};
        }

        std::size_t shift = 0;
        std::uint32_t top = v_in.back();
        while (!(top & 0x80000000u)) {
            top <<= 1;
            ++shift;
        }
        Mag v = v_in;
        mag_shl(v, shift);
        Mag un = u_in;
        mag_shl(un, shift);
        const std::size_t n = v.size();
        un.resize(std::max(un.size(), u_in.size() + (shift ? 1 : 0)), 0);
        if (un.size() < n + 1) un.resize(n + 1, 0);
        const std::size_t m = un.size() - n;  // un gets an extra virtual top limb
        un.push_back(0);

        Mag q(m + 1, 0);
        const std::uint64_t base = static_cast<std::uint64_t>(1) << 32;
        for (std::size_t j = m + 1; j-- > 0;) {
            std::uint64_t num = (static_cast<std::uint64_t>(un[j + n]) << 32) | un[j + n - 1];
            std::uint64_t qhat = num / v[n - 1];
            std::uint64_t rhat = num % v[n - 1];
            while (qhat >= base ||
                   qhat * v[n - 2] > ((rhat << 32) | un[j + n - 2])) {
                --qhat;
                rhat += v[n - 1];
                if (rhat >= base) break;
            }
            // multiply and subtract
            std::int64_t borrow = 0;
            std::uint64_t carry = 0;
            for (std::size_t i = 0; i < n; ++i) {
                std::uint64_t p = qhat * v[i] + carry;
                carry = p >> 32;
                std::int64_t t = static_cast<std::int64_t>(un[i + j]) - borrow -
                                 static_cast<std::int64_t>(p & 0xffffffffu);
                if (t < 0) {
                    t += static_cast<std::int64_t>(base);
                    borrow = 1;
                } else {
                    borrow = 0;
                }
                un[i + j] = static_cast<std::uint32_t>(t);
            }
            std::int64_t t = static_cast<std::int64_t>(un[j + n]) - borrow -
                             static_cast<std::int64_t>(carry);
            if (t < 0) {
                // qhat was one too large: add back
                t += static_cast<std::int64_t>(base);
                --qhat;
                std::uint64_t c2 = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    std::uint64_t cur = static_cast<std::uint64_t>(un[i + j]) + v[i] + c2;
                    un[i + j] = static_cast<std::uint32_t>(cur);
                    c2 = cur >> 32;
                }
                t += static_cast<std::int64_t>(c2);
                t &= static_cast<std::int64_t>(base - 1);
            }
            un[j + n] = static_cast<std::uint32_t>(t);
            q[j] = static_cast<std::uint32_t>(qhat);
        }
        while (!q.empty() && q.back() == 0) q.pop_back();
        Mag r(un.begin(), un.begin() + static_cast<std::ptrdiff_t>(n));
        mag_shr(r, shift);
        while (!r.empty() && r.back() == 0) r.pop_back();
        return {q, r};
    }
};

}  // namespace lapcon
