#pragma once

// Exact rational scalar used for every orbit value and coefficient.
//
// Text form is "p/q" or "p" with an optional leading minus and q > 0,
// always in lowest terms when rendered.

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rde {

using BigInt = boost::multiprecision::cpp_int;

class RationalParseError : public std::invalid_argument {
public:
    explicit RationalParseError(const std::string& text)
        : std::invalid_argument("malformed rational: \"" + text + "\"") {}
};

class Rational {
public:
    using value_type = boost::multiprecision::cpp_rational;

    Rational() = default;
    Rational(std::int64_t n) : v_(n) {}  // NOLINT: implicit by intent, integers are rationals
    Rational(std::int64_t n, std::int64_t d) : Rational(BigInt(n), BigInt(d)) {}
    Rational(const BigInt& n, const BigInt& d) {
        if (d == 0) throw std::domain_error("rational with zero denominator");
        v_ = d < 0 ? value_type(BigInt(-n), BigInt(-d)) : value_type(n, d);
    }
    explicit Rational(value_type v) : v_(std::move(v)) {}

    BigInt numerator() const { return boost::multiprecision::numerator(v_); }
    BigInt denominator() const { return boost::multiprecision::denominator(v_); }

    bool is_zero() const { return v_.is_zero(); }
    int sign() const { return v_.sign(); }
    const value_type& raw() const { return v_; }

    double to_double() const { return v_.convert_to<double>(); }

    Rational operator-() const { return Rational(value_type(-v_)); }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw std::domain_error("rational division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        if (a.v_ < b.v_) return std::strong_ordering::less;
        if (a.v_ > b.v_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    // "p/q", or "p" when q == 1.
    std::string str() const {
        BigInt d = denominator();
        if (d == 1) return numerator().str();
        return numerator().str() + "/" + d.str();
    }

    static Rational parse(std::string_view text) {
        const std::string s(text);
        auto digits_only = [](std::string_view t) {
            if (t.empty()) return false;
            for (char c : t)
                if (c < '0' || c > '9') return false;
            return true;
        };
        std::string_view body = text;
        bool negative = false;
        if (!body.empty() && body.front() == '-') {
            negative = true;
            body.remove_prefix(1);
        }
        const auto slash = body.find('/');
        std::string_view num = body.substr(0, slash);
        std::string_view den = slash == std::string_view::npos ? std::string_view("1")
                                                               : body.substr(slash + 1);
        if (!digits_only(num) || !digits_only(den)) throw RationalParseError(s);
        BigInt n{std::string(num)};
        BigInt d{std::string(den)};
        if (d == 0) throw RationalParseError(s);
        if (negative) n = -n;
        return Rational(n, d);
    }

private:
    value_type v_{0};
};

inline std::ostream& operator<<(std::ostream& os, const Rational& q) { return os << q.str(); }

inline Rational abs(const Rational& q) { return q.sign() < 0 ? -q : q; }

// Integer power; negative exponents invert (throws on 0^-n).
inline Rational pow(const Rational& base, std::int64_t e) {
    Rational result(1);
    Rational b = e < 0 ? Rational(1) / base : base;
    std::uint64_t n = e < 0 ? static_cast<std::uint64_t>(-e) : static_cast<std::uint64_t>(e);
    while (n) {
        if (n & 1U) result *= b;
        n >>= 1U;
        if (n) b *= b;
    }
    return result;
}

namespace detail {

inline BigInt pow10(int e) {
    BigInt r = 1;
    for (int i = 0; i < e; ++i) r *= 10;
    return r;
}

// round(n / d) with ties to even, for n >= 0, d > 0.
inline BigInt div_round_half_even(const BigInt& n, const BigInt& d) {
    BigInt q = n / d;
    BigInt twice_rem = (n - q * d) * 2;
    if (twice_rem > d || (twice_rem == d && (q & 1) != 0)) ++q;
    return q;
}

}  // namespace detail

// Decimal rendering with `digits` significant digits laid out like printf's
// %.{digits}g, computed exactly from the rational (no binary floating point).
inline std::string to_decimal(const Rational& q, int digits = 17) {
    if (q.is_zero()) return "0";
    const BigInt num = boost::multiprecision::abs(q.numerator());
    const BigInt den = q.denominator();

    // decimal exponent e with 10^e <= |q| < 10^(e+1)
    int e = static_cast<int>(num.str().size()) - static_cast<int>(den.str().size());
    auto at_least = [&](int x) {  // |q| >= 10^x
        return x >= 0 ? num >= den * detail::pow10(x) : num * detail::pow10(-x) >= den;
    };
    while (!at_least(e)) --e;
    while (at_least(e + 1)) ++e;

    const int shift = digits - 1 - e;
    BigInt mant = shift >= 0 ? detail::div_round_half_even(num * detail::pow10(shift), den)
                             : detail::div_round_half_even(num, den * detail::pow10(-shift));
    if (mant == detail::pow10(digits)) {
        mant = detail::pow10(digits - 1);
        ++e;
    }
    std::string ds = mant.str();

    std::string out = q.sign() < 0 ? "-" : "";
    auto strip = [](std::string s) {
        if (s.find('.') == std::string::npos) return s;
        while (s.back() == '0') s.pop_back();
        if (s.back() == '.') s.pop_back();
        return s;
    };
    if (e < -4 || e >= digits) {
        std::string m = strip(ds.substr(0, 1) + "." + ds.substr(1));
        std::string ex = std::to_string(e < 0 ? -e : e);
        if (ex.size() < 2) ex = "0" + ex;
        return out + m + "e" + (e < 0 ? "-" : "+") + ex;
    }
    if (e >= 0) {
        return out + strip(ds.substr(0, e + 1) + "." + ds.substr(e + 1));
    }
    return out + strip("0." + std::string(-e - 1, '0') + ds);
}

}  // namespace rde
