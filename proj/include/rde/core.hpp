#pragma once

// System description and the brute-force forward iteration of
//
//     u[n+4k] = u[n] / (A[n] + B[n] * u[n] * u[n+4] * ... * u[n+4k-4])
//
// Forward iteration is the reference every closed form is checked against.

#include "rde/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rde {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A denominator evaluated to exactly zero. `where` is the step index (window
// start n for step(), block s for the closed forms).
class ZeroDenominator : public Error {
public:
    ZeroDenominator(std::string what, std::int64_t where)
        : Error(std::move(what)), where_(where) {}
    std::int64_t where() const { return where_; }

private:
    std::int64_t where_;
};

class ZeroFactor : public Error {
public:
    using Error::Error;
};

class IndexOutOfRange : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

// ---------------------------------------------------------------------------
// index arithmetic

// r = 4 * floor4(r) + tau(r)
constexpr std::int64_t tau(std::int64_t r) { return r % 4; }
constexpr std::int64_t floor4(std::int64_t r) { return r / 4; }

enum class Form { u, eta };

// The eta-form equation is the u-form shifted back 4k-1 places:
// eta[m] = u[m + 4k - 1].
inline std::int64_t map_eta_index(std::int64_t k, std::int64_t n_eta) {
    if (n_eta < -4 * k + 1)
        throw IndexOutOfRange("eta index " + std::to_string(n_eta) + " precedes the initial block");
    return n_eta + 4 * k - 1;
}

inline std::int64_t map_u_index(std::int64_t k, std::int64_t n_u) {
    if (n_u < 0) throw IndexOutOfRange("u index " + std::to_string(n_u) + " is negative");
    return n_u - 4 * k + 1;
}

// ---------------------------------------------------------------------------

// Periodic coefficient sequence; a constant is the one-element case.
class SequenceSpec {
public:
    SequenceSpec() : values_{Rational(0)} {}
    SequenceSpec(Rational c) : values_{std::move(c)} {}  // NOLINT: constants convert
    explicit SequenceSpec(std::vector<Rational> values) : values_(std::move(values)) {
        if (values_.empty()) throw ValidationError("coefficient sequence must be non-empty");
    }

    static SequenceSpec constant(Rational c) { return SequenceSpec(std::move(c)); }
    static SequenceSpec periodic(std::vector<Rational> v) { return SequenceSpec(std::move(v)); }

    const Rational& term(std::int64_t n) const {
        const auto p = static_cast<std::int64_t>(values_.size());
        return values_[static_cast<std::size_t>(((n % p) + p) % p)];
    }

    // True when every term is the same value, regardless of how it was written.
    bool is_constant() const {
        for (const auto& v : values_)
            if (v != values_.front()) return false;
        return true;
    }
    std::size_t period() const { return values_.size(); }
    const std::vector<Rational>& values() const { return values_; }

    // Sequence n -> term(n + offset).
    SequenceSpec shifted(std::int64_t offset) const {
        std::vector<Rational> out;
        out.reserve(values_.size());
        for (std::size_t j = 0; j < values_.size(); ++j)
            out.push_back(term(static_cast<std::int64_t>(j) + offset));
        return SequenceSpec(std::move(out));
    }

private:
    std::vector<Rational> values_;
};

struct SystemSpec {
    std::int64_t k = 1;
    SequenceSpec A;
    SequenceSpec B;
    std::vector<Rational> initial;  // u[0] .. u[4k-1] (equivalently eta[-4k+1] .. eta[0])
    Form form = Form::u;

    std::int64_t order() const { return 4 * k; }

    void validate() const {
        if (k < 1) throw ValidationError("k must be at least 1, got " + std::to_string(k));
        if (static_cast<std::int64_t>(initial.size()) != 4 * k)
            throw ValidationError("expected " + std::to_string(4 * k) + " initial values, got " +
                                  std::to_string(initial.size()));
    }

    // Product of the k initial values in residue class p (mod 4): u[p] u[p+4] ... u[p+4k-4].
    Rational class_product(std::int64_t p) const {
        Rational prod(1);
        for (std::int64_t j = 0; j < k; ++j) prod *= initial[static_cast<std::size_t>(p + 4 * j)];
        return prod;
    }
};

struct Orbit {
    std::vector<Rational> terms;
    // First index whose computation divided by zero.
    std::optional<std::int64_t> forbidden_at;

    bool complete() const { return !forbidden_at.has_value(); }
    std::int64_t last_index() const { return static_cast<std::int64_t>(terms.size()) - 1; }
};

// u[n+4k] from the window u[n] .. u[n+4k-1]. Only every fourth window entry
// enters the product.
inline Rational step(const SystemSpec& spec, std::span<const Rational> window, std::int64_t n) {
    if (static_cast<std::int64_t>(window.size()) != spec.order())
        throw ValidationError("step window must hold 4k values");
    Rational prod(1);
    for (std::int64_t i = 0; i < spec.k; ++i) prod *= window[static_cast<std::size_t>(4 * i)];
    Rational denom = spec.A.term(n) + spec.B.term(n) * prod;
    if (denom.is_zero())
        throw ZeroDenominator("zero denominator at n=" + std::to_string(n), n);
    return window[0] / denom;
}

// Terms 0 .. N. Stops at the first zero denominator and records the index
// that could not be computed.
inline Orbit iterate(const SystemSpec& spec, std::int64_t N) {
    spec.validate();
    const std::int64_t order = spec.order();
    if (N < order - 1) throw ValidationError("horizon must reach the initial block");
    Orbit orbit;
    orbit.terms.reserve(static_cast<std::size_t>(N + 1));
    orbit.terms.assign(spec.initial.begin(), spec.initial.end());
    for (std::int64_t n = 0; n + order <= N; ++n) {
        std::span<const Rational> window(orbit.terms.data() + n, static_cast<std::size_t>(order));
        try {
            orbit.terms.push_back(step(spec, window, n));
        } catch (const ZeroDenominator&) {
            orbit.forbidden_at = n + order;
            break;
        }
    }
    return orbit;
}

}  // namespace rde
