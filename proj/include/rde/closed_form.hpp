#pragma once

// Closed-form solutions of the order-4k equation, evaluated exactly.
//
// Every evaluator answers "what is the term at block n, offset i", i.e.
// u[4kn + i] (equivalently eta[4kn - 4k + 1 + i]) for 0 <= i < 4k, using only
// the initial block and the coefficient sequences.
//
// Each closed form is a product over blocks s = 0 .. n-1 of ratios
// bracket(m) / bracket(m + 1) with m = ks + floor(i/4), where
//
//     bracket(m) = prod_{t<m} A[4t+j] + P_j * sum_{l<m} B[4l+j] prod_{l<t<m} A[4t+j]
//
// j = tau(i) and P_j is the product of the initial values in residue class j.

#include "rde/core.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rde {

struct ClosedFormQuery {
    const SystemSpec& spec;
    std::int64_t block = 0;   // n
    std::int64_t offset = 0;  // i, 0 <= i < 4k

    std::int64_t u_index() const { return 4 * spec.k * block + offset; }
    std::int64_t eta_index() const { return 4 * spec.k * block - 4 * spec.k + 1 + offset; }
};

namespace detail {

inline void check_query(const SystemSpec& spec, std::int64_t n, std::int64_t i) {
    spec.validate();
    if (n < 0) throw IndexOutOfRange("block index must be non-negative");
    if (i < 0 || i >= spec.order())
        throw IndexOutOfRange("offset " + std::to_string(i) + " outside 0.." +
                              std::to_string(spec.order() - 1));
}

inline void require_constant(const SystemSpec& spec, std::string_view who) {
    if (!spec.A.is_constant() || !spec.B.is_constant())
        throw ValidationError(std::string(who) + " needs constant coefficients");
}

inline ZeroDenominator zero_bracket(std::int64_t s) {
    return ZeroDenominator("closed form denominator vanishes at block s=" + std::to_string(s), s);
}

// prod_{s<n} bracket(ks + m0) / bracket(ks + m0 + 1), with bracket(m)
// supplied by the caller.
template <typename Bracket>
Rational block_product(std::int64_t k, std::int64_t n, std::int64_t m0, Bracket&& bracket) {
    Rational acc(1);
    for (std::int64_t s = 0; s < n; ++s) {
        const std::int64_t m = k * s + m0;
        Rational den = bracket(m + 1);
        if (den.is_zero()) throw zero_bracket(s);
        acc *= bracket(m) / den;
    }
    return acc;
}

// sum_{l<m} a^l, selected on exact equality with 1.
inline Rational geometric_sum(const Rational& a, std::int64_t m) {
    if (a == Rational(1)) return Rational(m);
    return (Rational(1) - pow(a, m)) / (Rational(1) - a);
}

}  // namespace detail

// General (periodic-coefficient) closed form. The brackets are built by one
// forward sweep over the levels m, so block n costs O(kn).
inline Rational eval_u_general(const ClosedFormQuery& q) {
    const SystemSpec& spec = q.spec;
    detail::check_query(spec, q.block, q.offset);
    const std::int64_t k = spec.k;
    const std::int64_t j = tau(q.offset);
    const std::int64_t m0 = floor4(q.offset);
    const Rational& u_i = spec.initial[static_cast<std::size_t>(q.offset)];
    if (q.block == 0) return u_i;
    const Rational P = spec.class_product(j);

    // levels[m] = bracket(m) for m = 0 .. k(n-1) + m0 + 1
    const std::int64_t top = k * (q.block - 1) + m0 + 1;
    std::vector<Rational> levels;
    levels.reserve(static_cast<std::size_t>(top + 1));
    Rational prod_a(1);
    Rational sum_b(0);
    for (std::int64_t m = 0;; ++m) {
        levels.push_back(prod_a + P * sum_b);
        if (m == top) break;
        const Rational& a = spec.A.term(4 * m + j);
        sum_b = sum_b * a + spec.B.term(4 * m + j);
        prod_a *= a;
    }
    return u_i * detail::block_product(k, q.block, m0, [&](std::int64_t m) -> const Rational& {
               return levels[static_cast<std::size_t>(m)];
           });
}

// Constant coefficients: bracket(m) = A^m + B P sum_{l<m} A^l.
inline Rational eval_u_constant(const ClosedFormQuery& q) {
    const SystemSpec& spec = q.spec;
    detail::check_query(spec, q.block, q.offset);
    detail::require_constant(spec, "eval_u_constant");
    const Rational& u_i = spec.initial[static_cast<std::size_t>(q.offset)];
    if (q.block == 0) return u_i;
    const Rational& A = spec.A.term(0);
    const Rational BP = spec.B.term(0) * spec.class_product(tau(q.offset));
    return u_i * detail::block_product(spec.k, q.block, floor4(q.offset), [&](std::int64_t m) {
               return pow(A, m) + BP * detail::geometric_sum(A, m);
           });
}

// eta[4kn - 4k + 1 + i], reading the initial data through eta indices
// eta[-4k+1] .. eta[0]. Uses the constant-coefficient form when a and b are
// constant and the periodic form otherwise.
inline Rational eval_eta(const SystemSpec& spec, std::int64_t n, std::int64_t i) {
    detail::check_query(spec, n, i);
    const std::int64_t k = spec.k;
    auto eta = [&](std::int64_t m) -> const Rational& {
        return spec.initial[static_cast<std::size_t>(map_eta_index(k, m))];
    };
    const Rational& start = eta(i - 4 * k + 1);
    if (n == 0) return start;

    const std::int64_t t = tau(i);
    Rational P(1);
    for (std::int64_t j = 0; j < k; ++j) P *= eta(t - 4 * k + 1 + 4 * j);

    if (spec.A.is_constant() && spec.B.is_constant()) {
        const Rational& a = spec.A.term(0);
        const Rational bP = spec.B.term(0) * P;
        return start * detail::block_product(k, n, floor4(i), [&](std::int64_t m) {
                   return pow(a, m) + bP * detail::geometric_sum(a, m);
               });
    }
    // Periodic a, b: bracket(m) evaluated term by term.
    return start * detail::block_product(k, n, floor4(i), [&](std::int64_t m) {
               Rational prod_a(1);
               for (std::int64_t k1 = 0; k1 < m; ++k1) prod_a *= spec.A.term(4 * k1 + t);
               Rational sum(0);
               Rational tail(1);  // prod_{l<k2<m} a[4 k2 + t]
               for (std::int64_t l = m - 1; l >= 0; --l) {
                   sum += spec.B.term(4 * l + t) * tail;
                   tail *= spec.A.term(4 * l + t);
               }
               return prod_a + P * sum;
           });
}

// a == 1: bracket(m) = 1 + b P m.
inline Rational eval_special_a1(const SystemSpec& spec, std::int64_t n, std::int64_t i) {
    detail::check_query(spec, n, i);
    detail::require_constant(spec, "eval_special_a1");
    if (spec.A.term(0) != Rational(1)) throw ValidationError("eval_special_a1 needs a = 1");
    const std::int64_t k = spec.k;
    const Rational& start = spec.initial[static_cast<std::size_t>(i)];
    if (n == 0) return start;
    Rational P(1);
    for (std::int64_t j = 0; j < k; ++j)
        P *= spec.initial[static_cast<std::size_t>(map_eta_index(k, tau(i) - 4 * k + 1 + 4 * j))];
    const Rational bP = spec.B.term(0) * P;
    return start * detail::block_product(k, n, floor4(i), [&](std::int64_t m) {
               return Rational(1) + bP * Rational(m);
           });
}

// a == -1, indexed backwards from the end of a block: eta[4kn - j],
// 0 <= j < 4k. With c = -1 + b * prod_r eta[-tau(j) - 4r]:
//   k even: eta[4kn - j] = eta[-j] * c^((-1)^floor(j/4) * n)
//   k odd:  eta[-j] for even n, eta[-j] * c^((-1)^(floor(j/4)+1)) for odd n
inline Rational eval_special_a_minus1(const SystemSpec& spec, std::int64_t n, std::int64_t j) {
    spec.validate();
    detail::require_constant(spec, "eval_special_a_minus1");
    if (spec.A.term(0) != Rational(-1)) throw ValidationError("eval_special_a_minus1 needs a = -1");
    const std::int64_t k = spec.k;
    if (n < 0) throw IndexOutOfRange("block index must be non-negative");
    if (j < 0 || j >= 4 * k) throw IndexOutOfRange("j outside 0..4k-1");
    auto eta = [&](std::int64_t m) -> const Rational& {
        return spec.initial[static_cast<std::size_t>(map_eta_index(k, m))];
    };
    const Rational& start = eta(-j);
    if (n == 0) return start;

    Rational P(1);
    for (std::int64_t r = 0; r < k; ++r) P *= eta(-j + 4 * floor4(j) - 4 * r);
    const Rational c = Rational(-1) + spec.B.term(0) * P;
    const std::int64_t sign = floor4(j) % 2 == 0 ? 1 : -1;

    std::int64_t exponent = 0;
    if (k % 2 == 0) {
        exponent = sign * n;
    } else if (n % 2 == 1) {
        exponent = -sign;
    }
    if (exponent < 0 && c.is_zero()) throw detail::zero_bracket(0);
    return start * pow(c, exponent);
}

// ---------------------------------------------------------------------------
// certification against forward iteration

enum class Evaluator { general, constant, eta, special_a1, special_a_minus1, custom };

inline std::string_view evaluator_name(Evaluator e) {
    switch (e) {
        case Evaluator::general: return "general";
        case Evaluator::constant: return "constant";
        case Evaluator::eta: return "eta";
        case Evaluator::special_a1: return "a=1";
        case Evaluator::special_a_minus1: return "a=-1";
        case Evaluator::custom: return "custom";
    }
    return "?";
}

// The narrowest closed form that applies to the spec.
inline Evaluator most_specific_evaluator(const SystemSpec& spec) {
    if (spec.A.is_constant() && spec.B.is_constant()) {
        const Rational& a = spec.A.term(0);
        if (a == Rational(1)) return Evaluator::special_a1;
        if (a == Rational(-1)) return Evaluator::special_a_minus1;
        return spec.form == Form::eta ? Evaluator::eta : Evaluator::constant;
    }
    return spec.form == Form::eta ? Evaluator::eta : Evaluator::general;
}

// Value at block n, offset i through the chosen evaluator.
inline Rational evaluate(Evaluator e, const SystemSpec& spec, std::int64_t n, std::int64_t i) {
    switch (e) {
        case Evaluator::general: return eval_u_general({spec, n, i});
        case Evaluator::constant: return eval_u_constant({spec, n, i});
        case Evaluator::eta: return eval_eta(spec, n, i);
        case Evaluator::special_a1: return eval_special_a1(spec, n, i);
        case Evaluator::special_a_minus1:
            return eval_special_a_minus1(spec, n, spec.order() - 1 - i);
        case Evaluator::custom: break;
    }
    throw ValidationError("no built-in closed form for this evaluator");
}

using CustomEvaluator =
    std::function<Rational(const SystemSpec&, std::int64_t /*n*/, std::int64_t /*i*/)>;

struct Mismatch {
    std::int64_t index = 0;
    std::optional<Rational> closed_form;  // empty when the closed form hit a zero denominator
    Rational oracle;
};

struct ComparisonReport {
    std::int64_t horizon = 0;
    Evaluator evaluator = Evaluator::general;
    std::int64_t checked = 0;  // indices compared
    std::vector<Mismatch> mismatches;
    std::optional<std::int64_t> oracle_forbidden_at;

    bool agrees() const { return mismatches.empty(); }
};

// Compares the most specific closed form (or `custom`, when given) with
// forward iteration at every index <= horizon where the iteration is defined.
inline ComparisonReport compare(const SystemSpec& spec, std::int64_t horizon,
                                const CustomEvaluator& custom = {}) {
    if (horizon < spec.order()) throw ValidationError("horizon must be at least 4k");
    const Orbit orbit = iterate(spec, horizon);
    ComparisonReport report;
    report.horizon = horizon;
    report.evaluator = custom ? Evaluator::custom : most_specific_evaluator(spec);
    report.oracle_forbidden_at = orbit.forbidden_at;

    const std::int64_t order = spec.order();
    for (std::int64_t t = 0; t <= orbit.last_index(); ++t) {
        const std::int64_t n = t / order;
        const std::int64_t i = t % order;
        const Rational& want = orbit.terms[static_cast<std::size_t>(t)];
        std::optional<Rational> got;
        try {
            got = custom ? custom(spec, n, i) : evaluate(report.evaluator, spec, n, i);
        } catch (const ZeroDenominator&) {
        }
        ++report.checked;
        if (!got || *got != want) report.mismatches.push_back({t, got, want});
    }
    return report;
}

}  // namespace rde
