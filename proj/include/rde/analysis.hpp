#pragma once

// Equilibria, linearization roots, stability labels and periodicity for the
// constant-coefficient equation u[n+4k] = u[n] / (A + B u[n] ... u[n+4k-4]).

#include "rde/core.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rde {

class DegenerateB : public Error {
public:
    DegenerateB() : Error("B = 0: the equation is linear, u[n+4k] = u[n] / A") {}
};

class InsufficientHorizon : public Error {
public:
    using Error::Error;
};

// ---------------------------------------------------------------------------
// equilibria

namespace detail {

// floor(x^(1/k)) for x >= 0
inline BigInt integer_root(const BigInt& x, std::int64_t k) {
    if (x < 2) return x;
    BigInt lo = 0;
    BigInt hi = 1;
    while (boost::multiprecision::pow(hi, static_cast<unsigned>(k)) <= x) hi *= 2;
    while (hi - lo > 1) {
        BigInt mid = (lo + hi) / 2;
        if (boost::multiprecision::pow(mid, static_cast<unsigned>(k)) <= x)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

// The positive rational k-th root of q > 0, when it exists.
inline std::optional<Rational> exact_root(const Rational& q, std::int64_t k) {
    const BigInt n = q.numerator();
    const BigInt d = q.denominator();
    BigInt rn = integer_root(n, k);
    BigInt rd = integer_root(d, k);
    if (boost::multiprecision::pow(rn, static_cast<unsigned>(k)) != n ||
        boost::multiprecision::pow(rd, static_cast<unsigned>(k)) != d)
        return std::nullopt;
    return Rational(rn, rd);
}

}  // namespace detail

struct Equilibrium {
    enum class Kind { zero, nonzero };
    Kind kind = Kind::zero;
    std::optional<Rational> exact;  // set when the value is rational
    double value = 0.0;

    std::string describe() const {
        if (exact) return exact->str();
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", value);
        return buf;
    }
};

// Zero plus the real k-th roots of (1 - A) / B.
inline std::vector<Equilibrium> equilibria(const Rational& A, const Rational& B, std::int64_t k) {
    if (B.is_zero()) throw DegenerateB();
    if (k < 1) throw ValidationError("k must be at least 1");
    std::vector<Equilibrium> out{{Equilibrium::Kind::zero, Rational(0), 0.0}};
    const Rational c = (Rational(1) - A) / B;
    if (c.is_zero()) return out;
    if (k % 2 == 0 && c.sign() < 0) return out;

    const Rational mag = abs(c);
    const std::optional<Rational> root = detail::exact_root(mag, k);
    const double approx = std::pow(mag.to_double(), 1.0 / static_cast<double>(k));
    auto make = [&](int sign) {
        Equilibrium e{Equilibrium::Kind::nonzero, std::nullopt, sign * approx};
        if (root) {
            e.exact = sign > 0 ? *root : -*root;
            e.value = e.exact->to_double();
        }
        return e;
    };
    if (k % 2 == 1) {
        out.push_back(make(c.sign()));
    } else {
        out.push_back(make(+1));
        out.push_back(make(-1));
    }
    return out;
}

// ---------------------------------------------------------------------------
// characteristic roots

struct Root {
    enum class Source { unit_circle_exponent, fourth_root_of_A, direct };
    std::complex<double> value;
    double modulus = 0.0;
    Source source = Source::direct;
    std::int64_t index = 0;  // m for unit_circle_exponent/direct, r for fourth_root_of_A
};

struct RootSet {
    std::vector<Root> roots;

    double max_modulus() const {
        double m = 0.0;
        for (const auto& r : roots) m = std::max(m, r.modulus);
        return m;
    }
    bool has_unit_modulus(double tol = 1e-12) const {
        return std::any_of(roots.begin(), roots.end(),
                           [&](const Root& r) { return std::abs(r.modulus - 1.0) <= tol; });
    }
};

// Zero equilibrium: lambda^(4k) = 1/A. All 4k roots share modulus |A|^(-1/4k).
inline RootSet char_roots_zero(const Rational& A, std::int64_t k) {
    if (A.is_zero()) throw ValidationError("A must be non-zero");
    const std::int64_t order = 4 * k;
    const double modulus = std::pow(std::abs(A.to_double()), -1.0 / static_cast<double>(order));
    const double phase = A.sign() > 0 ? 0.0 : 0.5;
    RootSet set;
    for (std::int64_t m = 0; m < order; ++m) {
        const double theta = 2.0 * std::numbers::pi * (static_cast<double>(m) + phase) /
                             static_cast<double>(order);
        set.roots.push_back({std::polar(modulus, theta), modulus, Root::Source::direct, m});
    }
    return set;
}

// Nonzero equilibria: roots of
//     lambda^(4k) - (A-1)(lambda^(4k-4) + ... + lambda^4) - A = 0.
// Multiplying by (1 - lambda^4) gives (1 - lambda^(4k))(lambda^4 - A) = 0; the
// four roots with lambda^4 = 1 that this introduces are dropped.
inline RootSet char_roots_nonzero(const Rational& A, std::int64_t k) {
    if (A == Rational(1)) throw ValidationError("A = 1 has no nonzero equilibrium");
    if (k < 1) throw ValidationError("k must be at least 1");
    const std::int64_t order = 4 * k;
    RootSet set;
    for (std::int64_t m = 0; m < order; ++m) {
        if ((4 * m) % order == 0) continue;  // lambda^4 == 1 exactly
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(order);
        set.roots.push_back({std::polar(1.0, theta), 1.0, Root::Source::unit_circle_exponent, m});
    }
    const double a = A.to_double();
    const double modulus = std::pow(std::abs(a), 0.25);
    const double arg = a > 0 ? 0.0 : std::numbers::pi;
    for (std::int64_t r = 0; r < 4; ++r) {
        const double theta = (arg + 2.0 * std::numbers::pi * static_cast<double>(r)) / 4.0;
        set.roots.push_back({std::polar(modulus, theta), modulus, Root::Source::fourth_root_of_A, r});
    }
    return set;
}

// |lambda^(4k) - (A-1)(lambda^(4k-4) + ... + lambda^4) - A|
inline double nonzero_char_residual(std::complex<double> lambda, const Rational& A, std::int64_t k) {
    const std::complex<double> x = lambda * lambda * lambda * lambda;
    const double a = A.to_double();
    std::complex<double> middle{0.0, 0.0};
    std::complex<double> power{1.0, 0.0};
    for (std::int64_t t = 1; t < k; ++t) {
        power *= x;
        middle += power;
    }
    return std::abs(power * x - (a - 1.0) * middle - a);
}

// Eigenvalues of the companion matrix of the same polynomial. Used as an
// independent numeric cross-check of char_roots_nonzero.
inline std::vector<std::complex<double>> companion_roots_nonzero(const Rational& A, std::int64_t k) {
    const auto degree = static_cast<Eigen::Index>(4 * k);
    const double a = A.to_double();
    // monic: lambda^d + c[d-1] lambda^(d-1) + ... + c[0]
    Eigen::VectorXd c = Eigen::VectorXd::Zero(degree);
    c(0) = -a;
    for (std::int64_t t = 1; t < k; ++t) c(static_cast<Eigen::Index>(4 * t)) = -(a - 1.0);
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
    for (Eigen::Index i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
    for (Eigen::Index i = 0; i < degree; ++i) companion(i, degree - 1) = -c(i);
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    std::vector<std::complex<double>> out;
    for (Eigen::Index i = 0; i < degree; ++i) out.push_back(solver.eigenvalues()(i));
    return out;
}

// ---------------------------------------------------------------------------
// stability

enum class Stability {
    locally_asymptotically_stable,
    unstable,
    non_hyperbolic,
    globally_asymptotically_stable,
    unclassified,
};

inline std::string_view stability_name(Stability s) {
    switch (s) {
        case Stability::locally_asymptotically_stable: return "locally asymptotically stable";
        case Stability::unstable: return "unstable";
        case Stability::non_hyperbolic: return "non-hyperbolic";
        case Stability::globally_asymptotically_stable: return "globally asymptotically stable";
        case Stability::unclassified: return "unclassified";
    }
    return "?";
}

struct EquilibriumReport {
    Equilibrium equilibrium;
    RootSet roots;
    Stability classification = Stability::unclassified;
    std::string reason;
};

struct StabilityReport {
    std::vector<EquilibriumReport> equilibria;
    // Linearization about a nonzero equilibrium (depends on A and k only).
    // Present whenever A != 1, even if no real nonzero equilibrium exists.
    std::optional<RootSet> nonzero_roots;

    const EquilibriumReport& zero() const { return equilibria.front(); }
};

namespace detail {

inline void require_constant_nondegenerate(const SystemSpec& spec) {
    spec.validate();
    if (!spec.A.is_constant() || !spec.B.is_constant())
        throw ValidationError("stability analysis needs constant coefficients");
    if (spec.B.term(0).is_zero()) throw DegenerateB();
}

}  // namespace detail

inline StabilityReport classify(const SystemSpec& spec) {
    detail::require_constant_nondegenerate(spec);
    const Rational& A = spec.A.term(0);
    const Rational& B = spec.B.term(0);
    const std::int64_t k = spec.k;
    const Rational abs_a = abs(A);
    const Rational one(1);

    StabilityReport report;
    if (A != one) report.nonzero_roots = char_roots_nonzero(A, k);

    for (const Equilibrium& eq : equilibria(A, B, k)) {
        EquilibriumReport entry{eq, {}, Stability::unclassified, {}};
        if (eq.kind == Equilibrium::Kind::zero) {
            entry.roots = char_roots_zero(A, k);
            if (A == one) {
                entry.classification = Stability::non_hyperbolic;
                entry.reason = "A=1: all roots on the unit circle";
                const bool nonneg = std::all_of(spec.initial.begin(), spec.initial.end(),
                                                [](const Rational& u) { return u.sign() >= 0; });
                if (B.sign() > 0 && nonneg) {
                    entry.classification = Stability::globally_asymptotically_stable;
                    entry.reason = "A=1, B>0, non-negative initial data";
                }
            } else if (abs_a > one) {
                entry.classification = Stability::locally_asymptotically_stable;
                entry.reason = "|A|>1";
            } else if (abs_a < one) {
                entry.classification = Stability::unstable;
                entry.reason = "|A|<1";
            } else {
                entry.reason = "|A|=1, A!=1: all roots on the unit circle, boundary case";
            }
        } else {
            entry.roots = *report.nonzero_roots;
            if (k > 1) {
                entry.classification = Stability::non_hyperbolic;
                entry.reason = "k>1: unit-circle roots present";
            } else if (abs_a > one) {
                entry.classification = Stability::unstable;
                entry.reason = "k=1: |A|^(1/4)>1";
            } else if (abs_a < one) {
                entry.classification = Stability::locally_asymptotically_stable;
                entry.reason = "k=1: |A|^(1/4)<1";
            } else {
                entry.classification = Stability::non_hyperbolic;
                entry.reason = "k=1: |A|=1";
            }
        }
        report.equilibria.push_back(std::move(entry));
    }
    return report;
}

// Theta(s) = 1 - BP / (1 + BP (ks + floor(i/4) + 1)) for s = 0 .. n-1, where
// P is the product of the initial values in residue class i mod 4. Their
// running product is u[4kn+i] / u[i] when A = 1.
inline std::vector<Rational> theta_factors(const SystemSpec& spec, std::int64_t i, std::int64_t n) {
    detail::require_constant_nondegenerate(spec);
    if (spec.A.term(0) != Rational(1)) throw ValidationError("theta factors need A = 1");
    if (spec.B.term(0).sign() <= 0) throw ValidationError("theta factors need B > 0");
    for (const auto& u : spec.initial)
        if (u.sign() <= 0) throw ValidationError("theta factors need positive initial data");
    if (i < 0 || i >= spec.order()) throw IndexOutOfRange("offset outside 0..4k-1");

    const Rational BP = spec.B.term(0) * spec.class_product(tau(i));
    std::vector<Rational> out;
    for (std::int64_t s = 0; s < n; ++s) {
        const Rational level(spec.k * s + floor4(i) + 1);
        out.push_back(Rational(1) - BP / (Rational(1) + BP * level));
    }
    return out;
}

// ---------------------------------------------------------------------------
// periodicity

enum class PeriodTag { thm41, a_minus1_k_odd, a_minus1_k_even_unit_factor, none };

inline std::string_view period_tag_name(PeriodTag t) {
    switch (t) {
        case PeriodTag::thm41: return "thm41";
        case PeriodTag::a_minus1_k_odd: return "a_minus1_k_odd";
        case PeriodTag::a_minus1_k_even_unit_factor: return "a_minus1_k_even_unit_factor";
        case PeriodTag::none: return "none";
    }
    return "?";
}

struct PeriodPrediction {
    std::optional<std::int64_t> period;
    PeriodTag tag = PeriodTag::none;
};

struct PeriodReport {
    std::optional<std::int64_t> predicted;
    PeriodTag tag = PeriodTag::none;
    std::optional<std::int64_t> detected;
    std::int64_t horizon = 0;
};

// Periods guaranteed by the structure of the constant-coefficient equation:
//  - A != 1, B != 0 and every residue-class product equal to (1-A)/B: 4k.
//  - A = -1: with c_p = -1 + B * (class product p), every c_p != 0 and
//      k odd: 8k;
//      k even, all c_p in {1, -1}: 4k if all are 1, else 8k.
inline PeriodPrediction predict_period(const SystemSpec& spec) {
    spec.validate();
    if (!spec.A.is_constant() || !spec.B.is_constant()) return {};
    const Rational& A = spec.A.term(0);
    const Rational& B = spec.B.term(0);
    const std::int64_t k = spec.k;

    bool thm41 = false;
    if (A != Rational(1) && !B.is_zero()) {
        const Rational target = (Rational(1) - A) / B;
        thm41 = true;
        for (std::int64_t p = 0; p < 4; ++p) thm41 = thm41 && spec.class_product(p) == target;
    }

    if (A == Rational(-1)) {
        bool valid = true;
        bool all_one = true;
        bool all_unit = true;
        for (std::int64_t p = 0; p < 4; ++p) {
            const Rational c = Rational(-1) + B * spec.class_product(p);
            valid = valid && !c.is_zero();
            all_one = all_one && c == Rational(1);
            all_unit = all_unit && (c == Rational(1) || c == Rational(-1));
        }
        if (!valid) return {};
        if (k % 2 == 1) {
            if (thm41) return {4 * k, PeriodTag::thm41};
            return {8 * k, PeriodTag::a_minus1_k_odd};
        }
        if (all_unit) return {all_one ? 4 * k : 8 * k, PeriodTag::a_minus1_k_even_unit_factor};
        return {};
    }
    if (thm41) return {4 * k, PeriodTag::thm41};
    return {};
}

// Smallest p <= max_period with terms[n+p] == terms[n] for every covered n.
inline std::optional<std::int64_t> detect_period(const Orbit& orbit, std::int64_t max_period) {
    if (max_period < 1) throw ValidationError("max_period must be positive");
    const auto size = static_cast<std::int64_t>(orbit.terms.size());
    if (size < 3 * max_period)
        throw InsufficientHorizon("need at least " + std::to_string(3 * max_period) +
                                  " terms, orbit has " + std::to_string(size));
    for (std::int64_t p = 1; p <= max_period; ++p) {
        bool periodic = true;
        for (std::int64_t n = 0; n + p < size && periodic; ++n)
            periodic = orbit.terms[static_cast<std::size_t>(n + p)] == orbit.terms[static_cast<std::size_t>(n)];
        if (periodic) return p;
    }
    return std::nullopt;
}

inline PeriodReport period_report(const SystemSpec& spec, std::int64_t horizon, std::int64_t max_period) {
    PeriodReport report;
    const PeriodPrediction prediction = predict_period(spec);
    report.predicted = prediction.period;
    report.tag = prediction.tag;
    report.horizon = horizon;
    report.detected = detect_period(iterate(spec, horizon), max_period);
    return report;
}

}  // namespace rde
