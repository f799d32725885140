#pragma once

// The reduction invariant r[n] = 1 / (u[n] u[n+4] ... u[n+4k-4]), its affine
// recurrence r[n+4] = A[n] r[n] + B[n], and the symmetry generators
// alpha[n] = exp(2 pi i m n / 4k) for the admissible exponents m.

#include "rde/core.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <optional>
#include <vector>

namespace rde {

struct InvariantSeries {
    std::map<std::int64_t, Rational> values;
    std::optional<std::int64_t> residue;  // set when produced by r_closed for one class j
};

// r[n] for every n whose k factors lie inside the orbit.
inline InvariantSeries r_from_orbit(const Orbit& orbit, std::int64_t k) {
    InvariantSeries series;
    for (std::int64_t n = 0; n + 4 * (k - 1) <= orbit.last_index(); ++n) {
        Rational prod(1);
        for (std::int64_t i = 0; i < k; ++i) prod *= orbit.terms[static_cast<std::size_t>(n + 4 * i)];
        if (prod.is_zero()) throw ZeroFactor("orbit has a zero factor in r[" + std::to_string(n) + "]");
        series.values.emplace(n, Rational(1) / prod);
    }
    return series;
}

// r[n+4] == A[n] r[n] + B[n] at every n where both sides are covered.
inline bool check_r_recurrence(const InvariantSeries& series, const SystemSpec& spec) {
    for (const auto& [n, r] : series.values) {
        auto next = series.values.find(n + 4);
        if (next == series.values.end()) continue;
        if (next->second != spec.A.term(n) * r + spec.B.term(n)) return false;
    }
    return true;
}

// r[4n + j] = r[j] prod_{t<n} A[4t+j] + sum_{l<n} B[4l+j] prod_{l<t<n} A[4t+j]
inline Rational r_closed(const SystemSpec& spec, std::int64_t n, std::int64_t j) {
    spec.validate();
    if (j < 0 || j > 3) throw IndexOutOfRange("residue j must be in 0..3");
    if (n < 0) throw IndexOutOfRange("n must be non-negative");
    const Rational p = spec.class_product(j);
    if (p.is_zero()) throw ZeroFactor("initial data has a zero factor in r[" + std::to_string(j) + "]");
    Rational lead = Rational(1) / p;
    Rational sum(0);
    Rational tail(1);
    for (std::int64_t l = n - 1; l >= 0; --l) {
        sum += spec.B.term(4 * l + j) * tail;
        tail *= spec.A.term(4 * l + j);
    }
    return lead * tail + sum;  // tail == prod_{t<n} A[4t+j] after the loop
}

// u[4kn + i] = u[i] prod_{s<n} r[4ks + i] / r[4ks + 4 + i]
inline Rational u_from_r(const SystemSpec& spec, std::int64_t n, std::int64_t i) {
    spec.validate();
    if (i < 0 || i >= spec.order()) throw IndexOutOfRange("offset outside 0..4k-1");
    if (n < 0) throw IndexOutOfRange("n must be non-negative");
    auto r_at = [&](std::int64_t idx) {
        Rational r = r_closed(spec, floor4(idx), tau(idx));
        if (r.is_zero()) throw ZeroFactor("r[" + std::to_string(idx) + "] vanishes");
        return r;
    };
    Rational u = spec.initial[static_cast<std::size_t>(i)];
    for (std::int64_t s = 0; s < n; ++s) {
        const std::int64_t base = 4 * spec.k * s + i;
        u *= r_at(base) / r_at(base + 4);
    }
    return u;
}

// ---------------------------------------------------------------------------
// symmetry generators

struct SymmetryCheck {
    std::int64_t exponent = 0;  // root = exp(2 pi i m / 4k)
    bool exact = false;         // 1 + r^4 + ... + r^(4k-4) == 0 by exponent arithmetic
    double residual = 0.0;      // |sum_{t<k} exp(2 pi i 4 m t / 4k)|
};

struct SymmetryCertificate {
    std::int64_t k = 0;
    std::vector<SymmetryCheck> checks;

    std::vector<std::int64_t> exponents() const {
        std::vector<std::int64_t> out;
        for (const auto& c : checks) out.push_back(c.exponent);
        return out;
    }
    bool all_pass(double tol = 1e-12) const {
        for (const auto& c : checks)
            if (!c.exact || !(c.residual < tol)) return false;
        return true;
    }
};

inline std::complex<double> unit_root(std::int64_t m, std::int64_t n) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(m % n) / static_cast<double>(n);
    return std::polar(1.0, theta);
}

// Roots of 1 + r^4 + ... + r^(4k-4) = 0: the 4k-th roots of unity r^m with
// r^4 != 1, i.e. m mod k != 0. Empty for k = 1.
inline SymmetryCertificate symmetry_roots(std::int64_t k) {
    if (k < 1) throw ValidationError("k must be at least 1");
    SymmetryCertificate cert;
    cert.k = k;
    const std::int64_t order = 4 * k;
    for (std::int64_t s = 1; s < k; ++s) {
        for (std::int64_t quarter = 0; quarter < 4; ++quarter) {
            const std::int64_t m = s + quarter * k;
            SymmetryCheck c;
            c.exponent = m;
            // r^(4k) = 1 always; the geometric sum vanishes iff r^4 != 1.
            c.exact = (4 * m) % order != 0;
            std::complex<double> sum{0.0, 0.0};
            for (std::int64_t t = 0; t < k; ++t) sum += unit_root(4 * m * t, order);
            c.residual = std::abs(sum);
            cert.checks.push_back(c);
        }
    }
    std::sort(cert.checks.begin(), cert.checks.end(),
              [](const SymmetryCheck& a, const SymmetryCheck& b) { return a.exponent < b.exponent; });
    return cert;
}

// max over n in [0, n_max] of |alpha[n] + alpha[n+4] + ... + alpha[n+4k-4]|
// for alpha[n] = exp(2 pi i m n / 4k).
inline double alpha_constraint_residual(std::int64_t k, std::int64_t m, std::int64_t n_max) {
    double worst = 0.0;
    for (std::int64_t n = 0; n <= n_max; ++n) {
        std::complex<double> sum{0.0, 0.0};
        for (std::int64_t t = 0; t < k; ++t) sum += unit_root(m * (n + 4 * t), 4 * k);
        worst = std::max(worst, std::abs(sum));
    }
    return worst;
}

}  // namespace rde
