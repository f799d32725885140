#pragma once

// Test-only helpers: fixtures, a seeded spec generator, and a brute-force
// evaluation of the closed form that shares no code with the library's
// evaluators (every nested product and sum is rebuilt from scratch).

#include "rde/core.hpp"

#include <random>
#include <string>
#include <vector>

namespace rde::test {

inline Rational q(const char* text) { return Rational::parse(text); }

inline std::vector<Rational> qs(std::initializer_list<const char*> texts) {
    std::vector<Rational> out;
    for (const char* t : texts) out.push_back(Rational::parse(t));
    return out;
}

inline SystemSpec make_spec(std::int64_t k, SequenceSpec A, SequenceSpec B, std::vector<Rational> initial,
                            Form form = Form::u) {
    SystemSpec s;
    s.k = k;
    s.A = std::move(A);
    s.B = std::move(B);
    s.initial = std::move(initial);
    s.form = form;
    s.validate();
    return s;
}

// Initial block with u[0] = first and every other entry 1.
inline std::vector<Rational> ones_except_first(std::int64_t k, Rational first) {
    std::vector<Rational> v(static_cast<std::size_t>(4 * k), Rational(1));
    v[0] = std::move(first);
    return v;
}

// u[4kn+i] by the literal nested products and sums, with no reuse between
// blocks or levels.
inline Rational brute_closed_form(const SystemSpec& spec, std::int64_t n, std::int64_t i) {
    const std::int64_t k = spec.k;
    const std::int64_t j = i % 4;
    const std::int64_t m0 = i / 4;
    Rational P(1);
    for (std::int64_t t = 0; t < k; ++t) P *= spec.initial[static_cast<std::size_t>(j + 4 * t)];

    auto bracket = [&](std::int64_t upper) {  // sums/products run to upper-1
        Rational prod(1);
        for (std::int64_t k1 = 0; k1 <= upper - 1; ++k1) prod *= spec.A.term(4 * k1 + j);
        Rational sum(0);
        for (std::int64_t l = 0; l <= upper - 1; ++l) {
            Rational inner(1);
            for (std::int64_t k2 = l + 1; k2 <= upper - 1; ++k2) inner *= spec.A.term(4 * k2 + j);
            sum += spec.B.term(4 * l + j) * inner;
        }
        return prod + P * sum;
    };

    Rational u = spec.initial[static_cast<std::size_t>(i)];
    for (std::int64_t s = 0; s < n; ++s) u *= bracket(k * s + m0) / bracket(k * s + m0 + 1);
    return u;
}

class SpecGenerator {
public:
    explicit SpecGenerator(std::uint64_t seed) : rng_(seed) {}

    // p/q with p, q in [-5, 5] \ {0}
    Rational small() {
        std::uniform_int_distribution<int> d(1, 10);
        auto draw = [&] {
            int v = d(rng_);
            return v <= 5 ? v : 5 - v;  // 1..5, -1..-5
        };
        return Rational(draw(), draw());
    }

    std::int64_t pick_k() { return std::uniform_int_distribution<int>(1, 3)(rng_); }
    bool coin() { return std::uniform_int_distribution<int>(0, 1)(rng_) == 1; }
    int roll(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    SequenceSpec coefficient() {
        if (coin()) {
            // bias toward the special constants so every evaluator gets exercised
            switch (roll(0, 3)) {
                case 0: return SequenceSpec::constant(Rational(1));
                case 1: return SequenceSpec::constant(Rational(-1));
                default: return SequenceSpec::constant(small());
            }
        }
        return SequenceSpec::periodic({small(), small(), small(), small()});
    }

    SystemSpec spec() {
        SystemSpec s;
        s.k = pick_k();
        s.A = coefficient();
        s.B = coin() ? SequenceSpec::constant(small()) : coefficient();
        for (std::int64_t t = 0; t < 4 * s.k; ++t) s.initial.push_back(small());
        s.form = coin() ? Form::u : Form::eta;
        return s;
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

}  // namespace rde::test
