#include "rde/analysis.hpp"
#include "support.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace rde;
using Catch::Approx;
using rde::test::make_spec;
using rde::test::q;
using rde::test::qs;

namespace {

SystemSpec figure1() {
    return make_spec(2, Rational(2), Rational(-1), qs({"-2", "-3", "-4", "1", "-1/2", "-1/3", "-1/4", "1"}));
}
SystemSpec figure2() {
    return make_spec(2, Rational(2), Rational(1), qs({"2", "3", "4", "1", "1/2", "1/3", "1/4", "1"}));
}

std::vector<Rational> values_of(const std::vector<Equilibrium>& eqs) {
    std::vector<Rational> out;
    for (const auto& e : eqs) {
        REQUIRE(e.exact.has_value());
        out.push_back(*e.exact);
    }
    return out;
}

}  // namespace

TEST_CASE("equilibria", "[analysis]") {
    CHECK(values_of(equilibria(Rational(2), Rational(-1), 2)) == qs({"0", "1", "-1"}));
    CHECK(values_of(equilibria(Rational(1), Rational(5), 3)) == qs({"0"}));
    CHECK(values_of(equilibria(Rational(3), Rational(1), 2)) == qs({"0"}));
    CHECK(values_of(equilibria(Rational(-7), Rational(1), 3)) == qs({"0", "2"}));
    CHECK(values_of(equilibria(Rational(9), Rational(1), 3)) == qs({"0", "-2"}));
    CHECK(values_of(equilibria(q("7/16"), q("1/4"), 2)) == qs({"0", "3/2", "-3/2"}));

    // irrational root: float descriptor satisfies A + B u^k - 1 = 0
    const auto irr = equilibria(Rational(3), Rational(-1), 3);  // u^3 = 2
    REQUIRE(irr.size() == 2);
    CHECK_FALSE(irr[1].exact.has_value());
    CHECK(std::abs(3.0 - std::pow(irr[1].value, 3) - 1.0) < 1e-12);

    const auto even = equilibria(Rational(-1), Rational(3), 4);  // u^4 = 2/3
    REQUIRE(even.size() == 3);
    for (std::size_t t = 1; t < 3; ++t) CHECK(std::abs(-1.0 + 3.0 * std::pow(even[t].value, 4) - 1.0) < 1e-12);
    CHECK(even[1].value == -even[2].value);

    const auto cubic = equilibria(q("-5/3"), q("1/3"), 3);
    REQUIRE(cubic.size() == 2);
    CHECK(q("-5/3") + q("1/3") * pow(*cubic[1].exact, 3) - Rational(1) == Rational(0));

    CHECK_THROWS_AS(equilibria(Rational(2), Rational(0), 2), DegenerateB);
}

TEST_CASE("zero-equilibrium roots", "[analysis]") {
    const RootSet unit = char_roots_zero(Rational(1), 1);
    REQUIRE(unit.roots.size() == 4);
    for (const auto& r : unit.roots) {
        CHECK(r.modulus == Approx(1.0).margin(1e-15));
        CHECK(std::abs(std::pow(r.value, 4) - 1.0) < 1e-12);
    }

    const RootSet two = char_roots_zero(Rational(2), 2);
    REQUIRE(two.roots.size() == 8);
    for (const auto& r : two.roots) {
        CHECK(std::abs(std::abs(r.value) - std::pow(2.0, -1.0 / 8)) < 1e-12);
        CHECK(std::abs(std::pow(r.value, 8) - 0.5) < 1e-12);
    }
    CHECK(two.max_modulus() == Approx(0.917).margin(1e-3));

    const RootSet half = char_roots_zero(q("1/2"), 1);
    CHECK(half.max_modulus() == Approx(std::pow(2.0, 0.25)).epsilon(1e-14));

    const RootSet neg = char_roots_zero(q("-3"), 2);
    for (const auto& r : neg.roots) CHECK(std::abs(std::pow(r.value, 8) + 1.0 / 3.0) < 1e-12);
}

TEST_CASE("nonzero-equilibrium roots", "[analysis]") {
    SECTION("k = 1 leaves only the fourth roots of A") {
        const RootSet s = char_roots_nonzero(Rational(2), 1);
        REQUIRE(s.roots.size() == 4);
        for (const auto& r : s.roots) {
            CHECK(r.source == Root::Source::fourth_root_of_A);
            CHECK(r.modulus == Approx(std::pow(2.0, 0.25)).epsilon(1e-14));
        }
    }
    SECTION("k = 2, A = 2") {
        const RootSet s = char_roots_nonzero(Rational(2), 2);
        REQUIRE(s.roots.size() == 8);
        std::vector<std::int64_t> ms;
        for (const auto& r : s.roots)
            if (r.source == Root::Source::unit_circle_exponent) ms.push_back(r.index);
        CHECK(ms == std::vector<std::int64_t>{1, 3, 5, 7});
        CHECK(s.has_unit_modulus());
    }
    SECTION("k = 2, A = -1 has a repeated unit-circle set") {
        const RootSet s = char_roots_nonzero(Rational(-1), 2);
        REQUIRE(s.roots.size() == 8);
        for (const auto& r : s.roots) CHECK(std::abs(std::abs(r.value) - 1.0) < 1e-12);
    }
    CHECK_THROWS_AS(char_roots_nonzero(Rational(1), 2), ValidationError);
}

TEST_CASE("nonzero-equilibrium root properties", "[analysis][property]") {
    for (const char* a : {"2", "-1", "1/2", "-3", "5", "-2/7", "3/2", "0"}) {
        const Rational A = q(a);
        for (std::int64_t k = 1; k <= 5; ++k) {
            const RootSet s = char_roots_nonzero(A, k);
            REQUIRE(static_cast<std::int64_t>(s.roots.size()) == 4 * k);
            for (const auto& r : s.roots) {
                CHECK(nonzero_char_residual(r.value, A, k) < 1e-9);
                CHECK(std::abs(std::pow(r.value, 4) - 1.0) > 1e-6);  // spurious roots excluded
            }
            if (k > 1) CHECK(s.has_unit_modulus());

            // companion-matrix cross-check: each analytic root has a numeric
            // partner (loose tolerance: A = -1 produces double roots)
            if (A == Rational(0)) continue;
            const auto numeric = companion_roots_nonzero(A, k);
            REQUIRE(numeric.size() == s.roots.size());
            for (const auto& r : s.roots) {
                double best = 1e300;
                for (const auto& z : numeric) best = std::min(best, std::abs(z - r.value));
                CHECK(best < 1e-6);
            }
        }
    }
}

TEST_CASE("classification", "[analysis]") {
    SECTION("figure 2: |A| > 1") {
        const StabilityReport r = classify(figure2());
        REQUIRE(r.equilibria.size() == 1);  // u^2 = -1 has no real root
        CHECK(r.zero().classification == Stability::locally_asymptotically_stable);
        REQUIRE(r.nonzero_roots.has_value());
        CHECK(r.nonzero_roots->has_unit_modulus());
    }
    SECTION("figure 1: nonzero equilibria are non-hyperbolic") {
        const StabilityReport r = classify(figure1());
        REQUIRE(r.equilibria.size() == 3);
        CHECK(r.zero().classification == Stability::locally_asymptotically_stable);
        CHECK(r.equilibria[1].classification == Stability::non_hyperbolic);
        CHECK(r.equilibria[2].classification == Stability::non_hyperbolic);
    }
    SECTION("A = 1, B > 0, positive data: globally asymptotically stable") {
        const auto s = make_spec(2, Rational(1), Rational(2), qs({"2", "3", "4", "1", "1/2", "1/3", "1/4", "1"}));
        CHECK(classify(s).zero().classification == Stability::globally_asymptotically_stable);
    }
    SECTION("A = 1 otherwise: non-hyperbolic") {
        const auto neg_b = make_spec(1, Rational(1), Rational(-2), qs({"1", "1", "1", "1"}));
        CHECK(classify(neg_b).zero().classification == Stability::non_hyperbolic);
        const auto neg_u = make_spec(1, Rational(1), Rational(2), qs({"1", "-1", "1", "1"}));
        CHECK(classify(neg_u).zero().classification == Stability::non_hyperbolic);
        for (const auto& r : classify(neg_u).zero().roots.roots) CHECK(r.modulus == Approx(1.0));
    }
    SECTION("|A| < 1: unstable") {
        const auto s = make_spec(1, q("1/3"), Rational(1), qs({"1", "1", "1", "1"}));
        const StabilityReport r = classify(s);
        CHECK(r.zero().classification == Stability::unstable);
        CHECK(r.zero().roots.max_modulus() == Approx(std::pow(3.0, 0.25)));
        // k = 1 nonzero equilibrium u = 2/3: fourth roots of 1/3 lie inside the unit circle
        REQUIRE(r.equilibria.size() == 2);
        CHECK(*r.equilibria[1].equilibrium.exact == q("2/3"));
        CHECK(r.equilibria[1].classification == Stability::locally_asymptotically_stable);
    }
    SECTION("A = -1 at zero is left unclassified") {
        const auto s = make_spec(2, Rational(-1), Rational(1), qs({"1", "1", "1", "1", "1", "1", "1", "1"}));
        const StabilityReport r = classify(s);
        CHECK(r.zero().classification == Stability::unclassified);
        for (const auto& root : r.zero().roots.roots) CHECK(root.modulus == Approx(1.0));
    }
    CHECK_THROWS_AS(classify(make_spec(1, Rational(2), Rational(0), qs({"1", "1", "1", "1"}))), DegenerateB);
    CHECK_THROWS_AS(classify(make_spec(1, SequenceSpec::periodic(qs({"1", "2"})), Rational(1), qs({"1", "1", "1", "1"}))),
                    ValidationError);
}

TEST_CASE("theta factors", "[analysis]") {
    const auto h = make_spec(1, Rational(1), Rational(1), qs({"1", "1", "1", "1"}));
    CHECK(theta_factors(h, 0, 3) == qs({"1/2", "2/3", "3/4"}));

    rde::test::SpecGenerator gen(11);
    for (int t = 0; t < 20; ++t) {
        SystemSpec s;
        s.k = gen.pick_k();
        s.A = Rational(1);
        s.B = abs(gen.small());
        for (std::int64_t i = 0; i < 4 * s.k; ++i) s.initial.push_back(abs(gen.small()));
        const std::int64_t n = 6;
        const Orbit o = iterate(s, 4 * s.k * n + 4 * s.k - 1);
        REQUIRE(o.complete());
        for (std::int64_t i = 0; i < s.order(); ++i) {
            const auto factors = theta_factors(s, i, n);
            Rational prod(1);
            for (std::int64_t m = 0; m < n; ++m) {
                const Rational& f = factors[static_cast<std::size_t>(m)];
                REQUIRE(f > Rational(0));
                REQUIRE(f < Rational(1));
                prod *= f;
                REQUIRE(prod == o.terms[static_cast<std::size_t>(4 * s.k * (m + 1) + i)] / s.initial[static_cast<std::size_t>(i)]);
            }
        }
    }
    CHECK_THROWS_AS(theta_factors(figure2(), 0, 3), ValidationError);
}

TEST_CASE("period prediction", "[analysis]") {
    const PeriodPrediction fig = predict_period(figure1());
    CHECK(fig.period == 8);
    CHECK(fig.tag == PeriodTag::thm41);

    const auto odd = make_spec(3, Rational(-1), q("3/2"),
                               qs({"2", "-1", "1/3", "4", "5", "2/3", "-3", "1", "-2", "3", "1/2", "5/4"}));
    const PeriodPrediction p_odd = predict_period(odd);
    CHECK(p_odd.period == 24);
    CHECK(p_odd.tag == PeriodTag::a_minus1_k_odd);

    const auto even = make_spec(2, Rational(-1), Rational(1), qs({"2", "1", "4", "-1", "1", "2", "1/2", "-2"}));
    const PeriodPrediction p_even = predict_period(even);
    CHECK(p_even.period == 8);
    CHECK(p_even.tag == PeriodTag::a_minus1_k_even_unit_factor);

    // bracket -1 on class 0 and +1 elsewhere: factor (-1)^n, period 8k
    const auto mixed = make_spec(2, Rational(-1), Rational(1), qs({"0", "1", "4", "-1", "1", "2", "1/2", "-2"}));
    CHECK(predict_period(mixed).period == 16);
    CHECK(detect_period(iterate(mixed, 64), 16) == 16);

    const auto generic = make_spec(2, Rational(-1), Rational(1), qs({"3", "1", "4", "-1", "1", "2", "1/2", "-2"}));
    CHECK_FALSE(predict_period(generic).period.has_value());

    CHECK_FALSE(predict_period(figure2()).period.has_value());
    const auto forbidden = make_spec(1, Rational(-1), Rational(1), qs({"1", "2", "2", "2"}));
    CHECK_FALSE(predict_period(forbidden).period.has_value());
}

TEST_CASE("period detection", "[analysis]") {
    CHECK(detect_period(iterate(figure1(), 48), 16) == 8);

    Orbit flat;
    flat.terms.assign(30, Rational(7));
    CHECK(detect_period(flat, 10) == 1);

    const auto h = make_spec(1, Rational(1), Rational(1), qs({"1", "1", "1", "1"}));
    CHECK_FALSE(detect_period(iterate(h, 60), 16).has_value());

    CHECK_THROWS_AS(detect_period(iterate(figure1(), 40), 16), InsufficientHorizon);
}

TEST_CASE("prediction and detection agree", "[analysis][property]") {
    rde::test::SpecGenerator gen(4141);
    int predicted = 0;
    for (int t = 0; t < 200; ++t) {
        SystemSpec s = gen.spec();
        s.A = SequenceSpec::constant(t % 3 == 0 ? Rational(-1) : gen.small());
        s.B = SequenceSpec::constant(gen.small());
        if (t % 2 == 0 && s.A.term(0) != Rational(1)) {
            // force the product condition on every residue class
            const Rational target = (Rational(1) - s.A.term(0)) / s.B.term(0);
            for (std::int64_t p = 0; p < 4; ++p) {
                Rational rest(1);
                for (std::int64_t j = 0; j + 1 < s.k; ++j) rest *= s.initial[static_cast<std::size_t>(p + 4 * j)];
                s.initial[static_cast<std::size_t>(p + 4 * (s.k - 1))] = target / rest;
            }
        }
        const PeriodPrediction pred = predict_period(s);
        if (!pred.period) continue;
        const Orbit o = iterate(s, 3 * *pred.period + 8);
        if (!o.complete()) continue;
        ++predicted;
        const auto det = detect_period(o, *pred.period);
        REQUIRE(det.has_value());
        REQUIRE(*pred.period % *det == 0);
    }
    CHECK(predicted > 60);
}

TEST_CASE("A = 1, B > 0 subsequences decrease to zero", "[analysis][property]") {
    rde::test::SpecGenerator gen(808);
    for (int t = 0; t < 25; ++t) {
        SystemSpec s;
        s.k = gen.pick_k();
        s.A = Rational(1);
        s.B = abs(gen.small());
        for (std::int64_t i = 0; i < 4 * s.k; ++i) s.initial.push_back(abs(gen.small()));
        const Orbit o = iterate(s, 40 * s.k);
        REQUIRE(o.complete());
        for (std::int64_t idx = s.order(); idx <= o.last_index(); ++idx) {
            const Rational& now = o.terms[static_cast<std::size_t>(idx)];
            REQUIRE(now > Rational(0));
            REQUIRE(now < o.terms[static_cast<std::size_t>(idx - s.order())]);
        }
    }
}
