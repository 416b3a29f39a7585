#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "holodyn/operators/operator.hpp"
#include "holodyn/operators/radstrom.hpp"

using namespace holodyn;

namespace {

LaurentSeries mono(cplx c, int k) { return LaurentSeries::monomial(c, k); }

LaurentSeries exp_taylor(int hi) {
    std::vector<cplx> c(static_cast<std::size_t>(hi + 1));
    double fact = 1.0;
    for (int j = 0; j <= hi; ++j) {
        if (j > 0) fact *= j;
        c[static_cast<std::size_t>(j)] = 1.0 / fact;
    }
    return LaurentSeries(0, std::move(c));
}

LaurentSeries exp_inverse(int lo) {
    const LaurentSeries t = exp_taylor(lo);
    std::vector<cplx> c(t.coeffs().rbegin(), t.coeffs().rend());
    return LaurentSeries(-lo, std::move(c));
}

LaurentSeries random_poly(std::mt19937_64& rng, int lo, int hi, double r_in = 0.0, double r_out = kInf) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<cplx> c(static_cast<std::size_t>(hi - lo + 1));
    for (auto& v : c) v = {u(rng), u(rng)};
    return LaurentSeries(lo, std::move(c), r_in, r_out);
}

double coeff_distance(const LaurentSeries& f, const LaurentSeries& g) {
    double d = 0.0;
    for (int j = std::min(f.n_min(), g.n_min()); j <= std::max(f.n_max(), g.n_max()); ++j)
        d = std::max(d, std::abs(f.coeff(j) - g.coeff(j)));
    return d;
}

WeightedCompositionOp op(LaurentSeries w, Symbol s) { return WeightedCompositionOp(std::move(w), std::move(s)); }

}  // namespace

TEST(Apply, LinearSymbolExamples) {
    const auto T = op(mono(1.0, 1), Symbol::linear(0.5));
    EXPECT_EQ(coeff_distance(apply(T, LaurentSeries::constant(1.0)), mono(1.0, 1)), 0.0);
    EXPECT_EQ(coeff_distance(apply(T, mono(1.0, 1)), mono(0.5, 2)), 0.0);
}

TEST(Apply, InverseWeightShiftsDown) {
    const auto T = op(mono(1.0, -1), Symbol::linear(0.5));
    for (int j = -2; j <= 2; ++j)
        EXPECT_EQ(coeff_distance(apply(T, mono(1.0, j)), mono(std::ldexp(1.0, -j), j - 1)), 0.0) << j;
}

TEST(Apply, AnnulusEscapeIsDomainError) {
    const auto T = op(LaurentSeries::constant(1.0), Symbol::linear(2.0));
    const LaurentSeries f(0, {1.0, 1.0}, 0.0, 1.0);
    try {
        apply(T, f);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.reason(), Reason::Domain);
    }
}

TEST(Apply, InversionSymbolIsExact) {
    const auto T = op(LaurentSeries::constant(1.0), Symbol::inversion(2.0));
    EXPECT_EQ(coeff_distance(apply(T, mono(1.0, 1)), mono(2.0, -1)), 0.0);
    EXPECT_EQ(coeff_distance(apply(T, mono(1.0, -2)), mono(0.25, 2)), 0.0);
}

TEST(Apply, MoebiusSymbolMatchesPointwise) {
    // z / (2 - z) maps the unit disc into itself and fixes 0
    const Symbol psi = Symbol::moebius(1.0, 0.0, -1.0, 2.0);
    const LaurentSeries w(0, {1.0, 0.5}, 0.0, 1.0);
    const LaurentSeries f(-1, {1.0, 0.0, 0.0, 1.0}, 0.0, 1.0);
    const WeightedCompositionOp T(w, psi, DomainSpec::punctured_disc(1.0));
    const LaurentSeries g = apply(T, f);
    for (double r : {0.3, 0.6, 0.8})
        for (int i = 0; i < 16; ++i) {
            const cplx z = std::polar(r, 0.4 * i);
            const cplx exact = w(z) * f(psi(z));
            EXPECT_LT(std::abs(g(z) - exact), 1e-9 * std::max(1.0, std::abs(exact)));
        }
}

TEST(Iterate, Examples) {
    std::mt19937_64 rng(1);
    const auto f = random_poly(rng, -3, 3);
    const auto T = op(mono(1.0, 1), Symbol::linear(0.5));
    EXPECT_EQ(coeff_distance(iterate(T, f, 0), f), 0.0);
    const auto twice = op(LaurentSeries::constant(2.0), Symbol::linear(1.0));
    EXPECT_EQ(coeff_distance(iterate(twice, LaurentSeries::constant(1.0), 5), LaurentSeries::constant(32.0)), 0.0);
    EXPECT_EQ(coeff_distance(iterate(T, LaurentSeries::constant(1.0), 2), mono(0.5, 2)), 0.0);
}

TEST(Orbit, Examples) {
    const auto E = Exhaustion::punctured_plane();
    const CompactAnnulus ref(0.5, 2.0);
    const auto twice = op(LaurentSeries::constant(2.0), Symbol::linear(1.0));
    for (const auto& e : orbit(twice, LaurentSeries::constant(1.0), 4, true, E, 30, ref))
        EXPECT_EQ(coeff_distance(e.value, LaurentSeries::constant(1.0)), 0.0);

    const auto T = op(mono(1.0, 1), Symbol::linear(0.5));
    const auto o = orbit(T, LaurentSeries::constant(1.0), 3, false, E, 30, ref);
    ASSERT_EQ(o.size(), 4u);
    EXPECT_EQ(coeff_distance(o[1].value, mono(1.0, 1)), 0.0);
    EXPECT_EQ(coeff_distance(o[2].value, mono(0.5, 2)), 0.0);
    EXPECT_EQ(coeff_distance(o[3].value, mono(0.125, 3)), 0.0);

    const auto half = op(LaurentSeries::constant(1.0), Symbol::linear(0.5));
    const auto h = orbit(half, mono(1.0, 1), 2, false, E, 30, ref);
    EXPECT_EQ(coeff_distance(h[1].value, mono(0.5, 1)), 0.0);
    EXPECT_EQ(coeff_distance(h[2].value, mono(0.25, 1)), 0.0);
    EXPECT_DOUBLE_EQ(h[2].f_norm, f_norm(mono(0.25, 1), E));
}

TEST(Orbit, OverflowForcesNormalization) {
    const auto big = op(LaurentSeries::constant(1e200), Symbol::linear(1.0));
    const auto o = orbit(big, LaurentSeries::constant(1.0), 4, false, Exhaustion::punctured_plane(), 30,
                         CompactAnnulus(0.5, 2.0));
    for (const auto& e : o) EXPECT_TRUE(std::isfinite(std::abs(e.value.coeff(0))));
}

TEST(Semigroup, SquareOfOperator) {
    std::mt19937_64 rng(5);
    const CompactAnnulus K(0.5, 2.0);
    for (int trial = 0; trial < 10; ++trial) {
        const auto w = random_poly(rng, -2, 2);
        const auto T = op(w, Symbol::linear(cplx(0.6, 0.3)));
        const auto T2 = product(T, T);
        const auto f = random_poly(rng, -4, 4);
        const auto lhs = apply(T, apply(T, f));
        const auto rhs = apply(T2, f);
        EXPECT_LT(sup_norm(lhs - rhs, K), 1e-10 * sup_norm(lhs, K));
    }
}

TEST(Inverse, Examples) {
    const auto twice = op(LaurentSeries::constant(2.0), Symbol::linear(1.0));
    const auto inv = inverse(twice);
    EXPECT_EQ(coeff_distance(inv.multiplier_series(), LaurentSeries::constant(0.5)), 0.0);

    const auto T = op(mono(1.0, 1), Symbol::linear(0.5));
    const auto S = inverse(T);
    ASSERT_NE(S.symbol().as<Linear>(), nullptr);
    EXPECT_EQ(S.symbol().as<Linear>()->a, cplx(2.0));
    EXPECT_EQ(coeff_distance(S.multiplier_series(), mono(0.5, -1)), 0.0);

    const auto I = op(LaurentSeries::constant(1.0), Symbol::inversion(cplx(0.3, 0.7)));
    const auto J = inverse(I);
    ASSERT_NE(J.symbol().as<Inversion>(), nullptr);
    EXPECT_LT(std::abs(J.symbol().as<Inversion>()->a - cplx(0.3, 0.7)), 1e-15);
}

TEST(Inverse, RoundtripOnRandomProbes) {
    std::mt19937_64 rng(9);
    const auto E = Exhaustion::punctured_plane();
    std::uniform_int_distribution<int> kd(-3, 3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const cplx a = std::polar(trial % 2 ? 0.5 : 1.7, kTwoPi * u(rng));
        const Symbol psi = trial % 3 == 0 ? Symbol::inversion(a) : Symbol::linear(a);
        const WeightedCompositionOp T(mono(cplx(u(rng), 1.5), kd(rng)), psi);
        const auto S = inverse(T);
        const auto f = random_poly(rng, -3, 3);
        EXPECT_LT(f_norm(apply(T, apply(S, f)) - f, E), 1e-10) << trial;
    }
}

TEST(Inverse, RoundtripWithExponentialWeight) {
    // e^W cannot be represented out to the large exhaustion members, so the check is local.
    std::mt19937_64 rng(4);
    const CompactAnnulus K(0.5, 2.0);
    for (int trial = 0; trial < 10; ++trial) {
        const cplx a = trial % 2 ? cplx(0.5, 0.2) : cplx(1.5, -0.4);
        const Symbol psi = trial % 3 == 0 ? Symbol::inversion(a) : Symbol::linear(a);
        const WeightedCompositionOp T(SymbolicMultiplier{trial % 7 - 3, 0.3 * random_poly(rng, -2, 2)}, psi);
        const auto S = inverse(T);
        const auto f = random_poly(rng, -3, 3);
        EXPECT_LT(sup_norm(apply(T, apply(S, f)) - f, K), 1e-8 * sup_norm(f, K)) << trial;
    }
}

TEST(Conjugation, InversionImage) {
    const auto T = op(mono(1.0, 1), Symbol::linear(0.5));
    const auto C = conjugate_by_inversion(T);
    ASSERT_NE(C.symbol().as<Linear>(), nullptr);
    EXPECT_LT(std::abs(C.symbol().as<Linear>()->a - cplx(2.0)), 1e-15);
    EXPECT_EQ(coeff_distance(C.multiplier_series(), mono(1.0, -1)), 0.0);
}

TEST(Winding, Examples) {
    EXPECT_EQ(winding_number(mono(1.0, 2), CircleContour{1.0, 4096}).k, 2);
    EXPECT_EQ(winding_number(exp_inverse(30).shifted(1), CircleContour{1.0, 4096}).k, 1);
    const LaurentSeries w = multiply(exp_taylor(30), exp_inverse(30), Window{-40, 40}).shifted(-3);
    const auto inner = winding_number(w, CircleContour{0.7, 4096});
    const auto outer = winding_number(w, CircleContour{1.3, 4096});
    EXPECT_EQ(inner.k, -3);
    EXPECT_EQ(outer.k, -3);
    EXPECT_LT(inner.distance, 1e-9);
}

TEST(Winding, ZeroOnContourFails) {
    const LaurentSeries f(0, {-1.0, 1.0});
    try {
        winding_number(f, CircleContour{1.0, 64});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.reason(), Reason::Numerical);
    }
}

TEST(Winding, ContourIndependence) {
    std::mt19937_64 rng(2);
    for (int k = -3; k <= 3; ++k) {
        const SymbolicMultiplier w{k, random_poly(rng, -2, 2)};
        EXPECT_EQ(winding_number(w, CircleContour{0.6, 512}).k, winding_number(w, CircleContour{1.7, 512}).k);
    }
}

TEST(Radstrom, Monomial) {
    const auto r = radstrom_decompose(mono(1.0, 1), CircleContour{1.0, 4096});
    EXPECT_EQ(r.decomposition.k, 1);
    EXPECT_LT(coeff_distance(r.decomposition.W, LaurentSeries::zero()), 1e-14);
}

TEST(Radstrom, Exponential) {
    const auto r = radstrom_decompose(exp_taylor(40), CircleContour{1.0, 4096});
    EXPECT_EQ(r.decomposition.k, 0);
    EXPECT_LT(coeff_distance(r.decomposition.W, mono(1.0, 1)), 1e-8);
    EXPECT_LT(r.residual, 1e-8);
}

TEST(Radstrom, PrincipalPart) {
    const auto r = radstrom_decompose(exp_inverse(40).shifted(1), CircleContour{1.0, 4096});
    EXPECT_EQ(r.decomposition.k, 1);
    EXPECT_LT(coeff_distance(r.decomposition.W, mono(1.0, -1)), 1e-8);
    EXPECT_LT(r.residual, 1e-8);
}
