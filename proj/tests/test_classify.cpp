#include <gtest/gtest.h>

#include <random>

#include "holodyn/classify/classify.hpp"

using namespace holodyn;

namespace {

LaurentSeries poly(std::vector<cplx> c, int n_min = 0) { return LaurentSeries(n_min, std::move(c)); }

WeightedCompositionOp op(Multiplier w, Symbol psi, DomainSpec D = DomainSpec::punctured_plane()) {
    return WeightedCompositionOp(std::move(w), std::move(psi), std::move(D));
}

SymbolicMultiplier zk_eW(int k, LaurentSeries W = LaurentSeries::zero()) { return SymbolicMultiplier{k, std::move(W)}; }

geometry::GridSet two_hole_grid() {
    std::vector<geometry::Cell> cells;
    for (int x = 0; x < 24; ++x)
        for (int y = 0; y < 12; ++y) {
            const bool hole1 = x >= 4 && x < 8 && y >= 4 && y < 8;
            const bool hole2 = x >= 16 && x < 20 && y >= 4 && y < 8;
            if (!hole1 && !hole2) cells.push_back({x, y});
        }
    return geometry::GridSet(3, std::move(cells));
}

DomainSpec lattice_domain() {
    return DomainSpec(InfinitelyConnected{LatticeOfDiscs{1.0, 0.25}, std::nullopt, true});
}

void expect_all(const ClassificationReport& r, Verdict v) {
    for (Property p : kProperties) EXPECT_EQ(r[p], v) << to_string(p);
}

constexpr std::array<Property, 5> kInverseInvariant = {Property::Supercyclic, Property::Hypercyclic, Property::Mixing,
                                                       Property::Chaotic, Property::SatisfiesFHC};

LaurentSeries random_poly(std::mt19937_64& rng, int lo, int hi) {
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    std::vector<cplx> c(static_cast<std::size_t>(hi - lo + 1));
    for (auto& v : c) v = {u(rng), u(rng)};
    return LaurentSeries(lo, std::move(c));
}

cplx random_a(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double m = u(rng) < 0.5 ? 0.3 + 0.6 * u(rng) : 1.1 + 1.9 * u(rng);
    return std::polar(m, kTwoPi * u(rng));
}

}  // namespace

TEST(Classify, AnnulusIsNeverSupercyclic) {
    expect_all(classify(op(LaurentSeries::constant(1.0), Symbol::linear(1.0), DomainSpec::annulus(2.0))), Verdict::No);
}

TEST(Classify, TwoHolesIsNeverSupercyclic) {
    const DomainSpec D(FinitelyConnected{2, two_hole_grid()});
    const auto r = classify(op(LaurentSeries::constant(1.0), Symbol::linear(0.5), D));
    EXPECT_EQ(r[Property::Supercyclic], Verdict::No);
    expect_all(r, Verdict::No);
}

TEST(Classify, CstarExpZWithExpandingSymbol) {
    const auto r = classify(op(zk_eW(0, LaurentSeries::monomial(1.0, 1)), Symbol::linear(2.0)));
    EXPECT_EQ(r[Property::Supercyclic], Verdict::No);
    EXPECT_EQ(r.quantities.at("k"), 0.0);
}

TEST(Classify, CstarZExpInverseHalving) {
    const auto r = classify(op(zk_eW(1, LaurentSeries::monomial(1.0, -1)), Symbol::linear(0.5)));
    EXPECT_EQ(r[Property::SatisfiesFHC], Verdict::Yes);
    EXPECT_EQ(r[Property::FrequentlyHypercyclic], Verdict::Yes);
    expect_all(r, Verdict::Yes);
}

TEST(Classify, CstarInverseMonomialHalving) {
    const auto r = classify(op(LaurentSeries::monomial(1.0, -1), Symbol::linear(0.5)));
    EXPECT_EQ(r[Property::Supercyclic], Verdict::No);
}

TEST(Classify, CstarExpandingBranch) {
    const auto r = classify(op(zk_eW(-2, LaurentSeries::monomial(1.0, 1)), Symbol::linear(3.0)));
    EXPECT_EQ(r[Property::SatisfiesFHC], Verdict::Yes);
    EXPECT_EQ(r.quantities.at("k"), -2.0);
}

TEST(Classify, CstarInversionAndRotation) {
    expect_all(classify(op(LaurentSeries::monomial(1.0, 1), Symbol::inversion(0.5))), Verdict::No);
    expect_all(classify(op(LaurentSeries::monomial(1.0, 1), Symbol::linear(std::polar(1.0, 0.3)))), Verdict::No);
}

TEST(Classify, CstarMultiplierWithZero) {
    expect_all(classify(op(poly({-1.0, 1.0}), Symbol::linear(0.5))), Verdict::No);
}

TEST(Classify, CstarUnsupportedSymbolIsUnknown) {
    const auto r = classify(op(LaurentSeries::monomial(1.0, 1), Symbol::moebius(1.0, 0.0, 1.0, 1.0)));
    expect_all(r, Verdict::Unknown);
    EXPECT_FALSE(r.reason.empty());
}

TEST(Classify, DstarIdentityWeightHalving) {
    const auto r = classify(op(LaurentSeries::monomial(1.0, 1), Symbol::linear(0.5), DomainSpec::punctured_disc()));
    EXPECT_EQ(r[Property::Hypercyclic], Verdict::Yes);
    EXPECT_EQ(r[Property::SatisfiesFHC], Verdict::Yes);
}

TEST(Classify, DstarRotationIsNotSupercyclic) {
    const auto r = classify(op(LaurentSeries::monomial(1.0, 1), Symbol::linear(std::polar(1.0, 1.0)),
                               DomainSpec::punctured_disc()));
    EXPECT_EQ(r[Property::Supercyclic], Verdict::No);
}

TEST(Classify, DstarOpenCaseIsUnknown) {
    const auto r = classify(op(zk_eW(0, LaurentSeries::monomial(1.0, -1)), Symbol::linear(0.5),
                               DomainSpec::punctured_disc()));
    EXPECT_EQ(r[Property::Supercyclic], Verdict::Unknown);
    EXPECT_EQ(r[Property::Hypercyclic], Verdict::No);
    EXPECT_FALSE(r.reason.empty());
}

TEST(Classify, DstarMonomialNonPositiveIsNo) {
    const auto r = classify(op(LaurentSeries::monomial(2.0, -1), Symbol::linear(0.5), DomainSpec::punctured_disc()));
    expect_all(r, Verdict::No);
    const auto e = classify(op(zk_eW(0, LaurentSeries::monomial(1.0, 1)), Symbol::linear(0.5),
                               DomainSpec::punctured_disc()));
    expect_all(e, Verdict::No);
}

TEST(Classify, DstarMoebiusAndSeriesSymbols) {
    const DomainSpec D = DomainSpec::punctured_disc();
    const auto m = classify(op(LaurentSeries::monomial(1.0, 1), Symbol::moebius(1.0, 0.0, -1.0, 2.0), D));
    EXPECT_EQ(m[Property::SatisfiesFHC], Verdict::Yes);
    const auto s = classify(op(LaurentSeries::monomial(1.0, 1), Symbol::series(poly({0.5, 0.125}, 1)), D));
    EXPECT_EQ(s[Property::SatisfiesFHC], Verdict::Yes);
    const auto shifted = classify(op(LaurentSeries::monomial(1.0, 1), Symbol::moebius(1.0, 0.5, 0.0, 2.0), D));
    expect_all(shifted, Verdict::No);
    const auto square = classify(op(LaurentSeries::monomial(1.0, 1), Symbol::series(poly({0.5}, 2)), D));
    expect_all(square, Verdict::No);
    const auto disc_automorphism = classify(op(LaurentSeries::monomial(1.0, 1), Symbol::moebius(1.0, 0.0, 0.0, -1.0), D));
    expect_all(disc_automorphism, Verdict::No);
}

TEST(Classify, DstarGridBase) {
    std::vector<geometry::Cell> cells;
    for (int x = -16; x < 16; ++x)
        for (int y = -16; y < 16; ++y) cells.push_back({x, y});
    const DomainSpec D(PuncturedSimplyConnected{1.0, cplx{}, geometry::GridSet(4, cells)});
    const auto r = classify(op(LaurentSeries::monomial(1.0, 1), Symbol::linear(0.5), D));
    EXPECT_EQ(r[Property::SatisfiesFHC], Verdict::Yes);
    const auto u = classify(op(LaurentSeries::monomial(1.0, 1), Symbol::series(poly({0.5, 0.1}, 1)), D));
    expect_all(u, Verdict::Unknown);
}

TEST(Classify, InfiniteTranslationIsMixing) {
    ClassifyOptions opt;
    opt.resolution = 4;
    const auto r = classify(op(LaurentSeries::constant(1.0), Symbol::moebius(1.0, 1.0, 0.0, 1.0), lattice_domain()), opt);
    EXPECT_EQ(r[Property::Mixing], Verdict::Yes);
    EXPECT_EQ(r[Property::Supercyclic], Verdict::Yes);
    EXPECT_EQ(r[Property::Hypercyclic], Verdict::Yes);
    EXPECT_EQ(r[Property::SatisfiesFHC], Verdict::Unknown);
}

TEST(Classify, InfiniteMultiplierZeroIsNo) {
    ClassifyOptions opt;
    opt.resolution = 4;
    // Zero at a cell centre of the battery.
    const cplx zero{0.53125, 0.03125};
    const auto r = classify(op(poly({-zero, 1.0}), Symbol::moebius(1.0, 1.0, 0.0, 1.0), lattice_domain()), opt);
    expect_all(r, Verdict::No);
}

TEST(Classify, InfiniteFixedPointIsNo) {
    ClassifyOptions opt;
    opt.resolution = 4;
    const auto r = classify(op(LaurentSeries::constant(1.0), Symbol::moebius(-1.0, cplx(1.0, 1.0), 0.0, 1.0),
                               lattice_domain()),
                            opt);
    expect_all(r, Verdict::No);
}

TEST(Classify, InverseInvariance) {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> kd(-3, 3);
    for (int trial = 0; trial < 30; ++trial) {
        const auto T = op(zk_eW(kd(rng), random_poly(rng, -2, 2)), Symbol::linear(random_a(rng)));
        const auto a = classify(T);
        const auto b = classify(inverse(T));
        for (Property p : kInverseInvariant) EXPECT_EQ(a[p], b[p]) << trial << " " << to_string(p);
    }
}

TEST(Classify, InversionConjugationSymmetry) {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<int> kd(-3, 3);
    for (int trial = 0; trial < 30; ++trial) {
        const int k = kd(rng);
        const auto T = op(zk_eW(k, random_poly(rng, -2, 2)), Symbol::linear(random_a(rng)));
        const auto C = conjugate_by_inversion(T);
        const auto a = classify_cstar(T);
        const auto b = classify_cstar(C);
        for (Property p : kProperties) EXPECT_EQ(a[p], b[p]) << trial;
        EXPECT_EQ(b.quantities.at("k"), -k);
    }
}

TEST(Classify, DependsOnlyOnWindingAndModulus) {
    std::mt19937_64 rng(29);
    std::uniform_int_distribution<int> kd(-3, 3);
    for (int trial = 0; trial < 20; ++trial) {
        const int k = kd(rng);
        const cplx a = random_a(rng);
        const auto base = classify(op(zk_eW(k), Symbol::linear(a)));
        const auto perturbed = classify(op(zk_eW(k, random_poly(rng, -3, 3)), Symbol::linear(a)));
        for (Property p : kProperties) EXPECT_EQ(base[p], perturbed[p]) << trial;
    }
}

TEST(Closure, Rules) {
    ClassificationReport r;
    r.status[Property::SatisfiesFHC] = Verdict::Yes;
    apply_closure(r);
    expect_all(r, Verdict::Yes);
    EXPECT_TRUE(r.audit.empty());

    ClassificationReport s;
    s.status[Property::Supercyclic] = Verdict::No;
    apply_closure(s);
    expect_all(s, Verdict::No);

    ClassificationReport h;
    h.status[Property::Hypercyclic] = Verdict::Yes;
    apply_closure(h);
    EXPECT_EQ(h[Property::Mixing], Verdict::Yes);
    EXPECT_EQ(h[Property::Supercyclic], Verdict::Yes);
    EXPECT_EQ(h[Property::Chaotic], Verdict::Unknown);

    ClassificationReport bad;
    bad.status[Property::SatisfiesFHC] = Verdict::Yes;
    bad.status[Property::Mixing] = Verdict::No;
    apply_closure(bad);
    EXPECT_FALSE(bad.audit.empty());
}

TEST(Closure, EveryEmittedReportPassesAudit) {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> kd(-3, 3);
    for (int trial = 0; trial < 20; ++trial) {
        const auto r = classify(op(zk_eW(kd(rng), random_poly(rng, -1, 1)), Symbol::linear(random_a(rng))));
        EXPECT_TRUE(audit(r).empty());
        EXPECT_TRUE(r.audit.empty());
    }
}
