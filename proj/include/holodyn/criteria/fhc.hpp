#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "holodyn/core/error.hpp"
#include "holodyn/laurent/series.hpp"
#include "holodyn/operators/operator.hpp"

namespace holodyn {

struct FhcOptions {
    double tolerance = 1e-8;        // tails, permutation deviations, random subseries
    double inverse_tolerance = 1e-10;
    int M = 30;
};

/// Sampled evidence for unconditional convergence of sum T^n f and sum S^n f.
struct SeriesEvidence {
    double tail = 0.0;           // f_norm of the sum of the last N/4 terms
    double early_block = 0.0;    // f_norm of the sum of terms N/4 < n <= N/2
    double permutation = 0.0;    // max f_norm(permuted sum - natural sum)
    double subseries = 0.0;      // max f_norm of a random subseries of the second half
    bool diverged = false;
};

struct FhcReport {
    double right_inverse_residual = 0.0;  // f_norm(T S f - f)
    SeriesEvidence forward;                // T^n f
    SeriesEvidence backward;               // S^n f
    bool passed = false;
};

namespace detail {

inline LaurentSeries sum_of(const std::vector<LaurentSeries>& terms, const std::vector<std::size_t>& order,
                            const LaurentSeries& zero) {
    LaurentSeries s = zero;
    for (std::size_t idx : order) s = s + terms[idx];
    return s;
}

inline SeriesEvidence series_evidence(const std::vector<LaurentSeries>& terms, int trials, std::mt19937_64& rng,
                                      const Exhaustion& E, const FhcOptions& opt) {
    SeriesEvidence ev;
    const std::size_t N = terms.size();
    const LaurentSeries zero = LaurentSeries::zero(terms.front().r_in(), terms.front().r_out());
    auto range = [](std::size_t a, std::size_t b) {
        std::vector<std::size_t> v(b - a);
        std::iota(v.begin(), v.end(), a);
        return v;
    };
    ev.tail = f_norm(sum_of(terms, range(N - N / 4, N), zero), E, opt.M);
    ev.early_block = f_norm(sum_of(terms, range(N / 4, N / 2), zero), E, opt.M);
    ev.diverged = ev.tail > opt.tolerance && ev.tail >= 0.5 * ev.early_block;

    std::vector<std::size_t> order = range(0, N);
    const LaurentSeries natural = sum_of(terms, order, zero);
    for (int t = 0; t < trials; ++t) {
        std::shuffle(order.begin(), order.end(), rng);
        ev.permutation = std::max(ev.permutation, f_norm(sum_of(terms, order, zero) - natural, E, opt.M));
        std::vector<std::size_t> pick;
        std::bernoulli_distribution coin(0.5);
        for (std::size_t n = N / 2; n < N; ++n)
            if (coin(rng)) pick.push_back(n);
        ev.subseries = std::max(ev.subseries, f_norm(sum_of(terms, pick, zero), E, opt.M));
    }
    return ev;
}

}  // namespace detail

/// Checks T S f = f for S = T^{-1} and samples unconditional convergence of both orbit
/// series over N terms under `trials` seeded permutations.
inline FhcReport fhc_series_check(const WeightedCompositionOp& T, const LaurentSeries& f, int N, int trials,
                                  std::uint64_t seed, const Exhaustion& E, const FhcOptions& opt = {}) {
    require(N >= 4, Reason::Precondition, "series check needs N >= 4");
    require(trials >= 0, Reason::Precondition, "trials must be nonnegative");
    const WeightedCompositionOp S = inverse(T);

    FhcReport rep;
    rep.right_inverse_residual = f_norm(apply(T, apply(S, f)) - f, E, opt.M);

    std::mt19937_64 rng(seed);
    for (const WeightedCompositionOp* op : {&T, &S}) {
        std::vector<LaurentSeries> terms;
        terms.reserve(static_cast<std::size_t>(N));
        LaurentSeries g = f;
        for (int n = 1; n <= N; ++n) {
            g = apply(*op, g);
            terms.push_back(g);
        }
        (op == &T ? rep.forward : rep.backward) = detail::series_evidence(terms, trials, rng, E, opt);
    }
    auto ok = [&](const SeriesEvidence& e) {
        return !e.diverged && e.tail < opt.tolerance && e.permutation < opt.tolerance && e.subseries < opt.tolerance;
    };
    rep.passed = rep.right_inverse_residual < opt.inverse_tolerance && ok(rep.forward) && ok(rep.backward);
    return rep;
}

}  // namespace holodyn
