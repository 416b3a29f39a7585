#pragma once

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <mutex>
#include <span>
#include <vector>

#include "holodyn/core/complex.hpp"

namespace holodyn::fft {

namespace detail {

// The FFTW planner is not reentrant; execution is.
inline std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

inline void transform(std::vector<cplx>& data, int sign) {
    static_assert(sizeof(cplx) == sizeof(fftw_complex));
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(data.size()), buf, buf, sign, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
}

}  // namespace detail

/// In place: X_m = sum_k x_k exp(-2 pi i m k / N).
inline void forward(std::vector<cplx>& data) { detail::transform(data, FFTW_FORWARD); }

/// In place: x_k = sum_m X_m exp(+2 pi i m k / N), unnormalized.
inline void backward(std::vector<cplx>& data) { detail::transform(data, FFTW_BACKWARD); }

/// Values of sum_j c_j z^j at the `nodes` equally spaced points of |z| = radius.
/// Exponents are folded modulo `nodes`, so any exponent span is handled exactly.
inline std::vector<cplx> sample_circle(int n_min, std::span<const cplx> coeffs, double radius,
                                       std::size_t nodes) {
    std::vector<cplx> bins(nodes, cplx{});
    const auto n = static_cast<long>(nodes);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i] == cplx{}) continue;
        const int e = n_min + static_cast<int>(i);
        long slot = e % n;
        if (slot < 0) slot += n;
        bins[static_cast<std::size_t>(slot)] += coeffs[i] * std::pow(radius, e);
    }
    backward(bins);
    return bins;
}

/// Laurent coefficients c_lo..c_hi from samples g_k = g(radius * e^{2 pi i k / N}).
/// Terms with |c_j| radius^j below the transform's rounding floor are set to zero, since
/// rescaling by radius^-j would otherwise amplify that noise off the sampling circle.
/// `min_amplitude` bounds the floor from below for samples that carry absolute error.
inline std::vector<cplx> circle_coefficients(std::vector<cplx> samples, double radius, int lo,
                                             int hi, double min_amplitude = 0.0) {
    const auto n = static_cast<long>(samples.size());
    double amplitude = min_amplitude;
    for (const cplx& v : samples) amplitude = std::max(amplitude, std::abs(v));
    const double floor = 1e-15 * amplitude;
    forward(samples);
    std::vector<cplx> out(static_cast<std::size_t>(hi - lo + 1));
    for (int j = lo; j <= hi; ++j) {
        long slot = j % n;
        if (slot < 0) slot += n;
        const cplx c = samples[static_cast<std::size_t>(slot)] / static_cast<double>(n);
        out[static_cast<std::size_t>(j - lo)] = std::abs(c) < floor ? cplx{} : c * std::pow(radius, -j);
    }
    return out;
}

}  // namespace holodyn::fft
