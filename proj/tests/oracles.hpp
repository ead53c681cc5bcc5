// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

// Brute-force reference computations shared by the test binaries.

#include "starsec/fading.hpp"
#include "starsec/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace oracle {

/// Composite Simpson rule with n (even) panels.
template <class F>
double simpson(F f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i)
        s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

/// CDF of a sum of N i.i.d. product envelopes, tabulated on [0, s_max] by
/// repeated trapezoid convolution of the double-Nakagami density.
struct SumCdfTable {
    double h = 0.0;
    std::vector<double> F;

    double operator()(double s) const {
        const double pos = s / h;
        const auto i = static_cast<std::size_t>(pos);
        if (i + 1 >= F.size())
            return F.back();
        const double t = pos - i;
        return (1.0 - t) * F[i] + t * F[i + 1];
    }
};

inline SumCdfTable sum_cdf_table(const starsec::fading::ProductModel& model, int N, double s_max, int n) {
    const double h = s_max / n;
    std::vector<double> f(n + 1);
    f[0] = 0.0;
    for (int j = 1; j <= n; ++j)
        f[j] = starsec::fading::product_pdf(model, j * h);
    std::vector<double> g = f;
    for (int k = 1; k < N; ++k) {
        std::vector<double> next(n + 1, 0.0);
        for (int i = 1; i <= n; ++i) {
            double s = 0.5 * (f[0] * g[i] + f[i] * g[0]);
            for (int j = 1; j < i; ++j)
                s += f[j] * g[i - j];
            next[i] = s * h;
        }
        g.swap(next);
    }
    SumCdfTable t;
    t.h = h;
    t.F.assign(n + 1, 0.0);
    for (int i = 1; i <= n; ++i)
        t.F[i] = t.F[i - 1] + 0.5 * h * (g[i - 1] + g[i]);
    return t;
}

/// Exact unordered user CDF for N elements with κ = 0 hops: users uniform on
/// the disc, channel power A_L r^{-α} (Σ Δ)^2.
inline double exact_unordered_cdf(double x, const starsec::fading::ProductModel& model, int N,
                                  const starsec::geometry::NetworkConfig& cfg, int grid = 3000) {
    const double s_max = std::sqrt(x * std::pow(cfg.R_U, cfg.alpha) / cfg.A_L());
    const auto table = sum_cdf_table(model, N, s_max, grid);
    // F = 2 ∫_0^1 v F_Σ(s_max v^{α/2}) dv
    return 2.0 * simpson([&](double v) { return v * table(s_max * std::pow(v, cfg.alpha / 2.0)); }, 0.0, 1.0, 4000);
}

/// Kolmogorov-Smirnov distance between sorted samples and a CDF.
template <class Cdf>
double ks_distance(std::vector<double> samples, Cdf cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double F = cdf(samples[i]);
        d = std::max({d, std::abs(F - i / n), std::abs((i + 1) / n - F)});
    }
    return d;
}

}  // namespace oracle
