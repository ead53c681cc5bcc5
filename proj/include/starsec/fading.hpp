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

/**
 * @file fading.hpp
 * @brief Cascaded κ-μ fading: per-element product moments, the aggregate
 *        Gamma / exponential fits, closed-form product PDFs and samplers.
 *
 * Each hop envelope is normalized to E[R^2] = 1. The per-element product is
 * Δ = R1·R2 over the BS→surface hop (1) and the surface→receiver hop (2).
 */

#include "starsec/math/special_functions.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace starsec::fading {

/// Raised for parameter combinations the samplers deliberately do not cover.
class UnsupportedParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// κ-μ shape parameters of the two cascaded hops.
struct FadingParams {
    double kappa1 = 3.0;
    double mu1 = 1.0;
    double kappa2 = 3.0;
    double mu2 = 1.0;

    double phi1() const { return mu1 * (kappa1 + 1.0); }
    double phi2() const { return mu2 * (kappa2 + 1.0); }

    void validate() const {
        if (!(kappa1 >= 0.0) || !(kappa2 >= 0.0))
            throw std::invalid_argument("fading: kappa must be >= 0");
        if (!(mu1 > 0.0) || !(mu2 > 0.0))
            throw std::invalid_argument("fading: mu must be > 0");
    }
};

/// ln E[R^k] of a unit-power κ-μ envelope, k > -2μ.
inline double log_hop_moment(double kappa, double mu, double k) {
    const double half = 0.5 * k;
    if (!(mu + half > 0.0))
        throw std::domain_error("hop_moment: requires k > -2 mu");
    const double phi = mu * (kappa + 1.0);
    return math::ln_pochhammer(mu, half) + math::log_hyp1f1(half + mu, mu, kappa * mu) - mu * kappa -
           half * std::log(phi);
}

/// E[R^k] of a unit-power κ-μ envelope.
inline double hop_moment(double kappa, double mu, double k) {
    return std::exp(log_hop_moment(kappa, mu, k));
}

/// E[Δ^k] for the cascaded product Δ = R1·R2.
inline double cascaded_moment(const FadingParams& p, double k) {
    p.validate();
    if (!(k >= 0.0))
        throw std::domain_error("cascaded_moment: k must be >= 0");
    return std::exp(log_hop_moment(p.kappa1, p.mu1, k) + log_hop_moment(p.kappa2, p.mu2, k));
}

/// Per-element moments and the fitted aggregate laws for N elements.
struct CascadedStats {
    double m_r = 0.0;       ///< E[Δ]
    double sigma2_r = 0.0;  ///< Var[Δ]
    int N = 0;
    double k_r = 0.0;      ///< Gamma shape of the coherent LU power (ΣΔ)^2
    double theta_r = 0.0;  ///< Gamma scale of the coherent LU power
    double W_e = 0.0;      ///< mean of the exponential Eve power |ΣΔ e^{jθ}|^2

    double lu_mean() const { return m_r * m_r * N * N + sigma2_r * N; }
    double lu_variance() const {
        const double n = N;
        return 4.0 * m_r * m_r * sigma2_r * n * n * n + 2.0 * sigma2_r * sigma2_r * n * n;
    }
};

inline CascadedStats fit_user_gamma(const FadingParams& p, int N) {
    if (N < 1)
        throw std::domain_error("fit_user_gamma: N must be >= 1");
    CascadedStats s;
    s.N = N;
    s.m_r = cascaded_moment(p, 1.0);
    s.sigma2_r = cascaded_moment(p, 2.0) - s.m_r * s.m_r;
    if (!(s.sigma2_r > 0.0))
        throw std::domain_error("fit_user_gamma: nonpositive product variance");
    const double m2 = s.m_r * s.m_r;
    const double v = s.sigma2_r;
    const double n = N;
    const double omega = 4.0 * m2 * v * n + 2.0 * v * v;
    s.k_r = (m2 * n + v) * (m2 * n + v) / omega;
    s.theta_r = omega * n / (m2 * n + v);
    s.W_e = n * (m2 + v);
    return s;
}

/**
 * Draws a unit-power κ-μ envelope for integer μ.
 *
 * R^2 = Σ_{i=1..μ} (X_i + p)^2 + Y_i^2 with X_i, Y_i ~ N(0, 1/(2μ(1+κ)))
 * and p^2 = κ / ((1+κ)μ).
 */
template <class Rng>
double sample_kappa_mu_envelope(double kappa, double mu, Rng& rng) {
    if (!(kappa >= 0.0))
        throw std::invalid_argument("sample_kappa_mu_envelope: kappa must be >= 0");
    if (!(mu >= 1.0) || mu != std::floor(mu))
        throw UnsupportedParameter("sample_kappa_mu_envelope: mu must be a positive integer");
    const int clusters = static_cast<int>(mu);
    const double sd = std::sqrt(1.0 / (2.0 * mu * (1.0 + kappa)));
    const double p = std::sqrt(kappa / ((1.0 + kappa) * mu));
    std::normal_distribution<double> gauss(0.0, sd);
    double r2 = 0.0;
    for (int i = 0; i < clusters; ++i) {
        const double x = gauss(rng) + p;
        const double y = gauss(rng);
        r2 += x * x + y * y;
    }
    return std::sqrt(r2);
}

/// One cascaded product Δ = R1·R2.
template <class Rng>
double sample_product(const FadingParams& p, Rng& rng) {
    return sample_kappa_mu_envelope(p.kappa1, p.mu1, rng) * sample_kappa_mu_envelope(p.kappa2, p.mu2, rng);
}

/// Phase-aligned aggregate power (Σ_n Δ_n)^2 seen by a legitimate user.
template <class Rng>
double sample_lu_power(const FadingParams& p, int N, Rng& rng) {
    double sum = 0.0;
    for (int n = 0; n < N; ++n)
        sum += sample_product(p, rng);
    return sum * sum;
}

/// Randomly phased aggregate power |Σ_n Δ_n e^{jθ_n}|^2 seen by an eavesdropper.
template <class Rng>
double sample_eve_power(const FadingParams& p, int N, Rng& rng) {
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    std::complex<double> sum{0.0, 0.0};
    for (int n = 0; n < N; ++n)
        sum += std::polar(sample_product(p, rng), phase(rng));
    return std::norm(sum);
}

/// Closed-form product-envelope models with κ → 0.
struct ProductModel {
    double m1 = 1.0;
    double m2 = 1.0;

    static ProductModel double_rayleigh() { return {1.0, 1.0}; }
    static ProductModel double_nakagami(double m1, double m2) { return {m1, m2}; }
};

/// PDF of Δ = R1·R2 for double Nakagami-m hops (double Rayleigh when m1 = m2 = 1).
inline double product_pdf(const ProductModel& model, double x) {
    if (!(x > 0.0))
        throw std::domain_error("product_pdf: x must be > 0");
    const double m1 = model.m1;
    const double m2 = model.m2;
    if (!(m1 > 0.0) || !(m2 > 0.0))
        throw std::domain_error("product_pdf: shape parameters must be > 0");
    const double log_pref = std::log(4.0) + (m1 + m2 - 1.0) * std::log(x) - math::ln_gamma(m1) -
                            math::ln_gamma(m2) + 0.5 * (m1 + m2) * std::log(m1 * m2);
    return std::exp(log_pref) * math::bessel_k(m1 - m2, 2.0 * x * std::sqrt(m1 * m2));
}

}  // namespace starsec::fading
