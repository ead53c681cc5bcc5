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

#include "starsec/fading.hpp"
#include "starsec/random.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace starsec;
using namespace starsec::fading;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

template <class F>
double simpson(F f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i)
        s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

// E[R^k] of a unit-power Rician envelope with factor K, from its density.
double oracle_rician_moment(double K, double k) {
    auto pdf = [K](double r) {
        return 2.0 * (K + 1.0) * r * std::exp(-K - (K + 1.0) * r * r) *
               std::cyl_bessel_i(0.0, 2.0 * r * std::sqrt(K * (K + 1.0)));
    };
    return simpson([&](double r) { return std::pow(r, k) * pdf(r); }, 0.0, 8.0, 20000);
}

}  // namespace

TEST_CASE("hop moments reduce to Rayleigh and Nakagami", "[fading]") {
    for (double k : {0.5, 1.0, 2.0, 3.0})
        CHECK_THAT(hop_moment(0.0, 1.0, k), WithinRel(std::tgamma(1.0 + k / 2.0), 1e-13));
    for (double m : {1.5, 2.0, 4.0})
        for (double k : {1.0, 2.0, 4.0})
            CHECK_THAT(hop_moment(0.0, m, k),
                       WithinRel(std::tgamma(m + k / 2.0) / std::tgamma(m) * std::pow(m, -k / 2.0), 1e-13));
}

TEST_CASE("hop moments match the Rician density", "[fading]") {
    for (double K : {0.5, 3.0, 10.0})
        for (double k : {1.0, 2.0, 3.0})
            CHECK_THAT(hop_moment(K, 1.0, k), WithinRel(oracle_rician_moment(K, k), 1e-9));
}

TEST_CASE("hop power is normalized for every kappa and mu", "[fading][property]") {
    for (double kappa : {0.0, 0.7, 3.0, 20.0})
        for (double mu : {0.5, 1.0, 2.5, 6.0})
            CHECK_THAT(hop_moment(kappa, mu, 2.0), WithinRel(1.0, 1e-12));
}

TEST_CASE("Gamma fit reproduces the aggregate moments", "[fading][property]") {
    const FadingParams p{};
    for (int N : {1, 9, 25, 100}) {
        const auto s = fit_user_gamma(p, N);
        CHECK_THAT(s.k_r * s.theta_r, WithinRel(s.lu_mean(), 1e-12));
        CHECK_THAT(s.k_r * s.theta_r * s.theta_r, WithinRel(s.lu_variance(), 1e-12));
        CHECK_THAT(s.W_e, WithinRel(N * cascaded_moment(p, 2.0), 1e-12));
    }
    const double er = oracle_rician_moment(3.0, 1.0);
    const auto s = fit_user_gamma(p, 25);
    CHECK_THAT(s.m_r, WithinRel(er * er, 1e-9));
    CHECK_THAT(s.sigma2_r, WithinRel(1.0 - er * er * er * er, 1e-8));
    CHECK_THAT(s.W_e, WithinRel(25.0, 1e-12));
}

TEST_CASE("envelope sampler matches analytic moments", "[fading][mc]") {
    Xoshiro256 rng(7, 0);
    for (auto [kappa, mu] : {std::pair{3.0, 1.0}, std::pair{0.0, 2.0}, std::pair{1.5, 3.0}}) {
        const int n = 200000;
        double s1 = 0.0, s2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double r = sample_kappa_mu_envelope(kappa, mu, rng);
            s1 += r;
            s2 += r * r;
        }
        CHECK_THAT(s1 / n, WithinRel(hop_moment(kappa, mu, 1.0), 5e-3));
        CHECK_THAT(s2 / n, WithinRel(1.0, 1e-2));
    }
    CHECK_THROWS_AS(sample_kappa_mu_envelope(1.0, 1.5, rng), UnsupportedParameter);
}

TEST_CASE("aggregate samplers match fitted means", "[fading][mc]") {
    const FadingParams p{};
    const auto s = fit_user_gamma(p, 9);
    Xoshiro256 rng(11, 0);
    const int n = 100000;
    double lu = 0.0, eve = 0.0;
    for (int i = 0; i < n; ++i) {
        lu += sample_lu_power(p, 9, rng);
        eve += sample_eve_power(p, 9, rng);
    }
    CHECK_THAT(lu / n, WithinRel(s.lu_mean(), 5e-3));
    CHECK_THAT(eve / n, WithinRel(s.W_e, 2e-2));
}

TEST_CASE("product densities integrate to one with the right mean", "[fading]") {
    for (auto model : {ProductModel::double_rayleigh(), ProductModel::double_nakagami(1.0, 2.0),
                       ProductModel::double_nakagami(2.5, 1.5)}) {
        const double mass = simpson([&](double x) { return x == 0.0 ? 0.0 : product_pdf(model, x); }, 0.0, 12.0, 24000);
        const double mean =
            simpson([&](double x) { return x == 0.0 ? 0.0 : x * product_pdf(model, x); }, 0.0, 12.0, 24000);
        CHECK_THAT(mass, WithinAbs(1.0, 1e-5));
        CHECK_THAT(mean, WithinRel(hop_moment(0.0, model.m1, 1.0) * hop_moment(0.0, model.m2, 1.0), 1e-5));
    }
    CHECK_THAT(hop_moment(0.0, 1.0, 1.0) * hop_moment(0.0, 1.0, 1.0), WithinRel(std::numbers::pi / 4.0, 1e-13));
}
