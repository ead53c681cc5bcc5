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

#include "starsec/random.hpp"
#include "starsec/simulator.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <algorithm>
#include <cstdlib>

using namespace starsec;
using namespace starsec::sim;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

bool same(const ChannelRealization& a, const ChannelRealization& b) {
    return a.gain_R == b.gain_R && a.gain_T == b.gain_T && a.eve_max == b.eve_max;
}

}  // namespace

TEST_CASE("random streams are reproducible and distinct", "[simulator]") {
    Xoshiro256 a(42, 7), b(42, 7), c(42, 8), d(43, 7);
    bool differs_c = false, differs_d = false;
    for (int i = 0; i < 16; ++i) {
        const auto va = a();
        CHECK(va == b());
        differs_c |= va != c();
        differs_d |= va != d();
    }
    CHECK(differs_c);
    CHECK(differs_d);
}

TEST_CASE("realizations do not depend on the worker count", "[simulator]") {
    NetworkConfig cfg;
    const auto one = draw_realizations(cfg, 300, 9, 1);
    const auto four = draw_realizations(cfg, 300, 9, 4);
    const auto seven = draw_realizations(cfg, 300, 9, 7);
    for (std::size_t i = 0; i < one.size(); ++i) {
        CHECK(same(one[i], four[i]));
        CHECK(same(one[i], seven[i]));
        CHECK(same(one[i], draw_realization(cfg, 9, i)));
    }
    const auto other = draw_realizations(cfg, 5, 10, 2);
    CHECK_FALSE(same(one[0], other[0]));
}

TEST_CASE("worker count from the environment", "[simulator]") {
    ::setenv("STARSEC_THREADS", "3", 1);
    CHECK(default_threads() == 3);
    ::setenv("STARSEC_THREADS", "0", 1);
    CHECK(default_threads() >= 1);
    ::unsetenv("STARSEC_THREADS");
}

TEST_CASE("trial evaluation on a hand-built realization", "[simulator]") {
    NetworkConfig cfg;
    cfg.rho_b = 1e3;
    cfg.rho_e = 1e2;
    ChannelRealization r;
    r.gain_R = 0.01;
    r.gain_T = 0.05;
    r.eve_max = {1e-3, 2e-3};  // indexed by side: reflect, transmit

    ProtocolMode ts{Protocol::TS, 0.6};
    const auto o = evaluate_trial(r, cfg, ts);
    CHECK_FALSE(o.reflect_is_strong);
    CHECK(o.H_s == 0.05);
    CHECK(o.H_w == 0.01);
    const double gs = 0.3 * 1e3 * 0.05;
    const double gw = 0.7 * 1e3 * 0.01 / (0.3 * 1e3 * 0.01 + 1.0);
    CHECK_THAT(o.gamma_s, WithinRel(gs, 1e-15));
    CHECK_THAT(o.gamma_w, WithinRel(gw, 1e-15));
    // Strong user sits on the transmit side (Eve gain 2e-3) and holds T_s = 0.6.
    const double ces = std::max(0.6 * std::log2(1 + 0.3 * 1e2 * 2e-3), 0.4 * std::log2(1 + 0.3 * 1e2 * 1e-3));
    CHECK_THAT(o.C_Es, WithinRel(ces, 1e-15));
    CHECK_THAT(o.C_Us, WithinRel(0.6 * std::log2(1 + gs), 1e-15));
    CHECK(o.outage_s == (o.C_Us - o.C_Es < cfg.R_s));

    ProtocolMode es{Protocol::ES, 0.6};
    const auto e = evaluate_trial(r, cfg, es);
    const double gs_es = 0.3 * 1e3 * 0.6 * 0.05;
    CHECK_THAT(e.gamma_s, WithinRel(gs_es, 1e-15));
    const double cew = std::max(std::log2(1 + 0.7 * 1e2 * 0.6 * 2e-3), std::log2(1 + 0.7 * 1e2 * 0.4 * 1e-3));
    CHECK_THAT(e.C_Ew, WithinRel(cew, 1e-15));
    CHECK_THAT(e.secrecy_s, WithinAbs(std::max(0.0, std::log2(1 + gs_es) - e.C_Es), 1e-15));
}

TEST_CASE("degenerate modes in simulation", "[simulator]") {
    NetworkConfig cfg;
    const auto reals = draw_realizations(cfg, 2000, 3, 4);
    const auto off = estimate_sop(reals, cfg, ProtocolMode{Protocol::TS, 0.0});
    CHECK(off.result.strong == 1.0);
    CHECK(off.result.pair == 1.0);
    const auto asc0 = estimate_asc(reals, cfg, ProtocolMode{Protocol::ES, 1.0});
    CHECK(asc0.weak == 0.0);
}

TEST_CASE("Wilson interval", "[simulator]") {
    const auto w = wilson95(50, 100);
    CHECK_THAT(w.center, WithinAbs(0.5, 1e-12));
    CHECK_THAT(w.half_width, WithinAbs(0.0962, 1e-4));
    CHECK(wilson95(0, 1000).half_width > 0.0);
}

TEST_CASE("estimators against the analytic model", "[simulator][mc]") {
    NetworkConfig cfg;
    const auto stats = fading::fit_user_gamma(cfg.fading, cfg.N);
    const auto reals = draw_realizations(cfg, 20000, 1, default_threads());
    for (auto kind : {Protocol::TS, Protocol::ES}) {
        ProtocolMode mode{kind, 0.7};
        const auto mc = estimate_sop(reals, cfg, mode).result;
        const auto an = analytics::sop(mode, cfg, stats);
        CHECK(std::abs(mc.weak - an.weak) <= std::max({0.01, 0.05 * an.weak, 2.0 * *mc.ci_weak}));
        CHECK(mc.pair >= std::max(mc.strong, mc.weak));
        const auto mca = estimate_asc(reals, cfg, mode);
        const auto ana = analytics::asc(mode, cfg, stats);
        CHECK(std::abs(mca.strong - ana.strong) <= std::max(0.05, 3.0 * *mca.ci_strong));
        CHECK(std::abs(mca.weak - ana.weak) <= std::max(0.02, 3.0 * *mca.ci_weak));
    }
    CHECK_THROWS(estimate_sop(cfg, ProtocolMode{}, 999, 1));
}

TEST_CASE("empirical channel CDF follows the fitted law", "[simulator][mc]") {
    NetworkConfig cfg;
    const auto stats = fading::fit_user_gamma(cfg.fading, cfg.N);
    const auto rows = empirical_channel_cdf(cfg, 20000, 2, {}, default_threads());
    REQUIRE(rows.size() == 50);
    for (const auto& r : rows) {
        const auto o = geometry::ordered_user_cdfs(r.x, stats, cfg);
        CHECK_THAT(r.F_hat, WithinAbs(geometry::unordered_user_cdf(r.x, stats, cfg), 0.02));
        CHECK_THAT(r.F_Hs, WithinAbs(o.F_Hs, 0.02));
        CHECK_THAT(r.F_Hw, WithinAbs(o.F_Hw, 0.02));
    }
}

TEST_CASE("Eve truncation radius is large enough", "[simulator]") {
    // Coupled fields: one field on twice the radius, also filtered to the
    // default radius. The 99th percentile of the strongest Eve gain must move
    // by less than 0.5%.
    NetworkConfig cfg;
    const double R = cfg.eve_trunc_radius;
    const int fields = 4000;
    std::vector<double> inner(fields, 0.0), outer(fields, 0.0);
    parallel_for(fields, default_threads(), [&](std::size_t f) {
        Xoshiro256 rng(77, f);
        for (const auto& e : geometry::sample_eve_field(cfg, rng, 2.0 * R)) {
            const double g = geometry::path_loss(e.distance, cfg) * fading::sample_eve_power(cfg.fading, cfg.N, rng);
            outer[f] = std::max(outer[f], g);
            if (e.distance <= R)
                inner[f] = std::max(inner[f], g);
        }
    });
    std::sort(inner.begin(), inner.end());
    std::sort(outer.begin(), outer.end());
    const std::size_t q = static_cast<std::size_t>(0.99 * fields);
    CHECK(std::abs(outer[q] / inner[q] - 1.0) < 0.005);
}

TEST_CASE("shared first hop is reproducible", "[simulator]") {
    NetworkConfig cfg;
    cfg.shared_first_hop = true;
    const auto a = draw_realizations(cfg, 50, 4, 1);
    const auto b = draw_realizations(cfg, 50, 4, 3);
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(same(a[i], b[i]));
}
