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
 * @file simulator.hpp
 * @brief Monte Carlo model of the full downlink: user and eavesdropper
 *        placement, per-element fading, SIC, protocol capacity accounting.
 *
 * A trial is split in two stages. draw_realization() samples everything that
 * does not depend on transmit SNRs, power shares, rates or the protocol;
 * evaluate_trial() turns one realization into capacities and outage flags.
 * Reusing realizations across operating points gives common random numbers.
 */

#include "starsec/analytics.hpp"
#include "starsec/fading.hpp"
#include "starsec/geometry.hpp"
#include "starsec/random.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace starsec::sim {

using analytics::AscResult;
using analytics::Method;
using analytics::Protocol;
using analytics::ProtocolMode;
using analytics::SopResult;
using analytics::User;
using geometry::NetworkConfig;
using geometry::Side;

/// Default worker count: STARSEC_THREADS if set and positive, else the hardware count.
inline int default_threads() {
    if (const char* env = std::getenv("STARSEC_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0)
            return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs fn(i) for i in [0, n) on up to `workers` threads; fn must write only to slot i.
template <class Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
    workers = std::max(1, std::min<int>(workers, static_cast<int>(std::max<std::size_t>(n, 1))));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers)
                fn(i);
        });
    }
    for (auto& t : pool)
        t.join();
}

/// SNR-independent sample of one network snapshot.
struct ChannelRealization {
    double gain_R = 0.0;  ///< L |h|^2 of the reflecting-side user
    double gain_T = 0.0;  ///< L |h|^2 of the transmitting-side user
    std::array<double, 2> eve_max{0.0, 0.0};  ///< max L |h_e|^2 over Eves, indexed by Side
};

namespace detail {

// Per-element envelopes of one receiver: products R1 R2 with an optional
// shared BS-surface hop.
template <class Rng>
double element_product(const fading::FadingParams& p, const std::vector<double>* shared, int n, Rng& rng) {
    const double r1 = shared ? (*shared)[n] : fading::sample_kappa_mu_envelope(p.kappa1, p.mu1, rng);
    return r1 * fading::sample_kappa_mu_envelope(p.kappa2, p.mu2, rng);
}

}  // namespace detail

/// Draws users, the Eve field and all fading for trial `trial` of stream `seed`.
inline ChannelRealization draw_realization(const NetworkConfig& cfg, std::uint64_t seed, std::uint64_t trial,
                                           double eve_radius = -1.0) {
    Xoshiro256 rng(seed, trial);
    const auto& p = cfg.fading;
    std::vector<double> first_hop;
    const std::vector<double>* shared = nullptr;
    if (cfg.shared_first_hop) {
        first_hop.resize(cfg.N);
        for (auto& r : first_hop)
            r = fading::sample_kappa_mu_envelope(p.kappa1, p.mu1, rng);
        shared = &first_hop;
    }
    const auto pair = geometry::sample_lu_pair(cfg, rng);
    auto lu_power = [&]() {
        double sum = 0.0;
        for (int n = 0; n < cfg.N; ++n)
            sum += detail::element_product(p, shared, n, rng);
        return sum * sum;
    };
    ChannelRealization out;
    out.gain_R = geometry::path_loss(pair.d_R, cfg) * lu_power();
    out.gain_T = geometry::path_loss(pair.d_T, cfg) * lu_power();

    const auto eves = geometry::sample_eve_field(cfg, rng, eve_radius);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    for (const auto& e : eves) {
        std::complex<double> sum{0.0, 0.0};
        for (int n = 0; n < cfg.N; ++n)
            sum += std::polar(detail::element_product(p, shared, n, rng), phase(rng));
        const double g = geometry::path_loss(e.distance, cfg) * std::norm(sum);
        auto& slot = out.eve_max[static_cast<int>(e.side)];
        slot = std::max(slot, g);
    }
    return out;
}

struct TrialOutcome {
    bool reflect_is_strong = true;
    double H_s = 0.0, H_w = 0.0;  ///< ordered user channel powers
    double gamma_SIC = 0.0, gamma_s = 0.0, gamma_w = 0.0;
    double gamma_Es = 0.0, gamma_Ew = 0.0;  ///< strongest Eve SNR per message, over both sides
    double C_Us = 0.0, C_Uw = 0.0, C_Es = 0.0, C_Ew = 0.0;
    bool outage_s = true, outage_w = true;
    double secrecy_s = 0.0, secrecy_w = 0.0;
};

/**
 * Capacities and outage flags for one realization.
 *
 * The surface side serving the stronger user is side s. Eve capacity for
 * message ε is the maximum over both sides τ of T_τ log2(1 + a_ε ρ_e G_τ)
 * (TS) or log2(1 + a_ε ρ_e β_τ G_τ) (ES), G_τ being the strongest Eve gain on
 * side τ. The strong user's outage is decided by its own SINR γ_s; γ_SIC is
 * reported but not part of the event.
 */
inline TrialOutcome evaluate_trial(const ChannelRealization& r, const NetworkConfig& cfg, const ProtocolMode& mode) {
    TrialOutcome o;
    o.reflect_is_strong = r.gain_R >= r.gain_T;
    o.H_s = std::max(r.gain_R, r.gain_T);
    o.H_w = std::min(r.gain_R, r.gain_T);
    const Side side_s = o.reflect_is_strong ? Side::Reflect : Side::Transmit;
    const Side side_w = o.reflect_is_strong ? Side::Transmit : Side::Reflect;
    const std::array<double, 2> G{r.eve_max[static_cast<int>(side_s)], r.eve_max[static_cast<int>(side_w)]};

    const double cs = mode.c(User::Strong);
    const double cw = mode.c(User::Weak);
    const double rho = cfg.rho_b;
    const double zs = rho * cs * o.H_s;
    const double zw = rho * cw * o.H_w;
    o.gamma_s = cfg.a_s * zs;
    o.gamma_SIC = cfg.a_w * zs / (cfg.a_s * zs + 1.0);
    o.gamma_w = cfg.a_w * zw / (cfg.a_s * zw + 1.0);

    const bool ts = mode.kind == Protocol::TS;
    auto eve_capacity = [&](double a, double& best_snr) {
        double cap = 0.0;
        best_snr = 0.0;
        for (User tau : analytics::kUsers) {
            const double pt = mode.param(tau);
            if (pt <= 0.0)
                continue;
            const double snr = a * cfg.rho_e * mode.c(tau) * G[static_cast<int>(tau)];
            best_snr = std::max(best_snr, snr);
            cap = std::max(cap, (ts ? pt : 1.0) * std::log2(1.0 + snr));
        }
        return cap;
    };
    o.C_Es = eve_capacity(cfg.a_s, o.gamma_Es);
    o.C_Ew = eve_capacity(cfg.a_w, o.gamma_Ew);

    if (mode.enabled(User::Strong)) {
        o.C_Us = (ts ? mode.param_s : 1.0) * std::log2(1.0 + o.gamma_s);
        o.secrecy_s = std::max(0.0, o.C_Us - o.C_Es);
        o.outage_s = o.C_Us - o.C_Es < cfg.R_s;
    }
    if (mode.enabled(User::Weak)) {
        o.C_Uw = (ts ? mode.param_w() : 1.0) * std::log2(1.0 + o.gamma_w);
        o.secrecy_w = std::max(0.0, o.C_Uw - o.C_Ew);
        o.outage_w = o.C_Uw - o.C_Ew < cfg.R_w;
    }
    return o;
}

/// One full trial drawn from stream (seed, trial).
inline TrialOutcome run_trial(const NetworkConfig& cfg, const ProtocolMode& mode, std::uint64_t seed,
                              std::uint64_t trial) {
    return evaluate_trial(draw_realization(cfg, seed, trial), cfg, mode);
}

/// Realizations for trials [0, trials), identical for any worker count.
inline std::vector<ChannelRealization> draw_realizations(const NetworkConfig& cfg, std::size_t trials,
                                                         std::uint64_t seed, int workers = default_threads()) {
    cfg.validate();
    std::vector<ChannelRealization> out(trials);
    parallel_for(trials, workers, [&](std::size_t i) { out[i] = draw_realization(cfg, seed, i); });
    return out;
}

/// Wilson score 95% interval half-width and center for k successes in n.
struct Wilson {
    double center = 0.0;
    double half_width = 0.0;
};

inline Wilson wilson95(std::size_t k, std::size_t n) {
    constexpr double z = 1.959963984540054;
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(k) / nn;
    const double denom = 1.0 + z * z / nn;
    Wilson w;
    w.center = (p + z * z / (2.0 * nn)) / denom;
    w.half_width = z * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn)) / denom;
    return w;
}

/// Below this estimated SOP a Monte Carlo point is reported as unresolved.
inline constexpr double kSopResolutionFloor = 1e-3;

struct McSop {
    SopResult result;
    bool strong_unresolved = false;
    bool weak_unresolved = false;
    bool pair_unresolved = false;
};

/// SOP estimate from prepared realizations (frequencies with Wilson 95% half-widths).
inline McSop estimate_sop(const std::vector<ChannelRealization>& reals, const NetworkConfig& cfg,
                          const ProtocolMode& mode) {
    std::size_t ks = 0, kw = 0, kp = 0;
    for (const auto& r : reals) {
        const auto o = evaluate_trial(r, cfg, mode);
        ks += o.outage_s;
        kw += o.outage_w;
        kp += (o.outage_s || o.outage_w);
    }
    const std::size_t n = reals.size();
    if (n == 0)
        throw std::invalid_argument("estimate_sop: no trials");
    McSop out;
    auto& res = out.result;
    res.method = Method::MonteCarlo;
    res.strong = static_cast<double>(ks) / n;
    res.weak = static_cast<double>(kw) / n;
    res.pair = static_cast<double>(kp) / n;
    res.ci_strong = wilson95(ks, n).half_width;
    res.ci_weak = wilson95(kw, n).half_width;
    res.ci_pair = wilson95(kp, n).half_width;
    res.strong_disabled = !mode.enabled(User::Strong);
    res.weak_disabled = !mode.enabled(User::Weak);
    res.weak_infeasible = !(analytics::weak_threshold(mode, cfg) > 0.0);
    res.pair_independent = false;
    out.strong_unresolved = res.strong < kSopResolutionFloor;
    out.weak_unresolved = res.weak < kSopResolutionFloor;
    out.pair_unresolved = res.pair < kSopResolutionFloor;
    return out;
}

inline McSop estimate_sop(const NetworkConfig& cfg, const ProtocolMode& mode, std::size_t trials, std::uint64_t seed,
                          int workers = default_threads()) {
    if (trials < 1000)
        throw std::invalid_argument("estimate_sop: at least 1000 trials required");
    mode.validate();
    return estimate_sop(draw_realizations(cfg, trials, seed, workers), cfg, mode);
}

/// ASC estimate from prepared realizations (sample means with 1.96·SE half-widths).
inline AscResult estimate_asc(const std::vector<ChannelRealization>& reals, const NetworkConfig& cfg,
                              const ProtocolMode& mode) {
    const std::size_t n = reals.size();
    if (n < 2)
        throw std::invalid_argument("estimate_asc: need at least two trials");
    double ss = 0.0, ss2 = 0.0, sw = 0.0, sw2 = 0.0, sp = 0.0, sp2 = 0.0;
    for (const auto& r : reals) {
        const auto o = evaluate_trial(r, cfg, mode);
        const double p = o.secrecy_s + o.secrecy_w;
        ss += o.secrecy_s;
        ss2 += o.secrecy_s * o.secrecy_s;
        sw += o.secrecy_w;
        sw2 += o.secrecy_w * o.secrecy_w;
        sp += p;
        sp2 += p * p;
    }
    const double nn = static_cast<double>(n);
    auto half = [&](double s, double s2) {
        const double mean = s / nn;
        const double var = std::max(0.0, (s2 - nn * mean * mean) / (nn - 1.0));
        return 1.959963984540054 * std::sqrt(var / nn);
    };
    AscResult res;
    res.method = Method::MonteCarlo;
    res.strong = ss / nn;
    res.weak = sw / nn;
    res.ci_strong = half(ss, ss2);
    res.ci_weak = half(sw, sw2);
    res.ci_pair = half(sp, sp2);
    res.strong_disabled = !mode.enabled(User::Strong);
    res.weak_disabled = !mode.enabled(User::Weak);
    return res;
}

inline AscResult estimate_asc(const NetworkConfig& cfg, const ProtocolMode& mode, std::size_t trials,
                              std::uint64_t seed, int workers = default_threads()) {
    if (trials < 1000)
        throw std::invalid_argument("estimate_asc: at least 1000 trials required");
    mode.validate();
    return estimate_asc(draw_realizations(cfg, trials, seed, workers), cfg, mode);
}

struct ChannelCdfRow {
    double x = 0.0;
    double F_Hs = 0.0;
    double F_Hw = 0.0;
    double F_hat = 0.0;
};

/**
 * Empirical CDFs of the strong, weak and unordered user channel powers on
 * `grid`. With an empty grid, 50 log-spaced points between the 0.5% and
 * 99.5% quantiles of the unordered samples are used.
 */
inline std::vector<ChannelCdfRow> empirical_channel_cdf(const NetworkConfig& cfg, std::size_t trials,
                                                        std::uint64_t seed, std::vector<double> grid = {},
                                                        int workers = default_threads()) {
    if (trials < 10000)
        throw std::invalid_argument("empirical_channel_cdf: at least 10000 trials required");
    NetworkConfig no_eves = cfg;
    no_eves.lambda_e = 0.0;
    const auto reals = draw_realizations(no_eves, trials, seed, workers);
    std::vector<double> strong(trials), weak(trials), all;
    all.reserve(2 * trials);
    for (std::size_t i = 0; i < trials; ++i) {
        strong[i] = std::max(reals[i].gain_R, reals[i].gain_T);
        weak[i] = std::min(reals[i].gain_R, reals[i].gain_T);
        all.push_back(reals[i].gain_R);
        all.push_back(reals[i].gain_T);
    }
    std::sort(strong.begin(), strong.end());
    std::sort(weak.begin(), weak.end());
    std::sort(all.begin(), all.end());
    if (grid.empty()) {
        const double lo = all[static_cast<std::size_t>(0.005 * all.size())];
        const double hi = all[static_cast<std::size_t>(0.995 * all.size())];
        for (int i = 0; i < 50; ++i)
            grid.push_back(lo * std::pow(hi / lo, i / 49.0));
    }
    auto ecdf = [](const std::vector<double>& v, double x) {
        return static_cast<double>(std::upper_bound(v.begin(), v.end(), x) - v.begin()) / v.size();
    };
    std::vector<ChannelCdfRow> rows;
    rows.reserve(grid.size());
    for (double x : grid)
        rows.push_back({x, ecdf(strong, x), ecdf(weak, x), ecdf(all, x)});
    return rows;
}

}  // namespace starsec::sim
