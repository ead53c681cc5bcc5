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
 * @file analytics.hpp
 * @brief Eavesdropper SNR laws, secrecy outage probability, average secrecy
 *        capacity and their high-SNR asymptotics for the TS and ES protocols.
 *
 * Index conventions: `User::Strong` / `User::Weak` label both a legitimate
 * user and the side of the surface it occupies. An eavesdropper on side τ
 * attacking the message of user ε is mapped to an equivalent SNR on side ε;
 * the most detrimental equivalent Eve has CDF exp(-S_ε(x)).
 */

#include "starsec/errors.hpp"
#include "starsec/fading.hpp"
#include "starsec/geometry.hpp"
#include "starsec/math/quadrature.hpp"
#include "starsec/math/special_functions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

namespace starsec::analytics {

using fading::CascadedStats;
using geometry::NetworkConfig;

enum class Protocol { TS, ES };
enum class User { Strong = 0, Weak = 1 };
enum class Method { AdaptiveIntegral, Quadrature, MonteCarlo };

inline const char* to_string(Protocol p) { return p == Protocol::TS ? "TS" : "ES"; }
inline const char* to_string(Method m) {
    switch (m) {
    case Method::AdaptiveIntegral: return "analytic";
    case Method::Quadrature: return "quadrature";
    case Method::MonteCarlo: return "monte-carlo";
    }
    return "?";
}

inline constexpr std::array<User, 2> kUsers = {User::Strong, User::Weak};

/// Operating protocol and its strong-side parameter (T_s or β_s).
struct ProtocolMode {
    Protocol kind = Protocol::TS;
    double param_s = 0.7;

    double param_w() const { return 1.0 - param_s; }
    double param(User u) const { return u == User::Strong ? param_s : param_w(); }
    /// SNR scaling of side τ: 1 for TS, β_τ for ES.
    double c(User side) const { return kind == Protocol::TS ? 1.0 : param(side); }
    bool enabled(User u) const { return param(u) > 0.0; }
    bool degenerate() const { return param_s <= 0.0 || param_s >= 1.0; }

    void validate() const {
        if (!(param_s >= 0.0 && param_s <= 1.0))
            throw ConfigError("0 <= param_s <= 1", "mode parameter must lie in [0, 1]");
    }
};

/// Fréchet scale constants of the per-side strongest-Eve SNR.
struct EveLaw {
    double m_s = 0.0;
    double m_w = 0.0;
    double delta = 0.0;

    double m(User u) const { return u == User::Strong ? m_s : m_w; }
};

/// m_ε = ½ π δ λ_e (ρ_e a_ε A_L W_e)^δ Γ(δ).
inline EveLaw eve_law(const NetworkConfig& cfg, const CascadedStats& stats) {
    EveLaw law;
    law.delta = cfg.delta();
    auto m = [&](double a) {
        if (cfg.lambda_e <= 0.0 || cfg.rho_e <= 0.0)
            return 0.0;
        return 0.5 * std::numbers::pi * law.delta * cfg.lambda_e *
               std::pow(cfg.rho_e * a * cfg.A_L() * stats.W_e, law.delta) * std::tgamma(law.delta);
    };
    law.m_s = m(cfg.a_s);
    law.m_w = m(cfg.a_w);
    return law;
}

/// CDF exp(-m_ε (x / c_τ)^{-δ}) of the strongest Eve SNR on one side.
inline double eve_snr_cdf_side(double x, const EveLaw& law, User eps, double c_tau) {
    if (!(c_tau > 0.0 && c_tau <= 1.0))
        throw std::domain_error("eve_snr_cdf_side: side coefficient must lie in (0, 1]");
    if (x <= 0.0)
        return 0.0;
    if (std::isinf(x))
        return 1.0;
    return std::exp(-law.m(eps) * std::pow(x / c_tau, -law.delta));
}

/**
 * S_ε(x) = -ln F(x) for the equivalent most-detrimental Eve of user ε.
 * TS: m_ε Σ_τ ((x+1)^{T_ε/T_τ} - 1)^{-δ}; ES: m_ε Σ_τ (β_ε x / β_τ)^{-δ}.
 * Disabled sides (T_τ = 0 or β_τ = 0) carry no Eve term.
 */
inline double equiv_eve_exponent(double x, const EveLaw& law, User eps, const ProtocolMode& mode) {
    const double m = law.m(eps);
    if (m == 0.0)
        return x > 0.0 ? 0.0 : HUGE_VAL;
    if (x <= 0.0)
        return HUGE_VAL;
    const double pe = mode.param(eps);
    double S = 0.0;
    for (User tau : kUsers) {
        const double pt = mode.param(tau);
        if (pt <= 0.0)
            continue;
        const double ratio = pe / pt;
        if (mode.kind == Protocol::TS) {
            const double base = std::expm1(ratio * std::log1p(x));
            S += std::pow(base, -law.delta);
        } else {
            S += std::pow(ratio * x, -law.delta);
        }
    }
    return m * S;
}

inline double equiv_eve_cdf(double x, const EveLaw& law, User eps, const ProtocolMode& mode) {
    return std::exp(-equiv_eve_exponent(x, law, eps, mode));
}

inline double equiv_eve_ccdf(double x, const EveLaw& law, User eps, const ProtocolMode& mode) {
    return -std::expm1(-equiv_eve_exponent(x, law, eps, mode));
}

/// x · pdf(x) of the equivalent Eve, valid for both protocols and degenerate modes.
inline double equiv_eve_x_pdf(double x, const EveLaw& law, User eps, const ProtocolMode& mode) {
    const double m = law.m(eps);
    if (m == 0.0 || x <= 0.0)
        return 0.0;
    const double S = equiv_eve_exponent(x, law, eps, mode);
    if (S > 745.0)
        return 0.0;
    const double pe = mode.param(eps);
    const double d = law.delta;
    double sum = 0.0;  // -x dS/dx / m
    for (User tau : kUsers) {
        const double pt = mode.param(tau);
        if (pt <= 0.0)
            continue;
        const double ratio = pe / pt;
        if (mode.kind == Protocol::TS) {
            const double lp = std::log1p(x);
            const double base = std::expm1(ratio * lp);
            if (std::isinf(base))
                continue;
            sum += d * ratio * std::exp(std::log(x) + (ratio - 1.0) * lp - (d + 1.0) * std::log(base));
        } else {
            sum += d * std::pow(ratio * x, -d);
        }
    }
    return std::exp(-S) * m * sum;
}

inline double equiv_eve_pdf(double x, const EveLaw& law, User eps, const ProtocolMode& mode) {
    if (x <= 0.0)
        return 0.0;
    return equiv_eve_x_pdf(x, law, eps, mode) / x;
}

/// Equivalent-Eve PDF for TS ; rejects degenerate time splits.
inline double equiv_eve_pdf_ts(double x, const EveLaw& law, User eps, const ProtocolMode& mode) {
    if (mode.kind != Protocol::TS)
        throw std::invalid_argument("equiv_eve_pdf_ts: mode must be TS");
    if (mode.degenerate())
        throw std::invalid_argument("equiv_eve_pdf_ts: degenerate mode, T_s must lie in (0, 1)");
    return equiv_eve_pdf(x, law, eps, mode);
}

/// Equivalent-Eve PDF for ES; rejects degenerate energy splits.
inline double equiv_eve_pdf_es(double x, const EveLaw& law, User eps, const ProtocolMode& mode) {
    if (mode.kind != Protocol::ES)
        throw std::invalid_argument("equiv_eve_pdf_es: mode must be ES");
    if (mode.degenerate())
        throw std::invalid_argument("equiv_eve_pdf_es: degenerate mode, beta_s must lie in (0, 1)");
    return equiv_eve_pdf(x, law, eps, mode);
}

/// Smallest x with S_ε(x) <= target (S is decreasing), bracketed to [e^-700, e^700].
inline double equiv_eve_quantile_exponent(double target, const EveLaw& law, User eps, const ProtocolMode& mode) {
    double lo = -700.0;
    double hi = 700.0;
    if (equiv_eve_exponent(std::exp(lo), law, eps, mode) <= target)
        return std::exp(lo);
    if (equiv_eve_exponent(std::exp(hi), law, eps, mode) > target)
        return std::exp(hi);
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (equiv_eve_exponent(std::exp(mid), law, eps, mode) > target)
            lo = mid;
        else
            hi = mid;
    }
    return std::exp(hi);
}

/// Weak-user threshold B_up beyond which its secrecy outage is certain.
inline double weak_threshold(const ProtocolMode& mode, const NetworkConfig& cfg) {
    if (!mode.enabled(User::Weak))
        return -1.0;
    if (mode.kind == Protocol::TS)
        return 1.0 / (std::exp2(cfg.R_w / mode.param_w()) * cfg.a_s) - 1.0;
    const double bw = mode.param_w();
    return 1.0 / (std::exp2(cfg.R_w) * cfg.a_s * bw) - 1.0 / bw;
}

/// H_s threshold (times ρ_b) below which the strong user is in outage for Eve SNR x.
inline double strong_channel_threshold(double x, const ProtocolMode& mode, const NetworkConfig& cfg) {
    if (mode.kind == Protocol::TS)
        return (std::exp2(cfg.R_s / mode.param_s) * (x + 1.0) - 1.0) / cfg.a_s;
    const double bs = mode.param_s;
    return (std::exp2(cfg.R_s) * (bs * x + 1.0) - 1.0) / (bs * cfg.a_s);
}

/// H_w threshold (times ρ_b) for the weak user; +inf when the SINR ceiling is exceeded.
inline double weak_channel_threshold(double x, const ProtocolMode& mode, const NetworkConfig& cfg) {
    double y, scale;
    if (mode.kind == Protocol::TS) {
        y = std::exp2(cfg.R_w / mode.param_w()) * (x + 1.0) - 1.0;
        scale = 1.0;
    } else {
        y = std::exp2(cfg.R_w) * (mode.param_w() * x + 1.0) - 1.0;
        scale = mode.param_w();
    }
    const double room = cfg.a_w - cfg.a_s * y;
    if (room <= 0.0)
        return HUGE_VAL;
    return y / (scale * room);
}

struct SopResult {
    double strong = 1.0;
    double weak = 1.0;
    double pair = 1.0;
    Method method = Method::AdaptiveIntegral;
    std::optional<double> ci_strong;  ///< 95% half-width (Monte Carlo only)
    std::optional<double> ci_weak;
    std::optional<double> ci_pair;
    bool strong_disabled = false;
    bool weak_disabled = false;
    bool weak_infeasible = false;   ///< B_up <= 0, weak SOP fixed to 1
    bool pair_independent = true;   ///< pair = 1 - (1-P_s)(1-P_w) rather than a joint estimate
};

struct AscResult {
    double strong = 0.0;
    double weak = 0.0;
    Method method = Method::AdaptiveIntegral;
    std::optional<double> ci_strong;  ///< 95% half-width (Monte Carlo only)
    std::optional<double> ci_weak;
    std::optional<double> ci_pair;
    bool strong_disabled = false;
    bool weak_disabled = false;

    double pair() const { return strong + weak; }
};

struct QuadratureOrders {
    int M_s = 30;
    int M_w = 30;
};

namespace detail {

inline const math::Tolerance kTol{1e-15, 1e-9, 15, 20000};
inline constexpr double kLowExponent = 700.0;  // F(x_lo) = e^-700
inline constexpr double kHighTail = 1e-15;     // F̄(x_hi)

inline void require(const math::IntegralResult& r, const char* op) {
    if (!r.converged && !(r.error <= 1e-9 + 1e-6 * std::abs(r.value)))
        throw math::NonConvergenceError(op, "adaptive integral did not converge");
}

inline double strong_cdf(double h, const CascadedStats& stats, const NetworkConfig& cfg) {
    if (std::isinf(h))
        return 1.0;
    const double F = geometry::unordered_user_cdf(h, stats, cfg);
    return F * F;
}

inline double weak_cdf(double h, const CascadedStats& stats, const NetworkConfig& cfg) {
    if (std::isinf(h))
        return 1.0;
    const double Fbar = geometry::unordered_user_ccdf(h, stats, cfg);
    return 1.0 - Fbar * Fbar;
}

// 1 - F_Hs(h) = F̄ (1 + F)
inline double strong_ccdf(double h, const CascadedStats& stats, const NetworkConfig& cfg) {
    if (std::isinf(h))
        return 0.0;
    const double Fbar = geometry::unordered_user_ccdf(h, stats, cfg);
    return Fbar * (2.0 - Fbar);
}

inline double weak_ccdf(double h, const CascadedStats& stats, const NetworkConfig& cfg) {
    if (std::isinf(h))
        return 0.0;
    const double Fbar = geometry::unordered_user_ccdf(h, stats, cfg);
    return Fbar * Fbar;
}

inline void check_inputs(const ProtocolMode& mode, const NetworkConfig& cfg) {
    mode.validate();
    cfg.validate();
}

}  // namespace detail

/**
 * Secrecy outage probabilities of both users.
 *
 * Strong: ∫_0^∞ F_Hs(g_s(x)/ρ_b) f_ε(x) dx. Weak: ∫_0^{B_up} F_Hw(g_w(x)/ρ_b)
 * f_ε(x) dx + F̄_ε(B_up). Method::AdaptiveIntegral integrates in ln x between
 * Eve quantiles; Method::Quadrature applies an M_s-point Gauss-Laguerre rule
 * (strong) and an M_w-point Chebyshev-Gauss rule (weak).
 */
inline SopResult sop(const ProtocolMode& mode, const NetworkConfig& cfg, const CascadedStats& stats,
                     Method method = Method::AdaptiveIntegral, QuadratureOrders orders = {}) {
    detail::check_inputs(mode, cfg);
    if (method == Method::MonteCarlo)
        throw std::invalid_argument("sop: Monte Carlo estimates come from the simulator");
    const EveLaw law = eve_law(cfg, stats);
    SopResult out;
    out.method = method;
    out.strong_disabled = !mode.enabled(User::Strong);
    out.weak_disabled = !mode.enabled(User::Weak);

    auto Fs_at = [&](double x) {
        return detail::strong_cdf(strong_channel_threshold(x, mode, cfg) / cfg.rho_b, stats, cfg);
    };
    auto Fw_at = [&](double x) {
        return detail::weak_cdf(weak_channel_threshold(x, mode, cfg) / cfg.rho_b, stats, cfg);
    };

    if (!out.strong_disabled) {
        const User u = User::Strong;
        if (law.m(u) == 0.0) {
            out.strong = Fs_at(0.0);
        } else if (method == Method::Quadrature) {
            const auto rule = math::gauss_laguerre(orders.M_s);
            double s = 0.0;
            for (int i = 0; i < rule.order; ++i) {
                const double xi = rule.nodes[i];
                const double pdf = equiv_eve_pdf(xi, law, u, mode);
                if (pdf > 0.0)
                    s += std::exp(rule.log_weights[i] + xi) * pdf * Fs_at(xi);
            }
            out.strong = s;
        } else {
            const double x_lo = equiv_eve_quantile_exponent(detail::kLowExponent, law, u, mode);
            const double x_hi = equiv_eve_quantile_exponent(detail::kHighTail, law, u, mode);
            auto integrand = [&](double x) {
                const double xp = equiv_eve_x_pdf(x, law, u, mode);
                return xp == 0.0 ? 0.0 : xp * Fs_at(x);
            };
            auto g = [&](double v) { return integrand(std::exp(v)); };
            const auto r = math::integrate(g, std::log(x_lo), std::log(x_hi), detail::kTol, 48);
            detail::require(r, "sop");
            out.strong = r.value + equiv_eve_cdf(x_lo, law, u, mode) * Fs_at(x_lo) +
                         equiv_eve_ccdf(x_hi, law, u, mode) * Fs_at(x_hi);
        }
        out.strong = std::clamp(out.strong, 0.0, 1.0);
    }

    if (!out.weak_disabled) {
        const User u = User::Weak;
        const double B = weak_threshold(mode, cfg);
        if (!(B > 0.0)) {
            out.weak_infeasible = true;
            out.weak = 1.0;
        } else if (law.m(u) == 0.0) {
            out.weak = Fw_at(0.0);
        } else if (method == Method::Quadrature) {
            const auto rule = math::chebyshev_gauss(orders.M_w);
            double s = 0.0;
            for (int i = 0; i < rule.order; ++i) {
                const double x = 0.5 * B * (rule.nodes[i] + 1.0);
                s += rule.weights[i] * equiv_eve_pdf(x, law, u, mode) * Fw_at(x);
            }
            out.weak = 0.5 * B * s + equiv_eve_ccdf(B, law, u, mode);
        } else {
            const double x_lo = std::min(equiv_eve_quantile_exponent(detail::kLowExponent, law, u, mode), B);
            auto g = [&](double v) {
                const double x = std::exp(v);
                const double xp = equiv_eve_x_pdf(x, law, u, mode);
                return xp == 0.0 ? 0.0 : xp * Fw_at(x);
            };
            const auto r = math::integrate(g, std::log(x_lo), std::log(B), detail::kTol, 32);
            detail::require(r, "sop");
            out.weak = r.value + equiv_eve_cdf(x_lo, law, u, mode) * Fw_at(x_lo) + equiv_eve_ccdf(B, law, u, mode);
        }
        out.weak = std::clamp(out.weak, 0.0, 1.0);
    }
    out.pair = 1.0 - (1.0 - out.strong) * (1.0 - out.weak);
    out.pair_independent = true;
    return out;
}

namespace detail {

// P(actual strong-user SINR > x) and the Eve CDF on the same scale.
inline double strong_exceed(double x, const ProtocolMode& mode, const NetworkConfig& cfg,
                            const CascadedStats& stats) {
    const double gain = cfg.a_s * cfg.rho_b * mode.c(User::Strong);
    return strong_ccdf(x / gain, stats, cfg);
}

inline double weak_exceed(double x, const ProtocolMode& mode, const NetworkConfig& cfg, const CascadedStats& stats) {
    const double room = cfg.a_w - cfg.a_s * x;
    if (room <= 0.0)
        return 0.0;
    return weak_ccdf(x / (cfg.rho_b * mode.c(User::Weak) * room), stats, cfg);
}

// Eve CDF on the actual-SINR axis: TS uses the equivalent SNR directly, ES
// rescales by 1/β_ε.
inline double eve_cdf_actual(double x, const EveLaw& law, User u, const ProtocolMode& mode) {
    return equiv_eve_cdf(x / mode.c(u), law, u, mode);
}

inline double eve_ccdf_actual(double x, const EveLaw& law, User u, const ProtocolMode& mode) {
    return equiv_eve_ccdf(x / mode.c(u), law, u, mode);
}

inline double prefactor(const ProtocolMode& mode, User u) {
    return (mode.kind == Protocol::TS ? mode.param(u) : 1.0) / std::numbers::ln2;
}

// ∫_{x_lo}^{∞} G(x) dx for G with a power-law tail G ~ x^{-1-d}; the part
// beyond x_hi is closed analytically.
template <class G>
double integrate_heavy_tail(G&& G_of_x, double x_lo, double x_hi, double d, const char* op) {
    auto g = [&](double v) {
        const double x = std::exp(v);
        return G_of_x(x) * x;
    };
    const auto r = math::integrate(g, std::log(x_lo), std::log(x_hi), kTol, 48);
    require(r, op);
    return r.value + G_of_x(x_hi) * x_hi / d;
}

}  // namespace detail

/**
 * Average secrecy capacities, C_ε = c_ε/ln2 ∫ P(Γ_ε > x) F_Eε(x) / (1+x) dx on
 * the actual-SINR axis, with c_ε = T_ε (TS) or 1 (ES); the weak integral stops
 * at the SINR ceiling a_w/a_s.
 */
inline AscResult asc(const ProtocolMode& mode, const NetworkConfig& cfg, const CascadedStats& stats,
                     Method method = Method::AdaptiveIntegral, QuadratureOrders orders = {}) {
    detail::check_inputs(mode, cfg);
    if (method == Method::MonteCarlo)
        throw std::invalid_argument("asc: Monte Carlo estimates come from the simulator");
    const EveLaw law = eve_law(cfg, stats);
    AscResult out;
    out.method = method;
    out.strong_disabled = !mode.enabled(User::Strong);
    out.weak_disabled = !mode.enabled(User::Weak);
    const double d = law.delta;

    if (!out.strong_disabled) {
        const User u = User::Strong;
        auto G = [&](double x) {
            const double p = detail::strong_exceed(x, mode, cfg, stats);
            if (p == 0.0)
                return 0.0;
            return p * detail::eve_cdf_actual(x, law, u, mode) / (1.0 + x);
        };
        double value;
        if (method == Method::Quadrature) {
            const auto rule = math::gauss_laguerre(orders.M_s);
            value = 0.0;
            for (int i = 0; i < rule.order; ++i)
                value += std::exp(rule.log_weights[i] + rule.nodes[i]) * G(rule.nodes[i]);
        } else {
            const double c = mode.c(u);
            double x_lo = 1e-12;
            if (law.m(u) > 0.0)
                x_lo = std::min(x_lo, c * equiv_eve_quantile_exponent(detail::kLowExponent, law, u, mode));
            // Tail closure beyond x_hi.
            const double gain = cfg.a_s * cfg.rho_b * c;
            const double x_hi = std::max(1e12 * gain * cfg.A_L() * stats.theta_r * stats.k_r /
                                             std::pow(cfg.R_U, cfg.alpha),
                                         1e6);
            value = detail::integrate_heavy_tail(G, x_lo, x_hi, d, "asc") + x_lo;
        }
        out.strong = detail::prefactor(mode, u) * value;
    }

    if (!out.weak_disabled) {
        const User u = User::Weak;
        const double A = cfg.a_w / cfg.a_s;
        auto G = [&](double x) {
            const double p = detail::weak_exceed(x, mode, cfg, stats);
            if (p == 0.0)
                return 0.0;
            return p * detail::eve_cdf_actual(x, law, u, mode) / (1.0 + x);
        };
        double value;
        if (method == Method::Quadrature) {
            const auto rule = math::chebyshev_gauss(orders.M_w);
            value = 0.0;
            for (int i = 0; i < rule.order; ++i)
                value += rule.weights[i] * G(0.5 * A * (rule.nodes[i] + 1.0));
            value *= 0.5 * A;
        } else {
            double x_lo = 1e-12;
            if (law.m(u) > 0.0)
                x_lo = std::min(x_lo, mode.c(u) * equiv_eve_quantile_exponent(detail::kLowExponent, law, u, mode));
            auto g = [&](double v) {
                const double x = std::exp(v);
                return G(x) * x;
            };
            const auto r = math::integrate(g, std::log(x_lo), std::log(A), detail::kTol, 32);
            detail::require(r, "asc");
            value = r.value + x_lo;
        }
        out.weak = detail::prefactor(mode, u) * value;
    }
    return out;
}

/// High-SNR decay exponent of the strong-user SOP: δ (ES), δ·min(1, T_s/T_w) (TS).
inline double secrecy_diversity_order(const ProtocolMode& mode, const NetworkConfig& cfg) {
    mode.validate();
    const double d = cfg.delta();
    if (mode.kind == Protocol::ES || mode.param_w() <= 0.0)
        return d;
    return d * std::min(1.0, mode.param_s / mode.param_w());
}

/// Weak-user SOP floor F̄_w(B_up) as ρ_b → ∞; 1 when B_up <= 0.
inline double weak_error_floor(const ProtocolMode& mode, const NetworkConfig& cfg, const EveLaw& law) {
    const double B = weak_threshold(mode, cfg);
    if (!(B > 0.0))
        return 1.0;
    return equiv_eve_ccdf(B, law, User::Weak, mode);
}

/// E[log2 H_s] by integration by parts on the ordered strong-user CDF.
inline double mean_log2_strong_channel(const CascadedStats& stats, const NetworkConfig& cfg) {
    const double h0 = cfg.A_L() * stats.theta_r * stats.k_r / std::pow(cfg.R_U, cfg.alpha);
    const double u0 = std::log(h0);
    // ln h0 + ∫_{u0}^{∞} (1 - F(e^u)) du - ∫_{-∞}^{u0} F(e^u) du
    auto upper = [&](double u) { return detail::strong_ccdf(std::exp(u), stats, cfg); };
    auto lower = [&](double u) { return detail::strong_cdf(std::exp(u), stats, cfg); };
    const double span = 60.0;
    const auto up = math::integrate(upper, u0, u0 + span, detail::kTol, 32);
    const auto lo = math::integrate(lower, u0 - span, u0, detail::kTol, 32);
    detail::require(up, "asymptotic_asc");
    detail::require(lo, "asymptotic_asc");
    // The upper tail decays as e^{-δ u}; close it analytically.
    const double tail = upper(u0 + span) / cfg.delta();
    return (u0 + up.value + tail - lo.value) / std::numbers::ln2;
}

struct AsymptoticAsc {
    double C_s_inf = 0.0;
    double C_w_inf = 0.0;
    double slope_s = 0.0;
    double slope_w = 0.0;
    double sigma_s = 0.0;  ///< E[log2 H_s]
};

/**
 * High-SNR ASC lines: C_s ≈ c_s (log2(a_s c_s' ρ_b) + σ_s) - loss_s and
 * C_w ≈ c_w log2(1 + a_w/a_s) - loss_w, with loss_ε = c_ε/ln2 ∫ F̄_Eε(x)/(1+x) dx.
 */
inline AsymptoticAsc asymptotic_asc(const ProtocolMode& mode, const NetworkConfig& cfg, const CascadedStats& stats) {
    detail::check_inputs(mode, cfg);
    const EveLaw law = eve_law(cfg, stats);
    AsymptoticAsc out;
    out.sigma_s = mean_log2_strong_channel(stats, cfg);
    const double d = law.delta;
    if (mode.enabled(User::Strong)) {
        const User u = User::Strong;
        double loss = 0.0;
        if (law.m(u) > 0.0) {
            auto G = [&](double x) { return detail::eve_ccdf_actual(x, law, u, mode) / (1.0 + x); };
            const double c = mode.c(u);
            const double x_lo = std::min(1e-12, c * equiv_eve_quantile_exponent(1e-15, law, u, mode) * 1e-6);
            const double x_hi = std::max(1e6, c * equiv_eve_quantile_exponent(1e-12, law, u, mode));
            loss = detail::integrate_heavy_tail(G, x_lo, x_hi, d, "asymptotic_asc") + x_lo;
        }
        const double pre = detail::prefactor(mode, u);
        const double gain = cfg.a_s * cfg.rho_b * mode.c(u);
        out.C_s_inf = pre * std::numbers::ln2 * (std::log2(gain) + out.sigma_s) - pre * loss;
        out.slope_s = mode.kind == Protocol::TS ? mode.param_s : 1.0;
    }
    if (mode.enabled(User::Weak)) {
        const User u = User::Weak;
        const double A = cfg.a_w / cfg.a_s;
        double loss = 0.0;
        if (law.m(u) > 0.0) {
            auto g = [&](double v) {
                const double x = std::exp(v);
                return detail::eve_ccdf_actual(x, law, u, mode) / (1.0 + x) * x;
            };
            const auto r = math::integrate(g, std::log(1e-300), std::log(A), detail::kTol, 64);
            detail::require(r, "asymptotic_asc");
            loss = r.value;
        }
        const double pre = detail::prefactor(mode, u);
        out.C_w_inf = pre * std::numbers::ln2 * std::log2(1.0 + A) - pre * loss;
        out.slope_w = 0.0;
    }
    return out;
}

}  // namespace starsec::analytics
