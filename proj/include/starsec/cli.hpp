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
 * @file cli.hpp
 * @brief Command-line front end: sweeps over one axis, runs the selected
 *        evaluation methods and writes a CSV table plus a JSON sidecar.
 *
 * Exit codes: 0 success, 2 invalid configuration or usage, 3 numerical
 * failure.
 */

#include "starsec/analytics.hpp"
#include "starsec/config.hpp"
#include "starsec/errors.hpp"
#include "starsec/simulator.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace starsec::cli {

using analytics::Method;

enum class Command { SopCurve, AscCurve, SweepModeParam, Validate, ChannelCdf };

inline const char* to_string(Command c) {
    switch (c) {
    case Command::SopCurve: return "sop-curve";
    case Command::AscCurve: return "asc-curve";
    case Command::SweepModeParam: return "sweep-mode-param";
    case Command::Validate: return "validate";
    case Command::ChannelCdf: return "channel-cdf";
    }
    return "?";
}

/// Sweep axis "start:stop:steps" over one of rho_b_db, N, param_s, R_U.
struct Axis {
    std::string name = "rho_b_db";
    double start = 0.0;
    double stop = 0.0;
    int steps = 1;

    std::vector<double> values() const {
        std::vector<double> v(steps);
        for (int i = 0; i < steps; ++i)
            v[i] = steps == 1 ? start : start + (stop - start) * i / (steps - 1);
        return v;
    }
};

inline Axis parse_axis(const std::string& name, const std::string& range) {
    static const std::vector<std::string> names = {"rho_b_db", "N", "param_s", "R_U"};
    if (std::find(names.begin(), names.end(), name) == names.end())
        throw ConfigError("axis in {rho_b_db, N, param_s, R_U}", "unknown axis '" + name + "'");
    Axis a;
    a.name = name;
    std::vector<std::string> parts;
    std::stringstream ss(range);
    std::string item;
    while (std::getline(ss, item, ':'))
        parts.push_back(item);
    if (parts.size() != 3)
        throw ConfigError("axis range is start:stop:steps", "got '" + range + "'");
    a.start = config::detail::parse_double("axis.start", parts[0]);
    a.stop = config::detail::parse_double("axis.stop", parts[1]);
    a.steps = config::detail::parse_int("axis.steps", parts[2]);
    if (a.steps < 2)
        throw ConfigError("sweep steps >= 2", "got " + parts[2]);
    return a;
}

inline Method parse_method(const std::string& s) {
    if (s == "analytic") return Method::AdaptiveIntegral;
    if (s == "quadrature") return Method::Quadrature;
    if (s == "monte-carlo" || s == "mc") return Method::MonteCarlo;
    throw ConfigError("method in {analytic, quadrature, monte-carlo}", "unknown method '" + s + "'");
}

struct RunSpec {
    Command command = Command::SopCurve;
    std::string config_path;
    std::vector<std::string> overrides;
    std::optional<Axis> axis;
    std::vector<Method> methods{Method::AdaptiveIntegral};
    std::size_t trials = 100000;
    std::uint64_t seed = 1;
    int threads = sim::default_threads();
    std::string output;
    std::string metric = "sop-pair";
    int cdf_points = 50;

    void validate() const {
        if (methods.empty())
            throw ConfigError("at least one method selected", "method list is empty");
        if (axis && axis->steps < 2)
            throw ConfigError("sweep steps >= 2", "axis has fewer than two points");
        if (trials < 1000 && uses(Method::MonteCarlo))
            throw ConfigError("trials >= 1000", "Monte Carlo needs at least 1000 trials");
        if (cdf_points < 2)
            throw ConfigError("points >= 2", "channel-cdf grid needs at least two points");
        if (threads < 1)
            throw ConfigError("threads >= 1", "worker count must be positive");
        static const std::vector<std::string> metrics = {"sop-pair", "sop-s", "sop-w", "asc-pair", "asc-s", "asc-w"};
        if (std::find(metrics.begin(), metrics.end(), metric) == metrics.end())
            throw ConfigError("metric in {sop-pair, sop-s, sop-w, asc-pair, asc-s, asc-w}",
                              "unknown metric '" + metric + "'");
    }

    bool uses(Method m) const { return std::find(methods.begin(), methods.end(), m) != methods.end(); }
};

/// A CSV table with string cells, written with RFC-4180 quoting.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    static std::string quote(const std::string& cell) {
        if (cell.find_first_of(",\"\r\n") == std::string::npos)
            return cell;
        std::string out = "\"";
        for (char c : cell) {
            if (c == '"')
                out += '"';
            out += c;
        }
        return out + "\"";
    }

    std::string to_csv() const {
        std::ostringstream out;
        auto line = [&](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i)
                out << (i ? "," : "") << quote(cells[i]);
            out << "\r\n";
        };
        line(header);
        for (const auto& r : rows)
            line(r);
        return out.str();
    }
};

inline const char* prefix(Method m) {
    switch (m) {
    case Method::AdaptiveIntegral: return "analytic";
    case Method::Quadrature: return "quadrature";
    case Method::MonteCarlo: return "mc";
    }
    return "?";
}

inline constexpr const char* kNA = "NA";
inline constexpr const char* kPairSopConvention =
    "pair SOP = P(strong outage OR weak outage); Monte Carlo estimates the joint event, "
    "analytic and quadrature use 1-(1-P_s)(1-P_w) (independence approximation)";

namespace detail {

using config::format_number;
using config::RunConfig;

inline void set_axis(RunConfig& rc, const std::string& name, double v) {
    if (name == "rho_b_db") {
        rc.network.rho_b = config::db_to_linear(v);
    } else if (name == "N") {
        if (v != std::floor(v))
            throw ConfigError("N is an integer", "axis value " + format_number(v));
        rc.network.N = static_cast<int>(v);
    } else if (name == "param_s") {
        rc.mode.param_s = v;
    } else if (name == "R_U") {
        rc.network.R_U = v;
    }
}

// Shared Monte Carlo realizations; redrawn only when the axis alters geometry or fading.
struct RealizationCache {
    const RunSpec& spec;
    std::optional<std::vector<sim::ChannelRealization>> shared;

    const std::vector<sim::ChannelRealization>& get(const RunConfig& rc, bool axis_changes_draws,
                                                    std::vector<sim::ChannelRealization>& scratch) {
        if (!axis_changes_draws) {
            if (!shared)
                shared = sim::draw_realizations(rc.network, spec.trials, spec.seed, spec.threads);
            return *shared;
        }
        scratch = sim::draw_realizations(rc.network, spec.trials, spec.seed, spec.threads);
        return scratch;
    }
};

inline std::vector<RunConfig> sweep_points(const RunSpec& spec, const RunConfig& base, const Axis& axis) {
    std::vector<RunConfig> pts;
    for (double v : axis.values()) {
        RunConfig rc = base;
        set_axis(rc, axis.name, v);
        rc.validate();
        pts.push_back(rc);
    }
    (void)spec;
    return pts;
}

inline std::string ci_cell(const std::optional<double>& ci, bool unresolved) {
    return unresolved || !ci ? kNA : format_number(*ci);
}

inline Table sop_or_asc_curve(const RunSpec& spec, const RunConfig& base, const Axis& axis, bool is_sop) {
    const auto pts = sweep_points(spec, base, axis);
    const bool axis_changes_draws = axis.name == "N" || axis.name == "R_U";
    Table t;
    t.header = {"protocol", axis.name};
    const char* metric = is_sop ? "sop" : "asc";
    for (Method m : spec.methods) {
        const std::string p = prefix(m);
        for (const char* who : {"s", "w", "pair"})
            t.header.push_back(p + "_" + metric + "_" + who);
        if (m == Method::MonteCarlo)
            for (const char* who : {"s", "w", "pair"})
                t.header.push_back(p + "_" + metric + "_" + who + "_ci");
    }
    const bool asym = !is_sop && spec.uses(Method::AdaptiveIntegral);
    if (asym) {
        t.header.push_back("asymptotic_asc_s");
        t.header.push_back("asymptotic_asc_w");
    }

    // Deterministic analytic columns computed in parallel over sweep points.
    std::vector<std::map<Method, std::vector<std::string>>> cells(pts.size());
    std::vector<std::vector<std::string>> asym_cells(pts.size());
    std::vector<std::exception_ptr> errors(pts.size());
    sim::parallel_for(pts.size(), spec.threads, [&](std::size_t i) {
        try {
            const auto& rc = pts[i];
            const auto stats = fading::fit_user_gamma(rc.network.fading, rc.network.N);
            for (Method m : spec.methods) {
                if (m == Method::MonteCarlo)
                    continue;
                if (is_sop) {
                    const auto r = analytics::sop(rc.mode, rc.network, stats, m, rc.quadrature);
                    cells[i][m] = {format_number(r.strong), format_number(r.weak), format_number(r.pair)};
                } else {
                    const auto r = analytics::asc(rc.mode, rc.network, stats, m, rc.quadrature);
                    cells[i][m] = {format_number(r.strong), format_number(r.weak), format_number(r.pair())};
                }
            }
            if (asym) {
                const auto a = analytics::asymptotic_asc(rc.mode, rc.network, stats);
                asym_cells[i] = {format_number(a.C_s_inf), format_number(a.C_w_inf)};
            }
        } catch (...) {
            errors[i] = std::current_exception();
        }
    });
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);

    if (spec.uses(Method::MonteCarlo)) {
        RealizationCache cache{spec, std::nullopt};
        std::vector<sim::ChannelRealization> scratch;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const auto& rc = pts[i];
            const auto& reals = cache.get(rc, axis_changes_draws, scratch);
            if (is_sop) {
                const auto r = sim::estimate_sop(reals, rc.network, rc.mode);
                const auto& s = r.result;
                auto val = [](double v, bool u) { return u ? std::string(kNA) : format_number(v); };
                cells[i][Method::MonteCarlo] = {val(s.strong, r.strong_unresolved), val(s.weak, r.weak_unresolved),
                                                val(s.pair, r.pair_unresolved),
                                                ci_cell(s.ci_strong, r.strong_unresolved),
                                                ci_cell(s.ci_weak, r.weak_unresolved),
                                                ci_cell(s.ci_pair, r.pair_unresolved)};
            } else {
                const auto a = sim::estimate_asc(reals, rc.network, rc.mode);
                cells[i][Method::MonteCarlo] = {format_number(a.strong),     format_number(a.weak),
                                                format_number(a.pair()),     ci_cell(a.ci_strong, false),
                                                ci_cell(a.ci_weak, false),   ci_cell(a.ci_pair, false)};
            }
        }
    }

    const auto values = axis.values();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        std::vector<std::string> row = {analytics::to_string(pts[i].mode.kind), format_number(values[i])};
        for (Method m : spec.methods)
            for (const auto& c : cells[i][m])
                row.push_back(c);
        for (const auto& c : asym_cells[i])
            row.push_back(c);
        t.rows.push_back(std::move(row));
    }
    return t;
}

// Value of the selected metric for one point and method; NaN when unresolved.
struct MetricValue {
    double value = 0.0;
    std::optional<double> ci;
    bool unresolved = false;
};

inline MetricValue metric_of(const std::string& metric, const analytics::SopResult* sop, const sim::McSop* mc_sop,
                             const analytics::AscResult* asc) {
    MetricValue v;
    if (metric.rfind("sop", 0) == 0) {
        const auto& r = mc_sop ? mc_sop->result : *sop;
        if (metric == "sop-pair") {
            v.value = r.pair;
            v.ci = r.ci_pair;
            v.unresolved = mc_sop && mc_sop->pair_unresolved;
        } else if (metric == "sop-s") {
            v.value = r.strong;
            v.ci = r.ci_strong;
            v.unresolved = mc_sop && mc_sop->strong_unresolved;
        } else {
            v.value = r.weak;
            v.ci = r.ci_weak;
            v.unresolved = mc_sop && mc_sop->weak_unresolved;
        }
    } else {
        if (metric == "asc-pair") {
            v.value = asc->pair();
            v.ci = asc->ci_pair;
        } else if (metric == "asc-s") {
            v.value = asc->strong;
            v.ci = asc->ci_strong;
        } else {
            v.value = asc->weak;
            v.ci = asc->ci_weak;
        }
    }
    return v;
}

inline Table sweep_mode_param(const RunSpec& spec, const RunConfig& base, const Axis& axis) {
    if (axis.name != "param_s")
        throw ConfigError("sweep-mode-param sweeps param_s", "axis '" + axis.name + "' given");
    const auto pts = sweep_points(spec, base, axis);
    const bool is_sop = spec.metric.rfind("sop", 0) == 0;
    std::string metric_col = spec.metric;
    std::replace(metric_col.begin(), metric_col.end(), '-', '_');

    Table t;
    t.header = {"protocol", "param_s"};
    for (Method m : spec.methods) {
        const std::string p = prefix(m);
        t.header.push_back(p + "_" + metric_col);
        if (m == Method::MonteCarlo)
            t.header.push_back(p + "_" + metric_col + "_ci");
        t.header.push_back(p + "_is_optimum");
    }

    std::vector<std::map<Method, MetricValue>> vals(pts.size());
    std::vector<std::exception_ptr> errors(pts.size());
    const auto stats = fading::fit_user_gamma(base.network.fading, base.network.N);
    sim::parallel_for(pts.size(), spec.threads, [&](std::size_t i) {
        try {
            for (Method m : spec.methods) {
                if (m == Method::MonteCarlo)
                    continue;
                if (is_sop) {
                    const auto r = analytics::sop(pts[i].mode, pts[i].network, stats, m, pts[i].quadrature);
                    vals[i][m] = metric_of(spec.metric, &r, nullptr, nullptr);
                } else {
                    const auto r = analytics::asc(pts[i].mode, pts[i].network, stats, m, pts[i].quadrature);
                    vals[i][m] = metric_of(spec.metric, nullptr, nullptr, &r);
                }
            }
        } catch (...) {
            errors[i] = std::current_exception();
        }
    });
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    if (spec.uses(Method::MonteCarlo)) {
        const auto reals = sim::draw_realizations(base.network, spec.trials, spec.seed, spec.threads);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (is_sop) {
                const auto r = sim::estimate_sop(reals, pts[i].network, pts[i].mode);
                vals[i][Method::MonteCarlo] = metric_of(spec.metric, nullptr, &r, nullptr);
            } else {
                const auto r = sim::estimate_asc(reals, pts[i].network, pts[i].mode);
                vals[i][Method::MonteCarlo] = metric_of(spec.metric, nullptr, nullptr, &r);
            }
        }
    }

    // Optimum per method: argmin for SOP metrics, argmax for ASC metrics; first index wins ties.
    std::map<Method, std::size_t> best;
    for (Method m : spec.methods) {
        std::size_t b = 0;
        for (std::size_t i = 1; i < pts.size(); ++i) {
            const double cur = vals[i][m].value;
            const double ref = vals[b][m].value;
            if (is_sop ? cur < ref : cur > ref)
                b = i;
        }
        best[m] = b;
    }

    const auto values = axis.values();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        std::vector<std::string> row = {analytics::to_string(pts[i].mode.kind), format_number(values[i])};
        for (Method m : spec.methods) {
            const auto& v = vals[i][m];
            row.push_back(v.unresolved ? kNA : format_number(v.value));
            if (m == Method::MonteCarlo)
                row.push_back(ci_cell(v.ci, v.unresolved));
            row.push_back(best[m] == i ? "1" : "0");
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline Table validate_points(const RunSpec& spec, const RunConfig& base, const Axis& axis) {
    const auto pts = sweep_points(spec, base, axis);
    const bool axis_changes_draws = axis.name == "N" || axis.name == "R_U";
    Table t;
    t.header = {"protocol", axis.name};
    const std::vector<std::string> quantities = {"sop_s", "sop_w", "asc_s", "asc_w"};
    for (const auto& q : quantities) {
        t.header.push_back("analytic_" + q);
        if (spec.uses(Method::Quadrature))
            t.header.push_back("quadrature_" + q);
        t.header.push_back("mc_" + q);
        t.header.push_back("mc_" + q + "_ci");
        t.header.push_back(q + "_abs_diff");
        t.header.push_back(q + "_tolerance");
        t.header.push_back(q + "_agree");
    }
    RealizationCache cache{spec, std::nullopt};
    std::vector<sim::ChannelRealization> scratch;
    const auto values = axis.values();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& rc = pts[i];
        const auto stats = fading::fit_user_gamma(rc.network.fading, rc.network.N);
        const auto a_sop = analytics::sop(rc.mode, rc.network, stats);
        const auto a_asc = analytics::asc(rc.mode, rc.network, stats);
        std::optional<analytics::SopResult> q_sop;
        std::optional<analytics::AscResult> q_asc;
        if (spec.uses(Method::Quadrature)) {
            q_sop = analytics::sop(rc.mode, rc.network, stats, Method::Quadrature, rc.quadrature);
            q_asc = analytics::asc(rc.mode, rc.network, stats, Method::Quadrature, rc.quadrature);
        }
        const auto& reals = cache.get(rc, axis_changes_draws, scratch);
        const auto m_sop = sim::estimate_sop(reals, rc.network, rc.mode).result;
        const auto m_asc = sim::estimate_asc(reals, rc.network, rc.mode);

        struct Q {
            double a;
            std::optional<double> q;
            double m;
            double ci;
            double tol;
        };
        auto sop_tol = [](double a, double ci) { return std::max({0.01, 0.05 * std::abs(a), 2.0 * ci}); };
        const std::vector<Q> qs = {
            {a_sop.strong, q_sop ? std::optional(q_sop->strong) : std::nullopt, m_sop.strong, *m_sop.ci_strong,
             sop_tol(a_sop.strong, *m_sop.ci_strong)},
            {a_sop.weak, q_sop ? std::optional(q_sop->weak) : std::nullopt, m_sop.weak, *m_sop.ci_weak,
             sop_tol(a_sop.weak, *m_sop.ci_weak)},
            {a_asc.strong, q_asc ? std::optional(q_asc->strong) : std::nullopt, m_asc.strong, *m_asc.ci_strong,
             std::max(0.05, 0.05 * std::abs(a_asc.strong))},
            {a_asc.weak, q_asc ? std::optional(q_asc->weak) : std::nullopt, m_asc.weak, *m_asc.ci_weak, 0.02},
        };
        std::vector<std::string> row = {analytics::to_string(rc.mode.kind), format_number(values[i])};
        for (const auto& q : qs) {
            row.push_back(format_number(q.a));
            if (spec.uses(Method::Quadrature))
                row.push_back(format_number(*q.q));
            row.push_back(format_number(q.m));
            row.push_back(format_number(q.ci));
            const double diff = std::abs(q.a - q.m);
            row.push_back(format_number(diff));
            row.push_back(format_number(q.tol));
            row.push_back(diff <= q.tol ? "1" : "0");
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

// Log-spaced channel-power grid between the 0.5% and 99.5% points of the
// analytic unordered CDF.
inline std::vector<double> channel_grid(const fading::CascadedStats& stats, const geometry::NetworkConfig& cfg,
                                        int points) {
    auto quantile = [&](double p) {
        double lo = -300.0, hi = 50.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (geometry::unordered_user_cdf(std::exp(mid), stats, cfg) < p)
                lo = mid;
            else
                hi = mid;
        }
        return std::exp(hi);
    };
    const double lo = quantile(0.005);
    const double hi = quantile(0.995);
    std::vector<double> g(points);
    for (int i = 0; i < points; ++i)
        g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1));
    return g;
}

inline Table channel_cdf(const RunSpec& spec, const RunConfig& rc, int points) {
    rc.validate();
    const auto stats = fading::fit_user_gamma(rc.network.fading, rc.network.N);
    const auto grid = channel_grid(stats, rc.network, points);
    Table t;
    t.header = {"x"};
    if (spec.uses(Method::AdaptiveIntegral))
        for (const char* c : {"analytic_f_hs", "analytic_f_hw", "analytic_f_hat"})
            t.header.push_back(c);
    if (spec.uses(Method::MonteCarlo))
        for (const char* c : {"mc_f_hs", "mc_f_hw", "mc_f_hat"})
            t.header.push_back(c);
    std::vector<sim::ChannelCdfRow> mc;
    if (spec.uses(Method::MonteCarlo))
        mc = sim::empirical_channel_cdf(rc.network, std::max<std::size_t>(spec.trials, 10000), spec.seed, grid,
                                        spec.threads);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::vector<std::string> row = {format_number(grid[i])};
        if (spec.uses(Method::AdaptiveIntegral)) {
            const double F = geometry::unordered_user_cdf(grid[i], stats, rc.network);
            const auto o = geometry::ordered_from_unordered(F);
            row.push_back(format_number(o.F_Hs));
            row.push_back(format_number(o.F_Hw));
            row.push_back(format_number(F));
        }
        if (spec.uses(Method::MonteCarlo)) {
            row.push_back(format_number(mc[i].F_Hs));
            row.push_back(format_number(mc[i].F_Hw));
            row.push_back(format_number(mc[i].F_hat));
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

}  // namespace detail

/// Resolved configuration for a spec: file (or defaults) plus overrides, validated.
inline config::RunConfig resolve_config(const RunSpec& spec) {
    config::RunConfig rc = spec.config_path.empty() ? config::RunConfig{} : config::load_file(spec.config_path);
    config::apply_overrides(rc, spec.overrides);
    rc.validate();
    return rc;
}

inline Axis default_axis(const RunSpec& spec, const config::RunConfig& rc) {
    switch (spec.command) {
    case Command::SopCurve:
    case Command::AscCurve: return parse_axis("rho_b_db", "60:120:13");
    case Command::SweepModeParam: return parse_axis("param_s", "0.05:0.95:19");
    case Command::Validate: {
        Axis a;
        a.name = "rho_b_db";
        a.start = a.stop = config::linear_to_db_rounded(rc.network.rho_b);
        a.steps = 1;
        return a;
    }
    case Command::ChannelCdf: break;
    }
    return {};
}

/// Builds the output table for a spec (no files written).
inline Table execute(const RunSpec& spec, const config::RunConfig& rc) {
    spec.validate();
    const Axis axis = spec.axis ? *spec.axis : default_axis(spec, rc);
    switch (spec.command) {
    case Command::SopCurve: return detail::sop_or_asc_curve(spec, rc, axis, true);
    case Command::AscCurve: return detail::sop_or_asc_curve(spec, rc, axis, false);
    case Command::SweepModeParam: return detail::sweep_mode_param(spec, rc, axis);
    case Command::Validate:
        if (!spec.uses(Method::AdaptiveIntegral) || !spec.uses(Method::MonteCarlo))
            throw ConfigError("validate uses analytic and monte-carlo", "both methods must be selected");
        return detail::validate_points(spec, rc, axis);
    case Command::ChannelCdf: return detail::channel_cdf(spec, rc, spec.cdf_points);
    }
    return {};
}

inline std::string sidecar_path(const std::string& csv_path) {
    const std::string ext = ".csv";
    if (csv_path.size() >= ext.size() && csv_path.compare(csv_path.size() - ext.size(), ext.size(), ext) == 0)
        return csv_path.substr(0, csv_path.size() - ext.size()) + ".json";
    return csv_path + ".json";
}

inline nlohmann::ordered_json sidecar(const RunSpec& spec, const config::RunConfig& rc) {
    nlohmann::ordered_json j;
    j["command"] = to_string(spec.command);
    j["seed"] = spec.seed;
    j["trials"] = spec.trials;
    std::vector<std::string> methods;
    for (Method m : spec.methods)
        methods.push_back(analytics::to_string(m));
    j["methods"] = methods;
    const Axis axis = spec.axis ? *spec.axis : default_axis(spec, rc);
    if (spec.command == Command::ChannelCdf)
        j["points"] = spec.cdf_points;
    else
        j["axis"] = {{"name", axis.name}, {"start", axis.start}, {"stop", axis.stop}, {"steps", axis.steps}};
    if (spec.command == Command::SweepModeParam)
        j["metric"] = spec.metric;
    j["pair_sop_convention"] = kPairSopConvention;
    j["mc_unresolved_below"] = sim::kSopResolutionFloor;
    j["config"] = config::to_json(rc);
    return j;
}

/// Runs a spec end to end, writing the CSV and JSON sidecar. Returns the exit code.
inline int run(const RunSpec& spec, std::ostream& err = std::cerr) {
    try {
        spec.validate();
        const auto rc = resolve_config(spec);
        const Table table = execute(spec, rc);
        const std::string out_path =
            spec.output.empty() ? std::string("starsec_") + to_string(spec.command) + ".csv" : spec.output;
        {
            std::ofstream csv(out_path, std::ios::binary);
            if (!csv)
                throw ConfigError("writable output path", "cannot open '" + out_path + "'");
            csv << table.to_csv();
        }
        {
            std::ofstream js(sidecar_path(out_path), std::ios::binary);
            if (!js)
                throw ConfigError("writable output path", "cannot open '" + sidecar_path(out_path) + "'");
            js << sidecar(spec, rc).dump(2) << "\n";
        }
        return 0;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const math::NonConvergenceError& e) {
        err << "numerical failure in " << e.operation() << ": " << e.what() << "\n";
        return 3;
    } catch (const std::domain_error& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::overflow_error& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

/// Parses argv into a RunSpec and runs it.
inline int main(int argc, char** argv) {
    CLI::App app{"Secrecy outage and average secrecy capacity of surface-assisted NOMA downlinks"};
    app.require_subcommand(1);

    RunSpec spec;
    std::vector<std::string> axis_args;
    std::string methods_arg;
    std::string range_arg;

    auto common = [&](CLI::App* sub) {
        sub->add_option("-c,--config", spec.config_path, "INI configuration file");
        sub->add_option("-s,--set", spec.overrides, "Override, section.key=value (repeatable)");
        sub->add_option("--axis", axis_args, "Sweep axis: NAME START:STOP:STEPS")->expected(2);
        sub->add_option("-m,--methods", methods_arg, "Comma list of analytic, quadrature, monte-carlo");
        sub->add_option("-n,--trials", spec.trials, "Monte Carlo trials per point");
        sub->add_option("--seed", spec.seed, "Random seed");
        sub->add_option("-j,--threads", spec.threads, "Worker threads (default: STARSEC_THREADS or all cores)");
        sub->add_option("-o,--output", spec.output, "Output CSV path (sidecar JSON written next to it)");
    };
    auto* sop_cmd = app.add_subcommand("sop-curve", "Secrecy outage probability versus one axis");
    auto* asc_cmd = app.add_subcommand("asc-curve", "Average secrecy capacity versus one axis");
    auto* sweep_cmd = app.add_subcommand("sweep-mode-param", "Sweep the mode parameter and flag the optimum");
    auto* val_cmd = app.add_subcommand("validate", "Analytic versus Monte Carlo agreement table");
    auto* cdf_cmd = app.add_subcommand("channel-cdf", "Ordered and unordered user channel-power CDFs");
    for (auto* s : {sop_cmd, asc_cmd, sweep_cmd, val_cmd, cdf_cmd})
        common(s);
    sweep_cmd->add_option("range", range_arg, "param_s range START:STOP:STEPS");
    cdf_cmd->add_option("--points", spec.cdf_points, "Grid points between the 0.5% and 99.5% quantiles");
    sweep_cmd->add_option("--metric", spec.metric, "sop-pair, sop-s, sop-w, asc-pair, asc-s or asc-w");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (sop_cmd->parsed()) spec.command = Command::SopCurve;
        else if (asc_cmd->parsed()) spec.command = Command::AscCurve;
        else if (sweep_cmd->parsed()) spec.command = Command::SweepModeParam;
        else if (val_cmd->parsed()) spec.command = Command::Validate;
        else spec.command = Command::ChannelCdf;

        if (!methods_arg.empty()) {
            spec.methods.clear();
            std::stringstream ss(methods_arg);
            std::string item;
            while (std::getline(ss, item, ','))
                if (!item.empty())
                    spec.methods.push_back(parse_method(item));
        } else if (spec.command == Command::Validate || spec.command == Command::ChannelCdf) {
            spec.methods = {Method::AdaptiveIntegral, Method::MonteCarlo};
        }
        if (axis_args.size() == 2)
            spec.axis = parse_axis(axis_args[0], axis_args[1]);
        if (!range_arg.empty())
            spec.axis = parse_axis("param_s", range_arg);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return run(spec);
}

}  // namespace starsec::cli
