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
 * @file config.hpp
 * @brief INI-style run configuration: sections [network], [fading],
 *        [protocol], [quadrature]. SNRs are given in dB.
 */

#include "starsec/analytics.hpp"
#include "starsec/errors.hpp"
#include "starsec/geometry.hpp"

#include <json.hpp>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace starsec::config {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double v) { return 10.0 * std::log10(v); }

// dB value rounded to 1e-9 dB.
inline double linear_to_db_rounded(double v) { return std::round(linear_to_db(v) * 1e9) / 1e9; }

/// Everything a run needs besides the command itself.
struct RunConfig {
    geometry::NetworkConfig network{};
    analytics::ProtocolMode mode{};
    analytics::QuadratureOrders quadrature{};

    void validate() const {
        network.validate();
        mode.validate();
        if (quadrature.M_s < 1 || quadrature.M_s > 200)
            throw ConfigError("1 <= M_s <= 200", "Gauss-Laguerre order out of range");
        if (quadrature.M_w < 1 || quadrature.M_w > 500)
            throw ConfigError("1 <= M_w <= 500", "Chebyshev-Gauss order out of range");
    }
};

/// Known keys, as "section.key".
inline const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = {
        "network.l_BR",     "network.R_U",       "network.lambda_e", "network.alpha",
        "network.C_r",      "network.rho_b_db",  "network.rho_e_db", "network.a_s",
        "network.a_w",      "network.R_s",       "network.R_w",      "network.N",
        "network.eve_trunc_radius", "network.shared_first_hop",
        "fading.kappa1",    "fading.mu1",        "fading.kappa2",    "fading.mu2",
        "protocol.mode",    "protocol.param_s",
        "quadrature.M_s",   "quadrature.M_w"};
    return keys;
}

namespace detail {

inline double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError(key + " is a number", "cannot parse '" + v + "'");
    }
}

inline int parse_int(const std::string& key, const std::string& v) {
    const double d = parse_double(key, v);
    if (d != std::floor(d) || std::abs(d) > 1e9)
        throw ConfigError(key + " is an integer", "cannot parse '" + v + "'");
    return static_cast<int>(d);
}

inline bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes")
        return true;
    if (v == "false" || v == "0" || v == "no")
        return false;
    throw ConfigError(key + " is a boolean", "cannot parse '" + v + "'");
}

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace detail

/// Applies one "section.key = value" setting.
inline void apply(RunConfig& rc, const std::string& key, const std::string& raw) {
    const std::string v = detail::trim(raw);
    auto& n = rc.network;
    auto& f = n.fading;
    using detail::parse_bool;
    using detail::parse_double;
    using detail::parse_int;
    if (key == "network.l_BR") n.l_BR = parse_double(key, v);
    else if (key == "network.R_U") n.R_U = parse_double(key, v);
    else if (key == "network.lambda_e") n.lambda_e = parse_double(key, v);
    else if (key == "network.alpha") n.alpha = parse_double(key, v);
    else if (key == "network.C_r") n.C_r = parse_double(key, v);
    else if (key == "network.rho_b_db") n.rho_b = db_to_linear(parse_double(key, v));
    else if (key == "network.rho_e_db") n.rho_e = db_to_linear(parse_double(key, v));
    else if (key == "network.a_s") n.a_s = parse_double(key, v);
    else if (key == "network.a_w") n.a_w = parse_double(key, v);
    else if (key == "network.R_s") n.R_s = parse_double(key, v);
    else if (key == "network.R_w") n.R_w = parse_double(key, v);
    else if (key == "network.N") n.N = parse_int(key, v);
    else if (key == "network.eve_trunc_radius") n.eve_trunc_radius = parse_double(key, v);
    else if (key == "network.shared_first_hop") n.shared_first_hop = parse_bool(key, v);
    else if (key == "fading.kappa1") f.kappa1 = parse_double(key, v);
    else if (key == "fading.mu1") f.mu1 = parse_double(key, v);
    else if (key == "fading.kappa2") f.kappa2 = parse_double(key, v);
    else if (key == "fading.mu2") f.mu2 = parse_double(key, v);
    else if (key == "protocol.mode") {
        if (v == "TS" || v == "ts") rc.mode.kind = analytics::Protocol::TS;
        else if (v == "ES" || v == "es") rc.mode.kind = analytics::Protocol::ES;
        else throw ConfigError("protocol.mode in {TS, ES}", "unknown protocol '" + v + "'");
    }
    else if (key == "protocol.param_s") rc.mode.param_s = parse_double(key, v);
    else if (key == "quadrature.M_s") rc.quadrature.M_s = parse_int(key, v);
    else if (key == "quadrature.M_w") rc.quadrature.M_w = parse_int(key, v);
    else throw ConfigError("known configuration key", "unknown key '" + key + "'");
}

/// Parses INI text on top of the built-in defaults.
inline RunConfig parse_ini(const std::string& text) {
    boost::property_tree::ptree tree;
    std::istringstream in(text);
    try {
        boost::property_tree::ini_parser::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError("well-formed INI", e.what());
    }
    RunConfig rc;
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty())
            throw ConfigError("keys live in sections", "top-level key '" + section + "'");
        for (const auto& [key, value] : body)
            apply(rc, section + "." + key, value.get_value<std::string>());
    }
    return rc;
}

inline RunConfig load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("readable config file", "cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_ini(ss.str());
}

/// Applies "section.key=value" overrides in order.
inline void apply_overrides(RunConfig& rc, const std::vector<std::string>& overrides) {
    for (const auto& o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos)
            throw ConfigError("override has the form section.key=value", "got '" + o + "'");
        apply(rc, detail::trim(o.substr(0, eq)), o.substr(eq + 1));
    }
}

/// Shortest round-trip-safe formatting used for all numeric output.
inline std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline nlohmann::ordered_json to_json(const RunConfig& rc) {
    const auto& n = rc.network;
    nlohmann::ordered_json j;
    j["network"] = {{"l_BR", n.l_BR},
                    {"R_U", n.R_U},
                    {"lambda_e", n.lambda_e},
                    {"alpha", n.alpha},
                    {"C_r", n.C_r},
                    {"rho_b_db", linear_to_db_rounded(n.rho_b)},
                    {"rho_e_db", linear_to_db_rounded(n.rho_e)},
                    {"a_s", n.a_s},
                    {"a_w", n.a_w},
                    {"R_s", n.R_s},
                    {"R_w", n.R_w},
                    {"N", n.N},
                    {"eve_trunc_radius", n.eve_trunc_radius},
                    {"shared_first_hop", n.shared_first_hop}};
    j["fading"] = {{"kappa1", n.fading.kappa1}, {"mu1", n.fading.mu1}, {"kappa2", n.fading.kappa2},
                   {"mu2", n.fading.mu2}};
    j["protocol"] = {{"mode", analytics::to_string(rc.mode.kind)}, {"param_s", rc.mode.param_s}};
    j["quadrature"] = {{"M_s", rc.quadrature.M_s}, {"M_w", rc.quadrature.M_w}};
    return j;
}

/// INI text reproducing `rc` (all keys written explicitly).
inline std::string to_ini(const RunConfig& rc) {
    const auto j = to_json(rc);
    std::ostringstream out;
    bool first = true;
    for (const auto& [section, body] : j.items()) {
        if (!first)
            out << "\n";
        first = false;
        out << "[" << section << "]\n";
        for (const auto& [key, value] : body.items()) {
            out << key << " = ";
            if (value.is_string())
                out << value.get<std::string>();
            else if (value.is_boolean())
                out << (value.get<bool>() ? "true" : "false");
            else if (value.is_number_integer())
                out << value.get<long>();
            else
                out << format_number(value.get<double>());
            out << "\n";
        }
    }
    return out.str();
}

}  // namespace starsec::config
