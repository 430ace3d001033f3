#pragma once

#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "teich/farey.hpp"
#include "teich/io.hpp"
#include "teich/ptorus.hpp"
#include "teich/supratio.hpp"
#include "teich/torus.hpp"

namespace teich::cli {

enum class Command {
    dist_teich,
    dist_thurston,
    norm_teich,
    norm_thurston,
    dual_sphere,
    converge_boundary,
    converge_gm,
    gardiner_check,
};

enum class Format { json, csv };

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidPoint = 2;
inline constexpr int kExitUncertified = 3;

struct RunConfig {
    Command command = Command::dist_teich;
    std::string from;
    std::string to;
    std::string at;
    std::string vec;
    std::string slope = "1/0";
    std::string twist = "1/0";
    std::vector<std::string> slopes;
    std::vector<long long> ks{10, 25, 50};
    double weight = 1.0;
    int samples = 256;
    double tol = 0.0; // 0 selects the per-command default
    int max_depth = 0; // 0 selects the per-command default
    std::string output_path;
    Format format = Format::json;
    bool require_certified = false;
};

inline const std::vector<std::pair<std::string, Command>>& command_names()
{
    static const std::vector<std::pair<std::string, Command>> names{
        {"dist-teich", Command::dist_teich},
        {"dist-thurston", Command::dist_thurston},
        {"norm-teich", Command::norm_teich},
        {"norm-thurston", Command::norm_thurston},
        {"dual-sphere", Command::dual_sphere},
        {"converge-boundary", Command::converge_boundary},
        {"converge-gm", Command::converge_gm},
        {"gardiner-check", Command::gardiner_check},
    };
    return names;
}

inline std::string command_name(Command c)
{
    for (const auto& [name, cmd] : command_names()) {
        if (cmd == c) {
            return name;
        }
    }
    return "?";
}

namespace detail {

struct Output {
    std::string text;
    bool certified = true;
};

using io::format_number;
using nlohmann::json;

inline std::string csv_line(const std::vector<std::string>& cells)
{
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) {
            line += ',';
        }
        line += cells[i];
    }
    return line + "\n";
}

inline std::string meta_line(double tol, int max_depth, bool certified)
{
    return "# tol=" + format_number(tol) + " max_depth=" + std::to_string(max_depth) +
           " certified=" + (certified ? "true" : "false") + "\n";
}

inline std::string render(const json& j, const RunConfig& cfg)
{
    if (cfg.format == Format::json) {
        return j.dump(2) + "\n";
    }
    // Flat objects only: one header row and one value row.
    std::vector<std::string> keys;
    std::vector<std::string> vals;
    for (const auto& [k, v] : j.items()) {
        keys.push_back(k);
        if (v.is_string()) {
            vals.push_back(v.get<std::string>());
        } else if (v.is_number_float()) {
            vals.push_back(format_number(v.get<double>()));
        } else if (v.is_object()) {
            std::string s;
            for (const auto& [kk, vv] : v.items()) {
                s += (s.empty() ? "" : ";") + kk + "=" +
                     (vv.is_number_float() ? format_number(vv.get<double>()) : vv.dump());
            }
            vals.push_back(s);
        } else {
            vals.push_back(v.dump());
        }
    }
    return csv_line(keys) + csv_line(vals);
}

inline std::vector<Slope> slopes_or(const RunConfig& cfg, std::vector<Slope> fallback)
{
    if (cfg.slopes.empty()) {
        return fallback;
    }
    std::vector<Slope> out;
    for (const auto& s : cfg.slopes) {
        out.push_back(io::parse_slope_text(s));
    }
    return out;
}

inline std::string require(const std::string& value, const char* flag)
{
    if (value.empty()) {
        throw io::ParseError(std::string("missing required option ") + flag);
    }
    return value;
}

inline Output dist_teich(const RunConfig& cfg)
{
    const double tol = cfg.tol > 0 ? cfg.tol : 1e-6;
    const int depth = cfg.max_depth > 0 ? cfg.max_depth : 4096;
    const auto a = io::parse_torus_point(require(cfg.from, "--from"));
    const auto b = io::parse_torus_point(require(cfg.to, "--to"));
    const auto r = torus::teich_distance_enum(a, b, tol, {depth, 2'000'000});
    json j;
    j["command"] = "dist-teich";
    j["from"] = io::format_torus_point(a);
    j["to"] = io::format_torus_point(b);
    j["distance"] = 0.5 * std::log(r.value);
    j["distance_upper"] = io::finite_or_null(0.5 * std::log(r.frontier_bound));
    j["oracle_distance"] = torus::teich_distance_oracle(a, b);
    j["tol"] = tol;
    j["max_depth"] = depth;
    j.update(io::to_json(r));
    return {render(j, cfg), r.certified};
}

inline Output dist_thurston(const RunConfig& cfg)
{
    const double tol = cfg.tol > 0 ? cfg.tol : 1e-6;
    const int depth = cfg.max_depth > 0 ? cfg.max_depth : 14;
    const auto a = io::parse_markov_point(require(cfg.from, "--from"));
    const auto b = io::parse_markov_point(require(cfg.to, "--to"));
    const auto r = ptorus::thurston_distance(a, b, tol, {depth, 50'000'000});
    json j;
    j["command"] = "dist-thurston";
    j["from"] = io::to_json(a);
    j["to"] = io::to_json(b);
    j["distance"] = std::log(r.value);
    j["tol"] = tol;
    j["max_depth"] = depth;
    j["bound_mode"] = "frontier-heuristic";
    j.update(io::to_json(r));
    return {render(j, cfg), r.certified};
}

inline Output norm_teich(const RunConfig& cfg)
{
    const double tol = cfg.tol > 0 ? cfg.tol : 1e-6;
    const int depth = cfg.max_depth > 0 ? cfg.max_depth : 4096;
    const auto t = io::parse_torus_point(require(cfg.at, "--at"));
    const auto v = io::parse_numbers(require(cfg.vec, "--vec"), 2);
    const torus::TangentVector tv{v[0], v[1]};
    const auto n = torus::teich_norm_detail(t, tv, tol, {depth, 2'000'000});
    json j;
    j["command"] = "norm-teich";
    j["at"] = io::format_torus_point(t);
    j["vec"] = {{"vx", tv.vx}, {"vy", tv.vy}};
    j["norm"] = n.value;
    j["rational_sup"] = n.rational.value;
    j["circle_max"] = n.circle_max;
    j["oracle_norm"] = tv.norm() / (2.0 * t.y);
    j["tol"] = tol;
    j["max_depth"] = depth;
    j.update(io::to_json(n.rational));
    j["value"] = n.value;
    return {render(j, cfg), n.rational.certified};
}

inline Output norm_thurston(const RunConfig& cfg)
{
    const double tol = cfg.tol > 0 ? cfg.tol : 1e-6;
    const int depth = cfg.max_depth > 0 ? cfg.max_depth : 12;
    const auto m = io::parse_markov_point(require(cfg.at, "--at"));
    const auto v = io::parse_numbers(require(cfg.vec, "--vec"), 2);
    ptorus::PTTangent w;
    try {
        w = ptorus::lift_tangent(m, v[0], v[1]);
    } catch (const std::domain_error& e) {
        throw io::ParseError(e.what());
    }
    const auto r = ptorus::thurston_norm(m, w, tol, {depth, 50'000'000});
    json j;
    j["command"] = "norm-thurston";
    j["at"] = io::to_json(m);
    j["tangent"] = {{"wx", w.wx}, {"wy", w.wy}, {"wz", w.wz}};
    j["norm"] = r.value;
    j["tol"] = tol;
    j["max_depth"] = depth;
    j["bound_mode"] = "frontier-heuristic";
    j.update(io::to_json(r));
    return {render(j, cfg), r.certified};
}

inline Output dual_sphere(const RunConfig& cfg)
{
    const auto t = io::parse_torus_point(require(cfg.at, "--at"));
    if (cfg.samples < 16) {
        throw io::ParseError("--samples must be at least 16");
    }
    const auto pts = torus::dual_sphere(t, cfg.samples);
    auto label = [](const torus::DualSample& s) {
        return s.slope ? s.slope->str() : "theta=" + format_number(s.angle);
    };
    if (cfg.format == Format::csv) {
        std::string out = "# dual sphere: differentials of extremal length on {Ext = 1} at " +
                          io::format_torus_point(t) + "\n";
        out += "# samples=" + std::to_string(cfg.samples) + " closed-form, no truncation\n";
        out += "gx,gy,slope_or_angle\n";
        for (const auto& s : pts) {
            out += csv_line({format_number(s.g.gx), format_number(s.g.gy), label(s)});
        }
        return {out, true};
    }
    json rows = json::array();
    for (const auto& s : pts) {
        rows.push_back({{"gx", s.g.gx}, {"gy", s.g.gy}, {"slope_or_angle", label(s)}});
    }
    json j;
    j["command"] = "dual-sphere";
    j["at"] = io::format_torus_point(t);
    j["samples"] = cfg.samples;
    j["certified"] = true;
    j["covectors"] = rows;
    return {j.dump(2) + "\n", true};
}

inline Output converge_boundary(const RunConfig& cfg)
{
    const double tol = cfg.tol > 0 ? cfg.tol : 1e-6;
    const int depth = cfg.max_depth > 0 ? cfg.max_depth : 12;
    const auto base = io::parse_markov_point(cfg.at.empty() ? "3,3,3" : cfg.at);
    const Slope twist = io::parse_slope_text(cfg.twist);
    const auto slopes = slopes_or(cfg, {Slope{0, 1}, Slope{1, 1}, Slope{1, 0}});
    std::string out = "# boundary convergence of the normalized length functional length/L_X along Dehn twists about " +
                      twist.str() + " from (" + format_number(base.x) + "," + format_number(base.y) + "," +
                      format_number(base.z) + ")\n";
    out += meta_line(tol, depth, false);
    out += "k,slope,length,L_X,normalized_value\n";
    for (long long k : cfg.ks) {
        ptorus::MarkovPoint xk;
        try {
            xk = ptorus::dehn_twist(base, twist, k);
        } catch (const std::invalid_argument& e) {
            throw io::ParseError(e.what());
        }
        const double lip = ptorus::thurston_distance(base, xk, tol, {depth, 50'000'000}).value;
        for (const auto& s : slopes) {
            const double len = ptorus::slope_length(xk, s);
            out += csv_line({std::to_string(k), s.str(), format_number(len), format_number(lip),
                             format_number(len / lip)});
        }
    }
    return {out, false};
}

inline Output converge_gm(const RunConfig& cfg)
{
    const auto base = io::parse_torus_point(cfg.at.empty() ? "i" : cfg.at);
    const auto slopes = slopes_or(cfg, {Slope{0, 1}, Slope{1, 1}, Slope{1, 0}});
    std::string out = "# boundary convergence of the normalized extremal length functional Ext^(1/2)/K_X^(1/2) "
                      "along tau + k from " +
                      io::format_torus_point(base) + "\n";
    out += "# K_X from the closed-form Teichmueller distance; certified=true\n";
    out += "k,slope,ext,K_X,normalized_value\n";
    for (long long k : cfg.ks) {
        const torus::TorusPoint tk{base.x + static_cast<double>(k), base.y};
        const double kx = std::exp(2.0 * torus::teich_distance_oracle(base, tk));
        for (const auto& s : slopes) {
            const torus::WeightedFoliation f{1.0, s};
            out += csv_line({std::to_string(k), s.str(), format_number(torus::extremal_length(f, tk)),
                             format_number(kx), format_number(torus::normalized_extremal_functional(base, tk, f))});
        }
    }
    return {out, true};
}

inline Output gardiner_check(const RunConfig& cfg)
{
    const auto t = io::parse_torus_point(require(cfg.at, "--at"));
    const auto v = io::parse_numbers(require(cfg.vec, "--vec"), 2);
    if (!(cfg.weight > 0.0)) {
        throw io::ParseError("--weight must be positive");
    }
    const torus::WeightedFoliation f{cfg.weight, io::parse_slope_text(cfg.slope)};
    const torus::TangentVector tv{v[0], v[1]};
    const auto phi = torus::quad_diff_of_foliation(f, t);
    const double pairing = torus::gardiner_pairing(phi, tv, t);
    const double direct = torus::d_extremal(f, t)(tv);
    json j;
    j["command"] = "gardiner-check";
    j["at"] = io::format_torus_point(t);
    j["slope"] = f.slope.str();
    j["weight"] = f.weight;
    j["vec"] = {{"vx", tv.vx}, {"vy", tv.vy}};
    j["gardiner_pairing"] = pairing;
    j["d_extremal"] = direct;
    j["abs_error"] = std::abs(pairing - direct);
    j["extremal_length"] = torus::extremal_length(f, t);
    j["quad_diff_norm"] = phi.norm();
    j["certified"] = true;
    return {render(j, cfg), true};
}

} // namespace detail

/// Runs one command and writes its output to cfg.output_path (or out when
/// empty). Returns the process exit status.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    detail::Output result;
    try {
        switch (cfg.command) {
        case Command::dist_teich: result = detail::dist_teich(cfg); break;
        case Command::dist_thurston: result = detail::dist_thurston(cfg); break;
        case Command::norm_teich: result = detail::norm_teich(cfg); break;
        case Command::norm_thurston: result = detail::norm_thurston(cfg); break;
        case Command::dual_sphere: result = detail::dual_sphere(cfg); break;
        case Command::converge_boundary: result = detail::converge_boundary(cfg); break;
        case Command::converge_gm: result = detail::converge_gm(cfg); break;
        case Command::gardiner_check: result = detail::gardiner_check(cfg); break;
        }
    } catch (const io::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalidPoint;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalidPoint;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalidPoint;
    }

    if (cfg.output_path.empty()) {
        out << result.text;
    } else {
        std::ofstream file(cfg.output_path, std::ios::binary);
        if (!file) {
            err << "error: cannot open " << cfg.output_path << " for writing\n";
            return 1;
        }
        file << result.text;
    }
    if (cfg.require_certified && !result.certified) {
        err << "error: result is not certified\n";
        return kExitUncertified;
    }
    return kExitOk;
}

} // namespace teich::cli
