#pragma once

// Text forms used on the command line and in output files:
//   torus point     "x+yi", "yi" or "i", with y > 0
//   Markov point    "x,y,z" or "chart:x,y" (upper branch)
//   slope           "p/q", "1/0" for infinity

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "teich/farey.hpp"
#include "teich/ptorus.hpp"
#include "teich/supratio.hpp"
#include "teich/torus.hpp"

namespace teich::io {

/// Raised for text that does not describe a valid point or vector.
class ParseError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline double parse_number(const std::string& text)
{
    if (text.empty()) {
        throw ParseError("empty number");
    }
    const char* begin = text.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(begin, &end);
    if (end != begin + text.size() || errno == ERANGE || !std::isfinite(v)) {
        throw ParseError("malformed number '" + text + "'");
    }
    return v;
}

inline std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

inline std::vector<double> parse_numbers(const std::string& text, std::size_t expected)
{
    const auto parts = split(text, ',');
    if (parts.size() != expected) {
        throw ParseError("expected " + std::to_string(expected) + " comma-separated numbers in '" + text + "'");
    }
    std::vector<double> out;
    out.reserve(parts.size());
    for (const auto& p : parts) {
        out.push_back(parse_number(p));
    }
    return out;
}

inline torus::TorusPoint parse_torus_point(const std::string& raw)
{
    std::string text;
    for (char c : raw) {
        if (c != ' ') {
            text.push_back(c);
        }
    }
    if (text.empty() || text.back() != 'i') {
        throw ParseError("torus point must look like x+yi: '" + raw + "'");
    }
    text.pop_back();
    // Split at the last sign that is not a leading sign or an exponent sign.
    std::size_t cut = std::string::npos;
    for (std::size_t k = text.size(); k-- > 1;) {
        if ((text[k] == '+' || text[k] == '-') && text[k - 1] != 'e' && text[k - 1] != 'E') {
            cut = k;
            break;
        }
    }
    double x = 0.0;
    std::string imag = text;
    if (cut != std::string::npos) {
        x = parse_number(text.substr(0, cut));
        imag = text.substr(cut);
    }
    double y = 0.0;
    if (imag.empty() || imag == "+") {
        y = 1.0;
    } else if (imag == "-") {
        y = -1.0;
    } else {
        y = parse_number(imag);
    }
    try {
        return torus::TorusPoint::make(x, y);
    } catch (const std::domain_error& e) {
        throw ParseError(std::string("invalid torus point '") + raw + "': " + e.what());
    }
}

inline std::string format_number(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string format_torus_point(const torus::TorusPoint& t)
{
    return format_number(t.x) + (std::signbit(t.y) ? "" : "+") + format_number(t.y) + "i";
}

inline ptorus::MarkovPoint parse_markov_point(const std::string& text)
{
    try {
        if (text.rfind("chart:", 0) == 0) {
            const auto v = parse_numbers(text.substr(6), 2);
            return ptorus::from_parameters(v[0], v[1]);
        }
        const auto v = parse_numbers(text, 3);
        return ptorus::MarkovPoint::make(v[0], v[1], v[2]);
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& e) {
        throw ParseError("invalid Markov point '" + text + "': " + e.what());
    }
}

inline Slope parse_slope_text(const std::string& text)
{
    try {
        return parse_slope(text);
    } catch (const std::exception& e) {
        throw ParseError(e.what());
    }
}

inline nlohmann::json to_json(const ptorus::MarkovPoint& m)
{
    return {{"x", m.x}, {"y", m.y}, {"z", m.z}};
}

inline ptorus::MarkovPoint markov_from_json(const nlohmann::json& j)
{
    return ptorus::MarkovPoint::make(j.at("x").get<double>(), j.at("y").get<double>(), j.at("z").get<double>());
}

/// Non-finite doubles have no JSON form; they are written as null.
inline nlohmann::json finite_or_null(double v)
{
    if (std::isfinite(v)) {
        return v;
    }
    return nullptr;
}

inline nlohmann::json to_json(const SupRatioResult& r)
{
    return {{"value", r.value},
            {"argmax", r.argmax.str()},
            {"certified", r.certified},
            {"frontier_bound", finite_or_null(r.frontier_bound)},
            {"evals", r.evals},
            {"stabilization_depth", r.stabilization_depth}};
}

} // namespace teich::io
