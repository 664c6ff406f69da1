#pragma once

// JSON and CSV forms of the toolkit's values. Doubles are written in
// shortest round-trip form with '.' decimals regardless of locale.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <iterator>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "uclab/bridge.hpp"
#include "uclab/error.hpp"
#include "uclab/frames.hpp"
#include "uclab/line.hpp"
#include "uclab/minimizer.hpp"
#include "uclab/periodic.hpp"

namespace uclab {

using json = nlohmann::json;

namespace io {

inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return {buf.data(), res.ptr};
}

inline json complex_array(const std::vector<cplx>& v) {
    json arr = json::array();
    for (const cplx& c : v) arr.push_back(json::array({c.real(), c.imag()}));
    return arr;
}

namespace detail {

[[noreturn]] inline void invalid(std::string_view what) { throw Error(ErrorKind::ConfigInvalid, "io", what); }

inline const json& field(const json& j, const char* key) {
    if (!j.is_object()) invalid("expected a JSON object");
    const auto it = j.find(key);
    if (it == j.end()) invalid(std::string("missing field '") + key + "'");
    return *it;
}

inline double number(const json& j, const char* what) {
    if (!j.is_number()) invalid(std::string(what) + " must be a number");
    return j.get<double>();
}

inline int integer(const json& j, const char* what) {
    if (!j.is_number_integer()) invalid(std::string(what) + " must be an integer");
    return j.get<int>();
}

}  // namespace detail

inline std::vector<cplx> parse_complex_array(const json& arr, const char* what) {
    if (!arr.is_array()) detail::invalid(std::string(what) + " must be an array of [re, im] pairs");
    std::vector<cplx> out;
    out.reserve(arr.size());
    for (const json& e : arr) {
        if (e.is_number()) {
            out.emplace_back(e.get<double>(), 0.0);
            continue;
        }
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
            detail::invalid(std::string(what) + " entries must be [re, im]");
        }
        out.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return out;
}

inline json to_json(const PeriodicSignal& f) { return {{"k0", f.k0()}, {"coeffs", complex_array(f.coeffs())}}; }

inline PeriodicSignal periodic_from_json(const json& j) {
    return {detail::integer(detail::field(j, "k0"), "k0"), parse_complex_array(detail::field(j, "coeffs"), "coeffs")};
}

inline json to_json(const SampledLineSignal& f) {
    return {{"x_min", f.x_min}, {"dx", f.dx}, {"samples", complex_array(f.samples)}};
}

inline SampledLineSignal sampled_from_json(const json& j) {
    SampledLineSignal f;
    f.x_min = detail::number(detail::field(j, "x_min"), "x_min");
    f.dx = detail::number(detail::field(j, "dx"), "dx");
    if (!(f.dx > 0.0)) detail::invalid("dx must be positive");
    f.samples = parse_complex_array(detail::field(j, "samples"), "samples");
    return f;
}

inline json to_json(const PiecewiseLinearSpectrum& s) {
    return {{"q", s.q}, {"offset", s.offset}, {"k0", s.k0}, {"nodes", complex_array(s.nodes)}};
}

inline PiecewiseLinearSpectrum spectrum_from_json(const json& j) {
    PiecewiseLinearSpectrum s;
    s.q = detail::number(detail::field(j, "q"), "q");
    if (!(s.q > 0.0)) detail::invalid("q must be positive");
    s.offset = j.contains("offset") ? detail::number(j["offset"], "offset") : 0.0;
    s.k0 = detail::integer(detail::field(j, "k0"), "k0");
    s.nodes = parse_complex_array(detail::field(j, "nodes"), "nodes");
    return s;
}

inline json to_json(const PeriodicUCReport& r) {
    return {{"norm_sq", r.norm_sq},     {"tau", json::array({r.tau.real(), r.tau.imag()})},
            {"a_term", r.a_term},       {"b_term_im", r.b_term_im},
            {"freq_centre", r.freq_centre}, {"var_A", r.var_A},
            {"var_F", r.var_F},         {"uc", r.uc},
            {"ill_conditioned", r.ill_conditioned}};
}

inline PeriodicUCReport periodic_report_from_json(const json& j) {
    PeriodicUCReport r;
    r.norm_sq = detail::number(detail::field(j, "norm_sq"), "norm_sq");
    const std::vector<cplx> tau = parse_complex_array(json::array({detail::field(j, "tau")}), "tau");
    r.tau = tau.front();
    r.a_term = detail::number(detail::field(j, "a_term"), "a_term");
    r.b_term_im = detail::number(detail::field(j, "b_term_im"), "b_term_im");
    r.freq_centre = detail::number(detail::field(j, "freq_centre"), "freq_centre");
    r.var_A = detail::number(detail::field(j, "var_A"), "var_A");
    r.var_F = detail::number(detail::field(j, "var_F"), "var_F");
    r.uc = detail::number(detail::field(j, "uc"), "uc");
    r.ill_conditioned = detail::field(j, "ill_conditioned").get<bool>();
    return r;
}

inline json to_json(const LineUCReport& r) {
    return {{"norm_sq", r.norm_sq},         {"time_centre", r.time_centre}, {"freq_centre", r.freq_centre},
            {"time_var", r.time_var},       {"freq_var", r.freq_var},       {"uc", r.uc}};
}

inline LineUCReport line_report_from_json(const json& j) {
    LineUCReport r;
    r.norm_sq = detail::number(detail::field(j, "norm_sq"), "norm_sq");
    r.time_centre = detail::number(detail::field(j, "time_centre"), "time_centre");
    r.freq_centre = detail::number(detail::field(j, "freq_centre"), "freq_centre");
    r.time_var = detail::number(detail::field(j, "time_var"), "time_var");
    r.freq_var = detail::number(detail::field(j, "freq_var"), "freq_var");
    r.uc = detail::number(detail::field(j, "uc"), "uc");
    return r;
}

inline json to_json(const EmbeddingIdentities& r) {
    return {{"norm_residual", r.norm_residual},
            {"time_second_residual", r.time_second_residual},
            {"time_first_residual", r.time_first_residual},
            {"item3_defect", r.item3_defect},
            {"item3_predicted", r.item3_predicted},
            {"item3_residual", r.item3_residual}};
}

inline json to_json(const LevelConditions& c) {
    return {{"j", c.j}, {"q", c.q}, {"s1", c.s1}, {"s2", c.s2}, {"s3", c.s3}, {"s4", c.s4}, {"s5", c.s5}, {"s6", c.s6}};
}

inline json to_json(const ConditionReport& r) {
    json levels = json::array();
    for (const LevelConditions& c : r.levels) levels.push_back(to_json(c));
    return {{"levels", levels},
            {"c_est", r.c_est},
            {"c_estimated", r.c_estimated},
            {"m_of_c", r.m_of_c},
            {"band", r.band},
            {"trend_s1", r.trend_s1},
            {"trend_s2", r.trend_s2},
            {"pass", std::vector<bool>(std::begin(r.pass), std::end(r.pass))}};
}

inline json to_json(const SystemResidual& r) {
    return {{"alpha", r.alpha}, {"beta", r.beta}, {"eps", r.eps}, {"r1", r.r1}, {"r2", r.r2}};
}

/// A mask given as one table {"j": int, "values": [[re, im] x 2^j]} or an
/// array of such tables. Levels without a table use nu = 1.
inline MaskSpec mask_from_json(const json& j) {
    const json tables = j.is_array() ? j : json::array({j});
    auto values = std::make_shared<std::map<int, std::vector<cplx>>>();
    for (const json& t : tables) {
        const int level = detail::integer(detail::field(t, "j"), "j");
        if (level < 0 || level > 30) detail::invalid("mask level out of range");
        std::vector<cplx> v = parse_complex_array(detail::field(t, "values"), "values");
        if (v.size() != (std::size_t{1} << level)) detail::invalid("mask table for level j must hold 2^j values");
        (*values)[level] = std::move(v);
    }
    MaskSpec m;
    m.nu = [values](int level, long long k) -> cplx {
        const auto it = values->find(level);
        if (it == values->end()) return {1.0, 0.0};
        const auto p = static_cast<long long>(it->second.size());
        return it->second[static_cast<std::size_t>(((k % p) + p) % p)];
    };
    return m;
}

inline json mask_to_json(const MaskSpec& m, int max_level) {
    json arr = json::array();
    for (int level = 0; level <= max_level; ++level) {
        std::vector<cplx> v(std::size_t{1} << level);
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = m.nu(level, static_cast<long long>(k));
        arr.push_back({{"j", level}, {"values", complex_array(v)}});
    }
    return arr;
}

inline json to_json(const WaveletFrameLevels& fr) {
    json phi = json::array();
    json psi = json::array();
    for (const PeriodicSignal& p : fr.phi) phi.push_back(to_json(p));
    for (const PeriodicSignal& p : fr.psi) psi.push_back(to_json(p));
    return {{"J", fr.J}, {"support_radius", fr.support_radius}, {"phi", phi}, {"psi", psi}};
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) detail::invalid("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        detail::invalid("'" + path + "' is not valid JSON: " + e.what());
    }
}

inline void write_csv_row(std::ostream& out, const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out << ',';
        out << format_double(values[i]);
    }
    out << '\n';
}

inline constexpr std::string_view kPipelineCsvHeader =
    "j,q_j,s1,s2,s3,s4,s5,s6,uc_periodic,uc_truncated,uc_embedded,uc_recentred,freq_centre_embedded";

inline void write_pipeline_csv(std::ostream& out, const PipelineTrace& trace) {
    out << kPipelineCsvHeader << '\n';
    for (const PipelineRow& r : trace.rows) {
        const LevelConditions& c = r.conditions;
        write_csv_row(out, {static_cast<double>(c.j), c.q, c.s1, c.s2, c.s3, c.s4, c.s5, c.s6, r.uc_periodic,
                            r.uc_truncated, r.uc_embedded, r.uc_recentred, r.freq_centre_embedded});
    }
}

inline constexpr std::string_view kScanCsvHeader = "alpha,beta,r1,r2,residual_norm";

inline void write_scan_row(std::ostream& out, const SystemResidual& r) {
    write_csv_row(out, {r.alpha, r.beta, r.r1, r.r2, r.norm()});
}

/// Splits a CSV line into numbers; used by the round-trip tests and tools.
inline std::vector<double> parse_csv_numbers(std::string_view line) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= line.size()) {
        const std::size_t end = std::min(line.find(',', pos), line.size());
        const std::string_view cell = line.substr(pos, end - pos);
        double v = 0.0;
        const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size()) {
            detail::invalid("bad CSV number '" + std::string(cell) + "'");
        }
        out.push_back(v);
        pos = end + 1;
    }
    return out;
}

}  // namespace io
}  // namespace uclab
