#pragma once

#include <charconv>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "spdc/constants.hpp"
#include "spdc/errors.hpp"
#include "spdc/interference.hpp"
#include "spdc/scenario.hpp"
#include "spdc/version.hpp"

namespace spdc {

// Locale-independent general format with 12 significant digits.
inline std::string format_number(double v, int digits = 12) {
    char buf[48];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, digits);
    return std::string(buf, res.ptr);
}

// CSV body: tau in femtoseconds, raw and normalized rates, LF line endings.
inline std::string csv_string(const InterferencePattern& p) {
    std::string out = "tau_fs,rate_raw,rate_normalized\n";
    for (std::size_t i = 0; i < p.taus.size(); ++i) {
        out += format_number(p.taus[i] / fs);
        out += ',';
        out += format_number(p.raw[i]);
        out += ',';
        out += format_number(p.normalized[i]);
        out += '\n';
    }
    return out;
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
}

// JSON sidecar with the pattern metrics, the grid, the convergence report and
// the full resolved configuration.
inline nlohmann::json sidecar_json(const Scenario& sc, const QuadratureGrid& grid,
                                   const InterferencePattern& p, double vis, double asym,
                                   bool asym_defined, double evanescent_fraction) {
    nlohmann::json j;
    j["tool"] = {{"name", tool_name}, {"version", tool_version}};
    j["visibility"] = vis;
    if (asym_defined)
        j["asymmetry"] = asym;
    else
        j["asymmetry"] = nullptr;
    j["baseline_raw"] = p.baseline_raw;
    j["dip_center_tau_fs"] = p.taus.empty() ? 0.0 : p.taus[p.dip_index] / fs;
    j["samples"] = p.taus.size();
    j["grid"] = {{"n_freq_sum", grid.n_freq_sum},
                 {"n_freq_diff", grid.n_freq_diff},
                 {"n_q_radial", grid.n_q_radial},
                 {"n_q_angular", grid.n_q_angular},
                 {"n_det_radial", grid.n_det_radial},
                 {"n_det_angular", grid.n_det_angular},
                 {"n_freq_pairs", grid.pairs.size()},
                 {"n_q_nodes", grid.q_nodes.size()},
                 {"n_det_nodes", grid.det_nodes.size()},
                 {"freq_sum_halfwidth_rad_s", grid.sum_half},
                 {"freq_diff_halfwidth_rad_s", grid.diff_half},
                 {"q_halfwidth_rad_m", grid.q_span},
                 {"det_halfwidth_rad_m", grid.det_span},
                 {"clamped_by_validity_band", grid.clamped_by_validity},
                 {"evanescent_fraction", evanescent_fraction}};
    nlohmann::json conv = nlohmann::json::array();
    for (const auto& c : p.convergence)
        conv.push_back({{"dimension", c.dimension}, {"max_change", c.max_change}});
    j["convergence"] = conv;
    nlohmann::json rc = nlohmann::json::object();
    for (const auto& [k, v] : resolved_config(sc, grid)) rc[k] = v;
    j["resolved_config"] = rc;
    return j;
}

}  // namespace spdc
