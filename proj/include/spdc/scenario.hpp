#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "spdc/config.hpp"
#include "spdc/interference.hpp"
#include "spdc/materials.hpp"
#include "spdc/quadrature.hpp"

namespace spdc {

struct SweepSpec {
    double tau_start = 0.0;  // s
    double tau_stop = 0.0;   // s
    int steps = 0;
};

// A fully parsed and validated scene description plus the knobs the drivers
// need (sweep window, grid parameters, flags, output naming).
struct Scenario {
    Scene scene;
    GridParams grid_params;
    DetectorMode detector_mode = DetectorMode::bucket;
    double detector_radius = 0.0;
    SweepSpec sweep;
    bool oned_compatible = false;
    bool oned_canonical = false;
    std::string stem;
    std::string material_name;
    Config raw;  // original file, for the resolved dump
};

namespace detail {

inline const std::set<std::string>& scenario_keys() {
    static const std::set<std::string> keys = {
        "crystal.material", "crystal.length_mm", "crystal.cut_angle_deg",
        "crystal.principal_plane_axis",
        "pump.center_wavelength_nm", "pump.bandwidth_fwhm_nm", "pump.transverse", "pump.waist_um",
        "path.d1_mm", "path.d2_mm", "path.f_mm",
        "path.aperture", "path.aperture_size_mm", "path.slit_axis", "path.open_waist_mm",
        "path.filter", "path.filter_center_nm", "path.filter_fwhm_nm",
        "path.detector", "path.detector_radius_mm",
        "analyzers.alpha_a_deg", "analyzers.alpha_b_deg",
        "sweep.tau_start_fs", "sweep.tau_stop_fs", "sweep.steps",
        "grid.n_freq_sum", "grid.n_freq_diff", "grid.n_q_radial", "grid.n_q_angular",
        "grid.n_det_radial", "grid.n_det_angular",
        "grid.sinc_lobes", "grid.pump_support_epsilon", "grid.pupil_lobes",
        "grid.freq_sum_halfwidth_rad_s", "grid.freq_diff_halfwidth_rad_s",
        "grid.q_halfwidth_rad_m", "grid.det_halfwidth_rad_m",
        "scenario.oned_compatible", "scenario.oned_canonical",
        "output.stem"};
    return keys;
}

inline double positive(const Config& cfg, const std::string& key, double v) {
    if (!(v > 0.0)) throw ConfigError(cfg.line_of(key), "key '" + key + "' must be positive");
    return v;
}

inline std::string path_stem(const std::string& path) {
    std::string s = path;
    const auto slash = s.find_last_of('/');
    if (slash != std::string::npos) s = s.substr(slash + 1);
    const auto dot = s.find_last_of('.');
    if (dot != std::string::npos && dot > 0) s = s.substr(0, dot);
    return s;
}

inline std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

inline Scenario load_scenario(const std::string& config_path, const std::string& preset_dir) {
    Config cfg = Config::parse_file(config_path);
    cfg.validate_keys(detail::scenario_keys());

    Scenario sc;
    sc.raw = cfg;
    sc.stem = cfg.get_string("output.stem", detail::path_stem(config_path));

    // crystal
    sc.material_name = cfg.get_string("crystal.material");
    CrystalSpec crystal = load_material(sc.material_name, preset_dir);
    crystal.length = detail::positive(cfg, "crystal.length_mm", cfg.get_double("crystal.length_mm")) * mm;
    const double cut_deg = cfg.get_double("crystal.cut_angle_deg");
    if (cut_deg < 0.0 || cut_deg > 90.0)
        throw ConfigError(cfg.line_of("crystal.cut_angle_deg"), "cut angle must be in [0, 90] degrees");
    crystal.cut_angle = deg_to_rad(cut_deg);
    crystal.principal_plane_axis =
        cfg.get_enum("crystal.principal_plane_axis", {"x", "y"}, "x") == "x" ? PrincipalAxis::x
                                                                             : PrincipalAxis::y;

    // pump
    const double pump_nm = detail::positive(cfg, "pump.center_wavelength_nm",
                                            cfg.get_double("pump.center_wavelength_nm"));
    const double bw_nm = cfg.get_double("pump.bandwidth_fwhm_nm", 0.0);
    if (bw_nm < 0.0)
        throw ConfigError(cfg.line_of("pump.bandwidth_fwhm_nm"), "bandwidth must be >= 0");
    PumpSpectrum pump = PumpSpectrum::pulsed_plane_wave(pump_nm * nm, bw_nm * nm);
    if (cfg.get_enum("pump.transverse", {"planewave", "gaussian"}, "planewave") == "gaussian") {
        pump.transverse_profile = TransverseProfile::gaussian;
        pump.waist = detail::positive(cfg, "pump.waist_um", cfg.get_double("pump.waist_um", 100.0)) * um;
    }

    // optical path (both arms identical)
    OpticalPath path;
    path.d1 = detail::positive(cfg, "path.d1_mm", cfg.get_double("path.d1_mm")) * mm;
    path.d2 = detail::positive(cfg, "path.d2_mm", cfg.get_double("path.d2_mm")) * mm;
    path.f = detail::positive(cfg, "path.f_mm", cfg.get_double("path.f_mm")) * mm;
    const std::string ap = cfg.get_enum("path.aperture", {"circular", "slit", "gaussian", "open"},
                                        "open");
    const double open_waist = cfg.get_double("path.open_waist_mm", 0.0) * mm;
    if (ap == "open") {
        double w = open_waist;
        if (w <= 0.0) w = 0.05;  // no physical aperture anywhere: fixed wide default
        path.aperture = Aperture::open(w);
    } else {
        const double size = detail::positive(cfg, "path.aperture_size_mm",
                                             cfg.get_double("path.aperture_size_mm")) * mm;
        if (ap == "circular") path.aperture = Aperture::circular(size);
        else if (ap == "gaussian") path.aperture = Aperture::gaussian(size);
        else {
            const PrincipalAxis axis =
                cfg.get_enum("path.slit_axis", {"x", "y"}, "x") == "x" ? PrincipalAxis::x
                                                                       : PrincipalAxis::y;
            path.aperture = Aperture::slit(size, axis);
            path.aperture.open_waist = open_waist > 0.0 ? open_waist : 100.0 * size;
        }
    }
    const std::string fl = cfg.get_enum("path.filter", {"open", "tophat", "gaussian"}, "open");
    if (fl != "open") {
        const double center = detail::positive(cfg, "path.filter_center_nm",
                                               cfg.get_double("path.filter_center_nm")) * nm;
        const double fwhm = detail::positive(cfg, "path.filter_fwhm_nm",
                                             cfg.get_double("path.filter_fwhm_nm")) * nm;
        path.filter = fl == "tophat" ? SpectralFilter::tophat(center, fwhm)
                                     : SpectralFilter::gaussian(center, fwhm);
    }
    if (cfg.get_enum("path.detector", {"bucket", "finite"}, "bucket") == "finite") {
        sc.detector_mode = DetectorMode::finite_area;
        sc.detector_radius = detail::positive(cfg, "path.detector_radius_mm",
                                              cfg.get_double("path.detector_radius_mm")) * mm;
    }

    // analyzers
    AnalyzerConfig an;
    an.alpha_a = deg_to_rad(cfg.get_double("analyzers.alpha_a_deg", 45.0));
    an.alpha_b = deg_to_rad(cfg.get_double("analyzers.alpha_b_deg", -45.0));

    // sweep
    sc.sweep.tau_start = cfg.get_double("sweep.tau_start_fs") * fs;
    sc.sweep.tau_stop = cfg.get_double("sweep.tau_stop_fs") * fs;
    sc.sweep.steps = cfg.get_int("sweep.steps", 0);
    if (sc.sweep.steps < 2)
        throw ConfigError(cfg.line_of("sweep.steps"), "sweep.steps must be at least 2");
    if (!(sc.sweep.tau_stop > sc.sweep.tau_start))
        throw ConfigError(cfg.line_of("sweep.tau_stop_fs"), "sweep window must have tau_stop > tau_start");

    // grid
    GridParams gp;
    gp.n_freq_sum = cfg.get_int("grid.n_freq_sum", 0);
    gp.n_freq_diff = cfg.get_int("grid.n_freq_diff", 0);
    gp.n_q_radial = cfg.get_int("grid.n_q_radial", 0);
    gp.n_q_angular = cfg.get_int("grid.n_q_angular", 0);
    gp.n_det_radial = cfg.get_int("grid.n_det_radial", 0);
    gp.n_det_angular = cfg.get_int("grid.n_det_angular", 0);
    gp.sinc_lobes = cfg.get_double("grid.sinc_lobes", 4.0);
    gp.pump_support_epsilon = cfg.get_double("grid.pump_support_epsilon", 1e-4);
    gp.pupil_lobes = cfg.get_double("grid.pupil_lobes", 2.0);
    gp.sum_half_override = cfg.get_double("grid.freq_sum_halfwidth_rad_s", 0.0);
    gp.diff_half_override = cfg.get_double("grid.freq_diff_halfwidth_rad_s", 0.0);
    gp.q_span_override = cfg.get_double("grid.q_halfwidth_rad_m", 0.0);
    gp.det_span_override = cfg.get_double("grid.det_halfwidth_rad_m", 0.0);
    sc.grid_params = gp;

    sc.oned_compatible = cfg.get_bool("scenario.oned_compatible", false);
    sc.oned_canonical = cfg.get_bool("scenario.oned_canonical", false);

    sc.scene.kernel = BiphotonKernel{crystal, pump};
    sc.scene.path_a = path;
    sc.scene.path_b = path;
    sc.scene.analyzers = an;
    return sc;
}

inline QuadratureGrid resolve_grid(const Scenario& sc) {
    const double tau_absmax =
        std::max(std::abs(sc.sweep.tau_start), std::abs(sc.sweep.tau_stop));
    return build_quadrature(sc.scene.kernel.crystal, sc.scene.kernel.pump, sc.scene.path_a,
                            sc.grid_params, tau_absmax, sc.detector_mode, sc.detector_radius);
}

// Full resolved configuration: every original key plus the computed grid
// values, as exact strings. Re-running from this dump reproduces the grid
// (and therefore the CSV) bit for bit.
inline std::vector<std::pair<std::string, std::string>> resolved_config(
    const Scenario& sc, const QuadratureGrid& grid) {
    std::vector<std::pair<std::string, std::string>> out;
    static const std::set<std::string> grid_keys = {
        "grid.n_freq_sum", "grid.n_freq_diff", "grid.n_q_radial", "grid.n_q_angular",
        "grid.n_det_radial", "grid.n_det_angular",
        "grid.freq_sum_halfwidth_rad_s", "grid.freq_diff_halfwidth_rad_s",
        "grid.q_halfwidth_rad_m", "grid.det_halfwidth_rad_m"};
    for (const auto& [key, entry] : sc.raw.entries()) {
        if (grid_keys.count(key)) continue;  // replaced by resolved values below
        out.emplace_back(key, entry.value);
    }
    out.emplace_back("grid.n_freq_sum", std::to_string(grid.n_freq_sum));
    out.emplace_back("grid.n_freq_diff", std::to_string(grid.n_freq_diff));
    out.emplace_back("grid.n_q_radial", std::to_string(grid.n_q_radial));
    out.emplace_back("grid.n_q_angular", std::to_string(grid.n_q_angular));
    out.emplace_back("grid.n_det_radial", std::to_string(grid.n_det_radial));
    out.emplace_back("grid.n_det_angular", std::to_string(grid.n_det_angular));
    if (grid.sum_half > 0.0)
        out.emplace_back("grid.freq_sum_halfwidth_rad_s", detail::format_full(grid.sum_half));
    out.emplace_back("grid.freq_diff_halfwidth_rad_s", detail::format_full(grid.diff_half));
    out.emplace_back("grid.q_halfwidth_rad_m", detail::format_full(grid.q_span));
    out.emplace_back("grid.det_halfwidth_rad_m", detail::format_full(grid.det_span));
    return out;
}

inline std::string config_text_from(const std::vector<std::pair<std::string, std::string>>& kv) {
    std::string text;
    for (const auto& [k, v] : kv) text += k + " = " + v + "\n";
    return text;
}

}  // namespace spdc
