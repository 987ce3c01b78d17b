// simulate: configuration-driven front end for delay sweeps, grid-convergence
// checks and one-dimensional-model comparisons. See README.md.

#include <cstdlib>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "spdc/interference.hpp"
#include "spdc/output.hpp"
#include "spdc/parallel.hpp"
#include "spdc/scenario.hpp"
#include "spdc/version.hpp"

#ifndef SPDC_DEFAULT_PRESET_DIR
#define SPDC_DEFAULT_PRESET_DIR "presets"
#endif

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_numeric = 3;

std::string preset_dir_from(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("SPDC_PRESET_DIR"); env && *env) return env;
    return SPDC_DEFAULT_PRESET_DIR;
}

// --config accepts a file path or a preset name resolved in the preset dir.
std::string resolve_config(const std::string& ref, const std::string& preset_dir) {
    std::ifstream probe(ref);
    if (probe.good()) return ref;
    const std::string candidate = preset_dir + "/" + ref + ".cfg";
    std::ifstream probe2(candidate);
    if (probe2.good()) return candidate;
    throw spdc::ConfigError(0, "config '" + ref + "' not found (also tried '" + candidate + "')");
}

spdc::InterferencePattern run_pattern(const spdc::Scenario& sc, const spdc::QuadratureGrid& grid,
                                      int threads) {
    return spdc::pattern_sweep(sc.sweep.tau_start, sc.sweep.tau_stop, sc.sweep.steps, sc.scene,
                               grid, threads);
}

double max_abs_change(const spdc::InterferencePattern& a, const spdc::InterferencePattern& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.normalized.size(); ++i)
        m = std::max(m, std::abs(a.normalized[i] - b.normalized[i]));
    return m;
}

int cmd_sweep(const std::string& config, const std::string& out_dir, int threads,
              const std::string& presets, bool check) {
    const std::string path = resolve_config(config, presets);
    spdc::Scenario sc = spdc::load_scenario(path, presets);
    const spdc::QuadratureGrid grid = spdc::resolve_grid(sc);
    spdc::CoincidenceEngine engine(sc.scene, grid, threads);

    std::vector<double> taus(sc.sweep.steps), raw(sc.sweep.steps);
    const double step = (sc.sweep.tau_stop - sc.sweep.tau_start) / (sc.sweep.steps - 1);
    for (int i = 0; i < sc.sweep.steps; ++i) taus[i] = sc.sweep.tau_start + i * step;
    spdc::parallel_for(taus.size(), threads, [&](std::size_t i) { raw[i] = engine.rate(taus[i]); });
    spdc::InterferencePattern pattern = spdc::finalize_pattern(taus, raw);

    if (check) {
        const spdc::GridParams doubled =
            spdc::doubled_dimension(sc.grid_params, grid, "freq_diff");
        spdc::Scenario sc2 = sc;
        sc2.grid_params = doubled;
        const spdc::QuadratureGrid grid2 = spdc::resolve_grid(sc2);
        const spdc::InterferencePattern p2 = run_pattern(sc, grid2, threads);
        pattern.convergence.push_back({"freq_diff", max_abs_change(pattern, p2)});
    }

    const double vis = spdc::visibility(pattern);
    double asym = 0.0;
    bool asym_ok = true;
    try {
        asym = spdc::asymmetry(pattern);
    } catch (const spdc::DegeneratePattern&) {
        asym_ok = false;
    }

    const std::string csv = spdc::csv_string(pattern);
    spdc::write_text_file(out_dir + "/" + sc.stem + ".csv", csv);
    nlohmann::json j =
        spdc::sidecar_json(sc, grid, pattern, vis, asym, asym_ok, engine.evanescent_fraction());
    spdc::write_text_file(out_dir + "/" + sc.stem + ".json", j.dump(2) + "\n");

    std::cout << sc.stem << ": " << sc.sweep.steps << " samples, visibility "
              << spdc::format_number(vis, 6);
    if (asym_ok) std::cout << ", asymmetry " << spdc::format_number(asym, 6);
    std::cout << "\n";
    return exit_ok;
}

int cmd_converge(const std::string& config, int threads, const std::string& presets) {
    const std::string path = resolve_config(config, presets);
    spdc::Scenario sc = spdc::load_scenario(path, presets);
    const spdc::QuadratureGrid grid = spdc::resolve_grid(sc);
    const spdc::InterferencePattern base = run_pattern(sc, grid, threads);

    bool pass = true;
    for (const std::string& dim : spdc::grid_dimensions()) {
        if (dim == "freq_sum" && grid.cw) {
            std::cout << "converge " << dim << ": skipped (cw pump)\n";
            continue;
        }
        spdc::Scenario sc2 = sc;
        sc2.grid_params = spdc::doubled_dimension(sc.grid_params, grid, dim);
        const spdc::QuadratureGrid grid2 = spdc::resolve_grid(sc2);
        const spdc::InterferencePattern p2 = run_pattern(sc, grid2, threads);
        const double change = max_abs_change(base, p2);
        const bool ok = change < 1e-3;
        pass = pass && ok;
        std::cout << "converge " << dim << ": max change " << spdc::format_number(change, 6)
                  << (ok ? " (ok)" : " (FAIL)") << "\n";
    }
    if (!pass) {
        std::cerr << "convergence check failed (threshold 1e-3)\n";
        return exit_numeric;
    }
    return exit_ok;
}

int cmd_oracle(const std::string& config, int threads, const std::string& presets) {
    const std::string path = resolve_config(config, presets);
    spdc::Scenario sc = spdc::load_scenario(path, presets);
    if (!sc.oned_compatible)
        throw spdc::ConfigError(0, "scenario is not flagged scenario.oned_compatible");
    if (!sc.scene.kernel.pump.is_cw())
        throw spdc::ConfigError(0, "one-dimensional comparison requires a cw pump");

    const spdc::QuadratureGrid grid = spdc::resolve_grid(sc);
    const spdc::InterferencePattern p = run_pattern(sc, grid, threads);

    double linf = 0.0, l2 = 0.0;
    for (std::size_t i = 0; i < p.taus.size(); ++i) {
        const double ref = spdc::one_dimensional_model_rate(
            p.taus[i], sc.scene.kernel.crystal, grid.omega_bar, sc.scene.analyzers);
        const double d = p.normalized[i] - ref;
        linf = std::max(linf, std::abs(d));
        l2 += d * d;
    }
    l2 = std::sqrt(l2 / p.taus.size());
    std::cout << sc.stem << ": L_inf " << spdc::format_number(linf, 6) << ", L2 "
              << spdc::format_number(l2, 6) << "\n";
    if (sc.oned_canonical && linf > 1e-3) {
        std::cerr << "canonical one-dimensional scene exceeds L_inf 1e-3\n";
        return exit_numeric;
    }
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Type-II down-conversion coincidence simulator"};
    app.set_version_flag("--version", std::string(spdc::tool_name) + " " + spdc::tool_version);

    std::string config, out_dir = ".", presets_flag;
    int threads = spdc::default_thread_count();
    bool no_check = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config, "scenario file or preset name")->required();
        cmd->add_option("--threads", threads, "worker threads");
        cmd->add_option("--presets", presets_flag, "preset directory (default: $SPDC_PRESET_DIR)");
    };

    CLI::App* sweep = app.add_subcommand("sweep", "run a delay sweep, write CSV + JSON");
    add_common(sweep);
    sweep->add_option("--out", out_dir, "output directory");
    sweep->add_flag("--no-check", no_check, "skip the frequency-grid refinement check");

    CLI::App* converge = app.add_subcommand("converge", "doubling check for every grid dimension");
    add_common(converge);

    CLI::App* oracle = app.add_subcommand("oracle", "compare against the one-dimensional model");
    add_common(oracle);

    app.require_subcommand(1);
    CLI11_PARSE(app, argc, argv);

    try {
        const std::string presets = preset_dir_from(presets_flag);
        if (sweep->parsed()) return cmd_sweep(config, out_dir, threads, presets, !no_check);
        if (converge->parsed()) return cmd_converge(config, threads, presets);
        if (oracle->parsed()) return cmd_oracle(config, threads, presets);
    } catch (const spdc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const spdc::NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return exit_numeric;
    } catch (const spdc::NoConvergence& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return exit_numeric;
    } catch (const spdc::DegeneratePattern& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return exit_numeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return exit_ok;
}
