#pragma once

#include <set>
#include <string>

#include "spdc/config.hpp"
#include "spdc/constants.hpp"
#include "spdc/sellmeier.hpp"

namespace spdc {

// Material preset file: flat key-value text with the Sellmeier coefficients
// of both principal indices and the validity band. See docs/materials.md.
inline CrystalSpec load_material_file(const std::string& path, const std::string& name) {
    Config cfg = Config::parse_file(path);
    static const std::set<std::string> allowed = {
        "sellmeier_o.a", "sellmeier_o.b", "sellmeier_o.c", "sellmeier_o.b2", "sellmeier_o.c2",
        "sellmeier_o.d", "sellmeier_e.a", "sellmeier_e.b", "sellmeier_e.c", "sellmeier_e.b2",
        "sellmeier_e.c2", "sellmeier_e.d", "validity_band_nm"};
    cfg.validate_keys(allowed);

    auto read_form = [&](const std::string& prefix) {
        SellmeierForm f;
        f.a = cfg.get_double(prefix + ".a");
        f.b = cfg.get_double(prefix + ".b", 0.0);
        f.c = cfg.get_double(prefix + ".c", 0.0);
        f.b2 = cfg.get_double(prefix + ".b2", 0.0);
        f.c2 = cfg.get_double(prefix + ".c2", 0.0);
        f.d = cfg.get_double(prefix + ".d", 0.0);
        return f;
    };

    CrystalSpec crystal;
    crystal.name = name;
    crystal.sellmeier_o = read_form("sellmeier_o");
    crystal.sellmeier_e = read_form("sellmeier_e");
    const auto band = cfg.get_double_pair("validity_band_nm");
    if (!(band.first > 0.0) || !(band.second > band.first))
        throw ConfigError(cfg.line_of("validity_band_nm"), "validity_band_nm must be '<lo> <hi>' with 0 < lo < hi");
    crystal.band_min_wavelength = band.first * nm;
    crystal.band_max_wavelength = band.second * nm;

    // Both indices must stay above 1 across the declared band.
    constexpr int samples = 64;
    for (int i = 0; i <= samples; ++i) {
        const double lambda_um =
            (band.first + (band.second - band.first) * i / samples) * nm / um;
        for (const SellmeierForm* f : {&crystal.sellmeier_o, &crystal.sellmeier_e}) {
            const double n2 = f->n_squared(lambda_um);
            if (!(n2 > 1.0))
                throw ConfigError(0, "material '" + name + "': index <= 1 at " +
                                         std::to_string(lambda_um) + " um");
        }
    }
    return crystal;
}

// Resolves a material reference: a path (contains '/' or ends in .dat) is
// used as-is, otherwise `<preset_dir>/materials/<name>.dat`.
inline CrystalSpec load_material(const std::string& ref, const std::string& preset_dir) {
    const bool is_path = ref.find('/') != std::string::npos ||
                         (ref.size() > 4 && ref.substr(ref.size() - 4) == ".dat");
    if (is_path) {
        std::string name = ref;
        const auto slash = name.find_last_of('/');
        if (slash != std::string::npos) name = name.substr(slash + 1);
        const auto dot = name.find_last_of('.');
        if (dot != std::string::npos) name = name.substr(0, dot);
        return load_material_file(ref, name);
    }
    return load_material_file(preset_dir + "/materials/" + ref + ".dat", ref);
}

}  // namespace spdc
