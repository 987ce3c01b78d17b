#pragma once

#include <cmath>
#include <string>

#include "spdc/constants.hpp"
#include "spdc/errors.hpp"
#include "spdc/vec2.hpp"

namespace spdc {

// Dispersion formula for one principal index,
//   n^2(lambda) = a + b/(lambda^2 - c) + b2/(lambda^2 - c2) + d*lambda^2,
// with lambda in micrometers. The second pole is optional (b2 = 0).
struct SellmeierForm {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double b2 = 0.0;
    double c2 = 0.0;
    double d = 0.0;

    double n_squared(double lambda_um) const {
        const double l2 = lambda_um * lambda_um;
        double s = a + d * l2;
        if (b != 0.0) s += b / (l2 - c);
        if (b2 != 0.0) s += b2 / (l2 - c2);
        return s;
    }

    double index(double lambda_um) const {
        const double s = n_squared(lambda_um);
        if (!(s > 0.0)) throw OutOfBand("Sellmeier form non-positive at " + std::to_string(lambda_um) + " um");
        return std::sqrt(s);
    }

    // Constant-index form, handy for synthetic test materials.
    static SellmeierForm constant(double n) { return {n * n, 0.0, 0.0, 0.0, 0.0, 0.0}; }
};

// Uniaxial crystal description: principal indices, cut angle between the optic
// axis and the propagation axis z, and the length along z.
struct CrystalSpec {
    SellmeierForm sellmeier_o;
    SellmeierForm sellmeier_e;
    double cut_angle = 0.0;       // rad, in [0, pi/2]
    double length = 0.0;          // m, > 0
    PrincipalAxis principal_plane_axis = PrincipalAxis::x;
    double band_min_wavelength = 0.0;  // m; 0 disables the band check
    double band_max_wavelength = 0.0;  // m
    std::string name;

    void check_band(double omega) const {
        if (band_min_wavelength <= 0.0) return;
        const double lambda = wavelength_from_omega(omega);
        if (lambda < band_min_wavelength || lambda > band_max_wavelength)
            throw OutOfBand(name + ": wavelength " + std::to_string(lambda / nm) +
                            " nm outside validity band [" +
                            std::to_string(band_min_wavelength / nm) + ", " +
                            std::to_string(band_max_wavelength / nm) + "] nm");
    }

    // In-principal-plane component of a transverse vector.
    double parallel_component(double qx, double qy) const {
        return principal_plane_axis == PrincipalAxis::x ? qx : qy;
    }
};

// Principal ordinary index n_o(omega).
inline double ordinary_index(double omega, const CrystalSpec& crystal) {
    crystal.check_band(omega);
    return crystal.sellmeier_o.index(wavelength_from_omega(omega) / um);
}

// Principal extraordinary index (theta = pi/2 value).
inline double principal_extraordinary_index(double omega, const CrystalSpec& crystal) {
    crystal.check_band(omega);
    return crystal.sellmeier_e.index(wavelength_from_omega(omega) / um);
}

// Index-ellipsoid value for an extraordinary wave at angle theta to the optic
// axis: 1/n^2 = cos^2(theta)/n_o^2 + sin^2(theta)/n_e^2.
inline double extraordinary_index(double omega, double theta, const CrystalSpec& crystal) {
    crystal.check_band(omega);
    const double lambda_um = wavelength_from_omega(omega) / um;
    const double so = crystal.sellmeier_o.n_squared(lambda_um);
    const double se = crystal.sellmeier_e.n_squared(lambda_um);
    if (!(so > 0.0) || !(se > 0.0)) throw OutOfBand(crystal.name + ": index form non-positive");
    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    const double inv_n2 = ct * ct / so + st * st / se;
    return 1.0 / std::sqrt(inv_n2);
}

}  // namespace spdc
