#pragma once

#include <cmath>
#include <string>

#include "spdc/errors.hpp"
#include "spdc/sellmeier.hpp"
#include "spdc/vec2.hpp"

namespace spdc {

// Polarization tag of a monochromatic transverse-plane-wave mode. The pump is
// extraordinary-polarized inside the crystal (type-II e -> o + e convention)
// but keeps its own tag.
enum class Polarization { ordinary, extraordinary, pump };

struct Mode {
    Vec2 q;                // transverse wavevector, rad/m
    double omega = 0.0;    // angular frequency, rad/s
    Polarization polarization = Polarization::ordinary;
};

enum class AngleMethod { paraxial, exact };

inline bool is_extraordinary_like(Polarization p) {
    return p != Polarization::ordinary;
}

namespace detail {

// Reference index used for the first-order angle expansion.
inline double reference_index(const Mode& mode, const CrystalSpec& crystal) {
    return is_extraordinary_like(mode.polarization)
               ? extraordinary_index(mode.omega, crystal.cut_angle, crystal)
               : ordinary_index(mode.omega, crystal);
}

}  // namespace detail

// Angle between the mode's wavevector and the optic axis. The default is the
// first paraxial order theta = theta_c - q_par*c/(n*omega); the exact method
// solves cos(theta) = khat . chat self-consistently by fixed-point iteration.
inline double propagation_angle(const Mode& mode, const CrystalSpec& crystal,
                                AngleMethod method = AngleMethod::paraxial) {
    const double q_par = crystal.parallel_component(mode.q.x, mode.q.y);
    if (method == AngleMethod::paraxial) {
        const double n = detail::reference_index(mode, crystal);
        return crystal.cut_angle - q_par * speed_of_light / (n * mode.omega);
    }

    const double q_perp =
        crystal.principal_plane_axis == PrincipalAxis::x ? mode.q.y : mode.q.x;
    const double q2 = mode.q.norm2();
    const double sc = std::sin(crystal.cut_angle);
    const double cc = std::cos(crystal.cut_angle);
    double theta = crystal.cut_angle - q_par * speed_of_light /
                                           (detail::reference_index(mode, crystal) * mode.omega);
    constexpr int max_iterations = 50;
    constexpr double tolerance = 1e-12;
    for (int it = 0; it < max_iterations; ++it) {
        const double n = is_extraordinary_like(mode.polarization)
                             ? extraordinary_index(mode.omega, theta, crystal)
                             : ordinary_index(mode.omega, crystal);
        const double k = n * mode.omega / speed_of_light;
        const double kz2 = k * k - q2;
        if (kz2 < 0.0) throw Evanescent("exact angle solve: evanescent mode");
        const double kz = std::sqrt(kz2);
        // cos(angle to optic axis); the perpendicular q component only enters
        // through |k|.
        double ct = (q_par * sc + kz * cc) / k;
        if (ct > 1.0) ct = 1.0;
        if (ct < -1.0) ct = -1.0;
        const double next = std::acos(ct);
        (void)q_perp;
        if (std::abs(next - theta) <= tolerance * std::max(1.0, std::abs(next))) return next;
        theta = next;
    }
    throw NoConvergence("exact propagation angle did not converge in 50 iterations");
}

// Longitudinal wavevector kappa = sqrt((n*omega/c)^2 - |q|^2) with the index
// resolved per polarization (angle-dependent for extraordinary-like modes).
inline double longitudinal_wavevector(const Mode& mode, const CrystalSpec& crystal,
                                      AngleMethod method = AngleMethod::paraxial) {
    double n;
    if (is_extraordinary_like(mode.polarization)) {
        const double theta = propagation_angle(mode, crystal, method);
        n = extraordinary_index(mode.omega, theta, crystal);
    } else {
        n = ordinary_index(mode.omega, crystal);
    }
    const double k = n * mode.omega / speed_of_light;
    const double kz2 = k * k - mode.q.norm2();
    if (kz2 < 0.0)
        throw Evanescent("mode |q| exceeds n*omega/c (|q| = " + std::to_string(mode.q.norm()) + ")");
    return std::sqrt(kz2);
}

// Group-delay mismatch D = d(kappa_o - kappa_e)/domega at q = 0, theta equal
// to the cut angle, evaluated by central finite difference. D*L is the full
// temporal width of the one-dimensional dip.
inline double group_delay_mismatch(const CrystalSpec& crystal, double omega_degenerate,
                                   double relative_step = 1e-6) {
    crystal.check_band(omega_degenerate);
    const double h = relative_step * omega_degenerate;
    auto difference = [&](double w) {
        const double ko = ordinary_index(w, crystal) * w / speed_of_light;
        const double ke = extraordinary_index(w, crystal.cut_angle, crystal) * w / speed_of_light;
        return ko - ke;
    };
    return (difference(omega_degenerate + h) - difference(omega_degenerate - h)) / (2.0 * h);
}

// Cut angle that phase-matches collinear degenerate type-II down-conversion,
//   kappa_p(omega_p) = kappa_o(omega_p/2) + kappa_e(omega_p/2)  at q = 0,
// solved by bisection. Used offline to generate presets and by tests that
// certify shipped preset values.
inline double collinear_degenerate_cut_angle(const CrystalSpec& crystal, double omega_pump) {
    const double half = 0.5 * omega_pump;
    auto mismatch0 = [&](double theta) {
        const double np = extraordinary_index(omega_pump, theta, crystal);
        const double no = ordinary_index(half, crystal);
        const double ne = extraordinary_index(half, theta, crystal);
        return (np * omega_pump - no * half - ne * half) / speed_of_light;
    };
    double lo = 1e-9, hi = pi / 2.0 - 1e-9;
    double flo = mismatch0(lo), fhi = mismatch0(hi);
    if (flo * fhi > 0.0)
        throw NoConvergence(crystal.name + ": no collinear degenerate phase-matching angle");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = mismatch0(mid);
        if (fm == 0.0) return mid;
        if (flo * fm < 0.0) {
            hi = mid;
            fhi = fm;
        } else {
            lo = mid;
            flo = fm;
        }
        if (hi - lo < 1e-15) break;
    }
    return 0.5 * (lo + hi);
}

// Numeric probes of the kappa surface at the degenerate point; the quadrature
// builder uses these to size integration supports.

// |d kappa_e / d q_par| at q = 0 (transverse walk-off slope, dimensionless).
inline double walkoff_slope(const CrystalSpec& crystal, double omega) {
    const double h = 1e-6 * omega / speed_of_light;
    auto ke = [&](double qp) {
        Mode m{crystal.principal_plane_axis == PrincipalAxis::x ? Vec2{qp, 0.0} : Vec2{0.0, qp},
               omega, Polarization::extraordinary};
        return longitudinal_wavevector(m, crystal);
    };
    return std::abs(ke(h) - ke(-h)) / (2.0 * h);
}

// |d^2 kappa / d q^2| / 2 along the out-of-plane axis, summed over o and e;
// scales the quadratic q-dependence of the phase mismatch (units: m).
inline double transverse_curvature(const CrystalSpec& crystal, double omega) {
    const double h = 1e-4 * omega / speed_of_light;
    auto k_sum = [&](double qy) {
        Vec2 q = crystal.principal_plane_axis == PrincipalAxis::x ? Vec2{0.0, qy} : Vec2{qy, 0.0};
        const double ko = longitudinal_wavevector({q, omega, Polarization::ordinary}, crystal);
        const double ke = longitudinal_wavevector({q, omega, Polarization::extraordinary}, crystal);
        return ko + ke;
    };
    const double second = (k_sum(h) - 2.0 * k_sum(0.0) + k_sum(-h)) / (h * h);
    return 0.5 * std::abs(second);
}

}  // namespace spdc
