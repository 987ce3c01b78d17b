#pragma once

#include <cmath>
#include <complex>

#include "spdc/constants.hpp"
#include "spdc/vec2.hpp"

namespace spdc {

enum class ApertureKind { circular, slit, gaussian, open };

// Pupil descriptor. "size" is the diameter for circular, the width for slit,
// and the 1/e amplitude radius for gaussian. The open pupil is a finite-grid
// surrogate for no aperture: a gaussian whose waist is far larger than any
// physical aperture in the scene.
struct Aperture {
    ApertureKind kind = ApertureKind::open;
    double size = 0.0;             // m
    PrincipalAxis slit_axis = PrincipalAxis::x;  // constrained direction
    double open_waist = 0.05;      // m, surrogate waist for kind == open

    static Aperture circular(double diameter) { return {ApertureKind::circular, diameter, PrincipalAxis::x, 0.05}; }
    static Aperture gaussian(double waist) { return {ApertureKind::gaussian, waist, PrincipalAxis::x, 0.05}; }
    static Aperture slit(double width, PrincipalAxis axis) { return {ApertureKind::slit, width, axis, 0.05}; }
    static Aperture open(double waist = 0.05) { return {ApertureKind::open, 0.0, PrincipalAxis::x, waist}; }
};

// Closed-form Fourier transform of the pupil function p(x); real for the
// symmetric pupils used here.
inline double pupil_transform(Vec2 k, const Aperture& ap) {
    switch (ap.kind) {
        case ApertureKind::circular: {
            const double radius = 0.5 * ap.size;
            const double rho = k.norm() * radius;
            const double area = pi * radius * radius;
            if (rho < 1e-9) return area;
            return area * 2.0 * std::cyl_bessel_j(1, rho) / rho;
        }
        case ApertureKind::gaussian: {
            const double w = ap.size;
            return pi * w * w * std::exp(-k.norm2() * w * w / 4.0);
        }
        case ApertureKind::slit: {
            const double w = ap.size;
            const double W = ap.open_waist;
            const double k_across = ap.slit_axis == PrincipalAxis::x ? k.x : k.y;
            const double k_along = ap.slit_axis == PrincipalAxis::x ? k.y : k.x;
            const double across = (k_across == 0.0) ? w : 2.0 * std::sin(0.5 * k_across * w) / k_across;
            const double along = W * std::sqrt(pi) * std::exp(-k_along * k_along * W * W / 4.0);
            return across * along;
        }
        case ApertureKind::open: {
            const double w = ap.open_waist;
            return pi * w * w * std::exp(-k.norm2() * w * w / 4.0);
        }
    }
    return 0.0;
}

enum class FilterKind { open, tophat, gaussian };

// Spectral filter; returns the amplitude transmission in [0, 1]. Widths are
// intensity FWHM in wavelength units.
struct SpectralFilter {
    FilterKind kind = FilterKind::open;
    double center_wavelength = 0.0;  // m
    double fwhm = 0.0;               // m

    static SpectralFilter open() { return {}; }
    static SpectralFilter tophat(double center, double fwhm) { return {FilterKind::tophat, center, fwhm}; }
    static SpectralFilter gaussian(double center, double fwhm) { return {FilterKind::gaussian, center, fwhm}; }
};

inline double filter_amplitude(double omega, const SpectralFilter& f) {
    if (f.kind == FilterKind::open) return 1.0;
    const double lambda = wavelength_from_omega(omega);
    const double d = lambda - f.center_wavelength;
    if (f.kind == FilterKind::tophat) return std::abs(d) <= 0.5 * f.fwhm ? 1.0 : 0.0;
    // unit-peak gaussian intensity with the given FWHM; amplitude is its root
    return std::exp(-2.0 * std::log(2.0) * d * d / (f.fwhm * f.fwhm));
}

// Propagation geometry of one detection arm: free space d1, aperture + lens
// (focal length f) in one plane, free space d2, spectral filter.
struct OpticalPath {
    double d1 = 0.0;  // m, crystal output plane to aperture/lens
    double d2 = 0.0;  // m, lens to detector plane
    double f = 0.0;   // m, focal length
    Aperture aperture;
    SpectralFilter filter;
};

// Paraxial system transfer function mapping a (q, omega) mode at the crystal
// output to the field at detector point x:
//   H = e^{i(w/c)(d1+d2+f)} e^{-i(w|x|^2/2cf)(d2/f-1)} e^{-i(d1 c/2w)|q|^2}
//       * P((w/cf)x - q) * F(w).
inline std::complex<double> transfer_function(Vec2 x, Vec2 q, double omega, const OpticalPath& path) {
    const double F = filter_amplitude(omega, path.filter);
    if (F == 0.0) return {0.0, 0.0};
    const double c = speed_of_light;
    const double global = omega / c * (path.d1 + path.d2 + path.f);
    const double xq = -(omega * x.norm2() / (2.0 * c * path.f)) * (path.d2 / path.f - 1.0);
    const double qq = -(path.d1 * c / (2.0 * omega)) * q.norm2();
    const Vec2 pupil_arg = (omega / (c * path.f)) * x - q;
    const double P = pupil_transform(pupil_arg, path.aperture);
    const double phase = global + xq + qq;
    return std::polar(P * F, phase);
}

// Polarization analyzers and the relative delay applied to the extraordinary
// photons. Angles are measured from the extraordinary axis, modulo pi.
struct AnalyzerConfig {
    double alpha_a = 0.0;  // rad
    double alpha_b = 0.0;  // rad
    double tau = 0.0;      // s (sweeps pass tau explicitly; this is a default)
};

struct ProjectionCoefficients {
    double c1 = 0.0;  // (e_A . e_e)(e_B . e_o)
    double c2 = 0.0;  // (e_A . e_o)(e_B . e_e)
};

inline ProjectionCoefficients analyzer_projections(const AnalyzerConfig& an) {
    return {std::cos(an.alpha_a) * std::sin(an.alpha_b),
            std::sin(an.alpha_a) * std::cos(an.alpha_b)};
}

}  // namespace spdc
