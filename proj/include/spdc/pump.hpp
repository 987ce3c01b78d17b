#pragma once

#include <cmath>

#include "spdc/constants.hpp"
#include "spdc/vec2.hpp"

namespace spdc {

enum class SpectralProfile { cw, gaussian };
enum class TransverseProfile { planewave, gaussian };

// Classical pump field amplitude, separable into a spectral and a transverse
// factor, normalized to unit peak (all global constants are dropped).
struct PumpSpectrum {
    double omega_center = 0.0;  // rad/s
    SpectralProfile spectral_profile = SpectralProfile::cw;
    double sigma_omega = 0.0;   // rad/s; derived from the intensity FWHM
    TransverseProfile transverse_profile = TransverseProfile::planewave;
    double waist = 0.0;         // m, 1/e^2 intensity radius (gaussian only)

    // Pulsed pump from the intensity-FWHM bandwidth in wavelength units.
    // bandwidth 0 means cw.
    static PumpSpectrum pulsed_plane_wave(double center_wavelength_m, double bandwidth_fwhm_m) {
        PumpSpectrum p;
        p.omega_center = omega_from_wavelength(center_wavelength_m);
        if (bandwidth_fwhm_m > 0.0) {
            const double fwhm_omega =
                two_pi * speed_of_light * bandwidth_fwhm_m / (center_wavelength_m * center_wavelength_m);
            p.spectral_profile = SpectralProfile::gaussian;
            p.sigma_omega = fwhm_omega / (2.0 * std::sqrt(std::log(2.0)));
        }
        return p;
    }

    bool is_cw() const { return spectral_profile == SpectralProfile::cw; }
    bool is_plane_wave() const { return transverse_profile == TransverseProfile::planewave; }

    double fwhm_omega() const { return 2.0 * std::sqrt(std::log(2.0)) * sigma_omega; }

    double spectral_amplitude(double omega) const {
        if (is_cw()) return omega == omega_center ? 1.0 : 0.0;
        const double d = omega - omega_center;
        return std::exp(-d * d / (2.0 * sigma_omega * sigma_omega));
    }

    // Transverse factor in q-space. For the plane-wave profile the formal
    // delta is consumed downstream by enforcing q_e = -q_o, so the factor
    // here is identically 1.
    double transverse_amplitude(Vec2 q) const {
        if (is_plane_wave()) return 1.0;
        return std::exp(-q.norm2() * waist * waist / 4.0);
    }
};

inline double pump_amplitude(Vec2 q, double omega, const PumpSpectrum& pump) {
    return pump.spectral_amplitude(omega) * pump.transverse_amplitude(q);
}

// Frequency interval where |spectral factor|^2 >= epsilon; bounds quadrature
// grids. A cw pump returns the zero-width interval at its center.
struct FrequencyInterval {
    double lo = 0.0;
    double hi = 0.0;
    double half_width() const { return 0.5 * (hi - lo); }
};

inline FrequencyInterval spectral_support(const PumpSpectrum& pump, double epsilon) {
    if (pump.is_cw()) return {pump.omega_center, pump.omega_center};
    const double half = pump.sigma_omega * std::sqrt(std::log(1.0 / epsilon));
    return {pump.omega_center - half, pump.omega_center + half};
}

}  // namespace spdc
