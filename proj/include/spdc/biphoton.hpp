#pragma once

#include <cmath>
#include <complex>

#include "spdc/dispersion.hpp"
#include "spdc/pump.hpp"

namespace spdc {

// sin(x)/x with a series fallback near zero; even and continuous at 0.
inline double sinc(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

// The non-separable two-photon amplitude at the crystal output plane.
struct BiphotonKernel {
    CrystalSpec crystal;
    PumpSpectrum pump;

    // Longitudinal phase mismatch Delta = kappa_p - kappa_o - kappa_e with the
    // pump mode built as (q_o + q_e, omega_o + omega_e), extraordinary inside
    // the crystal.
    double phase_mismatch(Vec2 q_o, Vec2 q_e, double omega_o, double omega_e) const {
        const double kp = longitudinal_wavevector({q_o + q_e, omega_o + omega_e, Polarization::pump}, crystal);
        const double ko = longitudinal_wavevector({q_o, omega_o, Polarization::ordinary}, crystal);
        const double ke = longitudinal_wavevector({q_e, omega_e, Polarization::extraordinary}, crystal);
        return kp - ko - ke;
    }

    // Kernel amplitude  E_p(q_o+q_e; omega_o+omega_e) * L * sinc(L*Delta/2) * exp(-i*L*Delta/2),
    // referenced to the crystal output plane.
    std::complex<double> amplitude(Vec2 q_o, Vec2 q_e, double omega_o, double omega_e) const {
        const double ep = pump_amplitude(q_o + q_e, omega_o + omega_e, pump);
        if (ep == 0.0) return {0.0, 0.0};
        const double delta = phase_mismatch(q_o, q_e, omega_o, omega_e);
        const double half = 0.5 * crystal.length * delta;
        const double mag = ep * crystal.length * sinc(half);
        return {mag * std::cos(half), -mag * std::sin(half)};
    }
};

}  // namespace spdc
