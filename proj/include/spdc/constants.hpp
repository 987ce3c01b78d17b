#pragma once

namespace spdc {

inline constexpr double speed_of_light = 299792458.0;  // m/s
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

// Angular frequency (rad/s) of a vacuum wavelength given in meters.
inline constexpr double omega_from_wavelength(double lambda_m) {
    return two_pi * speed_of_light / lambda_m;
}

inline constexpr double wavelength_from_omega(double omega) {
    return two_pi * speed_of_light / omega;
}

// Unit helpers for the I/O layers; everything internal is SI.
inline constexpr double nm = 1e-9;
inline constexpr double um = 1e-6;
inline constexpr double mm = 1e-3;
inline constexpr double fs = 1e-15;

inline constexpr double deg_to_rad(double deg) { return deg * pi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / pi; }

}  // namespace spdc
