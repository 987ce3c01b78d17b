#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "spdc/biphoton.hpp"
#include "spdc/dispersion.hpp"
#include "spdc/errors.hpp"
#include "spdc/optics.hpp"
#include "spdc/pump.hpp"

namespace spdc {

struct Quadrature1D {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Legendre rule on [-1, 1]; nodes come in exact +/- pairs.
inline Quadrature1D gauss_legendre(int n) {
    Quadrature1D q;
    q.nodes.assign(n, 0.0);
    q.weights.assign(n, 0.0);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        q.nodes[i] = -std::abs(x);
        q.nodes[n - 1 - i] = std::abs(x);
        q.weights[i] = w;
        q.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) q.nodes[n / 2] = 0.0;
    return q;
}

inline Quadrature1D gauss_legendre_on(int n, double a, double b) {
    Quadrature1D base = gauss_legendre(n);
    const double mid = 0.5 * (a + b), halfw = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        base.nodes[i] = mid + halfw * base.nodes[i];
        base.weights[i] *= halfw;
    }
    return base;
}

struct FreqPair {
    double omega_a = 0.0;
    double omega_b = 0.0;
    double weight = 0.0;
};

struct TransverseNode {
    Vec2 k;
    double weight = 0.0;
};

// Polar product rule: Gauss-Legendre radially on [0, span], uniform in angle.
// The angular count must be even so every node has its exact negation in the
// grid (the second half is built by negating the first).
inline std::vector<TransverseNode> polar_nodes(double span, int n_radial, int n_angular) {
    if (n_angular % 2 != 0) throw std::invalid_argument("angular node count must be even");
    const Quadrature1D radial = gauss_legendre_on(n_radial, 0.0, span);
    std::vector<TransverseNode> nodes;
    nodes.reserve(static_cast<std::size_t>(n_radial) * n_angular);
    const double wphi = two_pi / n_angular;
    std::vector<Vec2> dirs(n_angular);
    for (int k = 0; k < n_angular / 2; ++k) {
        const double phi = two_pi * k / n_angular;
        dirs[k] = {std::cos(phi), std::sin(phi)};
        dirs[k + n_angular / 2] = -dirs[k];
    }
    for (int i = 0; i < n_radial; ++i) {
        const double rho = radial.nodes[i];
        const double wr = radial.weights[i] * rho * wphi;
        for (int k = 0; k < n_angular; ++k)
            nodes.push_back({rho * dirs[k], wr});
    }
    return nodes;
}

enum class DetectorMode { bucket, finite_area };

struct GridParams {
    int n_freq_sum = 0;      // 0 = auto; forced to 1 for cw
    int n_freq_diff = 0;
    int n_q_radial = 0;
    int n_q_angular = 0;
    int n_det_radial = 0;
    int n_det_angular = 0;
    double sinc_lobes = 4.0;         // phase-matching lobes kept in the diff direction
    double pump_support_epsilon = 1e-4;
    double pupil_lobes = 2.0;        // pupil-transform lobes kept in q support
    // explicit span overrides (0 = auto)
    double sum_half_override = 0.0;
    double diff_half_override = 0.0;
    double q_span_override = 0.0;
    double det_span_override = 0.0;
};

// Discretization of the coincidence integrals. Frequency pairs are built on
// rotated sum/difference axes (the pump constrains the sum; a cw pump pins it
// to a single node). Bucket-detector nodes live in pupil-plane wavevector
// units u = (omega/cf) x and are mapped to detector positions per frequency;
// finite-area detector nodes are positions in meters.
struct QuadratureGrid {
    std::vector<FreqPair> pairs;
    std::vector<TransverseNode> q_nodes;
    std::vector<TransverseNode> det_nodes;  // shared by both arms
    DetectorMode detector_mode = DetectorMode::bucket;
    double detector_radius = 0.0;  // m, finite-area only
    bool cw = true;
    double omega_pump = 0.0;
    double omega_bar = 0.0;

    // resolved sizes and spans, for reporting and reproducibility
    int n_freq_sum = 1, n_freq_diff = 0, n_q_radial = 0, n_q_angular = 0;
    int n_det_radial = 0, n_det_angular = 0;
    double sum_half = 0.0, diff_half = 0.0, q_span = 0.0, det_span = 0.0;
    bool clamped_by_validity = false;
};

namespace detail {

inline double pupil_support_wavevector(const Aperture& ap, double lobes) {
    switch (ap.kind) {
        case ApertureKind::circular: {
            static const double j1_zeros[] = {3.8317059702075125, 7.0155866698156188,
                                              10.1734681350627220, 13.3236919363142230,
                                              16.4706300508776327};
            const double radius = 0.5 * ap.size;
            if (radius <= 0.0) return 0.0;
            double z;
            if (lobes <= 1.0) {
                z = j1_zeros[0] * lobes;
            } else if (lobes <= 5.0) {
                const int i = static_cast<int>(lobes);
                const double frac = lobes - i;
                z = (i >= 5) ? j1_zeros[4] : j1_zeros[i - 1] + frac * (j1_zeros[i] - j1_zeros[i - 1]);
            } else {
                z = (lobes + 0.25) * pi;
            }
            return z / radius;
        }
        case ApertureKind::gaussian:
            return 2.0 * std::sqrt(std::log(1e3)) / ap.size;
        case ApertureKind::slit: {
            const double across = two_pi * std::max(1.0, lobes / 2.0) / ap.size;
            const double along = 2.0 * std::sqrt(std::log(1e3)) / ap.open_waist;
            return std::max(across, along);
        }
        case ApertureKind::open:
            return 2.0 * std::sqrt(std::log(1e3)) / ap.open_waist;
    }
    return 0.0;
}

// Real-space scale of the pupil; sets the feature length pi/scale of its
// transform.
inline double pupil_scale(const Aperture& ap) {
    switch (ap.kind) {
        case ApertureKind::circular: return 0.5 * ap.size;
        case ApertureKind::gaussian: return 0.5 * ap.size;
        case ApertureKind::slit: return 0.5 * ap.size;
        case ApertureKind::open: return 0.5 * ap.open_waist;
    }
    return 0.0;
}

inline double geometric_radius(const Aperture& ap) {
    switch (ap.kind) {
        case ApertureKind::circular: return 0.5 * ap.size;
        case ApertureKind::gaussian: return ap.size;
        case ApertureKind::slit: return 0.5 * ap.size;
        case ApertureKind::open: return 0.0;  // no physical edge
    }
    return 0.0;
}

inline int even_at_least(double v, int floor_value) {
    int n = std::max(floor_value, static_cast<int>(std::ceil(v)));
    if (n % 2 != 0) ++n;
    return n;
}

}  // namespace detail

// Builds the quadrature for a scene. tau_absmax (largest |tau| the sweep will
// request) sizes the frequency grid so the delay phase stays resolved.
inline QuadratureGrid build_quadrature(const CrystalSpec& crystal, const PumpSpectrum& pump,
                                       const OpticalPath& path, const GridParams& params,
                                       double tau_absmax,
                                       DetectorMode detector = DetectorMode::bucket,
                                       double detector_radius = 0.0) {
    QuadratureGrid grid;
    grid.detector_mode = detector;
    grid.detector_radius = detector_radius;
    grid.cw = pump.is_cw();
    grid.omega_pump = pump.omega_center;
    grid.omega_bar = 0.5 * pump.omega_center;

    const double omega_bar = grid.omega_bar;
    const double L = crystal.length;
    const double D = std::abs(group_delay_mismatch(crystal, omega_bar));
    const double M = walkoff_slope(crystal, omega_bar);
    const double gamma = transverse_curvature(crystal, omega_bar);

    // --- transverse span: geometric acceptance of the pupil plus the support
    // of its transform (diffraction) ---
    const double k_sup = detail::pupil_support_wavevector(path.aperture, params.pupil_lobes);
    const double geo = (omega_bar / speed_of_light) * detail::geometric_radius(path.aperture) / path.d1;
    double q_span = params.q_span_override > 0.0 ? params.q_span_override : geo + k_sup;
    const double paraxial_cap = 0.08 * omega_bar / speed_of_light;
    if (q_span > paraxial_cap) q_span = paraxial_cap;
    grid.q_span = q_span;

    double det_span;
    if (detector == DetectorMode::bucket) {
        det_span = params.det_span_override > 0.0 ? params.det_span_override : q_span + k_sup;
    } else {
        det_span = params.det_span_override > 0.0 ? params.det_span_override : detector_radius;
    }
    grid.det_span = det_span;

    // --- frequency spans ---
    // per-photon support of the spectral filter (amplitude^2 above 1e-4)
    double w_filter = 0.0;
    if (path.filter.kind != FilterKind::open) {
        const double lc = path.filter.center_wavelength;
        const double dl = path.filter.kind == FilterKind::tophat
                              ? 0.5 * path.filter.fwhm
                              : path.filter.fwhm * std::sqrt(std::log(1e4) / (4.0 * std::log(2.0)));
        w_filter = two_pi * speed_of_light * dl / (lc * lc);
    }

    double sum_half = 0.0;
    if (!pump.is_cw()) {
        if (params.sum_half_override > 0.0) {
            sum_half = params.sum_half_override;
        } else {
            sum_half = spectral_support(pump, params.pump_support_epsilon).half_width();
            if (w_filter > 0.0) sum_half = std::min(sum_half, 2.0 * w_filter);
        }
    }

    double diff_half;
    if (params.diff_half_override > 0.0) {
        diff_half = params.diff_half_override;
    } else {
        // per-photon detuning nu = d/2, so the d-extent is twice the nu-extent
        const double sinc_width = (D > 0.0) ? two_pi * params.sinc_lobes / (L * D) : 0.0;
        const double shift = (D > 0.0) ? (M * q_span + gamma * q_span * q_span) / D : 0.0;
        diff_half = 2.0 * (sinc_width + shift);
        if (w_filter > 0.0) diff_half = std::min(diff_half, 2.0 * w_filter);
        // keep every photon frequency inside the Sellmeier validity band
        if (crystal.band_min_wavelength > 0.0) {
            const double w_lo = omega_from_wavelength(crystal.band_max_wavelength);
            const double w_hi = omega_from_wavelength(crystal.band_min_wavelength);
            const double margin = 0.995 * 2.0 * std::min(omega_bar - w_lo, w_hi - omega_bar) - sum_half;
            if (diff_half > margin) {
                diff_half = margin;
                grid.clamped_by_validity = true;
            }
        }
        if (diff_half <= 0.0) throw NumericalFailure("frequency grid has empty support");
    }
    grid.sum_half = sum_half;
    grid.diff_half = diff_half;

    // --- node counts ---
    const double scale = detail::pupil_scale(path.aperture);
    const double beta_bar = path.d1 * speed_of_light / omega_bar;
    const double fresnel_cycles = beta_bar * q_span * q_span / two_pi;
    const double sinc_radial = L * (M * q_span + gamma * q_span * q_span) / two_pi;

    int n_diff = params.n_freq_diff;
    if (n_diff == 0) {
        const double tau_cycles = diff_half * tau_absmax / pi;
        const double lobe_features = L * D * diff_half / two_pi;
        n_diff = detail::even_at_least(3.0 * std::max(tau_cycles, lobe_features) + 24.0, 16);
    }
    int n_sum = 1;
    if (!pump.is_cw()) {
        n_sum = params.n_freq_sum;
        if (n_sum == 0) {
            const double h = 1e-7 * grid.omega_pump;
            BiphotonKernel probe{crystal, PumpSpectrum{}};
            probe.pump.omega_center = pump.omega_center;  // cw-like for Delta probe
            auto delta_s = [&](double s) {
                return probe.phase_mismatch({0, 0}, {0, 0}, omega_bar + 0.5 * s, omega_bar + 0.5 * s);
            };
            const double slope = std::abs(delta_s(h) - delta_s(-h)) / (2.0 * h);
            const double cycles = L * slope * sum_half / two_pi;
            n_sum = detail::even_at_least(12.0 + 6.0 * cycles, 8);
        }
    }
    if (n_diff < 2) throw std::invalid_argument("frequency grid needs at least 2 nodes");
    if (!pump.is_cw() && n_sum < 2)
        throw std::invalid_argument("pulsed scenes need at least 2 sum-frequency nodes");
    grid.n_freq_sum = n_sum;
    grid.n_freq_diff = n_diff;

    int n_q_r = params.n_q_radial;
    if (n_q_r == 0) {
        const double radial_features = q_span * scale / pi + fresnel_cycles + sinc_radial;
        n_q_r = std::max(8, static_cast<int>(std::ceil(8 + 2.8 * radial_features)));
    }
    int n_q_a = params.n_q_angular;
    if (n_q_a == 0) {
        const double ring_features = 4.0 * q_span * scale / pi + L * M * q_span / pi;
        n_q_a = detail::even_at_least(8 + 2.6 * ring_features, 8);
    }
    grid.n_q_radial = n_q_r;
    grid.n_q_angular = n_q_a;

    int n_d_r = params.n_det_radial;
    int n_d_a = params.n_det_angular;
    if (detector == DetectorMode::bucket) {
        if (n_d_r == 0) n_d_r = std::max(8, static_cast<int>(std::ceil(8 + 2.8 * det_span * scale / pi)));
        if (n_d_a == 0) n_d_a = detail::even_at_least(8 + 2.6 * (4.0 * q_span * scale / pi), 8);
    } else {
        if (n_d_r == 0) n_d_r = 16;
        if (n_d_a == 0) n_d_a = 16;
    }
    grid.n_det_radial = n_d_r;
    grid.n_det_angular = n_d_a;

    // --- build nodes ---
    Quadrature1D d_rule = gauss_legendre_on(n_diff, -diff_half, diff_half);
    if (pump.is_cw()) {
        grid.pairs.reserve(n_diff);
        for (int j = 0; j < n_diff; ++j) {
            const double d = d_rule.nodes[j];
            grid.pairs.push_back({omega_bar + 0.5 * d, omega_bar - 0.5 * d, d_rule.weights[j]});
        }
    } else {
        Quadrature1D s_rule = gauss_legendre_on(n_sum, -sum_half, sum_half);
        grid.pairs.reserve(static_cast<std::size_t>(n_sum) * n_diff);
        for (int i = 0; i < n_sum; ++i) {
            for (int j = 0; j < n_diff; ++j) {
                const double s = s_rule.nodes[i];
                const double d = d_rule.nodes[j];
                grid.pairs.push_back({omega_bar + 0.5 * (s + d), omega_bar + 0.5 * (s - d),
                                      0.5 * s_rule.weights[i] * d_rule.weights[j]});
            }
        }
    }
    grid.q_nodes = polar_nodes(q_span, n_q_r, n_q_a);
    grid.det_nodes = polar_nodes(det_span, n_d_r, n_d_a);
    return grid;
}

// Copy of `params` with one named dimension doubled; doubling any node count
// is always legal (convergence control relies on it).
inline GridParams doubled_dimension(const GridParams& params, const QuadratureGrid& resolved,
                                    const std::string& dimension) {
    GridParams p = params;
    // pin everything to the resolved grid so only the chosen dimension moves
    p.n_freq_sum = resolved.n_freq_sum;
    p.n_freq_diff = resolved.n_freq_diff;
    p.n_q_radial = resolved.n_q_radial;
    p.n_q_angular = resolved.n_q_angular;
    p.n_det_radial = resolved.n_det_radial;
    p.n_det_angular = resolved.n_det_angular;
    p.sum_half_override = resolved.sum_half > 0.0 ? resolved.sum_half : p.sum_half_override;
    p.diff_half_override = resolved.diff_half;
    p.q_span_override = resolved.q_span;
    p.det_span_override = resolved.det_span;
    if (dimension == "freq_sum") p.n_freq_sum *= 2;
    else if (dimension == "freq_diff") p.n_freq_diff *= 2;
    else if (dimension == "q_radial") p.n_q_radial *= 2;
    else if (dimension == "q_angular") p.n_q_angular *= 2;
    else if (dimension == "det_radial") p.n_det_radial *= 2;
    else if (dimension == "det_angular") p.n_det_angular *= 2;
    else throw std::invalid_argument("unknown grid dimension: " + dimension);
    return p;
}

inline const std::vector<std::string>& grid_dimensions() {
    static const std::vector<std::string> dims = {"freq_sum",  "freq_diff",  "q_radial",
                                                  "q_angular", "det_radial", "det_angular"};
    return dims;
}

}  // namespace spdc
