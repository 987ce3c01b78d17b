#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "spdc/biphoton.hpp"
#include "spdc/errors.hpp"
#include "spdc/optics.hpp"
#include "spdc/parallel.hpp"
#include "spdc/quadrature.hpp"

namespace spdc {

// A fully specified measurement: crystal + pump (the kernel), one optical
// path per detection arm, and the analyzer settings.
struct Scene {
    BiphotonKernel kernel;
    OpticalPath path_a;
    OpticalPath path_b;
    AnalyzerConfig analyzers;
};

using Complex = std::complex<double>;

namespace detail {

// Detector-plane sample positions for one arm at one frequency. Bucket grids
// are stored in pupil wavevector units u = (omega/cf) x; the weight picks up
// the (cf/omega)^2 area jacobian through `scale`.
struct ArmGeometry {
    double jacobian_scale;  // multiplies the x-integral
    // maps a stored node to the pupil argument offset (omega/cf)*x
    // bucket: identity; finite-area: (omega/cf) * x
    double node_to_pupil;
};

inline ArmGeometry arm_geometry(const OpticalPath& path, double omega, const QuadratureGrid& grid) {
    if (grid.detector_mode == DetectorMode::bucket) {
        const double cf_over_w = speed_of_light * path.f / omega;
        return {cf_over_w * cf_over_w, 1.0};
    }
    return {1.0, omega / (speed_of_light * path.f)};
}

// Pupil Gram matrix over the q grid:
//   C(q, q') = sum_u w_u P(u - s*q) P(u - s*q')   with s = +1 or -1.
// Real because the pupil transforms here are real. Symmetric.
inline std::vector<double> pupil_gram(const std::vector<TransverseNode>& det_nodes,
                                      const std::vector<TransverseNode>& q_nodes,
                                      const Aperture& aperture, double sign, double node_to_pupil,
                                      int threads) {
    const std::size_t nq = q_nodes.size();
    const std::size_t nu = det_nodes.size();
    // P[u][q] = P(u - sign*q), weighted by sqrt of det weight for the GEMM
    std::vector<double> P(nu * nq);
    parallel_for(nu, threads, [&](std::size_t iu) {
        const Vec2 u = node_to_pupil * det_nodes[iu].k;
        const double sw = std::sqrt(det_nodes[iu].weight);
        for (std::size_t iq = 0; iq < nq; ++iq) {
            const Vec2 arg = u - sign * q_nodes[iq].k;
            P[iu * nq + iq] = sw * pupil_transform(arg, aperture);
        }
    });
    std::vector<double> C(nq * nq);
    parallel_for(nq, threads, [&](std::size_t i) {
        for (std::size_t j = i; j < nq; ++j) {
            double acc = 0.0;
            for (std::size_t iu = 0; iu < nu; ++iu) acc += P[iu * nq + i] * P[iu * nq + j];
            C[i * nq + j] = acc;
        }
    });
    for (std::size_t i = 0; i < nq; ++i)
        for (std::size_t j = 0; j < i; ++j) C[i * nq + j] = C[j * nq + i];
    return C;
}

}  // namespace detail

// Per-frequency-pair reduced terms. The coincidence rate at any delay is
//   R(tau) = sum_pairs [ c1^2 m_uu + c2^2 m_vv + 2 Re( c1 c2 e^{i d_omega tau} m_uv ) ].
struct PairTerms {
    double m_uu = 0.0;
    double m_vv = 0.0;
    Complex m_uv{0.0, 0.0};
    double d_omega = 0.0;
};

// Evaluates the coincidence integrals on a fixed grid. Precomputes everything
// tau-independent once, so delay sweeps are cheap. The evaluation order is
// fixed and independent of the thread count.
class CoincidenceEngine {
public:
    CoincidenceEngine(const Scene& scene, const QuadratureGrid& grid, int threads = 1)
        : scene_(scene), grid_(grid), threads_(std::max(1, threads)) {
        if (grid_.q_nodes.size() > 4500)
            throw NumericalFailure("transverse grid too large (" +
                                   std::to_string(grid_.q_nodes.size()) +
                                   " nodes); reduce spans or counts");
        if (scene_.kernel.pump.is_plane_wave())
            precompute_plane_wave();
        else
            precompute_full();
        const double fraction = evanescent_fraction();
        if (fraction > 0.01)
            throw NumericalFailure("grid misconfigured: " + std::to_string(fraction * 100.0) +
                                   "% of nodes evanescent");
    }

    double rate(double tau) const {
        const ProjectionCoefficients pc = analyzer_projections(scene_.analyzers);
        long double acc = 0.0L;
        for (const PairTerms& t : terms_) {
            const double phase = t.d_omega * tau;
            const double cross =
                std::cos(phase) * t.m_uv.real() - std::sin(phase) * t.m_uv.imag();
            acc += pc.c1 * pc.c1 * t.m_uu + pc.c2 * pc.c2 * t.m_vv + 2.0 * pc.c1 * pc.c2 * cross;
        }
        return static_cast<double>(acc);
    }

    double evanescent_fraction() const {
        return node_total_ == 0 ? 0.0 : static_cast<double>(evanescent_count_) / node_total_;
    }
    std::size_t evanescent_count() const { return evanescent_count_; }
    const QuadratureGrid& grid() const { return grid_; }

private:
    void precompute_plane_wave() {
        const std::size_t nq = grid_.q_nodes.size();
        const bool bucket = grid_.detector_mode == DetectorMode::bucket;

        std::vector<double> D;
        if (bucket) {
            // bucket grams are frequency independent in pupil units
            const auto CA = detail::pupil_gram(grid_.det_nodes, grid_.q_nodes,
                                               scene_.path_a.aperture, +1.0, 1.0, threads_);
            const auto CB = detail::pupil_gram(grid_.det_nodes, grid_.q_nodes,
                                               scene_.path_b.aperture, -1.0, 1.0, threads_);
            D.resize(nq * nq);
            for (std::size_t i = 0; i < nq * nq; ++i) D[i] = CA[i] * CB[i];
        }

        terms_.assign(grid_.pairs.size(), PairTerms{});
        std::vector<std::size_t> skipped(grid_.pairs.size(), 0);
        node_total_ = 2 * grid_.pairs.size() * nq;

        parallel_for(grid_.pairs.size(), threads_, [&](std::size_t ip) {
            const FreqPair& pair = grid_.pairs[ip];
            const double wa = pair.omega_a, wb = pair.omega_b;

            std::vector<double> Dlocal;
            const std::vector<double>* Dp = &D;
            if (!bucket) {
                const double to_pupil_a = wa / (speed_of_light * scene_.path_a.f);
                const double to_pupil_b = wb / (speed_of_light * scene_.path_b.f);
                const auto CA = detail::pupil_gram(grid_.det_nodes, grid_.q_nodes,
                                                   scene_.path_a.aperture, +1.0, to_pupil_a, 1);
                const auto CB = detail::pupil_gram(grid_.det_nodes, grid_.q_nodes,
                                                   scene_.path_b.aperture, -1.0, to_pupil_b, 1);
                Dlocal.resize(nq * nq);
                for (std::size_t i = 0; i < nq * nq; ++i) Dlocal[i] = CA[i] * CB[i];
                Dp = &Dlocal;
            }

            const double beta_sum = 0.5 * speed_of_light *
                                    (scene_.path_a.d1 / wa + scene_.path_b.d1 / wb);
            std::vector<Complex> u(nq), v(nq);
            std::size_t skip = 0;
            for (std::size_t iq = 0; iq < nq; ++iq) {
                const Vec2 q = grid_.q_nodes[iq].k;
                const double w = grid_.q_nodes[iq].weight;
                const Complex psi = std::polar(1.0, -beta_sum * q.norm2());
                Complex f1{0.0, 0.0}, f2{0.0, 0.0};
                try {
                    f1 = scene_.kernel.amplitude(-q, q, wb, wa);
                } catch (const Evanescent&) {
                    ++skip;
                }
                try {
                    f2 = scene_.kernel.amplitude(q, -q, wa, wb);
                } catch (const Evanescent&) {
                    ++skip;
                }
                u[iq] = w * f1 * psi;
                v[iq] = w * f2 * psi;
            }
            skipped[ip] = skip;

            // w1 = D u, w2 = D v
            std::vector<Complex> w1(nq), w2(nq);
            const std::vector<double>& Dm = *Dp;
            for (std::size_t i = 0; i < nq; ++i) {
                Complex a1{0.0, 0.0}, a2{0.0, 0.0};
                const double* row = &Dm[i * nq];
                for (std::size_t j = 0; j < nq; ++j) {
                    a1 += row[j] * u[j];
                    a2 += row[j] * v[j];
                }
                w1[i] = a1;
                w2[i] = a2;
            }
            double muu = 0.0, mvv = 0.0;
            Complex muv{0.0, 0.0};
            for (std::size_t i = 0; i < nq; ++i) {
                muu += (std::conj(u[i]) * w1[i]).real();
                mvv += (std::conj(v[i]) * w2[i]).real();
                muv += w1[i] * std::conj(v[i]);
            }

            const double fa = filter_amplitude(wa, scene_.path_a.filter);
            const double fb = filter_amplitude(wb, scene_.path_b.filter);
            double scale = pair.weight * fa * fa * fb * fb;
            if (bucket) {
                const double ja = speed_of_light * scene_.path_a.f / wa;
                const double jb = speed_of_light * scene_.path_b.f / wb;
                scale *= ja * ja * jb * jb;
            }
            terms_[ip] = {muu * scale, mvv * scale, muv * scale, wa - wb};
        });

        for (std::size_t s : skipped) evanescent_count_ += s;
    }

    // Full (q_o, q_e) tensor evaluation for structured pumps.
    void precompute_full() {
        const std::size_t nq = grid_.q_nodes.size();
        if (nq > 640)
            throw NumericalFailure("structured-pump path needs q grids of at most 640 nodes");
        const bool bucket = grid_.detector_mode == DetectorMode::bucket;
        std::vector<double> CA, CB;
        if (bucket) {
            CA = detail::pupil_gram(grid_.det_nodes, grid_.q_nodes, scene_.path_a.aperture, +1.0,
                                    1.0, threads_);
            CB = detail::pupil_gram(grid_.det_nodes, grid_.q_nodes, scene_.path_b.aperture, +1.0,
                                    1.0, threads_);
        }

        terms_.assign(grid_.pairs.size(), PairTerms{});
        std::vector<std::size_t> skipped(grid_.pairs.size(), 0);
        node_total_ = 2 * grid_.pairs.size() * nq * nq;

        parallel_for(grid_.pairs.size(), threads_, [&](std::size_t ip) {
            const FreqPair& pair = grid_.pairs[ip];
            const double wa = pair.omega_a, wb = pair.omega_b;

            const std::vector<double>* Ap = &CA;
            const std::vector<double>* Bp = &CB;
            std::vector<double> CAl, CBl;
            if (!bucket) {
                const double to_pupil_a = wa / (speed_of_light * scene_.path_a.f);
                const double to_pupil_b = wb / (speed_of_light * scene_.path_b.f);
                CAl = detail::pupil_gram(grid_.det_nodes, grid_.q_nodes, scene_.path_a.aperture,
                                         +1.0, to_pupil_a, 1);
                CBl = detail::pupil_gram(grid_.det_nodes, grid_.q_nodes, scene_.path_b.aperture,
                                         +1.0, to_pupil_b, 1);
                Ap = &CAl;
                Bp = &CBl;
            }

            const double beta_a = 0.5 * speed_of_light * scene_.path_a.d1 / wa;
            const double beta_b = 0.5 * speed_of_light * scene_.path_b.d1 / wb;
            std::vector<Complex> psi_a(nq), psi_b(nq);
            for (std::size_t i = 0; i < nq; ++i) {
                const double q2 = grid_.q_nodes[i].k.norm2();
                psi_a[i] = std::polar(1.0, -beta_a * q2);
                psi_b[i] = std::polar(1.0, -beta_b * q2);
            }

            std::vector<Complex> C1(nq * nq), C2(nq * nq);
            std::size_t skip = 0;
            for (std::size_t m = 0; m < nq; ++m) {
                const Vec2 qm = grid_.q_nodes[m].k;
                const double wm = grid_.q_nodes[m].weight;
                for (std::size_t n = 0; n < nq; ++n) {
                    const Vec2 qn = grid_.q_nodes[n].k;
                    const double wn = grid_.q_nodes[n].weight;
                    Complex f1{0.0, 0.0}, f2{0.0, 0.0};
                    try {
                        f1 = scene_.kernel.amplitude(qn, qm, wb, wa);
                    } catch (const Evanescent&) {
                        ++skip;
                    }
                    try {
                        f2 = scene_.kernel.amplitude(qm, qn, wa, wb);
                    } catch (const Evanescent&) {
                        ++skip;
                    }
                    const Complex ph = psi_a[m] * psi_b[n] * (wm * wn);
                    C1[m * nq + n] = f1 * ph;
                    C2[m * nq + n] = f2 * ph;
                }
            }
            skipped[ip] = skip;

            auto bilinear = [&](const std::vector<Complex>& Ca, const std::vector<Complex>& Cb) {
                // T = A * Ca * B, then sum T .* conj(Cb)
                std::vector<Complex> T1(nq * nq, Complex{0, 0});
                const std::vector<double>& A = *Ap;
                const std::vector<double>& B = *Bp;
                for (std::size_t m1 = 0; m1 < nq; ++m1) {
                    for (std::size_t m = 0; m < nq; ++m) {
                        const double a = A[m1 * nq + m];
                        if (a == 0.0) continue;
                        const Complex* crow = &Ca[m * nq];
                        Complex* trow = &T1[m1 * nq];
                        for (std::size_t n = 0; n < nq; ++n) trow[n] += a * crow[n];
                    }
                }
                Complex acc{0.0, 0.0};
                for (std::size_t m1 = 0; m1 < nq; ++m1) {
                    for (std::size_t n1 = 0; n1 < nq; ++n1) {
                        Complex t{0.0, 0.0};
                        const Complex* trow = &T1[m1 * nq];
                        for (std::size_t n = 0; n < nq; ++n) t += trow[n] * B[n * nq + n1];
                        acc += t * std::conj(Cb[m1 * nq + n1]);
                    }
                }
                return acc;
            };

            const Complex m11 = bilinear(C1, C1);
            const Complex m22 = bilinear(C2, C2);
            const Complex m12 = bilinear(C1, C2);

            const double fa = filter_amplitude(wa, scene_.path_a.filter);
            const double fb = filter_amplitude(wb, scene_.path_b.filter);
            double scale = pair.weight * fa * fa * fb * fb;
            if (bucket) {
                const double ja = speed_of_light * scene_.path_a.f / wa;
                const double jb = speed_of_light * scene_.path_b.f / wb;
                scale *= ja * ja * jb * jb;
            }
            terms_[ip] = {m11.real() * scale, m22.real() * scale, m12 * scale, wa - wb};
        });

        for (std::size_t s : skipped) evanescent_count_ += s;
    }

    Scene scene_;
    QuadratureGrid grid_;
    int threads_;
    std::vector<PairTerms> terms_;
    std::size_t evanescent_count_ = 0;
    std::size_t node_total_ = 0;
};

// One-shot rate; for sweeps construct a CoincidenceEngine once instead.
inline double coincidence_rate(double tau, const Scene& scene, const QuadratureGrid& grid,
                               int threads = 1) {
    return CoincidenceEngine(scene, grid, threads).rate(tau);
}

// Direct nested Riemann summation of the coincidence integral on the same
// node set, with no factorization, caching, or reordering. Test oracle only.
inline double brute_force_rate(double tau, const Scene& scene, const QuadratureGrid& grid,
                               std::size_t max_nodes = 100000) {
    const std::size_t nq = grid.q_nodes.size();
    const std::size_t nd = grid.det_nodes.size();
    const bool plane = scene.kernel.pump.is_plane_wave();
    const std::size_t lattice =
        grid.pairs.size() * nd * nd * (plane ? nq : nq * nq);
    if (lattice > max_nodes)
        throw GridTooLarge("brute-force lattice has " + std::to_string(lattice) +
                           " nodes (limit " + std::to_string(max_nodes) + ")");

    const ProjectionCoefficients pc = analyzer_projections(scene.analyzers);
    const bool bucket = grid.detector_mode == DetectorMode::bucket;
    long double acc = 0.0L;
    for (const FreqPair& pair : grid.pairs) {
        const double wa = pair.omega_a, wb = pair.omega_b;
        const Complex ea = std::polar(1.0, wa * tau);
        const Complex eb = std::polar(1.0, wb * tau);

        // detector nodes in meters for this frequency
        const double map_a = bucket ? speed_of_light * scene.path_a.f / wa : 1.0;
        const double map_b = bucket ? speed_of_light * scene.path_b.f / wb : 1.0;

        std::vector<Complex> gamma(plane ? nq : 0);
        if (plane) {
            for (std::size_t iq = 0; iq < nq; ++iq) {
                const Vec2 q = grid.q_nodes[iq].k;
                Complex f1{0, 0}, f2{0, 0};
                try {
                    f1 = scene.kernel.amplitude(-q, q, wb, wa);
                } catch (const Evanescent&) {
                }
                try {
                    f2 = scene.kernel.amplitude(q, -q, wa, wb);
                } catch (const Evanescent&) {
                }
                gamma[iq] = grid.q_nodes[iq].weight * (pc.c1 * ea * f1 + pc.c2 * eb * f2);
            }
        }

        for (std::size_t ia = 0; ia < nd; ++ia) {
            const Vec2 xa = map_a * grid.det_nodes[ia].k;
            const double wxa = grid.det_nodes[ia].weight * (bucket ? map_a * map_a : 1.0);
            for (std::size_t ib = 0; ib < nd; ++ib) {
                const Vec2 xb = map_b * grid.det_nodes[ib].k;
                const double wxb = grid.det_nodes[ib].weight * (bucket ? map_b * map_b : 1.0);
                Complex amp{0.0, 0.0};
                if (plane) {
                    for (std::size_t iq = 0; iq < nq; ++iq) {
                        const Vec2 q = grid.q_nodes[iq].k;
                        amp += gamma[iq] * transfer_function(xa, q, wa, scene.path_a) *
                               transfer_function(xb, -q, wb, scene.path_b);
                    }
                } else {
                    for (std::size_t m = 0; m < nq; ++m) {
                        const Vec2 qm = grid.q_nodes[m].k;
                        const double wm = grid.q_nodes[m].weight;
                        for (std::size_t n = 0; n < nq; ++n) {
                            const Vec2 qn = grid.q_nodes[n].k;
                            const double wn = grid.q_nodes[n].weight;
                            Complex f1{0, 0}, f2{0, 0};
                            try {
                                f1 = scene.kernel.amplitude(qn, qm, wb, wa);
                            } catch (const Evanescent&) {
                            }
                            try {
                                f2 = scene.kernel.amplitude(qm, qn, wa, wb);
                            } catch (const Evanescent&) {
                            }
                            amp += wm * wn *
                                   (pc.c1 * ea * f1 * transfer_function(xa, qm, wa, scene.path_a) *
                                        transfer_function(xb, qn, wb, scene.path_b) +
                                    pc.c2 * eb * f2 * transfer_function(xa, qm, wa, scene.path_a) *
                                        transfer_function(xb, qn, wb, scene.path_b));
                        }
                    }
                }
                const double a2 = amp.real() * amp.real() + amp.imag() * amp.imag();
                acc += static_cast<long double>(pair.weight * wxa * wxb * a2);
            }
        }
    }
    return static_cast<double>(acc);
}

// Biphoton amplitude at two space-time detection points for a given delay.
// Direct quadrature; used for point tests, not production.
inline Complex biphoton_amplitude(Vec2 x_a, Vec2 x_b, double t_a, double t_b, double tau,
                                  const Scene& scene, const QuadratureGrid& grid) {
    const ProjectionCoefficients pc = analyzer_projections(scene.analyzers);
    Complex acc{0.0, 0.0};
    std::size_t skipped = 0, total = 0;
    const bool plane = scene.kernel.pump.is_plane_wave();
    for (const FreqPair& pair : grid.pairs) {
        const double we = pair.omega_a;  // extraordinary-photon frequency
        const double wo = pair.omega_b;
        const Complex delay = std::polar(1.0, we * tau);
        const Complex t1 = std::polar(1.0, -(we * t_a + wo * t_b));
        const Complex t2 = std::polar(1.0, -(wo * t_a + we * t_b));
        auto add_term = [&](Vec2 q_o, Vec2 q_e, double wq) {
            ++total;
            Complex phi{0.0, 0.0};
            try {
                phi = scene.kernel.amplitude(q_o, q_e, wo, we);
            } catch (const Evanescent&) {
                ++skipped;
                return;
            }
            const Complex term1 = pc.c1 * transfer_function(x_a, q_e, we, scene.path_a) *
                                  transfer_function(x_b, q_o, wo, scene.path_b) * t1;
            const Complex term2 = pc.c2 * transfer_function(x_a, q_o, wo, scene.path_a) *
                                  transfer_function(x_b, q_e, we, scene.path_b) * t2;
            acc += pair.weight * wq * phi * delay * (term1 + term2);
        };
        if (plane) {
            for (const TransverseNode& qn : grid.q_nodes) add_term(-qn.k, qn.k, qn.weight);
        } else {
            for (const TransverseNode& qo : grid.q_nodes)
                for (const TransverseNode& qe : grid.q_nodes)
                    add_term(qo.k, qe.k, qo.weight * qe.weight);
        }
    }
    if (total > 0 && static_cast<double>(skipped) / total > 0.01)
        throw NumericalFailure("grid misconfigured: over 1% evanescent nodes");
    return acc;
}

// --- sampled pattern and its metrics ---

struct ConvergenceEntry {
    std::string dimension;
    double max_change = 0.0;
};

struct InterferencePattern {
    std::vector<double> taus;        // s
    std::vector<double> raw;         // arbitrary units
    std::vector<double> normalized;  // baseline 1
    double baseline_raw = 0.0;
    std::size_t dip_index = 0;
    std::vector<ConvergenceEntry> convergence;
};

// Dip center: argmin of a 5-point moving average (robust to quadrature
// ripple). Baseline: mean of the 10% of samples farthest from the dip center.
inline InterferencePattern finalize_pattern(std::vector<double> taus, std::vector<double> raw) {
    if (taus.size() != raw.size() || taus.size() < 2)
        throw std::invalid_argument("pattern needs at least two samples");
    const std::size_t n = taus.size();
    std::vector<double> smooth(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        int cnt = 0;
        for (int k = -2; k <= 2; ++k) {
            const long j = static_cast<long>(i) + k;
            if (j < 0 || j >= static_cast<long>(n)) continue;
            acc += raw[j];
            ++cnt;
        }
        smooth[i] = acc / cnt;
    }
    std::size_t dip = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (smooth[i] < smooth[dip]) dip = i;

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(taus[a] - taus[dip]) > std::abs(taus[b] - taus[dip]);
    });
    const std::size_t nb = std::max<std::size_t>(1, (n + 9) / 10);
    double base = 0.0;
    for (std::size_t i = 0; i < nb; ++i) base += raw[order[i]];
    base /= nb;

    InterferencePattern p;
    p.taus = std::move(taus);
    p.raw = std::move(raw);
    p.baseline_raw = base;
    p.dip_index = dip;
    double peak = 0.0;
    for (double r : p.raw) peak = std::max(peak, std::abs(r));
    if (!(base > 0.0) || (peak > 0.0 && base < 1e-12 * peak))
        throw DegeneratePattern("pattern baseline is zero");
    p.normalized.resize(n);
    for (std::size_t i = 0; i < n; ++i) p.normalized[i] = p.raw[i] / base;
    return p;
}

// V = (baseline - min rate) / baseline on the normalized pattern.
inline double visibility(const InterferencePattern& p) {
    if (!(p.baseline_raw > 0.0)) throw DegeneratePattern("baseline is zero");
    double mn = p.normalized.empty() ? 0.0 : p.normalized[0];
    for (double r : p.normalized) mn = std::min(mn, r);
    return 1.0 - mn;
}

// S = sum |R(tc+s) - R(tc-s)| / sum [R(tc+s) + R(tc-s)] over mirrored pairs.
inline double asymmetry(const InterferencePattern& p) {
    if (visibility(p) < 0.01) throw DegeneratePattern("no identifiable dip (visibility < 0.01)");
    const std::size_t n = p.normalized.size();
    const std::size_t ic = p.dip_index;
    const std::size_t reach = std::min(ic, n - 1 - ic);
    if (reach == 0) throw DegeneratePattern("dip center at the sweep edge");
    double num = 0.0, den = 0.0;
    for (std::size_t k = 1; k <= reach; ++k) {
        const double a = p.normalized[ic + k];
        const double b = p.normalized[ic - k];
        num += std::abs(a - b);
        den += a + b;
    }
    if (!(den > 0.0)) throw DegeneratePattern("empty mirror window");
    return num / den;
}

// Sweeps the delay, normalizes, and fills the metrics. The per-pair stage is
// parallel; the tau loop accumulates in fixed order, so output is identical
// for any thread count.
inline InterferencePattern pattern_sweep(double tau_start, double tau_stop, int n_steps,
                                         const Scene& scene, const QuadratureGrid& grid,
                                         int threads = 1) {
    if (n_steps < 2) throw std::invalid_argument("sweep needs at least 2 steps");
    CoincidenceEngine engine(scene, grid, threads);
    std::vector<double> taus(n_steps), raw(n_steps);
    const double step = (tau_stop - tau_start) / (n_steps - 1);
    for (int i = 0; i < n_steps; ++i) taus[i] = tau_start + i * step;
    parallel_for(n_steps, threads, [&](std::size_t i) { raw[i] = engine.rate(taus[i]); });
    return finalize_pattern(std::move(taus), std::move(raw));
}

// Analytic normalized rate of the traditional one-dimensional type-II model:
// a triangular dip of relative depth 2|c1 c2|/(c1^2+c2^2) on tau in [0, D*L].
// Derivation: docs/one_dimensional_model.md.
inline double one_dimensional_model_rate(double tau, const CrystalSpec& crystal,
                                         double omega_degenerate, const AnalyzerConfig& an) {
    const ProjectionCoefficients pc = analyzer_projections(an);
    const double denom = pc.c1 * pc.c1 + pc.c2 * pc.c2;
    if (!(denom > 0.0)) throw DegeneratePattern("both analyzer projections vanish");
    const double DL = group_delay_mismatch(crystal, omega_degenerate) * crystal.length;
    double tri = 0.0;
    if (tau >= 0.0 && tau <= DL) tri = 1.0 - std::abs(2.0 * tau / DL - 1.0);
    const double v = 2.0 * std::abs(pc.c1 * pc.c2) / denom;
    return 1.0 - v * tri;
}

}  // namespace spdc
