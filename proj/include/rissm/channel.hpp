#pragma once
// Two-hop Rayleigh channel (BS -> RIS -> UE) and RIS phase configuration.
//
// h[l][n] is the fade from BS antenna n to RIS element l and g[l] the fade
// from element l to the single-antenna UE.  Every entry is an independent
// CN(0,1) draw, so magnitudes are Rayleigh with unit second moment.  Phases
// are kept inside the complex entries.
//
// A RIS configuration is the vector of per-element reflection phases.  It is
// stored as unit phasors e^{j theta_l} (the form every consumer multiplies
// by); theta_l itself is recoverable through theta()/thetas().  "Aligned to
// antenna n" chooses theta_l to cancel both hop phases for that antenna, so
// the composite gain at n becomes the real, non-negative sum of the
// magnitude products, while other antennas keep incoherent residual phases.
//
// The received sample is y = sqrt(P_t) * G * s + n0 with n0 ~ CN(0, N0) and
// G the composite gain of the active antenna under the current configuration.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <rissm/constellation.hpp>
#include <rissm/rng.hpp>

namespace rissm {

struct ChannelRealization {
  unsigned L = 0;   // RIS element count
  unsigned nt = 0;  // BS antenna count
  std::vector<std::complex<double>> h;  // L * nt entries, h[l * nt + n]
  std::vector<std::complex<double>> g;  // L entries

  std::complex<double> at(unsigned l, unsigned n) const { return h[l * nt + n]; }
};

// Redraws every entry of an already-shaped realization (hot-loop form; no
// allocation when the shape is unchanged).
inline void resample_channel(ChannelRealization& ch, unsigned L, unsigned nt,
                             Rng& rng) {
  if (L < 1 || nt < 1) throw std::invalid_argument("L and N_t must be >= 1");
  ch.L = L;
  ch.nt = nt;
  ch.h.resize(static_cast<std::size_t>(L) * nt);
  ch.g.resize(L);
  for (auto& z : ch.h) z = rng.cnormal();
  for (auto& z : ch.g) z = rng.cnormal();
}

inline ChannelRealization sample_channel(unsigned L, unsigned nt, Rng& rng) {
  ChannelRealization ch;
  resample_channel(ch, L, nt, rng);
  return ch;
}

enum class PhaseMode { aligned, random, perturbed };

struct RisPhaseConfig {
  PhaseMode mode = PhaseMode::aligned;
  unsigned aligned_antenna = 0;  // target antenna for aligned/perturbed
  double k = 0.0;                // perturbation accuracy (error in [-pi/k, pi/k])
  // Unit phasors e^{j theta_l}; the stored representation of the phases.
  std::vector<std::complex<double>> phasor;

  // Reflection phase of element l in [0, 2 pi).
  double theta(unsigned l) const {
    const double a = std::arg(phasor[l]);
    return a < 0.0 ? a + 2.0 * std::numbers::pi : a;
  }
  std::vector<double> thetas() const {
    std::vector<double> t(phasor.size());
    for (std::size_t l = 0; l < phasor.size(); ++l)
      t[l] = theta(static_cast<unsigned>(l));
    return t;
  }
};

// Phase-cancelling configuration for antenna n: theta_l = -arg(h[l][n] g[l]),
// computed without transcendentals as the normalized conjugate product.
inline void align_phases_into(const ChannelRealization& ch, unsigned n,
                              RisPhaseConfig& cfg) {
  if (n >= ch.nt) throw std::out_of_range("antenna index out of range");
  cfg.mode = PhaseMode::aligned;
  cfg.aligned_antenna = n;
  cfg.k = 0.0;
  cfg.phasor.resize(ch.L);
  for (unsigned l = 0; l < ch.L; ++l) {
    const std::complex<double> u = ch.at(l, n) * ch.g[l];
    const double mag = std::abs(u);
    // A dead element (measure-zero event) gets a neutral phase.
    cfg.phasor[l] = mag > 0.0 ? std::conj(u) / mag : std::complex<double>{1, 0};
  }
}

inline RisPhaseConfig align_phases(const ChannelRealization& ch, unsigned n) {
  RisPhaseConfig cfg;
  align_phases_into(ch, n, cfg);
  return cfg;
}

// Independent uniform phases on [0, 2 pi) for every element.
inline void random_phases_into(unsigned L, Rng& rng, RisPhaseConfig& cfg) {
  cfg.mode = PhaseMode::random;
  cfg.aligned_antenna = 0;
  cfg.k = 0.0;
  cfg.phasor.resize(L);
  for (unsigned l = 0; l < L; ++l) {
    const double t = rng.uniform(0.0, 2.0 * std::numbers::pi);
    cfg.phasor[l] = {std::cos(t), std::sin(t)};
  }
}

inline RisPhaseConfig random_phases(unsigned L, Rng& rng) {
  RisPhaseConfig cfg;
  random_phases_into(L, rng, cfg);
  return cfg;
}

// Adds an i.i.d. adjustment error uniform on [-pi/k, pi/k] to every phase.
// Larger k means finer phase control; k -> infinity leaves cfg unchanged.
inline void perturb_phases_in_place(RisPhaseConfig& cfg, double k, Rng& rng) {
  if (k < 1.0) throw std::invalid_argument("perturbation parameter k must be >= 1");
  cfg.mode = PhaseMode::perturbed;
  cfg.k = k;
  const double half_width = std::numbers::pi / k;
  for (auto& p : cfg.phasor) {
    const double d = rng.uniform(-half_width, half_width);
    p *= std::complex<double>{std::cos(d), std::sin(d)};
  }
}

inline RisPhaseConfig perturb_phases(const RisPhaseConfig& cfg, double k,
                                     Rng& rng) {
  RisPhaseConfig out = cfg;
  perturb_phases_in_place(out, k, rng);
  return out;
}

// Composite channel gain of antenna n under the configuration:
// sum_l e^{j theta_l} h[l][n] g[l].
inline std::complex<double> composite_gain(const ChannelRealization& ch,
                                           const RisPhaseConfig& cfg,
                                           unsigned n) {
  if (n >= ch.nt) throw std::out_of_range("antenna index out of range");
  if (cfg.phasor.size() != ch.L)
    throw std::invalid_argument("configuration length does not match L");
  std::complex<double> acc{0, 0};
  for (unsigned l = 0; l < ch.L; ++l) acc += cfg.phasor[l] * ch.at(l, n) * ch.g[l];
  return acc;
}

struct NoiseParams {
  double p_t = 1.0;  // transmit power, linear
  double n0 = 1.0;   // noise power, linear

  NoiseParams() = default;
  NoiseParams(double p_t_, double n0_) : p_t(p_t_), n0(n0_) {
    if (p_t <= 0.0) throw std::invalid_argument("P_t must be > 0");
    if (n0 < 0.0) throw std::invalid_argument("N0 must be >= 0");
  }
  double rho() const { return p_t / n0; }
};

// One received sample: y = sqrt(P_t) * G_{antenna} * s + CN(0, N0).
inline std::complex<double> transmit(const ChannelRealization& ch,
                                     const RisPhaseConfig& cfg,
                                     const SmSymbol& sym,
                                     const NoiseParams& noise, Rng& rng) {
  const std::complex<double> G = composite_gain(ch, cfg, sym.antenna);
  std::complex<double> y = std::sqrt(noise.p_t) * G * sym.s;
  if (noise.n0 > 0.0) y += rng.cnormal(noise.n0);
  return y;
}

// Instantaneous SNR P_t |G_n|^2 / N0 of antenna n.
inline double instantaneous_snr(const ChannelRealization& ch,
                                const RisPhaseConfig& cfg, unsigned n,
                                const NoiseParams& noise) {
  if (noise.n0 == 0.0) throw std::domain_error("SNR undefined for N0 = 0");
  return noise.p_t * std::norm(composite_gain(ch, cfg, n)) / noise.n0;
}

}  // namespace rissm
