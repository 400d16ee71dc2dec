#pragma once
// The three receivers: joint ML, two-stage ML (TSML), and the greedy
// detector (GD).
//
// All of them score hypotheses against the actual per-antenna composite
// gains under the current RIS configuration (the receiver knows the
// aggregated channel): G_n = composite_gain(ch, cfg, n).  With the RIS
// aligned to the transmitted antenna, G at that antenna is real and large
// while every other antenna sees an incoherent sum with residual phases —
// the structure all three detectors exploit.
//
//   ml_detect    exhaustive argmin over (antenna, point) of
//                |y - sqrt(P_t) G_n s_m|^2
//   tsml_detect  stage 1 detects the antenna with a fixed probe point,
//                stage 2 the point, both by the same residual metric
//   gd_detect    stage 1 matches received amplitude, picking
//                argmin_n | |y| - sqrt(P_t) |G_n| |, stage 2 as above
//
// Ties break toward the lowest (antenna, point) pair.  Detectors are pure
// functions of (y, gains, constellation, P_t): same inputs, same output.

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <rissm/channel.hpp>
#include <rissm/constellation.hpp>

namespace rissm {

enum class Detector { ml, tsml, gd };

inline const char* detector_name(Detector d) {
  switch (d) {
    case Detector::ml: return "ml";
    case Detector::tsml: return "tsml";
    case Detector::gd: return "gd";
  }
  return "?";
}

inline Detector detector_from_name(const std::string& name) {
  if (name == "ml") return Detector::ml;
  if (name == "tsml") return Detector::tsml;
  if (name == "gd") return Detector::gd;
  throw std::invalid_argument("unknown detector '" + name +
                              "' (expected ml, tsml, or gd)");
}

struct DetectionResult {
  unsigned antenna = 0;
  unsigned point = 0;
  double metric = 0.0;  // final decision statistic (residual energy)
};

// Per-antenna composite gains under the current configuration, computed once
// per realization and shared by all detectors.
inline void hypothesis_gains_into(const ChannelRealization& ch,
                                  const RisPhaseConfig& cfg,
                                  std::vector<std::complex<double>>& gains) {
  gains.resize(ch.nt);
  for (unsigned n = 0; n < ch.nt; ++n) gains[n] = composite_gain(ch, cfg, n);
}

inline std::vector<std::complex<double>> hypothesis_gains(
    const ChannelRealization& ch, const RisPhaseConfig& cfg) {
  std::vector<std::complex<double>> gains;
  hypothesis_gains_into(ch, cfg, gains);
  return gains;
}

namespace detail {

// argmin_m |y - sqrt(P_t) G s_m|^2 for a fixed antenna gain G.
inline void best_point(const std::complex<double>& y,
                       const std::complex<double>& scaled_gain,
                       const Constellation& c, unsigned& best_m,
                       double& best_metric) {
  best_m = 0;
  best_metric = std::norm(y - scaled_gain * c.points[0]);
  for (unsigned m = 1; m < c.order; ++m) {
    const double d = std::norm(y - scaled_gain * c.points[m]);
    if (d < best_metric) {
      best_metric = d;
      best_m = m;
    }
  }
}

}  // namespace detail

// Joint exhaustive search over all N_t * M hypotheses.
inline DetectionResult ml_detect(const std::complex<double>& y,
                                 const std::vector<std::complex<double>>& gains,
                                 const Constellation& c, double p_t) {
  const double root_p = std::sqrt(p_t);
  DetectionResult best{0, 0, 0.0};
  bool first = true;
  for (unsigned n = 0; n < gains.size(); ++n) {
    const std::complex<double> sg = root_p * gains[n];
    for (unsigned m = 0; m < c.order; ++m) {
      const double d = std::norm(y - sg * c.points[m]);
      if (first || d < best.metric) {
        best = {n, m, d};
        first = false;
      }
    }
  }
  return best;
}

// Two-stage search: the antenna is detected first against a fixed probe
// point (probe_index into the constellation), then the point on that
// antenna.  Collapses to ml_detect when M = 1.
inline DetectionResult tsml_detect(const std::complex<double>& y,
                                   const std::vector<std::complex<double>>& gains,
                                   const Constellation& c, double p_t,
                                   unsigned probe_index = 0) {
  if (probe_index >= c.order)
    throw std::invalid_argument("probe index out of range");
  const double root_p = std::sqrt(p_t);
  const std::complex<double> probe = c.points[probe_index];
  unsigned best_n = 0;
  double best_d = std::norm(y - root_p * gains[0] * probe);
  for (unsigned n = 1; n < gains.size(); ++n) {
    const double d = std::norm(y - root_p * gains[n] * probe);
    if (d < best_d) {
      best_d = d;
      best_n = n;
    }
  }
  DetectionResult r{best_n, 0, 0.0};
  detail::best_point(y, root_p * gains[best_n], c, r.point, r.metric);
  return r;
}

// Operation counter for the complexity checks: multiplications and
// additions actually executed in an instrumented code path.
struct OpCounter {
  std::uint64_t mults = 0;
  std::uint64_t adds = 0;
};

// Greedy detector.  Stage 1 compares the received amplitude against each
// antenna's hypothesis amplitude: argmin_n | |y| - sqrt(P_t) |G_n| |.  Only
// the per-candidate energy arithmetic (re^2 + im^2: two multiplications and
// one addition per antenna) is counted by `counter`; amplitude preparation
// of y, square roots, and comparisons are bookkeeping outside the
// per-hypothesis cost model.  Stage 2 is the same point search as TSML's.
inline DetectionResult gd_detect(const std::complex<double>& y,
                                 const std::vector<std::complex<double>>& gains,
                                 const Constellation& c, double p_t,
                                 OpCounter* counter = nullptr) {
  const double root_p = std::sqrt(p_t);
  const double ay = std::abs(y);
  unsigned best_n = 0;
  double best_d = 0.0;
  for (unsigned n = 0; n < gains.size(); ++n) {
    const double re = gains[n].real();
    const double im = gains[n].imag();
    const double energy = re * re + im * im;  // the counted candidate work
    if (counter) {
      counter->mults += 2;
      counter->adds += 1;
    }
    const double d = std::fabs(ay - root_p * std::sqrt(energy));
    if (n == 0 || d < best_d) {
      best_d = d;
      best_n = n;
    }
  }
  DetectionResult r{best_n, 0, 0.0};
  detail::best_point(y, root_p * gains[best_n], c, r.point, r.metric);
  return r;
}

// Uniform dispatch used by the sweep engine.
inline DetectionResult detect(Detector d, const std::complex<double>& y,
                              const std::vector<std::complex<double>>& gains,
                              const Constellation& c, double p_t) {
  switch (d) {
    case Detector::ml: return ml_detect(y, gains, c, p_t);
    case Detector::tsml: return tsml_detect(y, gains, c, p_t);
    case Detector::gd: return gd_detect(y, gains, c, p_t);
  }
  throw std::logic_error("unreachable detector kind");
}

}  // namespace rissm
