#pragma once
// Seeded Monte Carlo engine: BER sweeps, received-power profiles, and a
// sampling estimator of the ergodic capacity.
//
// Trials are partitioned into fixed-size blocks.  Each block draws from its
// own substream seeded by (master_seed, sweep-point index, block index), and
// results merge by integer addition, so the output is bit-identical for any
// worker count or scheduling order.  Execution here is sequential; the block
// structure is what makes the contract hold, not the thread layout.
//
// Each trial uses one fresh channel realization (fast fading across trials):
// draw a bit block, map it to (antenna, point), sample the channel, configure
// the RIS for the true antenna per the phase mode, transmit, then hand the
// same received sample to every selected detector.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <rissm/analysis.hpp>
#include <rissm/channel.hpp>
#include <rissm/constellation.hpp>
#include <rissm/detectors.hpp>
#include <rissm/rng.hpp>

namespace rissm {

struct SweepConfig {
  unsigned L = 100;
  unsigned nt = 2;
  Constellation c = build_constellation(2, ModKind::psk);
  double p_t = 1.0;
  std::vector<double> snr_db;        // rho grid in dB; +inf = noiseless
  std::uint64_t trials = 100000;     // per sweep point
  std::uint64_t master_seed = 1;
  std::vector<Detector> detectors = {Detector::ml};
  PhaseMode phase_mode = PhaseMode::aligned;
  double k = 0.0;                    // perturbation accuracy for perturbed mode
  std::uint64_t block_size = 16384;  // trials per work unit
  bool adaptive = false;             // stop a point early once every detector
  std::uint64_t target_bit_errors = 1000;  // ...has at least this many errors
};

struct BerRecord {
  double snr_db = 0.0;
  Detector detector = Detector::ml;
  std::uint64_t bit_errors = 0;
  std::uint64_t bits_sent = 0;
  std::uint64_t trials = 0;
  double ber = 0.0;
};

namespace detail {

inline void validate_sweep_config(const SweepConfig& cfg, bool need_detectors,
                                  bool need_snr = true) {
  if (cfg.L < 1) throw std::invalid_argument("L must be >= 1");
  if (!is_power_of_two(cfg.nt))
    throw std::invalid_argument("N_t must be a power of two");
  if (cfg.p_t <= 0.0) throw std::invalid_argument("P_t must be > 0");
  if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (cfg.block_size < 1) throw std::invalid_argument("block_size must be >= 1");
  if (need_snr && cfg.snr_db.empty())
    throw std::invalid_argument("SNR grid must be non-empty");
  for (const double s : cfg.snr_db)
    if (std::isnan(s) || (std::isinf(s) && s < 0.0))
      throw std::invalid_argument("SNR points must be finite or +inf");
  if (need_detectors && cfg.detectors.empty())
    throw std::invalid_argument("detector set must be non-empty");
  if (cfg.phase_mode == PhaseMode::perturbed && cfg.k < 1.0)
    throw std::invalid_argument("perturbed mode requires k >= 1");
  if (cfg.c.order < 1) throw std::invalid_argument("constellation is empty");
  if (cfg.nt * cfg.c.order < 2)
    throw std::invalid_argument("N_t * M must be >= 2 for a bit mapping");
}

inline double noise_power_for_db(double snr_db) {
  return std::pow(10.0, -snr_db / 10.0);  // P_t = 1 convention; +inf -> 0
}

// Configures the RIS for one trial: aligned (or perturbed-aligned) to the
// transmitted antenna, or fully random.
inline void configure_ris(const ChannelRealization& ch, unsigned true_antenna,
                          PhaseMode mode, double k, Rng& rng,
                          RisPhaseConfig& cfg) {
  switch (mode) {
    case PhaseMode::aligned:
      align_phases_into(ch, true_antenna, cfg);
      break;
    case PhaseMode::perturbed:
      align_phases_into(ch, true_antenna, cfg);
      perturb_phases_in_place(cfg, k, rng);
      break;
    case PhaseMode::random:
      random_phases_into(ch.L, rng, cfg);
      break;
  }
}

}  // namespace detail

// Monte Carlo BER sweep over cfg.snr_db; one BerRecord per (point, detector),
// points in grid order, detectors in cfg order.
inline std::vector<BerRecord> run_ber_sweep(const SweepConfig& cfg) {
  detail::validate_sweep_config(cfg, /*need_detectors=*/true);
  const unsigned K = cfg.nt * cfg.c.order;
  const unsigned antenna_bits = log2_exact(cfg.nt);
  const unsigned bits_per_trial = antenna_bits + cfg.c.bits;
  const unsigned mask = K - 1;

  std::vector<BerRecord> out;
  out.reserve(cfg.snr_db.size() * cfg.detectors.size());

  ChannelRealization ch;
  RisPhaseConfig ris;
  std::vector<std::complex<double>> gains;
  std::vector<std::uint64_t> errors(cfg.detectors.size());

  for (std::size_t si = 0; si < cfg.snr_db.size(); ++si) {
    const double snr = cfg.snr_db[si];
    const NoiseParams noise(cfg.p_t, detail::noise_power_for_db(snr));
    std::fill(errors.begin(), errors.end(), std::uint64_t{0});
    std::uint64_t trials_done = 0;

    const std::uint64_t blocks =
        (cfg.trials + cfg.block_size - 1) / cfg.block_size;
    for (std::uint64_t b = 0; b < blocks; ++b) {
      Rng rng = Rng::substream(cfg.master_seed, si, b);
      const std::uint64_t in_block =
          std::min<std::uint64_t>(cfg.block_size, cfg.trials - trials_done);
      for (std::uint64_t t = 0; t < in_block; ++t) {
        const unsigned block_bits = static_cast<unsigned>(rng.next_u64()) & mask;
        const SmSymbol sym = map_bits(block_bits, cfg.nt, cfg.c);
        resample_channel(ch, cfg.L, cfg.nt, rng);
        detail::configure_ris(ch, sym.antenna, cfg.phase_mode, cfg.k, rng, ris);
        const std::complex<double> y = transmit(ch, ris, sym, noise, rng);
        hypothesis_gains_into(ch, ris, gains);
        for (std::size_t di = 0; di < cfg.detectors.size(); ++di) {
          const DetectionResult r =
              detect(cfg.detectors[di], y, gains, cfg.c, cfg.p_t);
          const unsigned decided =
              (cfg.c.bit_labels[r.point] << antenna_bits) | r.antenna;
          errors[di] += static_cast<unsigned>(
              std::popcount(block_bits ^ decided));
        }
      }
      trials_done += in_block;
      if (cfg.adaptive) {
        bool all_done = true;
        for (const std::uint64_t e : errors)
          if (e < cfg.target_bit_errors) all_done = false;
        if (all_done) break;
      }
    }

    const std::uint64_t bits_sent = trials_done * bits_per_trial;
    for (std::size_t di = 0; di < cfg.detectors.size(); ++di) {
      BerRecord rec;
      rec.snr_db = snr;
      rec.detector = cfg.detectors[di];
      rec.bit_errors = errors[di];
      rec.bits_sent = bits_sent;
      rec.trials = trials_done;
      rec.ber = static_cast<double>(errors[di]) / static_cast<double>(bits_sent);
      out.push_back(rec);
    }
  }
  return out;
}

struct PowerRecord {
  unsigned antenna = 0;  // 0-based
  double mean_power = 0.0;
};

// Mean received power P_t |G_n|^2 at every antenna while the RIS stays
// aligned to `aligned_antenna`, averaged over cfg.trials noiseless
// realizations.  The aligned antenna's coherent sum dominates the others.
inline std::vector<PowerRecord> received_power_profile(const SweepConfig& cfg,
                                                       unsigned aligned_antenna) {
  detail::validate_sweep_config(cfg, /*need_detectors=*/false,
                                /*need_snr=*/false);
  if (aligned_antenna >= cfg.nt)
    throw std::out_of_range("aligned antenna index out of range");

  std::vector<double> acc(cfg.nt, 0.0);
  ChannelRealization ch;
  RisPhaseConfig ris;
  std::uint64_t done = 0;
  const std::uint64_t blocks = (cfg.trials + cfg.block_size - 1) / cfg.block_size;
  for (std::uint64_t b = 0; b < blocks; ++b) {
    Rng rng = Rng::substream(cfg.master_seed, 0, b);
    const std::uint64_t in_block =
        std::min<std::uint64_t>(cfg.block_size, cfg.trials - done);
    for (std::uint64_t t = 0; t < in_block; ++t) {
      resample_channel(ch, cfg.L, cfg.nt, rng);
      align_phases_into(ch, aligned_antenna, ris);
      for (unsigned n = 0; n < cfg.nt; ++n)
        acc[n] += cfg.p_t * std::norm(composite_gain(ch, ris, n));
    }
    done += in_block;
  }

  std::vector<PowerRecord> out(cfg.nt);
  for (unsigned n = 0; n < cfg.nt; ++n)
    out[n] = {n, acc[n] / static_cast<double>(done)};
  return out;
}

struct EcRecord {
  double snr_db = 0.0;
  double ec_bpcu = 0.0;
};

// Sampling estimator of the ergodic capacity: the mutual information of the
// equiprobable joint (antenna, point) alphabet over the actual channel,
//   E[ log2 K - log2 sum_j exp((d_true - d_j) / N0) ],
// with d_j the received-sample distance to hypothesis j under the true
// composite gains.  Serves as the oracle for ergodic_capacity; saturates at
// log2 K and vanishes as rho -> 0.
inline std::vector<EcRecord> ec_monte_carlo(const SweepConfig& cfg) {
  detail::validate_sweep_config(cfg, /*need_detectors=*/false);
  if (cfg.trials < 10000)
    throw std::invalid_argument("capacity estimation requires trials >= 1e4");
  const unsigned K = cfg.nt * cfg.c.order;
  const unsigned mask = K - 1;
  const double log2k = std::log2(static_cast<double>(K));

  std::vector<EcRecord> out;
  out.reserve(cfg.snr_db.size());
  ChannelRealization ch;
  RisPhaseConfig ris;
  std::vector<std::complex<double>> gains;
  std::vector<double> arg(K);

  for (std::size_t si = 0; si < cfg.snr_db.size(); ++si) {
    const double snr = cfg.snr_db[si];
    const NoiseParams noise(cfg.p_t, detail::noise_power_for_db(snr));
    const double root_p = std::sqrt(cfg.p_t);
    double mi_sum = 0.0;
    std::uint64_t done = 0;
    const std::uint64_t blocks =
        (cfg.trials + cfg.block_size - 1) / cfg.block_size;
    for (std::uint64_t b = 0; b < blocks; ++b) {
      Rng rng = Rng::substream(cfg.master_seed, si, b);
      const std::uint64_t in_block =
          std::min<std::uint64_t>(cfg.block_size, cfg.trials - done);
      for (std::uint64_t t = 0; t < in_block; ++t) {
        const unsigned block_bits = static_cast<unsigned>(rng.next_u64()) & mask;
        const SmSymbol sym = map_bits(block_bits, cfg.nt, cfg.c);
        resample_channel(ch, cfg.L, cfg.nt, rng);
        detail::configure_ris(ch, sym.antenna, cfg.phase_mode, cfg.k, rng, ris);
        const std::complex<double> y = transmit(ch, ris, sym, noise, rng);
        if (noise.n0 == 0.0) {
          mi_sum += log2k;  // distinct hypotheses are separated exactly
          continue;
        }
        hypothesis_gains_into(ch, ris, gains);
        const double d_true =
            std::norm(y - root_p * gains[sym.antenna] * sym.s);
        double max_arg = 0.0;
        unsigned j = 0;
        for (unsigned n = 0; n < cfg.nt; ++n) {
          for (unsigned m = 0; m < cfg.c.order; ++m, ++j) {
            const double d =
                std::norm(y - root_p * gains[n] * cfg.c.points[m]);
            arg[j] = (d_true - d) / noise.n0;
            if (arg[j] > max_arg) max_arg = arg[j];
          }
        }
        double lse = 0.0;
        for (unsigned i = 0; i < K; ++i) lse += std::exp(arg[i] - max_arg);
        mi_sum += log2k - (max_arg + std::log(lse)) / std::numbers::ln2;
      }
      done += in_block;
    }
    out.push_back({snr, mi_sum / static_cast<double>(done)});
  }
  return out;
}

}  // namespace rissm
