#pragma once
// Deterministic random-number plumbing for the Monte Carlo engine.
//
// Every work unit (one block of trials at one sweep point) owns a private
// engine seeded by mixing (master_seed, stream, block) through the splitmix64
// finalizer.  Aggregation is a commutative integer sum, so results are
// bit-identical no matter how blocks are scheduled across workers.
//
// Normals come from Box-Muller rather than std::normal_distribution so the
// byte stream is pinned by this header and not by the standard-library build.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace rissm {

// splitmix64 finalizer (Steele, Lea & Flood): bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Independent seed for the (stream, block) work unit under a master seed.
// Distinct inputs give well-dispersed seeds; identical inputs always give
// the same seed (the determinism contract of the simulator).
constexpr std::uint64_t substream_seed(std::uint64_t master_seed,
                                       std::uint64_t stream,
                                       std::uint64_t block) {
  constexpr std::uint64_t golden = 0x9e3779b97f4a7c15ULL;
  std::uint64_t s = mix64(master_seed + golden);
  s = mix64(s ^ (stream + golden));
  return mix64(s ^ (block + golden));
}

// mt19937_64 wrapper producing uniform doubles, Box-Muller normals, and
// circularly-symmetric complex Gaussians.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  static Rng substream(std::uint64_t master_seed, std::uint64_t stream,
                       std::uint64_t block) {
    return Rng(substream_seed(master_seed, stream, block));
  }

  std::uint64_t next_u64() { return eng_(); }

  // Uniform on [0, 1) with 53 random mantissa bits.
  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  // Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal; Box-Muller with the second variate cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);  // log(0) guard; probability 2^-53 per draw
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  // Complex Gaussian with independent real/imaginary parts and E|z|^2 = var.
  std::complex<double> cnormal(double var = 1.0) {
    const double s = std::sqrt(var * 0.5);
    return {s * normal(), s * normal()};
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace rissm
