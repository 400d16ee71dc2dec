#pragma once
// Symbol constellations and the joint spatial/symbol bit mapping.
//
// A constellation is a unit-average-power M-PSK or square M-QAM point set
// with Gray-coded bit labels.  Spatial modulation sends one extra block of
// log2(N_t) bits through the index of the active transmit antenna: a block
// of log2(M) + log2(N_t) input bits maps to (constellation point, antenna),
// with the symbol bits first (most significant) and the antenna bits last.
// Bit blocks are handled as unsigned integers, MSB-first: the block "11" for
// N_t = 2, M = 2 is the integer 3.

#include <bit>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace rissm {

enum class ModKind { psk, qam };

constexpr unsigned gray_encode(unsigned v) { return v ^ (v >> 1); }

constexpr bool is_power_of_two(unsigned v) { return v != 0 && (v & (v - 1)) == 0; }

// log2 of a power of two.
constexpr unsigned log2_exact(unsigned v) {
  return static_cast<unsigned>(std::bit_width(v)) - 1u;
}

struct Constellation {
  ModKind kind = ModKind::psk;
  unsigned order = 0;  // M
  unsigned bits = 0;   // log2(M)
  // points[m] in natural geometric order: PSK angle index / QAM grid index.
  std::vector<std::complex<double>> points;
  // Gray label of points[m], `bits` wide.
  std::vector<unsigned> bit_labels;
  // Inverse of bit_labels: index_of_label[label] = m.
  std::vector<unsigned> index_of_label;
};

// Mean of |points[m]|^2; unity for every supported constellation.
inline double average_power(const Constellation& c) {
  double acc = 0.0;
  for (const auto& p : c.points) acc += std::norm(p);
  return acc / static_cast<double>(c.order);
}

// Builds the unit-average-power constellation with Gray labels.
//   PSK: points exp(j 2 pi m / M), label gray(m).
//   QAM: square grid with odd-integer coordinates, per-axis Gray labels
//        (in-phase bits high, quadrature bits low), scaled to unit power.
// M = 1 (no symbol bits, pure antenna-index signalling) uses kind psk and
// the single point +1.
inline Constellation build_constellation(unsigned M, ModKind kind) {
  if (!is_power_of_two(M)) throw std::invalid_argument("M must be a power of two");
  Constellation c;
  c.kind = kind;
  c.order = M;
  c.bits = log2_exact(M);
  c.points.resize(M);
  c.bit_labels.resize(M);
  c.index_of_label.resize(M);
  if (kind == ModKind::psk) {
    for (unsigned m = 0; m < M; ++m) {
      const double ang = 2.0 * std::numbers::pi * m / M;
      c.points[m] = {std::cos(ang), std::sin(ang)};
      c.bit_labels[m] = gray_encode(m);
    }
  } else {
    if (M != 4 && M != 16 && M != 64)
      throw std::invalid_argument("QAM order must be 4, 16, or 64 (square grid)");
    const unsigned side = (M == 4) ? 2u : (M == 16) ? 4u : 8u;
    const unsigned axis_bits = log2_exact(side);
    // Grid levels are -(side-1), ..., -1, +1, ..., +(side-1); the mean
    // squared level is (side^2 - 1)/3 per axis, so 2(side^2 - 1)/3 total.
    const double scale =
        1.0 / std::sqrt(2.0 * (static_cast<double>(side) * side - 1.0) / 3.0);
    for (unsigned i = 0; i < side; ++i) {
      for (unsigned q = 0; q < side; ++q) {
        const unsigned m = i * side + q;
        c.points[m] = {(2.0 * i - side + 1.0) * scale,
                       (2.0 * q - side + 1.0) * scale};
        c.bit_labels[m] = (gray_encode(i) << axis_bits) | gray_encode(q);
      }
    }
  }
  for (unsigned m = 0; m < M; ++m) c.index_of_label[c.bit_labels[m]] = m;
  return c;
}

// One spatial-modulation symbol: which antenna radiates which point.
// Indices are 0-based.
struct SmSymbol {
  unsigned antenna = 0;          // active transmit antenna
  unsigned point = 0;            // constellation point index
  std::complex<double> s{1, 0};  // the point itself
};

// Maps a bit block (value < N_t * M, symbol bits high / antenna bits low)
// to an SmSymbol.  The symbol bits are the Gray label of the point; the
// antenna bits are the antenna index in natural binary.
inline SmSymbol map_bits(unsigned block, unsigned nt, const Constellation& c) {
  if (!is_power_of_two(nt)) throw std::invalid_argument("N_t must be a power of two");
  const unsigned antenna_bits = log2_exact(nt);
  if (block >= (c.order << antenna_bits))
    throw std::invalid_argument("bit block out of range for (N_t, M)");
  const unsigned antenna = block & (nt - 1);
  const unsigned label = block >> antenna_bits;
  const unsigned m = c.index_of_label[label];
  return {antenna, m, c.points[m]};
}

// Exact inverse of map_bits.
inline unsigned demap_symbol(const SmSymbol& sym, unsigned nt,
                             const Constellation& c) {
  if (!is_power_of_two(nt)) throw std::invalid_argument("N_t must be a power of two");
  if (sym.antenna >= nt || sym.point >= c.order)
    throw std::invalid_argument("symbol indices out of range for (N_t, M)");
  return (c.bit_labels[sym.point] << log2_exact(nt)) | sym.antenna;
}

// Number of differing bits between the bit blocks of two symbols.
inline unsigned hamming_distance(const SmSymbol& a, const SmSymbol& b,
                                 unsigned nt, const Constellation& c) {
  return static_cast<unsigned>(
      std::popcount(demap_symbol(a, nt, c) ^ demap_symbol(b, nt, c)));
}

}  // namespace rissm
