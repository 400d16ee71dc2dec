#pragma once
// Closed-form performance engine.
//
// The composite channel seen by the aligned antenna is xi = sum_l a_l b_l of
// L independent products of two Rayleigh amplitudes.  For large L the
// central limit theorem gives xi ~ N(mu, sigma2) with mu = L pi/4 and
// sigma2 = L (16 - pi^2)/16; everything below builds on that approximation.
//
//   - xi_square_pdf:        density of xi^2 (needed by the same-antenna
//                           error analysis), evaluated in the log domain
//   - cpep / upep_*:        pairwise error probabilities, conditioned on a
//                           realization or averaged over the fading
//   - gcq_nodes:            Gauss-Chebyshev nodes for the finite
//                           trigonometric integral in the Q-function's
//                           Craig form; the cosine-space sum carries the
//                           Chebyshev weight sin((2q-1) pi / 2Q)
//   - gamma_moments /       Gaussian quadratic-form machinery for the
//     mgf_quadratic:        cross-antenna case (real/imaginary error parts)
//   - abep_union_bound:     Hamming-weighted union over all symbol pairs
//   - ergodic_capacity:     finite-alphabet capacity approximation
//   - detector_flops:       per-decision multiplication/addition counts of
//                           the three receivers
//
// All functions are pure; none touch global state.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <rissm/constellation.hpp>
#include <rissm/detectors.hpp>

namespace rissm {

// Gaussian tail Q(x) = P(N(0,1) > x), via the complementary error function.
inline double q_function(double x) {
  return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

// Moments of the composite channel xi = sum of L Rayleigh-product terms.
struct XiMoments {
  double mu = 0.0;
  double sigma2 = 0.0;
};

inline XiMoments xi_moments(unsigned L) {
  if (L < 1) throw std::invalid_argument("L must be >= 1");
  const double pi = std::numbers::pi;
  return {L * pi / 4.0, L * (16.0 - pi * pi) / 16.0};
}

// Density of x = xi^2 when xi ~ N(mu, sigma2):
//   f(x) = exp(-(x + mu^2)/(2 sigma2)) / (2 sqrt(2 pi sigma2 x))
//          * (exp(mu sqrt(x)/sigma2) + exp(-mu sqrt(x)/sigma2)).
// The bracket is evaluated as exp(b)(1 + exp(-2b)) in the log domain so the
// large-argument case stays finite.
inline double xi_square_pdf(double x, const XiMoments& m) {
  if (x <= 0.0) throw std::domain_error("x must be > 0");
  const double b = m.mu * std::sqrt(x) / m.sigma2;
  const double log_f = -(x + m.mu * m.mu) / (2.0 * m.sigma2) + b +
                       std::log1p(std::exp(-2.0 * b)) -
                       std::log(2.0 * std::sqrt(2.0 * std::numbers::pi *
                                                m.sigma2 * x));
  return std::exp(log_f);
}

// Density of the difference of two independent uniform phases on [0, 2 pi):
// triangular on [-2 pi, 2 pi] with apex 1/(2 pi) at zero.
inline double phase_diff_pdf(double phi) {
  const double pi = std::numbers::pi;
  const double a = std::fabs(phi);
  if (a > 2.0 * pi) return 0.0;
  return (2.0 * pi - a) / (4.0 * pi * pi);
}

// Pairwise error probability conditioned on a realization, with
// diff_sq = |G_nt s - G_nhat shat|^2:  Q(sqrt(rho diff_sq / 2)).
inline double cpep(double rho, double diff_sq) {
  if (rho < 0.0 || diff_sq < 0.0)
    throw std::invalid_argument("rho and diff_sq must be >= 0");
  return q_function(std::sqrt(rho * diff_sq / 2.0));
}

// Gauss-Chebyshev nodes cos((2q-1) pi / 2Q), q = 1..Q.  Used to evaluate
// (1/pi) * integral_0^{pi/2} f(sin theta) dtheta after the substitution
// theta = (pi/4)(node + 1); the accompanying Chebyshev weight for node q is
// sqrt(1 - node^2) = sin((2q-1) pi / 2Q).
struct GcqGrid {
  unsigned Q = 0;
  std::vector<double> nodes;
};

inline GcqGrid gcq_nodes(unsigned Q) {
  if (Q < 1) throw std::invalid_argument("Q must be >= 1");
  GcqGrid g;
  g.Q = Q;
  g.nodes.resize(Q);
  for (unsigned q = 0; q < Q; ++q)
    g.nodes[q] = std::cos((2.0 * q + 1.0) * std::numbers::pi / (2.0 * Q));
  return g;
}

inline GcqGrid default_gcq_grid() { return gcq_nodes(128); }

// Fading-averaged pairwise error probability when the detected antenna is
// the transmitted one and only the point differs (distance d_sq = |s-shat|^2
// on the real composite channel):
//   (pi/4Q) sum_q w_q sqrt(2 sin^2 / (2 sin^2 + rho sigma2 d)) *
//            exp(-rho mu^2 d / (4 sin^2 + 2 rho sigma2 d)).
inline double upep_same_antenna(double rho, double d_sq, unsigned L,
                                const GcqGrid& grid) {
  if (d_sq <= 0.0)
    throw std::invalid_argument("d_sq must be > 0 (zero-distance events carry "
                                "no same-antenna error probability)");
  if (rho < 0.0) throw std::invalid_argument("rho must be >= 0");
  const XiMoments m = xi_moments(L);
  const double pi = std::numbers::pi;
  double acc = 0.0;
  for (const double node : grid.nodes) {
    const double theta = 0.25 * pi * (node + 1.0);
    const double s = std::sin(theta);
    const double s2 = s * s;
    const double w = std::sqrt(1.0 - node * node);  // Chebyshev weight
    const double den = 2.0 * s2 + rho * m.sigma2 * d_sq;
    const double term = std::sqrt(2.0 * s2 / den) *
                        std::exp(-rho * m.mu * m.mu * d_sq / (2.0 * den));
    acc += w * term;
  }
  return acc * pi / (4.0 * grid.Q);
}

// First and second moments of the real/imaginary decision-error components
// for the cross-antenna case (detected antenna differs from the transmitted
// one).  s is the transmitted point, shat the hypothesized one; the shat
// antenna's composite gain carries residual phases, which contribute the
// |shat|^2 L / 2 incoherent part of the variances.
struct GammaMoments {
  double mu_re = 0.0, mu_im = 0.0;   // mean vector
  double v11 = 0.0, v12 = 0.0, v22 = 0.0;  // symmetric covariance
};

inline GammaMoments gamma_moments(const std::complex<double>& s,
                                  const std::complex<double>& s_hat,
                                  unsigned L) {
  if (L < 1) throw std::invalid_argument("L must be >= 1");
  const double pi = std::numbers::pi;
  const double c = (16.0 - pi * pi) / 16.0;  // per-term coherent variance
  const double inc = std::norm(s_hat) * L / 2.0;  // incoherent part
  GammaMoments g;
  g.mu_re = L * pi / 4.0 * s.real();
  g.mu_im = L * pi / 4.0 * s.imag();
  g.v11 = c * s.real() * s.real() * L + inc;
  g.v22 = c * s.imag() * s.imag() * L + inc;
  g.v12 = c * s.real() * s.imag() * L;
  return g;
}

namespace detail {

// log of the quadratic-form MGF below; shared by the linear and log callers.
inline double log_mgf_quadratic(double x, const GammaMoments& g) {
  // V must be a genuine covariance (positive definite) and I - 2xAV (A = I)
  // positive definite for the Gaussian integral to converge.
  const double det_v = g.v11 * g.v22 - g.v12 * g.v12;
  if (!(g.v11 > 0.0) || !(det_v > 0.0))
    throw std::domain_error(
        "covariance V is not positive definite (an eigenvalue is <= 0)");
  const double a11 = 1.0 - 2.0 * x * g.v11;
  const double a22 = 1.0 - 2.0 * x * g.v22;
  const double a12 = -2.0 * x * g.v12;
  const double det = a11 * a22 - a12 * a12;
  if (!(a11 > 0.0) || !(det > 0.0))
    throw std::domain_error(
        "I - 2xAV is not positive definite (an eigenvalue is <= 0); the MGF "
        "diverges at this x");
  // Solve (I - 2xV) u = mu, then the exponent is x * mu^T u — the
  // rearrangement of -1/2 mu^T (I - (I-2xAV)^{-1}) V^{-1} mu that avoids
  // inverting V.
  const double u1 = (a22 * g.mu_re - a12 * g.mu_im) / det;
  const double u2 = (a11 * g.mu_im - a12 * g.mu_re) / det;
  return -0.5 * std::log(det) + x * (g.mu_re * u1 + g.mu_im * u2);
}

}  // namespace detail

// MGF E[exp(x (gamma_re^2 + gamma_im^2))] of the Gaussian quadratic form
// with moments g: det(I - 2xAV)^{-1/2} exp(x mu^T (I - 2xAV)^{-1} mu),
// A = identity.  Intermediates stay in the log domain.
inline double mgf_quadratic(double x, const GammaMoments& g) {
  return std::exp(detail::log_mgf_quadratic(x, g));
}

// Fading-averaged pairwise error probability when the detected antenna
// differs from the transmitted one: (pi/4Q) sum_q w_q MGF(-rho/(4 sin^2)).
inline double upep_cross_antenna(double rho, const std::complex<double>& s,
                                 const std::complex<double>& s_hat, unsigned L,
                                 const GcqGrid& grid) {
  if (rho < 0.0) throw std::invalid_argument("rho must be >= 0");
  const GammaMoments g = gamma_moments(s, s_hat, L);
  const double pi = std::numbers::pi;
  double acc = 0.0;
  for (const double node : grid.nodes) {
    const double theta = 0.25 * pi * (node + 1.0);
    const double s2 = std::sin(theta) * std::sin(theta);
    const double w = std::sqrt(1.0 - node * node);
    acc += w * mgf_quadratic(-rho / (4.0 * s2), g);
  }
  return acc * pi / (4.0 * grid.Q);
}

// Hamming-weighted union bound on the average bit error probability of the
// joint (antenna, point) alphabet under ML detection:
//   sum over ordered pairs v != vhat of N(v, vhat) UPEP(v -> vhat)
//   / (N_t M log2(N_t M)).
// Same-antenna pairs use the real-channel UPEP, cross-antenna pairs the
// quadratic-form UPEP.  The bound is an equality for N_t = 2, M = 1.
inline double abep_union_bound(double rho, unsigned L, unsigned nt,
                               const Constellation& c, const GcqGrid& grid) {
  if (!is_power_of_two(nt)) throw std::invalid_argument("N_t must be a power of two");
  const unsigned M = c.order;
  const unsigned K = nt * M;
  if (K < 2)
    throw std::invalid_argument("N_t * M must be >= 2 for a bit mapping");
  const unsigned antenna_bits = log2_exact(nt);
  const unsigned bits_per_symbol = antenna_bits + c.bits;

  // Point-pair UPEPs are antenna-independent; cache them once.
  std::vector<double> same(M * M, 0.0), cross(M * M, 0.0);
  for (unsigned m = 0; m < M; ++m) {
    for (unsigned mh = 0; mh < M; ++mh) {
      if (mh != m) {
        const double d_sq = std::norm(c.points[m] - c.points[mh]);
        same[m * M + mh] = upep_same_antenna(rho, d_sq, L, grid);
      }
      cross[m * M + mh] =
          upep_cross_antenna(rho, c.points[m], c.points[mh], L, grid);
    }
  }

  double acc = 0.0;
  for (unsigned n = 0; n < nt; ++n) {
    for (unsigned m = 0; m < M; ++m) {
      const unsigned v = (c.bit_labels[m] << antenna_bits) | n;
      for (unsigned nh = 0; nh < nt; ++nh) {
        for (unsigned mh = 0; mh < M; ++mh) {
          if (nh == n && mh == m) continue;
          const unsigned vh = (c.bit_labels[mh] << antenna_bits) | nh;
          const double weight =
              static_cast<double>(std::popcount(v ^ vh));
          const double upep =
              (nh == n) ? same[m * M + mh] : cross[m * M + mh];
          acc += weight * upep;
        }
      }
    }
  }
  return acc / (static_cast<double>(K) * bits_per_symbol);
}

// Capacity-sum term for a same-antenna point pair: E[exp(-rho x d_sq / 2)]
// with x = xi^2 on the real composite channel.  The Gaussian xi gives the
// scalar closed form (1 + rho d sigma2)^{-1/2} exp(-rho mu^2 d / 2 /
// (1 + rho d sigma2)).  Retained alongside the capacity sum for the
// same-antenna split of the analysis; the shipped ergodic-capacity sum
// excludes same-antenna pairs (see ergodic_capacity).
inline double capacity_term_same_antenna(double rho, double d_sq, unsigned L) {
  if (rho < 0.0 || d_sq < 0.0)
    throw std::invalid_argument("rho and d_sq must be >= 0");
  const XiMoments m = xi_moments(L);
  const double den = 1.0 + rho * d_sq * m.sigma2;
  const double log_v =
      -0.5 * std::log(den) - 0.5 * rho * m.mu * m.mu * d_sq / den;
  return std::exp(log_v);
}

// Closed-form ergodic capacity (bits per channel use) of the equiprobable
// joint alphabet:
//   EC = 2 log2(K) - log2(K + S),  K = N_t M,
// where S sums the quadratic-form MGF at -rho/2 over all hypothesis pairs
// whose antenna AND point both differ:
//   S = sum_{n, m} sum_{nhat != n} sum_{mhat != m} MGF(-rho/2; m, mhat).
// The result is clamped to [0, log2 K].  Note this double-exclusion index
// set leaves M = 1 degenerate (S = 0, EC = log2 N_t at every rho) and gives
// EC(rho -> 0) = 2 log2 K - log2(K + K (N_t-1)(M-1)) rather than 0.
inline double ergodic_capacity(double rho, unsigned L, unsigned nt,
                               const Constellation& c) {
  if (rho < 0.0) throw std::invalid_argument("rho must be >= 0");
  if (nt < 1) throw std::invalid_argument("N_t must be >= 1");
  const unsigned M = c.order;
  const double K = static_cast<double>(nt) * M;
  if (K < 2.0)
    throw std::invalid_argument("N_t * M must be >= 2 for a capacity figure");
  double s_points = 0.0;  // sum over (m, mhat != m), antenna-independent
  for (unsigned m = 0; m < M; ++m)
    for (unsigned mh = 0; mh < M; ++mh)
      if (mh != m)
        s_points +=
            mgf_quadratic(-rho / 2.0, gamma_moments(c.points[m], c.points[mh], L));
  const double S = static_cast<double>(nt) * (nt - 1.0) * s_points;
  const double log2k = std::log2(K);
  double ec = 2.0 * log2k - std::log2(K + S);
  if (ec < 0.0) ec = 0.0;
  if (ec > log2k) ec = log2k;
  return ec;
}

// Per-decision multiplication/addition counts of the three receivers as a
// function of (L, N_t, M); the per-candidate cost 3L+5 / 2L+1 includes
// forming the composite gain from the L reflected terms.
struct FlopCount {
  std::uint64_t mults = 0;
  std::uint64_t adds = 0;
};

inline FlopCount detector_flops(Detector kind, std::uint64_t L,
                                std::uint64_t nt, std::uint64_t M) {
  if (L < 1 || nt < 1 || M < 1)
    throw std::invalid_argument("L, N_t, M must all be >= 1");
  const std::uint64_t cand_m = 3 * L + 5;  // mults per scored candidate
  const std::uint64_t cand_a = 2 * L + 1;  // adds per scored candidate
  switch (kind) {
    case Detector::ml:
      return {cand_m * nt * M, cand_a * nt * M};
    case Detector::tsml:
      return {cand_m * (nt + M), cand_a * (nt + M)};
    case Detector::gd:
      return {2 * nt + cand_m * M, nt + cand_a * M};
  }
  throw std::logic_error("unreachable detector kind");
}

}  // namespace rissm
