#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "corrlab/errors.hpp"
#include "corrlab/falloff.hpp"
#include "corrlab/four_vector.hpp"

namespace corrlab {

using cplx = std::complex<double>;

/// Mass-shell packet chi(p) exp(-gamma tau |p - pbar|^2) on the positive
/// energy sheet. chi is the smooth bump with plateau radius r1 and support
/// radius r2 around the spatial part of pbar.
struct MomentumWavePacket {
  double mass = 1.0;
  FourVector pbar{1.0, 0.0, 0.0, 0.0};
  double gamma = 0.0;
  double r1 = 0.5;
  double r2 = 1.0;
  int spatial_dim = 3;
  double amplitude = 1.0;

  /// Throws ComputeError when an invariant fails (pbar off shell, bad radii,
  /// support reaching p = 0 while pbar is not at rest, ...).
  void validate() const;
  /// chi times amplitude at spatial momentum p (components beyond
  /// spatial_dim ignored).
  double chi(const std::array<double, 3>& p) const;
};

struct QuadratureOptions {
  int order = 16;                 // Gauss points per panel
  double nodes_per_period = 16.0;
  int min_panels = 32;            // per radial segment
  long max_nodes = 4'000'000;     // above this the call fails with a recommendation
  double refine = 1.0;            // multiplies every node count
};

/// Psi(x) = int d^dp / ((2 pi)^d 2 omega) chi(p) exp(-gamma tau |p-pbar|^2)
///          exp(-i (omega x0 - p.x)).
cplx evaluate_position(const MomentumWavePacket& packet, const FourVector& x, double tau,
                       const QuadratureOptions& q = {});

/// Pointwise modulus bound: the same integral without the phase.
double position_bound(const MomentumWavePacket& packet, double tau, const QuadratureOptions& q = {});

/// 2m (2 pi i tau / m)^exponent exp(i m tau), principal branch.
cplx oncone_normalizer(double m, double tau, double exponent);

struct ConvergenceReport {
  std::vector<double> taus;
  std::vector<cplx> values;  // f(m, tau) Psi(v tau)
  cplx target;
  std::vector<double> relative_errors;
  double final_window_error = 0.0;  // max over tau >= tau_max / 10
  bool converged = false;
};

/// Requires gamma = 0, v^2 = 1 and m v inside the plateau of chi.
ConvergenceReport oncone_limit_check(const MomentumWavePacket& packet, const FourVector& v,
                                     const std::vector<double>& taus, double exponent = 1.5,
                                     const QuadratureOptions& q = {});

struct FalloffSeries {
  std::vector<double> taus;
  std::vector<double> magnitudes;
  FalloffFit fit;
};

/// |Psi(u tau)| over the grid with the packet's gamma, then fit_falloff.
FalloffSeries falloff_fit(const MomentumWavePacket& packet, const FourVector& u, const std::vector<double>& taus,
                          const FitOptions& fit = {}, const QuadratureOptions& q = {});

class HoleExcludedError : public ComputeError {
 public:
  using ComputeError::ComputeError;
};

struct Certificate {
  bool granted = false;
  std::string reason;           // empty when granted
  double max_imag_shift = 0.0;  // max |Im q| over the distorted region
  std::optional<std::array<double, 3>> violating_q;
};

struct CertificateOptions {
  double eps_hole = 1e-3;
  int grid = 41;  // points per axis over the disc q^2 < alpha
};

/// Solves Re[gamma q.q + i(q.u - u0(omega(q) - m))] = alpha gamma for the
/// imaginary shift of q along u at each real q with q^2 < alpha. The packet
/// must be at rest (pbar spatial = 0) with gamma > 0.
Certificate contour_certificate(const MomentumWavePacket& packet, const FourVector& u, double alpha_target,
                                const CertificateOptions& opts = {});

}  // namespace corrlab
