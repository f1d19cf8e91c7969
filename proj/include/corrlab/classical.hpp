#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "corrlab/diagram.hpp"
#include "corrlab/falloff.hpp"
#include "corrlab/four_vector.hpp"
#include "corrlab/wavepacket.hpp"

namespace corrlab {

using Vec3 = std::array<double, 3>;

enum class ProfileKind { gaussian, compact };

/// One-dimensional density factor. Gaussian: N(mean, width^2), width 0 is a
/// point mass. Compact: smooth bump on [mean - width, mean + width] with
/// plateau half-width width / 2.
struct AxisProfile {
  ProfileKind kind = ProfileKind::gaussian;
  double mean = 0.0;
  double width = 1.0;

  double density(double x) const;
};

/// rho(x, p) = prod_a rho_x,a(x_a) * rho_p(p). The momentum factor is either a
/// product of axis profiles or, when `packet` is set, |chi(p)|^2 of the packet
/// normalized to one.
struct PhaseSpaceDensity {
  double mass = 1.0;
  std::array<AxisProfile, 3> position{};
  std::array<AxisProfile, 3> momentum{};
  std::optional<MomentumWavePacket> packet;

  /// Throws ComputeError for m <= 0, negative widths, or a compact profile of
  /// zero width.
  void validate() const;
  double position_density(const Vec3& x) const;
  double momentum_density(const Vec3& p) const;
};

/// Test density of the Gaussian packet class at scale tau: x ~ N(0, gamma tau)
/// and p ~ N(pbar, 1 / (4 gamma tau)) per axis.
PhaseSpaceDensity gaussian_packet_density(double mass, const Vec3& pbar, double gamma, double tau);

/// Deterministic point source: position x0 and momentum p0 exactly.
PhaseSpaceDensity point_density(double mass, const Vec3& x0, const Vec3& p0);

struct PhaseSample {
  Vec3 x{};
  Vec3 p{};
};

std::vector<PhaseSample> sample_density(const PhaseSpaceDensity& rho, int count, std::uint64_t seed);

/// x + t p / m.
Vec3 propagate_free(const PhaseSample& s, double t, double m);

/// (2m)^2 (2 pi)^3 rho_p(m u) rho_p(p) / |f(m, t)|^2 with f = oncone_normalizer.
double asymptotic_density(const PhaseSpaceDensity& rho, const Vec3& u, const Vec3& p, double t, double exponent = 1.5);

/// Position-space form: (2m)^2 (2 pi)^3 rho_p(m u) / |f(m, t)|^2, which is
/// (m/t)^3 rho_p(m u) for exponent 3/2.
double asymptotic_position_density(const PhaseSpaceDensity& rho, const Vec3& u, double t, double exponent = 1.5);

struct DensityEstimate {
  double density = 0.0;   // per unit position volume
  double probability = 0.0;
  double statistical_error = 0.0;  // on density
  int batches = 0;
};

/// Monte Carlo density of x(t) / t in the cube |x/t - u|_inf <= half_width,
/// converted to a density in x.
DensityEstimate classical_density(const PhaseSpaceDensity& rho, const Vec3& u, double t, double half_width, int count,
                                  std::uint64_t seed, int batches = 16);

struct OverlapPacket {
  PhaseSpaceDensity density;
  FourVector displacement;  // u_hat; the packet is centred on the event u_hat * tau
  Orientation orientation = Orientation::initial;
};

struct OverlapOptions {
  int batches = 16;
  bool importance = true;  // tilt Gaussian factors to the most likely overlapping configuration
  int descent_iters = 200;
};

struct OverlapEstimate {
  double probability = 0.0;
  double statistical_error = 0.0;
  double tau = 0.0;
  double region_radius = 0.0;
  bool upper_bound = false;  // no accepted sample: probability is a 95% bound
  bool weighted = false;     // importance weights were used
  long accepted = 0;
};

/// Probability that the straight trajectories of all packets (initial ones for
/// t >= u_hat_0 tau, final ones for t <= u_hat_0 tau) have events inside one
/// space-time ball of radius growth_c sqrt(tau).
OverlapEstimate overlap_probability(const std::vector<OverlapPacket>& packets, double tau, double growth_c, int count,
                                    std::uint64_t seed, const OverlapOptions& o = {});

/// Smallest max-distance from a common centre to the trajectories of one
/// sample set; exposed for tests.
double overlap_radius(const std::vector<OverlapPacket>& packets, const std::vector<PhaseSample>& samples, double tau,
                      int iters = 200);

struct ComparisonOptions {
  double power_tol = 0.2;  // absolute, on exponents
  double rate_tol = 0.25;  // relative, on exponential rates
};

struct ComparisonReport {
  bool kinds_match = false;
  FalloffKind classical_kind = FalloffKind::power;
  FalloffKind quantum_kind = FalloffKind::power;
  double classical_value = 0.0;
  double quantum_doubled = 0.0;
  double difference = 0.0;
  double relative_difference = 0.0;
  bool corresponds = false;
};

/// Classical probability fit against the quantum amplitude fit (doubled).
ComparisonReport correspondence_compare(const FalloffFit& classical, const FalloffFit& quantum,
                                        const ComparisonOptions& o = {});

}  // namespace corrlab
