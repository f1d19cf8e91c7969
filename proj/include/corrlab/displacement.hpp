#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "corrlab/errors.hpp"
#include "corrlab/landau.hpp"

namespace corrlab {

/// One point per external line, u_i on the straight line of line i.
struct DisplacementVector {
  std::vector<FourVector> components;

  Eigen::VectorXd flat() const;
  static DisplacementVector from_flat(const Eigen::VectorXd& v);
};

/// Translations (four) followed by one slide per external line.
struct GaugeBasis {
  std::vector<DisplacementVector> generators;
};

/// U with its gauge part removed. `projected` lives in the full 4n space;
/// `coords` are its 3n-4 coordinates in a fixed orthonormal complement.
struct ReducedU {
  Eigen::VectorXd projected;
  std::vector<double> coords;
  int gauge_rank = 0;
  std::string basis_fingerprint;
};

class NoRayError : public ComputeError {
 public:
  using ComputeError::ComputeError;
};

class UnsupportedError : public ComputeError {
 public:
  using ComputeError::ComputeError;
};

/// u_i = position of the vertex where external line i attaches.
DisplacementVector compute_U(const Realization& r, const Diagram& d, const KConfiguration& k);

GaugeBasis gauge_basis(const KConfiguration& k);

/// Euclidean projection onto the complement of span(basis).
/// Throws ComputeError when the generators are rank deficient.
ReducedU reduce_mod_gauge(const DisplacementVector& u, const GaugeBasis& basis);

/// Lorentz pairing summed over external slots, matching the phase K.U.
double lorentz_pairing(const Eigen::VectorXd& u, const Eigen::VectorXd& t);

/// max over t of |<U,t>| / (|U| |t|), Euclidean norms in the denominator.
double normality_check(const Eigen::VectorXd& u, const std::vector<Eigen::VectorXd>& tangents);

/// Finite-difference tangents (K part only) of the Landau surface of `d`
/// through `state`, from symmetric projections of random K perturbations.
std::vector<Eigen::VectorXd> surface_tangents(const Diagram& d, const SurfaceState& state, int count,
                                              std::uint64_t seed, double h = 1e-5);

/// The diagram with every internal line shrunk away: one vertex carrying all
/// external lines. Its Landau surface is the mass-shell/conservation manifold.
Diagram contracted(const Diagram& d);

struct ConeRay {
  std::vector<double> direction;  // unit Euclidean norm, 3n-4 entries
  Eigen::VectorXd projected;      // unit-norm reduced U in 4n space
  std::string basis_fingerprint;
  int diagram = -1;                // catalog index
  bool opposite_infeasible = false;
};

/// Throws NoRayError when K is trivial for the catalog (or only contracted
/// realizations exist), UnsupportedError when feasible diagrams disagree.
ConeRay cone_ray(const std::vector<Diagram>& catalog, const KConfiguration& k, const SolverOptions& opts = {});

}  // namespace corrlab
