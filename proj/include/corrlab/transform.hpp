#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace corrlab {

using cplx = std::complex<double>;
using RVec = std::vector<double>;
using CVec = std::vector<cplx>;

enum class FormKind { bump, pole, log, grid };

std::string_view to_string(FormKind k);

/// F(q) = form(q) * envelope(|q|) in l = 1 or 2 dimensions. The pole and log
/// forms depend on the first component only: 1/(q1 - q0 + i eps) and
/// log(q1 - q0 + i eps). The grid form (l = 1) interpolates samples placed at
/// origin + i * spacing with Lagrange polynomials of degree interp_order.
struct ScatteringModelF {
  FormKind form = FormKind::bump;
  int dim = 1;
  double q0 = 0.0;
  double eps = 0.1;
  double r1 = 0.5;  // envelope plateau
  double r2 = 1.0;  // envelope support
  std::vector<double> samples;
  double origin = 0.0;
  double spacing = 0.0;
  int interp_order = 3;

  void validate() const;
  cplx operator()(const RVec& q) const;
  /// The form continued to complex q; equals F wherever the envelope is 1.
  cplx continuation(const CVec& q) const;
};

struct MuTerm {
  double coef = 0.0;
  std::vector<int> powers;  // one exponent per dimension
};

/// Polynomial mu(q) with mu(0) = 0 and mu >= 0 on the support.
struct MuForm {
  int dim = 1;
  std::vector<MuTerm> terms;

  /// sum_j c_j q_j^2.
  static MuForm quadratic(const std::vector<double>& c);

  cplx operator()(const CVec& q) const;
  double operator()(const RVec& q) const;
  /// Throws ComputeError for a constant term or a negative value on a grid
  /// over the ball of the given radius.
  void validate(double support_radius) const;
};

/// rho(q, q') with mu(q) - mu(q') = rho . (q - q'), built term by term from
/// telescoping differences; polynomial in (q, q').
CVec hefer_factor(const MuForm& mu, const CVec& q, const CVec& q2);

struct TransformOptions {
  int order = 16;
  double nodes_per_period = 16.0;
  int min_panels = 24;
};

/// T(v, r) = int dq F(q) exp(-r mu(q)) exp(-i q.v), Euclidean q.v.
cplx forward_T(const ScatteringModelF& F, const MuForm& mu, const RVec& v, double r, const TransformOptions& o = {});

/// Radial shortcut for l = 2 when F and mu are rotation invariant
/// (mu = c |q|^2): T = 2 pi int rho F(rho) exp(-r c rho^2) J0(rho |v|).
double forward_T_radial(const ScatteringModelF& F, double c, double vnorm, double r, const TransformOptions& o = {});

using VFunction = std::function<cplx(const RVec&)>;

struct VGrid {
  int dim = 1;
  double radius = 0.0;       // 0: chosen so that |T| at the edge < truncation_tol * peak
  double panel_width = 0.5;
  int order = 16;
  double truncation_tol = 1e-10;
  bool radial = false;       // l = 2 and T depends on |v| only
  double max_radius = 4000.0;
};

/// Smallest radius (growing geometrically from `start`) whose edge values of
/// |T| fall below tol * peak. Throws ComputeError past max_radius.
double choose_truncation(const VFunction& T, int dim, double tol, double start = 8.0, double max_radius = 4000.0);

struct InverseResult {
  cplx value;
  double radius = 0.0;
  double truncation = 0.0;  // max edge |T| / peak |T|
};

/// (2 pi)^-l int dv exp(i q.v) T(v) over the truncated box (real q).
InverseResult inverse_F(const VFunction& T, const RVec& q, const VGrid& grid = {});

/// Same for several q; T is sampled once on the shared v-grid.
std::vector<InverseResult> inverse_F(const VFunction& T, const std::vector<RVec>& qs, const VGrid& grid = {});

struct SplitOptions {
  double radius = 0.0;  // 0: grown until both integrands are negligible
  double panel_width = 0.5;
  double tail_tol = 1e-12;
  TransformOptions inner;
};

struct SplitResult {
  cplx F1;
  cplx F2;
  double radius = 0.0;
  double tail = 0.0;  // integrand modulus at the truncation edge
};

/// F1 = (2 pi)^-1 int dv e^{iqv} T(v, g|v|) e^{g|v| mu(q)},
/// F2 = g (2 pi)^-1 int dv e^{iqv} e^{g|v| mu(q)} sign(v) H(q, v, g|v|),
/// H(q, v, r) = -i int dq' F(q') e^{-iq'v} e^{-r mu(q')} rho(q, q').
/// l = 1. Throws ComputeError naming |v| when the integrands stop decaying.
SplitResult split_F(const ScatteringModelF& F, const MuForm& mu, double gamma0, cplx q, const SplitOptions& o = {});

/// Hole cap on the unit sphere of v-space. In l = 1 the cap is the single
/// direction `center` (+1 or -1) and `angle` is ignored.
struct HoleSpec {
  int dim = 1;
  double center = 1.0;  // l = 1: +1 or -1; l = 2: polar angle of the cap centre
  double angle = 0.1;   // l = 2 half-opening, 0 < angle < pi/2
};

struct ConeSplit {
  std::optional<cplx> F_H;  // omitted when Im q is outside Q
  cplx F_A;                 // evaluated at Re q
  bool convergent = false;
  std::string diagnostic;
};

/// Q: every v in the hole satisfies Im q . v > margin |Im q| |v|.
bool in_cone_Q(const HoleSpec& hole, const CVec& q, double margin);

ConeSplit cone_split(const VFunction& T, const HoleSpec& hole, const CVec& q, const VGrid& grid,
                     double margin = 0.05);

/// |df/dRe - df/(i dIm)| from a four-point stencil of half-width h.
double cauchy_riemann_residual(const std::function<cplx(cplx)>& f, cplx q, double h = 1e-4);

}  // namespace corrlab
