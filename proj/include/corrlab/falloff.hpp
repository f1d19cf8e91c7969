#pragma once

#include <string_view>
#include <vector>

namespace corrlab {

enum class FalloffKind { power, exponential, superpoly };

std::string_view to_string(FalloffKind k);

struct WindowExponent {
  double tau = 0.0;  // geometric centre of the window
  double exponent = 0.0;
};

/// Fitted decay law of a magnitude sequence m(tau). Three models are fitted
/// to log m:
///   power        c - beta log tau
///   exponential  c - beta log tau - rate tau
///   superpoly    c - beta log tau - s sqrt(tau)
struct FalloffFit {
  FalloffKind kind = FalloffKind::power;
  // Power exponent beta (power kind), decay rate per unit tau (exponential
  // kind), or the last windowed exponent (superpoly kind).
  double exponent_or_rate = 0.0;
  double C = 0.0;                // exp(c) of the selected model
  double alpha = 0.0;            // rate / gamma, exponential kind with gamma > 0
  double prefactor_power = 0.0;  // beta of the selected model
  double stretched_coefficient = 0.0;
  // Plain exponential C exp(-rate tau) without the power prefactor.
  double raw_rate = 0.0;
  double raw_C = 0.0;
  double residual = 0.0;  // max |log m - model| of the selected model
  double power_residual = 0.0;
  double exponential_residual = 0.0;
  double superpoly_residual = 0.0;
  double tau_min = 0.0;
  double tau_max = 0.0;
  std::vector<WindowExponent> windows;
  bool windows_increasing = false;
  bool underflow = false;  // every magnitude below 1e-300; nothing fitted
};

struct FitOptions {
  double power_tol = 0.05;  // power kind accepted below this log residual
  double fit_tol = 0.25;    // exponential kind requires a residual below this
  int window = 5;           // points per window for local exponents
};

FalloffFit fit_falloff(const std::vector<double>& taus, const std::vector<double>& magnitudes, double gamma,
                       const FitOptions& opts = {});

}  // namespace corrlab
