#pragma once

#include <string>
#include <string_view>

namespace pulsom {

/// Exponential plasticity window parameters. Time constants are in ms.
struct StdpWindow {
  double a_plus = 1.0;
  double a_minus = 1.0;
  double tau_plus = 10.0;
  double tau_minus = 10.0;

  void validate() const;
};

enum class StdpVariant { Additive, Panchev, Soula, Multiplicative };

std::string_view to_string(StdpVariant variant);
StdpVariant parse_stdp_variant(std::string_view name);

struct StdpRule {
  StdpVariant variant = StdpVariant::Multiplicative;
  double eta = 0.1;
  double w_max = 1.0;
  StdpWindow window;
  // When true, the target-seeking form ((1 - w) or (x - w)) applies on the
  // causal side (delta_t < 0, where the window is positive) and the
  // weight-proportional form on delta_t > 0. When false, the branches follow
  // the printed convention (target-seeking form on delta_t > 0).
  bool flip_branches = true;

  void validate() const;
};

/// Pre/post spike pair; delta_t = t_pre - t_post.
struct SpikePair {
  double t_pre = 0.0;
  double t_post = 0.0;

  double delta_t() const { return t_pre - t_post; }
};

/// Which algebraic form of the multiplicative rules is used for a spike pair.
enum class UpdateForm {
  TowardTarget,  // w + eta F (1 - w)  or  w + eta F (x_i - w)
  Proportional,  // w + eta F w
};

/// Window value F(delta_t): A+ exp(dt/tau+) for dt < 0, -A- exp(-dt/tau-) for dt > 0, F(0) = 0.
double window_value(double delta_t, const StdpWindow& window);

UpdateForm form_for(double delta_t, bool flip_branches);

/// w + f clamped to [0, w_max].
double additive_update(double w, double f, double w_max);

// The *_step functions take the window value directly; the *_update
// functions evaluate the window from delta_t and pick the branch.

double panchev_step(double w, double f, double eta, UpdateForm form);
double panchev_update(double w, double delta_t, const StdpRule& rule);

/// w + f w (1 - w / w_max). No learning rate appears in this law.
double soula_step(double w, double f, double w_max);
double soula_update(double w, double delta_t, const StdpRule& rule);

/// Target-seeking multiplicative law; result clamped to [0, w_max].
double multiplicative_step(double w, double x_i, double f, double eta, double w_max, UpdateForm form);
double multiplicative_update(double w, double x_i, double delta_t, const StdpRule& rule);

/// Apply the configured rule with its learning rate multiplied by `eta_scale`.
/// For the additive and Soula laws, which carry no learning rate, the window
/// value itself is scaled.
double apply_stdp(double w, double x_i, double delta_t, const StdpRule& rule, double eta_scale);

}  // namespace pulsom
