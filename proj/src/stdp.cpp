#include "pulsom/stdp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pulsom/error.hpp"

namespace pulsom {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string(what) + " must be finite");
}

}  // namespace

void StdpWindow::validate() const {
  for (double v : {a_plus, a_minus, tau_plus, tau_minus}) {
    if (!std::isfinite(v) || v <= 0.0)
      throw DomainError("STDP window parameters must be positive and finite");
  }
}

void StdpRule::validate() const {
  window.validate();
  if (!(eta > 0.0 && eta <= 1.0)) throw DomainError("STDP eta must lie in (0, 1]");
  if (!(w_max > 0.0) || !std::isfinite(w_max)) throw DomainError("STDP w_max must be positive");
}

std::string_view to_string(StdpVariant variant) {
  switch (variant) {
    case StdpVariant::Additive: return "additive";
    case StdpVariant::Panchev: return "panchev";
    case StdpVariant::Soula: return "soula";
    case StdpVariant::Multiplicative: return "multiplicative";
  }
  return "unknown";
}

StdpVariant parse_stdp_variant(std::string_view name) {
  if (name == "additive") return StdpVariant::Additive;
  if (name == "panchev") return StdpVariant::Panchev;
  if (name == "soula") return StdpVariant::Soula;
  if (name == "multiplicative") return StdpVariant::Multiplicative;
  throw DomainError("unknown STDP variant '" + std::string(name) + "'");
}

double window_value(double delta_t, const StdpWindow& window) {
  require_finite(delta_t, "delta_t");
  if (delta_t < 0.0) return window.a_plus * std::exp(delta_t / window.tau_plus);
  if (delta_t > 0.0) return -window.a_minus * std::exp(-delta_t / window.tau_minus);
  return 0.0;
}

UpdateForm form_for(double delta_t, bool flip_branches) {
  const bool positive = delta_t > 0.0;
  return positive != flip_branches ? UpdateForm::TowardTarget : UpdateForm::Proportional;
}

double additive_update(double w, double f, double w_max) {
  require_finite(w, "weight");
  require_finite(f, "window value");
  return std::clamp(w + f, 0.0, w_max);
}

double panchev_step(double w, double f, double eta, UpdateForm form) {
  if (!(w >= 0.0 && w <= 1.0)) throw DomainError("Panchev rule needs w in [0, 1]");
  require_finite(f, "window value");
  const double next = form == UpdateForm::TowardTarget ? w + eta * f * (1.0 - w) : w + eta * f * w;
  return std::clamp(next, 0.0, 1.0);
}

double panchev_update(double w, double delta_t, const StdpRule& rule) {
  return panchev_step(w, window_value(delta_t, rule.window), rule.eta,
                      form_for(delta_t, rule.flip_branches));
}

double soula_step(double w, double f, double w_max) {
  if (!(w >= 0.0 && w <= w_max)) throw DomainError("Soula rule needs w in [0, w_max]");
  require_finite(f, "window value");
  return w + f * w * (1.0 - w / w_max);
}

double soula_update(double w, double delta_t, const StdpRule& rule) {
  return soula_step(w, window_value(delta_t, rule.window), rule.w_max);
}

double multiplicative_step(double w, double x_i, double f, double eta, double w_max, UpdateForm form) {
  require_finite(w, "weight");
  require_finite(x_i, "input");
  require_finite(f, "window value");
  const double next = form == UpdateForm::TowardTarget ? w + eta * f * (x_i - w) : w + eta * f * w;
  return std::clamp(next, 0.0, w_max);
}

double multiplicative_update(double w, double x_i, double delta_t, const StdpRule& rule) {
  return multiplicative_step(w, x_i, window_value(delta_t, rule.window), rule.eta, rule.w_max,
                    form_for(delta_t, rule.flip_branches));
}

double apply_stdp(double w, double x_i, double delta_t, const StdpRule& rule, double eta_scale) {
  const double f = window_value(delta_t, rule.window);
  const UpdateForm form = form_for(delta_t, rule.flip_branches);
  switch (rule.variant) {
    case StdpVariant::Additive: return additive_update(w, eta_scale * f, rule.w_max);
    case StdpVariant::Panchev: return panchev_step(w, f, rule.eta * eta_scale, form);
    case StdpVariant::Soula: return soula_step(w, eta_scale * f, rule.w_max);
    case StdpVariant::Multiplicative:
      return multiplicative_step(w, x_i, f, rule.eta * eta_scale, rule.w_max, form);
  }
  return w;
}

}  // namespace pulsom
