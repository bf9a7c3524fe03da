#include "pulsom/rssom.hpp"

#include <algorithm>
#include <cmath>

#include "pulsom/detail/spiking_driver.hpp"
#include "pulsom/error.hpp"

namespace pulsom {

DifferenceState::DifferenceState(const Lattice& lattice, double alpha)
    : rows_(lattice.rows()),
      cols_(lattice.cols()),
      dim_(lattice.dim()),
      alpha_(alpha),
      y_(lattice.size() * lattice.dim(), 0.0) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("leaking coefficient must lie in (0, 1]");
}

std::vector<double> DifferenceState::squared_norms() const {
  std::vector<double> out(units());
  for (std::size_t i = 0; i < units(); ++i) {
    double sum = 0.0;
    for (double v : y(i)) sum += v * v;
    out[i] = sum;
  }
  return out;
}

void update_difference(std::span<const double> x, const Lattice& lattice, DifferenceState& state) {
  if (x.size() != lattice.dim()) throw DimensionError(lattice.dim(), x.size());
  if (state.dim() != lattice.dim()) throw DimensionError(lattice.dim(), state.dim());
  if (state.units() != lattice.size()) throw DimensionError(lattice.size(), state.units());
  const double a = state.alpha();
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const auto m = lattice.weight(i);
    auto y = state.y(i);
    for (std::size_t k = 0; k < y.size(); ++k) y[k] = (1.0 - a) * y[k] + a * (x[k] - m[k]);
  }
}

UnitIndex rsom_bmu(const DifferenceState& state) {
  const std::vector<double> norms = state.squared_norms();
  const auto it = std::min_element(norms.begin(), norms.end());
  return state.unit(static_cast<std::size_t>(it - norms.begin()));
}

void rsom_update(Lattice& lattice, const DifferenceState& state, UnitIndex bmu, double lr,
                 double radius) {
  if (state.dim() != lattice.dim()) throw DimensionError(lattice.dim(), state.dim());
  if (lr < 0.0 || lr > 1.0) throw DomainError("learning rate must lie in [0, 1]");
  if (lr == 0.0) return;
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const double h = neighborhood(lattice.grid_distance(i, bmu.flat), radius);
    if (h == 0.0) continue;
    auto m = lattice.weight(i);
    const auto y = state.y(i);
    for (std::size_t k = 0; k < m.size(); ++k) m[k] += lr * h * y[k];
  }
}

void reset_state(DifferenceState& state) {
  for (std::size_t i = 0; i < state.units(); ++i) std::ranges::fill(state.y(i), 0.0);
}

FiringRecord rssom_firing_times(const DifferenceState& state, const Lattice& lattice,
                                const SsomConfig& cfg) {
  const std::vector<double> norms = state.squared_norms();
  return firing_from_scores(norms, 1.0 / static_cast<double>(lattice.dim()), lattice, cfg);
}

namespace {

class RssomStepper {
 public:
  RssomStepper(const Lattice& lattice, double alpha) : state_(lattice, alpha) {}

  void reset() { reset_state(state_); }

  FiringRecord fire(const EncodedInput& e, const Lattice& lattice, const SsomConfig& cfg) {
    update_difference(decode_latency(e), lattice, state_);
    return rssom_firing_times(state_, lattice, cfg);
  }

  // The multiplicative law moves w toward x_i; aiming it at w + y makes the
  // step follow the difference vector.
  double target(std::size_t unit, std::size_t k, const EncodedInput&, const Lattice& lattice) const {
    return lattice.weight(unit)[k] + state_.y(unit)[k];
  }

  void end_of_sequence(int) const {}

 private:
  DifferenceState state_;
};

}  // namespace

TrainingLog train_rssom(const std::vector<SequenceSample>& data, Lattice& lattice,
                        const Schedule& schedule, const SpikingParams& params,
                        const StdpRule& rule, const FeatureRange& range, double alpha,
                        std::uint64_t seed) {
  RssomStepper stepper(lattice, alpha);
  return detail::run_spiking_training(data, lattice, schedule, params, rule, range, seed, stepper);
}

}  // namespace pulsom
