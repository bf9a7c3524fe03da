#include "pulsom/lin_som.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pulsom/detail/spiking_driver.hpp"
#include "pulsom/error.hpp"

namespace pulsom {

PotentialState::PotentialState(const Lattice& lattice, double lambda, bool scale_input_by_lambda)
    : cols_(lattice.cols()),
      lambda_(lambda),
      scale_input_(scale_input_by_lambda),
      a_(lattice.size(), 0.0) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("memory depth must lie in [0, 1]");
}

double PotentialState::penalty_bound(double max_penalty) const {
  // max_penalty * (1 + lambda + ... + lambda^(n-1))
  double bound = 0.0;
  double factor = 1.0;
  for (std::size_t t = 0; t < frames_; ++t) {
    bound += factor;
    factor *= lambda_;
  }
  return max_penalty * (scale_input_ ? lambda_ : 1.0) * bound;
}

void update_potential(std::span<const double> x, const Lattice& lattice, PotentialState& state) {
  if (x.size() != lattice.dim()) throw DimensionError(lattice.dim(), x.size());
  if (state.units() != lattice.size()) throw DimensionError(lattice.size(), state.units());
  const double gain = state.scale_input_ ? state.lambda_ : 1.0;
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const double input = -0.5 * gain * squared_distance(x, lattice.weight(i));
    state.a_[i] = state.lambda_ * state.a_[i] + input;
  }
  ++state.frames_;
}

UnitIndex lin_bmu(const PotentialState& state) {
  const auto a = state.potentials();
  const auto it = std::max_element(a.begin(), a.end());
  return state.unit(static_cast<std::size_t>(it - a.begin()));
}

void reset_potentials(PotentialState& state) {
  std::ranges::fill(state.a_, 0.0);
  state.frames_ = 0;
}

FiringRecord lin_firing_times(const PotentialState& state, const Lattice& lattice,
                              const SsomConfig& cfg) {
  const double bound = state.penalty_bound(0.5 * static_cast<double>(lattice.dim()));
  std::vector<double> scores(state.units());
  for (std::size_t i = 0; i < scores.size(); ++i) scores[i] = -state.potential(i);
  if (bound <= 0.0) {
    // Nothing integrated yet (or a zero input gain): every unit fires at once.
    return firing_from_scores(scores, 0.0, lattice, cfg);
  }
  return firing_from_scores(scores, 1.0 / bound, lattice, cfg);
}

namespace {

class LinStepper {
 public:
  LinStepper(const Lattice& lattice, double lambda, bool scale_input)
      : state_(lattice, lambda, scale_input) {}

  void reset() { reset_potentials(state_); }

  FiringRecord fire(const EncodedInput& e, const Lattice& lattice, const SsomConfig& cfg) {
    input_ = decode_latency(e);
    update_potential(input_, lattice, state_);
    return lin_firing_times(state_, lattice, cfg);
  }

  double target(std::size_t, std::size_t k, const EncodedInput&, const Lattice&) const {
    return input_[k];
  }

  void end_of_sequence(int epoch) const {
    const double bound = state_.penalty_bound(0.5 * static_cast<double>(input_.size()));
    for (double a : state_.potentials()) {
      if (!std::isfinite(a) || a > 0.0 || -a > bound * (1.0 + 1e-12))
        throw DivergenceError(epoch, "leaky-integrator potential out of bounds");
    }
  }

 private:
  PotentialState state_;
  Vector input_;
};

}  // namespace

TrainingLog train_lin(const std::vector<SequenceSample>& data, Lattice& lattice,
                      const Schedule& schedule, const SpikingParams& params, const StdpRule& rule,
                      const FeatureRange& range, double lambda, bool scale_input_by_lambda,
                      std::uint64_t seed) {
  LinStepper stepper(lattice, lambda, scale_input_by_lambda);
  return detail::run_spiking_training(data, lattice, schedule, params, rule, range, seed, stepper);
}

}  // namespace pulsom
