#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pulsom/ssom.hpp"

namespace pulsom {

/// Leaky-integrator potentials a_i, one per unit. Potentials never exceed zero.
class PotentialState {
 public:
  PotentialState(const Lattice& lattice, double lambda, bool scale_input_by_lambda = false);

  double lambda() const { return lambda_; }
  bool scale_input_by_lambda() const { return scale_input_; }
  std::size_t units() const { return a_.size(); }
  /// Frames integrated since the last reset.
  std::size_t frames_seen() const { return frames_; }

  std::span<const double> potentials() const { return a_; }
  double potential(std::size_t unit) const { return a_[unit]; }

  UnitIndex unit(std::size_t flat) const { return {flat / cols_, flat % cols_, flat}; }

  /// Largest |a_i| reachable after frames_seen() frames with per-frame penalty at most `max_penalty`.
  double penalty_bound(double max_penalty) const;

 private:
  friend void update_potential(std::span<const double>, const Lattice&, PotentialState&);
  friend void reset_potentials(PotentialState&);

  std::size_t cols_;
  double lambda_;
  bool scale_input_;
  std::size_t frames_ = 0;
  std::vector<double> a_;
};

/// a_i <- lambda a_i - 1/2 |x - w_i|^2  (input term scaled by lambda when configured).
void update_potential(std::span<const double> x, const Lattice& lattice, PotentialState& state);

/// Unit with the largest potential; lowest flat index on ties.
UnitIndex lin_bmu(const PotentialState& state);

void reset_potentials(PotentialState& state);

/// Latency from potential: t_i = t_max * (-a_i) / (largest attainable |a| so far).
/// Expects inputs and weights in [0, 1].
FiringRecord lin_firing_times(const PotentialState& state, const Lattice& lattice,
                              const SsomConfig& cfg);

/// Leaky-integrator SOM. Potentials reset at every sequence; each frame's
/// most-excited unit drives gated STDP toward the current frame.
TrainingLog train_lin(const std::vector<SequenceSample>& data, Lattice& lattice,
                      const Schedule& schedule, const SpikingParams& params, const StdpRule& rule,
                      const FeatureRange& range, double lambda, bool scale_input_by_lambda,
                      std::uint64_t seed);

}  // namespace pulsom
