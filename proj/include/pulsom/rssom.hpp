#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pulsom/ssom.hpp"

namespace pulsom {

/// Leaky difference vectors y_i, one per unit.
class DifferenceState {
 public:
  DifferenceState(const Lattice& lattice, double alpha);

  double alpha() const { return alpha_; }
  std::size_t units() const { return rows_ * cols_; }
  std::size_t dim() const { return dim_; }

  std::span<double> y(std::size_t unit) { return {y_.data() + unit * dim_, dim_}; }
  std::span<const double> y(std::size_t unit) const { return {y_.data() + unit * dim_, dim_}; }

  UnitIndex unit(std::size_t flat) const { return {flat / cols_, flat % cols_, flat}; }

  /// Squared norm of each unit's difference vector.
  std::vector<double> squared_norms() const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::size_t dim_;
  double alpha_;
  std::vector<double> y_;
};

/// y_i <- (1 - alpha) y_i + alpha (x - m_i) for every unit.
void update_difference(std::span<const double> x, const Lattice& lattice, DifferenceState& state);

/// Unit with the smallest |y_i|; lowest flat index on ties.
UnitIndex rsom_bmu(const DifferenceState& state);

/// m_i += lr * h(d(i, bmu), radius) * y_i.
void rsom_update(Lattice& lattice, const DifferenceState& state, UnitIndex bmu, double lr,
                 double radius);

void reset_state(DifferenceState& state);

/// Spiking winner selection over difference magnitudes: t_i = t_max |y_i|^2 / dim.
FiringRecord rssom_firing_times(const DifferenceState& state, const Lattice& lattice,
                                const SsomConfig& cfg);

/// Recurrent spiking SOM. State resets at every sequence; each frame updates
/// the difference vectors, picks the earliest-firing unit, and applies gated
/// STDP whose step direction follows y_i.
TrainingLog train_rssom(const std::vector<SequenceSample>& data, Lattice& lattice,
                        const Schedule& schedule, const SpikingParams& params,
                        const StdpRule& rule, const FeatureRange& range, double alpha,
                        std::uint64_t seed);

}  // namespace pulsom
