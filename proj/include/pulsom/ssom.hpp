#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pulsom/som.hpp"
#include "pulsom/spike_codec.hpp"
#include "pulsom/stdp.hpp"

namespace pulsom {

/// Mexican-hat lateral interaction acting on firing times within one presentation.
struct LateralKernel {
  double excite_radius = 0.0;  // lattice units; 0 tracks the schedule radius during training
  double excite_gain = 0.5;
  double inhibit_gain = 0.1;

  void validate() const;
};

/// Per-unit firing times of one presentation; std::nullopt marks a silent unit.
struct FiringRecord {
  std::vector<std::optional<double>> times;
  std::optional<UnitIndex> winner;
};

/// Timing and lateral parameters shared by the spiking variants.
struct SpikingParams {
  SsomConfig timing;
  LateralKernel lateral;
};

/// Firing times t_i = t_max * score_i * scale, silent beyond t_ref. The winner
/// is the non-silent unit with the smallest raw score (lowest flat index on ties).
FiringRecord firing_from_scores(std::span<const double> scores, double scale,
                                const Lattice& lattice, const SsomConfig& cfg);

/// Distance-proportional latency t_i = t_max * |v - w_i|^2 / dim on normalised inputs.
FiringRecord compute_firing_times(const EncodedInput& e, const Lattice& lattice,
                                  const SsomConfig& cfg);

/// Pull nearby units' firing times toward the winner's and delay remote ones.
FiringRecord apply_lateral(const FiringRecord& record, const Lattice& lattice,
                           const LateralKernel& kernel, const SsomConfig& cfg);

/// Post-synaptic spike time used for plasticity. The output layer's clock
/// starts once the input volley (of length t_max) has been delivered.
inline double post_spike_time(double firing_time, const SsomConfig& cfg) {
  return cfg.t_max + firing_time;
}

/// STDP learning inside the spatial area S (cfg.s_radius) and temporal window T (cfg.t_ref).
void ssom_learn(const EncodedInput& e, Lattice& lattice, const FiringRecord& record,
                const SsomConfig& cfg, const StdpRule& rule, double lr_scale);

/// Spiking-SOM training over sequences, frame by frame, with no state between frames.
/// The lattice holds normalised weights in [0, 1]; the log's quantization
/// error is measured on the decoded weights in feature space.
TrainingLog train_ssom(const std::vector<SequenceSample>& data, Lattice& lattice,
                       const Schedule& schedule, const SpikingParams& params,
                       const StdpRule& rule, const FeatureRange& range, std::uint64_t seed);

/// Lattice with each weight mapped back from [0, 1] into feature space.
Lattice decode_lattice(const Lattice& normalized, const FeatureRange& range);

}  // namespace pulsom
