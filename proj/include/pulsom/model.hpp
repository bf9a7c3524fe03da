#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "pulsom/lin_som.hpp"
#include "pulsom/rssom.hpp"
#include "pulsom/ssom.hpp"

namespace pulsom {

enum class ModelType { Som, Ssom, Rssom, Lin };

std::string_view to_string(ModelType type);  // "SOM", "SSOM", "RSSOM", "LIN"
ModelType parse_model_type(std::string_view name);  // case-insensitive

struct ModelParams {
  ModelType type = ModelType::Som;
  std::size_t rows = 8;
  std::size_t cols = 8;
  Schedule schedule = Schedule::for_lattice(8, 8);
  StdpRule stdp;
  SpikingParams spiking;
  double alpha = 0.5;
  double lambda = 0.5;
  bool scale_input_by_lambda = false;
  bool concat = false;  // plain SOM only: one vector per sequence (frames concatenated)
};

/// A trained map plus everything needed to run it on new sequences.
struct Model {
  ModelParams params;
  Lattice lattice;
  FeatureRange range;  // spiking models only; weights live in normalised space
};

/// Collapse each sequence into a single frame holding all frames back to back.
std::vector<SequenceSample> concat_frames(const std::vector<SequenceSample>& data);

/// Initialise and train a model of `params.type` on `data`.
Model train_model(const ModelParams& params, const std::vector<SequenceSample>& data,
                  std::uint64_t seed, TrainingLog* log = nullptr);

/// Winner of every frame of `sample`, running the model's state without learning.
/// A frame where every unit stays silent yields std::nullopt.
std::vector<std::optional<UnitIndex>> frame_winners(const Model& model,
                                                    const SequenceSample& sample);

/// Lattice format followed by `key value...` trailer lines: model type,
/// feature range, schedule, STDP rule and variant parameters.
void save_model(std::ostream& out, const Model& model);
Model load_model(std::istream& in);

}  // namespace pulsom
