#pragma once

#include <string>
#include <vector>

namespace pulsom {

using Vector = std::vector<double>;

/// An ordered list of fixed-dimension feature frames with its class label.
struct SequenceSample {
  std::vector<Vector> frames;
  std::string label;
  std::string macro_class;  // empty when not applicable
  std::string utt_id;
  bool replicated = false;  // edge frames were replicated to reach the frame count
};

/// All frames of all samples, in order.
std::vector<Vector> flatten_frames(const std::vector<SequenceSample>& data);

}  // namespace pulsom
