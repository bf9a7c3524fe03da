#include <cmath>
#include <random>

#include "pulsom/corpus.hpp"
#include "pulsom/som.hpp"

namespace pulsom {

void SynthSpec::validate() const {
  if (n_classes == 0 && !order_task) throw DomainError("need at least one class");
  if (samples_per_class == 0) throw DomainError("need at least one sample per class");
  if (dim == 0 || frames == 0) throw DomainError("dim and frames must be positive");
  if (!(separation > 0.0) || !std::isfinite(separation))
    throw DomainError("separation must be positive");
  if (order_task && frames < 3) throw DomainError("the order task needs at least three frames");
}

std::string synth_label(std::size_t cls) { return "c" + std::to_string(cls); }

std::vector<std::vector<Vector>> synth_class_means(const SynthSpec& spec) {
  spec.validate();
  // Mean placement and sample noise draw from separate streams so that adding
  // samples never moves the class means.
  std::mt19937_64 rng(spec.seed);
  double spread = spec.separation / 2.0;

  const std::size_t n_classes = spec.order_task ? 2 : spec.n_classes;
  const std::size_t distinct = spec.order_task ? spec.frames - 1 : n_classes * spec.frames;
  std::vector<Vector> means;
  std::size_t failures = 0;
  while (means.size() < distinct) {
    std::normal_distribution<double> gauss(0.0, spread);
    Vector m(spec.dim);
    for (double& v : m) v = gauss(rng);
    bool far = true;
    for (const auto& other : means) {
      if (squared_distance(m, other) < spec.separation * spec.separation) {
        far = false;
        break;
      }
    }
    if (far) {
      means.push_back(std::move(m));
    } else if (++failures % 1000 == 0) {
      spread *= 1.5;
    }
  }

  std::vector<std::vector<Vector>> classes(n_classes);
  if (spec.order_task) {
    // m_1 .. m_{F-1}, m_1: both orders start and end on the same mean.
    std::vector<Vector> forward(means.begin(), means.end());
    forward.push_back(means.front());
    classes[0] = forward;
    classes[1].assign(forward.rbegin(), forward.rend());
  } else {
    for (std::size_t c = 0; c < n_classes; ++c) {
      classes[c].assign(means.begin() + static_cast<std::ptrdiff_t>(c * spec.frames),
                        means.begin() + static_cast<std::ptrdiff_t>((c + 1) * spec.frames));
    }
  }
  return classes;
}

std::vector<SequenceSample> synth_generate(const SynthSpec& spec, std::uint64_t stream) {
  const auto classes = synth_class_means(spec);
  std::mt19937_64 rng(spec.seed ^ 0xD1B54A32D192ED03ULL ^ (stream * 0x9E3779B97F4A7C15ULL));
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<SequenceSample> out;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    for (std::size_t s = 0; s < spec.samples_per_class; ++s) {
      SequenceSample sample;
      sample.label = synth_label(c);
      sample.utt_id = "synth/" + sample.label + "/" + std::to_string(s);
      for (const auto& mean : classes[c]) {
        Vector frame(mean);
        for (double& v : frame) v += noise(rng);
        sample.frames.push_back(std::move(frame));
      }
      out.push_back(std::move(sample));
    }
  }
  return out;
}

}  // namespace pulsom
