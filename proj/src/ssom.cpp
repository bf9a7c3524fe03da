#include "pulsom/ssom.hpp"

#include <algorithm>
#include <cmath>

#include "pulsom/detail/spiking_driver.hpp"
#include "pulsom/error.hpp"

namespace pulsom {

void LateralKernel::validate() const {
  if (excite_radius < 0.0) throw DomainError("excitatory radius must be non-negative");
  if (excite_gain < 0.0 || inhibit_gain < 0.0)
    throw DomainError("lateral gains must be non-negative");
}

FiringRecord firing_from_scores(std::span<const double> scores, double scale,
                                const Lattice& lattice, const SsomConfig& cfg) {
  if (scores.size() != lattice.size()) throw DimensionError(lattice.size(), scores.size());
  FiringRecord record;
  record.times.resize(scores.size());
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double t = cfg.t_max * scores[i] * scale;
    if (!std::isfinite(t) || t > cfg.t_ref) continue;
    record.times[i] = t;
    if (!best || scores[i] < scores[*best]) best = i;
  }
  if (best) record.winner = lattice.unit(*best);
  return record;
}

FiringRecord compute_firing_times(const EncodedInput& e, const Lattice& lattice,
                                  const SsomConfig& cfg) {
  if (e.spike_times.size() != lattice.dim())
    throw DimensionError(lattice.dim(), e.spike_times.size());
  if (e.t_max != cfg.t_max) throw DomainError("encoding horizon does not match t_max");
  const Vector v = decode_latency(e);
  std::vector<double> scores(lattice.size());
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const auto w = lattice.weight(i);
    double sum = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
      const double d = v[k] - std::clamp(w[k], 0.0, 1.0);
      sum += d * d;
    }
    scores[i] = sum;
  }
  return firing_from_scores(scores, 1.0 / static_cast<double>(lattice.dim()), lattice, cfg);
}

FiringRecord apply_lateral(const FiringRecord& record, const Lattice& lattice,
                           const LateralKernel& kernel, const SsomConfig& cfg) {
  if (!record.winner) throw DomainError("lateral interaction needs a winner");
  if (!(kernel.excite_radius > 0.0)) throw DomainError("excitatory radius must be positive");
  FiringRecord out = record;
  const std::size_t win = record.winner->flat;
  const double t_win = *record.times[win];
  const double r = kernel.excite_radius;
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    if (i == win || !record.times[i]) continue;
    const double t = *record.times[i];
    const double d = lattice.grid_distance(i, win);
    if (d <= r) {
      const double factor = std::clamp(kernel.excite_gain * std::exp(-d * d / (2.0 * r * r)), 0.0, 1.0);
      out.times[i] = factor == 1.0 ? t_win : t + factor * (t_win - t);
    } else {
      const double delayed = std::min(t + kernel.inhibit_gain * (d - r) * cfg.sim_step, cfg.t_max);
      if (delayed > cfg.t_ref) {
        out.times[i].reset();
      } else {
        out.times[i] = delayed;
      }
    }
  }
  return out;
}

void ssom_learn(const EncodedInput& e, Lattice& lattice, const FiringRecord& record,
                const SsomConfig& cfg, const StdpRule& rule, double lr_scale) {
  if (e.spike_times.size() != lattice.dim())
    throw DimensionError(lattice.dim(), e.spike_times.size());
  const Vector v = decode_latency(e);
  detail::gated_stdp_learn(e, lattice, record, cfg, rule, lr_scale,
                           [&](std::size_t, std::size_t k) { return v[k]; });
}

Lattice decode_lattice(const Lattice& normalized, const FeatureRange& range) {
  Lattice out(normalized.rows(), normalized.cols(), normalized.dim(), normalized.seed());
  for (std::size_t i = 0; i < normalized.size(); ++i) {
    const Vector x = range.denormalize(normalized.weight(i));
    std::copy(x.begin(), x.end(), out.weight(i).begin());
  }
  return out;
}

namespace {

class SsomStepper {
 public:
  void reset() {}

  FiringRecord fire(const EncodedInput& e, const Lattice& lattice, const SsomConfig& cfg) {
    input_ = decode_latency(e);
    return compute_firing_times(e, lattice, cfg);
  }

  double target(std::size_t, std::size_t k, const EncodedInput&, const Lattice&) const {
    return input_[k];
  }

  void end_of_sequence(int) const {}

 private:
  Vector input_;
};

}  // namespace

TrainingLog train_ssom(const std::vector<SequenceSample>& data, Lattice& lattice,
                       const Schedule& schedule, const SpikingParams& params,
                       const StdpRule& rule, const FeatureRange& range, std::uint64_t seed) {
  SsomStepper stepper;
  return detail::run_spiking_training(data, lattice, schedule, params, rule, range, seed, stepper);
}

}  // namespace pulsom
