#pragma once

// Shared training loop for the spiking variants. A stepper supplies
//   void reset();
//   FiringRecord fire(const EncodedInput&, const Lattice&, const SsomConfig&);
//   double target(std::size_t unit, std::size_t k, const EncodedInput&, const Lattice&) const;
//   void end_of_sequence(int epoch) const;

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "pulsom/error.hpp"
#include "pulsom/ssom.hpp"

namespace pulsom::detail {

template <class Target>
void gated_stdp_learn(const EncodedInput& e, Lattice& lattice, const FiringRecord& record,
                      const SsomConfig& cfg, const StdpRule& rule, double lr_scale,
                      Target&& target) {
  if (!record.winner) return;
  if (!(cfg.s_radius > 0.0)) throw DomainError("spatial learning radius must be positive");
  if (lr_scale == 0.0) return;
  const std::size_t win = record.winner->flat;
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const auto& t_fire = record.times[i];
    if (!t_fire || *t_fire > cfg.t_ref) continue;
    const double d = lattice.grid_distance(i, win);
    if (d > cfg.s_radius) continue;
    const double scale = lr_scale * neighborhood(d, cfg.s_radius);
    if (scale == 0.0) continue;
    const double t_post = post_spike_time(*t_fire, cfg);
    auto w = lattice.weight(i);
    for (std::size_t k = 0; k < w.size(); ++k) {
      const double x_i = target(i, k);
      w[k] = apply_stdp(w[k], x_i, e.spike_times[k] - t_post, rule, scale);
    }
  }
}

template <class Stepper>
TrainingLog run_spiking_training(const std::vector<SequenceSample>& data, Lattice& lattice,
                                 const Schedule& schedule, const SpikingParams& params,
                                 const StdpRule& rule, const FeatureRange& range,
                                 std::uint64_t seed, Stepper& stepper) {
  if (data.empty()) throw DomainError("training data is empty");
  if (range.dim() != lattice.dim()) throw DimensionError(lattice.dim(), range.dim());
  schedule.validate();
  params.timing.validate();
  params.lateral.validate();
  rule.validate();

  const std::vector<Vector> frames = flatten_frames(data);
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);

  TrainingLog log;
  for (int epoch = 0; epoch < schedule.epochs; ++epoch) {
    const DecayedRates rates = linear_decay(epoch, schedule);
    SsomConfig cfg = params.timing;
    if (cfg.s_radius == 0.0) cfg.s_radius = rates.radius;
    LateralKernel kernel = params.lateral;
    if (kernel.excite_radius == 0.0) kernel.excite_radius = rates.radius;

    std::shuffle(order.begin(), order.end(), rng);
    std::size_t skipped = 0;
    for (std::size_t idx : order) {
      stepper.reset();
      for (const auto& frame : data[idx].frames) {
        const EncodedInput e = encode_latency(frame, range, cfg.t_max);
        FiringRecord record = stepper.fire(e, lattice, cfg);
        if (!record.winner) {
          ++skipped;
          continue;
        }
        record = apply_lateral(record, lattice, kernel, cfg);
        gated_stdp_learn(e, lattice, record, cfg, rule, rates.lr,
                         [&](std::size_t unit, std::size_t k) {
                           return stepper.target(unit, k, e, lattice);
                         });
      }
      stepper.end_of_sequence(epoch);
    }
    if (!lattice.all_finite()) throw DivergenceError(epoch, "non-finite weight");
    const double qe = quantization_error(frames, decode_lattice(lattice, range));
    log.epochs.push_back({epoch, rates.lr, rates.radius, qe, skipped});
  }
  return log;
}

}  // namespace pulsom::detail
