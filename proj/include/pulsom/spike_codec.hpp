#pragma once

#include <span>
#include <vector>

#include "pulsom/sequence.hpp"

namespace pulsom {

/// Latency-coded input: one spike per feature component, larger values earlier.
struct EncodedInput {
  std::vector<double> spike_times;  // ms, each in [0, t_max]
  double t_max = 20.0;
  Vector source;
};

/// Timing parameters of the spiking map (all in ms except s_radius).
struct SsomConfig {
  double t_max = 20.0;
  double t_ref = 15.0;    // units firing later than this are silent
  double s_radius = 0.0;  // spatial learning area in lattice units; 0 follows the schedule radius
  double sim_step = 1.0;
  double tau_psp = 5.0;

  void validate() const;
};

/// Per-dimension value range used to normalise features into [0, 1].
struct FeatureRange {
  Vector lo;
  Vector hi;

  static FeatureRange of(const std::vector<Vector>& data);

  std::size_t dim() const { return lo.size(); }
  /// Clamped normalisation; a degenerate component maps to 0.5.
  Vector normalize(std::span<const double> x) const;
  Vector denormalize(std::span<const double> v) const;
};

EncodedInput encode_latency(std::span<const double> x, std::span<const double> lo,
                            std::span<const double> hi, double t_max);
EncodedInput encode_latency(std::span<const double> x, const FeatureRange& range, double t_max);

/// Normalised vector recovered from spike times: v = 1 - t / t_max.
Vector decode_latency(const EncodedInput& e);

/// Causal exponential trace of a spike at `spike_time`, evaluated at `t`.
double psp_trace(double spike_time, double t, double tau_psp);

}  // namespace pulsom
