#include "pulsom/spike_codec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pulsom/error.hpp"

namespace pulsom {

void SsomConfig::validate() const {
  if (!(sim_step > 0.0) || sim_step > t_ref || t_ref > t_max)
    throw DomainError("spiking timing needs 0 < sim_step <= t_ref <= t_max");
  if (s_radius < 0.0) throw DomainError("spatial radius must be non-negative");
  if (!(tau_psp > 0.0)) throw DomainError("tau_psp must be positive");
}

FeatureRange FeatureRange::of(const std::vector<Vector>& data) {
  if (data.empty()) throw DomainError("feature range of empty data");
  const std::size_t dim = data.front().size();
  FeatureRange r{Vector(dim, std::numeric_limits<double>::infinity()),
                 Vector(dim, -std::numeric_limits<double>::infinity())};
  for (const auto& x : data) {
    if (x.size() != dim) throw DimensionError(dim, x.size());
    for (std::size_t k = 0; k < dim; ++k) {
      r.lo[k] = std::min(r.lo[k], x[k]);
      r.hi[k] = std::max(r.hi[k], x[k]);
    }
  }
  return r;
}

Vector FeatureRange::normalize(std::span<const double> x) const {
  if (x.size() != lo.size()) throw DimensionError(lo.size(), x.size());
  Vector v(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!std::isfinite(x[k])) throw DomainError("non-finite feature value");
    const double span = hi[k] - lo[k];
    v[k] = span > 0.0 ? std::clamp((x[k] - lo[k]) / span, 0.0, 1.0) : 0.5;
  }
  return v;
}

Vector FeatureRange::denormalize(std::span<const double> v) const {
  if (v.size() != lo.size()) throw DimensionError(lo.size(), v.size());
  Vector x(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) x[k] = lo[k] + v[k] * (hi[k] - lo[k]);
  return x;
}

EncodedInput encode_latency(std::span<const double> x, std::span<const double> lo,
                            std::span<const double> hi, double t_max) {
  if (lo.size() != x.size()) throw DimensionError(x.size(), lo.size());
  if (hi.size() != x.size()) throw DimensionError(x.size(), hi.size());
  if (!(t_max > 0.0)) throw DomainError("t_max must be positive");
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (lo[k] > hi[k]) throw DomainError("range lower bound exceeds upper bound");
  }
  FeatureRange range{Vector(lo.begin(), lo.end()), Vector(hi.begin(), hi.end())};
  return encode_latency(x, range, t_max);
}

EncodedInput encode_latency(std::span<const double> x, const FeatureRange& range, double t_max) {
  EncodedInput e;
  e.t_max = t_max;
  e.source.assign(x.begin(), x.end());
  const Vector v = range.normalize(x);
  e.spike_times.resize(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) e.spike_times[k] = t_max * (1.0 - v[k]);
  return e;
}

Vector decode_latency(const EncodedInput& e) {
  Vector v(e.spike_times.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = 1.0 - e.spike_times[k] / e.t_max;
  return v;
}

double psp_trace(double spike_time, double t, double tau_psp) {
  if (!(tau_psp > 0.0)) throw DomainError("tau_psp must be positive");
  if (t < spike_time) return 0.0;
  return std::exp(-(t - spike_time) / tau_psp);
}

}  // namespace pulsom
