#include "pulsom/mfcc.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "pulsom/error.hpp"

namespace pulsom {

namespace {

bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 FFT.
void fft(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        // Direct twiddles; a running product drifts at 1e-9 tolerances.
        const std::complex<double> w = std::polar(1.0, ang * static_cast<double>(k));
        const auto u = a[start + k];
        const auto v = a[start + k + len / 2] * w;
        a[start + k] = u + v;
        a[start + k + len / 2] = u - v;
      }
    }
  }
}

}  // namespace

void MfccConfig::validate() const {
  if (preemph_a < 0.9 || preemph_a > 1.0) throw DomainError("pre-emphasis must lie in [0.9, 1.0]");
  if (frame_len < 2) throw DomainError("frame length must be at least 2");
  if (hop * 2 != frame_len) throw DomainError("hop must be half the frame length");
  if (n_coeffs == 0 || n_coeffs > n_filters) throw DomainError("need 1 <= n_coeffs <= n_filters");
  if (fft_size < frame_len || !is_power_of_two(fft_size))
    throw DomainError("fft_size must be a power of two no smaller than frame_len");
}

AudioBuffer preemphasis(const AudioBuffer& buf, double a) {
  if (buf.samples.empty()) throw DomainError("pre-emphasis of an empty buffer");
  if (a < 0.9 || a > 1.0) throw DomainError("pre-emphasis must lie in [0.9, 1.0]");
  AudioBuffer out{std::vector<double>(buf.samples.size()), buf.sample_rate};
  out.samples[0] = buf.samples[0];
  for (std::size_t n = 1; n < buf.samples.size(); ++n)
    out.samples[n] = buf.samples[n] - a * buf.samples[n - 1];
  return out;
}

std::vector<Vector> frame_signal(std::span<const double> samples, std::size_t frame_len,
                                 std::size_t hop) {
  if (frame_len == 0 || hop == 0) throw DomainError("frame length and hop must be positive");
  if (samples.size() < frame_len)
    throw DomainError("signal of " + std::to_string(samples.size()) +
                      " samples is shorter than one frame");
  const std::size_t count = (samples.size() - frame_len) / hop + 1;
  std::vector<Vector> frames;
  frames.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto first = samples.begin() + static_cast<std::ptrdiff_t>(i * hop);
    frames.emplace_back(first, first + static_cast<std::ptrdiff_t>(frame_len));
  }
  return frames;
}

double hamming_window(std::size_t n, std::size_t N) {
  if (N < 2 || n >= N) throw DomainError("hamming window index out of range");
  return 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) /
                                static_cast<double>(N - 1));
}

std::vector<double> power_spectrum(std::span<const double> frame, std::size_t fft_size) {
  if (!is_power_of_two(fft_size)) throw DomainError("fft_size must be a power of two");
  if (frame.size() > fft_size) throw DomainError("frame longer than fft_size");
  std::vector<std::complex<double>> buf(fft_size);
  std::copy(frame.begin(), frame.end(), buf.begin());
  fft(buf);
  std::vector<double> out(fft_size / 2 + 1);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::norm(buf[k]);
  return out;
}

double mel_scale(double hz) {
  if (hz < 0.0) throw DomainError("negative frequency");
  return 2595.0 * std::log10(1.0 + hz / 700.0);
}

double mel_inverse(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

MelFilterbank::MelFilterbank(std::size_t n_filters, std::size_t fft_size, int sample_rate) {
  if (n_filters == 0) throw DomainError("filterbank needs at least one filter");
  if (sample_rate <= 0) throw DomainError("sample rate must be positive");
  const std::size_t n_bins = fft_size / 2 + 1;
  const double top = mel_scale(sample_rate / 2.0);
  std::vector<std::size_t> edge(n_filters + 2);
  for (std::size_t m = 0; m < edge.size(); ++m) {
    const double hz = mel_inverse(top * static_cast<double>(m) / static_cast<double>(n_filters + 1));
    edge[m] = std::min(n_bins - 1, static_cast<std::size_t>(
                                       std::floor(static_cast<double>(fft_size + 1) * hz / sample_rate)));
  }
  for (std::size_t m = 1; m < edge.size(); ++m) {
    if (edge[m] <= edge[m - 1])
      throw DomainError(std::to_string(n_filters) + " mel filters are too many for fft_size " +
                        std::to_string(fft_size));
  }
  weights_.assign(n_filters, std::vector<double>(n_bins, 0.0));
  for (std::size_t m = 0; m < n_filters; ++m) {
    const double lo = static_cast<double>(edge[m]);
    const double mid = static_cast<double>(edge[m + 1]);
    const double hi = static_cast<double>(edge[m + 2]);
    for (std::size_t k = edge[m]; k <= edge[m + 2]; ++k) {
      const double b = static_cast<double>(k);
      weights_[m][k] = b <= mid ? (b - lo) / (mid - lo) : (hi - b) / (hi - mid);
    }
  }
}

std::vector<double> MelFilterbank::apply(std::span<const double> spectrum) const {
  std::vector<double> out(weights_.size());
  for (std::size_t m = 0; m < weights_.size(); ++m) {
    if (spectrum.size() != weights_[m].size())
      throw DimensionError(weights_[m].size(), spectrum.size());
    double e = 0.0;
    for (std::size_t k = 0; k < spectrum.size(); ++k) e += weights_[m][k] * spectrum[k];
    out[m] = std::log10(std::max(e, kLogFloor));
  }
  return out;
}

std::vector<double> mel_filterbank(std::span<const double> spectrum, const MfccConfig& cfg,
                                   int sample_rate) {
  return MelFilterbank(cfg.n_filters, cfg.fft_size, sample_rate).apply(spectrum);
}

std::vector<double> dct_coeffs(std::span<const double> log_energies, std::size_t n_coeffs) {
  const std::size_t n = log_energies.size();
  if (n_coeffs >= n + 1 || n == 0) throw DomainError("need n_coeffs <= number of filters");
  const double scale = std::sqrt(2.0 / static_cast<double>(n));
  std::vector<double> out(n_coeffs);
  for (std::size_t c = 1; c <= n_coeffs; ++c) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sum += log_energies[i] * std::cos(std::numbers::pi * static_cast<double>(c) *
                                        (2.0 * static_cast<double>(i) + 1.0) /
                                        (2.0 * static_cast<double>(n)));
    }
    out[c - 1] = scale * sum;
  }
  return out;
}

std::vector<Vector> mfcc_pipeline(const AudioBuffer& buf, const MfccConfig& cfg) {
  cfg.validate();
  const AudioBuffer emphasized = preemphasis(buf, cfg.preemph_a);
  std::vector<Vector> frames = frame_signal(emphasized.samples, cfg.frame_len, cfg.hop);
  const MelFilterbank bank(cfg.n_filters, cfg.fft_size, buf.sample_rate);

  std::vector<double> window(cfg.frame_len);
  for (std::size_t n = 0; n < cfg.frame_len; ++n) window[n] = hamming_window(n, cfg.frame_len);

  std::vector<Vector> out;
  out.reserve(frames.size());
  for (auto& frame : frames) {
    for (std::size_t n = 0; n < frame.size(); ++n) frame[n] *= window[n];
    std::vector<double> spectrum = power_spectrum(frame, cfg.fft_size);
    if (!cfg.use_power) {
      for (double& v : spectrum) v = std::sqrt(v);
    }
    out.push_back(dct_coeffs(bank.apply(spectrum), cfg.n_coeffs));
  }
  return out;
}

}  // namespace pulsom
