#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pulsom/sequence.hpp"

namespace pulsom {

struct AudioBuffer {
  std::vector<double> samples;  // in [-1, 1]
  int sample_rate = 16000;
};

struct MfccConfig {
  double preemph_a = 0.95;
  std::size_t frame_len = 256;
  std::size_t hop = 128;
  std::size_t n_filters = 26;
  std::size_t n_coeffs = 12;
  std::size_t fft_size = 256;  // power of two
  bool use_power = true;       // squared magnitude into the filterbank; false uses |X|

  void validate() const;
};

/// y[0] = s[0], y[n] = s[n] - a s[n-1].
AudioBuffer preemphasis(const AudioBuffer& buf, double a);

/// Frames starting at 0, hop, 2 hop, ...; the trailing partial frame is dropped.
std::vector<Vector> frame_signal(std::span<const double> samples, std::size_t frame_len,
                                 std::size_t hop);

/// 0.54 - 0.46 cos(2 pi n / (N - 1)).
double hamming_window(std::size_t n, std::size_t N);

/// |DFT|^2 for bins 0..fft_size/2, zero-padding the frame. fft_size must be a power of two.
std::vector<double> power_spectrum(std::span<const double> frame, std::size_t fft_size);

double mel_scale(double hz);
double mel_inverse(double mel);

/// Triangular mel filters with centres equally spaced on the mel axis from 0 to Nyquist.
class MelFilterbank {
 public:
  MelFilterbank(std::size_t n_filters, std::size_t fft_size, int sample_rate);

  std::size_t size() const { return weights_.size(); }
  /// Weight of every spectrum bin (0..fft_size/2) for filter m.
  const std::vector<double>& filter(std::size_t m) const { return weights_[m]; }

  /// log10(max(filter . spectrum, floor)) per filter.
  std::vector<double> apply(std::span<const double> spectrum) const;

  static constexpr double kLogFloor = 1e-10;

 private:
  std::vector<std::vector<double>> weights_;
};

std::vector<double> mel_filterbank(std::span<const double> spectrum, const MfccConfig& cfg,
                                   int sample_rate);

/// Orthonormal DCT-II coefficients 1..n_coeffs (c0 dropped).
std::vector<double> dct_coeffs(std::span<const double> log_energies, std::size_t n_coeffs);

/// Pre-emphasis, framing, Hamming window, spectrum, mel filterbank, log10 and DCT.
std::vector<Vector> mfcc_pipeline(const AudioBuffer& buf, const MfccConfig& cfg);

}  // namespace pulsom
