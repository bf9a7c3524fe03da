#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pulsom/sequence.hpp"

namespace pulsom {

struct UnitIndex {
  std::size_t row = 0;
  std::size_t col = 0;
  std::size_t flat = 0;

  friend bool operator==(const UnitIndex&, const UnitIndex&) = default;
};

/// 2-D grid of units, each holding a weight vector of length dim.
///
/// Weights are stored row-major by flat unit index (row * cols + col).
class Lattice {
 public:
  Lattice(std::size_t rows, std::size_t cols, std::size_t dim, std::uint64_t seed = 0);

  /// Weights drawn uniformly per dimension in [lo[k], hi[k]] from `seed`.
  static Lattice random_in_range(std::size_t rows, std::size_t cols, std::span<const double> lo,
                                 std::span<const double> hi, std::uint64_t seed);

  /// Random lattice spanning the per-dimension min/max range of `data`.
  static Lattice random_from_data(std::size_t rows, std::size_t cols,
                                  const std::vector<Vector>& data, std::uint64_t seed);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return rows_ * cols_; }
  std::uint64_t seed() const { return seed_; }

  std::span<double> weight(std::size_t flat) { return {weights_.data() + flat * dim_, dim_}; }
  std::span<const double> weight(std::size_t flat) const {
    return {weights_.data() + flat * dim_, dim_};
  }

  UnitIndex unit(std::size_t flat) const;
  UnitIndex unit(std::size_t row, std::size_t col) const;

  /// Euclidean distance between two units in lattice coordinates.
  double grid_distance(std::size_t a, std::size_t b) const;

  bool all_finite() const;

  const std::vector<double>& data() const { return weights_; }
  std::vector<double>& data() { return weights_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::size_t dim_;
  std::uint64_t seed_;
  std::vector<double> weights_;
};

/// Linear learning-rate and radius schedule over a fixed number of epochs.
struct Schedule {
  int epochs = 80;
  double lr_start = 0.9;
  double lr_end = 0.05;
  double radius_start = 4.0;
  double radius_end = 1.0;

  /// Default schedule with radius starting at half the larger lattice side.
  static Schedule for_lattice(std::size_t rows, std::size_t cols, int epochs = 80);

  void validate() const;
};

struct DecayedRates {
  double lr;
  double radius;
};

double squared_distance(std::span<const double> a, std::span<const double> b);

/// Best-matching unit by squared Euclidean distance; lowest flat index wins ties.
UnitIndex find_bmu(std::span<const double> x, const Lattice& lattice);

/// Gaussian kernel exp(-d^2 / 2r^2), zero beyond 3r.
double neighborhood(double grid_dist, double radius);

/// Kohonen step m_i += lr * h(d(i, bmu), radius) * (x - m_i).
void som_update(std::span<const double> x, Lattice& lattice, UnitIndex bmu, double lr,
                double radius);

DecayedRates linear_decay(int t, const Schedule& schedule);

/// Mean distance from each sample to its best-matching unit.
double quantization_error(const std::vector<Vector>& data, const Lattice& lattice);

struct EpochStats {
  int epoch = 0;
  double lr = 0.0;
  double radius = 0.0;
  double qe = 0.0;
  std::size_t skipped = 0;  // presentations without a winner (spiking models)
};

struct TrainingLog {
  std::vector<EpochStats> epochs;

  /// CSV `epoch,lr,radius,qe,skipped`.
  void write_csv(std::ostream& out) const;
};

/// Sequential Kohonen training: each epoch visits every sample once in a seeded shuffle.
TrainingLog train_som(const std::vector<Vector>& data, Lattice& lattice, const Schedule& schedule,
                      std::uint64_t seed);

/// `PULSOM1 <rows> <cols> <dim> <seed>` header followed by one weight vector per line.
void write_lattice(std::ostream& out, const Lattice& lattice);
Lattice read_lattice(std::istream& in);

/// Shortest decimal text that round-trips exactly.
std::string format_real(double value);

}  // namespace pulsom
