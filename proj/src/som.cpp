#include "pulsom/som.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "pulsom/error.hpp"

namespace pulsom {

std::vector<Vector> flatten_frames(const std::vector<SequenceSample>& data) {
  std::vector<Vector> out;
  for (const auto& s : data) out.insert(out.end(), s.frames.begin(), s.frames.end());
  return out;
}

Lattice::Lattice(std::size_t rows, std::size_t cols, std::size_t dim, std::uint64_t seed)
    : rows_(rows), cols_(cols), dim_(dim), seed_(seed), weights_(rows * cols * dim, 0.0) {
  if (rows == 0 || cols == 0) throw DomainError("lattice needs at least one unit");
  if (dim == 0) throw DomainError("lattice dimension must be positive");
}

Lattice Lattice::random_in_range(std::size_t rows, std::size_t cols, std::span<const double> lo,
                                 std::span<const double> hi, std::uint64_t seed) {
  if (lo.size() != hi.size()) throw DimensionError(lo.size(), hi.size());
  Lattice lattice(rows, cols, lo.size(), seed);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    auto w = lattice.weight(i);
    for (std::size_t k = 0; k < w.size(); ++k) w[k] = lo[k] + (hi[k] - lo[k]) * unit(rng);
  }
  return lattice;
}

Lattice Lattice::random_from_data(std::size_t rows, std::size_t cols,
                                  const std::vector<Vector>& data, std::uint64_t seed) {
  if (data.empty()) throw DomainError("cannot initialise a lattice from empty data");
  const std::size_t dim = data.front().size();
  Vector lo(dim, std::numeric_limits<double>::infinity());
  Vector hi(dim, -std::numeric_limits<double>::infinity());
  for (const auto& x : data) {
    if (x.size() != dim) throw DimensionError(dim, x.size());
    for (std::size_t k = 0; k < dim; ++k) {
      lo[k] = std::min(lo[k], x[k]);
      hi[k] = std::max(hi[k], x[k]);
    }
  }
  return random_in_range(rows, cols, lo, hi, seed);
}

UnitIndex Lattice::unit(std::size_t flat) const { return {flat / cols_, flat % cols_, flat}; }

UnitIndex Lattice::unit(std::size_t row, std::size_t col) const {
  return {row, col, row * cols_ + col};
}

double Lattice::grid_distance(std::size_t a, std::size_t b) const {
  const double dr = static_cast<double>(a / cols_) - static_cast<double>(b / cols_);
  const double dc = static_cast<double>(a % cols_) - static_cast<double>(b % cols_);
  return std::sqrt(dr * dr + dc * dc);
}

bool Lattice::all_finite() const {
  return std::all_of(weights_.begin(), weights_.end(), [](double v) { return std::isfinite(v); });
}

Schedule Schedule::for_lattice(std::size_t rows, std::size_t cols, int epochs) {
  Schedule s;
  s.epochs = epochs;
  s.radius_start = std::max(1.0, static_cast<double>(std::max(rows, cols)) / 2.0);
  return s;
}

void Schedule::validate() const {
  if (epochs < 1) throw DomainError("schedule needs at least one epoch");
  if (!(lr_end > 0.0) || lr_start < lr_end) throw DomainError("schedule needs lr_start >= lr_end > 0");
  if (!(radius_end > 0.0) || radius_start < radius_end)
    throw DomainError("schedule needs radius_start >= radius_end > 0");
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    sum += d * d;
  }
  return sum;
}

UnitIndex find_bmu(std::span<const double> x, const Lattice& lattice) {
  if (x.size() != lattice.dim()) throw DimensionError(lattice.dim(), x.size());
  std::size_t best = 0;
  double best_d = squared_distance(x, lattice.weight(0));
  for (std::size_t i = 1; i < lattice.size(); ++i) {
    const double d = squared_distance(x, lattice.weight(i));
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return lattice.unit(best);
}

double neighborhood(double grid_dist, double radius) {
  if (!(radius > 0.0)) throw DomainError("neighborhood radius must be positive");
  if (grid_dist > 3.0 * radius) return 0.0;
  return std::exp(-grid_dist * grid_dist / (2.0 * radius * radius));
}

void som_update(std::span<const double> x, Lattice& lattice, UnitIndex bmu, double lr,
                double radius) {
  if (x.size() != lattice.dim()) throw DimensionError(lattice.dim(), x.size());
  if (lr < 0.0 || lr > 1.0) throw DomainError("learning rate must lie in [0, 1]");
  if (lr == 0.0) return;
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const double h = neighborhood(lattice.grid_distance(i, bmu.flat), radius);
    if (h == 0.0) continue;
    const double step = lr * h;
    auto w = lattice.weight(i);
    for (std::size_t k = 0; k < w.size(); ++k) w[k] += step * (x[k] - w[k]);
  }
}

DecayedRates linear_decay(int t, const Schedule& schedule) {
  if (t < 0 || t >= schedule.epochs) throw DomainError("epoch index out of range");
  if (schedule.epochs == 1) return {schedule.lr_start, schedule.radius_start};
  const double frac = static_cast<double>(t) / static_cast<double>(schedule.epochs - 1);
  return {schedule.lr_start * (1.0 - frac) + schedule.lr_end * frac,
          schedule.radius_start * (1.0 - frac) + schedule.radius_end * frac};
}

double quantization_error(const std::vector<Vector>& data, const Lattice& lattice) {
  if (data.empty()) throw DomainError("quantization error of empty data");
  double sum = 0.0;
  for (const auto& x : data) {
    const UnitIndex bmu = find_bmu(x, lattice);
    sum += std::sqrt(squared_distance(x, lattice.weight(bmu.flat)));
  }
  return sum / static_cast<double>(data.size());
}

void TrainingLog::write_csv(std::ostream& out) const {
  out << "epoch,lr,radius,qe,skipped\n";
  for (const auto& e : epochs) {
    out << e.epoch << ',' << format_real(e.lr) << ',' << format_real(e.radius) << ','
        << format_real(e.qe) << ',' << e.skipped << '\n';
  }
}

TrainingLog train_som(const std::vector<Vector>& data, Lattice& lattice, const Schedule& schedule,
                      std::uint64_t seed) {
  if (data.empty()) throw DomainError("training data is empty");
  schedule.validate();
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);

  TrainingLog log;
  for (int epoch = 0; epoch < schedule.epochs; ++epoch) {
    const DecayedRates rates = linear_decay(epoch, schedule);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t idx : order) {
      const UnitIndex bmu = find_bmu(data[idx], lattice);
      som_update(data[idx], lattice, bmu, rates.lr, rates.radius);
    }
    if (!lattice.all_finite()) throw DivergenceError(epoch, "non-finite weight");
    log.epochs.push_back({epoch, rates.lr, rates.radius, quantization_error(data, lattice), 0});
  }
  return log;
}

std::string format_real(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

namespace {

double parse_real(const std::string& token) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw Error("malformed real value '" + token + "'");
  return value;
}

}  // namespace

void write_lattice(std::ostream& out, const Lattice& lattice) {
  out << "PULSOM1 " << lattice.rows() << ' ' << lattice.cols() << ' ' << lattice.dim() << ' '
      << lattice.seed() << '\n';
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const auto w = lattice.weight(i);
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (k) out << ' ';
      out << format_real(w[k]);
    }
    out << '\n';
  }
}

Lattice read_lattice(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error("missing lattice header");
  std::istringstream header(line);
  std::string magic;
  std::size_t rows = 0, cols = 0, dim = 0;
  std::uint64_t seed = 0;
  if (!(header >> magic >> rows >> cols >> dim >> seed) || magic != "PULSOM1")
    throw Error("bad lattice header '" + line + "'");
  Lattice lattice(rows, cols, dim, seed);
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    if (!std::getline(in, line)) throw Error("lattice truncated at unit " + std::to_string(i));
    std::istringstream row(line);
    auto w = lattice.weight(i);
    std::string token;
    for (std::size_t k = 0; k < dim; ++k) {
      if (!(row >> token)) throw Error("unit " + std::to_string(i) + " has too few components");
      w[k] = parse_real(token);
    }
    if (row >> token) throw Error("unit " + std::to_string(i) + " has too many components");
  }
  if (!lattice.all_finite()) throw Error("lattice contains non-finite weights");
  return lattice;
}

}  // namespace pulsom
