#include "pulsom/ssom.hpp"

#include <gtest/gtest.h>

#include <random>

#include "pulsom/error.hpp"
#include "test_util.hpp"

namespace pulsom {
namespace {

EncodedInput encode_unit(const Vector& v, double t_max = 20.0) {
  return encode_latency(v, Vector(v.size(), 0.0), Vector(v.size(), 1.0), t_max);
}

SsomConfig full_window() { return SsomConfig{20.0, 20.0, 1.0, 1.0, 5.0}; }

TEST(FiringTimes, PerfectMatchFiresAtZeroAndWins) {
  Lattice lattice(2, 2, 2);
  lattice.weight(3)[0] = 0.25;
  lattice.weight(3)[1] = 0.75;
  const FiringRecord r = compute_firing_times(encode_unit({0.25, 0.75}), lattice, SsomConfig{});
  ASSERT_TRUE(r.winner);
  EXPECT_EQ(r.winner->flat, 3u);
  EXPECT_EQ(*r.times[3], 0.0);
}

TEST(FiringTimes, MaximalMismatchIsSilent) {
  Lattice lattice(1, 3, 2);
  for (double& w : lattice.data()) w = 1.0;
  const FiringRecord r = compute_firing_times(encode_unit({0.0, 0.0}), lattice, SsomConfig{});
  EXPECT_FALSE(r.winner);
  for (const auto& t : r.times) EXPECT_FALSE(t);
}

TEST(FiringTimes, LatencyProportionalToMismatch) {
  Lattice lattice(1, 2, 4);
  // Per-dimension mean squared mismatch 0.25 and 0.5.
  for (std::size_t k = 0; k < 4; ++k) lattice.weight(0)[k] = 0.5;
  for (std::size_t k = 0; k < 2; ++k) lattice.weight(1)[k] = 1.0;
  const FiringRecord r = compute_firing_times(encode_unit({0.0, 0.0, 0.0, 0.0}), lattice,
                                              full_window());
  EXPECT_DOUBLE_EQ(*r.times[0], 5.0);
  EXPECT_DOUBLE_EQ(*r.times[1], 10.0);
  EXPECT_EQ(r.winner->flat, 0u);
}

TEST(FiringTimes, HorizonMismatchIsAnError) {
  Lattice lattice(1, 1, 1);
  EXPECT_THROW(compute_firing_times(encode_unit({0.5}, 10.0), lattice, SsomConfig{}),
               DomainError);
}

TEST(FiringTimes, WinnerEqualsBmuOnNormalisedData) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 1000; ++trial) {
    const Lattice lattice = testing::random_lattice(4, 5, 7, rng);
    const Vector v = testing::random_vector(7, rng);
    const FiringRecord r = compute_firing_times(encode_unit(v), lattice, full_window());
    ASSERT_TRUE(r.winner);
    ASSERT_EQ(r.winner->flat, testing::scan_argmin(decode_latency(encode_unit(v)), lattice));
    for (const auto& t : r.times) ASSERT_LE(*r.times[r.winner->flat], *t);
  }
}

FiringRecord uniform_record(const Lattice& lattice, double t, std::size_t winner, double t_win) {
  FiringRecord r;
  r.times.assign(lattice.size(), t);
  r.times[winner] = t_win;
  r.winner = lattice.unit(winner);
  return r;
}

TEST(Lateral, WinnerUnchanged) {
  const Lattice lattice(3, 3, 1);
  const FiringRecord r = uniform_record(lattice, 8.0, 4, 2.0);
  const FiringRecord out = apply_lateral(r, lattice, {1.5, 0.5, 0.1}, SsomConfig{});
  EXPECT_EQ(*out.times[4], 2.0);
  EXPECT_EQ(out.winner, r.winner);
}

TEST(Lateral, FullPullReachesWinnerTime) {
  const Lattice lattice(1, 3, 1);
  const FiringRecord r = uniform_record(lattice, 9.0, 0, 3.0);
  // gain * exp(-d^2/2r^2) clamps to 1 for every neighbour.
  const FiringRecord out = apply_lateral(r, lattice, {5.0, 10.0, 0.0}, SsomConfig{});
  EXPECT_EQ(*out.times[1], 3.0);
  EXPECT_EQ(*out.times[2], 3.0);
}

TEST(Lateral, PartialPullIsConvexCombination) {
  const Lattice lattice(1, 2, 1);
  const FiringRecord out =
      apply_lateral(uniform_record(lattice, 10.0, 0, 2.0), lattice, {1.0, 0.5, 0.0}, SsomConfig{});
  const double factor = 0.5 * std::exp(-0.5);
  EXPECT_DOUBLE_EQ(*out.times[1], 10.0 + factor * (2.0 - 10.0));
}

TEST(Lateral, InhibitionDelays) {
  const Lattice lattice(1, 5, 1);
  const FiringRecord out = apply_lateral(uniform_record(lattice, 4.0, 0, 1.0), lattice,
                                         {1.0, 0.5, 1.0}, SsomConfig{});
  EXPECT_DOUBLE_EQ(*out.times[4], 7.0);  // d = r + 3
}

TEST(Lateral, InhibitionCanSilence) {
  const Lattice lattice(1, 5, 1);
  const FiringRecord out = apply_lateral(uniform_record(lattice, 14.0, 0, 1.0), lattice,
                                         {1.0, 0.5, 1.0}, SsomConfig{});
  EXPECT_FALSE(out.times[4]);
  EXPECT_TRUE(out.times[1]);
}

TEST(Lateral, NeedsWinner) {
  const Lattice lattice(1, 2, 1);
  FiringRecord r;
  r.times.assign(2, std::nullopt);
  EXPECT_THROW(apply_lateral(r, lattice, {1.0, 0.5, 0.1}, SsomConfig{}), DomainError);
}

TEST(Lateral, TimesStayBetweenWinnerAndHorizon) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const Lattice lattice = testing::random_lattice(5, 5, 3, rng);
    const SsomConfig cfg{20.0, 5.0 + 15.0 * u(rng), 1.0, 1.0, 5.0};
    const FiringRecord r = compute_firing_times(encode_unit(testing::random_vector(3, rng)),
                                                lattice, cfg);
    if (!r.winner) continue;
    const LateralKernel k{0.5 + 3.0 * u(rng), 2.0 * u(rng), 2.0 * u(rng)};
    const FiringRecord out = apply_lateral(r, lattice, k, cfg);
    const double t_win = *out.times[out.winner->flat];
    for (const auto& t : out.times) {
      if (!t) continue;
      ASSERT_GE(*t, t_win);
      ASSERT_LE(*t, cfg.t_max);
    }
  }
}

TEST(SsomLearn, GatesBySpaceAndTime) {
  Lattice lattice(1, 5, 2);
  for (double& w : lattice.data()) w = 0.2;
  const EncodedInput e = encode_unit({0.8, 0.6});
  FiringRecord r;
  r.times = {1.0, 2.0, std::nullopt, 3.0, 4.0};
  r.winner = lattice.unit(0);
  const SsomConfig cfg{20.0, 15.0, 1.5, 1.0, 5.0};
  const Lattice before = lattice;
  ssom_learn(e, lattice, r, cfg, StdpRule{}, 1.0);
  EXPECT_NE(lattice.weight(0)[0], 0.2);
  EXPECT_NE(lattice.weight(1)[0], 0.2);
  for (std::size_t i = 2; i < 5; ++i) {
    EXPECT_EQ(lattice.weight(i)[0], before.weight(i)[0]);
    EXPECT_EQ(lattice.weight(i)[1], before.weight(i)[1]);
  }
}

TEST(SsomLearn, LateUnitInsideAreaUntouched) {
  Lattice lattice(1, 2, 1);
  FiringRecord r;
  r.times = {1.0, 16.0};
  r.winner = lattice.unit(0);
  ssom_learn(encode_unit({0.9}), lattice, r, SsomConfig{20.0, 15.0, 3.0, 1.0, 5.0}, StdpRule{},
             1.0);
  EXPECT_EQ(lattice.weight(1)[0], 0.0);
  EXPECT_GT(lattice.weight(0)[0], 0.0);
}

TEST(SsomLearn, FixedPointAtInput) {
  Lattice lattice(1, 1, 3);
  const Vector v{0.1, 0.5, 0.9};
  std::copy(v.begin(), v.end(), lattice.weight(0).begin());
  const EncodedInput e = encode_unit(v);
  const FiringRecord r = compute_firing_times(e, lattice, SsomConfig{20.0, 15.0, 1.0, 1.0, 5.0});
  ssom_learn(e, lattice, r, SsomConfig{20.0, 15.0, 1.0, 1.0, 5.0}, StdpRule{}, 1.0);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(lattice.weight(0)[k], v[k]);
}

TEST(SsomLearn, ZeroScaleIsNoOp) {
  std::mt19937_64 rng(6);
  Lattice lattice = testing::random_lattice(3, 3, 4, rng);
  const Lattice before = lattice;
  const EncodedInput e = encode_unit(testing::random_vector(4, rng));
  const SsomConfig cfg = full_window();
  ssom_learn(e, lattice, compute_firing_times(e, lattice, cfg), cfg, StdpRule{}, 0.0);
  EXPECT_EQ(lattice.data(), before.data());
}

TEST(SsomLearn, TouchedWeightsMoveTowardInput) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    Lattice lattice = testing::random_lattice(4, 4, 5, rng);
    const Lattice before = lattice;
    const Vector v = testing::random_vector(5, rng);
    const EncodedInput e = encode_unit(v);
    const SsomConfig cfg{20.0, 15.0, 2.0, 1.0, 5.0};
    const FiringRecord r = compute_firing_times(e, lattice, cfg);
    if (!r.winner) continue;
    ssom_learn(e, lattice, r, cfg, StdpRule{}, 0.8);
    for (std::size_t i = 0; i < lattice.size(); ++i) {
      for (std::size_t k = 0; k < 5; ++k) {
        const double w0 = before.weight(i)[k];
        const double w1 = lattice.weight(i)[k];
        ASSERT_LE(std::abs(v[k] - w1), std::abs(v[k] - w0) + 1e-15);
      }
    }
  }
}

std::vector<SequenceSample> constant_data(const Vector& frame) {
  SequenceSample s;
  s.frames = {frame};
  s.label = "a";
  return {s};
}

TEST(TrainSsom, ConvergesOnConstantFrame) {
  const Vector x{2.0, -1.0, 0.5};
  // Range wider than the single frame so the target is interior.
  const FeatureRange range{{0.0, -2.0, 0.0}, {4.0, 0.0, 1.0}};
  Lattice lattice = Lattice::random_in_range(2, 2, Vector(3, 0.0), Vector(3, 1.0), 5);
  SpikingParams params;
  params.timing.t_ref = 20.0;
  StdpRule rule;
  rule.eta = 1.0;
  const Schedule s{300, 0.9, 0.5, 1.0, 1.0};
  train_ssom(constant_data(x), lattice, s, params, rule, range, 3);
  const FiringRecord r = compute_firing_times(encode_latency(x, range, 20.0), lattice,
                                              params.timing);
  const Lattice decoded = decode_lattice(lattice, range);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(decoded.weight(r.winner->flat)[k], x[k], 1e-3);
}

TEST(TrainSsom, DeterministicForSeed) {
  std::mt19937_64 rng(9);
  std::vector<SequenceSample> data;
  for (int i = 0; i < 20; ++i) {
    SequenceSample s;
    s.frames = {testing::random_vector(3, rng), testing::random_vector(3, rng)};
    data.push_back(s);
  }
  const FeatureRange range = FeatureRange::of(flatten_frames(data));
  const Schedule sched = Schedule::for_lattice(3, 3, 10);
  Lattice a = Lattice::random_in_range(3, 3, Vector(3, 0.0), Vector(3, 1.0), 4);
  Lattice b = a;
  const TrainingLog la = train_ssom(data, a, sched, SpikingParams{}, StdpRule{}, range, 77);
  const TrainingLog lb = train_ssom(data, b, sched, SpikingParams{}, StdpRule{}, range, 77);
  EXPECT_EQ(a.data(), b.data());
  ASSERT_EQ(la.epochs.size(), 10u);
  EXPECT_EQ(la.epochs.back().qe, lb.epochs.back().qe);
}

TEST(TrainSsom, EmptyDataIsAnError) {
  Lattice lattice(2, 2, 1);
  const FeatureRange range{{0.0}, {1.0}};
  EXPECT_THROW(train_ssom({}, lattice, Schedule{}, SpikingParams{}, StdpRule{}, range, 1),
               DomainError);
}

TEST(DecodeLattice, MapsBackToFeatureSpace) {
  Lattice lattice(1, 1, 2);
  lattice.weight(0)[0] = 0.5;
  lattice.weight(0)[1] = 1.0;
  const Lattice out = decode_lattice(lattice, FeatureRange{{-2.0, 10.0}, {2.0, 20.0}});
  EXPECT_DOUBLE_EQ(out.weight(0)[0], 0.0);
  EXPECT_DOUBLE_EQ(out.weight(0)[1], 20.0);
}

}  // namespace
}  // namespace pulsom
