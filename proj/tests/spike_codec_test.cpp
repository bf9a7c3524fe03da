#include "pulsom/spike_codec.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "pulsom/error.hpp"
#include "test_util.hpp"

namespace pulsom {
namespace {

const Vector kLo{0.0, 0.0, 0.0};
const Vector kHi{1.0, 1.0, 1.0};

TEST(EncodeLatency, RangeMaxFiresFirst) {
  const EncodedInput e = encode_latency(Vector{1.0, 0.0, 0.5}, kLo, kHi, 20.0);
  EXPECT_EQ(e.spike_times[0], 0.0);
  EXPECT_EQ(e.spike_times[1], 20.0);
  EXPECT_DOUBLE_EQ(e.spike_times[2], 10.0);
  EXPECT_EQ(e.t_max, 20.0);
  EXPECT_EQ(e.source, (Vector{1.0, 0.0, 0.5}));
}

TEST(EncodeLatency, ScalesByRange) {
  const EncodedInput e = encode_latency(Vector{15.0}, Vector{10.0}, Vector{30.0}, 20.0);
  EXPECT_DOUBLE_EQ(e.spike_times[0], 15.0);
}

TEST(EncodeLatency, DegenerateRangeEncodesAtHalfHorizon) {
  const EncodedInput e = encode_latency(Vector{3.0}, Vector{2.0}, Vector{2.0}, 20.0);
  EXPECT_EQ(e.spike_times[0], 10.0);
}

TEST(EncodeLatency, OutOfRangeIsClamped) {
  const EncodedInput e = encode_latency(Vector{-5.0, 7.0}, Vector{0.0, 0.0}, Vector{1.0, 1.0}, 20.0);
  EXPECT_EQ(e.spike_times[0], 20.0);
  EXPECT_EQ(e.spike_times[1], 0.0);
}

TEST(EncodeLatency, Errors) {
  EXPECT_THROW(encode_latency(Vector{std::numeric_limits<double>::quiet_NaN(), 0.0, 0.0}, kLo,
                              kHi, 20.0),
               DomainError);
  EXPECT_THROW(encode_latency(Vector{0.0, 0.0}, kLo, kHi, 20.0), DimensionError);
  EXPECT_THROW(encode_latency(Vector{0.0}, Vector{1.0}, Vector{0.0}, 20.0), DomainError);
}

TEST(EncodeLatency, OrderReversing) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 10000; ++i) {
    const Vector x = testing::random_vector(6, rng, -2.0, 3.0);
    const Vector lo(6, -1.0);
    const Vector hi(6, 2.0);
    const EncodedInput e = encode_latency(x, lo, hi, 20.0);
    for (std::size_t j = 0; j < 6; ++j) {
      ASSERT_GE(e.spike_times[j], 0.0);
      ASSERT_LE(e.spike_times[j], 20.0);
      for (std::size_t k = 0; k < 6; ++k) {
        const double vj = std::clamp((x[j] + 1.0) / 3.0, 0.0, 1.0);
        const double vk = std::clamp((x[k] + 1.0) / 3.0, 0.0, 1.0);
        if (vj >= vk) ASSERT_LE(e.spike_times[j], e.spike_times[k]);
      }
    }
  }
}

TEST(DecodeLatency, Examples) {
  EncodedInput e;
  e.t_max = 20.0;
  e.spike_times = {0.0, 10.0, 20.0};
  EXPECT_EQ(decode_latency(e), (Vector{1.0, 0.5, 0.0}));
  e.spike_times = {20.0, 20.0};
  EXPECT_EQ(decode_latency(e), (Vector{0.0, 0.0}));
}

TEST(DecodeLatency, RoundTrip) {
  std::mt19937_64 rng(8);
  const Vector lo{-3.0, 0.0, 10.0, 5.0};
  const Vector hi{3.0, 1e-3, 20.0, 5.5};
  for (int i = 0; i < 1000; ++i) {
    Vector x(4);
    for (std::size_t k = 0; k < 4; ++k) {
      x[k] = std::uniform_real_distribution<double>(lo[k], hi[k])(rng);
    }
    const Vector v = decode_latency(encode_latency(x, lo, hi, 20.0));
    for (std::size_t k = 0; k < 4; ++k) ASSERT_NEAR(v[k], (x[k] - lo[k]) / (hi[k] - lo[k]), 1e-12);
  }
}

TEST(FeatureRange, NormalizeAndDenormalize) {
  const FeatureRange r = FeatureRange::of({{1.0, -2.0}, {3.0, -2.0}, {2.0, -2.0}});
  EXPECT_EQ(r.lo, (Vector{1.0, -2.0}));
  EXPECT_EQ(r.hi, (Vector{3.0, -2.0}));
  EXPECT_EQ(r.normalize(Vector{2.0, 7.0}), (Vector{0.5, 0.5}));
  EXPECT_EQ(r.normalize(Vector{9.0, 7.0})[0], 1.0);
  const Vector back = r.denormalize(Vector{0.25, 0.5});
  EXPECT_DOUBLE_EQ(back[0], 1.5);
  EXPECT_DOUBLE_EQ(back[1], -2.0);
  EXPECT_THROW(FeatureRange::of({}), DomainError);
}

TEST(PspTrace, Examples) {
  EXPECT_EQ(psp_trace(5.0, 4.9, 5.0), 0.0);
  EXPECT_EQ(psp_trace(5.0, 5.0, 5.0), 1.0);
  EXPECT_NEAR(psp_trace(5.0, 10.0, 5.0), std::exp(-1.0), 1e-15);
  EXPECT_THROW(psp_trace(0.0, 1.0, 0.0), DomainError);
}

TEST(PspTrace, BoundedAndDecaying) {
  double prev = 1.0;
  for (double t = 2.0; t < 60.0; t += 0.25) {
    const double p = psp_trace(2.0, t, 4.0);
    ASSERT_GE(p, 0.0);
    ASSERT_LE(p, prev);
    prev = p;
  }
}

TEST(SsomConfig, Validation) {
  EXPECT_NO_THROW(SsomConfig{}.validate());
  EXPECT_THROW((SsomConfig{20.0, 25.0, 0.0, 1.0, 5.0}.validate()), DomainError);
  EXPECT_THROW((SsomConfig{20.0, 15.0, 0.0, 0.0, 5.0}.validate()), DomainError);
  EXPECT_THROW((SsomConfig{20.0, 15.0, -1.0, 1.0, 5.0}.validate()), DomainError);
}

}  // namespace
}  // namespace pulsom
