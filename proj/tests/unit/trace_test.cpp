#include <random>

#include <gtest/gtest.h>

#include "dgr/errors.hpp"
#include "dgr/trace.hpp"
#include "oracles/oracles.hpp"

namespace {

constexpr int kW = 320;
constexpr int kH = 240;

// Square blob of side 2r+1 centered on integer (cx, cy).
dgr::Blob square_blob(int cx, int cy, int r = 2) {
  dgr::BitMask m = dgr::BitMask::Zero(kH, kW);
  m.block(cy - r, cx - r, 2 * r + 1, 2 * r + 1).setConstant(true);
  return dgr::find_blobs(m, dgr::Connectivity::Eight).front();
}

dgr::Pixel zone_pixel(const dgr::TriggerZone& z) {
  return {static_cast<int>(z.center.x()), static_cast<int>(z.center.y())};
}

}  // namespace

TEST(TraceConfig, DefaultsFollowFrameSize) {
  const auto c = dgr::TraceConfig::defaults_for(kW, kH);
  EXPECT_DOUBLE_EQ(c.start_zone.center.x(), 48.0);
  EXPECT_DOUBLE_EQ(c.start_zone.center.y(), 120.0);
  EXPECT_DOUBLE_EQ(c.end_zone.center.x(), 272.0);
  EXPECT_DOUBLE_EQ(c.start_zone.radius, 19.2);
  EXPECT_NO_THROW(c.validate(kW, kH));
  auto overlap = c;
  overlap.end_zone.center = overlap.start_zone.center + Eigen::Vector2d(10, 0);
  EXPECT_THROW(overlap.validate(kW, kH), dgr::InvalidArgument);
  auto outside = c;
  outside.start_zone.center.x() = 5;
  EXPECT_THROW(outside.validate(kW, kH), dgr::InvalidArgument);
}

TEST(TraceStep, StartsAtStartZoneCenter) {
  const auto config = dgr::TraceConfig::defaults_for(kW, kH);
  const auto p = zone_pixel(config.start_zone);
  auto [state, event] = dgr::trace_step(dgr::TraceState::idle(kW, kH), square_blob(p.x, p.y), config, 1);
  EXPECT_EQ(state.phase, dgr::TracePhase::Tracing);
  EXPECT_EQ(event.kind, dgr::TraceEventKind::Started);
  EXPECT_EQ(state.path.size(), 1u);
  EXPECT_EQ(state.accumulator.count(), 25);
}

TEST(TraceStep, IdleIgnoresBlobsOutsideStartZone) {
  const auto config = dgr::TraceConfig::defaults_for(kW, kH);
  auto [state, event] = dgr::trace_step(dgr::TraceState::idle(kW, kH), square_blob(160, 120), config, 1);
  EXPECT_EQ(state.phase, dgr::TracePhase::Idle);
  EXPECT_EQ(event.kind, dgr::TraceEventKind::None);
  EXPECT_FALSE(state.accumulator.any());
  auto [state2, event2] = dgr::trace_step(state, std::nullopt, config, 2);
  EXPECT_EQ(state2.phase, dgr::TracePhase::Idle);
}

TEST(TraceStep, CompletesAtEndZoneAfterEnoughPoints) {
  const auto config = dgr::TraceConfig::defaults_for(kW, kH);
  auto state = dgr::TraceState::idle(kW, kH);
  const auto s = zone_pixel(config.start_zone);
  const auto e = zone_pixel(config.end_zone);
  state = dgr::trace_step(state, square_blob(s.x, s.y), config, 0).state;
  for (int i = 1; i < 12; ++i) {
    state = dgr::trace_step(state, square_blob(s.x + 18 * i, s.y - 40), config, i).state;
  }
  ASSERT_EQ(state.path.size(), 12u);
  auto [done, event] = dgr::trace_step(state, square_blob(e.x, e.y), config, 12);
  EXPECT_EQ(done.phase, dgr::TracePhase::Complete);
  ASSERT_EQ(event.kind, dgr::TraceEventKind::Completed);
  ASSERT_TRUE(event.pattern.has_value());
  EXPECT_EQ((*event.pattern == 255).count(), done.accumulator.count());
  // Terminal until reset.
  auto [still, none] = dgr::trace_step(done, square_blob(s.x, s.y), config, 13);
  EXPECT_EQ(still.phase, dgr::TracePhase::Complete);
  EXPECT_EQ(none.kind, dgr::TraceEventKind::None);
}

TEST(TraceStep, EarlyEndZoneEntryKeepsTracing) {
  const auto config = dgr::TraceConfig::defaults_for(kW, kH);
  auto state = dgr::TraceState::idle(kW, kH);
  const auto s = zone_pixel(config.start_zone);
  const auto e = zone_pixel(config.end_zone);
  state = dgr::trace_step(state, square_blob(s.x, s.y), config, 0).state;
  auto [next, event] = dgr::trace_step(state, square_blob(e.x, e.y), config, 1);
  EXPECT_EQ(next.phase, dgr::TracePhase::Tracing);
  EXPECT_EQ(event.kind, dgr::TraceEventKind::None);
}

TEST(TraceStep, AbortsAfterGapTolerance) {
  auto config = dgr::TraceConfig::defaults_for(kW, kH);
  config.gap_tolerance = 5;
  const auto s = zone_pixel(config.start_zone);
  auto state = dgr::trace_step(dgr::TraceState::idle(kW, kH), square_blob(s.x, s.y), config, 0).state;
  for (int i = 1; i <= 5; ++i) {
    auto [next, event] = dgr::trace_step(state, std::nullopt, config, i);
    EXPECT_EQ(next.phase, dgr::TracePhase::Tracing);
    EXPECT_EQ(event.kind, dgr::TraceEventKind::None);
    state = next;
  }
  auto [aborted, event] = dgr::trace_step(state, std::nullopt, config, 6);
  EXPECT_EQ(aborted.phase, dgr::TracePhase::Idle);
  EXPECT_EQ(event.kind, dgr::TraceEventKind::Aborted);
  EXPECT_TRUE(aborted.path.empty());
  EXPECT_FALSE(aborted.accumulator.any());
}

TEST(TraceStep, RestartingInStartZoneIsNoOp) {
  const auto config = dgr::TraceConfig::defaults_for(kW, kH);
  const auto s = zone_pixel(config.start_zone);
  auto state = dgr::trace_step(dgr::TraceState::idle(kW, kH), square_blob(s.x, s.y), config, 0).state;
  auto [again, event] = dgr::trace_step(state, square_blob(s.x + 1, s.y), config, 1);
  EXPECT_EQ(event.kind, dgr::TraceEventKind::None);
  EXPECT_EQ(again.path.size(), 2u);
}

TEST(TraceStep, LargeJumpsAreBridged) {
  const auto config = dgr::TraceConfig::defaults_for(kW, kH);
  const auto s = zone_pixel(config.start_zone);
  auto state = dgr::trace_step(dgr::TraceState::idle(kW, kH), square_blob(s.x, s.y), config, 0).state;
  state = dgr::trace_step(state, square_blob(s.x + 60, s.y), config, 1).state;
  // Every pixel on the straight run between the two squares is inked.
  for (int x = s.x; x <= s.x + 60; ++x) EXPECT_TRUE(state.accumulator(s.y, x)) << x;
}

TEST(Bridge, DegenerateSegmentStampsSquare) {
  const auto out = dgr::bridge(dgr::BitMask::Zero(9, 9), {4, 4}, {4, 4}, 3);
  EXPECT_EQ(out.count(), 9);
  EXPECT_TRUE(out.block(3, 3, 3, 3).all());
}

TEST(Bridge, HorizontalUnitWidth) {
  const auto out = dgr::bridge(dgr::BitMask::Zero(4, 8), {0, 0}, {7, 0}, 1);
  EXPECT_EQ(out.count(), 8);
  EXPECT_TRUE(out.row(0).all());
}

TEST(Bridge, KeepsExistingBits) {
  dgr::BitMask canvas = dgr::BitMask::Zero(10, 10);
  canvas(9, 9) = true;
  EXPECT_TRUE(dgr::bridge(canvas, {0, 0}, {3, 3}, 1)(9, 9));
}

TEST(Bridge, RandomSegmentsStayWithinHalfWidth) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> coord(0, 39);
  std::uniform_int_distribution<int> width(1, 6);
  for (int trial = 0; trial < 300; ++trial) {
    const dgr::Pixel a{coord(rng), coord(rng)};
    const dgr::Pixel b{coord(rng), coord(rng)};
    const int w = width(rng);
    const auto out = dgr::bridge(dgr::BitMask::Zero(40, 40), a, b, w);
    EXPECT_TRUE(out(a.y, a.x));
    EXPECT_TRUE(out(b.y, b.x));
    for (int y = 0; y < 40; ++y) {
      for (int x = 0; x < 40; ++x) {
        if (!out(y, x)) continue;
        const double d = oracle::chebyshev_to_segment(x, y, a.x, a.y, b.x, b.y);
        // Odd widths: exactly w/2. Even widths stamp the same square as w+1.
        const double bound = (w % 2 == 1 ? w / 2.0 : w / 2 + 0.5);
        ASSERT_LE(d, bound + 1e-9) << "trial " << trial;
      }
    }
  }
}

TEST(FinalizePattern, RequiresCompletePhase) {
  EXPECT_THROW(dgr::finalize_pattern(dgr::TraceState::idle(kW, kH)), dgr::WrongPhaseError);
  auto state = dgr::TraceState::idle(20, 20);
  state.phase = dgr::TracePhase::Complete;
  state.accumulator.block(0, 0, 10, 10).setConstant(true);
  const auto img = dgr::finalize_pattern(state);
  EXPECT_EQ((img == 255).count(), 100);
  EXPECT_EQ((img == 0).count(), 300);
}

TEST(TraceProperties, RandomTrajectories) {
  const auto config = dgr::TraceConfig::defaults_for(kW, kH);
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    auto state = dgr::TraceState::idle(kW, kH);
    bool started = false;
    for (int step = 0; step < 60; ++step) {
      std::optional<dgr::Blob> blob;
      const double r = u(rng);
      if (r < 0.15) {
        blob = std::nullopt;
      } else if (r < 0.3) {
        blob = square_blob(static_cast<int>(config.start_zone.center.x()), static_cast<int>(config.start_zone.center.y()));
      } else if (r < 0.45) {
        blob = square_blob(static_cast<int>(config.end_zone.center.x()), static_cast<int>(config.end_zone.center.y()));
      } else {
        blob = square_blob(3 + static_cast<int>(u(rng) * (kW - 6)), 3 + static_cast<int>(u(rng) * (kH - 6)));
      }
      const auto before = state.accumulator.count();
      const auto phase_before = state.phase;
      auto [next, event] = dgr::trace_step(state, blob, config, step);
      if (event.kind == dgr::TraceEventKind::Started) started = true;
      if (event.kind == dgr::TraceEventKind::Completed) {
        ASSERT_TRUE(started);
        ASSERT_GE(next.path.size(), config.min_path_points);
      }
      if (phase_before == dgr::TracePhase::Tracing && next.phase == dgr::TracePhase::Tracing) {
        ASSERT_GE(next.accumulator.count(), before);
      }
      if (next.phase == dgr::TracePhase::Idle) {
        ASSERT_TRUE(next.path.empty());
        ASSERT_FALSE(next.accumulator.any());
      }
      state = std::move(next);
      if (state.phase == dgr::TracePhase::Complete) {
        state = dgr::TraceState::idle(kW, kH);
        started = false;
      }
    }
  }
}
