#include <random>

#include <gtest/gtest.h>

#include "dgr/errors.hpp"
#include "dgr/imaging.hpp"
#include "oracles/oracles.hpp"

namespace {

dgr::BitMask random_mask(std::mt19937_64& rng, int w, int h, double density) {
  std::bernoulli_distribution bit(density);
  dgr::BitMask m(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) m(y, x) = bit(rng);
  return m;
}

void expect_matches_oracle(const dgr::BitMask& mask, dgr::Connectivity conn) {
  const auto blobs = dgr::find_blobs(mask, conn, 1);
  auto expected = oracle::sorted_by_pixels(oracle::flood_fill(mask, static_cast<int>(conn)));
  std::vector<oracle::Component> got;
  for (const auto& b : blobs) {
    oracle::Component c;
    for (const auto& p : b.pixels) c.pixels.emplace_back(p.y, p.x);
    std::sort(c.pixels.begin(), c.pixels.end());
    c.area = b.area;
    c.cx = b.centroid.x();
    c.cy = b.centroid.y();
    c.x_min = b.bbox.x_min;
    c.y_min = b.bbox.y_min;
    c.x_max = b.bbox.x_max;
    c.y_max = b.bbox.y_max;
    got.push_back(std::move(c));
  }
  got = oracle::sorted_by_pixels(std::move(got));
  ASSERT_EQ(got.size(), expected.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    EXPECT_EQ(got[i].pixels, expected[i].pixels);
    EXPECT_EQ(got[i].area, expected[i].area);
    EXPECT_EQ(got[i].cx, expected[i].cx);
    EXPECT_EQ(got[i].cy, expected[i].cy);
    EXPECT_EQ(got[i].x_min, expected[i].x_min);
    EXPECT_EQ(got[i].y_max, expected[i].y_max);
  }
}

}  // namespace

TEST(Threshold, AllZeroFrameGivesEmptyMask) {
  const auto frame = dgr::make_frame(16, 16);
  EXPECT_FALSE(dgr::threshold(frame, 200).any());
}

TEST(Threshold, SinglePixelIsSelected) {
  auto frame = dgr::make_frame(16, 16);
  frame.pixels(3, 3) = 255;
  const auto mask = dgr::threshold(frame, 200);
  EXPECT_EQ(mask.count(), 1);
  EXPECT_TRUE(mask(3, 3));
}

TEST(Threshold, MatchesElementwiseComparison) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> px(0, 255);
  for (int trial = 0; trial < 1000; ++trial) {
    dgr::GrayImage img(32, 32);
    for (Eigen::Index i = 0; i < img.size(); ++i) img.data()[i] = static_cast<std::uint8_t>(px(rng));
    const auto mask = dgr::threshold(img, 128);
    for (int y = 0; y < 32; ++y)
      for (int x = 0; x < 32; ++x) ASSERT_EQ(mask(y, x), img(y, x) >= 128);
  }
}

TEST(Threshold, ExtremeThresholds) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> px(0, 255);
  dgr::GrayImage img(20, 20);
  for (Eigen::Index i = 0; i < img.size(); ++i) img.data()[i] = static_cast<std::uint8_t>(px(rng));
  img(0, 0) = 255;
  EXPECT_TRUE(dgr::threshold(img, 0).all());
  const auto top = dgr::threshold(img, 255);
  for (Eigen::Index i = 0; i < img.size(); ++i) EXPECT_EQ(top.data()[i], img.data()[i] == 255);
}

TEST(FindBlobs, TwoSquares) {
  dgr::BitMask m = dgr::BitMask::Zero(8, 8);
  m.block(0, 0, 2, 2).setConstant(true);
  m.block(5, 5, 2, 2).setConstant(true);
  const auto blobs = dgr::find_blobs(m, dgr::Connectivity::Eight, 1);
  ASSERT_EQ(blobs.size(), 2u);
  EXPECT_EQ(blobs[0].area, 4u);
  EXPECT_EQ(blobs[1].area, 4u);
  EXPECT_DOUBLE_EQ(blobs[0].centroid.x(), 0.5);
  EXPECT_DOUBLE_EQ(blobs[0].centroid.y(), 0.5);
  EXPECT_DOUBLE_EQ(blobs[1].centroid.x(), 5.5);
  EXPECT_DOUBLE_EQ(blobs[1].centroid.y(), 5.5);
}

TEST(FindBlobs, DiagonalNeighboursDependOnConnectivity) {
  dgr::BitMask m = dgr::BitMask::Zero(4, 4);
  m(1, 1) = m(2, 2) = true;
  EXPECT_EQ(dgr::find_blobs(m, dgr::Connectivity::Eight).size(), 1u);
  EXPECT_EQ(dgr::find_blobs(m, dgr::Connectivity::Eight)[0].area, 2u);
  const auto four = dgr::find_blobs(m, dgr::Connectivity::Four);
  ASSERT_EQ(four.size(), 2u);
  EXPECT_EQ(four[0].area, 1u);
}

TEST(FindBlobs, EmptyMaskAndMinArea) {
  EXPECT_TRUE(dgr::find_blobs(dgr::BitMask::Zero(5, 5), dgr::Connectivity::Eight).empty());
  dgr::BitMask m = dgr::BitMask::Zero(10, 10);
  m(0, 0) = true;
  m.block(4, 4, 3, 3).setConstant(true);
  const auto blobs = dgr::find_blobs(m, dgr::Connectivity::Eight, 5);
  ASSERT_EQ(blobs.size(), 1u);
  EXPECT_EQ(blobs[0].area, 9u);
}

TEST(FindBlobs, UShapeMergesLateLabels) {
  // Two arms that only meet at the bottom row exercise label unification.
  dgr::BitMask m = dgr::BitMask::Zero(5, 5);
  m.col(0).setConstant(true);
  m.col(4).setConstant(true);
  m.row(4).setConstant(true);
  const auto blobs = dgr::find_blobs(m, dgr::Connectivity::Four);
  ASSERT_EQ(blobs.size(), 1u);
  EXPECT_EQ(blobs[0].area, 13u);
}

TEST(FindBlobs, MatchesFloodFillOnRandomMasks) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const auto mask = random_mask(rng, 32, 32, 0.3);
    expect_matches_oracle(mask, dgr::Connectivity::Eight);
    expect_matches_oracle(mask, dgr::Connectivity::Four);
  }
}

TEST(FindBlobs, AreasSumToSetBits) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const auto mask = random_mask(rng, 24, 17, 0.45);
    std::size_t total = 0;
    for (const auto& b : dgr::find_blobs(mask, dgr::Connectivity::Eight)) total += b.area;
    EXPECT_EQ(total, static_cast<std::size_t>(mask.count()));
  }
}

TEST(FindBlobs, OrderingIsCanonical) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto blobs = dgr::find_blobs(random_mask(rng, 32, 32, 0.25), dgr::Connectivity::Eight);
    for (std::size_t i = 1; i < blobs.size(); ++i) EXPECT_FALSE(dgr::blob_precedes(blobs[i], blobs[i - 1]));
  }
}

TEST(FindBlobs, TransposeCommutes) {
  // Labeling the transposed mask (a different scan order over the same
  // components) finds the same pixel sets.
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const auto mask = random_mask(rng, 20, 20, 0.35);
    const dgr::BitMask t = mask.transpose();
    auto collect = [](const std::vector<dgr::Blob>& blobs, bool swap) {
      std::vector<std::vector<std::pair<int, int>>> sets;
      for (const auto& b : blobs) {
        std::vector<std::pair<int, int>> s;
        for (const auto& p : b.pixels) s.emplace_back(swap ? p.x : p.y, swap ? p.y : p.x);
        std::sort(s.begin(), s.end());
        sets.push_back(s);
      }
      std::sort(sets.begin(), sets.end());
      return sets;
    };
    EXPECT_EQ(collect(dgr::find_blobs(mask, dgr::Connectivity::Eight), false),
              collect(dgr::find_blobs(t, dgr::Connectivity::Eight), true));
  }
}

TEST(PrimaryBlob, Rules) {
  EXPECT_FALSE(dgr::primary_blob({}).has_value());

  dgr::BitMask m = dgr::BitMask::Zero(12, 12);
  m.block(0, 0, 1, 5).setConstant(true);   // area 5
  m.block(6, 6, 3, 3).setConstant(true);   // area 9
  auto blobs = dgr::find_blobs(m, dgr::Connectivity::Eight);
  std::reverse(blobs.begin(), blobs.end());
  EXPECT_EQ(dgr::primary_blob(blobs)->area, 9u);

  dgr::BitMask tie = dgr::BitMask::Zero(8, 8);
  tie.block(0, 0, 2, 2).setConstant(true);
  tie.block(0, 5, 2, 2).setConstant(true);
  auto tied = dgr::find_blobs(tie, dgr::Connectivity::Eight);
  std::reverse(tied.begin(), tied.end());
  const auto best = dgr::primary_blob(tied);
  EXPECT_EQ(best->bbox.x_min, 0);
  EXPECT_EQ(best->bbox.y_min, 0);
}

TEST(Frame, RejectsTinyFrames) {
  EXPECT_THROW(dgr::make_frame(15, 16), dgr::Error);
  EXPECT_NO_THROW(dgr::make_frame(16, 16));
}
