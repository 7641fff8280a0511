#include <filesystem>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "dgr/errors.hpp"
#include "dgr/pgm.hpp"

namespace fs = std::filesystem;

TEST(Pgm, RoundTripsThroughStream) {
  std::mt19937_64 rng(1);
  dgr::GrayImage img(17, 23);
  for (Eigen::Index i = 0; i < img.size(); ++i) img.data()[i] = static_cast<std::uint8_t>(rng());
  std::stringstream buf;
  dgr::write_pgm(buf, img);
  EXPECT_TRUE((dgr::read_pgm(buf) == img).all());
}

TEST(Pgm, HeaderCommentsAreSkipped) {
  std::stringstream buf;
  buf << "P5\n# made by hand\n2 1\n255\n" << char(7) << char(200);
  const auto img = dgr::read_pgm(buf);
  ASSERT_EQ(img.cols(), 2);
  EXPECT_EQ(img(0, 1), 200);
}

TEST(Pgm, RejectsBadInput) {
  std::stringstream ascii("P2\n2 2\n255\n0 0 0 0\n");
  EXPECT_THROW(dgr::read_pgm(ascii), dgr::FormatError);
  std::stringstream deep("P5\n2 2\n65535\n");
  EXPECT_THROW(dgr::read_pgm(deep), dgr::FormatError);
  std::stringstream shortdata("P5\n4 4\n255\nabc");
  EXPECT_THROW(dgr::read_pgm(shortdata), dgr::FormatError);
}

TEST(Pgm, FrameDirectoryRoundTrip) {
  const fs::path dir = fs::temp_directory_path() / "dgr_pgm_seq_test";
  fs::remove_all(dir);
  std::vector<dgr::Frame> frames;
  for (int i = 1; i <= 3; ++i) {
    auto f = dgr::make_frame(16, 16, i);
    f.pixels(i, i) = 255;
    frames.push_back(f);
  }
  dgr::write_frame_sequence(dir, frames);
  EXPECT_TRUE(fs::exists(dir / "frame_000002.pgm"));
  const auto back = dgr::read_frame_sequence(dir);
  ASSERT_EQ(back.size(), 3u);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(back[i].index, i + 1);
    EXPECT_TRUE((back[i].pixels == frames[i].pixels).all());
  }
  fs::remove_all(dir);
  EXPECT_THROW(dgr::read_frame_sequence(dir), dgr::IoError);
}
