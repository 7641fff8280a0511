#include <random>

#include <gtest/gtest.h>

#include "dgr/errors.hpp"
#include "dgr/gateway.hpp"
#include "support/synthetic_model.hpp"

using nlohmann::json;
using dgr::testing::synthetic_ac_model;

namespace {

json start_message(int w = 320, int h = 240) { return {{"type", "session_start"}, {"width", w}, {"height", h}}; }

json single(dgr::GatewaySession& session, const json& message) {
  auto replies = session.handle(message);
  EXPECT_EQ(replies.size(), 1u);
  return replies.at(0);
}

std::vector<json> pointer_script(char letter) {
  auto script = dgr::letter_path(letter, dgr::testing::default_zones(), 320, 240);
  std::vector<json> messages{start_message()};
  for (const auto& p : dgr::sample_path(script)) messages.push_back({{"type", "pointer"}, {"x", p.x()}, {"y", p.y()}});
  return messages;
}

}  // namespace

TEST(Rle, RoundTripRandomMasks) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    const int w = 1 + static_cast<int>(rng() % 20);
    const int h = 1 + static_cast<int>(rng() % 20);
    dgr::BitMask mask(h, w);
    for (Eigen::Index i = 0; i < mask.size(); ++i) mask.data()[i] = rng() % 3 == 0;
    const auto rows = dgr::encode_rle(mask);
    ASSERT_EQ(rows.size(), static_cast<std::size_t>(h));
    ASSERT_TRUE((dgr::decode_rle(rows, w, h) == mask).all());
  }
}

TEST(Rle, Format) {
  dgr::BitMask mask = dgr::BitMask::Zero(2, 6);
  mask(0, 1) = mask(0, 2) = mask(0, 5) = true;
  EXPECT_EQ(dgr::encode_rle(mask), json::parse("[[1,2,5,1],[]]"));
  EXPECT_THROW(dgr::decode_rle(json::parse("[[5,2],[]]"), 6, 2), dgr::FormatError);
  EXPECT_THROW(dgr::decode_rle(json::parse("[[0,1]]"), 6, 2), dgr::FormatError);
}

TEST(Gateway, HandshakeReportsZonesAndEmptyAccumulator) {
  dgr::GatewaySession session(synthetic_ac_model());
  EXPECT_FALSE(session.active());
  const auto reply = single(session, start_message());
  EXPECT_EQ(reply["type"], "update");
  EXPECT_EQ(reply["seq"], 0);
  EXPECT_TRUE(reply["frame"].is_null());
  EXPECT_EQ(reply["phase"], "idle");
  EXPECT_DOUBLE_EQ(reply["zones"]["start"]["x"].get<double>(), 0.15 * 320);
  EXPECT_DOUBLE_EQ(reply["zones"]["end"]["x"].get<double>(), 0.85 * 320);
  EXPECT_EQ(reply["accumulator"]["rows"].size(), 240u);
  EXPECT_TRUE(reply["prediction"].is_null());
  EXPECT_TRUE(session.active());
}

TEST(Gateway, ConfigOverridesAreReflected) {
  dgr::GatewaySession session(synthetic_ac_model());
  auto msg = start_message();
  msg["config"] = {{"start_zone", {{"x", 40}, {"y", 100}, {"radius", 15}}}, {"stroke_width", 5}};
  const auto reply = single(session, msg);
  EXPECT_EQ(reply["zones"]["start"]["x"], 40.0);
  EXPECT_EQ(reply["zones"]["start"]["radius"], 15.0);
}

TEST(Gateway, ProtocolAndValidationErrors) {
  dgr::GatewaySession session(synthetic_ac_model());
  auto code = [&](const json& message) { return single(session, message).value("code", std::string("none")); };
  EXPECT_EQ(code({{"type", "pointer"}, {"x", 1}, {"y", 1}}), "protocol");  // before start
  EXPECT_EQ(code(json::array()), "protocol");
  EXPECT_EQ(code({{"type", "wave"}}), "protocol");
  EXPECT_EQ(code(start_message(8, 8)), "validation");
  EXPECT_EQ(code({{"type", "session_start"}, {"width", "wide"}, {"height", 240}}), "protocol");
  auto overlap = start_message();
  overlap["config"] = {{"end_zone", {{"x", 50}, {"y", 120}, {"radius", 19}}}};
  EXPECT_EQ(code(overlap), "validation");
  EXPECT_EQ(code({{"type", "pointer"}, {"x", 1}, {"y", 1}}), "protocol");  // failed start leaves no session
  EXPECT_EQ(code(start_message()), "none");
  EXPECT_EQ(code({{"type", "pointer"}, {"x", 400}, {"y", 1}}), "validation");
  EXPECT_EQ(code({{"type", "pointer"}, {"x", 1}}), "protocol");

  const auto text = session.handle_text("{not json");
  ASSERT_EQ(text.size(), 1u);
  EXPECT_EQ(json::parse(text[0])["code"], "protocol");
  // The session survives errors.
  EXPECT_EQ(code({{"type", "pointer_absent"}}), "none");
}

TEST(Gateway, ScriptedCSessionRecognizesC) {
  dgr::GatewaySession session(synthetic_ac_model());
  std::vector<json> replies;
  for (const auto& m : pointer_script('C')) replies.push_back(single(session, m));
  EXPECT_EQ(replies[1]["event"], "started");
  EXPECT_EQ(replies[1]["phase"], "tracing");
  std::vector<std::size_t> completed;
  for (std::size_t i = 0; i < replies.size(); ++i) {
    if (replies[i]["event"] == "completed") completed.push_back(i);
  }
  ASSERT_EQ(completed.size(), 1u);
  const auto& done = replies[completed[0]];
  EXPECT_EQ(done["phase"], "complete");
  EXPECT_EQ(done["prediction"]["letter"], "C");
  EXPECT_EQ(done["pins"]["17"], "LOW");
  for (std::size_t i = 0; i < completed[0]; ++i) EXPECT_TRUE(replies[i]["prediction"].is_null());
  for (std::size_t i = 0; i < replies.size(); ++i) EXPECT_EQ(replies[i]["seq"], i);

  // The accumulator only grows while tracing.
  std::size_t previous = 0;
  for (std::size_t i = 1; i <= completed[0]; ++i) {
    const auto mask = dgr::decode_rle(replies[i]["accumulator"]["rows"], 320, 240);
    const auto ink = static_cast<std::size_t>(mask.count());
    EXPECT_GE(ink, previous);
    previous = ink;
  }

  // The next frame starts over; the pin state persists.
  for (std::size_t i = completed[0] + 1; i < replies.size(); ++i) {
    EXPECT_EQ(replies[i]["phase"], "idle");
    EXPECT_EQ(replies[i]["pins"]["17"], "LOW");
  }
}

TEST(Gateway, ResetReturnsToIdle) {
  dgr::GatewaySession session(synthetic_ac_model());
  auto messages = pointer_script('A');
  messages.resize(6);
  for (const auto& m : messages) single(session, m);
  const auto reply = single(session, {{"type", "reset"}});
  EXPECT_EQ(reply["phase"], "idle");
  EXPECT_TRUE(reply["path"].empty());
  EXPECT_TRUE(reply["frame"].is_null());
}

TEST(Gateway, IdenticalMessagesGiveIdenticalReplies) {
  const auto messages = pointer_script('A');
  auto transcript = [&] {
    dgr::GatewaySession session(synthetic_ac_model());
    std::string out;
    for (const auto& m : messages) {
      for (const auto& r : session.handle_text(m.dump())) out += r + "\n";
    }
    return out;
  };
  EXPECT_EQ(transcript(), transcript());
}

TEST(Gateway, HealthJson) {
  const auto health = dgr::health_json(*synthetic_ac_model());
  EXPECT_EQ(health["status"], "ok");
  EXPECT_EQ(health["algorithm"], "svm-linear");
  EXPECT_EQ(health["letters"], json::parse(R"(["A","C"])"));
  EXPECT_EQ(health["feature_dim"], 784);
}
