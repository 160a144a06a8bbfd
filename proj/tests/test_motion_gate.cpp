#include <doctest.h>

#include <deque>
#include <optional>
#include <random>

#include "handsign/error.hpp"
#include "handsign/motion_gate.hpp"
#include "oracles.hpp"

using namespace handsign;

namespace {

BinaryImage toggled(BinaryImage img, int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> px(0, static_cast<int>(img.size()) - 1);
  std::vector<bool> seen(img.size());
  for (int done = 0; done < n;) {
    const int i = px(rng);
    if (seen[static_cast<std::size_t>(i)]) continue;
    seen[static_cast<std::size_t>(i)] = true;
    img.flip(i % img.width(), i / img.width());
    ++done;
  }
  return img;
}

GrayImage as_gray(const BinaryImage& b) { return to_gray(b); }

}  // namespace

TEST_CASE("motion_parameter") {
  std::mt19937_64 rng(10);
  const BinaryImage a = oracle::random_bits(rng, 10, 10);

  CHECK(motion_parameter(a, a, a) == 0);

  const BinaryImage b = toggled(a, 7, rng);
  CHECK(motion_parameter(a, b, b) == oracle::brute_motion(a, b, b));
  CHECK(motion_parameter(a, b, b) == 7);

  const BinaryImage zero(10, 10);
  BinaryImage one(10, 10);
  for (int y = 0; y < 10; ++y)
    for (int x = 0; x < 10; ++x) one.set(x, y, true);
  CHECK(motion_parameter(zero, one, zero) == 100);

  CHECK_THROWS_AS(motion_parameter(a, BinaryImage(9, 10), a), Error);
}

TEST_CASE("motion_parameter properties on random triples") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const int w = 1 + i % 13;
    const int h = 1 + i % 7;
    const BinaryImage a = oracle::random_bits(rng, w, h);
    const BinaryImage b = oracle::random_bits(rng, w, h, 0.3);
    const BinaryImage c = oracle::random_bits(rng, w, h, 0.7);
    const auto m = motion_parameter(a, b, c);
    CHECK(m == motion_parameter(a, c, b));
    CHECK(m == oracle::brute_motion(a, b, c));
    CHECK(m <= a.size());
    CHECK(motion_parameter(a, a, a) == 0);
  }
}

TEST_CASE("MotionGate threshold is floor(M*N/100)") {
  CHECK(MotionGate(100, 100).threshold() == 100);
  CHECK(MotionGate(60, 80).threshold() == 48);
  CHECK(MotionGate(9, 11).threshold() == 0);
}

TEST_CASE("MotionGate push_frame") {
  std::mt19937_64 rng(12);
  SUBCASE("three identical frames capture the first") {
    const GrayImage f = oracle::random_image(rng, 20, 20);
    MotionGate gate(20, 20);
    CHECK_FALSE(gate.push_frame(f));
    CHECK_FALSE(gate.push_frame(f));
    const auto still = gate.push_frame(f);
    REQUIRE(still);
    CHECK(*still == f);
    CHECK(gate.window_size() == 0);
  }
  SUBCASE("fewer than three frames never capture") {
    MotionGate gate(8, 8);
    CHECK_FALSE(gate.push_frame(GrayImage(8, 8)));
    CHECK_FALSE(gate.push_frame(GrayImage(8, 8)));
  }
  SUBCASE("returns the oldest frame") {
    MotionGate gate(10, 10, ThresholdRule::at(128));
    GrayImage a(10, 10, 0);
    a(0, 0) = 1;  // differs in gray but not in bits
    CHECK_FALSE(gate.push_frame(a));
    CHECK_FALSE(gate.push_frame(GrayImage(10, 10, 2)));
    const auto still = gate.push_frame(GrayImage(10, 10, 3));
    REQUIRE(still);
    CHECK(*still == a);
  }
  SUBCASE("exactly threshold differing pixels is not static") {
    const BinaryImage a = oracle::random_bits(rng, 100, 100);
    const BinaryImage b = toggled(a, 100, rng);
    MotionGate gate(100, 100, ThresholdRule::at(127));
    gate.push_frame(as_gray(a));
    gate.push_frame(as_gray(b));
    CHECK_FALSE(gate.push_frame(as_gray(b)));
    CHECK(gate.last_motion() == 100);
    CHECK(gate.window_size() == 2);

    MotionGate below(100, 100, ThresholdRule::at(127));
    const BinaryImage c = toggled(a, 99, rng);
    below.push_frame(as_gray(a));
    below.push_frame(as_gray(c));
    CHECK(below.push_frame(as_gray(c)));
  }
  SUBCASE("dimension mismatch") {
    MotionGate gate(10, 10);
    CHECK_THROWS_AS(gate.push_frame(GrayImage(10, 11)), Error);
  }
  SUBCASE("otsu threshold is latched from the first frame") {
    MotionGate gate(4, 4);
    GrayImage first(4, 4, 10);
    for (int x = 0; x < 4; ++x) first(x, 0) = 200;
    gate.push_frame(first);
    REQUIRE(gate.latched_threshold());
    const auto t = *gate.latched_threshold();
    CHECK(t == otsu_threshold(first));
    gate.push_frame(GrayImage(4, 4, 90));
    CHECK(gate.latched_threshold() == t);
  }
}

TEST_CASE("MotionGate agrees with a brute-force window over random sequences") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const int w = 20;
    const int h = 10;
    const std::uint8_t t = 127;
    MotionGate gate(w, h, ThresholdRule::at(t));

    std::deque<BinaryImage> window;
    BinaryImage base = oracle::random_bits(rng, w, h);
    std::uniform_int_distribution<int> flips(0, 4);
    for (int i = 0; i < 50; ++i) {
      // threshold is 2 pixels here, so small random edits straddle it
      base = toggled(base, flips(rng), rng);
      const GrayImage frame = as_gray(base);

      window.push_back(base);
      bool expect = false;
      if (window.size() == 3) {
        expect = oracle::brute_motion(window[0], window[1], window[2]) < static_cast<std::size_t>(w * h / 100);
        if (expect) {
          window.clear();
        } else {
          window.pop_front();
        }
      }
      const auto got = gate.push_frame(frame);
      CHECK(got.has_value() == expect);
    }
  }
}
