// Copyright 2026 The dpaudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <array>
#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "dpaudit/errors.h"
#include "dpaudit/rng.h"

namespace dpaudit {
namespace {

TEST_CASE("restore reproduces the draws that followed the snapshot") {
  Generator g(42);
  for (int i = 0; i < 3; ++i) g.Uniform();
  const RngState s = g.Snapshot();
  const double v4 = g.Uniform();
  const double v5 = g.Laplace(1.0);
  g.Restore(s);
  CHECK(g.Uniform() == v4);
  CHECK(g.Laplace(1.0) == v5);
}

TEST_CASE("snapshot right after seeding matches a fresh generator") {
  Generator a(7);
  Generator b(1);
  b.Restore(a.Snapshot());
  Generator c(7);
  for (int i = 0; i < 16; ++i) CHECK(b.NextU64() == c.NextU64());
}

TEST_CASE("digest is a pure function of the state bytes") {
  Generator g(3);
  g.Uniform();
  const RngState s1 = g.Snapshot();
  const RngState s2 = g.Snapshot();
  CHECK(s1.DigestHex() == s2.DigestHex());
  CHECK(s1.DigestHex().size() == 16);
  Generator h(99);
  h.Restore(s1);
  CHECK(h.Snapshot().DigestHex() == s1.DigestHex());
  CHECK(RngState::FromHex(s1.ToHex()) == s1);
}

TEST_CASE("foreign or malformed states are rejected") {
  Generator g(1);
  RngState s = g.Snapshot();
  RngState foreign = s;
  foreign.bytes[0] ^= 0xff;
  CHECK_THROWS_AS(g.Restore(foreign), ParseError);
  RngState truncated = s;
  truncated.bytes.pop_back();
  CHECK_THROWS_AS(g.Restore(truncated), ParseError);
  CHECK_THROWS_AS(RngState::FromHex("zz"), ParseError);
}

TEST_CASE("round trip holds for many seeds and draw counts") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Generator g(seed);
    for (std::uint64_t i = 0; i < seed * 37; ++i) g.NextU64();
    const RngState s = g.Snapshot();
    std::vector<std::uint64_t> first;
    const int k = seed == 19 ? 10000 : 200;
    for (int i = 0; i < k; ++i) first.push_back(g.NextU64());
    g.Restore(s);
    for (int i = 0; i < k; ++i) REQUIRE(g.NextU64() == first[static_cast<std::size_t>(i)]);
  }
}

TEST_CASE("digests of distinct states differ") {
  std::set<std::string> seen;
  Generator g(5);
  for (int i = 0; i < 1000; ++i) {
    g.NextU64();
    seen.insert(g.Snapshot().DigestHex());
  }
  CHECK(seen.size() == 1000);
}

TEST_CASE("laplace moments at scale 1") {
  Generator g(11);
  constexpr int kN = 100000;
  double sum = 0, sq = 0;
  for (int i = 0; i < kN; ++i) {
    const double x = g.Laplace(1.0);
    sum += x;
    sq += x * x;
  }
  const double mean = sum / kN;
  const double var = sq / kN - mean * mean;
  CHECK(mean >= -0.02);
  CHECK(mean <= 0.02);
  CHECK(var >= 1.9);
  CHECK(var <= 2.1);
}

TEST_CASE("gaussian moments") {
  Generator g(12);
  constexpr int kN = 100000;
  double sum = 0, sq = 0;
  for (int i = 0; i < kN; ++i) {
    const double x = g.Gaussian(2.0);
    sum += x;
    sq += x * x;
  }
  const double var = sq / kN - (sum / kN) * (sum / kN);
  CHECK(var == doctest::Approx(4.0).epsilon(0.03));
}

TEST_CASE("uniform stays in [0, 1) and categorical honors degenerate weights") {
  Generator g(13);
  for (int i = 0; i < 10000; ++i) {
    const double u = g.Uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    const double o = g.OpenUniform();
    REQUIRE(o > 0.0);
    REQUIRE(o < 1.0);
  }
  const std::array<double, 3> p = {1.0, 0.0, 0.0};
  for (int i = 0; i < 1000; ++i) REQUIRE(g.Categorical(p) == 0);
}

TEST_CASE("invalid draw parameters throw") {
  Generator g(1);
  CHECK_THROWS_AS(g.Laplace(-1.0), InvalidArgumentError);
  CHECK_THROWS_AS(g.Gaussian(-1.0), InvalidArgumentError);
  const std::array<double, 2> bad = {0.5, 0.6};
  CHECK_THROWS_AS(g.Categorical(bad), InvalidArgumentError);
  const std::array<double, 2> negative = {1.5, -0.5};
  CHECK_THROWS_AS(g.Categorical(negative), InvalidArgumentError);
}

TEST_CASE("each draw consumes exactly one word") {
  Generator a(21);
  Generator b(21);
  a.Laplace(2.0);
  a.Gaussian(1.0);
  const std::array<double, 2> p = {0.5, 0.5};
  a.Categorical(p);
  for (int i = 0; i < 3; ++i) b.NextU64();
  CHECK(a.Snapshot() == b.Snapshot());
}

TEST_CASE("derived streams are pure functions of their ids") {
  Generator a = Generator::Derive(1, 2, 3, 0);
  Generator b = Generator::Derive(1, 2, 3, 0);
  Generator c = Generator::Derive(1, 2, 3, 1);
  const std::uint64_t x = a.NextU64();
  CHECK(x == b.NextU64());
  CHECK(x != c.NextU64());
}

}  // namespace
}  // namespace dpaudit
