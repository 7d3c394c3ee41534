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

#include "dpaudit/rng.h"

#include <cmath>
#include <cstring>

#include <boost/math/distributions/normal.hpp>

#include "dpaudit/errors.h"

namespace dpaudit {
namespace {

constexpr std::size_t kFamilySize = sizeof(Generator::kFamily);
constexpr std::size_t kStateBytes = kFamilySize + 4 * 8;

std::uint64_t Rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

std::uint64_t SplitMixNext(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  return MixSeed(x);
}

int HexValue(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::uint64_t MixSeed(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t RngState::Digest() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string RngState::DigestHex() const {
  static constexpr char kHex[] = "0123456789abcdef";
  std::uint64_t d = Digest();
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = kHex[d & 0xf];
    d >>= 4;
  }
  return out;
}

std::string RngState::ToHex() const {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(kHex[b >> 4]);
    out.push_back(kHex[b & 0xf]);
  }
  return out;
}

RngState RngState::FromHex(const std::string& hex) {
  if (hex.size() % 2 != 0) throw ParseError("rng state: odd hex length");
  RngState state;
  state.bytes.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    int hi = HexValue(hex[i]);
    int lo = HexValue(hex[i + 1]);
    if (hi < 0 || lo < 0) throw ParseError("rng state: invalid hex digit");
    state.bytes.push_back(static_cast<std::uint8_t>(hi * 16 + lo));
  }
  return state;
}

Generator::Generator(std::uint64_t seed) { Reseed(seed); }

void Generator::Reseed(std::uint64_t seed) {
  std::uint64_t x = seed;
  for (auto& word : s_) word = SplitMixNext(x);
}

Generator Generator::Derive(std::uint64_t seed, std::uint64_t call_index,
                            std::uint64_t replicate, std::uint64_t stream) {
  std::uint64_t h = MixSeed(seed ^ 0x6a09e667f3bcc909ULL);
  h = MixSeed(h ^ (call_index + 0x3c6ef372fe94f82bULL));
  h = MixSeed(h ^ (stream + 0xa54ff53a5f1d36f1ULL));
  h = MixSeed(h ^ (replicate + 0x510e527fade682d1ULL));
  return Generator(h);
}

RngState Generator::Snapshot() const {
  RngState state;
  state.bytes.resize(kStateBytes);
  std::memcpy(state.bytes.data(), kFamily, kFamilySize);
  for (std::size_t w = 0; w < 4; ++w) {
    for (std::size_t b = 0; b < 8; ++b) {
      state.bytes[kFamilySize + w * 8 + b] =
          static_cast<std::uint8_t>(s_[w] >> (8 * b));
    }
  }
  return state;
}

void Generator::Restore(const RngState& state) {
  if (state.bytes.size() != kStateBytes) {
    throw ParseError("rng state: expected " + std::to_string(kStateBytes) +
                     " bytes, got " + std::to_string(state.bytes.size()));
  }
  if (std::memcmp(state.bytes.data(), kFamily, kFamilySize) != 0) {
    throw ParseError("rng state: generator family mismatch");
  }
  std::array<std::uint64_t, 4> words{};
  for (std::size_t w = 0; w < 4; ++w) {
    for (std::size_t b = 0; b < 8; ++b) {
      words[w] |= static_cast<std::uint64_t>(state.bytes[kFamilySize + w * 8 + b])
                  << (8 * b);
    }
  }
  if (words == std::array<std::uint64_t, 4>{}) {
    throw ParseError("rng state: all-zero state is invalid");
  }
  s_ = words;
}

std::uint64_t Generator::NextU64() {
  const std::uint64_t result = Rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = Rotl(s_[3], 45);
  return result;
}

double Generator::Uniform() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

double Generator::OpenUniform() {
  return (static_cast<double>(NextU64() >> 11) + 0.5) * 0x1.0p-53;
}

double Generator::Laplace(double scale) {
  if (!(scale >= 0)) throw InvalidArgumentError("laplace: scale must be >= 0");
  const double u = OpenUniform() - 0.5;
  if (scale == 0) return 0.0;
  const double magnitude = -scale * std::log1p(-2.0 * std::abs(u));
  return u < 0 ? -magnitude : magnitude;
}

double Generator::Gaussian(double sigma) {
  if (!(sigma >= 0)) throw InvalidArgumentError("gaussian: sigma must be >= 0");
  const double u = OpenUniform();
  if (sigma == 0) return 0.0;
  static const boost::math::normal_distribution<double> kStandard(0.0, 1.0);
  return sigma * boost::math::quantile(kStandard, u);
}

std::size_t Generator::Categorical(std::span<const double> probs) {
  if (probs.empty()) throw InvalidArgumentError("categorical: empty vector");
  double total = 0;
  for (double p : probs) {
    if (!(p >= 0) || !std::isfinite(p)) {
      throw InvalidArgumentError("categorical: negative or non-finite mass");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw InvalidArgumentError("categorical: probabilities sum to " +
                               std::to_string(total));
  }
  return CategoricalUnchecked(probs);
}

std::size_t Generator::CategoricalUnchecked(std::span<const double> probs) {
  const double u = Uniform();
  double cumulative = 0;
  std::size_t last_positive = probs.size() - 1;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] > 0) last_positive = i;
  }
  for (std::size_t i = 0; i < probs.size(); ++i) {
    cumulative += probs[i];
    if (u < cumulative && probs[i] > 0) return i;
  }
  // Rounding left u above the final cumulative sum.
  return last_positive;
}

}  // namespace dpaudit
