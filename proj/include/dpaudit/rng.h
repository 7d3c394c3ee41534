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

#ifndef DPAUDIT_RNG_H_
#define DPAUDIT_RNG_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace dpaudit {

// Serialized generator state. The byte layout is a family tag followed by
// the raw state words, so a state from another generator family is rejected
// on restore.
struct RngState {
  std::vector<std::uint8_t> bytes;

  // FNV-1a over `bytes`.
  std::uint64_t Digest() const;
  // 16 lowercase hex digits.
  std::string DigestHex() const;
  std::string ToHex() const;
  static RngState FromHex(const std::string& hex);

  friend bool operator==(const RngState&, const RngState&) = default;
};

// xoshiro256** seeded through splitmix64. Every draw primitive below consumes
// a fixed number of 64-bit outputs, which keeps replayed runs aligned.
class Generator {
 public:
  // Family tag written at the front of every RngState.
  static constexpr char kFamily[8] = {'X', 'S', 'R', '2', '5', '6', 'v', '1'};

  explicit Generator(std::uint64_t seed = 0);

  // Child stream for parallel sampling: a pure function of the ids.
  static Generator Derive(std::uint64_t seed, std::uint64_t call_index,
                          std::uint64_t replicate, std::uint64_t stream = 0);

  void Reseed(std::uint64_t seed);

  RngState Snapshot() const;
  // Throws ParseError on malformed bytes or a foreign family tag.
  void Restore(const RngState& state);

  std::uint64_t NextU64();

  // Uniform in [0, 1), 53 bits.
  double Uniform();
  // Uniform in the open interval (0, 1), 53 bits. One draw.
  double OpenUniform();
  // Inverse-CDF Laplace, one draw. scale == 0 gives 0 (the draw is still
  // consumed).
  double Laplace(double scale);
  // Inverse-CDF standard normal times sigma, one draw.
  double Gaussian(double sigma);
  // One draw; probs must be nonnegative and sum to 1 within 1e-12.
  std::size_t Categorical(std::span<const double> probs);
  // One draw, no validation. Falls back to the last index when the weights
  // are not finite. Used by unguarded mechanism variants.
  std::size_t CategoricalUnchecked(std::span<const double> probs);

 private:
  std::array<std::uint64_t, 4> s_;
};

// splitmix64 finalizer; exposed for seed derivation elsewhere.
std::uint64_t MixSeed(std::uint64_t x);

}  // namespace dpaudit

#endif  // DPAUDIT_RNG_H_
