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

// Privacy primitives and their audit annotations.
//
// Every primitive carries an AuditSpec that tells the auditor which argument
// is sensitive, how to measure distances between two runs, and whether an
// analytic accountant vouches for it. Primitives with an accountant are
// trusted: the record/replay audit checks their calibration and the
// distributional audit uses the analytic loss distribution. The rest are
// sampled.

#ifndef DPAUDIT_MECHANISMS_H_
#define DPAUDIT_MECHANISMS_H_

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dpaudit/rng.h"
#include "dpaudit/value.h"

namespace dpaudit {

enum class Metric { kL1, kL2, kLinf, kHamming };

std::string MetricName(Metric m);
Metric ParseMetric(const std::string& name);

enum class AnalyticAccountant { kLaplace, kGaussian };

std::string AccountantName(AnalyticAccountant a);
AnalyticAccountant ParseAccountant(const std::string& name);

struct AuditSpec {
  // Mechanism label used in traces and reports, e.g. "LM".
  std::string kind;
  // Name of the argument the noise is applied to.
  std::string input_role = "x";
  // Name of the argument carrying the declared sensitivity.
  std::string sensitivity_role = "sensitivity";
  Metric metric = Metric::kL1;
  std::optional<AnalyticAccountant> accountant;

  bool trusted() const { return accountant.has_value(); }

  Value ToJson() const;
  static AuditSpec FromJson(const Value& v);
};

// Per-call parameters (the non-sensitive arguments of a primitive).
struct MechanismParams {
  double epsilon = 1.0;
  double delta = 0.0;
  // Declared sensitivity under the spec's metric.
  double sensitivity = 1.0;
  // Noise scale actually handed to the sampler (Laplace b or Gaussian sigma).
  // When absent it is derived from (epsilon, delta, sensitivity).
  std::optional<double> scale;

  // epsilon > 0, delta in [0, 1), sensitivity >= 0, scale >= 0.
  void Validate() const;

  Value ToJson() const;
  static MechanismParams FromJson(const Value& v);

  friend bool operator==(const MechanismParams&, const MechanismParams&) = default;
};

enum class OutputKind { kContinuous, kCategorical };

struct MechanismOptions {
  // Reject NaN and infinite inputs before anything is logged.
  bool guarded = true;
  // Test hook: draws are still consumed but the noise is forced to zero.
  bool zero_noise = false;
};

class Primitive {
 public:
  Primitive(AuditSpec spec, MechanismOptions options);
  virtual ~Primitive() = default;

  const AuditSpec& spec() const { return spec_; }
  const MechanismOptions& options() const { return options_; }
  bool guarded() const { return options_.guarded; }

  virtual OutputKind output_kind() const = 0;
  // Number of 64-bit generator outputs one call consumes.
  virtual std::size_t DrawCount(std::size_t input_size) const = 0;

  // Throws InputDomainError for non-finite entries when guarded, and
  // InvalidArgumentError for unusable parameters.
  void CheckCall(std::span<const double> input, const MechanismParams& params) const;

  // Runs the mechanism. Calls CheckCall first.
  std::vector<double> Run(std::span<const double> input,
                          const MechanismParams& params, Generator& gen) const;

  // Noise scale the sampler uses with these params, when the notion applies.
  virtual std::optional<double> RealizedScale(const MechanismParams& params) const;
  // Noise scale the declared (epsilon, delta, sensitivity) call for.
  virtual std::optional<double> ImpliedScale(const MechanismParams& params) const;

 protected:
  virtual void CheckParams(const MechanismParams& params) const;
  virtual std::vector<double> Apply(std::span<const double> input,
                                    const MechanismParams& params,
                                    Generator& gen) const = 0;

 private:
  AuditSpec spec_;
  MechanismOptions options_;
};

using PrimitivePtr = std::shared_ptr<const Primitive>;

// x + Lap(sensitivity / epsilon) per coordinate; |x| draws.
class LaplaceMechanism : public Primitive {
 public:
  explicit LaplaceMechanism(MechanismOptions options = {}, std::string kind = "LM");
  LaplaceMechanism(AuditSpec spec, MechanismOptions options);

  OutputKind output_kind() const override { return OutputKind::kContinuous; }
  std::size_t DrawCount(std::size_t n) const override { return n; }
  std::optional<double> RealizedScale(const MechanismParams& p) const override;
  std::optional<double> ImpliedScale(const MechanismParams& p) const override;

 protected:
  std::vector<double> Apply(std::span<const double> input, const MechanismParams& params,
                            Generator& gen) const override;
};

// Laplace noise reflected at a lower bound (outputs stay >= lower). One draw
// per coordinate.
class FoldedLaplaceMechanism : public LaplaceMechanism {
 public:
  FoldedLaplaceMechanism(double lower, MechanismOptions options = {},
                         std::string kind = "LaplaceFolded");

 protected:
  std::vector<double> Apply(std::span<const double> input, const MechanismParams& params,
                            Generator& gen) const override;

 private:
  double lower_;
};

// x + N(0, sigma^2) per coordinate, sigma either given or calibrated from
// (epsilon, delta, L2 sensitivity); |x| draws.
class GaussianMechanism : public Primitive {
 public:
  explicit GaussianMechanism(MechanismOptions options = {}, std::string kind = "GM");
  GaussianMechanism(AuditSpec spec, MechanismOptions options);

  OutputKind output_kind() const override { return OutputKind::kContinuous; }
  std::size_t DrawCount(std::size_t n) const override { return n; }
  std::optional<double> RealizedScale(const MechanismParams& p) const override;
  std::optional<double> ImpliedScale(const MechanismParams& p) const override;

 protected:
  void CheckParams(const MechanismParams& params) const override;
  std::vector<double> Apply(std::span<const double> input, const MechanismParams& params,
                            Generator& gen) const override;
};

// Index i with probability proportional to exp(eps * score_i / (2 sensitivity)).
// Untrusted by default (no analytic accountant); one draw.
class ExponentialMechanism : public Primitive {
 public:
  explicit ExponentialMechanism(MechanismOptions options = {}, std::string kind = "EM");
  ExponentialMechanism(AuditSpec spec, MechanismOptions options);

  OutputKind output_kind() const override { return OutputKind::kCategorical; }
  std::size_t DrawCount(std::size_t) const override { return 1; }

  // Selection probabilities, computed with max-subtraction.
  static std::vector<double> Probabilities(std::span<const double> scores,
                                           double epsilon, double sensitivity);

 protected:
  void CheckParams(const MechanismParams& params) const override;
  std::vector<double> Apply(std::span<const double> input, const MechanismParams& params,
                            Generator& gen) const override;
};

inline constexpr const char* kEnsureEqualityKind = "ensure_equality";

}  // namespace dpaudit

#endif  // DPAUDIT_MECHANISMS_H_
