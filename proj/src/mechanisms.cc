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

#include "dpaudit/mechanisms.h"

#include <algorithm>
#include <cmath>

#include "dpaudit/accountant.h"
#include "dpaudit/errors.h"

namespace dpaudit {

std::string MetricName(Metric m) {
  switch (m) {
    case Metric::kL1: return "L1";
    case Metric::kL2: return "L2";
    case Metric::kLinf: return "Linf";
    case Metric::kHamming: return "Hamming";
  }
  return "L1";
}

Metric ParseMetric(const std::string& name) {
  if (name == "L1") return Metric::kL1;
  if (name == "L2") return Metric::kL2;
  if (name == "Linf") return Metric::kLinf;
  if (name == "Hamming") return Metric::kHamming;
  throw ParseError("unknown metric '" + name + "'");
}

std::string AccountantName(AnalyticAccountant a) {
  return a == AnalyticAccountant::kLaplace ? "laplace_pld" : "gaussian_pld";
}

AnalyticAccountant ParseAccountant(const std::string& name) {
  if (name == "laplace_pld") return AnalyticAccountant::kLaplace;
  if (name == "gaussian_pld") return AnalyticAccountant::kGaussian;
  throw ParseError("unknown accountant '" + name + "'");
}

Value AuditSpec::ToJson() const {
  Value v{{"kind", kind},
          {"input_role", input_role},
          {"sensitivity_role", sensitivity_role},
          {"metric", MetricName(metric)}};
  v["accountant"] = accountant ? Value(AccountantName(*accountant)) : Value(nullptr);
  return v;
}

AuditSpec AuditSpec::FromJson(const Value& v) {
  AuditSpec spec;
  spec.kind = v.at("kind").get<std::string>();
  spec.input_role = v.at("input_role").get<std::string>();
  spec.sensitivity_role = v.at("sensitivity_role").get<std::string>();
  spec.metric = ParseMetric(v.at("metric").get<std::string>());
  if (!v.at("accountant").is_null()) {
    spec.accountant = ParseAccountant(v.at("accountant").get<std::string>());
  }
  return spec;
}

void MechanismParams::Validate() const {
  if (!(epsilon > 0) || !std::isfinite(epsilon)) {
    throw InvalidArgumentError("epsilon must be positive and finite");
  }
  if (!(delta >= 0 && delta < 1)) throw InvalidArgumentError("delta must lie in [0, 1)");
  if (!(sensitivity >= 0) || !std::isfinite(sensitivity)) {
    throw InvalidArgumentError("sensitivity must be nonnegative and finite");
  }
  if (scale && (!(*scale >= 0) || !std::isfinite(*scale))) {
    throw InvalidArgumentError("noise scale must be nonnegative and finite");
  }
}

Value MechanismParams::ToJson() const {
  Value v{{"epsilon", RealToValue(epsilon)},
          {"delta", RealToValue(delta)},
          {"sensitivity", RealToValue(sensitivity)}};
  v["scale"] = scale ? RealToValue(*scale) : Value(nullptr);
  return v;
}

MechanismParams MechanismParams::FromJson(const Value& v) {
  MechanismParams p;
  p.epsilon = ValueToReal(v.at("epsilon"));
  p.delta = ValueToReal(v.at("delta"));
  p.sensitivity = ValueToReal(v.at("sensitivity"));
  if (v.contains("scale") && !v.at("scale").is_null()) p.scale = ValueToReal(v.at("scale"));
  return p;
}

Primitive::Primitive(AuditSpec spec, MechanismOptions options)
    : spec_(std::move(spec)), options_(options) {
  if (spec_.kind.empty()) throw InvalidArgumentError("primitive kind must be set");
  if (spec_.kind == kEnsureEqualityKind) {
    throw InvalidArgumentError("'ensure_equality' is reserved");
  }
}

void Primitive::CheckParams(const MechanismParams& params) const { params.Validate(); }

void Primitive::CheckCall(std::span<const double> input,
                          const MechanismParams& params) const {
  CheckParams(params);
  if (options_.guarded) {
    for (double x : input) {
      if (!std::isfinite(x)) {
        throw InputDomainError(spec_.kind + ": rejected non-finite input before spending budget");
      }
    }
  }
}

std::vector<double> Primitive::Run(std::span<const double> input,
                                   const MechanismParams& params, Generator& gen) const {
  CheckCall(input, params);
  return Apply(input, params, gen);
}

std::optional<double> Primitive::RealizedScale(const MechanismParams&) const {
  return std::nullopt;
}

std::optional<double> Primitive::ImpliedScale(const MechanismParams&) const {
  return std::nullopt;
}

LaplaceMechanism::LaplaceMechanism(MechanismOptions options, std::string kind)
    : Primitive(AuditSpec{.kind = std::move(kind),
                          .metric = Metric::kL1,
                          .accountant = AnalyticAccountant::kLaplace},
                options) {}

LaplaceMechanism::LaplaceMechanism(AuditSpec spec, MechanismOptions options)
    : Primitive(std::move(spec), options) {}

std::optional<double> LaplaceMechanism::ImpliedScale(const MechanismParams& p) const {
  return p.sensitivity / p.epsilon;
}

std::optional<double> LaplaceMechanism::RealizedScale(const MechanismParams& p) const {
  return p.scale.value_or(p.sensitivity / p.epsilon);
}

std::vector<double> LaplaceMechanism::Apply(std::span<const double> input,
                                            const MechanismParams& params,
                                            Generator& gen) const {
  const double scale = *RealizedScale(params);
  std::vector<double> out(input.begin(), input.end());
  for (double& x : out) {
    const double noise = gen.Laplace(scale);
    if (!options().zero_noise) x += noise;
  }
  return out;
}

FoldedLaplaceMechanism::FoldedLaplaceMechanism(double lower, MechanismOptions options,
                                               std::string kind)
    : LaplaceMechanism(options, std::move(kind)), lower_(lower) {}

std::vector<double> FoldedLaplaceMechanism::Apply(std::span<const double> input,
                                                  const MechanismParams& params,
                                                  Generator& gen) const {
  std::vector<double> out = LaplaceMechanism::Apply(input, params, gen);
  for (double& x : out) {
    if (x < lower_) x = 2.0 * lower_ - x;
  }
  return out;
}

GaussianMechanism::GaussianMechanism(MechanismOptions options, std::string kind)
    : Primitive(AuditSpec{.kind = std::move(kind),
                          .metric = Metric::kL2,
                          .accountant = AnalyticAccountant::kGaussian},
                options) {}

GaussianMechanism::GaussianMechanism(AuditSpec spec, MechanismOptions options)
    : Primitive(std::move(spec), options) {}

void GaussianMechanism::CheckParams(const MechanismParams& params) const {
  params.Validate();
  if (!params.scale && !(params.delta > 0 && params.sensitivity > 0)) {
    throw InvalidArgumentError(
        spec().kind + ": sigma must be given or derivable (delta > 0, sensitivity > 0)");
  }
}

std::optional<double> GaussianMechanism::ImpliedScale(const MechanismParams& p) const {
  if (!(p.delta > 0) || !(p.sensitivity > 0)) {
    return p.sensitivity == 0 ? std::optional<double>(0.0) : std::nullopt;
  }
  return CalibrateGaussianSigma(p.epsilon, p.delta, p.sensitivity);
}

std::optional<double> GaussianMechanism::RealizedScale(const MechanismParams& p) const {
  if (p.scale) return p.scale;
  return ImpliedScale(p);
}

std::vector<double> GaussianMechanism::Apply(std::span<const double> input,
                                             const MechanismParams& params,
                                             Generator& gen) const {
  const double sigma = RealizedScale(params).value_or(0.0);
  std::vector<double> out(input.begin(), input.end());
  for (double& x : out) {
    const double noise = gen.Gaussian(sigma);
    if (!options().zero_noise) x += noise;
  }
  return out;
}

ExponentialMechanism::ExponentialMechanism(MechanismOptions options, std::string kind)
    : Primitive(AuditSpec{.kind = std::move(kind),
                          .input_role = "scores",
                          .metric = Metric::kLinf,
                          .accountant = std::nullopt},
                options) {}

ExponentialMechanism::ExponentialMechanism(AuditSpec spec, MechanismOptions options)
    : Primitive(std::move(spec), options) {}

void ExponentialMechanism::CheckParams(const MechanismParams& params) const {
  params.Validate();
  if (!(params.sensitivity > 0)) {
    throw InvalidArgumentError(spec().kind + ": score sensitivity must be positive");
  }
}

std::vector<double> ExponentialMechanism::Probabilities(std::span<const double> scores,
                                                        double epsilon,
                                                        double sensitivity) {
  if (scores.empty()) throw InvalidArgumentError("exponential mechanism: no candidates");
  const double best = *std::max_element(scores.begin(), scores.end());
  std::vector<double> probs(scores.size());
  double total = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    probs[i] = std::exp(epsilon * (scores[i] - best) / (2.0 * sensitivity));
    total += probs[i];
  }
  for (double& p : probs) p /= total;
  return probs;
}

std::vector<double> ExponentialMechanism::Apply(std::span<const double> input,
                                                const MechanismParams& params,
                                                Generator& gen) const {
  const std::vector<double> probs =
      Probabilities(input, params.epsilon, params.sensitivity);
  if (options().zero_noise) {
    gen.Uniform();
    return {static_cast<double>(std::max_element(input.begin(), input.end()) -
                                input.begin())};
  }
  const std::size_t index =
      guarded() ? gen.Categorical(probs) : gen.CategoricalUnchecked(probs);
  return {static_cast<double>(index)};
}

}  // namespace dpaudit
