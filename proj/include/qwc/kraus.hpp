// Copyright 2026 The qwchannel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qwc/walk_engine.hpp"

namespace qwc {

struct KrausOperator {
  int label;
  Mat2 matrix;
};

/// Ordered Kraus operators of a qubit channel, ascending by label.
///
/// For walk channels `steps` is the step count t and the labels are the
/// Kraus indices mu in {-t, -t+2, ..., t}. K_mu collects the coin amplitudes
/// found at site x = -mu, the labelling under which K_{+t} = C_up^t carries
/// the all-up path. Non-walk channels (RTN) use steps = 0.
struct KrausSet {
  CoinAngle theta{0.0};
  int steps = 0;
  std::vector<KrausOperator> entries;

  std::size_t size() const { return entries.size(); }
  /// Throws std::out_of_range when the label is absent.
  const Mat2& at(int label) const;
  bool contains(int label) const;

  /// sum_k K_k^dagger K_k
  Mat2 completeness() const;
  /// Max-entry deviation of completeness() from the identity.
  double completeness_residual() const;
};

/// Max-entry magnitude below which a Kraus matrix counts as zero.
inline constexpr double kZeroMatrixThreshold = 1e-14;

/// Default step cap for the binomial extraction (dense joint-space products).
inline constexpr int kBinomialMaxSteps = 8;

/// Kraus operators of the t-step reduced coin dynamics, read off by
/// evolving each coin basis state from x = 0 and projecting onto sites.
KrausSet extract_kraus_direct(CoinAngle theta, int steps);

/// Commutator recurrence terms D_0 ... D_t:
/// D_{k+1} = [Q, P^k] + P D_k + [Q, D_k], D_0 = 0.
std::vector<JointOperator> build_dk_table(const WalkParts& parts, int steps);

/// (P + Q)^t assembled as
///   sum_k C(t,k) P^k Q^(t-k) + sum_k C(t,k) D_k Q^(t-k).
JointOperator binomial_walk_power(const WalkParts& parts, int steps);

/// Same Kraus set as extract_kraus_direct, built from binomial_walk_power.
/// Throws std::invalid_argument for steps outside [1, max_steps].
KrausSet extract_kraus_binomial(CoinAngle theta, int steps, int max_steps = kBinomialMaxSteps);

/// First (commuting) binomial contribution for label mu:
///   t! / (((t+mu)/2)! ((t-mu)/2)!) * C_up^((t+mu)/2) C_down^((t-mu)/2).
/// Equal to the full K_mu only for t = 1 and at mu = +-t.
Mat2 kraus_closed_form_first_term(CoinAngle theta, int steps, int mu);

/// Split-step walk Kraus set for n split steps (2n standard steps). Labels
/// are m = x / 2 for the even sites x of the underlying walk, ascending.
KrausSet extract_kraus_split_step(CoinAngle theta, int split_steps);

/// [[a, b], [c, d]] -> [[d, c], [b, a]]
Mat2 minor_map(const Mat2& m);

void to_json(nlohmann::json& j, const KrausSet& ks);
void from_json(const nlohmann::json& j, KrausSet& ks);

std::string serialize_kraus(const KrausSet& ks, int indent = 2);
KrausSet parse_kraus(const std::string& text);

}  // namespace qwc
