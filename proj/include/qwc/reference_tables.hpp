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

#include <vector>

#include "qwc/kraus.hpp"

namespace qwc::reference {

/// Symbolic Kraus operators of the standard walk evaluated at theta, with
/// their conventional labels. Defined for t in {1, 2, 3, 4}.
std::vector<KrausOperator> standard_walk_table(CoinAngle theta, int steps);

/// Symbolic split-step walk Kraus operators for n in {1, 2, 3}. Labels are
/// carried along but only set membership is meaningful.
std::vector<KrausOperator> split_step_table(CoinAngle theta, int split_steps);

/// Largest entrywise deviation between expected and actual operators with
/// equal labels. Infinity when the label sets differ.
double labelled_mismatch(const std::vector<KrausOperator>& expected, const KrausSet& actual);

/// Largest entrywise deviation under the best one-to-one pairing of the two
/// sets, ignoring labels. Infinity when the sizes differ.
double set_mismatch(const std::vector<KrausOperator>& expected, const KrausSet& actual);

}  // namespace qwc::reference
