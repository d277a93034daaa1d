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

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "qwc/channels.hpp"

namespace qwc {

/// D(rho, sigma) = 1/2 sum_i |lambda_i(rho - sigma)|
double trace_distance(const DensityMatrix2& rho, const DensityMatrix2& sigma);

enum class SeriesMode { NStep, Concatenated, Composite };

std::string_view to_string(SeriesMode mode);
/// Accepts "nstep", "concat", "composite".
SeriesMode parse_series_mode(std::string_view name);

struct TDPoint {
  int n;
  double d;
};

/// Trace distance between the images of |0><0| and |1><1| against step count.
struct TDSeries {
  CoinAngle theta{0.0};
  SeriesMode mode = SeriesMode::NStep;
  std::vector<TDPoint> entries;
};

/// Composite mode requires `rtn`; the other modes ignore it.
TDSeries td_series(CoinAngle theta, int n_max, SeriesMode mode,
                   const std::optional<RTNParams>& rtn = std::nullopt);

/// Sum of positive increments d(n+1) - d(n).
double nonmonotonicity(const TDSeries& series);

double purity(const DensityMatrix2& rho);
/// (d / (d - 1)) (1 - Tr rho^2)
double mixedness(const DensityMatrix2& rho, int dimension = 2);

/// Entropy in bits, with 0 log 0 = 0.
double von_neumann_entropy(const DensityMatrix2& rho);

struct EnsembleMember {
  double weight;
  DensityMatrix2 state;
};

class Ensemble {
 public:
  /// Weights must be non-negative and sum to 1 within 1e-12.
  explicit Ensemble(std::vector<EnsembleMember> members);

  const std::vector<EnsembleMember>& members() const { return members_; }

 private:
  std::vector<EnsembleMember> members_;
};

using QubitChannel = std::function<DensityMatrix2(const DensityMatrix2&)>;

/// chi = S(sum_j p_j F(rho_j)) - sum_j p_j S(F(rho_j))
double holevo(const Ensemble& ensemble, const QubitChannel& channel);

struct HolevoMax {
  double chi_max;
  double p1_star;
};

/// Maximizes chi over two-member ensembles {p1, rho1; 1 - p1, rho2}: a grid
/// p1 in {0, 1/(g-1), ..., (g-2)/(g-1)} followed by golden-section refinement
/// to 1e-6 around the best grid point.
HolevoMax holevo_max(const DensityMatrix2& rho1, const DensityMatrix2& rho2,
                     const QubitChannel& channel, int grid_size);

/// The walk channel F_t as a QubitChannel (Kraus set extracted once).
QubitChannel walk_channel(CoinAngle theta, int steps);

/// 1/4 |0><0| + 3/4 |1><1| and 1/6 |+><+| + 5/6 |-><-|.
DensityMatrix2 reference_ensemble_state1();
DensityMatrix2 reference_ensemble_state2();

}  // namespace qwc
