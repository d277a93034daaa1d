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

#include "qwc/witnesses.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qwc {

namespace {

constexpr double kWeightTolerance = 1e-12;
constexpr double kGoldenTolerance = 1e-6;

double entropy_term(double lambda) {
  return lambda > 0.0 ? -lambda * std::log2(lambda) : 0.0;
}

}  // namespace

double trace_distance(const DensityMatrix2& rho, const DensityMatrix2& sigma) {
  const auto ev = hermitian_eigenvalues(rho.matrix() - sigma.matrix());
  return 0.5 * (std::abs(ev[0]) + std::abs(ev[1]));
}

std::string_view to_string(SeriesMode mode) {
  switch (mode) {
    case SeriesMode::NStep: return "nstep";
    case SeriesMode::Concatenated: return "concat";
    case SeriesMode::Composite: return "composite";
  }
  return "unknown";
}

SeriesMode parse_series_mode(std::string_view name) {
  if (name == "nstep") return SeriesMode::NStep;
  if (name == "concat") return SeriesMode::Concatenated;
  if (name == "composite") return SeriesMode::Composite;
  throw std::invalid_argument("unknown series mode '" + std::string(name) + "'");
}

TDSeries td_series(CoinAngle theta, int n_max, SeriesMode mode,
                   const std::optional<RTNParams>& rtn) {
  if (n_max < 1) throw std::invalid_argument("series length must be >= 1");
  if (mode == SeriesMode::Composite && !rtn) {
    throw std::invalid_argument("composite series needs RTN parameters");
  }
  const DensityMatrix2 zero = DensityMatrix2::basis(0);
  const DensityMatrix2 one = DensityMatrix2::basis(1);

  TDSeries series;
  series.theta = theta;
  series.mode = mode;
  series.entries.push_back({0, trace_distance(zero, one)});

  const KrausSet one_step = extract_kraus_direct(theta, 1);
  DensityMatrix2 rho0 = zero;
  DensityMatrix2 rho1 = one;
  for (int n = 1; n <= n_max; ++n) {
    switch (mode) {
      case SeriesMode::NStep: {
        const KrausSet ks = extract_kraus_direct(theta, n);
        rho0 = apply_kraus(ks, zero);
        rho1 = apply_kraus(ks, one);
        break;
      }
      case SeriesMode::Concatenated:
        rho0 = apply_kraus(one_step, rho0);
        rho1 = apply_kraus(one_step, rho1);
        break;
      case SeriesMode::Composite:
        rho0 = composite_map(*rtn, theta, n, zero);
        rho1 = composite_map(*rtn, theta, n, one);
        break;
    }
    series.entries.push_back({n, trace_distance(rho0, rho1)});
  }
  return series;
}

double nonmonotonicity(const TDSeries& series) {
  if (series.entries.empty()) throw std::invalid_argument("empty trace-distance series");
  double total = 0.0;
  for (std::size_t i = 1; i < series.entries.size(); ++i) {
    total += std::max(0.0, series.entries[i].d - series.entries[i - 1].d);
  }
  return total;
}

double purity(const DensityMatrix2& rho) {
  return (rho.matrix() * rho.matrix()).trace().real();
}

double mixedness(const DensityMatrix2& rho, int dimension) {
  if (dimension < 2) throw std::invalid_argument("dimension must be >= 2");
  const double d = dimension;
  return d / (d - 1.0) * (1.0 - purity(rho));
}

double von_neumann_entropy(const DensityMatrix2& rho) {
  const auto ev = hermitian_eigenvalues(rho.matrix());
  return entropy_term(ev[0]) + entropy_term(ev[1]);
}

Ensemble::Ensemble(std::vector<EnsembleMember> members) : members_(std::move(members)) {
  if (members_.empty()) throw std::invalid_argument("ensemble must not be empty");
  double total = 0.0;
  for (const auto& m : members_) {
    if (!(m.weight >= 0.0)) throw std::invalid_argument("ensemble weights must be >= 0");
    total += m.weight;
  }
  if (std::abs(total - 1.0) > kWeightTolerance) {
    throw std::invalid_argument("ensemble weights must sum to 1");
  }
}

double holevo(const Ensemble& ensemble, const QubitChannel& channel) {
  Mat2 average = Mat2::Zero();
  double mean_entropy = 0.0;
  for (const auto& m : ensemble.members()) {
    const DensityMatrix2 out = channel(m.state);
    average += m.weight * out.matrix();
    mean_entropy += m.weight * von_neumann_entropy(out);
  }
  return von_neumann_entropy(DensityMatrix2(average)) - mean_entropy;
}

HolevoMax holevo_max(const DensityMatrix2& rho1, const DensityMatrix2& rho2,
                     const QubitChannel& channel, int grid_size) {
  if (grid_size < 3) throw std::invalid_argument("Holevo grid needs at least 3 points");
  const DensityMatrix2 out1 = channel(rho1);
  const DensityMatrix2 out2 = channel(rho2);
  const double s1 = von_neumann_entropy(out1);
  const double s2 = von_neumann_entropy(out2);
  // Channel outputs are fixed; only the weights move.
  auto chi = [&](double p1) {
    const DensityMatrix2 avg = DensityMatrix2::mix(p1, out1, out2);
    return von_neumann_entropy(avg) - p1 * s1 - (1.0 - p1) * s2;
  };

  const double h = 1.0 / (grid_size - 1);
  double best_p = 0.0;
  double best = chi(0.0);
  for (int i = 1; i <= grid_size - 2; ++i) {
    const double p = i * h;
    const double v = chi(p);
    if (v > best) {
      best = v;
      best_p = p;
    }
  }

  // chi is concave in p1, so golden section on the bracketing cell converges.
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = std::max(0.0, best_p - h);
  double hi = std::min(1.0, best_p + h);
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  double f1 = chi(x1);
  double f2 = chi(x2);
  while (hi - lo > kGoldenTolerance) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = chi(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = chi(x1);
    }
  }
  const double mid = 0.5 * (lo + hi);
  const double f_mid = chi(mid);
  if (f_mid > best) {
    best = f_mid;
    best_p = mid;
  }
  return {std::max(best, 0.0), best_p};
}

QubitChannel walk_channel(CoinAngle theta, int steps) {
  KrausSet ks = extract_kraus_direct(theta, steps);
  return [ks = std::move(ks)](const DensityMatrix2& rho) { return apply_kraus(ks, rho); };
}

DensityMatrix2 reference_ensemble_state1() {
  Mat2 m = Mat2::Zero();
  m(0, 0) = 0.25;
  m(1, 1) = 0.75;
  return DensityMatrix2(m);
}

DensityMatrix2 reference_ensemble_state2() {
  // (1/6)|+><+| + (5/6)|-><-| has diagonal 1/2 and coherence (1/6 - 5/6)/2.
  Mat2 m;
  const double c = (1.0 / 6.0 - 5.0 / 6.0) * 0.5;
  m << 0.5, c,
       c, 0.5;
  return DensityMatrix2(m);
}

}  // namespace qwc
