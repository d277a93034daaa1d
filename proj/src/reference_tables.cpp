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

#include "qwc/reference_tables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace qwc::reference {

namespace {

constexpr cplx I{0.0, 1.0};

Mat2 m2(cplx a, cplx b, cplx c, cplx d) {
  Mat2 m;
  m << a, b,
       c, d;
  return m;
}

double max_abs_diff(const Mat2& a, const Mat2& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

std::vector<KrausOperator> standard_walk_table(CoinAngle theta, int steps) {
  const double c = std::cos(theta.radians());
  const double s = std::sin(theta.radians());
  const double c2 = c * c, c3 = c2 * c, c4 = c3 * c;
  const double s2 = s * s, s3 = s2 * s, s4 = s3 * s;
  switch (steps) {
    case 1:
      return {{-1, m2(0, 0, -I * s, c)},
              {1, m2(c, -I * s, 0, 0)}};
    case 2:
      return {{-2, m2(0, 0, -I * c * s, c2)},
              {0, m2(-s2, -I * s * c, -I * s * c, -s2)},
              {2, m2(c2, -I * s * c, 0, 0)}};
    case 3:
      return {{-3, m2(0, 0, -I * c2 * s, c3)},
              {-1, m2(-c * s2, -I * c2 * s, -I * c2 * s + I * s3, -2.0 * c * s2)},
              {1, m2(-2.0 * c * s2, -I * c2 * s + I * s3, -I * c2 * s, -c * s2)},
              {3, m2(c3, -I * c2 * s, 0, 0)}};
    case 4: {
      const cplx mixed = -I * c3 * s + 2.0 * I * c * s3;
      const double k0_diag = -2.0 * c2 * s2 + s4;
      return {{-4, m2(0, 0, -I * c3 * s, c4)},
              {-2, m2(-c2 * s2, -I * c3 * s, mixed, -3.0 * c2 * s2)},
              {0, m2(k0_diag, mixed, mixed, k0_diag)},
              {2, m2(-3.0 * c2 * s2, mixed, -I * c3 * s, -c2 * s2)},
              {4, m2(c4, -I * c3 * s, 0, 0)}};
    }
    default:
      throw std::invalid_argument("standard walk table covers t = 1..4");
  }
}

std::vector<KrausOperator> split_step_table(CoinAngle theta, int split_steps) {
  const double th = theta.radians();
  const double c = std::cos(th);
  const double s = std::sin(th);
  const double c2 = c * c, c3 = c2 * c, c4 = c3 * c, c5 = c4 * c, c6 = c5 * c;
  const double s2 = s * s, s4 = s2 * s2;
  const double cos2 = std::cos(2 * th), cos4 = std::cos(4 * th);
  const double sin2 = std::sin(2 * th), sin4 = std::sin(4 * th), sin6 = std::sin(6 * th);
  switch (split_steps) {
    case 1:
      return {{-1, m2(c2, -I * c * s, 0, 0)},
              {0, m2(-s2, -I * c * s, -I * c * s, -s2)},
              {1, m2(0, 0, -I * c * s, c2)}};
    case 2: {
      const cplx mixed = -0.25 * I * (3.0 * cos2 - 1.0) * sin2;
      const double k0_diag = s4 - 2.0 * c2 * s2;
      return {{-2, m2(-c2 * s2, -I * c3 * s, mixed, -3.0 * c2 * s2)},
              {-1, m2(c4, -I * c3 * s, 0, 0)},
              {0, m2(k0_diag, mixed, mixed, k0_diag)},
              {1, m2(0, 0, -I * c3 * s, c4)},
              {2, m2(-3.0 * c2 * s2, mixed, -I * c3 * s, -c2 * s2)}};
    }
    case 3: {
      const cplx edge = -0.5 * I * c3 * (5.0 * cos2 - 3.0) * s;
      const cplx inner = -I / 16.0 * (sin2 - 4.0 * sin4 + 5.0 * sin6);
      const double sq = sin2 * sin2;
      const double k0_diag = -0.25 * (4.0 * cos2 + 5.0 * cos4 + 3.0) * s2;
      return {{-3, m2(-5.0 * c4 * s2, edge, -I * c5 * s, -c4 * s2)},
              {-2, m2((1.0 - 5.0 * cos2) * sq / 8.0, edge, inner, (1.0 - 5.0 * cos2) * sq / 4.0)},
              {-1, m2(c6, -I * c5 * s, 0, 0)},
              {0, m2(k0_diag, inner, inner, k0_diag)},
              {1, m2(0, 0, -I * c5 * s, c6)},
              {2, m2((1.0 - 5.0 * cos2) * sq / 4.0, inner, edge, (1.0 - 5.0 * cos2) * sq / 8.0)},
              {3, m2(-c4 * s2, -I * c5 * s, edge, -5.0 * c4 * s2)}};
    }
    default:
      throw std::invalid_argument("split-step table covers n = 1..3");
  }
}

double labelled_mismatch(const std::vector<KrausOperator>& expected, const KrausSet& actual) {
  if (expected.size() != actual.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (const auto& e : expected) {
    if (!actual.contains(e.label)) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, max_abs_diff(e.matrix, actual.at(e.label)));
  }
  return worst;
}

double set_mismatch(const std::vector<KrausOperator>& expected, const KrausSet& actual) {
  if (expected.size() != actual.size()) return std::numeric_limits<double>::infinity();
  std::vector<std::size_t> perm(expected.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double worst = 0.0;
    for (std::size_t i = 0; i < perm.size() && worst < best; ++i) {
      worst = std::max(worst, max_abs_diff(expected[i].matrix, actual.entries[perm[i]].matrix));
    }
    best = std::min(best, worst);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace qwc::reference
