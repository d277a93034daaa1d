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

#include "qwc/kraus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace qwc {

namespace {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(r);
}

Mat2 mat_power(const Mat2& m, int e) {
  Mat2 r = Mat2::Identity();
  for (int i = 0; i < e; ++i) r = r * m;
  return r;
}

JointOperator commutator(const JointOperator& a, const JointOperator& b) {
  return a * b - b * a;
}

// Column s of K_mu is the coin content of site x = -mu after evolving coin
// basis state s from the origin.
KrausSet project_onto_sites(CoinAngle theta, int steps, const JointState& from_up,
                            const JointState& from_down) {
  KrausSet ks;
  ks.theta = theta;
  ks.steps = steps;
  for (int mu = -steps; mu <= steps; mu += 2) {
    const int x = -mu;
    Mat2 k;
    k(0, 0) = from_up.amplitude(Coin::Up, x);
    k(1, 0) = from_up.amplitude(Coin::Down, x);
    k(0, 1) = from_down.amplitude(Coin::Up, x);
    k(1, 1) = from_down.amplitude(Coin::Down, x);
    ks.entries.push_back({mu, k});
  }
  // Sites of the wrong parity are never reached.
  for (int x = -steps + 1; x < steps; x += 2) {
    const double stray = std::max({std::abs(from_up.amplitude(Coin::Up, x)),
                                   std::abs(from_up.amplitude(Coin::Down, x)),
                                   std::abs(from_down.amplitude(Coin::Up, x)),
                                   std::abs(from_down.amplitude(Coin::Down, x))});
    if (stray >= kZeroMatrixThreshold) {
      throw std::logic_error("amplitude on a site of the wrong parity");
    }
  }
  return ks;
}

void require_steps(int steps) {
  if (steps < 1) throw std::invalid_argument("step count must be >= 1");
}

}  // namespace

const Mat2& KrausSet::at(int label) const {
  for (const auto& e : entries) {
    if (e.label == label) return e.matrix;
  }
  throw std::out_of_range("no Kraus operator with label " + std::to_string(label));
}

bool KrausSet::contains(int label) const {
  return std::any_of(entries.begin(), entries.end(),
                     [label](const KrausOperator& e) { return e.label == label; });
}

Mat2 KrausSet::completeness() const {
  Mat2 sum = Mat2::Zero();
  for (const auto& e : entries) sum += e.matrix.adjoint() * e.matrix;
  return sum;
}

double KrausSet::completeness_residual() const {
  return (completeness() - Mat2::Identity()).cwiseAbs().maxCoeff();
}

KrausSet extract_kraus_direct(CoinAngle theta, int steps) {
  require_steps(steps);
  const Lattice lattice = Lattice::for_steps(steps);
  const JointState up = evolve(JointState::localized(lattice, 1.0, 0.0), theta, steps);
  const JointState down = evolve(JointState::localized(lattice, 0.0, 1.0), theta, steps);
  return project_onto_sites(theta, steps, up, down);
}

std::vector<JointOperator> build_dk_table(const WalkParts& parts, int steps) {
  const Eigen::Index n = parts.P.rows();
  std::vector<JointOperator> d;
  d.reserve(steps + 1);
  d.push_back(JointOperator::Zero(n, n));
  JointOperator p_pow = JointOperator::Identity(n, n);
  for (int k = 0; k < steps; ++k) {
    d.push_back(commutator(parts.Q, p_pow) + parts.P * d[k] + commutator(parts.Q, d[k]));
    p_pow = p_pow * parts.P;
  }
  return d;
}

JointOperator binomial_walk_power(const WalkParts& parts, int steps) {
  const Eigen::Index n = parts.P.rows();
  std::vector<JointOperator> p_pow{JointOperator::Identity(n, n)};
  std::vector<JointOperator> q_pow{JointOperator::Identity(n, n)};
  for (int k = 1; k <= steps; ++k) {
    p_pow.push_back(p_pow.back() * parts.P);
    q_pow.push_back(q_pow.back() * parts.Q);
  }
  const std::vector<JointOperator> d = build_dk_table(parts, steps);

  JointOperator commuting = JointOperator::Zero(n, n);
  JointOperator correction = JointOperator::Zero(n, n);
  for (int k = 0; k <= steps; ++k) {
    const double w = binomial(steps, k);
    commuting += w * (p_pow[k] * q_pow[steps - k]);
    correction += w * (d[k] * q_pow[steps - k]);
  }
  return commuting + correction;
}

KrausSet extract_kraus_binomial(CoinAngle theta, int steps, int max_steps) {
  require_steps(steps);
  if (steps > max_steps) {
    throw std::invalid_argument("binomial extraction capped at " + std::to_string(max_steps) +
                                " steps, got " + std::to_string(steps));
  }
  const Lattice lattice = Lattice::for_steps(steps);
  const JointOperator power = binomial_walk_power(build_walk_parts(theta, lattice), steps);
  const int origin = lattice.origin_index();
  const JointState up(lattice, power.col(origin));
  const JointState down(lattice, power.col(lattice.size() + origin));
  return project_onto_sites(theta, steps, up, down);
}

Mat2 kraus_closed_form_first_term(CoinAngle theta, int steps, int mu) {
  require_steps(steps);
  if (std::abs(mu) > steps || (steps - mu) % 2 != 0) {
    throw std::invalid_argument("label " + std::to_string(mu) +
                                " must share the parity of the step count and satisfy |mu| <= t");
  }
  const int n_up = (steps + mu) / 2;
  const int n_down = (steps - mu) / 2;
  const ProjectedCoins pc = projected_coins(theta);
  return binomial(steps, n_up) * (mat_power(pc.up, n_up) * mat_power(pc.down, n_down));
}

KrausSet extract_kraus_split_step(CoinAngle theta, int split_steps) {
  if (split_steps < 1) throw std::invalid_argument("split-step count must be >= 1");
  KrausSet standard = extract_kraus_direct(theta, 2 * split_steps);
  KrausSet ks;
  ks.theta = theta;
  ks.steps = split_steps;
  for (auto& e : standard.entries) {
    const int x = -e.label;
    ks.entries.push_back({x / 2, e.matrix});
  }
  std::sort(ks.entries.begin(), ks.entries.end(),
            [](const KrausOperator& a, const KrausOperator& b) { return a.label < b.label; });
  return ks;
}

Mat2 minor_map(const Mat2& m) {
  Mat2 out;
  out << m(1, 1), m(1, 0),
         m(0, 1), m(0, 0);
  return out;
}

void to_json(nlohmann::json& j, const KrausSet& ks) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : ks.entries) {
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < 2; ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (int c = 0; c < 2; ++c) {
        row.push_back({e.matrix(r, c).real(), e.matrix(r, c).imag()});
      }
      rows.push_back(row);
    }
    entries.push_back({{"mu", e.label}, {"matrix", rows}});
  }
  j = nlohmann::json{{"theta", ks.theta.radians()}, {"t", ks.steps}, {"entries", entries}};
}

void from_json(const nlohmann::json& j, KrausSet& ks) {
  ks.theta = CoinAngle(j.at("theta").get<double>());
  ks.steps = j.at("t").get<int>();
  ks.entries.clear();
  for (const auto& e : j.at("entries")) {
    const auto& rows = e.at("matrix");
    if (rows.size() != 2) throw std::invalid_argument("Kraus matrix must be 2x2");
    Mat2 m;
    for (int r = 0; r < 2; ++r) {
      if (rows[r].size() != 2) throw std::invalid_argument("Kraus matrix must be 2x2");
      for (int c = 0; c < 2; ++c) {
        const auto& z = rows[r][c];
        if (z.size() != 2) throw std::invalid_argument("complex entries are [re, im] pairs");
        m(r, c) = cplx(z[0].get<double>(), z[1].get<double>());
      }
    }
    ks.entries.push_back({e.at("mu").get<int>(), m});
  }
}

std::string serialize_kraus(const KrausSet& ks, int indent) {
  return nlohmann::json(ks).dump(indent);
}

KrausSet parse_kraus(const std::string& text) {
  return nlohmann::json::parse(text).get<KrausSet>();
}

}  // namespace qwc
