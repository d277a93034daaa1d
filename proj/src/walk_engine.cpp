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

#include "qwc/walk_engine.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qwc {

namespace {

constexpr double kNormTolerance = 1e-10;

int wrap(int i, int n) {
  const int r = i % n;
  return r < 0 ? r + n : r;
}

}  // namespace

CoinAngle::CoinAngle(double theta) {
  if (!std::isfinite(theta)) {
    throw std::invalid_argument("coin angle must be finite");
  }
  double r = std::fmod(theta, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  theta_ = r;
}

Lattice::Lattice(int size) : size_(size) {
  if (size < 3 || size % 2 == 0) {
    throw std::invalid_argument("lattice size must be odd and >= 3, got " +
                                std::to_string(size));
  }
}

Lattice Lattice::for_steps(int steps) {
  if (steps < 0) throw std::invalid_argument("step count must be non-negative");
  return Lattice(2 * steps + 3);
}

int Lattice::index_of(int x) const {
  if (x < -max_label() || x > max_label()) {
    throw std::out_of_range("site label " + std::to_string(x) + " outside lattice");
  }
  return origin_index() + x;
}

JointState::JointState(Lattice lattice, Eigen::VectorXcd amplitudes)
    : lattice_(lattice), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != 2 * lattice_.size()) {
    throw std::invalid_argument("joint state length must be 2L");
  }
}

JointState JointState::localized(Lattice lattice, cplx up, cplx down, int x) {
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(2 * lattice.size());
  const int i = lattice.index_of(x);
  amps[i] = up;
  amps[lattice.size() + i] = down;
  return JointState(lattice, std::move(amps));
}

cplx JointState::amplitude(Coin c, int x) const {
  return amplitudes_[static_cast<int>(c) * lattice_.size() + lattice_.index_of(x)];
}

Mat2 build_coin(CoinAngle theta) {
  const double c = std::cos(theta.radians());
  const double s = std::sin(theta.radians());
  Mat2 m;
  m << cplx(c, 0.0), cplx(0.0, -s),
       cplx(0.0, -s), cplx(c, 0.0);
  return m;
}

ProjectedCoins projected_coins(CoinAngle theta) {
  const Mat2 coin = build_coin(theta);
  ProjectedCoins out{Mat2::Zero(), Mat2::Zero()};
  out.up.row(0) = coin.row(0);
  out.down.row(1) = coin.row(1);
  return out;
}

ShiftPair build_shifts(const Lattice& lattice) {
  const int n = lattice.size();
  ShiftPair s{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};
  for (int j = 0; j < n; ++j) {
    s.left(wrap(j - 1, n), j) = 1.0;
    s.right(wrap(j + 1, n), j) = 1.0;
  }
  return s;
}

JointOperator coin_kron(const Mat2& coin, const Eigen::MatrixXcd& position) {
  const Eigen::Index n = position.rows();
  JointOperator out(2 * n, 2 * position.cols());
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      out.block(r * n, c * position.cols(), n, position.cols()) = coin(r, c) * position;
    }
  }
  return out;
}

WalkParts build_walk_parts(CoinAngle theta, const Lattice& lattice) {
  const ProjectedCoins pc = projected_coins(theta);
  const ShiftPair shifts = build_shifts(lattice);
  return {coin_kron(pc.up, shifts.left.cast<cplx>()),
          coin_kron(pc.down, shifts.right.cast<cplx>())};
}

JointOperator build_walk_unitary(CoinAngle theta, const Lattice& lattice) {
  WalkParts parts = build_walk_parts(theta, lattice);
  return parts.P + parts.Q;
}

JointOperator build_split_step_unitary(CoinAngle theta, const Lattice& lattice) {
  const JointOperator w = build_walk_unitary(theta, lattice);
  return w * w;
}

void walk_step(JointState& psi, const Mat2& coin) {
  const int n = psi.lattice().size();
  const Eigen::VectorXcd& a = psi.amplitudes();
  Eigen::VectorXcd next(2 * n);
  for (int j = 0; j < n; ++j) {
    const cplx up = a[j];
    const cplx down = a[n + j];
    // Up moves left, down moves right.
    next[wrap(j - 1, n)] = coin(0, 0) * up + coin(0, 1) * down;
    next[n + wrap(j + 1, n)] = coin(1, 0) * up + coin(1, 1) * down;
  }
  psi = JointState(psi.lattice(), std::move(next));
}

JointState evolve(const JointState& psi0, CoinAngle theta, int steps) {
  if (steps < 0) throw std::invalid_argument("step count must be non-negative");
  if (psi0.lattice().size() < 2 * steps + 3) {
    throw std::invalid_argument("lattice of size " + std::to_string(psi0.lattice().size()) +
                                " too small for " + std::to_string(steps) + " steps");
  }
  if (std::abs(psi0.squared_norm() - 1.0) > kNormTolerance) {
    throw std::invalid_argument("initial joint state is not normalized");
  }
  const Mat2 coin = build_coin(theta);
  JointState psi = psi0;
  for (int i = 0; i < steps; ++i) walk_step(psi, coin);
  return psi;
}

Mat2 reduced_coin_state(const JointState& psi) {
  const int n = psi.lattice().size();
  const auto& a = psi.amplitudes();
  const auto up = a.head(n);
  const auto down = a.tail(n);
  Mat2 rho;
  rho(0, 0) = up.squaredNorm();
  rho(1, 1) = down.squaredNorm();
  // Eigen dot conjugates its left operand.
  rho(0, 1) = down.dot(up);
  rho(1, 0) = std::conj(rho(0, 1));
  return rho;
}

std::map<int, double> position_distribution(const JointState& psi) {
  std::map<int, double> out;
  const Lattice& lat = psi.lattice();
  for (int x = -lat.max_label(); x <= lat.max_label(); ++x) {
    const double p = std::norm(psi.amplitude(Coin::Up, x)) + std::norm(psi.amplitude(Coin::Down, x));
    if (p != 0.0) out[x] = p;
  }
  return out;
}

}  // namespace qwc
