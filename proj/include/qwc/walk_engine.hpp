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

#include <complex>
#include <map>

#include <Eigen/Dense>

namespace qwc {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using JointOperator = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Coin rotation angle in radians, canonicalized into [0, 2pi).
class CoinAngle {
 public:
  explicit CoinAngle(double theta);

  double radians() const { return theta_; }

 private:
  double theta_;
};

/// Finite cyclic position lattice. Site label x lives at storage index
/// origin_index() + x, so labels run over [-(L-1)/2, (L-1)/2].
class Lattice {
 public:
  explicit Lattice(int size);

  /// Smallest lattice on which a t-step walk from the origin never wraps.
  static Lattice for_steps(int steps);

  int size() const { return size_; }
  int origin_index() const { return (size_ - 1) / 2; }
  int max_label() const { return origin_index(); }
  /// Largest step count covered by the guard band, (L - 3) / 2.
  int max_steps() const { return (size_ - 3) / 2; }
  int index_of(int x) const;

  bool operator==(const Lattice&) const = default;

 private:
  int size_;
};

enum class Coin : int { Up = 0, Down = 1 };

/// Joint coin (x) position amplitudes, coin-major: the up block of L
/// position amplitudes followed by the down block.
class JointState {
 public:
  JointState(Lattice lattice, Eigen::VectorXcd amplitudes);

  /// a|up> + b|down> at site x.
  static JointState localized(Lattice lattice, cplx up, cplx down, int x = 0);

  const Lattice& lattice() const { return lattice_; }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  cplx amplitude(Coin c, int x) const;
  double squared_norm() const { return amplitudes_.squaredNorm(); }

 private:
  Lattice lattice_;
  Eigen::VectorXcd amplitudes_;
};

/// [[cos, -i sin], [-i sin, cos]].
Mat2 build_coin(CoinAngle theta);

/// Row-projected coins |up><up|C and |down><down|C.
struct ProjectedCoins {
  Mat2 up;
  Mat2 down;
};
ProjectedCoins projected_coins(CoinAngle theta);

/// Cyclic shifts on the lattice: left maps |x> to |x-1>, right maps |x> to |x+1>.
struct ShiftPair {
  Eigen::MatrixXd left;
  Eigen::MatrixXd right;
};
ShiftPair build_shifts(const Lattice& lattice);

/// The two halves of the walk unitary, P = C_up (x) S_L and Q = C_down (x) S_R.
struct WalkParts {
  JointOperator P;
  JointOperator Q;
};
WalkParts build_walk_parts(CoinAngle theta, const Lattice& lattice);

/// W = S (C (x) 1) = P + Q.
JointOperator build_walk_unitary(CoinAngle theta, const Lattice& lattice);

/// Split-step walk operator, taken as W * W.
JointOperator build_split_step_unitary(CoinAngle theta, const Lattice& lattice);

/// Kronecker product with the coin factor outermost (coin-major layout).
JointOperator coin_kron(const Mat2& coin, const Eigen::MatrixXcd& position);

/// Applies one walk step in place without forming W.
void walk_step(JointState& psi, const Mat2& coin);

/// Applies W t times to psi0. Throws std::invalid_argument when the lattice
/// is too small for t steps (L < 2t + 3) or psi0 is not normalized.
JointState evolve(const JointState& psi0, CoinAngle theta, int steps);

/// Partial trace over position: rho_c(i, j) = sum_x psi(i, x) psi(j, x)^*.
Mat2 reduced_coin_state(const JointState& psi);

/// Marginal position probabilities keyed by site label.
std::map<int, double> position_distribution(const JointState& psi);

}  // namespace qwc
