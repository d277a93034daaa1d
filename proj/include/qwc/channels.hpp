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

#include <array>

#include "qwc/kraus.hpp"

namespace qwc {

/// Qubit density matrix. Construction validates Hermiticity, unit trace and
/// positivity to kConstructionTolerance; is_valid() checks at any tolerance.
class DensityMatrix2 {
 public:
  static constexpr double kConstructionTolerance = 1e-10;

  explicit DensityMatrix2(const Mat2& m);

  static DensityMatrix2 basis(int index);
  static DensityMatrix2 maximally_mixed();

  const Mat2& matrix() const { return m_; }
  cplx operator()(int r, int c) const { return m_(r, c); }

  bool is_valid(double tol) const;

  /// Convex combination w * a + (1 - w) * b.
  static DensityMatrix2 mix(double w, const DensityMatrix2& a, const DensityMatrix2& b);

 private:
  struct Unchecked {};
  DensityMatrix2(const Mat2& m, Unchecked) : m_(m) {}
  friend DensityMatrix2 apply_kraus(const KrausSet&, const DensityMatrix2&);

  Mat2 m_;
};

/// Eigenvalues of a 2x2 Hermitian matrix in ascending order (closed form).
std::array<double, 2> hermitian_eigenvalues(const Mat2& m);

/// a|0> + b|1>, |0> = |up> = (1, 0)^T.
struct CoinState {
  cplx a;
  cplx b;

  CoinState(cplx a, cplx b);
  /// cos(delta/2)|0> + sin(delta/2)|1>
  static CoinState from_delta(double delta);

  DensityMatrix2 density() const;
};

/// Random telegraph noise parameters. `dt` is the physical time per walk step.
struct RTNParams {
  double a = 0.0;
  double gamma = 1.0;
  double dt = 1.0;

  RTNParams() = default;
  RTNParams(double a, double gamma, double dt = 1.0);

  /// (a / gamma)^2 > 1/4
  bool non_markovian() const;
};

/// Throws std::invalid_argument when the set's completeness residual exceeds 1e-8.
DensityMatrix2 apply_kraus(const KrausSet& ks, const DensityMatrix2& rho);

/// The t = n walk channel F_n applied once.
DensityMatrix2 n_step_map(CoinAngle theta, int steps, const DensityMatrix2& rho);

/// F_1 applied n times in sequence.
DensityMatrix2 concatenated_map(CoinAngle theta, int repetitions, const DensityMatrix2& rho);

/// Closed forms for the diagonal p_t and coherence q_t, t in {1, 2, 3}.
/// q_t is the lower-left entry <1|F_t(rho)|0>.
double closed_form_p(CoinAngle theta, int steps, cplx a, cplx b);
cplx closed_form_q(CoinAngle theta, int steps, cplx a, cplx b);

/// RTN memory kernel Lambda(t). Trigonometric for 4(a/gamma)^2 > 1,
/// hyperbolic continuation below, e^{-gamma t}(1 + gamma t) at equality.
double rtn_lambda(const RTNParams& p, double t);

/// R_1 = sqrt((1 + L)/2) I, R_2 = sqrt((1 - L)/2) sigma_z, labelled 1 and 2.
KrausSet rtn_kraus(double lambda);

/// RTN channel at elapsed time n * dt applied after F_n.
DensityMatrix2 composite_map(const RTNParams& p, CoinAngle theta, int steps,
                             const DensityMatrix2& rho);

}  // namespace qwc
