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

#include "qwc/channels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qwc {

namespace {

constexpr double kCompletenessTolerance = 1e-8;
constexpr double kLambdaSlack = 1e-12;

void require_closed_form_step(int steps) {
  if (steps < 1 || steps > 3) {
    throw std::invalid_argument("closed forms exist for t in {1, 2, 3}, got " +
                                std::to_string(steps));
  }
}

}  // namespace

DensityMatrix2::DensityMatrix2(const Mat2& m) : m_(m) {
  if (!is_valid(kConstructionTolerance)) {
    throw std::invalid_argument("matrix is not a valid qubit density matrix");
  }
}

DensityMatrix2 DensityMatrix2::basis(int index) {
  if (index != 0 && index != 1) throw std::invalid_argument("basis index must be 0 or 1");
  Mat2 m = Mat2::Zero();
  m(index, index) = 1.0;
  return DensityMatrix2(m, Unchecked{});
}

DensityMatrix2 DensityMatrix2::maximally_mixed() {
  return DensityMatrix2(Mat2::Identity() * 0.5, Unchecked{});
}

bool DensityMatrix2::is_valid(double tol) const {
  if (!m_.allFinite()) return false;
  if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  if (std::abs(m_.trace() - 1.0) > tol) return false;
  return hermitian_eigenvalues(m_)[0] >= -tol;
}

DensityMatrix2 DensityMatrix2::mix(double w, const DensityMatrix2& a, const DensityMatrix2& b) {
  if (!(w >= 0.0 && w <= 1.0)) throw std::invalid_argument("mixing weight must lie in [0, 1]");
  return DensityMatrix2(w * a.m_ + (1.0 - w) * b.m_, Unchecked{});
}

std::array<double, 2> hermitian_eigenvalues(const Mat2& m) {
  const double a = m(0, 0).real();
  const double d = m(1, 1).real();
  const cplx off = 0.5 * (m(0, 1) + std::conj(m(1, 0)));
  const double mean = 0.5 * (a + d);
  const double radius = std::hypot(0.5 * (a - d), std::abs(off));
  return {mean - radius, mean + radius};
}

CoinState::CoinState(cplx a_, cplx b_) : a(a_), b(b_) {
  if (std::abs(std::norm(a) + std::norm(b) - 1.0) > 1e-12) {
    throw std::invalid_argument("coin state amplitudes must satisfy |a|^2 + |b|^2 = 1");
  }
}

CoinState CoinState::from_delta(double delta) {
  return CoinState(std::cos(0.5 * delta), std::sin(0.5 * delta));
}

DensityMatrix2 CoinState::density() const {
  Mat2 m;
  m << std::norm(a), a * std::conj(b),
       std::conj(a) * b, std::norm(b);
  return DensityMatrix2(m);
}

RTNParams::RTNParams(double a_, double gamma_, double dt_) : a(a_), gamma(gamma_), dt(dt_) {
  if (!(std::isfinite(a) && a >= 0.0)) throw std::invalid_argument("RTN amplitude must be >= 0");
  if (!(std::isfinite(gamma) && gamma > 0.0)) throw std::invalid_argument("RTN gamma must be > 0");
  if (!(std::isfinite(dt) && dt > 0.0)) throw std::invalid_argument("RTN dt must be > 0");
}

bool RTNParams::non_markovian() const {
  const double ratio = a / gamma;
  return ratio * ratio > 0.25;
}

DensityMatrix2 apply_kraus(const KrausSet& ks, const DensityMatrix2& rho) {
  const double residual = ks.completeness_residual();
  if (!(residual <= kCompletenessTolerance)) {
    throw std::invalid_argument("Kraus set is not trace preserving (completeness residual " +
                                std::to_string(residual) + ")");
  }
  Mat2 out = Mat2::Zero();
  for (const auto& e : ks.entries) out += e.matrix * rho.matrix() * e.matrix.adjoint();
  return DensityMatrix2(out, DensityMatrix2::Unchecked{});
}

DensityMatrix2 n_step_map(CoinAngle theta, int steps, const DensityMatrix2& rho) {
  return apply_kraus(extract_kraus_direct(theta, steps), rho);
}

DensityMatrix2 concatenated_map(CoinAngle theta, int repetitions, const DensityMatrix2& rho) {
  if (repetitions < 1) throw std::invalid_argument("repetition count must be >= 1");
  const KrausSet one_step = extract_kraus_direct(theta, 1);
  DensityMatrix2 out = rho;
  for (int i = 0; i < repetitions; ++i) out = apply_kraus(one_step, out);
  return out;
}

double closed_form_p(CoinAngle theta, int steps, cplx a, cplx b) {
  require_closed_form_step(steps);
  const double th = theta.radians();
  const double pop = std::norm(a) - std::norm(b);
  const double up = std::norm(a);
  // i (a b* - a* b), real.
  const double coh = (cplx(0.0, 1.0) * (a * std::conj(b) - std::conj(a) * b)).real();
  switch (steps) {
    case 1:
      return 0.5 * (1.0 + pop * std::cos(2 * th) + coh * std::sin(2 * th));
    case 2:
      return 0.25 * (1.0 + 2.0 * up + pop * std::cos(4 * th) + coh * std::sin(4 * th));
    default:
      return (6.0 + 4.0 * up + 5.0 * pop * std::cos(2 * th) - 2.0 * pop * std::cos(4 * th) +
              3.0 * pop * std::cos(6 * th) + 3.0 * coh * std::sin(2 * th) -
              2.0 * coh * std::sin(4 * th) + 3.0 * coh * std::sin(6 * th)) /
             16.0;
  }
}

cplx closed_form_q(CoinAngle theta, int steps, cplx a, cplx b) {
  require_closed_form_step(steps);
  const double th = theta.radians();
  const double c = std::cos(th);
  const double s = std::sin(th);
  const double pop = std::norm(a) - std::norm(b);
  const cplx i(0.0, 1.0);
  switch (steps) {
    case 1:
      return 0.0;
    case 2:
      return s * s * (a * std::conj(b) * c * c + std::conj(a) * b * s * s + i * pop * s * c);
    default:
      return c * s * s *
             ((std::conj(a) * b + a * std::conj(b)) * c +
              (a * std::conj(b) - std::conj(a) * b) * std::cos(3 * th) + i * pop * std::sin(3 * th));
  }
}

double rtn_lambda(const RTNParams& p, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("elapsed time must be >= 0");
  const double x = p.gamma * t;
  if (x == 0.0 || p.a == 0.0) return 1.0;
  const double r = 4.0 * (p.a / p.gamma) * (p.a / p.gamma) - 1.0;
  if (r > 0.0) {
    const double w = std::sqrt(r);
    return std::exp(-x) * (std::cos(w * x) + std::sin(w * x) / w);
  }
  if (r < 0.0) {
    const double w = std::sqrt(-r);
    if (w * x < 700.0) {
      return std::exp(-x) * (std::cosh(w * x) + std::sinh(w * x) / w);
    }
    // cosh and sinh overflow; the decaying exponential is negligible here.
    return 0.5 * (1.0 + 1.0 / w) * std::exp((w - 1.0) * x);
  }
  return std::exp(-x) * (1.0 + x);
}

KrausSet rtn_kraus(double lambda) {
  if (!(std::abs(lambda) <= 1.0 + kLambdaSlack)) {
    throw std::invalid_argument("RTN kernel value must satisfy |Lambda| <= 1");
  }
  lambda = std::clamp(lambda, -1.0, 1.0);
  Mat2 sigma_z = Mat2::Zero();
  sigma_z(0, 0) = 1.0;
  sigma_z(1, 1) = -1.0;
  KrausSet ks;
  ks.entries.push_back({1, std::sqrt(0.5 * (1.0 + lambda)) * Mat2::Identity()});
  ks.entries.push_back({2, std::sqrt(0.5 * (1.0 - lambda)) * sigma_z});
  return ks;
}

DensityMatrix2 composite_map(const RTNParams& p, CoinAngle theta, int steps,
                             const DensityMatrix2& rho) {
  const DensityMatrix2 walked = n_step_map(theta, steps, rho);
  return apply_kraus(rtn_kraus(rtn_lambda(p, steps * p.dt)), walked);
}

}  // namespace qwc
