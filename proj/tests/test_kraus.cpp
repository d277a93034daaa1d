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

#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qwc/kraus.hpp"
#include "qwc/reference_tables.hpp"

using namespace qwc;

namespace {

Mat2 m2(cplx a, cplx b, cplx c, cplx d) {
  Mat2 m;
  m << a, b, c, d;
  return m;
}

constexpr cplx I{0.0, 1.0};

std::vector<double> grid16() {
  std::vector<double> v;
  for (int i = 0; i < 16; ++i) v.push_back(kTwoPi * i / 16);
  return v;
}

}  // namespace

TEST_CASE("one-step Kraus pair") {
  for (double th : {0.0, 0.4, kPi / 3, 2.5}) {
    const KrausSet ks = extract_kraus_direct(CoinAngle(th), 1);
    const double c = std::cos(th), s = std::sin(th);
    REQUIRE(ks.size() == 2);
    CHECK(ks.entries[0].label == -1);
    CHECK(ks.entries[1].label == 1);
    CHECK(oracle::max_abs(ks.at(-1) - m2(0, 0, -I * s, c)) < 1e-15);
    CHECK(oracle::max_abs(ks.at(1) - m2(c, -I * s, 0, 0)) < 1e-15);
  }
}

TEST_CASE("two-step operators at special angles") {
  SUBCASE("theta = pi/4, K_0") {
    const KrausSet ks = extract_kraus_direct(CoinAngle(kPi / 4), 2);
    CHECK(oracle::max_abs(ks.at(0) - m2(-0.5, -0.5 * I, -0.5 * I, -0.5)) < 1e-15);
  }
  SUBCASE("theta = pi/2") {
    const KrausSet ks = extract_kraus_direct(CoinAngle(kPi / 2), 2);
    CHECK(oracle::max_abs(ks.at(2)) < 1e-15);
    CHECK(oracle::max_abs(ks.at(-2)) < 1e-15);
    CHECK(oracle::max_abs(ks.at(0) + Mat2::Identity()) < 1e-15);
  }
}

TEST_CASE("standard-walk reference table, labelled") {
  for (double th : {kPi / 6, kPi / 4, kPi / 3, 1.0, 4.0}) {
    for (int t = 1; t <= 4; ++t) {
      const CoinAngle theta(th);
      CHECK(reference::labelled_mismatch(reference::standard_walk_table(theta, t),
                                         extract_kraus_direct(theta, t)) <= 1e-12);
    }
  }
}

TEST_CASE("split-step reference table, as sets") {
  for (double th : {kPi / 6, kPi / 3, 0.9}) {
    for (int n = 1; n <= 3; ++n) {
      const CoinAngle theta(th);
      const KrausSet ks = extract_kraus_split_step(theta, n);
      CHECK(ks.size() == static_cast<std::size_t>(2 * n + 1));
      CHECK(reference::set_mismatch(reference::split_step_table(theta, n), ks) <= 1e-12);
    }
  }
  SUBCASE("labels follow ascending site of the underlying walk") {
    const CoinAngle theta(0.8);
    const KrausSet ks = extract_kraus_split_step(theta, 1);
    const double c = std::cos(0.8), s = std::sin(0.8);
    CHECK(ks.entries.front().label == -1);
    CHECK(oracle::max_abs(ks.at(-1) - m2(c * c, -I * c * s, 0, 0)) < 1e-15);
    CHECK(oracle::max_abs(ks.at(0) - extract_kraus_direct(theta, 2).at(0)) == 0.0);
    CHECK(extract_kraus_split_step(CoinAngle(kPi / 5), 3).completeness_residual() <= 1e-10);
  }
  SUBCASE("split-step operators from W_ss applied n times") {
    const CoinAngle theta(1.3);
    for (int n = 1; n <= 3; ++n) {
      const Lattice l = Lattice::for_steps(2 * n);
      const JointOperator wss = build_split_step_unitary(theta, l);
      const KrausSet ks = extract_kraus_split_step(theta, n);
      for (int in = 0; in < 2; ++in) {
        Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(2 * l.size());
        psi[in * l.size() + l.origin_index()] = 1.0;
        for (int k = 0; k < n; ++k) psi = wss * psi;
        for (const auto& e : ks.entries) {
          const int x = 2 * e.label;
          CHECK(std::abs(psi[l.index_of(x)] - e.matrix(0, in)) < 1e-13);
          CHECK(std::abs(psi[l.size() + l.index_of(x)] - e.matrix(1, in)) < 1e-13);
        }
      }
    }
  }
}

TEST_CASE("completeness, parity and count") {
  for (int t = 1; t <= 25; ++t) {
    for (double th : grid16()) {
      const KrausSet ks = extract_kraus_direct(CoinAngle(th), t);
      CHECK(ks.completeness_residual() <= 1e-10);
      REQUIRE(ks.size() == static_cast<std::size_t>(t + 1));
      for (std::size_t i = 0; i < ks.size(); ++i) {
        CHECK(ks.entries[i].label == -t + 2 * static_cast<int>(i));
      }
      CHECK(oracle::max_abs(ks.at(-t) - minor_map(ks.at(t))) <= 1e-12);
    }
  }
}

TEST_CASE("theta = pi/2 degeneracy at even steps") {
  for (int t = 2; t <= 12; t += 2) {
    const KrausSet ks = extract_kraus_direct(CoinAngle(kPi / 2), t);
    for (const auto& e : ks.entries) {
      if (e.label == 0) {
        const double dev = std::min(oracle::max_abs(e.matrix - Mat2::Identity()),
                                    oracle::max_abs(e.matrix + Mat2::Identity()));
        CHECK(dev <= 1e-14);
      } else {
        CHECK(oracle::max_abs(e.matrix) <= 1e-14);
      }
    }
  }
}

TEST_CASE("binomial expansion with the commutator recurrence") {
  SUBCASE("D_0 and D_1 vanish") {
    const WalkParts parts = build_walk_parts(CoinAngle(0.6), Lattice(9));
    const auto d = build_dk_table(parts, 3);
    REQUIRE(d.size() == 4);
    CHECK(oracle::max_abs(d[0]) == 0.0);
    CHECK(oracle::max_abs(d[1]) == 0.0);
    CHECK(oracle::max_abs(d[2] - (parts.Q * parts.P - parts.P * parts.Q)) == 0.0);
  }
  SUBCASE("t = 2 correction is exactly [Q, P]") {
    const WalkParts parts = build_walk_parts(CoinAngle(0.6), Lattice(7));
    const JointOperator sum = parts.P + parts.Q;
    const JointOperator naive = parts.P * parts.P + 2.0 * parts.P * parts.Q + parts.Q * parts.Q;
    CHECK(oracle::max_abs(sum * sum - naive - (parts.Q * parts.P - parts.P * parts.Q)) < 1e-15);
    CHECK(oracle::max_abs(binomial_walk_power(parts, 2) - sum * sum) < 1e-15);
  }
  SUBCASE("t = 1 reproduces the one-step pair") {
    const KrausSet b = extract_kraus_binomial(CoinAngle(0.3), 1);
    const KrausSet d = extract_kraus_direct(CoinAngle(0.3), 1);
    for (std::size_t i = 0; i < 2; ++i) CHECK(oracle::max_abs(b.entries[i].matrix - d.entries[i].matrix) < 1e-15);
  }
  SUBCASE("agrees with direct projection up to the cap") {
    for (double th : {kPi / 7, kPi / 4, 1.0, kPi / 6}) {
      for (int t = 1; t <= kBinomialMaxSteps; ++t) {
        const KrausSet b = extract_kraus_binomial(CoinAngle(th), t);
        const KrausSet d = extract_kraus_direct(CoinAngle(th), t);
        REQUIRE(b.size() == d.size());
        for (std::size_t i = 0; i < b.size(); ++i) {
          CHECK(b.entries[i].label == d.entries[i].label);
          CHECK(oracle::max_abs(b.entries[i].matrix - d.entries[i].matrix) <= 1e-9);
        }
      }
    }
  }
  SUBCASE("cap") {
    CHECK_THROWS_AS(extract_kraus_binomial(CoinAngle(0.3), 9), std::invalid_argument);
    CHECK_NOTHROW(extract_kraus_binomial(CoinAngle(0.3), 9, 9));
    CHECK_THROWS_AS(extract_kraus_binomial(CoinAngle(0.3), 0), std::invalid_argument);
  }
}

TEST_CASE("closed-form first term") {
  const double th = 0.45;
  const double c = std::cos(th), s = std::sin(th);
  const CoinAngle theta(th);
  CHECK(oracle::max_abs(kraus_closed_form_first_term(theta, 1, 1) - m2(c, -I * s, 0, 0)) < 1e-15);
  CHECK(oracle::max_abs(kraus_closed_form_first_term(theta, 1, -1) - m2(0, 0, -I * s, c)) < 1e-15);
  CHECK(oracle::max_abs(kraus_closed_form_first_term(theta, 2, 2) - m2(c * c, -I * s * c, 0, 0)) < 1e-15);
  CHECK(oracle::max_abs(kraus_closed_form_first_term(theta, 2, 2) -
                        extract_kraus_direct(theta, 2).at(2)) < 1e-15);

  // Interior labels also carry the projected D-term.
  const Mat2 first = kraus_closed_form_first_term(theta, 2, 0);
  const Mat2 full = extract_kraus_direct(theta, 2).at(0);
  CHECK(oracle::max_abs(first - full) > 0.1);
  const Lattice l = Lattice::for_steps(2);
  const WalkParts parts = build_walk_parts(theta, l);
  const auto d = build_dk_table(parts, 2);
  JointOperator correction = JointOperator::Zero(d[0].rows(), d[0].cols());
  JointOperator q_pow = JointOperator::Identity(d[0].rows(), d[0].cols());
  const double binom[] = {1, 2, 1};
  for (int k = 2; k >= 0; --k) {
    correction += binom[k] * d[k] * q_pow;
    q_pow = q_pow * parts.Q;
  }
  Mat2 projected;
  const int origin = l.origin_index();
  for (int r = 0; r < 2; ++r) {
    for (int col = 0; col < 2; ++col) projected(r, col) = correction(r * l.size() + origin, col * l.size() + origin);
  }
  CHECK(oracle::max_abs(full - first - projected) < 1e-15);

  CHECK_THROWS_AS(kraus_closed_form_first_term(theta, 2, 1), std::invalid_argument);
  CHECK_THROWS_AS(kraus_closed_form_first_term(theta, 3, 5), std::invalid_argument);
}

TEST_CASE("minor map") {
  CHECK(oracle::max_abs(minor_map(Mat2::Identity()) - Mat2::Identity()) == 0.0);
  const KrausSet one = extract_kraus_direct(CoinAngle(0.77), 1);
  CHECK(oracle::max_abs(minor_map(one.at(1)) - one.at(-1)) == 0.0);
  std::mt19937 rng(2);
  std::normal_distribution<double> n;
  for (int i = 0; i < 20; ++i) {
    const Mat2 m = m2(cplx(n(rng), n(rng)), cplx(n(rng), n(rng)), cplx(n(rng), n(rng)), cplx(n(rng), n(rng)));
    CHECK(oracle::max_abs(minor_map(minor_map(m)) - m) == 0.0);
  }
}

TEST_CASE("entry order does not change the channel") {
  const KrausSet ks = extract_kraus_direct(CoinAngle(1.1), 5);
  KrausSet shuffled = ks;
  std::mt19937 rng(9);
  std::shuffle(shuffled.entries.begin(), shuffled.entries.end(), rng);
  Mat2 rho = oracle::random_density(rng);
  Mat2 a = Mat2::Zero(), b = Mat2::Zero();
  for (const auto& e : ks.entries) a += e.matrix * rho * e.matrix.adjoint();
  for (const auto& e : shuffled.entries) b += e.matrix * rho * e.matrix.adjoint();
  CHECK(oracle::max_abs(a - b) < 1e-15);
}

TEST_CASE("JSON serialization") {
  std::mt19937 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const double th = std::uniform_real_distribution<double>(0, kTwoPi)(rng);
    const int t = std::uniform_int_distribution<int>(1, 12)(rng);
    const KrausSet ks = extract_kraus_direct(CoinAngle(th), t);
    const KrausSet back = parse_kraus(serialize_kraus(ks));
    CHECK(back.theta.radians() == ks.theta.radians());
    CHECK(back.steps == ks.steps);
    REQUIRE(back.size() == ks.size());
    for (std::size_t i = 0; i < ks.size(); ++i) {
      CHECK(back.entries[i].label == ks.entries[i].label);
      CHECK((back.entries[i].matrix.array() == ks.entries[i].matrix.array()).all());
    }
  }
  const auto j = nlohmann::json::parse(serialize_kraus(extract_kraus_direct(CoinAngle(0.0), 1)));
  CHECK(j.at("t") == 1);
  CHECK(j.at("entries").size() == 2);
  CHECK(j.at("entries")[1].at("mu") == 1);
  CHECK(j.at("entries")[1].at("matrix")[0][0] == nlohmann::json::array({1.0, 0.0}));

  CHECK_THROWS(parse_kraus(R"({"theta": 0, "t": 1, "entries": [{"mu": 1, "matrix": [[1, 0]]}]})"));
  CHECK_THROWS(parse_kraus("not json"));
}
