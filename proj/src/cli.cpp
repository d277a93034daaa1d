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

#include "qwc/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "qwc/reference_tables.hpp"

namespace qwc::cli {

namespace {

using nlohmann::json;

std::vector<int> range_steps(int lo, int hi) {
  std::vector<int> v;
  for (int i = lo; i <= hi; ++i) v.push_back(i);
  return v;
}

int max_step(const std::vector<int>& steps) {
  return *std::max_element(steps.begin(), steps.end());
}

double parse_number(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + text + "'");
  }
  if (used != text.size()) throw std::invalid_argument("not a number: '" + text + "'");
  return v;
}

int parse_int(const std::string& text) {
  int v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw std::invalid_argument("not an integer: '" + text + "'");
  return v;
}

// "3", "1,2,5", "1-8", "1-4,6"
std::vector<int> parse_steps(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto dash = item.find('-', 1);
    if (dash == std::string::npos) {
      out.push_back(parse_int(item));
    } else {
      const int lo = parse_int(item.substr(0, dash));
      const int hi = parse_int(item.substr(dash + 1));
      if (hi < lo) throw std::invalid_argument("empty step range '" + item + "'");
      for (int i = lo; i <= hi; ++i) out.push_back(i);
    }
  }
  if (out.empty()) throw std::invalid_argument("empty step list");
  return out;
}

Mat2 parse_matrix(const json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("matrix must be 2x2");
  Mat2 m;
  for (int r = 0; r < 2; ++r) {
    if (!j[r].is_array() || j[r].size() != 2) throw std::invalid_argument("matrix must be 2x2");
    for (int c = 0; c < 2; ++c) {
      const json& z = j[r][c];
      if (z.is_number()) {
        m(r, c) = z.get<double>();
      } else if (z.is_array() && z.size() == 2) {
        m(r, c) = cplx(z[0].get<double>(), z[1].get<double>());
      } else {
        throw std::invalid_argument("matrix entries are numbers or [re, im] pairs");
      }
    }
  }
  return m;
}

Grid grid_from_json(const json& j) {
  if (j.is_string()) return Grid::parse(j.get<std::string>());
  return Grid{j.at("start").get<double>(), j.at("stop").get<double>(), j.at("count").get<int>()};
}

std::vector<int> steps_from_json(const json& j) {
  if (j.is_string()) return parse_steps(j.get<std::string>());
  if (j.is_number_integer()) return {j.get<int>()};
  return j.get<std::vector<int>>();
}

void apply_config_file(const std::string& path, SweepConfig& cfg, bool& theta_set,
                       bool& delta_set, bool& steps_set) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed config file: ") + e.what());
  }
  try {
    if (j.contains("theta")) {
      cfg.theta_grid = Grid::single(j["theta"].get<double>());
      theta_set = true;
    }
    if (j.contains("theta_grid")) {
      cfg.theta_grid = grid_from_json(j["theta_grid"]);
      theta_set = true;
    }
    if (j.contains("t")) {
      cfg.steps = {j["t"].get<int>()};
      steps_set = true;
    }
    if (j.contains("steps")) {
      cfg.steps = steps_from_json(j["steps"]);
      steps_set = true;
    }
    if (j.contains("delta")) {
      cfg.delta_grid = Grid::single(j["delta"].get<double>());
      delta_set = true;
    }
    if (j.contains("delta_grid")) {
      cfg.delta_grid = grid_from_json(j["delta_grid"]);
      delta_set = true;
    }
    if (j.contains("rtn")) {
      const json& r = j["rtn"];
      cfg.rtn_a = r.value("a", cfg.rtn_a);
      cfg.rtn_a_markovian = r.value("a_markovian", cfg.rtn_a_markovian);
      cfg.rtn_gamma = r.value("gamma", cfg.rtn_gamma);
      cfg.rtn_dt = r.value("dt", cfg.rtn_dt);
    }
    if (j.contains("ensemble")) {
      cfg.rho1 = DensityMatrix2(parse_matrix(j["ensemble"].at("rho1")));
      cfg.rho2 = DensityMatrix2(parse_matrix(j["ensemble"].at("rho2")));
    }
    cfg.holevo_grid = j.value("holevo_grid", cfg.holevo_grid);
    cfg.out_path = j.value("out", cfg.out_path);
    if (j.contains("format")) {
      const auto f = j["format"].get<std::string>();
      if (f != "csv" && f != "json") throw std::invalid_argument("format must be csv or json");
      cfg.format = f == "csv" ? OutputFormat::Csv : OutputFormat::Json;
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad config value: ") + e.what());
  }
}

void write_table(const Table& table, OutputFormat format, std::ostream& os) {
  if (format == OutputFormat::Json) {
    write_json(table, os);
  } else {
    write_csv(table, os);
  }
}

void write_kraus_csv(const KrausSet& ks, std::ostream& os) {
  Table t{{"mu", "row", "col", "re", "im"}, {}};
  for (const auto& e : ks.entries) {
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        t.rows.push_back({e.label, r, c, e.matrix(r, c).real(), e.matrix(r, c).imag()});
      }
    }
  }
  write_csv(t, os);
}

// Index decomposition for row-major sweeps over (outer, inner).
struct Index2 {
  std::size_t outer;
  std::size_t inner;
};
Index2 split(std::size_t i, std::size_t inner_size) { return {i / inner_size, i % inner_size}; }

}  // namespace

std::vector<double> Grid::values() const {
  std::vector<double> v;
  if (count == 1) return {start};
  v.reserve(count);
  for (int i = 0; i < count; ++i) {
    v.push_back(i == count - 1 ? stop : start + (stop - start) * i / (count - 1));
  }
  return v;
}

Grid Grid::parse(const std::string& text) {
  const auto first = text.find(':');
  const auto second = first == std::string::npos ? std::string::npos : text.find(':', first + 1);
  if (second == std::string::npos) {
    throw std::invalid_argument("grid must be start:stop:count, got '" + text + "'");
  }
  const Grid g{parse_number(text.substr(0, first)),
               parse_number(text.substr(first + 1, second - first - 1)),
               parse_int(text.substr(second + 1))};
  if (g.count < 1) throw std::invalid_argument("grid count must be >= 1");
  if (!std::isfinite(g.start) || !std::isfinite(g.stop)) {
    throw std::invalid_argument("grid bounds must be finite");
  }
  return g;
}

void SweepConfig::validate() const {
  for (const Grid* g : {&theta_grid, &delta_grid}) {
    if (g->count < 1) throw std::invalid_argument("grid counts must be >= 1");
    if (!std::isfinite(g->start) || !std::isfinite(g->stop)) {
      throw std::invalid_argument("grid bounds must be finite");
    }
  }
  if (steps.empty()) throw std::invalid_argument("step list must not be empty");
  for (int s : steps) {
    if (s < 1) throw std::invalid_argument("steps must be >= 1");
  }
  if (holevo_grid < 3) throw std::invalid_argument("Holevo grid needs at least 3 points");
  RTNParams(rtn_a, rtn_gamma, rtn_dt);
  RTNParams(rtn_a_markovian, rtn_gamma, rtn_dt);
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("float formatting failed");
  return std::string(buf, ptr);
}

void write_csv(const Table& table, std::ostream& os) {
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    os << (i ? "," : "") << table.header[i];
  }
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      std::visit(
          [&os](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              os << format_double(v);
            } else {
              os << v;
            }
          },
          row[i]);
    }
    os << '\n';
  }
}

void write_json(const Table& table, std::ostream& os) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::visit([&](const auto& v) { obj[table.header[i]] = v; }, row[i]);
    }
    arr.push_back(std::move(obj));
  }
  os << arr.dump(2) << '\n';
}

int worker_count() {
  if (const char* env = std::getenv("QWC_WORKERS")) {
    try {
      const int n = parse_int(env);
      if (n >= 1) return n;
    } catch (const std::invalid_argument&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

Table cmd_probability(const SweepConfig& cfg) {
  cfg.validate();
  const auto thetas = cfg.theta_grid.values();
  const auto deltas = cfg.delta_grid.values();
  const auto& steps = cfg.steps;
  // One Kraus extraction per (theta, step), reused across deltas.
  std::vector<std::vector<double>> p(thetas.size() * steps.size());
  parallel_for(p.size(), [&](std::size_t i) {
    const auto [ti, si] = split(i, steps.size());
    const KrausSet ks = extract_kraus_direct(CoinAngle(thetas[ti]), steps[si]);
    for (double d : deltas) {
      p[i].push_back(apply_kraus(ks, CoinState::from_delta(d).density())(0, 0).real());
    }
  });
  Table t{{"theta", "delta", "step", "p_up"}, {}};
  for (std::size_t ti = 0; ti < thetas.size(); ++ti) {
    for (std::size_t di = 0; di < deltas.size(); ++di) {
      for (std::size_t si = 0; si < steps.size(); ++si) {
        t.rows.push_back({thetas[ti], deltas[di], steps[si], p[ti * steps.size() + si][di]});
      }
    }
  }
  return t;
}

Table cmd_trace_distance(const SweepConfig& cfg) {
  cfg.validate();
  const auto thetas = cfg.theta_grid.values();
  const int n_max = max_step(cfg.steps);
  const SeriesMode modes[] = {SeriesMode::NStep, SeriesMode::Concatenated};
  std::vector<TDSeries> series(thetas.size() * 2);
  parallel_for(series.size(), [&](std::size_t i) {
    const auto [ti, mi] = split(i, 2);
    series[i] = td_series(CoinAngle(thetas[ti]), n_max, modes[mi]);
  });
  Table t{{"theta", "step", "mode", "d"}, {}};
  for (std::size_t ti = 0; ti < thetas.size(); ++ti) {
    for (int n = 0; n <= n_max; ++n) {
      for (std::size_t mi = 0; mi < 2; ++mi) {
        const TDSeries& s = series[ti * 2 + mi];
        t.rows.push_back({thetas[ti], n, std::string(to_string(s.mode)), s.entries[n].d});
      }
    }
  }
  return t;
}

Table cmd_rtn_composite(const SweepConfig& cfg) {
  cfg.validate();
  const auto thetas = cfg.theta_grid.values();
  if (thetas.size() != 1) throw std::invalid_argument("rtn-composite takes a single --theta");
  const RTNParams markovian(cfg.rtn_a_markovian, cfg.rtn_gamma, cfg.rtn_dt);
  const RTNParams non_markovian(cfg.rtn_a, cfg.rtn_gamma, cfg.rtn_dt);
  if (markovian.non_markovian()) {
    throw std::invalid_argument("Markovian RTN amplitude must satisfy (a/gamma)^2 < 1/4");
  }
  if (!non_markovian.non_markovian()) {
    throw std::invalid_argument("non-Markovian RTN amplitude must satisfy (a/gamma)^2 > 1/4");
  }
  const CoinAngle theta(thetas.front());
  const int n_max = max_step(cfg.steps);
  struct Regime {
    const char* name;
    std::optional<RTNParams> rtn;
  };
  const Regime regimes[] = {{"none", std::nullopt},
                            {"markovian", markovian},
                            {"non-markovian", non_markovian}};
  std::vector<TDSeries> series(3);
  parallel_for(3, [&](std::size_t i) {
    series[i] = td_series(theta, n_max, regimes[i].rtn ? SeriesMode::Composite : SeriesMode::NStep,
                          regimes[i].rtn);
  });
  Table t{{"step", "regime", "d"}, {}};
  for (int n = 0; n <= n_max; ++n) {
    for (std::size_t i = 0; i < 3; ++i) {
      t.rows.push_back({n, std::string(regimes[i].name), series[i].entries[n].d});
    }
  }
  return t;
}

Table cmd_purity(const SweepConfig& cfg) {
  cfg.validate();
  const auto thetas = cfg.theta_grid.values();
  const auto deltas = cfg.delta_grid.values();
  const auto& steps = cfg.steps;
  std::vector<std::vector<DensityMatrix2>> out(thetas.size() * steps.size());
  parallel_for(out.size(), [&](std::size_t i) {
    const auto [ti, si] = split(i, steps.size());
    const KrausSet ks = extract_kraus_direct(CoinAngle(thetas[ti]), steps[si]);
    for (double d : deltas) out[i].push_back(apply_kraus(ks, CoinState::from_delta(d).density()));
  });
  Table t{{"theta", "delta", "step", "purity", "mixedness"}, {}};
  for (std::size_t ti = 0; ti < thetas.size(); ++ti) {
    for (std::size_t di = 0; di < deltas.size(); ++di) {
      for (std::size_t si = 0; si < steps.size(); ++si) {
        const DensityMatrix2& rho = out[ti * steps.size() + si][di];
        t.rows.push_back({thetas[ti], deltas[di], steps[si], purity(rho), mixedness(rho, 2)});
      }
    }
  }
  return t;
}

Table cmd_holevo(const SweepConfig& cfg) {
  cfg.validate();
  const auto thetas = cfg.theta_grid.values();
  const auto& steps = cfg.steps;
  std::vector<HolevoMax> best(thetas.size() * steps.size());
  parallel_for(best.size(), [&](std::size_t i) {
    const auto [ti, si] = split(i, steps.size());
    best[i] = holevo_max(cfg.rho1, cfg.rho2, walk_channel(CoinAngle(thetas[ti]), steps[si]),
                         cfg.holevo_grid);
  });
  Table t{{"theta", "step", "chi_max", "p1_star"}, {}};
  for (std::size_t ti = 0; ti < thetas.size(); ++ti) {
    for (std::size_t si = 0; si < steps.size(); ++si) {
      const HolevoMax& h = best[ti * steps.size() + si];
      t.rows.push_back({thetas[ti], steps[si], h.chi_max, h.p1_star});
    }
  }
  return t;
}

namespace {

std::vector<double> uniform_grid(int count) {
  std::vector<double> v;
  for (int i = 0; i < count; ++i) v.push_back(kTwoPi * i / count);
  return v;
}

CheckResult check(std::string name, double worst, double tol) {
  std::ostringstream detail;
  detail << "max deviation " << worst << " (tolerance " << tol << ")";
  return {std::move(name), worst <= tol, detail.str()};
}

}  // namespace

std::vector<CheckResult> run_verify_checks(const VerifyOptions& opts) {
  std::vector<CheckResult> results;

  {
    double worst = 0.0;
    for (int t = 1; t <= 25; ++t) {
      for (double th : uniform_grid(16)) {
        KrausSet ks = extract_kraus_direct(CoinAngle(th), t);
        if (opts.tamper) opts.tamper(ks);
        worst = std::max(worst, ks.completeness_residual());
      }
    }
    results.push_back(check("completeness", worst, 1e-10));
  }

  {
    double worst = 0.0;
    for (int t = 1; t <= 25; ++t) {
      for (double th : uniform_grid(16)) {
        const KrausSet ks = extract_kraus_direct(CoinAngle(th), t);
        worst = std::max(worst, (ks.at(-t) - minor_map(ks.at(t))).cwiseAbs().maxCoeff());
      }
    }
    results.push_back(check("minor-symmetry", worst, 1e-12));
  }

  {
    double worst = 0.0;
    for (double th : {kPi / 6, kPi / 4, kPi / 3}) {
      const CoinAngle theta(th);
      for (int t = 1; t <= 4; ++t) {
        worst = std::max(worst, reference::labelled_mismatch(reference::standard_walk_table(theta, t),
                                                             extract_kraus_direct(theta, t)));
      }
      for (int n = 1; n <= 3; ++n) {
        worst = std::max(worst, reference::set_mismatch(reference::split_step_table(theta, n),
                                                        extract_kraus_split_step(theta, n)));
      }
    }
    results.push_back(check("table-fidelity", worst, 1e-12));
  }

  {
    double worst = 0.0;
    for (double th : {kPi / 7, kPi / 4, 1.0}) {
      for (int t = 1; t <= kBinomialMaxSteps; ++t) {
        const KrausSet direct = extract_kraus_direct(CoinAngle(th), t);
        const KrausSet binom = extract_kraus_binomial(CoinAngle(th), t);
        for (std::size_t i = 0; i < direct.size(); ++i) {
          worst = std::max(worst,
                           (direct.entries[i].matrix - binom.entries[i].matrix).cwiseAbs().maxCoeff());
        }
      }
    }
    results.push_back(check("oracle-equivalence", worst, 1e-9));
  }

  {
    // Joint evolution by dense W products, independent of the stepping kernel.
    std::mt19937 rng(20261015);
    std::normal_distribution<double> normal;
    double worst = 0.0;
    for (int n = 1; n <= 12; ++n) {
      const CoinAngle theta(std::uniform_real_distribution<double>(0.0, kTwoPi)(rng));
      cplx a(normal(rng), normal(rng));
      cplx b(normal(rng), normal(rng));
      const double norm = std::sqrt(std::norm(a) + std::norm(b));
      a /= norm;
      b /= norm;
      const Lattice lattice = Lattice::for_steps(n);
      const JointOperator w = build_walk_unitary(theta, lattice);
      Eigen::VectorXcd psi = JointState::localized(lattice, a, b).amplitudes();
      for (int k = 0; k < n; ++k) psi = w * psi;
      const Mat2 expected = reduced_coin_state(JointState(lattice, psi));
      const Mat2 got = n_step_map(theta, n, CoinState(a, b).density()).matrix();
      worst = std::max(worst, (expected - got).cwiseAbs().maxCoeff());
    }
    results.push_back(check("reduced-dynamics", worst, 1e-10));
  }

  {
    std::mt19937 rng(7);
    std::normal_distribution<double> normal;
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      cplx a(normal(rng), normal(rng));
      cplx b(normal(rng), normal(rng));
      const double norm = std::sqrt(std::norm(a) + std::norm(b));
      a /= norm;
      b /= norm;
      const CoinAngle theta(std::uniform_real_distribution<double>(0.0, kTwoPi)(rng));
      for (int t = 1; t <= 3; ++t) {
        const DensityMatrix2 out = n_step_map(theta, t, CoinState(a, b).density());
        worst = std::max(worst, std::abs(out(0, 0).real() - closed_form_p(theta, t, a, b)));
        worst = std::max(worst, std::abs(out(1, 0) - closed_form_q(theta, t, a, b)));
      }
    }
    results.push_back(check("closed-forms", worst, 1e-12));
  }

  {
    double worst = 0.0;
    for (double th : uniform_grid(16)) {
      const TDSeries s = td_series(CoinAngle(th), 30, SeriesMode::Concatenated);
      for (const auto& p : s.entries) {
        worst = std::max(worst, std::abs(p.d - std::pow(std::abs(std::cos(2 * th)), p.n)));
      }
    }
    results.push_back(check("decay-law", worst, 1e-12));
  }

  {
    double worst = 0.0;
    for (int t = 2; t <= 12; t += 2) {
      const KrausSet ks = extract_kraus_direct(CoinAngle(kPi / 2), t);
      for (const auto& e : ks.entries) {
        if (e.label == 0) {
          const double plus = (e.matrix - Mat2::Identity()).cwiseAbs().maxCoeff();
          const double minus = (e.matrix + Mat2::Identity()).cwiseAbs().maxCoeff();
          worst = std::max(worst, std::min(plus, minus));
        } else {
          worst = std::max(worst, e.matrix.cwiseAbs().maxCoeff());
        }
      }
    }
    results.push_back(check("half-pi-degeneracy", worst, 1e-14));
  }

  {
    double worst = 0.0;
    for (int t = 0; t <= 10; ++t) {
      const Lattice lattice = Lattice::for_steps(t);
      const ShiftPair s = build_shifts(lattice);
      for (int k = 0; k <= t; ++k) {
        Eigen::MatrixXd prod = Eigen::MatrixXd::Identity(lattice.size(), lattice.size());
        for (int i = 0; i < k; ++i) prod = prod * s.left;
        for (int i = 0; i < t - k; ++i) prod = prod * s.right;
        for (int mu = -t; mu <= t; ++mu) {
          const double expected = (mu + k == t - k) ? 1.0 : 0.0;
          worst = std::max(worst, std::abs(prod(lattice.index_of(mu), lattice.origin_index()) - expected));
        }
      }
    }
    results.push_back(check("shift-power-identity", worst, 0.0));
  }

  {
    double worst = 0.0;
    for (int size : {5, 11, 41}) {
      for (int i = 0; i < 32; ++i) {
        const JointOperator w = build_walk_unitary(CoinAngle(kTwoPi * i / 32), Lattice(size));
        const JointOperator id = JointOperator::Identity(w.rows(), w.cols());
        worst = std::max(worst, (w.adjoint() * w - id).cwiseAbs().maxCoeff());
      }
    }
    results.push_back(check("unitarity", worst, 1e-12));
  }

  return results;
}

int cmd_verify(std::ostream& out, const VerifyOptions& opts) {
  const auto results = run_verify_checks(opts);
  int failures = 0;
  for (const auto& r : results) {
    out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
    if (!r.passed) ++failures;
  }
  out << results.size() - failures << "/" << results.size() << " checks passed\n";
  return failures == 0 ? 0 : 1;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reduced coin dynamics of the discrete-time quantum walk"};
  app.require_subcommand(1);

  std::string theta_text, theta_grid_text, delta_text, delta_grid_text, steps_text;
  std::string config_path, out_path, format_text;
  double rtn_a = 0.0, rtn_a_markovian = 0.0, rtn_gamma = 0.0, rtn_dt = 0.0;
  int t_single = 0;
  int holevo_grid = 0;
  bool split_step = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--theta", theta_text, "Coin angle in radians");
    sub->add_option("--theta-grid", theta_grid_text, "Coin angle grid start:stop:count");
    sub->add_option("--t", t_single, "Step count");
    sub->add_option("--steps", steps_text, "Step list, e.g. 1-8 or 1,3,5");
    sub->add_option("--delta", delta_text, "Input state parameter delta in radians");
    sub->add_option("--delta-grid", delta_grid_text, "Delta grid start:stop:count");
    sub->add_option("--rtn-a", rtn_a, "RTN amplitude of the non-Markovian series");
    sub->add_option("--rtn-a-markovian", rtn_a_markovian, "RTN amplitude of the Markovian series");
    sub->add_option("--rtn-gamma", rtn_gamma, "RTN decay rate");
    sub->add_option("--rtn-dt", rtn_dt, "Physical time per walk step");
    sub->add_option("--holevo-grid", holevo_grid, "Grid size for the Holevo maximization");
    sub->add_option("--out", out_path, "Output file (default: standard output)");
    sub->add_option("--config", config_path, "JSON config file; flags take precedence");
    sub->add_option("--format", format_text, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };

  const char* names[] = {"kraus", "probability", "trace-distance", "rtn-composite",
                         "purity", "holevo", "verify"};
  const char* descriptions[] = {"Dump the t-step Kraus set",
                                "p_t of finding the coin in |0>",
                                "Trace distance of evolved |0> and |1>, n-step vs concatenated",
                                "Trace distance under the RTN composite map",
                                "Purity and mixedness of the walk channel output",
                                "Maximized Holevo quantity of a two-state ensemble",
                                "Run the internal consistency checks"};
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < std::size(names); ++i) {
    CLI::App* sub = app.add_subcommand(names[i], descriptions[i]);
    if (std::string(names[i]) != "verify") add_common(sub);
    subs.push_back(sub);
  }
  subs[0]->add_flag("--split-step", split_step, "Treat --t as the split-step count");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  if (command == "verify") return cmd_verify(out);

  auto given = [sub](const char* flag) { return sub->count(flag) > 0; };

  try {
    SweepConfig cfg;
    cfg.command = command;
    bool theta_set = false, delta_set = false, steps_set = false;
    if (given("--config")) apply_config_file(config_path, cfg, theta_set, delta_set, steps_set);

    if (given("--theta-grid")) {
      cfg.theta_grid = Grid::parse(theta_grid_text);
      theta_set = true;
    }
    if (given("--theta")) {
      cfg.theta_grid = Grid::single(parse_number(theta_text));
      theta_set = true;
    }
    if (given("--delta-grid")) {
      cfg.delta_grid = Grid::parse(delta_grid_text);
      delta_set = true;
    }
    if (given("--delta")) {
      cfg.delta_grid = Grid::single(parse_number(delta_text));
      delta_set = true;
    }
    if (given("--steps")) {
      cfg.steps = parse_steps(steps_text);
      steps_set = true;
    }
    if (given("--t")) {
      cfg.steps = {t_single};
      steps_set = true;
    }
    if (given("--rtn-a")) cfg.rtn_a = rtn_a;
    if (given("--rtn-a-markovian")) cfg.rtn_a_markovian = rtn_a_markovian;
    if (given("--rtn-gamma")) cfg.rtn_gamma = rtn_gamma;
    if (given("--rtn-dt")) cfg.rtn_dt = rtn_dt;
    if (given("--holevo-grid")) cfg.holevo_grid = holevo_grid;
    if (given("--out")) cfg.out_path = out_path;
    if (given("--format")) cfg.format = format_text == "json" ? OutputFormat::Json : OutputFormat::Csv;

    if (!steps_set) {
      if (command == "trace-distance" || command == "rtn-composite") {
        cfg.steps = {20};
      } else {
        cfg.steps = range_steps(1, 8);
      }
    }
    if (!theta_set && command == "rtn-composite") cfg.theta_grid = Grid::single(kPi / 6);
    if (!delta_set && command == "purity") cfg.delta_grid = Grid::single(kPi / 4);

    std::ofstream file;
    std::ostream* sink = &out;
    if (!cfg.out_path.empty()) {
      file.open(cfg.out_path);
      if (!file) throw std::invalid_argument("cannot open output file '" + cfg.out_path + "'");
      sink = &file;
    }

    if (command == "kraus") {
      if (!theta_set) throw std::invalid_argument("kraus needs --theta");
      if (!steps_set || cfg.steps.size() != 1) throw std::invalid_argument("kraus needs a single --t");
      cfg.validate();
      if (cfg.theta_grid.count != 1) throw std::invalid_argument("kraus takes a single --theta");
      const CoinAngle theta(cfg.theta_grid.start);
      const KrausSet ks = split_step ? extract_kraus_split_step(theta, cfg.steps.front())
                                     : extract_kraus_direct(theta, cfg.steps.front());
      // JSON is the native form of a Kraus set; CSV is opt-in.
      if (given("--format") && cfg.format == OutputFormat::Csv) {
        write_kraus_csv(ks, *sink);
      } else {
        *sink << serialize_kraus(ks) << '\n';
      }
    } else {
      Table table;
      if (command == "probability") table = cmd_probability(cfg);
      else if (command == "trace-distance") table = cmd_trace_distance(cfg);
      else if (command == "rtn-composite") table = cmd_rtn_composite(cfg);
      else if (command == "purity") table = cmd_purity(cfg);
      else table = cmd_holevo(cfg);
      write_table(table, cfg.format, *sink);
    }
    sink->flush();
    if (!*sink) throw std::runtime_error("write failed");
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace qwc::cli
