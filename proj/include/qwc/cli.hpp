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
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qwc/witnesses.hpp"

namespace qwc::cli {

/// Evenly spaced inclusive grid; count == 1 yields {start}.
struct Grid {
  double start = 0.0;
  double stop = kPi;
  int count = 64;

  std::vector<double> values() const;
  /// "start:stop:count"
  static Grid parse(const std::string& text);
  static Grid single(double v) { return {v, v, 1}; }
};

enum class OutputFormat { Csv, Json };

struct SweepConfig {
  std::string command;
  Grid theta_grid;
  std::vector<int> steps;
  Grid delta_grid = Grid::single(0.0);
  double rtn_a = 2.0;
  double rtn_a_markovian = 0.4;
  double rtn_gamma = 1.0;
  double rtn_dt = 1.0;
  DensityMatrix2 rho1 = reference_ensemble_state1();
  DensityMatrix2 rho2 = reference_ensemble_state2();
  int holevo_grid = 101;
  std::string out_path;
  OutputFormat format = OutputFormat::Csv;

  /// Throws std::invalid_argument on empty grids, non-finite angles or bad RTN settings.
  void validate() const;
};

using Cell = std::variant<int, double, std::string>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

/// Shortest round-trip decimal representation.
std::string format_double(double v);

void write_csv(const Table& table, std::ostream& os);
void write_json(const Table& table, std::ostream& os);

/// Runs fn(i) for i in [0, n) on a worker pool sized by QWC_WORKERS
/// (default: hardware concurrency).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);
int worker_count();

Table cmd_probability(const SweepConfig& cfg);
Table cmd_trace_distance(const SweepConfig& cfg);
Table cmd_rtn_composite(const SweepConfig& cfg);
Table cmd_purity(const SweepConfig& cfg);
Table cmd_holevo(const SweepConfig& cfg);

struct CheckResult {
  std::string name;
  bool passed;
  std::string detail;
};

struct VerifyOptions {
  /// Applied to every Kraus set the completeness check inspects (fault injection).
  std::function<void(KrausSet&)> tamper;
};

std::vector<CheckResult> run_verify_checks(const VerifyOptions& opts = {});
int cmd_verify(std::ostream& out, const VerifyOptions& opts = {});

/// Full command-line entry point; returns the process exit code
/// (0 success, 1 verification failure, 2 invalid arguments or I/O error).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qwc::cli
