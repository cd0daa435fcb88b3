/* Copyright 2026 The Specpulse Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "specpulse/selftest.hpp"

namespace specpulse::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& key, const std::string& value,
                          const std::string& range) {
  throw ValidationError(key + " = " + value + ": must be " + range);
}

int default_slices(int qubits) { return qubits >= 4 ? 512 : 128; }

int parse_delta(const std::string& text, int slices) {
  if (text == "n/4") return slices / 4;
  try {
    std::size_t used = 0;
    const int value = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    invalid("delta", text, "an integer or the symbolic \"n/4\"");
  }
}

std::string run_file_name(int run_index) {
  char name[32];
  std::snprintf(name, sizeof(name), "controls_%04d.csv", run_index);
  return name;
}

std::string status_string(const RunResult& run) {
  return run.error.empty() ? to_string(run.status) : "error";
}

void write_provenance(std::ofstream& out, const ResolvedExperiment& experiment) {
  const ExperimentConfig& cfg = experiment.input;
  out << "# qubits=" << cfg.qubits << "\n"
      << "# target=" << cfg.target << "\n"
      << "# slices=" << experiment.slices << "\n"
      << "# dt=" << format_double(cfg.dt) << "\n"
      << "# mu=" << format_double(cfg.mu) << "\n"
      << "# delta=" << experiment.delta << "\n"
      << "# runs=" << cfg.runs << "\n"
      << "# seed=" << cfg.seed << "\n"
      << "# oversample=" << cfg.oversample << "\n"
      << "# omega0=" << format_double(experiment.omega0) << "\n"
      << "# max_iterations=" << cfg.max_iterations << "\n";
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

std::ofstream open_for_write(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return out;
}

}  // namespace

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config file '" + path + "' cannot be opened");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& exc) {
    throw ValidationError("config file '" + path + "': " + exc.what());
  }
  if (!doc.is_object()) throw ValidationError("config file '" + path + "': expected an object");

  ExperimentConfig cfg;
  for (const auto& [key, value] : doc.items()) {
    try {
      if (key == "qubits") {
        cfg.qubits = value.get<int>();
      } else if (key == "target") {
        cfg.target = value.get<std::string>();
      } else if (key == "slices") {
        cfg.slices = value.get<int>();
      } else if (key == "dt") {
        cfg.dt = value.get<double>();
      } else if (key == "mu") {
        cfg.mu = value.get<double>();
      } else if (key == "delta") {
        cfg.delta = value.is_string() ? value.get<std::string>()
                                      : std::to_string(value.get<int>());
      } else if (key == "runs") {
        cfg.runs = value.get<int>();
      } else if (key == "seed") {
        cfg.seed = value.get<std::uint64_t>();
      } else if (key == "oversample") {
        cfg.oversample = value.get<int>();
      } else if (key == "out") {
        cfg.out = value.get<std::string>();
      } else {
        throw ValidationError("config file '" + path + "': unknown key \"" + key + "\"");
      }
    } catch (const json::exception&) {
      throw ValidationError("config file '" + path + "': key \"" + key +
                            "\" has the wrong type");
    }
  }
  return cfg;
}

ResolvedExperiment resolve(const ExperimentConfig& config) {
  ResolvedExperiment experiment;
  experiment.input = config;

  if (config.qubits < 1 || config.qubits > 10)
    invalid("qubits", std::to_string(config.qubits), "in [1, 10]");
  if (config.target != "not" && config.target != "swap")
    invalid("target", config.target, "one of {not, swap}");
  if (config.target == "swap" && config.qubits < 2)
    invalid("target", config.target, "used with qubits >= 2");

  experiment.slices = config.slices == 0 ? default_slices(config.qubits) : config.slices;
  if (experiment.slices < 2 || experiment.slices % 2 != 0)
    invalid("slices", std::to_string(experiment.slices), "an even integer >= 2");
  if (!(config.dt > 0.0) || !std::isfinite(config.dt))
    invalid("dt", format_double(config.dt), "a finite value > 0");
  if (!(config.mu >= 0.0 && config.mu <= 1.0))
    invalid("mu", format_double(config.mu), "in [0, 1]");

  experiment.delta = parse_delta(config.delta, experiment.slices);
  if (experiment.delta < 0 || experiment.delta >= experiment.slices / 2)
    invalid("delta", std::to_string(experiment.delta),
            "in [0, slices/2 - 1] (delta = slices/2 has a zero filter cutoff)");

  if (config.runs < 1) invalid("runs", std::to_string(config.runs), ">= 1");
  if (config.oversample < 1) invalid("oversample", std::to_string(config.oversample), ">= 1");
  if (config.max_iterations < 1)
    invalid("max-iters", std::to_string(config.max_iterations), ">= 1");
  if (!(config.amplitude >= 0.0))
    invalid("amplitude", format_double(config.amplitude), ">= 0");
  if (config.workers < 0) invalid("workers", std::to_string(config.workers), ">= 0");
  if (config.out.empty()) invalid("out", config.out, "a non-empty path");

  const SpinChainSystem sys = make_spin_chain(config.qubits);
  const TargetGate target =
      config.target == "not" ? target_not(config.qubits) : target_swap(config.qubits);
  experiment.spec = make_objective_spec(
      config.mu, make_band(experiment.slices, experiment.delta), sys, target, config.dt);
  experiment.omega0 = cutoff_from_band(experiment.slices, experiment.delta, config.dt);

  experiment.optimizer.max_iterations = config.max_iterations;
  experiment.optimizer.init_amplitude = config.amplitude;
  experiment.optimizer.seed = config.seed;
  return experiment;
}

void write_control_dump(const std::string& path,
                        const std::map<std::string, std::string>& header,
                        const ControlSequence& controls) {
  std::ofstream out = open_for_write(path);
  out << "# specpulse control dump\n";
  for (const auto& [key, value] : header) out << "# " << key << "=" << value << "\n";
  out << "# columns: index,t_start,hx,hy\n";
  for (int i = 0; i < controls.slice_count(); ++i) {
    out << (i + 1) << "," << format_double(i * controls.dt) << ","
        << format_double(controls.hx[i]) << "," << format_double(controls.hy[i]) << "\n";
  }
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

ControlDump read_control_dump(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open control dump '" + path + "'");

  ControlDump dump;
  std::vector<double> hx, hy;
  std::string line;
  int line_number = 0;
  int expected_index = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    const auto fail = [&](const std::string& what) -> std::runtime_error {
      return std::runtime_error(path + ":" + std::to_string(line_number) +
                                ": malformed control dump: " + what);
    };
    if (line[0] == '#') {
      const std::string body = line.size() > 1 && line[1] == ' ' ? line.substr(2)
                                                                 : line.substr(1);
      const std::size_t eq = body.find('=');
      if (eq != std::string::npos && body.rfind("columns:", 0) == std::string::npos)
        dump.header[body.substr(0, eq)] = body.substr(eq + 1);
      continue;
    }
    std::istringstream fields(line);
    std::string cell;
    double row[4];
    for (int f = 0; f < 4; ++f) {
      if (!std::getline(fields, cell, ','))
        throw fail("expected 4 comma-separated fields (index,t_start,hx,hy)");
      try {
        std::size_t used = 0;
        row[f] = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw fail("field " + std::to_string(f + 1) + " ('" + cell + "') is not a number");
      }
    }
    if (std::getline(fields, cell, ',')) throw fail("more than 4 fields");
    if (static_cast<int>(row[0]) != expected_index)
      throw fail("slice index " + std::to_string(static_cast<int>(row[0])) +
                 ", expected " + std::to_string(expected_index));
    ++expected_index;
    hx.push_back(row[2]);
    hy.push_back(row[3]);
  }
  if (hx.empty()) throw std::runtime_error(path + ": control dump holds no slices");

  const auto dt_entry = dump.header.find("dt");
  if (dt_entry == dump.header.end())
    throw std::runtime_error(path + ": control dump is missing the '# dt=' header");
  dump.controls.dt = std::stod(dt_entry->second);
  dump.controls.hx = Eigen::Map<Eigen::VectorXd>(hx.data(), static_cast<long>(hx.size()));
  dump.controls.hy = Eigen::Map<Eigen::VectorXd>(hy.data(), static_cast<long>(hy.size()));
  return dump;
}

std::vector<RunResult> cmd_run(const ResolvedExperiment& experiment, std::ostream& log) {
  const ExperimentConfig& cfg = experiment.input;
  const fs::path out_dir(cfg.out);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + cfg.out +
                                   "': " + ec.message());
  // Open the results table before doing any work so an unwritable output
  // location fails fast.
  std::ofstream results_file = open_for_write(out_dir / "results.csv");

  log << "specpulse run: " << cfg.qubits << "-qubit " << cfg.target << ", n=" << experiment.slices
      << ", dt=" << cfg.dt << ", mu=" << cfg.mu << ", delta=" << experiment.delta
      << ", runs=" << cfg.runs << ", seed=" << cfg.seed << "\n";

  int finished = 0;
  const auto progress = [&](const RunResult& run) {
    ++finished;
    log << "  [" << finished << "/" << cfg.runs << "] seed=" << run.seed
        << " status=" << status_string(run) << " iters=" << run.iterations
        << " f_pre=" << run.pre_filter_fidelity << " f_post=" << run.post_filter_fidelity
        << "\n";
  };
  const std::vector<RunResult> results =
      run_experiment(experiment.spec, experiment.optimizer, cfg.runs, cfg.oversample,
                     cfg.workers, progress);

  // (a) results table
  results_file << "# specpulse results\n";
  write_provenance(results_file, experiment);
  results_file << "# columns: seed,iterations,status,f_pre,f_post,p_x,p_y,final_g\n";
  for (const RunResult& run : results) {
    results_file << run.seed << "," << run.iterations << "," << status_string(run) << ","
                 << format_double(run.pre_filter_fidelity) << ","
                 << format_double(run.post_filter_fidelity) << ","
                 << format_double(run.power_x) << "," << format_double(run.power_y) << ","
                 << format_double(run.final_objective) << "\n";
  }
  results_file.close();

  // (b) per-run control dumps
  for (std::size_t j = 0; j < results.size(); ++j) {
    const RunResult& run = results[j];
    if (!run.error.empty()) continue;
    std::map<std::string, std::string> header;
    header["qubits"] = std::to_string(cfg.qubits);
    header["target"] = cfg.target;
    header["slices"] = std::to_string(experiment.slices);
    header["dt"] = format_double(cfg.dt);
    header["mu"] = format_double(cfg.mu);
    header["delta"] = std::to_string(experiment.delta);
    header["seed"] = std::to_string(cfg.seed);
    header["oversample"] = std::to_string(cfg.oversample);
    header["run_index"] = std::to_string(j);
    header["run_seed"] = std::to_string(run.seed);
    header["status"] = status_string(run);
    header["iterations"] = std::to_string(run.iterations);
    header["final_g"] = format_double(run.final_objective);
    header["f_pre"] = format_double(run.pre_filter_fidelity);
    header["f_post"] = format_double(run.post_filter_fidelity);
    header["p_x"] = format_double(run.power_x);
    header["p_y"] = format_double(run.power_y);
    write_control_dump((out_dir / run_file_name(static_cast<int>(j))).string(), header,
                       run.controls);
  }

  // (c) summary
  std::vector<double> f_pre, f_post;
  int failed = 0;
  int above = 0;
  for (const RunResult& run : results) {
    if (!run.error.empty()) {
      ++failed;
      continue;
    }
    f_pre.push_back(run.pre_filter_fidelity);
    f_post.push_back(run.post_filter_fidelity);
    if (run.post_filter_fidelity > 0.96) ++above;
  }
  const double count = static_cast<double>(results.size());
  std::ofstream summary = open_for_write(out_dir / "summary.csv");
  summary << "# specpulse summary\n";
  write_provenance(summary, experiment);
  summary << "# columns: metric,value\n";
  summary << "n_runs," << results.size() << "\n";
  summary << "failed_runs," << failed << "\n";
  summary << "f_pre_mean," << format_double(f_pre.empty() ? NAN : Eigen::Map<Eigen::VectorXd>(f_pre.data(), static_cast<long>(f_pre.size())).mean()) << "\n";
  summary << "f_pre_median," << format_double(median(f_pre)) << "\n";
  summary << "f_post_mean," << format_double(f_post.empty() ? NAN : Eigen::Map<Eigen::VectorXd>(f_post.data(), static_cast<long>(f_post.size())).mean()) << "\n";
  summary << "f_post_median," << format_double(median(f_post)) << "\n";
  summary << "fraction_above_0.96," << format_double(static_cast<double>(above) / count) << "\n";
  summary.close();

  // (d) post-filter fidelity histogram, 20 uniform bins over [0, 1]
  constexpr int kBins = 20;
  int counts[kBins] = {};
  for (double f : f_post) {
    int bin = static_cast<int>(f * kBins);
    bin = std::clamp(bin, 0, kBins - 1);  // f == 1.0 lands in the last bin
    ++counts[bin];
  }
  std::ofstream histogram = open_for_write(out_dir / "histogram.csv");
  histogram << "# specpulse post-filter fidelity histogram\n";
  write_provenance(histogram, experiment);
  histogram << "# columns: bin_left,bin_right,count\n";
  for (int b = 0; b < kBins; ++b) {
    histogram << format_double(static_cast<double>(b) / kBins) << ","
              << format_double(static_cast<double>(b + 1) / kBins) << "," << counts[b]
              << "\n";
  }
  histogram.close();

  log << "wrote " << (out_dir / "results.csv").string() << ", summary.csv, histogram.csv and "
      << (results.size() - static_cast<std::size_t>(failed)) << " control dumps\n";
  return results;
}

FilterOutcome cmd_filter(const FilterArgs& args, std::ostream& log) {
  const ControlDump dump = read_control_dump(args.dump_path);
  const int n = dump.controls.slice_count();

  const auto header_int = [&](const std::string& key) -> int {
    const auto it = dump.header.find(key);
    if (it == dump.header.end())
      throw std::runtime_error(args.dump_path + ": control dump is missing the '# " + key +
                               "=' header");
    return std::stoi(it->second);
  };

  const int qubits = header_int("qubits");
  const auto target_entry = dump.header.find("target");
  if (target_entry == dump.header.end())
    throw std::runtime_error(args.dump_path + ": control dump is missing the '# target=' header");
  const TargetGate target =
      target_entry->second == "swap" ? target_swap(qubits) : target_not(qubits);
  const SpinChainSystem sys = make_spin_chain(qubits);

  double omega0 = args.omega0;
  if (!(omega0 > 0.0)) {
    const int delta = args.delta >= 0 ? args.delta : header_int("delta");
    omega0 = cutoff_from_band(n, delta, dump.controls.dt);
  }
  if (args.oversample < 1)
    invalid("oversample", std::to_string(args.oversample), ">= 1");

  FilterOutcome outcome;
  outcome.f_pre = gate_fidelity(target, propagate_total(sys, dump.controls));

  const FilterSpec filter{omega0, args.oversample};
  const FilteredGrid grid = sample_filtered_midpoints(dump.controls, filter);
  const ControlSequence fine{grid.sub_dt, grid.hx, grid.hy};
  outcome.f_post = gate_fidelity(target, propagate_total(sys, fine));

  fs::path out_path(args.out);
  if (args.out.empty()) {
    out_path = fs::path(args.dump_path);
    out_path.replace_extension("");
    out_path += "_filtered.csv";
  }
  std::ofstream table = open_for_write(out_path);
  table << "# specpulse filtered controls\n";
  for (const auto& [key, value] : dump.header) table << "# " << key << "=" << value << "\n";
  table << "# filter_omega0=" << format_double(omega0) << "\n";
  table << "# filter_oversample=" << args.oversample << "\n";
  table << "# f_pre_recomputed=" << format_double(outcome.f_pre) << "\n";
  table << "# f_post=" << format_double(outcome.f_post) << "\n";
  table << "# columns: t,hx_step,hy_step,hx_filtered,hy_filtered\n";
  for (int m = 0; m < grid.t.size(); ++m) {
    const int slice = std::min(static_cast<int>(grid.t[m] / dump.controls.dt), n - 1);
    table << format_double(grid.t[m]) << "," << format_double(dump.controls.hx[slice]) << ","
          << format_double(dump.controls.hy[slice]) << "," << format_double(grid.hx[m]) << ","
          << format_double(grid.hy[m]) << "\n";
  }
  table.close();
  outcome.out_path = out_path.string();

  log << "f_pre=" << format_double(outcome.f_pre) << "\n";
  log << "f_post=" << format_double(outcome.f_post) << "\n";
  log << "wrote " << outcome.out_path << "\n";
  return outcome;
}

bool cmd_selftest(std::ostream& log) {
  bool all_passed = true;
  for (const selftest::CheckResult& check : selftest::run_all_checks()) {
    log << (check.passed ? "[PASS] " : "[FAIL] ") << check.name << ": " << check.detail
        << "\n";
    if (!check.passed) all_passed = false;
  }
  return all_passed;
}

}  // namespace specpulse::cli
