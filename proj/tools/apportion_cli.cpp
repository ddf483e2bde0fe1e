// Copyright 2026 The Apportion Authors.
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

// Command-line front end over the C interface.
//
// Exit codes: 0 ok, 1 a requested check failed, 2 bad input, 3 the method
// has no feasible step (network flow method with four or more parties).

#include <CLI11.hpp>
#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "apportion/apportion.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kInputError = 2;
constexpr int kInfeasible = 3;

struct Failure {
  int code;
  std::string message;
};

int exit_code_for(ap_status s) {
  switch (s) {
    case AP_OK: return kOk;
    case AP_ERR_INFEASIBLE: return kInfeasible;
    case AP_ERR_INTERNAL: return kCheckFailed;
    default: return kInputError;
  }
}

void check(ap_status s) {
  if (s != AP_OK) {
    throw Failure{exit_code_for(s),
                  std::string(ap_status_name(s)) + ": " + ap_last_error()};
  }
}

// Owns a string returned by the library.
std::string take(char* s) {
  std::string out = s ? s : "";
  ap_string_free(s);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kInputError, "cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{kInputError, "cannot write " + path.string()};
  out << text;
}

void emit(const std::optional<std::string>& out_file, const std::string& text) {
  if (out_file) {
    write_file(*out_file, text);
  } else {
    std::cout << text;
  }
}

using InstancePtr = std::unique_ptr<ap_instance, decltype(&ap_instance_free)>;
using TrajectoryPtr = std::unique_ptr<ap_trajectory, decltype(&ap_trajectory_free)>;
using NetflowPtr = std::unique_ptr<ap_netflow, decltype(&ap_netflow_free)>;

InstancePtr load_instance(const std::string& path) {
  ap_instance* raw = nullptr;
  check(ap_instance_from_json(read_file(path).c_str(), &raw));
  InstancePtr inst(raw, ap_instance_free);
  int ok = 0;
  char* violations = nullptr;
  check(ap_instance_validate(inst.get(), &ok, &violations));
  const std::string v = take(violations);
  if (!ok) throw Failure{kInputError, "invalid instance: " + v};
  return inst;
}

struct SimulateOptions {
  std::string method = "greedy";
  std::string instance;
  std::uint64_t seed = 0;
  std::uint64_t trials = 1;
  std::string out = ".";
  bool float_report = false;
};

struct TrialResult {
  std::string csv;
  json summary;
  std::vector<std::vector<int>> seats;  // [t][i]
};

// Exact fractions for the marginal report; the inputs are small.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;
};

Fraction make_fraction(std::int64_t num, std::int64_t den) {
  const std::int64_t g = std::gcd(num, den);
  return g == 0 ? Fraction{0, 1} : Fraction{num / g, den / g};
}

Fraction parse_fraction(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) return {std::stoll(text), 1};
  return make_fraction(std::stoll(text.substr(0, slash)),
                       std::stoll(text.substr(slash + 1)));
}

std::string fraction_str(Fraction f) {
  return f.den == 1 ? std::to_string(f.num)
                    : std::to_string(f.num) + "/" + std::to_string(f.den);
}

// Compares two "p/q" strings.
bool fraction_less(const std::string& a, const std::string& b) {
  const Fraction x = parse_fraction(a), y = parse_fraction(b);
  return static_cast<__int128>(x.num) * y.den < static_cast<__int128>(y.num) * x.den;
}

int cmd_simulate(const SimulateOptions& o) {
  InstancePtr inst = load_instance(o.instance);
  fs::create_directories(o.out);
  json report = {{"instance", o.instance},
                 {"instance_digest", take([&] {
                    char* d = nullptr;
                    check(ap_instance_digest(inst.get(), &d));
                    return d;
                  }())},
                 {"method", o.method},
                 {"seed", o.seed},
                 {"trials", o.trials}};

  NetflowPtr plan(nullptr, ap_netflow_free);
  if (o.method == "netflow") {
    ap_netflow* raw = nullptr;
    check(ap_netflow_create(inst.get(), &raw));
    plan.reset(raw);
    if (!ap_netflow_complete(plan.get())) {
      char* w = nullptr;
      check(ap_netflow_witness_json(plan.get(), &w));
      const std::string witness = take(w);
      write_file(fs::path(o.out) / "witness.json", witness);
      report["infeasible"] = json::parse(witness);
      write_file(fs::path(o.out) / "report.json", report.dump(2) + "\n");
      throw Failure{kInfeasible, "network flow method infeasible; witness in " +
                                     (fs::path(o.out) / "witness.json").string()};
    }
    char* state = nullptr;
    check(ap_netflow_state_json(plan.get(), &state));
    write_file(fs::path(o.out) / "netflow_state.json", take(state));
  }

  auto run_trial = [&](std::uint64_t k) {
    ap_trajectory* raw = nullptr;
    if (plan) {
      check(ap_netflow_sample(plan.get(), o.seed, k, &raw));
    } else {
      check(ap_simulate(inst.get(), o.method.c_str(), o.seed, k, &raw));
    }
    TrajectoryPtr traj(raw, ap_trajectory_free);
    char* csv = nullptr;
    char* sum = nullptr;
    check(ap_trajectory_csv(traj.get(), o.float_report ? 1 : 0, &csv));
    check(ap_trajectory_summary_json(traj.get(), &sum));
    TrialResult r{take(csv), json::parse(take(sum)), {}};
    const std::size_t steps = r.summary["steps"].get<std::size_t>();
    const std::size_t n = r.summary["parties"].get<std::size_t>();
    for (std::size_t t = 1; t <= steps; ++t) {
      std::vector<int> row(n);
      for (std::size_t i = 0; i < n; ++i) row[i] = ap_trajectory_seat(traj.get(), t, i);
      r.seats.push_back(std::move(row));
    }
    return r;
  };

  // Trials run concurrently in batches; files are written afterwards by
  // this thread only.
  std::vector<TrialResult> results(o.trials);
  const std::uint64_t width =
      std::max<std::uint64_t>(1, std::thread::hardware_concurrency());
  for (std::uint64_t start = 0; start < o.trials; start += width) {
    std::vector<std::future<TrialResult>> batch;
    for (std::uint64_t k = start; k < std::min(o.trials, start + width); ++k) {
      batch.push_back(std::async(std::launch::async, run_trial, k));
    }
    for (std::uint64_t k = 0; k < batch.size(); ++k) {
      results[start + k] = batch[k].get();
    }
  }

  json runs = json::array();
  bool all_quota = true;
  for (std::uint64_t k = 0; k < o.trials; ++k) {
    const std::string name = "trial_" + std::to_string(k) + ".csv";
    write_file(fs::path(o.out) / name, results[k].csv);
    json r = results[k].summary;
    r["trial"] = k;
    r["file"] = name;
    all_quota = all_quota && r["global_quota"].get<bool>();
    runs.push_back(std::move(r));
  }
  report["runs"] = runs;
  report["summary"] = {{"all_global_quota", all_quota}};
  if (o.trials > 0) {
    std::string worst = "0";
    for (const auto& r : results) {
      const std::string d = r.summary["max_deviation"].get<std::string>();
      if (fraction_less(worst, d)) worst = d;
    }
    report["summary"]["max_deviation"] = worst;
    // Empirical seat frequency minus votes, per step and party.
    char* inst_json = nullptr;
    check(ap_instance_to_json(inst.get(), &inst_json));
    const json votes = json::parse(take(inst_json))["votes"];
    json deltas = json::array();
    const auto K = static_cast<std::int64_t>(o.trials);
    for (std::size_t t = 0; t < votes.size(); ++t) {
      json row = json::array();
      for (std::size_t i = 0; i < votes[t].size(); ++i) {
        std::int64_t count = 0;
        for (const auto& r : results) count += r.seats[t][i];
        const Fraction v = parse_fraction(votes[t][i].get<std::string>());
        row.push_back(fraction_str(make_fraction(count * v.den - v.num * K, K * v.den)));
      }
      deltas.push_back(std::move(row));
    }
    report["summary"]["marginal_deltas"] = deltas;
  }
  if (plan) {
    char* m = nullptr;
    check(ap_netflow_marginals_json(plan.get(), &m));
    report["summary"]["exact_marginals"] = json::parse(take(m));
  }
  write_file(fs::path(o.out) / "report.json", report.dump(2) + "\n");
  if (o.trials > 0) {
    std::cout << "final_A";
    for (const auto& a : results[0].summary["final_A"]) std::cout << ' ' << a;
    std::cout << "\nmax_deviation " << results[0].summary["max_deviation"].get<std::string>()
              << "\n";
  }
  return kOk;
}

struct AdversaryOptions {
  std::size_t n = 3;
  std::string epsilon = "1/20";
  std::string method = "greedy";
  std::string schedule = "auto";
  std::uint64_t seed = 0;
  std::uint64_t max_steps = 0;
  std::string out = ".";
};

int cmd_adversary(const AdversaryOptions& o) {
  ap_trajectory* raw = nullptr;
  char* result = nullptr;
  check(ap_adversary_run(o.n, o.epsilon.c_str(), o.method.c_str(),
                         o.schedule.c_str(), o.seed, o.max_steps, &raw, &result));
  TrajectoryPtr traj(raw, ap_trajectory_free);
  json r = json::parse(take(result));
  fs::create_directories(o.out);
  write_file(fs::path(o.out) / "instance.json", r["instance"].dump() + "\n");
  write_file(fs::path(o.out) / "transcript.json", r["transcript"].dump(2) + "\n");
  char* csv = nullptr;
  check(ap_trajectory_csv(traj.get(), 0, &csv));
  write_file(fs::path(o.out) / "trajectory.csv", take(csv));
  r.erase("instance");
  r.erase("transcript");
  write_file(fs::path(o.out) / "summary.json", r.dump(2) + "\n");
  std::cout << "achieved " << r["achieved"].get<std::string>() << "\n"
            << "witness " << r["witness"].get<std::size_t>() << "\n"
            << "steps " << r["steps"].get<std::size_t>() << "\n";
  return kOk;
}

int cmd_verify(const std::string& path, const std::optional<std::string>& alpha,
               bool global_quota) {
  char* report = nullptr;
  int passed = 0;
  check(ap_verify_csv(read_file(path).c_str(), alpha ? alpha->c_str() : nullptr,
                      global_quota ? 1 : 0, &report, &passed));
  std::cout << take(report);
  return passed ? kOk : kCheckFailed;
}

int cmd_offline(const std::string& path, const std::optional<std::string>& out) {
  InstancePtr inst = load_instance(path);
  char* lottery = nullptr;
  check(ap_offline_lottery_json(inst.get(), &lottery));
  emit(out, json::parse(take(lottery)).dump(2) + "\n");
  return kOk;
}

int cmd_decompose(const std::optional<std::string>& vector,
                  const std::optional<std::int64_t>& house,
                  const std::optional<std::string>& network,
                  const std::optional<std::string>& value,
                  const std::optional<std::string>& out) {
  char* result = nullptr;
  if (vector) {
    if (!house) throw Failure{kInputError, "--vector needs --house"};
    check(ap_decompose_vector_json(vector->c_str(), *house, &result));
    emit(out, json::parse(take(result)).dump(2) + "\n");
    return kOk;
  }
  if (!network || !value) {
    throw Failure{kInputError, "give --vector/--house or --network/--value"};
  }
  const ap_status s =
      ap_decompose_network_json(read_file(*network).c_str(), value->c_str(), &result);
  if (s == AP_ERR_INFEASIBLE) {
    emit(out, json::parse(take(result)).dump(2) + "\n");
    return kInfeasible;
  }
  check(s);
  emit(out, json::parse(take(result)).dump(2) + "\n");
  return kOk;
}

int cmd_mmhsc(const std::string& mode, const std::string& path, std::uint64_t seed,
              std::uint64_t samples, const std::optional<std::string>& out) {
  char* result = nullptr;
  check(ap_mmhsc_round_json(read_file(path).c_str(), mode.c_str(), seed, samples,
                            &result));
  json r = json::parse(take(result));
  emit(out, r.dump(2) + "\n");
  const json& audit = r["audit"];
  bool ok = audit["capacity_ok"].get<bool>() &&
            audit.value("within_bound", true);
  if (r.contains("sampling")) {
    ok = ok && r["sampling"]["covering_failures"].get<std::uint64_t>() == 0 &&
         r["sampling"]["capacity_failures"].get<std::uint64_t>() == 0;
  }
  return ok ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online proportional apportionment toolkit"};
  app.require_subcommand(1);

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "run a method over an instance");
  simulate->add_option("--method", sim.method, "online method")
      ->check(CLI::IsMember({"greedy", "grimmett", "netflow", "lowest-index",
                             "random-feasible", "min-max"}));
  simulate->add_option("--instance", sim.instance, "instance JSON")->required();
  simulate->add_option("--seed", sim.seed, "random seed");
  simulate->add_option("--trials", sim.trials, "number of trajectories");
  simulate->add_option("--out", sim.out, "output directory");
  simulate->add_flag("--float-report", sim.float_report,
                     "add a decimal surplus column to the CSV");

  AdversaryOptions adv;
  auto* adversary = app.add_subcommand("adversary", "generate a hard instance");
  adversary->add_option("--n", adv.n, "number of parties")->required();
  adversary->add_option("--epsilon", adv.epsilon, "slack of the booster");
  adversary->add_option("--target-method", adv.method, "method under attack");
  adversary->add_option("--schedule", adv.schedule, "auto or figure3")
      ->check(CLI::IsMember({"auto", "figure3"}));
  adversary->add_option("--seed", adv.seed, "seed for randomised targets");
  adversary->add_option("--max-steps", adv.max_steps, "step cap (0 = default)");
  adversary->add_option("--out", adv.out, "output directory");

  std::string traj_path;
  std::optional<std::string> alpha;
  bool require_quota = false;
  auto* verify = app.add_subcommand("verify", "audit a trajectory CSV");
  verify->add_option("--trajectory", traj_path, "trajectory CSV")->required();
  verify->add_option("--alpha", alpha, "deviation bound to check");
  verify->add_flag("--global-quota", require_quota, "also require global quota");

  std::string offline_instance;
  std::optional<std::string> offline_out;
  auto* offline = app.add_subcommand("offline", "offline lottery over the horizon");
  offline->add_option("--instance", offline_instance, "instance JSON")->required();
  offline->add_option("--out", offline_out, "output file");

  std::optional<std::string> vec, network, value, decompose_out;
  std::optional<std::int64_t> house;
  auto* decompose = app.add_subcommand("decompose", "convex decompositions");
  decompose->add_option("--vector", vec, "comma separated rationals");
  decompose->add_option("--house", house, "number of ones per component");
  decompose->add_option("--network", network, "network JSON");
  decompose->add_option("--value", value, "flow value");
  decompose->add_option("--out", decompose_out, "output file");

  std::string mmhsc_instance;
  std::uint64_t mmhsc_seed = 0, mmhsc_samples = 1;
  std::optional<std::string> mmhsc_out;
  auto* mmhsc = app.add_subcommand("mmhsc", "round a covering solution online");
  mmhsc->require_subcommand(1);
  auto add_mmhsc_mode = [&](const char* name, const char* help) {
    auto* sub = mmhsc->add_subcommand(name, help);
    sub->add_option("--instance", mmhsc_instance, "covering JSON")->required();
    sub->add_option("--seed", mmhsc_seed, "random seed");
    sub->add_option("--samples", mmhsc_samples, "number of sampled roundings");
    sub->add_option("--out", mmhsc_out, "output file");
    return sub;
  };
  auto* near = add_mmhsc_mode("near-feasible", "greedy rounding");
  auto* mincost = add_mmhsc_mode("min-cost", "randomised rounding, three resources");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*simulate) return cmd_simulate(sim);
    if (*adversary) return cmd_adversary(adv);
    if (*verify) return cmd_verify(traj_path, alpha, require_quota);
    if (*offline) return cmd_offline(offline_instance, offline_out);
    if (*decompose) return cmd_decompose(vec, house, network, value, decompose_out);
    if (*near) return cmd_mmhsc("near-feasible", mmhsc_instance, mmhsc_seed,
                                mmhsc_samples, mmhsc_out);
    if (*mincost) return cmd_mmhsc("min-cost", mmhsc_instance, mmhsc_seed,
                                   mmhsc_samples, mmhsc_out);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
