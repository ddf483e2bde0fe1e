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

#include <cstdlib>
#include <cstring>
#include <json.hpp>
#include <string>

#include "adversary.hpp"
#include "apportion/apportion.h"
#include "errors.hpp"
#include "flow.hpp"
#include "instance.hpp"
#include "mmhsc.hpp"
#include "offline.hpp"
#include "randmethod.hpp"
#include "random.hpp"
#include "trajectory.hpp"

struct ap_instance {
  apportion::Instance inst;
};

struct ap_trajectory {
  apportion::TrajectoryState state;
};

struct ap_netflow {
  apportion::NetflowPlan plan;
};

namespace {

using nlohmann::json;
namespace ap = apportion;

thread_local std::string last_error;

ap_status status_of(ap::ErrorKind kind) {
  switch (kind) {
    case ap::ErrorKind::kInvalidArgument: return AP_ERR_INVALID_ARGUMENT;
    case ap::ErrorKind::kParse: return AP_ERR_PARSE;
    case ap::ErrorKind::kInvalidInstance: return AP_ERR_INVALID_INSTANCE;
    case ap::ErrorKind::kDomain: return AP_ERR_DOMAIN;
    case ap::ErrorKind::kInfeasible: return AP_ERR_INFEASIBLE;
    case ap::ErrorKind::kRejected: return AP_ERR_REJECTED;
    case ap::ErrorKind::kTimeout: return AP_ERR_TIMEOUT;
  }
  return AP_ERR_INTERNAL;
}

template <typename Fn>
ap_status guarded(Fn&& fn) {
  try {
    last_error.clear();
    return fn();
  } catch (const ap::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::exception& e) {
    last_error = e.what();
    return AP_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return AP_ERR_INTERNAL;
  }
}

ap_status invalid(const char* what) {
  last_error = what;
  return AP_ERR_INVALID_ARGUMENT;
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

json summary(const ap::TrajectoryState& s) {
  json j = {{"steps", s.t()},
            {"parties", s.parties()},
            {"final_A", s.A()},
            {"max_deviation", ap::max_deviation(s).str()}};
  auto bad = ap::check_global_quota(s);
  j["global_quota"] = !bad.has_value();
  j["first_violation"] =
      bad ? json{{"t", bad->t}, {"i", bad->party}} : json(nullptr);
  return j;
}

std::string pretty(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

extern "C" {

const char* ap_version(void) { return "0.1.0"; }

const char* ap_last_error(void) { return last_error.c_str(); }

const char* ap_status_name(ap_status status) {
  switch (status) {
    case AP_OK: return "ok";
    case AP_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case AP_ERR_PARSE: return "parse-error";
    case AP_ERR_INVALID_INSTANCE: return "invalid-instance";
    case AP_ERR_DOMAIN: return "domain-error";
    case AP_ERR_INFEASIBLE: return "infeasible";
    case AP_ERR_REJECTED: return "rejected";
    case AP_ERR_TIMEOUT: return "timeout";
    case AP_ERR_INTERNAL: return "internal-error";
  }
  return "unknown";
}

void ap_string_free(char* s) { std::free(s); }

ap_status ap_instance_from_json(const char* text, ap_instance** out) {
  if (!text || !out) return invalid("null argument");
  return guarded([&] {
    *out = new ap_instance{ap::instance_from_json(text)};
    return AP_OK;
  });
}

ap_status ap_instance_to_json(const ap_instance* inst, char** out) {
  if (!inst || !out) return invalid("null argument");
  return guarded([&] {
    *out = dup(ap::instance_to_json(inst->inst));
    return AP_OK;
  });
}

ap_status ap_instance_validate(const ap_instance* inst, int* ok,
                               char** violations_json) {
  if (!inst || !ok) return invalid("null argument");
  return guarded([&] {
    auto violations = ap::validate_instance(inst->inst);
    *ok = violations.empty() ? 1 : 0;
    if (violations_json) {
      json arr = json::array();
      for (const auto& v : violations) {
        arr.push_back({{"step", v.step},
                       {"party", v.party ? json(*v.party) : json(nullptr)},
                       {"message", v.message}});
      }
      *violations_json = dup(arr.dump());
    }
    return AP_OK;
  });
}

ap_status ap_instance_digest(const ap_instance* inst, char** out) {
  if (!inst || !out) return invalid("null argument");
  return guarded([&] {
    *out = dup(ap::instance_digest(inst->inst));
    return AP_OK;
  });
}

size_t ap_instance_parties(const ap_instance* inst) {
  return inst ? inst->inst.parties() : 0;
}

size_t ap_instance_steps(const ap_instance* inst) {
  return inst ? inst->inst.steps() : 0;
}

void ap_instance_free(ap_instance* inst) { delete inst; }

ap_status ap_simulate(const ap_instance* inst, const char* method,
                      uint64_t seed, uint64_t trial, ap_trajectory** out) {
  if (!inst || !method || !out) return invalid("null argument");
  return guarded([&] {
    auto stream = ap::substream(seed, trial);
    auto m = ap::make_method(method, stream());
    *out = new ap_trajectory{ap::run_method(*m, inst->inst)};
    return AP_OK;
  });
}

ap_status ap_trajectory_csv(const ap_trajectory* traj, int float_report,
                            char** out) {
  if (!traj || !out) return invalid("null argument");
  return guarded([&] {
    *out = dup(ap::trajectory_to_csv(traj->state, float_report != 0));
    return AP_OK;
  });
}

ap_status ap_trajectory_instance_json(const ap_trajectory* traj, char** out) {
  if (!traj || !out) return invalid("null argument");
  return guarded([&] {
    *out = dup(ap::instance_to_json(traj->state.instance()));
    return AP_OK;
  });
}

ap_status ap_trajectory_max_deviation(const ap_trajectory* traj, char** out) {
  if (!traj || !out) return invalid("null argument");
  return guarded([&] {
    *out = dup(ap::max_deviation(traj->state).str());
    return AP_OK;
  });
}

ap_status ap_trajectory_global_quota(const ap_trajectory* traj, int* ok) {
  if (!traj || !ok) return invalid("null argument");
  return guarded([&] {
    *ok = ap::check_global_quota(traj->state) ? 0 : 1;
    return AP_OK;
  });
}

ap_status ap_trajectory_summary_json(const ap_trajectory* traj, char** out) {
  if (!traj || !out) return invalid("null argument");
  return guarded([&] {
    *out = dup(summary(traj->state).dump());
    return AP_OK;
  });
}

int ap_trajectory_seat(const ap_trajectory* traj, size_t t, size_t i) {
  if (!traj || t == 0 || t > traj->state.t() || i >= traj->state.parties()) {
    return -1;
  }
  return traj->state.seats_at(t)[i];
}

void ap_trajectory_free(ap_trajectory* traj) { delete traj; }

ap_status ap_verify_csv(const char* csv, const char* alpha,
                        int require_global_quota, char** report_json,
                        int* passed) {
  if (!csv || !report_json || !passed) return invalid("null argument");
  return guarded([&] {
    std::optional<ap::Rational> a;
    if (alpha) a = ap::Rational::parse(alpha);
    const auto rows = ap::parse_trajectory_csv(csv);
    const ap::VerifyReport rep = ap::verify_rows(rows, a);
    const bool ok = rep.consistent && rep.locally_feasible &&
                    (!require_global_quota || rep.global_quota) &&
                    rep.alpha_ok.value_or(true);
    json j = {{"steps", rep.steps},
              {"parties", rep.parties},
              {"consistent", rep.consistent},
              {"locally_feasible", rep.locally_feasible},
              {"global_quota", rep.global_quota},
              {"global_quota_required", require_global_quota != 0},
              {"max_deviation", rep.max_deviation.str()},
              {"alpha", a ? json(a->str()) : json(nullptr)},
              {"alpha_ok", rep.alpha_ok ? json(*rep.alpha_ok) : json(nullptr)},
              {"passed", ok},
              {"messages", rep.messages}};
    *report_json = dup(pretty(j));
    *passed = ok ? 1 : 0;
    return AP_OK;
  });
}

ap_status ap_netflow_create(const ap_instance* inst, ap_netflow** out) {
  if (!inst || !out) return invalid("null argument");
  return guarded([&] {
    *out = new ap_netflow{ap::NetflowPlan::build(inst->inst)};
    return AP_OK;
  });
}

int ap_netflow_complete(const ap_netflow* nf) {
  return nf && nf->plan.complete() ? 1 : 0;
}

ap_status ap_netflow_state_json(const ap_netflow* nf, char** out) {
  if (!nf || !out) return invalid("null argument");
  return guarded([&] {
    *out = dup(pretty(json::parse(nf->plan.state_json())));
    return AP_OK;
  });
}

ap_status ap_netflow_witness_json(const ap_netflow* nf, char** out) {
  if (!nf || !out) return invalid("null argument");
  if (nf->plan.complete()) return invalid("the method is feasible throughout");
  return guarded([&] {
    *out = dup(pretty(json::parse(ap::witness_to_json(*nf->plan.witness()))));
    return AP_OK;
  });
}

ap_status ap_netflow_marginals_json(const ap_netflow* nf, char** out) {
  if (!nf || !out) return invalid("null argument");
  return guarded([&] {
    json steps = json::array();
    ap::QuotaDistribution dist = ap::QuotaDistribution::initial(nf->plan.parties());
    for (const ap::StepPlan& step : nf->plan.steps()) {
      json row = json::array();
      for (const ap::Rational& m : ap::exact_step_marginals(dist, step)) {
        row.push_back(m.str());
      }
      steps.push_back(std::move(row));
      dist = step.next;
    }
    *out = dup(steps.dump());
    return AP_OK;
  });
}

ap_status ap_netflow_sample(const ap_netflow* nf, uint64_t seed, uint64_t trial,
                            ap_trajectory** out) {
  if (!nf || !out) return invalid("null argument");
  return guarded([&] {
    auto rng = ap::substream(seed, trial);
    *out = new ap_trajectory{nf->plan.sample(rng)};
    return AP_OK;
  });
}

void ap_netflow_free(ap_netflow* nf) { delete nf; }

ap_status ap_adversary_run(size_t n, const char* epsilon,
                           const char* target_method, const char* schedule,
                           uint64_t seed, uint64_t max_steps,
                           ap_trajectory** traj, char** result_json) {
  if (!target_method || !schedule || !result_json) return invalid("null argument");
  if (n == 0) return invalid("n must be positive");
  return guarded([&] {
    auto method = ap::make_method(target_method, seed);
    const std::string sched = schedule;
    ap::AdversaryRun run;
    json j;
    if (sched == "figure3") {
      run = ap::figure3_schedule(*method, n);
    } else if (sched == "auto") {
      if (!epsilon) throw ap::DomainError("auto schedule needs epsilon");
      ap::AdversaryConfig cfg;
      for (size_t i = 0; i < n; ++i) cfg.parties.push_back(i);
      cfg.epsilon = ap::Rational::parse(epsilon);
      if (max_steps > 0) cfg.max_steps = max_steps;
      method->reset();
      run = ap::booster(*method, ap::TrajectoryState(n), cfg);
      const ap::Rational target =
          ap::Rational(static_cast<long long>(n) - 1) / ap::Rational(2) - cfg.epsilon;
      j["epsilon"] = cfg.epsilon.str();
      j["target"] = target.str();
      j["reached_target"] = run.achieved >= target;
    } else {
      throw ap::DomainError("schedule must be auto or figure3");
    }
    j["n"] = n;
    j["schedule"] = sched;
    j["method"] = target_method;
    j["steps"] = run.state.t();
    j["achieved"] = run.achieved.str();
    j["witness"] = run.witness;
    j["max_deviation"] = ap::max_deviation(run.state).str();
    j["final_surplus"] = json::array();
    for (const ap::Rational& s : ap::surplus(run.state)) j["final_surplus"].push_back(s.str());
    j["instance"] = json::parse(ap::instance_to_json(run.state.instance()));
    j["transcript"] = json::parse(ap::transcript_to_json(run.transcript));
    *result_json = dup(j.dump());
    if (traj) *traj = new ap_trajectory{std::move(run.state)};
    return AP_OK;
  });
}

ap_status ap_offline_lottery_json(const ap_instance* inst, char** out) {
  if (!inst || !out) return invalid("null argument");
  return guarded([&] {
    *out = dup(ap::lottery_to_json(ap::offline_lottery(inst->inst)));
    return AP_OK;
  });
}

ap_status ap_decompose_vector_json(const char* vector, int64_t house,
                                   char** out) {
  if (!vector || !out) return invalid("null argument");
  return guarded([&] {
    json arr = json::array();
    for (const auto& c :
         ap::hypersimplex_decompose(ap::parse_rational_list(vector), house)) {
      arr.push_back({{"weight", c.weight.str()}, {"set", c.set}});
    }
    *out = dup(arr.dump());
    return AP_OK;
  });
}

ap_status ap_decompose_network_json(const char* network_json, const char* value,
                                    char** out) {
  if (!network_json || !value || !out) return invalid("null argument");
  return guarded([&] {
    const ap::CapacitatedNetwork net = ap::network_from_json(network_json);
    const ap::FlowResult r = ap::feasible_flow(net, ap::Rational::parse(value));
    json j;
    if (!r.feasible()) {
      std::vector<std::string> side;
      for (size_t v = 0; v < net.node_count(); ++v) {
        if (r.cut->in_set[v]) side.push_back(net.label(v));
      }
      j = {{"feasible", false},
           {"cut",
            {{"nodes", side},
             {"lower_in", r.cut->lower_in.str()},
             {"upper_out", r.cut->upper_out.str()}}}};
      *out = dup(j.dump());
      last_error = "no feasible flow of the requested value";
      return AP_ERR_INFEASIBLE;
    }
    j = {{"feasible", true}, {"flow", json::parse(ap::flow_to_json(net, *r.flow))}};
    if (net.has_integral_bounds()) {
      json parts = json::array();
      for (const auto& c : ap::decompose_integral(net, *r.flow)) {
        json flow = json::array();
        for (const auto& x : c.flow) flow.push_back(x.str());
        parts.push_back({{"weight", c.weight.str()}, {"flow", flow}});
      }
      j["components"] = parts;
    }
    *out = dup(j.dump());
    return AP_OK;
  });
}

ap_status ap_mmhsc_round_json(const char* instance_json, const char* mode,
                              uint64_t seed, uint64_t samples, char** out) {
  if (!instance_json || !mode || !out) return invalid("null argument");
  return guarded([&] {
    const ap::CoveringInstance ci = ap::covering_from_json(instance_json);
    const std::string m = mode;
    if (m == "near-feasible") {
      const auto Y = ap::round_near_feasible(ci);
      const auto audit = ap::audit_solution(ci, Y, true, ap::Rational(1));
      ap::Rational bound = ap::Rational(static_cast<long long>(ci.d * (ci.n - 1))) /
                           ap::Rational(2);
      if (ci.n == 3) bound = ap::Rational(static_cast<long long>(ci.d) - 1);
      *out = dup(ap::solution_to_json(Y, audit, std::nullopt, bound, std::nullopt));
      return AP_OK;
    }
    if (m != "min-cost") throw ap::DomainError("mode must be near-feasible or min-cost");
    if (samples == 0) samples = 1;
    const ap::MinCostRounder rounder(ci);
    json j;
    std::uint64_t covering_failures = 0, capacity_failures = 0;
    ap::Rational cost_sum;
    for (std::uint64_t k = 0; k < samples; ++k) {
      auto rng = ap::substream(seed, k);
      const auto Y = rounder.sample(rng);
      const auto audit = ap::audit_solution(ci, Y, false, rounder.alpha());
      if (audit.max_violation.sign() > 0) ++covering_failures;
      if (!audit.capacity_ok) ++capacity_failures;
      if (audit.cost) cost_sum += *audit.cost;
      if (k == 0) {
        j = json::parse(ap::solution_to_json(Y, audit, rounder.alpha(),
                                             ap::Rational(0),
                                             rounder.expected_cost()));
      }
    }
    json stats = {{"samples", samples},
                  {"covering_failures", covering_failures},
                  {"capacity_failures", capacity_failures}};
    if (ci.cost) {
      stats["mean_cost"] =
          (cost_sum / ap::Rational(static_cast<long long>(samples))).str();
    }
    j["sampling"] = stats;
    *out = dup(j.dump());
    return AP_OK;
  });
}

}  // extern "C"
