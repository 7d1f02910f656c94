#include "cimac/evaluation.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <memory>
#include <random>
#include <unordered_map>

#include "cimac/errors.hpp"
#include "cimac/parallel.hpp"
#include "cimac/solver.hpp"

namespace cimac {

int EpisodeTrace::total_cost() const {
  int total = 0;
  for (const auto& step : steps) total += step.cost;
  return total;
}

std::string_view method_name(Method method) {
  return method == Method::kMonteCarlo ? "mc" : "exact";
}

namespace {

// Continuation cost and probability mass from (t, pi) for a fixed profile.
// The policy acts on (t, pi) only, so continuations are memoized on the exact
// bits of the belief; distinct histories reaching the same belief share one
// evaluation.
class HistoryWalker {
 public:
  HistoryWalker(const ExecutablePolicy& policy, int horizon, std::size_t max_branches,
                std::size_t& branches)
      : policy_(policy), horizon_(horizon), max_branches_(max_branches), branches_(branches) {}

  struct Continuation {
    double cost = 0.0;
    double mass = 0.0;
  };

  Continuation walk(const ModeProfile& m, int t, const Belief& pi) {
    if (profile_ != m) {
      profile_ = m;
      memo_.clear();
    }
    return walk_memo(t, pi);
  }

 private:
  struct Key {
    int t;
    std::vector<std::uint64_t> bits;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& key) const noexcept {
      std::uint64_t h = 1469598103934665603ULL ^ static_cast<std::uint64_t>(key.t);
      for (std::uint64_t b : key.bits) {
        h ^= b;
        h *= 1099511628211ULL;
      }
      return static_cast<std::size_t>(h);
    }
  };

  Continuation walk_memo(int t, const Belief& pi) {
    Key key{t, {}};
    key.bits.reserve(pi.size());
    for (double p : pi.probs()) key.bits.push_back(std::bit_cast<std::uint64_t>(p));
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    const int n = profile_.agents();
    const auto per_agent = policy_.prescriptions(t, pi);
    const std::size_t actions = num_joint_actions(n);
    Continuation out;
    for (std::size_t index = 0; index < actions; ++index) {
      const JointAction u = JointAction::from_index(index, n);
      double p = 1.0;
      for (int i = 0; i < n; ++i) p *= action_prob(per_agent[i], profile_[i], u[i]);
      if (p == 0.0) continue;
      if (++branches_ > max_branches_) {
        throw ExplosionError("exact evaluation exceeded " + std::to_string(max_branches_) +
                             " history branches; use the Monte-Carlo method");
      }
      double cost = static_cast<double>(stage_cost_for(u.transmitters()));
      double mass = 1.0;
      if (t < horizon_) {
        const Continuation next = walk_memo(t + 1, policy_.next_belief(t, pi, u));
        cost += next.cost;
        mass = next.mass;
      }
      out.cost += p * cost;
      out.mass += p * mass;
    }
    memo_.emplace(std::move(key), out);
    return out;
  }

  const ExecutablePolicy& policy_;
  int horizon_;
  std::size_t max_branches_;
  std::size_t& branches_;
  ModeProfile profile_;
  std::unordered_map<Key, Continuation, KeyHash> memo_;
};

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

ExactResult exact_cost_detailed(const ExecutablePolicy& policy, const Belief& initial,
                                int horizon, const ExactOptions& options) {
  if (horizon < 1) throw InvalidInput("horizon must be at least 1");
  ExactResult result;
  HistoryWalker walker(policy, horizon, options.max_branches, result.branches);
  for (std::size_t index : initial.support()) {
    const ModeProfile m = profile_from_index(index, initial.agents());
    const auto continuation = walker.walk(m, 1, initial);
    result.expected_cost += initial[index] * continuation.cost;
    result.history_mass.push_back(continuation.mass);
  }
  return result;
}

double exact_cost(const ExecutablePolicy& policy, const Scenario& scenario,
                  std::size_t belief_index, const ExactOptions& options) {
  return exact_cost_detailed(policy, scenario.initial_beliefs.at(belief_index).belief,
                             scenario.horizon, options)
      .expected_cost;
}

EpisodeTrace simulate_episode(const ExecutablePolicy& policy, const Belief& initial, int horizon,
                              const ModeProfile& true_profile,
                              std::span<const double> slot_randoms) {
  const int n = initial.agents();
  if (true_profile.agents() != n) throw InvalidInput("profile length differs from agent count");
  if (slot_randoms.size() != static_cast<std::size_t>(horizon) * n) {
    throw InvalidInput("need horizon x agents slot randoms");
  }
  for (double k : slot_randoms) {
    if (!(k > 0.0 && k <= 1.0)) throw InvalidInput("slot randoms must lie in (0, 1]");
  }
  if (initial.at(true_profile) == 0.0) {
    throw ImpossibleObservation("true profile " + true_profile.to_string() +
                                " has zero mass under the initial belief");
  }
  EpisodeTrace trace{true_profile, initial, {}};
  Belief pi = initial;
  for (int t = 1; t <= horizon; ++t) {
    const auto per_agent = policy.prescriptions(t, pi);
    std::vector<std::uint8_t> actions(n);
    for (int i = 0; i < n; ++i) {
      const double p = action_prob(per_agent[i], true_profile[i], 1);
      actions[i] = slot_randoms[static_cast<std::size_t>(t - 1) * n + i] <= p ? 1 : 0;
    }
    JointAction u(std::move(actions));
    const int cost = stage_cost(true_profile, u);
    pi = policy.next_belief(t, pi, u);
    trace.steps.push_back({std::move(u), cost, pi});
  }
  return trace;
}

std::uint64_t episode_seed(std::uint64_t master_seed, std::uint64_t episode) {
  std::uint64_t z = master_seed + (episode + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

EpisodeRandomness draw_episode(const Belief& initial, int horizon, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double pick = uniform01(rng);
  std::size_t chosen = 0;
  double cumulative = 0.0;
  for (std::size_t index : initial.support()) {
    chosen = index;
    cumulative += initial[index];
    if (pick < cumulative) break;
  }
  EpisodeRandomness out{profile_from_index(chosen, initial.agents()), {}};
  out.slot_randoms.resize(static_cast<std::size_t>(horizon) * initial.agents());
  for (double& k : out.slot_randoms) k = 1.0 - uniform01(rng);
  return out;
}

CostReport monte_carlo_cost(const ExecutablePolicy& policy, const Scenario& scenario,
                            std::size_t episodes, std::uint64_t master_seed,
                            std::size_t belief_index) {
  if (episodes < 1) throw InvalidInput("Monte-Carlo needs at least one episode");
  const auto& labeled = scenario.initial_beliefs.at(belief_index);
  std::vector<int> costs(episodes);
  parallel_for(episodes, [&](std::size_t begin, std::size_t end) {
    for (std::size_t e = begin; e < end; ++e) {
      const auto draw = draw_episode(labeled.belief, scenario.horizon, episode_seed(master_seed, e));
      costs[e] = simulate_episode(policy, labeled.belief, scenario.horizon, draw.profile,
                                  draw.slot_randoms)
                     .total_cost();
    }
  });
  double sum = 0.0;
  for (int c : costs) sum += c;
  const double mean = sum / static_cast<double>(episodes);
  double squares = 0.0;
  for (int c : costs) squares += (c - mean) * (c - mean);
  const double variance = episodes > 1 ? squares / static_cast<double>(episodes - 1) : 0.0;

  CostReport report;
  report.policy = policy.label();
  report.belief_id = labeled.id;
  report.method = Method::kMonteCarlo;
  report.expected_cost = mean;
  report.episodes = episodes;
  report.standard_error = std::sqrt(variance / static_cast<double>(episodes));
  report.seed = master_seed;
  return report;
}

std::vector<CostReport> compare(const Scenario& scenario, bool include_optimal,
                                const ExactOptions& options) {
  std::vector<CostReport> reports;
  auto run_row = [&](const std::string& label, std::size_t b, auto&& evaluate) {
    CostReport report;
    report.policy = label;
    report.belief_id = scenario.initial_beliefs[b].id;
    try {
      report.expected_cost = evaluate();
    } catch (const Error& e) {
      report.error = e.what();
    }
    reports.push_back(std::move(report));
  };
  if (include_optimal) {
    for (std::size_t b = 0; b < scenario.initial_beliefs.size(); ++b) {
      run_row("proposed", b, [&] {
        OptimalPolicy policy(std::make_shared<const SolvedPolicy>(solve(scenario, b)));
        return exact_cost(policy, scenario, b, options);
      });
    }
  }
  for (const auto& params : scenario.baselines) {
    const ThresholdPolicy policy(params, scenario.alpha, scenario.beta);
    for (std::size_t b = 0; b < scenario.initial_beliefs.size(); ++b) {
      run_row(policy.label(), b, [&] { return exact_cost(policy, scenario, b, options); });
    }
  }
  return reports;
}

namespace {

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string fixed6(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  return buf;
}

}  // namespace

std::string csv_header(bool with_error_column) {
  return with_error_column ? "policy,belief_id,method,expected_cost,episodes,stderr,seed,error"
                           : "policy,belief_id,method,expected_cost,episodes,stderr,seed";
}

std::string csv_row(const CostReport& r, bool with_error_column) {
  std::string line = csv_field(r.policy) + "," + csv_field(r.belief_id) + "," +
                     std::string(method_name(r.method)) + ",";
  if (r.ok()) line += fixed6(r.expected_cost);
  line += ",";
  if (r.episodes) line += std::to_string(*r.episodes);
  line += ",";
  if (r.standard_error) line += fixed6(*r.standard_error);
  line += ",";
  if (r.seed) line += std::to_string(*r.seed);
  if (with_error_column) line += "," + csv_field(r.error);
  return line;
}

}  // namespace cimac
