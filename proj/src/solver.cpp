#include "cimac/solver.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "cimac/errors.hpp"
#include "cimac/kernels.hpp"
#include "cimac/parallel.hpp"

namespace cimac {

double stage_expected_cost(const Belief& pi, const Prescription& gamma) {
  const std::size_t actions = num_joint_actions(pi.agents());
  double cost = 0.0;
  for (std::size_t index = 0; index < actions; ++index) {
    const JointAction u = JointAction::from_index(index, pi.agents());
    cost += static_cast<double>(stage_cost_for(u.transmitters())) *
            observation_probability(pi, gamma, u);
  }
  return cost;
}

std::vector<Successor> successor_distribution(const Belief& pi, const Prescription& gamma) {
  std::vector<Successor> out;
  const std::size_t actions = num_joint_actions(pi.agents());
  for (std::size_t index = 0; index < actions; ++index) {
    JointAction u = JointAction::from_index(index, pi.agents());
    const double p = observation_probability(pi, gamma, u);
    if (p == 0.0) continue;
    Belief next = update(pi, gamma, u);
    out.push_back({std::move(u), p, std::move(next)});
  }
  return out;
}

std::size_t ReachableSets::total() const {
  std::size_t count = 0;
  for (const auto& set : sets) count += set.size();
  return count;
}

namespace {

// Successors that still need inserting after a parallel expansion.
class CandidateBuffer {
 public:
  std::size_t size() const { return hash.size(); }

  void clear() {
    hash.clear();
    key_offsets.assign(1, 0);
    key_pool.clear();
    support_offsets.assign(1, 0);
    support.clear();
    weights.clear();
  }

  void push_key(std::uint64_t h, SparseKey key) {
    hash.push_back(h);
    key_pool.insert(key_pool.end(), key.begin(), key.end());
    key_offsets.push_back(key_pool.size());
  }
  void close_support() { support_offsets.push_back(support.size()); }

  SparseKey key(std::size_t i) const {
    return {key_pool.data() + key_offsets[i], key_offsets[i + 1] - key_offsets[i]};
  }
  std::span<const std::uint32_t> support_of(std::size_t i) const {
    return {support.data() + support_offsets[i], support_offsets[i + 1] - support_offsets[i]};
  }
  std::span<const double> weights_of(std::size_t i) const {
    return {weights.data() + support_offsets[i], support_offsets[i + 1] - support_offsets[i]};
  }

  std::vector<std::uint64_t> hash;
  std::vector<std::size_t> key_offsets{0};
  std::vector<std::int64_t> key_pool;
  std::vector<std::size_t> support_offsets{0};
  std::vector<std::uint32_t> support;
  std::vector<double> weights;
};

// Mode of every agent in every profile, row-major (profile, agent).
std::vector<std::uint8_t> profile_mode_table(int agents) {
  const std::size_t profiles = num_profiles(agents);
  std::vector<std::uint8_t> table(profiles * agents);
  for (std::size_t index = 0; index < profiles; ++index) {
    const ModeProfile m = profile_from_index(index, agents);
    for (int i = 0; i < agents; ++i) table[index * agents + i] = static_cast<std::uint8_t>(m[i]);
  }
  return table;
}

// Evaluates one belief against the whole prescription batch with the
// active kernels. After prepare(u), the successors under action u are
// available per prescription as sparse keys and as beliefs.
class Expander {
 public:
  Expander(const PrescriptionBatch& batch, int agents, int digits,
           const std::vector<std::uint8_t>& mode_table)
      : batch_(batch),
        agents_(agents),
        actions_(num_joint_actions(agents)),
        scale_(kernels::decimal_scale(digits)),
        kernels_(kernels::active()),
        mode_table_(mode_table) {
    probs_.resize(actions_ * batch.size());
    cost_.resize(batch.size());
    hash_.resize(batch.size());
    key_length_.resize(batch.size());
  }

  void load(std::span<const std::uint32_t> support, std::span<const double> weights) {
    support_.assign(support.begin(), support.end());
    weights_.assign(weights.begin(), weights.end());
    modes_.clear();
    for (std::uint32_t index : support_) {
      const std::uint8_t* row = mode_table_.data() + static_cast<std::size_t>(index) * agents_;
      modes_.insert(modes_.end(), row, row + agents_);
    }
    const std::size_t cells = support_.size() * batch_.size();
    joint_.resize(actions_ * cells);
    succ_.resize(cells);
    keys_.resize(cells);
    key_pool_.resize(2 * cells);
    kernels_.joint_action_probs(view(), batch_, joint_, probs_, cost_);
  }

  std::size_t prescriptions() const { return batch_.size(); }
  std::size_t actions() const { return actions_; }
  double cost(std::size_t k) const { return cost_[k]; }
  double prob(std::size_t u, std::size_t k) const { return probs_[u * batch_.size() + k]; }

  // Successor rows and keys for action u. Prescriptions under which u has
  // probability 0 get no key.
  void prepare(std::size_t u) {
    const std::size_t K = batch_.size();
    const std::size_t d = support_.size();
    const std::size_t cells = d * K;
    const std::span<const double> row(probs_.data() + u * K, K);
    kernels_.successor_rows(d, {joint_.data() + u * cells, cells}, row, scale_, succ_, keys_);
    for (std::size_t k = 0; k < K; ++k) {
      if (row[k] == 0.0) continue;
      std::int64_t* pairs = key_pool_.data() + 2 * k * d;
      std::size_t length = 0;
      for (std::size_t s = 0; s < d; ++s) {
        const double rounded = keys_[s * K + k];
        if (rounded == 0.0) continue;
        pairs[length] = support_[s];
        pairs[length + 1] = static_cast<std::int64_t>(rounded);
        length += 2;
      }
      key_length_[k] = length;
      hash_[k] = hash_sparse_key(key(k));
    }
  }

  SparseKey key(std::size_t k) const {
    return {key_pool_.data() + 2 * k * support_.size(), key_length_[k]};
  }
  std::uint64_t hash(std::size_t k) const { return hash_[k]; }

  void append_successor(std::size_t k, std::vector<std::uint32_t>& support,
                        std::vector<double>& weights) const {
    const std::size_t K = batch_.size();
    for (std::size_t s = 0; s < support_.size(); ++s) {
      const double q = succ_[s * K + k];
      if (q > 0.0) {
        support.push_back(support_[s]);
        weights.push_back(q);
      }
    }
  }

 private:
  kernels::SupportView view() const { return {agents_, weights_, modes_}; }

  const PrescriptionBatch& batch_;
  int agents_;
  std::size_t actions_;
  double scale_;
  const kernels::KernelTable& kernels_;
  const std::vector<std::uint8_t>& mode_table_;
  std::vector<std::uint32_t> support_;
  std::vector<double> weights_;
  std::vector<std::uint8_t> modes_;
  std::vector<double> joint_;
  std::vector<double> probs_;
  std::vector<double> cost_;
  std::vector<double> succ_;
  std::vector<double> keys_;
  std::vector<std::int64_t> key_pool_;
  std::vector<std::size_t> key_length_;
  std::vector<std::uint64_t> hash_;
};

// Upper bounds on the beliefs and candidates expanded between merges.
constexpr std::size_t kExpansionBlock = 4096;
constexpr std::size_t kCandidatesPerBlock = std::size_t{1} << 20;

// Successor index of every expanded (belief, prescription, action), in
// emit order, with per-belief offsets; slot t holds the edges out of slot t.
struct Transitions {
  bool recorded = false;
  std::vector<std::vector<std::uint32_t>> successor;
  std::vector<std::vector<std::size_t>> offsets;
};

struct Expansion {
  ReachableSets reachable;
  Transitions transitions;
};

Expansion expand(const Scenario& scenario, std::size_t max_recorded) {
  scenario.validate();
  const int T = scenario.horizon;
  const int digits = scenario.dedup_rounding;
  const PrescriptionBatch batch = to_batch(scenario.space().enumerate());
  const auto mode_table = profile_mode_table(scenario.agents);

  Expansion result;
  ReachableSets& reachable = result.reachable;
  reachable.sets.assign(T, BeliefSet(scenario.agents, digits));
  reachable.sets[0].insert(scenario.initial_belief());
  std::size_t total = 1;

  Transitions& transitions = result.transitions;
  transitions.recorded = max_recorded > 0;
  transitions.successor.resize(T);
  transitions.offsets.resize(T);
  std::size_t recorded = 0;

  const int workers = worker_count();
  const std::size_t per_belief = batch.size() * num_joint_actions(scenario.agents);
  const std::size_t block_limit =
      std::clamp<std::size_t>(kCandidatesPerBlock / per_belief, 1, kExpansionBlock);

  for (int t = 1; t < T; ++t) {
    const BeliefSet& current = reachable.sets[t - 1];
    BeliefSet& next = reachable.sets[t];
    std::vector<std::uint32_t>& edges = transitions.successor[t - 1];
    std::vector<std::size_t>& offsets = transitions.offsets[t - 1];
    offsets.assign(1, 0);

    auto record = [&](std::size_t index) {
      if (transitions.recorded) edges.push_back(static_cast<std::uint32_t>(index));
    };

    for (std::size_t block = 0; block < current.size(); block += block_limit) {
      const std::size_t block_end = std::min(current.size(), block + block_limit);
      const std::size_t block_size = block_end - block;
      const std::size_t chunks = std::min<std::size_t>(workers, block_size);
      std::vector<std::size_t> emitted(block_size);

      if (chunks == 1) {
        Expander expander(batch, scenario.agents, digits, mode_table);
        for (std::size_t i = block; i < block_end; ++i) {
          expander.load(current.support(i), current.weights(i));
          std::size_t count = 0;
          for (std::size_t u = 0; u < expander.actions(); ++u) {
            expander.prepare(u);
            const std::size_t K = expander.prescriptions();
            for (std::size_t k = 0; k < K; ++k) {
              if (expander.prob(u, k) != 0.0) next.prefetch(expander.hash(k));
            }
            for (std::size_t k = 0; k < K; ++k) {
              if (expander.prob(u, k) == 0.0) continue;
              const auto [index, added] = next.insert_with(
                  expander.hash(k), expander.key(k),
                  [&](std::vector<std::uint32_t>& support, std::vector<double>& weights) {
                    expander.append_successor(k, support, weights);
                  });
              total += added;
              record(index);
              ++count;
            }
          }
          emitted[i - block] = count;
        }
      } else {
        // Chunks expand in parallel against the read-only `next`, then merge
        // in chunk order, so insertion order is that of a sequential pass.
        // `known` holds the index of each successor already present, npos for
        // the next entry of the chunk's candidate buffer.
        const std::size_t chunk = (block_size + chunks - 1) / chunks;
        std::vector<CandidateBuffer> fresh(chunks);
        std::vector<std::vector<std::size_t>> known(chunks);
        parallel_for(chunks, [&](std::size_t first_chunk, std::size_t last_chunk) {
          Expander expander(batch, scenario.agents, digits, mode_table);
          for (std::size_t c = first_chunk; c < last_chunk; ++c) {
            CandidateBuffer& buffer = fresh[c];
            buffer.clear();
            const std::size_t begin = block + c * chunk;
            const std::size_t end = std::min(block_end, begin + chunk);
            for (std::size_t i = begin; i < end; ++i) {
              expander.load(current.support(i), current.weights(i));
              std::size_t count = 0;
              for (std::size_t u = 0; u < expander.actions(); ++u) {
                expander.prepare(u);
                const std::size_t K = expander.prescriptions();
                for (std::size_t k = 0; k < K; ++k) {
                  if (expander.prob(u, k) != 0.0) next.prefetch(expander.hash(k));
                }
                for (std::size_t k = 0; k < K; ++k) {
                  if (expander.prob(u, k) == 0.0) continue;
                  const std::size_t index = next.find(expander.hash(k), expander.key(k));
                  known[c].push_back(index);
                  ++count;
                  if (index != BeliefSet::npos) continue;
                  buffer.push_key(expander.hash(k), expander.key(k));
                  expander.append_successor(k, buffer.support, buffer.weights);
                  buffer.close_support();
                }
              }
              emitted[i - block] = count;
            }
          }
        });
        for (std::size_t c = 0; c < chunks; ++c) {
          const CandidateBuffer& buffer = fresh[c];
          std::size_t pending = 0;
          for (std::size_t index : known[c]) {
            if (index == BeliefSet::npos) {
              const auto [inserted, added] =
                  next.insert(buffer.hash[pending], buffer.key(pending),
                              buffer.support_of(pending), buffer.weights_of(pending));
              index = inserted;
              total += added;
              ++pending;
            }
            record(index);
          }
        }
      }

      for (std::size_t count : emitted) offsets.push_back(offsets.back() + count);
      if (total > scenario.max_belief_states) {
        throw StateExplosion(t + 1, total, scenario.max_belief_states);
      }
      if (transitions.recorded && recorded + edges.size() > max_recorded) {
        transitions.recorded = false;
        for (auto& list : transitions.successor) std::vector<std::uint32_t>().swap(list);
      }
    }
    recorded += edges.size();
  }
  return result;
}

}  // namespace

ReachableSets enumerate_reachable(const Scenario& scenario) {
  return expand(scenario, 0).reachable;
}

// SolvedPolicy -----------------------------------------------------------------

SolvedPolicy::SolvedPolicy(Scenario scenario, ReachableSets reachable,
                           std::vector<std::vector<ValueEntry>> values)
    : scenario_(std::move(scenario)),
      fingerprint_(scenario_fingerprint(scenario_)),
      reachable_(std::move(reachable)),
      values_(std::move(values)) {
  if (reachable_.sets.size() != static_cast<std::size_t>(scenario_.horizon) ||
      values_.size() != reachable_.sets.size()) {
    throw InternalInconsistency("solved policy needs one belief set and value list per slot");
  }
  for (std::size_t t = 0; t < values_.size(); ++t) {
    if (values_[t].size() != reachable_.sets[t].size()) {
      throw InternalInconsistency("value list size differs from belief set size at slot " +
                                  std::to_string(t + 1));
    }
  }
}

const std::vector<ValueEntry>& SolvedPolicy::values_at(int t) const {
  if (t < 1 || t > horizon()) throw InvalidInput("time step out of range");
  return values_[static_cast<std::size_t>(t - 1)];
}

std::size_t SolvedPolicy::locate(int t, const Belief& pi) const {
  if (t < 1 || t > horizon()) {
    throw UnreachableBelief("time step " + std::to_string(t) + " is outside the horizon");
  }
  const std::size_t index = reachable_.at(t).find(pi);
  if (index == BeliefSet::npos) {
    throw UnreachableBelief("belief is not in the solved support at t=" + std::to_string(t));
  }
  return index;
}

double SolvedPolicy::initial_value() const { return values_.at(0).at(0).value; }

SolvedPolicy solve(const Scenario& scenario_in, std::size_t belief_index,
                   const SolveOptions& options) {
  Scenario scenario = scenario_in.with_belief(belief_index);
  Expansion expansion = expand(scenario, options.max_recorded_transitions);
  ReachableSets& reachable = expansion.reachable;
  const Transitions& transitions = expansion.transitions;
  const int T = scenario.horizon;
  const int digits = scenario.dedup_rounding;
  const std::vector<Prescription> prescriptions = scenario.space().enumerate();
  const PrescriptionBatch batch = to_batch(prescriptions);
  const auto mode_table = profile_mode_table(scenario.agents);

  // Expected stage cost of each profile under each prescription, for the
  // last slot, where no successors are needed.
  const std::size_t K = batch.size();
  std::vector<double> terminal_cost(num_profiles(scenario.agents) * K);
  for (std::size_t m = 0; m < num_profiles(scenario.agents); ++m) {
    const Belief point = Belief::point_mass(profile_from_index(m, scenario.agents));
    for (std::size_t k = 0; k < K; ++k) {
      terminal_cost[m * K + k] = stage_expected_cost(point, prescriptions[k]);
    }
  }

  std::vector<std::vector<ValueEntry>> values(T);
  // Values of the slot after t, densely packed for the successor lookups.
  std::vector<double> next_values;
  std::vector<double> current_values;
  for (int t = T; t >= 1; --t) {
    const BeliefSet& current = reachable.at(t);
    const BeliefSet* next = t < T ? &reachable.at(t + 1) : nullptr;
    const std::vector<std::uint32_t>& edges = transitions.successor[t - 1];
    const std::vector<std::size_t>& offsets = transitions.offsets[t - 1];
    auto& out = values[t - 1];
    out.resize(current.size());
    current_values.resize(current.size());
    const double upper = static_cast<double>(T - t + 1);

    parallel_for(current.size(), [&](std::size_t begin, std::size_t end) {
      Expander expander(batch, scenario.agents, digits, mode_table);
      std::vector<double> q(batch.size());
      auto missing = [&] {
        return InternalInconsistency("successor missing from the belief set at t=" +
                                     std::to_string(t + 1));
      };
      for (std::size_t i = begin; i < end; ++i) {
        if (next == nullptr) {
          std::fill(q.begin(), q.end(), 0.0);
          const auto support = current.support(i);
          const auto weights = current.weights(i);
          for (std::size_t s = 0; s < support.size(); ++s) {
            const double* row = terminal_cost.data() + static_cast<std::size_t>(support[s]) * K;
            for (std::size_t k = 0; k < K; ++k) q[k] += weights[s] * row[k];
          }
        } else {
          expander.load(current.support(i), current.weights(i));
          for (std::size_t k = 0; k < q.size(); ++k) q[k] = expander.cost(k);
        }
        if (next != nullptr && transitions.recorded) {
          std::size_t edge = offsets[i];
          for (std::size_t u = 0; u < expander.actions(); ++u) {
            for (std::size_t k = 0; k < q.size(); ++k) {
              const double p = expander.prob(u, k);
              if (p == 0.0) continue;
              if (edge >= offsets[i + 1]) throw missing();
              q[k] += p * next_values[edges[edge++]];
            }
          }
          if (edge != offsets[i + 1]) throw missing();
        } else if (next != nullptr) {
          for (std::size_t u = 0; u < expander.actions(); ++u) {
            expander.prepare(u);
            for (std::size_t k = 0; k < q.size(); ++k) {
              if (expander.prob(u, k) != 0.0) next->prefetch(expander.hash(k));
            }
            for (std::size_t k = 0; k < q.size(); ++k) {
              const double p = expander.prob(u, k);
              if (p == 0.0) continue;
              const std::size_t index = next->find(expander.hash(k), expander.key(k));
              if (index == BeliefSet::npos) throw missing();
              q[k] += p * next_values[index];
            }
          }
        }
        const double best = *std::min_element(q.begin(), q.end());
        std::size_t chosen = 0;
        while (q[chosen] > best + kTieTolerance) ++chosen;
        if (q[chosen] < -1e-9 || q[chosen] > upper + 1e-9) {
          throw InternalInconsistency("value " + std::to_string(q[chosen]) +
                                      " outside [0, " + std::to_string(upper) + "]");
        }
        out[i] = {q[chosen], prescriptions[chosen]};
        current_values[i] = q[chosen];
      }
    });
    next_values.swap(current_values);
  }
  return SolvedPolicy(std::move(scenario), std::move(reachable), std::move(values));
}

const Prescription& prescription_at(const SolvedPolicy& policy, int t, const Belief& pi) {
  const std::size_t index = policy.locate(t, pi);
  return policy.values_at(t)[index].argmin;
}

double bellman_rhs(const SolvedPolicy& policy, int t, const Belief& pi,
                   const Prescription& gamma) {
  double value = stage_expected_cost(pi, gamma);
  if (t == policy.horizon()) return value;
  for (const Successor& next : successor_distribution(pi, gamma)) {
    const std::size_t index = policy.locate(t + 1, next.belief);
    value += next.probability * policy.values_at(t + 1)[index].value;
  }
  return value;
}

}  // namespace cimac
