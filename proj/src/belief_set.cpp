#include "cimac/belief_set.hpp"

#include <algorithm>

#include "cimac/errors.hpp"

namespace cimac {

namespace {

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<std::int64_t> sparse_from_dense(const BeliefKey& key) {
  std::vector<std::int64_t> pairs;
  for (std::size_t i = 0; i < key.entries.size(); ++i) {
    if (key.entries[i] == 0) continue;
    pairs.push_back(static_cast<std::int64_t>(i));
    pairs.push_back(key.entries[i]);
  }
  return pairs;
}

}  // namespace

std::uint64_t hash_sparse_key(SparseKey key) {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  for (std::size_t i = 0; i < key.size(); i += 2) {
    h = (h ^ static_cast<std::uint64_t>(key[i])) * 0x9e3779b97f4a7c15ULL;
    h = (h ^ static_cast<std::uint64_t>(key[i + 1])) * 0xff51afd7ed558ccdULL;
    h ^= h >> 29;
  }
  return mix(h);
}

BeliefSet::BeliefSet(int agents, int dedup_rounding)
    : agents_(agents), dedup_rounding_(dedup_rounding), slots_(16) {}

Belief BeliefSet::operator[](std::size_t i) const {
  std::vector<double> probs(num_profiles(agents_), 0.0);
  const auto s = support(i);
  const auto w = weights(i);
  for (std::size_t j = 0; j < s.size(); ++j) probs[s[j]] = w[j];
  return Belief(agents_, std::move(probs));
}

BeliefKey BeliefSet::key(std::size_t i) const {
  BeliefKey key{std::vector<std::int64_t>(num_profiles(agents_), 0)};
  for (std::size_t j = key_offsets_[i]; j < key_offsets_[i + 1]; j += 2) {
    key.entries[key_pool_[j]] = key_pool_[j + 1];
  }
  return key;
}

bool BeliefSet::matches(const Slot& slot, std::uint64_t hash, SparseKey key) const {
  return slot.hash == hash && slot.key_length == key.size() &&
         std::equal(key.begin(), key.end(), key_pool_.data() + slot.key_offset);
}

std::size_t BeliefSet::find(std::uint64_t hash, SparseKey key) const {
  const std::size_t mask = slots_.size() - 1;
  for (std::size_t slot = hash & mask;; slot = (slot + 1) & mask) {
    const Slot& s = slots_[slot];
    if (s.entry == kEmpty) return npos;
    if (matches(s, hash, key)) return s.entry;
  }
}

std::size_t BeliefSet::find(const BeliefKey& key) const {
  const auto pairs = sparse_from_dense(key);
  return find(hash_sparse_key(pairs), pairs);
}

std::size_t BeliefSet::find(const Belief& belief) const {
  if (belief.agents() != agents_) return npos;
  return find(canonical_key(belief, dedup_rounding_));
}

std::pair<std::size_t, std::size_t> BeliefSet::probe(std::uint64_t hash, SparseKey key) {
  if (2 * (size() + 1) > slots_.size()) grow();
  const std::size_t mask = slots_.size() - 1;
  for (std::size_t slot = hash & mask;; slot = (slot + 1) & mask) {
    const Slot& s = slots_[slot];
    if (s.entry == kEmpty) return {slot, npos};
    if (matches(s, hash, key)) return {slot, s.entry};
  }
}

std::size_t BeliefSet::commit(std::size_t slot, std::uint64_t hash, SparseKey key) {
  const std::size_t i = size();
  if (i + 1 >= kEmpty) throw InvalidInput("belief set is full");
  slots_[slot] = {hash, key_pool_.size(), static_cast<std::uint32_t>(key.size()),
                  static_cast<std::uint32_t>(i)};
  key_pool_.insert(key_pool_.end(), key.begin(), key.end());
  key_offsets_.push_back(key_pool_.size());
  support_offsets_.push_back(support_.size());
  return i;
}

std::pair<std::size_t, bool> BeliefSet::insert(std::uint64_t hash, SparseKey key,
                                               std::span<const std::uint32_t> support,
                                               std::span<const double> weights) {
  return insert_with(hash, key, [&](std::vector<std::uint32_t>& s, std::vector<double>& w) {
    s.insert(s.end(), support.begin(), support.end());
    w.insert(w.end(), weights.begin(), weights.end());
  });
}

bool BeliefSet::insert(const Belief& belief) {
  if (belief.agents() != agents_) throw InvalidInput("belief has the wrong agent count");
  const auto pairs = sparse_from_dense(canonical_key(belief, dedup_rounding_));
  std::vector<std::uint32_t> support;
  std::vector<double> weights;
  for (std::size_t p : belief.support()) {
    support.push_back(static_cast<std::uint32_t>(p));
    weights.push_back(belief[p]);
  }
  return insert(hash_sparse_key(pairs), pairs, support, weights).second;
}

void BeliefSet::grow() {
  std::vector<Slot> slots(slots_.size() * 2);
  const std::size_t mask = slots.size() - 1;
  for (const Slot& s : slots_) {
    if (s.entry == kEmpty) continue;
    std::size_t slot = s.hash & mask;
    while (slots[slot].entry != kEmpty) slot = (slot + 1) & mask;
    slots[slot] = s;
  }
  slots_ = std::move(slots);
}

}  // namespace cimac
