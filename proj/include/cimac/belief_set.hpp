#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "cimac/belief.hpp"

namespace cimac {

// Canonical key in sparse form: (profile index, rounded mass) pairs for the
// profiles whose rounded mass is nonzero, ascending, flattened as
// [index0, value0, index1, value1, ...]. Two beliefs share a sparse key iff
// their dense BeliefKeys are equal.
using SparseKey = std::span<const std::int64_t>;

std::uint64_t hash_sparse_key(SparseKey key);

// Insertion-ordered set of beliefs for one time step, deduplicated on their
// canonical keys. Beliefs are stored sparsely in flat arrays behind an
// open-addressing index, so sets with millions of entries stay compact.
class BeliefSet {
 public:
  explicit BeliefSet(int agents = 2, int dedup_rounding = 9);

  std::size_t size() const { return support_offsets_.size() - 1; }
  int agents() const { return agents_; }
  int dedup_rounding() const { return dedup_rounding_; }

  Belief operator[](std::size_t i) const;
  BeliefKey key(std::size_t i) const;

  // Stored support (profiles with positive mass, ascending) and its masses.
  std::span<const std::uint32_t> support(std::size_t i) const {
    return {support_.data() + support_offsets_[i], support_offsets_[i + 1] - support_offsets_[i]};
  }
  std::span<const double> weights(std::size_t i) const {
    return {weights_.data() + support_offsets_[i], support_offsets_[i + 1] - support_offsets_[i]};
  }

  // Index of the stored belief with this key, or npos.
  std::size_t find(const BeliefKey& key) const;
  std::size_t find(const Belief& belief) const;
  bool contains(const Belief& belief) const { return find(belief) != npos; }

  // Returns true when the belief's key was new.
  bool insert(const Belief& belief);

  // Lower-level access used by the solver's batch loops; `hash` must be
  // hash_sparse_key(key).
  std::size_t find(std::uint64_t hash, SparseKey key) const;
  // Index of the belief with this key and whether it was newly added.
  std::pair<std::size_t, bool> insert(std::uint64_t hash, SparseKey key,
                                      std::span<const std::uint32_t> support,
                                      std::span<const double> weights);
  // Same, with the belief's support and masses appended by
  // fill(support, weights) only when the key is new.
  template <typename Fill>
  std::pair<std::size_t, bool> insert_with(std::uint64_t hash, SparseKey key, Fill&& fill) {
    const auto [slot, existing] = probe(hash, key);
    if (existing != npos) return {existing, false};
    fill(support_, weights_);
    return {commit(slot, hash, key), true};
  }
  void prefetch(std::uint64_t hash) const {
    __builtin_prefetch(slots_.data() + (hash & (slots_.size() - 1)));
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  struct Slot {
    std::uint64_t hash = 0;
    std::uint64_t key_offset = 0;
    std::uint32_t key_length = 0;
    std::uint32_t entry = kEmpty;
  };
  static constexpr std::uint32_t kEmpty = 0xffffffffU;

  bool matches(const Slot& slot, std::uint64_t hash, SparseKey key) const;
  void grow();
  // Slot holding the key, or the empty slot where it would go.
  std::pair<std::size_t, std::size_t> probe(std::uint64_t hash, SparseKey key);
  std::size_t commit(std::size_t slot, std::uint64_t hash, SparseKey key);

  int agents_;
  int dedup_rounding_;
  std::vector<std::int64_t> key_pool_;
  std::vector<std::size_t> key_offsets_{0};
  std::vector<std::size_t> support_offsets_{0};
  std::vector<std::uint32_t> support_;
  std::vector<double> weights_;
  std::vector<Slot> slots_;
};

}  // namespace cimac
