#pragma once

#include <cstdint>
#include <random>
#include <unordered_map>
#include <vector>

#include "pbmc/components.hpp"
#include "pbmc/model_count.hpp"

namespace pbmc {

struct CacheStats {
  std::uint64_t entries = 0;
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t stores = 0;
  std::uint64_t evictions = 0;
  std::uint64_t invalidated = 0;  // removed after a failed branch
  std::uint64_t bytes = 0;
  std::uint64_t peakBytes = 0;
};

/// Component counts keyed by full component keys.
///
/// Every store is journaled so that entries written since a given mark can
/// be dropped again (see eraseSince). When the byte budget is exceeded, a
/// random half of the oldest live generation is evicted.
class CountCache {
 public:
  explicit CountCache(std::uint64_t byteBudget = std::uint64_t{4} << 30, std::uint64_t seed = 0);

  const ModelCount* lookup(const CacheKey& key);
  void store(const CacheKey& key, const ModelCount& count);

  /// Journal position; pass to eraseSince to drop everything stored later.
  std::size_t mark() const { return journal_.size(); }
  void eraseSince(std::size_t mark);

  const CacheStats& stats() const { return stats_; }
  std::size_t size() const { return map_.size(); }

  /// Test hook: lookups return the stored count plus one.
  void setCorruptForTesting(bool on) { corrupt_ = on; }

 private:
  struct Entry {
    ModelCount count;
    std::size_t journalIndex;
    std::uint64_t bytes;
  };
  using Map = std::unordered_map<CacheKey, Entry, CacheKeyHash>;

  void evict();
  void erase(Map::iterator it);

  std::uint64_t budget_;
  std::mt19937_64 rng_;
  Map map_;
  // Key of the entry written at each store, or null once that entry is gone.
  std::vector<const CacheKey*> journal_;
  std::size_t evictCursor_ = 0;
  CacheStats stats_;
  bool corrupt_ = false;
  ModelCount scratch_;
};

}  // namespace pbmc
