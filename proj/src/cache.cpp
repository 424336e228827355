#include "pbmc/cache.hpp"

#include <algorithm>

namespace pbmc {

namespace {

constexpr std::uint64_t kNodeOverhead = 64;

}  // namespace

CountCache::CountCache(std::uint64_t byteBudget, std::uint64_t seed) : budget_(byteBudget), rng_(seed) {}

const ModelCount* CountCache::lookup(const CacheKey& key) {
  auto it = map_.find(key);
  if (it == map_.end()) {
    ++stats_.misses;
    return nullptr;
  }
  ++stats_.hits;
  if (corrupt_) {
    scratch_ = it->second.count + 1;
    return &scratch_;
  }
  return &it->second.count;
}

void CountCache::store(const CacheKey& key, const ModelCount& count) {
  // A rewrite gets a fresh journal slot so that eraseSince can still undo it.
  if (auto old = map_.find(key); old != map_.end()) erase(old);
  std::uint64_t bytes = key.bytes.size() + footprint(count) + kNodeOverhead;
  auto [it, inserted] = map_.emplace(key, Entry{count, journal_.size(), bytes});
  journal_.push_back(&it->first);
  ++stats_.stores;
  stats_.bytes += bytes;
  stats_.peakBytes = std::max(stats_.peakBytes, stats_.bytes);
  stats_.entries = map_.size();
  if (stats_.bytes > budget_) evict();
}

void CountCache::erase(Map::iterator it) {
  stats_.bytes -= it->second.bytes;
  journal_[it->second.journalIndex] = nullptr;
  map_.erase(it);
  stats_.entries = map_.size();
}

void CountCache::eraseSince(std::size_t mark) {
  for (std::size_t i = journal_.size(); i-- > mark;) {
    if (journal_[i] == nullptr) continue;
    erase(map_.find(*journal_[i]));
    ++stats_.invalidated;
  }
  journal_.resize(std::min(mark, journal_.size()));
  evictCursor_ = std::min(evictCursor_, journal_.size());
}

void CountCache::evict() {
  const std::uint64_t target = budget_ - budget_ / 10;
  std::bernoulli_distribution coin(0.5);
  while (stats_.bytes > target && !map_.empty()) {
    if (evictCursor_ >= journal_.size()) evictCursor_ = 0;
    // Oldest generation: the next quarter of the live entries in store order.
    std::size_t want = std::max<std::size_t>(1, map_.size() / 4);
    std::size_t seen = 0;
    while (evictCursor_ < journal_.size() && seen < want && stats_.bytes > target) {
      const CacheKey* k = journal_[evictCursor_++];
      if (k == nullptr) continue;
      ++seen;
      if (coin(rng_) || map_.size() == 1) {
        erase(map_.find(*k));
        ++stats_.evictions;
      }
    }
  }
}

}  // namespace pbmc
