#pragma once

#include <cstdint>
#include <string>

namespace pbmc {

struct KnapsackSpec {
  std::uint32_t items = 10;
  std::uint32_t dims = 1;
  std::int64_t maxCoeff = 100;
  double capacityFraction = 0.5;
  std::uint64_t seed = 0;
};

struct AuctionSpec {
  std::uint32_t bids = 10;
  std::uint32_t items = 8;
  std::uint32_t maxBundle = 3;  // items per bid drawn from [1, maxBundle]
  std::int64_t maxPrice = 100;
  double revenueFraction = 0.3;
  std::uint64_t seed = 0;
};

/// Sensors and targets on a grid; a sensor covers every target within
/// Chebyshev distance `radius`.
struct SensorSpec {
  std::uint32_t grid = 8;
  std::uint32_t sensors = 12;
  std::uint32_t targets = 10;
  std::uint32_t radius = 2;
  std::uint32_t budget = 0;         // unit costs; 0 means sensors / 2
  std::int64_t maxCost = 5;         // cost-aware only
  double budgetFraction = 0.5;      // cost-aware: share of the total cost
  double redundancy = 0.0;          // cost-aware: share of targets needing 2 sensors
  std::uint64_t seed = 0;
};

/// `dims` constraints sum a_i x_i <= C_d over the same items.
std::string genKnapsack(const KnapsackSpec& spec);

/// At-most-one per shared item plus a minimum revenue constraint.
std::string genAuction(const AuctionSpec& spec);

/// Coverage clauses plus one budget constraint.
std::string genSensor(const SensorSpec& spec, bool costAware);

}  // namespace pbmc
