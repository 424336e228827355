#include "pbmc/generators.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

namespace pbmc {

namespace {

// Modulo draw: the same bytes on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  std::uint64_t below(std::uint64_t n) { return gen_() % n; }
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }
  bool chance(double p) { return static_cast<double>(gen_() >> 11) * 0x1.0p-53 < p; }

 private:
  std::mt19937_64 gen_;
};

struct Line {
  std::vector<std::pair<std::int64_t, std::uint32_t>> terms;
  const char* rel;
  std::int64_t degree;
};

std::string render(const std::string& manifest, std::uint32_t numVars, const std::vector<Line>& lines) {
  std::ostringstream os;
  os << "* #variable= " << numVars << " #constraint= " << lines.size() << "\n";
  os << "* generator: " << manifest << "\n";
  for (const Line& l : lines) {
    for (auto [a, v] : l.terms) os << (a < 0 ? "-" : "+") << std::llabs(a) << " x" << v << " ";
    os << l.rel << " " << l.degree << " ;\n";
  }
  return os.str();
}

std::int64_t fractionOf(double fraction, std::int64_t total) {
  return static_cast<std::int64_t>(std::floor(fraction * static_cast<double>(total)));
}

}  // namespace

std::string genKnapsack(const KnapsackSpec& s) {
  Rng rng(s.seed);
  std::vector<Line> lines;
  for (std::uint32_t d = 0; d < s.dims; ++d) {
    Line l{{}, "<=", 0};
    std::int64_t sum = 0;
    for (std::uint32_t i = 1; i <= s.items; ++i) {
      std::int64_t a = rng.between(1, s.maxCoeff);
      sum += a;
      l.terms.emplace_back(a, i);
    }
    l.degree = fractionOf(s.capacityFraction, sum);
    lines.push_back(std::move(l));
  }
  std::ostringstream m;
  m << "knapsack seed=" << s.seed << " items=" << s.items << " dims=" << s.dims << " maxcoeff=" << s.maxCoeff
    << " capacity=" << s.capacityFraction;
  return render(m.str(), s.items, lines);
}

std::string genAuction(const AuctionSpec& s) {
  Rng rng(s.seed);
  std::vector<std::vector<std::uint32_t>> bidders(s.items + 1);  // bids containing each item
  std::vector<std::int64_t> price(s.bids + 1);
  std::int64_t totalPrice = 0;
  for (std::uint32_t b = 1; b <= s.bids; ++b) {
    std::uint32_t size = static_cast<std::uint32_t>(rng.between(1, std::max<std::uint32_t>(1, s.maxBundle)));
    size = std::min(size, s.items);
    std::vector<std::uint32_t> pool(s.items);
    for (std::uint32_t i = 0; i < s.items; ++i) pool[i] = i + 1;
    for (std::uint32_t k = 0; k < size; ++k) {
      std::uint32_t j = k + static_cast<std::uint32_t>(rng.below(s.items - k));
      std::swap(pool[k], pool[j]);
      bidders[pool[k]].push_back(b);
    }
    price[b] = rng.between(1, s.maxPrice);
    totalPrice += price[b];
  }
  std::vector<Line> lines;
  for (std::uint32_t i = 1; i <= s.items; ++i) {
    if (bidders[i].size() < 2) continue;
    Line l{{}, "<=", 1};
    std::sort(bidders[i].begin(), bidders[i].end());
    for (std::uint32_t b : bidders[i]) l.terms.emplace_back(1, b);
    lines.push_back(std::move(l));
  }
  Line rev{{}, ">=", fractionOf(s.revenueFraction, totalPrice)};
  for (std::uint32_t b = 1; b <= s.bids; ++b) rev.terms.emplace_back(price[b], b);
  lines.push_back(std::move(rev));
  std::ostringstream m;
  m << "auction seed=" << s.seed << " bids=" << s.bids << " items=" << s.items << " maxbundle=" << s.maxBundle
    << " maxprice=" << s.maxPrice << " revenue=" << s.revenueFraction;
  return render(m.str(), s.bids, lines);
}

std::string genSensor(const SensorSpec& s, bool costAware) {
  Rng rng(s.seed);
  auto place = [&] {
    std::int64_t x = rng.between(0, s.grid - 1);
    std::int64_t y = rng.between(0, s.grid - 1);
    return std::pair{x, y};
  };
  std::vector<std::pair<std::int64_t, std::int64_t>> sensor(s.sensors), target(s.targets);
  for (auto& p : sensor) p = place();
  for (auto& p : target) p = place();
  std::vector<std::int64_t> cost(s.sensors, 1);
  if (costAware)
    for (auto& c : cost) c = rng.between(1, s.maxCost);

  std::vector<Line> lines;
  for (std::uint32_t t = 0; t < s.targets; ++t) {
    Line l{{}, ">=", 1};
    for (std::uint32_t i = 0; i < s.sensors; ++i) {
      std::int64_t dx = std::llabs(sensor[i].first - target[t].first);
      std::int64_t dy = std::llabs(sensor[i].second - target[t].second);
      if (std::max(dx, dy) <= static_cast<std::int64_t>(s.radius)) l.terms.emplace_back(1, i + 1);
    }
    if (costAware && rng.chance(s.redundancy)) l.degree = 2;
    lines.push_back(std::move(l));
  }
  Line budget{{}, "<=", 0};
  std::int64_t totalCost = 0;
  for (std::uint32_t i = 0; i < s.sensors; ++i) {
    budget.terms.emplace_back(cost[i], i + 1);
    totalCost += cost[i];
  }
  budget.degree = costAware ? fractionOf(s.budgetFraction, totalCost) : (s.budget > 0 ? s.budget : s.sensors / 2);
  lines.push_back(std::move(budget));

  std::ostringstream m;
  m << (costAware ? "sensor-cost" : "sensor") << " seed=" << s.seed << " grid=" << s.grid << " sensors=" << s.sensors
    << " targets=" << s.targets << " radius=" << s.radius;
  if (costAware) {
    m << " maxcost=" << s.maxCost << " budget=" << s.budgetFraction << " redundancy=" << s.redundancy;
  } else {
    m << " budget=" << budget.degree;
  }
  return render(m.str(), s.sensors, lines);
}

}  // namespace pbmc
