#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>

#include "pbmc/formula.hpp"
#include "pbmc/model_count.hpp"

namespace pbmc {

class OracleRefusal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleResult {
  ModelCount count;
  std::uint64_t enumerated = 0;
};

/// Enumerates all 2^numVars assignments in binary order, evaluating each
/// constraint by direct summation.
OracleResult bruteCount(const PBFormula& f, std::uint32_t limitVars = 24);

/// Extensions of sigma (over its unassigned variables) satisfying f.
ModelCount bruteResidualCount(const PBFormula& f, const Assignment& sigma, std::uint32_t limitVars = 24);

/// Assignments to `vars` (all unassigned in sigma) that, together with
/// sigma, satisfy the listed constraints of f.
ModelCount bruteRestrictedCount(const PBFormula& f, const Assignment& sigma, std::span<const Var> vars,
                                std::span<const std::uint32_t> cstrs, std::uint32_t limitVars = 24);

/// Same count as bruteCount, walking a Gray code with incremental sums.
/// The space is cut into blocks that OpenMP threads take in parallel.
OracleResult grayCountParallel(const PBFormula& f, std::uint32_t limitVars = 40);

}  // namespace pbmc
