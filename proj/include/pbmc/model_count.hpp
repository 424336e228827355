#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>

namespace pbmc {

/// Arbitrary-precision non-negative model count.
using ModelCount = boost::multiprecision::cpp_int;

inline std::string toDecimal(const ModelCount& c) { return c.str(); }

inline ModelCount powerOfTwo(std::uint64_t exponent) {
  ModelCount one = 1;
  return one << exponent;
}

/// Approximate heap footprint used for cache accounting.
inline std::uint64_t footprint(const ModelCount& c) {
  if (c == 0) return sizeof(ModelCount);
  return sizeof(ModelCount) + boost::multiprecision::msb(c) / 8 + 1;
}

}  // namespace pbmc
