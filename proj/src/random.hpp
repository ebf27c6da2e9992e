#pragma once

#include <cstdint>
#include <random>

namespace adpt::detail {

// 53-bit uniform in [0, 1). std::uniform_real_distribution is
// implementation-defined; this keeps sample sets identical across toolchains.
inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& gen, double lo, double hi) {
  return lo == hi ? lo : lo + (hi - lo) * uniform01(gen);
}

}  // namespace adpt::detail
