#ifndef IPDX_TESTS_SUPPORT_HPP
#define IPDX_TESTS_SUPPORT_HPP

#include <cmath>
#include <random>

#include "ipdx/game_model.hpp"

namespace ipdx::test {

inline bool rel_close(double a, double b, double rtol, double atol = 1e-15) {
  return std::abs(a - b) <= rtol * std::max(std::abs(a), std::abs(b)) + atol;
}

inline GameParams params(double beta, double z) {
  GameParams p;
  p.beta = beta;
  p.z = z;
  return p;
}

// One generator seed for the whole suite keeps the frozen expectations honest.
inline std::mt19937_64 make_rng(unsigned salt = 0) { return std::mt19937_64(0x5eed1234u + salt); }

}  // namespace ipdx::test

#endif
