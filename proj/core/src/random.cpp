#include "framekit/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace framekit {

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) {
    u1 = uniform();
  }
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t Rng::uniform_index(std::size_t lo, std::size_t hi) {
  if (hi < lo) {
    throw std::invalid_argument("empty index range");
  }
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) {
    return static_cast<std::size_t>(engine_());
  }
  // Rejection sampling keeps the draw unbiased.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t x = engine_();
  while (x >= limit) {
    x = engine_();
  }
  return lo + static_cast<std::size_t>(x % span);
}

}  // namespace framekit
