#ifndef SYMM_TEST_GENERATORS_HPP
#define SYMM_TEST_GENERATORS_HPP

// Random weighted samples for the property suites. Every suite seeds its own
// engine with kSeed so failures reproduce.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "symm/rearrange.hpp"

namespace testgen {

inline constexpr std::uint64_t kSeed = 20240917;

/// Values drawn from a small lattice about a third of the time so ties occur.
inline std::vector<symm::rearrange::Cell> random_cells(std::mt19937_64& rng, std::size_t count) {
  std::uniform_real_distribution<double> value(0.0, 5.0);
  std::uniform_real_distribution<double> measure(0.01, 2.0);
  std::uniform_int_distribution<int> lattice(0, 4);
  std::uniform_int_distribution<int> coin(0, 2);
  std::vector<symm::rearrange::Cell> cells(count);
  for (auto& c : cells) {
    c.value = coin(rng) == 0 ? static_cast<double>(lattice(rng)) : value(rng);
    c.measure = measure(rng);
  }
  return cells;
}

inline std::size_t random_size(std::mt19937_64& rng, std::size_t max_cells = 100) {
  return std::uniform_int_distribution<std::size_t>(1, max_cells)(rng);
}

/// Same measures as `cells`, fresh values.
inline std::vector<symm::rearrange::Cell> revalue(std::mt19937_64& rng, std::vector<symm::rearrange::Cell> cells) {
  std::uniform_real_distribution<double> value(0.0, 5.0);
  for (auto& c : cells) c.value = value(rng);
  return cells;
}

/// Step profile on [0, total] with random nonincreasing values.
inline symm::rearrange::DecreasingProfile random_step_profile(std::mt19937_64& rng, double total, std::size_t pieces) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> cuts{0.0};
  for (std::size_t i = 1; i < pieces; ++i) cuts.push_back(unit(rng));
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> breakpoints;
  for (double c : cuts) {
    if (breakpoints.empty() || c * total > breakpoints.back()) breakpoints.push_back(c * total);
  }
  breakpoints.push_back(total);
  std::vector<double> values(breakpoints.size() - 1);
  double v = 1.0 + 4.0 * unit(rng);
  for (auto& x : values) {
    x = v;
    v *= unit(rng);
  }
  return symm::rearrange::DecreasingProfile::step(std::move(breakpoints), std::move(values));
}

} // namespace testgen

#endif
