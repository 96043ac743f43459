#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace polyrec {

// A finite set A of integers inside the interval [1, N].
class IntegerSet {
 public:
  // Elements are sorted and deduplicated; anything outside [1, N] is an error.
  IntegerSet(std::int64_t N, std::vector<std::int64_t> elements);

  std::int64_t ambient() const { return N_; }
  std::span<const std::int64_t> elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  double density() const {
    return static_cast<double>(elements_.size()) / static_cast<double>(N_);
  }
  bool contains(std::int64_t x) const;

  // 0/1 membership over [1, N]; index 0 corresponds to the integer 1.
  std::vector<std::uint8_t> mask() const;

 private:
  std::int64_t N_;
  std::vector<std::int64_t> elements_;
};

// Deterministic set generators used by the CLI and the test suites.
IntegerSet full_set(std::int64_t N);
IntegerSet even_set(std::int64_t N);
IntegerSet progression_set(std::int64_t N, std::int64_t start, std::int64_t step);
// Each x in [1, N] is kept independently with probability `density`.
IntegerSet random_set(std::int64_t N, double density, std::uint64_t seed);

}  // namespace polyrec
