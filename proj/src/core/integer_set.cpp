#include "polyrec/integer_set.hpp"

#include <algorithm>

#include "polyrec/error.hpp"
#include "polyrec/random.hpp"

namespace polyrec {

IntegerSet::IntegerSet(std::int64_t N, std::vector<std::int64_t> elements)
    : N_(N), elements_(std::move(elements)) {
  require(N_ >= 1, ErrorCode::kInvalidArgument, "IntegerSet: N must be >= 1");
  std::sort(elements_.begin(), elements_.end());
  elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
  if (!elements_.empty()) {
    require(elements_.front() >= 1 && elements_.back() <= N_,
            ErrorCode::kInvalidArgument,
            "IntegerSet: elements must lie in [1, N]");
  }
}

bool IntegerSet::contains(std::int64_t x) const {
  return std::binary_search(elements_.begin(), elements_.end(), x);
}

std::vector<std::uint8_t> IntegerSet::mask() const {
  std::vector<std::uint8_t> m(static_cast<std::size_t>(N_), 0);
  for (auto x : elements_) m[static_cast<std::size_t>(x - 1)] = 1;
  return m;
}

IntegerSet full_set(std::int64_t N) {
  require(N >= 1, ErrorCode::kInvalidArgument, "full: N must be >= 1");
  std::vector<std::int64_t> e(static_cast<std::size_t>(N));
  for (std::int64_t i = 0; i < N; ++i) e[static_cast<std::size_t>(i)] = i + 1;
  return IntegerSet(N, std::move(e));
}

IntegerSet even_set(std::int64_t N) { return progression_set(N, 2, 2); }

IntegerSet progression_set(std::int64_t N, std::int64_t start, std::int64_t step) {
  require(N >= 1, ErrorCode::kInvalidArgument, "ap: N must be >= 1");
  require(step >= 1, ErrorCode::kInvalidArgument, "ap: step must be >= 1");
  require(start >= 1 && start <= N, ErrorCode::kInvalidArgument,
          "ap: start must lie in [1, N]");
  std::vector<std::int64_t> e;
  for (std::int64_t x = start; x <= N; x += step) e.push_back(x);
  return IntegerSet(N, std::move(e));
}

IntegerSet random_set(std::int64_t N, double density, std::uint64_t seed) {
  require(N >= 1, ErrorCode::kInvalidArgument, "random: N must be >= 1");
  require(density >= 0.0 && density <= 1.0, ErrorCode::kInvalidArgument,
          "random: density must lie in [0, 1]");
  Rng rng(seed);
  std::vector<std::int64_t> e;
  for (std::int64_t x = 1; x <= N; ++x)
    if (rng.bernoulli(density)) e.push_back(x);
  return IntegerSet(N, std::move(e));
}

}  // namespace polyrec
