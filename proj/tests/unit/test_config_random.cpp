#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include "polyrec/config.hpp"
#include "polyrec/error.hpp"
#include "polyrec/integer_set.hpp"
#include "polyrec/random.hpp"

using namespace polyrec;

namespace {

std::string failure(const ExperimentConfig& c) {
  try {
    validate(c);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Config, DefaultsAreValid) { EXPECT_EQ(failure(ExperimentConfig{}), ""); }

TEST(Config, ErrorsNameTheField) {
  ExperimentConfig c;
  c.constants.C1 = 0;
  EXPECT_NE(failure(c).find("constants.C1"), std::string::npos);
  c = {};
  c.constants.K = 0;
  EXPECT_NE(failure(c).find("constants.K"), std::string::npos);
  c = {};
  c.constants.c_shift = -1;
  EXPECT_NE(failure(c).find("constants.c_shift"), std::string::npos);
  c = {};
  c.tolerances.poisson = 0;
  EXPECT_NE(failure(c).find("tolerances.poisson"), std::string::npos);
  c = {};
  c.budgets.lattice_points = 0;
  EXPECT_NE(failure(c).find("budgets.lattice_points"), std::string::npos);
  c = {};
  c.threads = 0;
  EXPECT_NE(failure(c).find("threads"), std::string::npos);
}

TEST(Generator, MatchesTheStandardEngine) {
  // the standard fixes the 10000th output of a default-seeded mt19937_64
  std::mt19937_64 ref;
  ref.discard(9999);
  EXPECT_EQ(ref(), 9981545732273789042ULL);
  Rng a(5489), b(5489);
  std::mt19937_64 c(5489);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), c());
  for (int i = 0; i < 1000; ++i) {
    const double u = b.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Generator, BelowIsUnbiasedAndInRange) {
  Rng rng(3);
  std::vector<int> hist(7);
  for (int i = 0; i < 70000; ++i) ++hist[rng.below(7)];
  for (int h : hist) EXPECT_NEAR(h, 10000, 500);
}

TEST(Sets, Kinds) {
  EXPECT_EQ(full_set(10).size(), 10u);
  const auto ap = progression_set(20, 5, 5);
  EXPECT_EQ(std::vector<std::int64_t>(ap.elements().begin(), ap.elements().end()),
            (std::vector<std::int64_t>{5, 10, 15, 20}));
  EXPECT_EQ(even_set(9).size(), 4u);
  EXPECT_THROW(random_set(10, 1.5, 1), Error);
  EXPECT_THROW(progression_set(10, 1, 0), Error);
}

TEST(Sets, RandomGolden) {
  std::ifstream in(std::string(POLYREC_GOLDEN_DIR) + "/random_N100_d0.3_seed42.txt");
  ASSERT_TRUE(in.good());
  std::vector<std::int64_t> want;
  for (std::int64_t x; in >> x;) want.push_back(x);
  const auto A = random_set(100, 0.3, 42);
  EXPECT_EQ(std::vector<std::int64_t>(A.elements().begin(), A.elements().end()), want);
  const auto B = random_set(100, 0.3, 42);
  EXPECT_TRUE(std::equal(A.elements().begin(), A.elements().end(), B.elements().begin(), B.elements().end()));
}
