#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polyrec/numeric_types.hpp"
#include "polyrec/polyfam.hpp"

namespace polyrec {

// S_w(xi) = sum_{n=1}^{M} w(n) e(P(n) xi / N) for all xi in Z_N.
struct WeylSum {
  std::int64_t M = 0;
  std::int64_t N = 0;
  IntPolynomial P;
  std::vector<int> weights;  // w(1..M), each +1 or -1
  std::vector<Complex> values;
};

// Computed with one length-N transform of the point masses w(n) at P(n) mod N.
WeylSum weyl_sum(const IntPolynomial& P, std::int64_t M, std::vector<int> weights,
                 std::int64_t N);
WeylSum weyl_sum(const IntPolynomial& P, std::int64_t M, std::int64_t N);  // w = 1

// sum_xi |S(xi)|^(2K)
double moment_2K(const WeylSum& S, int K);

// #{(n_1..n_K, m_1..m_K) in [1,M]^(2K) : sum P(n_j) = sum P(m_j) mod N}
BigInt count_solutions_modN(const IntPolynomial& P, std::int64_t M, std::int64_t N, int K);

enum class TarryMethod { kAuto, kConvolution, kMeetInTheMiddle };

struct TarryCount {
  int K = 0;
  int k = 0;  // number of power-sum equations (0 for the single-polynomial form)
  std::int64_t M = 0;
  std::optional<IntPolynomial> P;
  BigInt count;
  TarryMethod method = TarryMethod::kAuto;  // method actually used
};

struct TarryBudget {
  std::uint64_t signature_cells = 50'000'000;
  std::uint64_t hash_tuples = 20'000'000;
};

// Solutions over Z of x_1^i + ... + x_K^i = y_1^i + ... + y_K^i, i = 1..k.
TarryCount tarry_count(int K, int k, std::int64_t M, TarryMethod method = TarryMethod::kAuto,
                       const TarryBudget& budget = {});
// Solutions over Z of P(x_1) + ... + P(x_K) = P(y_1) + ... + P(y_K).
TarryCount tarry_count_poly(const IntPolynomial& P, int K, std::int64_t M,
                            TarryMethod method = TarryMethod::kAuto,
                            const TarryBudget& budget = {});

struct GrowthRow {
  std::int64_t M = 0;
  BigInt count;
  double log_count = 0.0;
  double fitted_slope = 0.0;  // secant slope from the previous row (NaN on the first)
  double theory_exponent = 0.0;
};

struct GrowthProbe {
  int K = 0;
  int k = 0;
  std::vector<GrowthRow> rows;
  double overall_slope = 0.0;  // least squares of log J against log M
  double theory_exponent = 0.0;

  // Columns: M,count,log_count,fitted_slope,theory_exponent
  std::string csv() const;
};

GrowthProbe growth_probe(int K, int k, const std::vector<std::int64_t>& M_list,
                         const TarryBudget& budget = {});

std::string to_string(TarryMethod method);

}  // namespace polyrec
