#pragma once

#include <cstdint>
#include <string>

namespace polyrec {

// Numerical tolerances used across the library. Kept in one record so every
// check in tests, self-test and reports refers to the same thresholds.
struct Tolerances {
  double fourier = 1e-10;         // Plancherel, inversion, correlation
  double decomposition = 1e-9;    // f1 + f2 + f3 == f
  double poisson = 1e-8;          // theta direct vs dual, A_Lambda
  double f_lattice = 1e-7;        // F direct vs dual form
  double theta_tail = 1e-12;      // truncation of lattice sums
  double moment_relative = 1e-8;  // moment vs N * solution count
};

// Stand-ins for the free constants that the recurrence argument leaves
// existential. None of them is hard-coded anywhere else.
struct FreeConstants {
  double C1 = 1.0;         // exceptional-set constant
  double C_kl = 1.0;       // main-term exponent constant
  int K = 8;               // moment order
  double C_k = 1.0;        // Weyl / Schmidt exponent constant
  double c_shift = 1.0;    // M = c (eps N)^(1/k)
  double B_quality = 1.0;  // diophantine quality threshold
};

struct Budgets {
  std::uint64_t signature_cells = 50'000'000;  // dense Tarry convolution
  std::uint64_t hash_tuples = 20'000'000;      // meet-in-the-middle fallback
  std::uint64_t lattice_points = 5'000'000;    // per theta enumeration
  std::uint64_t lift_box = 40'000'000;         // |[-N', N']^k|
};

struct ExperimentConfig {
  std::uint64_t seed = 42;
  FreeConstants constants;
  Tolerances tolerances;
  Budgets budgets;
  unsigned threads = 1;
  std::string json_out;
  std::string csv_out;
};

// Throws polyrec::Error naming the offending field.
void validate(const ExperimentConfig& config);

}  // namespace polyrec
