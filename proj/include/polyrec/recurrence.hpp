#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "polyrec/integer_set.hpp"
#include "polyrec/polyfam.hpp"
#include "polyrec/zn_fourier.hpp"

namespace polyrec {

enum class OverlapMode { kInteger, kCyclic };

// counts[i][n-1] = |A ∩ (A + P_i(n))| for n = 1..M.
struct IntersectionProfile {
  std::int64_t N = 0;
  std::int64_t M = 0;
  OverlapMode mode = OverlapMode::kInteger;
  std::vector<std::vector<std::int64_t>> counts;

  double value(std::size_t i, std::int64_t n) const {
    return static_cast<double>(counts[i][static_cast<std::size_t>(n - 1)]) /
           static_cast<double>(N);
  }
};

// Integer mode: intersections over Z, any M >= 1.
IntersectionProfile intersection_profile(const IntegerSet& A, const PolynomialFamily& family,
                                         std::int64_t M);
// Either mode; the range must come from shift_range() for the same N, which
// bounds the wrap-around in cyclic mode.
IntersectionProfile intersection_profile(const IntegerSet& A, const PolynomialFamily& family,
                                         const ShiftRange& range, OverlapMode mode);

struct ShiftReport {
  ShiftRange range;
  double eps = 0.0;
  bool within_hypotheses = true;  // every member has the same degree
  std::vector<std::int64_t> good_shifts;
  IntersectionProfile profile;
  double density_of_good = 0.0;
  bool empty() const { return good_shifts.empty(); }
};

// Tests every n in [1, M] for |A ∩ (A + P_i(n))| / N > (|A|/N)^2 - eps,
// compared exactly. Mixed degrees are accepted only with `permissive`.
ShiftReport find_good_shifts(const IntegerSet& A, const PolynomialFamily& family, double eps,
                             double c, bool permissive = false);

// A positive decreasing function eta(t), evaluated in log space so that
// schedules far below the double range stay usable.
struct EtaSchedule {
  std::string name;
  std::function<double(std::size_t)> log_eta;

  // eta(t) = eps / (4 pi (t + 1))
  static EtaSchedule experimental(double eps);
  // eta(t) = scale / t
  static EtaSchedule reciprocal(double scale);
  // eta(t) = (l C1)^(-K) (eps / (4 pi t))^(C_kl K t^2) / 2
  static EtaSchedule reference(double eps, std::size_t l, double C1, double C_kl, int K);
};

struct DecompositionResult {
  std::size_t m = 0;              // characters in f1 (= m_r)
  std::size_t r = 0;              // iteration index, 1-based
  std::size_t next_m = 0;         // m_{r+1}
  std::vector<std::size_t> schedule;  // m_1, ..., m_{r+1}
  std::vector<std::size_t> order;     // all frequencies, |f^| descending
  std::vector<std::size_t> support;   // order[0..m)
  std::vector<Complex> support_coefficients;
  ZnFunction f1 = ZnFunction::zeros(1);
  ZnFunction f2 = ZnFunction::zeros(1);
  ZnFunction f3 = ZnFunction::zeros(1);
  double eta_of_m = 0.0;
  double log_eta_of_m = 0.0;
  double f3_norm = 0.0;
  double f2_sup = 0.0;            // ||f2^||_inf
};

// Structured + uniform + small decomposition f = f1 + f2 + f3 of a function
// with ||f||_2 <= 1, following the m_{r+1} >= eta(m_r)^(-2) schedule.
DecompositionResult decompose(const ZnFunction& f, double eps, const EtaSchedule& eta);

// sum_{j <= m} |f^(xi_j)|^2 e(xi_j shift / N)
Complex main_term(const DecompositionResult& d, std::int64_t shift);

struct UniformCertificate {
  ShiftRange range;
  double eta = 0.0;           // ||dft(f_A)||_inf
  double delta = 0.0;
  std::int64_t counted = 0;   // n with |profile - delta^2| < eps for all i
  double fraction = 0.0;
  double predicted_lower = 0.0;  // (1 - l C1 eta^(1/K)) M
  bool bound_holds = false;
};

// Counts shifts in cyclic mode, matching the Z_N setting of the statement.
UniformCertificate uniform_certificate(const IntegerSet& A, const PolynomialFamily& family,
                                       double eps, int K, double C1, double c);

// #{1 <= n <= M : |(1/N) sum_x h(x) g(x - P(n))| >= threshold}
std::int64_t error_term_census(const ZnFunction& h, const ZnFunction& g,
                               const IntPolynomial& P, std::int64_t M, double threshold);

}  // namespace polyrec
