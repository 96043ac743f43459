#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "polyrec/integer_set.hpp"
#include "polyrec/numeric_types.hpp"

namespace polyrec {

// P(n) = c_1 n + ... + c_k n^k with exact coefficients; P(0) = 0 always.
class IntPolynomial {
 public:
  // coefficients[j] is the coefficient of n^(j+1). Trailing zeros are
  // dropped; the zero polynomial is rejected.
  explicit IntPolynomial(std::vector<BigInt> coefficients);
  IntPolynomial(std::initializer_list<long long> coefficients);

  // "c1,c2,...,ck" with the constant term omitted.
  static IntPolynomial parse(std::string_view literal);

  int degree() const { return static_cast<int>(coefficients_.size()); }
  const std::vector<BigInt>& coefficients() const { return coefficients_; }
  // Coefficient of n^j, zero past the degree; j >= 1.
  BigInt coefficient(int j) const;

  BigInt operator()(const BigInt& n) const;
  // Fast path for bounded arguments; throws if the value leaves int64.
  std::int64_t eval_i64(std::int64_t n) const;

  std::string literal() const;

 private:
  std::vector<BigInt> coefficients_;
};

class PolynomialFamily {
 public:
  explicit PolynomialFamily(std::vector<IntPolynomial> members);
  // Members separated by ';', e.g. "1,1;1,-1;2".
  static PolynomialFamily parse(std::string_view literal);

  const std::vector<IntPolynomial>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  const IntPolynomial& operator[](std::size_t i) const { return members_[i]; }
  // Largest member degree.
  int degree_bound() const { return degree_bound_; }
  bool equal_degree() const { return equal_degree_; }

  // Largest |P_i(n)| over all members and 1 <= n <= M.
  BigInt max_abs_value(std::int64_t M) const;
  std::string literal() const;

 private:
  std::vector<IntPolynomial> members_;
  int degree_bound_ = 0;
  bool equal_degree_ = true;
};

// Row-space analysis of the l x k matrix {c_ij}.
struct CoefficientMatrix {
  std::vector<std::vector<BigInt>> rows;
  std::size_t rank = 0;
  std::vector<std::size_t> independent_rows;   // lowest-index greedy choice
  std::vector<std::size_t> dependent_rows;     // in increasing order
  std::vector<std::vector<Rational>> dependency;  // (l - r) x r, row i of D
};

CoefficientMatrix coefficient_analysis(const PolynomialFamily& family);

// Exact evaluation of P(n); never overflows.
BigInt evaluate(const IntPolynomial& P, const BigInt& n);

// Outcome of choosing M = c (eps N)^(1/k).
struct ShiftRange {
  std::int64_t M = 0;
  std::int64_t formula_M = 0;   // floor(c (eps N)^(1/k)) before shrinking
  bool shrunk = false;          // c was too generous for |P_i(n)| <= eps N
  std::int64_t N = 0;
  double eps = 0.0;
  double c = 0.0;
};

// Throws ErrorCode::kPrecondition ("shift range empty") naming the smallest
// admissible N when no n >= 1 fits.
ShiftRange shift_range(const PolynomialFamily& family, std::int64_t N,
                       double eps, double c);

struct DifferenceIdentity {
  BigInt lhs;
  BigInt rhs;
  bool equal = false;
};

// sum_{t=0}^{j} (x + t d)^j C(j,t) (-1)^(j-t)  versus  j! d^j
DifferenceIdentity check_difference_identity(int j, const BigInt& x, const BigInt& d);

struct LiftResult {
  std::size_t k = 0;                  // ambient dimension of the lift
  std::int64_t half_width = 0;        // N'
  std::int64_t min_half_width = 0;    // smallest N' the construction accepts
  double width_multiple = 0.0;        // min_half_width / N
  CoefficientMatrix matrix;
  std::vector<std::size_t> pivot_columns;  // columns of the chosen r x r minor
  BigInt minor_determinant;
  std::vector<std::int64_t> s;        // offsets for the independent rows
  std::vector<std::int64_t> t;        // offsets for the dependent rows
  std::vector<std::int64_t> m;        // offset per family member (rows order)
  std::size_t first_stage_size = 0;   // |B'|
  std::vector<std::vector<std::int64_t>> points;  // B, lexicographic
  double density = 0.0;               // |B| / (2N'+1)^k
};

// B = { b in [-N', N']^k : P(b) in A^l - m } with s, t chosen by exhaustive
// argmax. half_width 0 picks the smallest accepted N'. Desk scale only:
// k <= 3 and N <= 200.
LiftResult lift_construction(const IntegerSet& A, const PolynomialFamily& family,
                             std::int64_t half_width,
                             std::uint64_t box_budget = 40'000'000);

struct LiftImplicationReport {
  std::size_t differences_checked = 0;  // n != 0 with (n,...,n^k) in B - B
  std::size_t violations = 0;
  std::vector<std::int64_t> witnesses;  // the n values found
};

// For every n != 0 with (n, n^2, ..., n^k) in B - B, checks that
// (P_1(n), ..., P_l(n)) lies in A^l - A^l.
LiftImplicationReport verify_lift_implication(const LiftResult& lift,
                                              const IntegerSet& A,
                                              const PolynomialFamily& family);

}  // namespace polyrec
