#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "polyrec/numeric_types.hpp"
#include "polyrec/polyfam.hpp"

namespace polyrec {

// One factor Lambda_j of a product lattice. Rows of `basis` are the basis
// vectors; a 0 x 0 basis is the trivial lattice {0}.
struct LatticeBlock {
  Eigen::MatrixXd basis;
  Eigen::MatrixXd dual;  // rows are the dual basis, basis^{-T}
  double det = 1.0;      // |det basis|
  double condition = 1.0;

  std::size_t dim() const { return static_cast<std::size_t>(basis.rows()); }
};

class ProductLattice {
 public:
  explicit ProductLattice(std::vector<Eigen::MatrixXd> bases);
  // (R Z)^{d_j} in every block.
  static ProductLattice scaled_integer(double R, const std::vector<std::size_t>& dims);

  const std::vector<LatticeBlock>& blocks() const { return blocks_; }
  std::size_t block_count() const { return blocks_.size(); }
  std::size_t dimension() const;
  double determinant() const;
  ProductLattice dual() const;
  ProductLattice scaled(double factor) const;

 private:
  std::vector<LatticeBlock> blocks_;
};

// alpha = (alpha_1, ..., alpha_k) with alpha_j in R^{d_j}; block j is acted on
// by n^j in n∘alpha.
struct AlphaVector {
  std::vector<Eigen::VectorXd> blocks;

  static AlphaVector zeros(const ProductLattice& lattice);
  // (n alpha_1, n^2 alpha_2, ..., n^k alpha_k)
  AlphaVector acted(std::int64_t n) const;
  AlphaVector scaled(double factor) const;
};

enum class ThetaSide { kDirect, kDual };

struct LatticeOptions {
  double tail = 1e-12;                      // relative truncation target
  std::uint64_t point_budget = 5'000'000;   // per block enumeration
  unsigned threads = 1;
};

// Theta_Lambda(t, x) = sum_{m in Lambda} exp(-pi t |x - m|^2), or the Poisson
// dual series t^{-d/2} det^{-1} sum_{xi in Lambda*} exp(-pi |xi|^2 / t) e(xi.x).
// x is given per block.
double theta(const ProductLattice& lattice, double t, const AlphaVector& x, ThetaSide side,
             const LatticeOptions& options = {});

struct TwoSided {
  double direct = 0.0;
  double dual = 0.0;
  double value() const { return direct; }
  double relative_gap() const;
};

// det(Lambda) sum_{m in Lambda} e^{-pi |m|^2} and sum_{xi in Lambda*} e^{-pi |xi|^2}.
// Throws ErrorCode::kNumerical when they differ by more than `poisson_tol`.
TwoSided a_lambda(const ProductLattice& lattice, double poisson_tol = 1e-8,
                  const LatticeOptions& options = {});

// F(N) = det(Lambda) (1/N) sum_{n<=N} Theta_Lambda(1, n∘alpha); the dual form
// is evaluated when `with_dual` and compared at `agreement_tol`.
struct FLattice {
  double value = 0.0;
  std::optional<double> dual_value;
};
FLattice f_lattice(const ProductLattice& lattice, const AlphaVector& alpha, std::int64_t N,
                   bool with_dual = false, double agreement_tol = 1e-7,
                   const LatticeOptions& options = {});

// Theta_Lambda(1, n∘alpha) for n = 1..N (direct side).
std::vector<double> theta_orbit(const ProductLattice& lattice, const AlphaVector& alpha,
                                std::int64_t N, const LatticeOptions& options = {});

struct ApproxResult {
  std::vector<std::int64_t> good;
  double density = 0.0;
  std::size_t d = 0;               // k l m for families, sum d_j for vectors
  double reference_density = 0.0;  // (eps / d)^(C_k d^2)
};

// n in [1, N] with ||P_i(n) theta_i'|| < eps for every member i and target i'.
// Rational targets are evaluated exactly; doubles are taken as the exact
// dyadic rationals they represent.
ApproxResult approx_oracle(const PolynomialFamily& family, const std::vector<Rational>& theta,
                           double eps, std::int64_t N, double C_k = 1.0);
ApproxResult approx_oracle(const PolynomialFamily& family, const std::vector<double>& theta,
                           double eps, std::int64_t N, double C_k = 1.0);
// n in [1, N] with dist(n^j alpha_j, Z^{d_j}) < eps for every j.
ApproxResult approx_oracle_power(const AlphaVector& alpha, double eps, std::int64_t N,
                                 double C_k = 1.0);

struct AverageReport {
  double F_N = 0.0;
  std::int64_t cN = 0;      // floor(c N)
  double F_cN = 0.0;
  bool dilation_holds = false;   // F(N) >= (c/2) F(cN)
  std::int64_t Nq = 0;      // floor(N / q)
  double F_Nq = 0.0;
  bool subsample_holds = false;  // F(N) >= (1/2q) F(N/q)
  std::optional<double> perturbation_ratio;   // min_n Theta ratio, report only
  std::optional<bool> perturbation_in_range;  // |beta_i - alpha_i| <= eps N^-i
};

AverageReport average_inequalities(const ProductLattice& lattice, const AlphaVector& alpha,
                           std::int64_t N, double c, std::int64_t q,
                           const std::optional<AlphaVector>& beta = std::nullopt,
                           double eps = 0.0, const LatticeOptions& options = {});

struct SchmidtReport {
  double F = 0.0;
  bool alternative_one = false;   // F >= 1/2
  bool found = false;             // a candidate (q, xi) exists
  std::int64_t q = 0;
  std::vector<Eigen::VectorXd> xi;              // per block, cartesian
  std::vector<std::vector<std::int64_t>> xi_coords;  // per block, dual basis
  double quality = 0.0;           // max_i N^i ||q xi_i . alpha_i||
  bool beats_threshold = false;   // quality <= B
  std::uint64_t candidates = 0;
};

SchmidtReport schmidt_scan(const ProductLattice& lattice, const AlphaVector& alpha,
                           std::int64_t N, std::int64_t q_max, double radius_max, double B,
                           const LatticeOptions& options = {});

struct WeylDenominator {
  Complex S;                      // (1/N) sum e(n theta_1 + ... + n^k theta_k)
  double abs_S = 0.0;
  std::vector<double> thresholds;
  std::optional<std::int64_t> q;  // smallest q with ||q theta_i|| < B_i
};

// Thresholds default to delta^{-C} N^{-i} when `thresholds` is empty.
WeylDenominator weyl_denominator(const std::vector<double>& theta, std::int64_t N, double delta,
                                 std::int64_t q_max, double C,
                                 std::vector<double> thresholds = {});

}  // namespace polyrec
