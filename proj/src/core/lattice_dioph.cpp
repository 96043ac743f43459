#include "polyrec/lattice_dioph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "polyrec/error.hpp"
#include "polyrec/parallel.hpp"

namespace polyrec {

namespace {

constexpr double kMaxCondition = 1e12;

LatticeBlock make_block(Eigen::MatrixXd basis) {
  require(basis.rows() == basis.cols(), ErrorCode::kInvalidArgument,
          "lattice: each block basis must be square");
  LatticeBlock b;
  b.basis = std::move(basis);
  const auto d = b.basis.rows();
  if (d == 0) {
    b.dual = Eigen::MatrixXd(0, 0);
    return b;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(b.basis);
  const auto& sv = svd.singularValues();
  require(sv(d - 1) > 0.0 && std::isfinite(sv(0)), ErrorCode::kInvalidArgument,
          "lattice: block basis is singular");
  b.condition = sv(0) / sv(d - 1);
  require(b.condition < kMaxCondition, ErrorCode::kNumerical,
          "lattice: block basis is too ill-conditioned for enumeration");
  b.det = std::abs(b.basis.determinant());
  b.dual = b.basis.inverse().transpose();
  return b;
}

// Bound on the covering radius: half the root of the summed squared row norms.
double covering_bound(const Eigen::MatrixXd& rows) {
  return 0.5 * std::sqrt(rows.rowwise().squaredNorm().sum());
}

// Smallest R (on a fine grid) with
//   sum_{j>=0} #(points within R+j+1) exp(-pi s (R+j)^2) < target,
// counting points in a ball of radius r by vol(B_{r+mu}) / det.
double tail_radius(double s, std::size_t d, double mu, double det, double target) {
  const double dd = static_cast<double>(d);
  const double vol = std::pow(kPi, dd / 2.0) / std::tgamma(dd / 2.0 + 1.0);
  auto tail = [&](double R) {
    double total = 0.0;
    for (int j = 0; j < 100000; ++j) {
      const double r = R + j;
      const double w = std::exp(-kPi * s * r * r);
      const double term = vol * std::pow(r + 1.0 + mu, dd) / det * w;
      total += term;
      if (j > 2 && term < 1e-30 * target) break;
    }
    return total;
  };
  const double step = 0.05 / std::sqrt(s);
  double R = 0.0;
  while (tail(R) >= target) R += step;
  return R;
}

// Visits every point v = gen^T c (c in Z^d) with |v - center| <= radius.
// Depth-first over the coordinates of the triangular form gen^T = Q R, last
// coordinate first, each interval cut from the radius left over.
template <typename Visit>
void enumerate_ball(const Eigen::MatrixXd& gen, const Eigen::VectorXd& center, double radius,
                    std::uint64_t budget, Visit&& visit) {
  const auto d = gen.rows();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gen.transpose());
  const Eigen::MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
  const Eigen::VectorXd y = qr.householderQ().transpose() * center;
  const double r2 = radius * radius;
  const double slack = 1e-9 * (1.0 + r2);
  std::vector<std::int64_t> c(static_cast<std::size_t>(d));
  Eigen::VectorXd coords(d);
  std::uint64_t nodes = 0;
  auto level = [&](auto& self, Eigen::Index i, double left) -> void {
    double partial = 0.0;
    for (Eigen::Index k = i + 1; k < d; ++k) partial += R(i, k) * static_cast<double>(c[static_cast<std::size_t>(k)]);
    const double target = y(i) - partial;
    const double mid = target / R(i, i);
    const double half = std::sqrt(std::max(left, 0.0)) / std::abs(R(i, i));
    const auto lo = static_cast<std::int64_t>(std::ceil(mid - half - 1e-9));
    const auto hi = static_cast<std::int64_t>(std::floor(mid + half + 1e-9));
    for (std::int64_t v = lo; v <= hi; ++v) {
      const double diff = R(i, i) * static_cast<double>(v) - target;
      const double rest = left - diff * diff;
      if (rest < -slack) continue;
      require(++nodes <= budget, ErrorCode::kBudgetExceeded,
              "lattice: enumeration exceeds the point budget");
      c[static_cast<std::size_t>(i)] = v;
      if (i > 0) {
        self(self, i - 1, rest);
        continue;
      }
      for (Eigen::Index k = 0; k < d; ++k) coords(k) = static_cast<double>(c[static_cast<std::size_t>(k)]);
      const Eigen::VectorXd p = gen.transpose() * coords;
      if ((p - center).squaredNorm() <= r2) visit(p, c);
    }
  };
  if (d > 0) level(level, d - 1, r2);
}

// Reduced lattice coordinates in [-1/2, 1/2).
Eigen::VectorXd reduce_coords(Eigen::VectorXd u) {
  for (Eigen::Index i = 0; i < u.size(); ++i) u(i) -= std::nearbyint(u(i));
  return u;
}

// Theta of one block at the point basis^T u (u reduced coordinates).
double theta_block(const LatticeBlock& b, double t, const Eigen::VectorXd& u, ThetaSide side,
                   const LatticeOptions& opt) {
  const std::size_t d = b.dim();
  if (d == 0) return 1.0;
  const double mu = covering_bound(b.basis);
  const Eigen::VectorXd x = b.basis.transpose() * u;
  // the origin is a lattice point at distance |x|, so Theta >= exp(-pi t |x|^2)
  const double lower = std::max(std::exp(-kPi * t * x.squaredNorm()), 1e-280);
  if (side == ThetaSide::kDirect) {
    const double R = tail_radius(t, d, mu, b.det, opt.tail * lower);
    CompensatedSum acc;
    enumerate_ball(b.basis, x, R, opt.point_budget,
                   [&](const Eigen::VectorXd& v, const std::vector<std::int64_t>&) {
                     acc.add(std::exp(-kPi * t * (x - v).squaredNorm()));
                   });
    return acc.value();
  }
  const double scale = std::pow(t, static_cast<double>(d) / 2.0) * b.det;
  const double mu_dual = covering_bound(b.dual);
  const double R = tail_radius(1.0 / t, d, mu_dual, 1.0 / b.det, opt.tail * lower * scale);
  CompensatedSum acc;
  enumerate_ball(b.dual, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d)), R,
                 opt.point_budget,
                 [&](const Eigen::VectorXd& xi, const std::vector<std::int64_t>& c) {
                   // xi . x = c . u for xi = dual^T c and x = basis^T u
                   double phase = 0.0;
                   for (std::size_t i = 0; i < d; ++i)
                     phase += static_cast<double>(c[i]) * u(static_cast<Eigen::Index>(i));
                   acc.add(std::exp(-kPi * xi.squaredNorm() / t) * std::cos(kTwoPi * phase));
                 });
  return acc.value() / scale;
}

// Reduced coordinates of n^j alpha_j in every block.
std::vector<Eigen::VectorXd> orbit_coords(const ProductLattice& lattice,
                                          const std::vector<Eigen::VectorXd>& base_coords,
                                          std::int64_t n) {
  std::vector<Eigen::VectorXd> out;
  long double power = 1;
  for (std::size_t j = 0; j < lattice.block_count(); ++j) {
    power *= static_cast<long double>(n);
    Eigen::VectorXd u(base_coords[j].size());
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      const long double p = power * static_cast<long double>(base_coords[j](i));
      u(i) = static_cast<double>(p - std::nearbyint(p));
    }
    out.push_back(std::move(u));
  }
  return out;
}

std::vector<Eigen::VectorXd> lattice_coords(const ProductLattice& lattice, const AlphaVector& x) {
  require(x.blocks.size() == lattice.block_count(), ErrorCode::kInvalidArgument,
          "lattice: point has the wrong number of blocks");
  std::vector<Eigen::VectorXd> out;
  for (std::size_t j = 0; j < lattice.block_count(); ++j) {
    const auto& b = lattice.blocks()[j];
    require(static_cast<std::size_t>(x.blocks[j].size()) == b.dim(), ErrorCode::kInvalidArgument,
            "lattice: block dimension mismatch");
    out.push_back(b.dim() == 0 ? Eigen::VectorXd() : Eigen::VectorXd(b.dual * x.blocks[j]));
  }
  return out;
}

double theta_product(const ProductLattice& lattice, double t,
                     const std::vector<Eigen::VectorXd>& coords, ThetaSide side,
                     const LatticeOptions& opt) {
  double v = 1.0;
  for (std::size_t j = 0; j < lattice.block_count(); ++j)
    v *= theta_block(lattice.blocks()[j], t, reduce_coords(coords[j]), side, opt);
  return v;
}

std::vector<double> orbit_values(const ProductLattice& lattice, const AlphaVector& alpha,
                                 std::int64_t N, ThetaSide side, const LatticeOptions& opt) {
  const auto base = lattice_coords(lattice, alpha);
  std::vector<double> vals(static_cast<std::size_t>(N));
  parallel_for(static_cast<std::size_t>(N), opt.threads, [&](std::size_t i) {
    const auto coords = orbit_coords(lattice, base, static_cast<std::int64_t>(i) + 1);
    vals[i] = theta_product(lattice, 1.0, coords, side, opt);
  });
  return vals;
}

double average(const std::vector<double>& v, std::size_t count) {
  CompensatedSum acc;
  for (std::size_t i = 0; i < count; ++i) acc.add(v[i]);
  return acc.value() / static_cast<double>(count);
}

// Fractional part of m * theta in [0, 1), exact before the final rounding.
Rational frac_product(const BigInt& m, const Rational& theta) {
  const BigInt num = m * boost::multiprecision::numerator(theta);
  const BigInt den = boost::multiprecision::denominator(theta);
  BigInt r = num % den;
  if (r < 0) r += den;
  return Rational(r, den);
}

Rational nearest_distance(const Rational& frac) {
  const Rational other = Rational(1) - frac;
  return frac < other ? frac : other;
}

}  // namespace

ProductLattice::ProductLattice(std::vector<Eigen::MatrixXd> bases) {
  require(!bases.empty(), ErrorCode::kInvalidArgument, "lattice: at least one block required");
  for (auto& b : bases) blocks_.push_back(make_block(std::move(b)));
}

ProductLattice ProductLattice::scaled_integer(double R, const std::vector<std::size_t>& dims) {
  require(R > 0.0, ErrorCode::kInvalidArgument, "lattice: scale must be positive");
  std::vector<Eigen::MatrixXd> bases;
  for (auto d : dims) {
    const auto n = static_cast<Eigen::Index>(d);
    bases.push_back(R * Eigen::MatrixXd::Identity(n, n));
  }
  return ProductLattice(std::move(bases));
}

std::size_t ProductLattice::dimension() const {
  std::size_t d = 0;
  for (const auto& b : blocks_) d += b.dim();
  return d;
}

double ProductLattice::determinant() const {
  double d = 1.0;
  for (const auto& b : blocks_) d *= b.det;
  return d;
}

ProductLattice ProductLattice::dual() const {
  std::vector<Eigen::MatrixXd> bases;
  for (const auto& b : blocks_) bases.push_back(b.dual);
  return ProductLattice(std::move(bases));
}

ProductLattice ProductLattice::scaled(double factor) const {
  std::vector<Eigen::MatrixXd> bases;
  for (const auto& b : blocks_) bases.push_back(factor * b.basis);
  return ProductLattice(std::move(bases));
}

AlphaVector AlphaVector::zeros(const ProductLattice& lattice) {
  AlphaVector a;
  for (const auto& b : lattice.blocks())
    a.blocks.push_back(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(b.dim())));
  return a;
}

AlphaVector AlphaVector::acted(std::int64_t n) const {
  AlphaVector a;
  double power = 1.0;
  for (const auto& v : blocks) {
    power *= static_cast<double>(n);
    a.blocks.push_back(power * v);
  }
  return a;
}

AlphaVector AlphaVector::scaled(double factor) const {
  AlphaVector a;
  for (const auto& v : blocks) a.blocks.push_back(factor * v);
  return a;
}

double TwoSided::relative_gap() const {
  return std::abs(direct - dual) / std::max(std::abs(direct), std::abs(dual));
}

double theta(const ProductLattice& lattice, double t, const AlphaVector& x, ThetaSide side,
             const LatticeOptions& options) {
  require(t > 0.0, ErrorCode::kInvalidArgument, "theta: t must be positive");
  return theta_product(lattice, t, lattice_coords(lattice, x), side, options);
}

TwoSided a_lambda(const ProductLattice& lattice, double poisson_tol,
                  const LatticeOptions& options) {
  const auto zero = AlphaVector::zeros(lattice);
  const double det = lattice.determinant();
  TwoSided out;
  out.direct = det * theta(lattice, 1.0, zero, ThetaSide::kDirect, options);
  out.dual = det * theta(lattice, 1.0, zero, ThetaSide::kDual, options);
  require(out.relative_gap() <= poisson_tol, ErrorCode::kNumerical,
          "a_lambda: direct and dual sums disagree");
  return out;
}

std::vector<double> theta_orbit(const ProductLattice& lattice, const AlphaVector& alpha,
                                std::int64_t N, const LatticeOptions& options) {
  require(N >= 1, ErrorCode::kInvalidArgument, "theta_orbit: N must be >= 1");
  return orbit_values(lattice, alpha, N, ThetaSide::kDirect, options);
}

FLattice f_lattice(const ProductLattice& lattice, const AlphaVector& alpha, std::int64_t N,
                   bool with_dual, double agreement_tol, const LatticeOptions& options) {
  require(N >= 1, ErrorCode::kInvalidArgument, "f_lattice: N must be >= 1");
  const double det = lattice.determinant();
  FLattice out;
  const auto direct = orbit_values(lattice, alpha, N, ThetaSide::kDirect, options);
  out.value = det * average(direct, direct.size());
  if (with_dual) {
    const auto dual = orbit_values(lattice, alpha, N, ThetaSide::kDual, options);
    out.dual_value = det * average(dual, dual.size());
    const double gap = std::abs(out.value - *out.dual_value) /
                       std::max(std::abs(out.value), std::abs(*out.dual_value));
    require(gap <= agreement_tol, ErrorCode::kNumerical,
            "f_lattice: direct and dual forms disagree");
  }
  return out;
}

ApproxResult approx_oracle(const PolynomialFamily& family, const std::vector<Rational>& theta,
                           double eps, std::int64_t N, double C_k) {
  require(eps > 0.0 && eps <= 0.5, ErrorCode::kInvalidArgument,
          "approx_oracle: eps must lie in (0, 1/2]");
  require(N >= 1 && !theta.empty(), ErrorCode::kInvalidArgument,
          "approx_oracle: need N >= 1 and at least one target");
  const Rational e = exact_rational(eps);
  ApproxResult out;
  for (std::int64_t n = 1; n <= N; ++n) {
    bool ok = true;
    for (std::size_t i = 0; i < family.size() && ok; ++i) {
      const BigInt v = family[i](n);
      for (std::size_t q = 0; q < theta.size() && ok; ++q)
        ok = nearest_distance(frac_product(v, theta[q])) < e;
    }
    if (ok) out.good.push_back(n);
  }
  out.density = static_cast<double>(out.good.size()) / static_cast<double>(N);
  out.d = static_cast<std::size_t>(family.degree_bound()) * family.size() * theta.size();
  const double d = static_cast<double>(out.d);
  out.reference_density = std::pow(eps / d, C_k * d * d);
  return out;
}

ApproxResult approx_oracle(const PolynomialFamily& family, const std::vector<double>& theta,
                           double eps, std::int64_t N, double C_k) {
  std::vector<Rational> exact;
  for (double t : theta) {
    require(std::isfinite(t), ErrorCode::kInvalidArgument, "approx_oracle: non-finite target");
    exact.push_back(exact_rational(t));
  }
  return approx_oracle(family, exact, eps, N, C_k);
}

ApproxResult approx_oracle_power(const AlphaVector& alpha, double eps, std::int64_t N,
                                 double C_k) {
  require(eps > 0.0 && eps <= 0.5, ErrorCode::kInvalidArgument,
          "approx_oracle: eps must lie in (0, 1/2]");
  require(N >= 1, ErrorCode::kInvalidArgument, "approx_oracle: N must be >= 1");
  std::vector<std::vector<Rational>> a;
  std::size_t d = 0;
  for (const auto& v : alpha.blocks) {
    std::vector<Rational> r;
    for (Eigen::Index i = 0; i < v.size(); ++i) r.push_back(exact_rational(v(i)));
    d += r.size();
    a.push_back(std::move(r));
  }
  const Rational e2 = exact_rational(eps) * exact_rational(eps);
  ApproxResult out;
  for (std::int64_t n = 1; n <= N; ++n) {
    bool ok = true;
    BigInt power = 1;
    for (std::size_t j = 0; j < a.size() && ok; ++j) {
      power *= n;
      Rational dist2 = 0;
      for (const auto& x : a[j]) {
        const Rational dx = nearest_distance(frac_product(power, x));
        dist2 += dx * dx;
      }
      ok = dist2 < e2;
    }
    if (ok) out.good.push_back(n);
  }
  out.density = static_cast<double>(out.good.size()) / static_cast<double>(N);
  out.d = d;
  const double dd = static_cast<double>(std::max<std::size_t>(d, 1));
  out.reference_density = std::pow(eps / dd, C_k * dd * dd);
  return out;
}

AverageReport average_inequalities(const ProductLattice& lattice, const AlphaVector& alpha,
                           std::int64_t N, double c, std::int64_t q,
                           const std::optional<AlphaVector>& beta, double eps,
                           const LatticeOptions& options) {
  require(N > 20, ErrorCode::kPrecondition, "average_inequalities: requires N > 20");
  require(c > 0.1 && c < 1.0, ErrorCode::kPrecondition, "average_inequalities: c must lie in (1/10, 1)");
  require(q >= 1 && 2 * q <= N, ErrorCode::kPrecondition, "average_inequalities: need 1 <= q <= N/2");
  const double det = lattice.determinant();
  const auto orbit = theta_orbit(lattice, alpha, N, options);
  auto F = [&](std::int64_t m) { return det * average(orbit, static_cast<std::size_t>(m)); };

  AverageReport rep;
  rep.F_N = F(N);
  rep.cN = static_cast<std::int64_t>(std::floor(c * static_cast<double>(N)));
  rep.F_cN = F(rep.cN);
  rep.dilation_holds = rep.F_N >= (c / 2.0) * rep.F_cN;
  rep.Nq = N / q;
  rep.F_Nq = F(rep.Nq);
  rep.subsample_holds = rep.F_N >= rep.F_Nq / (2.0 * static_cast<double>(q));

  if (beta) {
    require(eps > 0.0, ErrorCode::kInvalidArgument, "average_inequalities: eps must be positive");
    bool in_range = true;
    for (std::size_t j = 0; j < alpha.blocks.size(); ++j)
      in_range = in_range && (beta->blocks[j] - alpha.blocks[j]).norm() <=
                                 eps * std::pow(static_cast<double>(N), -static_cast<double>(j + 1));
    rep.perturbation_in_range = in_range;
    const auto stretched = lattice.scaled(1.0 + eps);
    const auto other = theta_orbit(stretched, beta->scaled(1.0 + eps), N, options);
    double ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < orbit.size(); ++i) ratio = std::min(ratio, orbit[i] / other[i]);
    rep.perturbation_ratio = ratio;
  }
  return rep;
}

SchmidtReport schmidt_scan(const ProductLattice& lattice, const AlphaVector& alpha,
                           std::int64_t N, std::int64_t q_max, double radius_max, double B,
                           const LatticeOptions& options) {
  require(N >= 1 && q_max >= 1 && radius_max > 0.0, ErrorCode::kInvalidArgument,
          "schmidt_scan: need N, q_max >= 1 and a positive radius");
  SchmidtReport rep;
  rep.F = f_lattice(lattice, alpha, N, false, 1e-7, options).value;
  rep.alternative_one = rep.F >= 0.5;

  struct Candidate {
    std::vector<std::int64_t> coords;
    Eigen::VectorXd xi;
    double dot = 0.0;
  };
  std::vector<std::vector<Candidate>> per_block(lattice.block_count());
  std::uint64_t total = 0;
  for (std::size_t j = 0; j < lattice.block_count(); ++j) {
    const auto& b = lattice.blocks()[j];
    if (b.dim() == 0) continue;
    enumerate_ball(b.dual, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(b.dim())),
                   radius_max, options.point_budget,
                   [&](const Eigen::VectorXd& xi, const std::vector<std::int64_t>& c) {
                     std::int64_t g = 0;
                     for (auto x : c) g = std::gcd(g, x);
                     if (g != 1) return;  // zero or imprimitive
                     const auto first = std::find_if(c.begin(), c.end(), [](auto x) { return x != 0; });
                     if (*first < 0) return;  // one representative per +-xi
                     per_block[j].push_back({c, xi, xi.dot(alpha.blocks[j])});
                   });
    std::stable_sort(per_block[j].begin(), per_block[j].end(),
                     [](const Candidate& a, const Candidate& c) {
                       return a.xi.squaredNorm() < c.xi.squaredNorm();
                     });
    total += per_block[j].size();
  }
  require(static_cast<long double>(total) * static_cast<long double>(q_max) <=
              static_cast<long double>(options.point_budget) * 20,
          ErrorCode::kBudgetExceeded, "schmidt_scan: enumeration budget exceeded");

  double best = std::numeric_limits<double>::infinity();
  for (std::int64_t q = 1; q <= q_max; ++q) {
    double quality = 0.0;
    bool any = false;
    std::vector<std::size_t> pick(lattice.block_count(), 0);
    bool empty_block = false;
    for (std::size_t j = 0; j < lattice.block_count(); ++j) {
      if (lattice.blocks()[j].dim() == 0) continue;
      if (per_block[j].empty()) {
        empty_block = true;
        break;
      }
      double block_best = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < per_block[j].size(); ++c) {
        const long double prod = static_cast<long double>(q) * per_block[j][c].dot;
        const double dist = static_cast<double>(std::abs(prod - std::nearbyint(prod)));
        if (dist < block_best) {
          block_best = dist;
          pick[j] = c;
        }
      }
      quality = std::max(quality, std::pow(static_cast<double>(N), static_cast<double>(j + 1)) * block_best);
      any = true;
    }
    if (empty_block || !any) break;
    rep.candidates += total;
    if (quality < best) {
      best = quality;
      rep.found = true;
      rep.q = q;
      rep.quality = quality;
      rep.xi.clear();
      rep.xi_coords.clear();
      for (std::size_t j = 0; j < lattice.block_count(); ++j) {
        if (lattice.blocks()[j].dim() == 0) {
          rep.xi.emplace_back();
          rep.xi_coords.emplace_back();
        } else {
          rep.xi.push_back(per_block[j][pick[j]].xi);
          rep.xi_coords.push_back(per_block[j][pick[j]].coords);
        }
      }
    }
  }
  rep.beats_threshold = rep.found && rep.quality <= B;
  return rep;
}

WeylDenominator weyl_denominator(const std::vector<double>& theta, std::int64_t N, double delta,
                                 std::int64_t q_max, double C, std::vector<double> thresholds) {
  require(!theta.empty() && N >= 1 && q_max >= 1, ErrorCode::kInvalidArgument,
          "weyl_denominator: need k >= 1, N >= 1, q_max >= 1");
  require(delta > 0.0 && delta <= 0.5, ErrorCode::kInvalidArgument,
          "weyl_denominator: delta must lie in (0, 1/2]");
  const std::size_t k = theta.size();
  std::vector<Rational> t;
  for (double x : theta) t.push_back(exact_rational(x));

  WeylDenominator out;
  CompensatedSum re, im;
  for (std::int64_t n = 1; n <= N; ++n) {
    Rational phase = 0;
    BigInt power = 1;
    for (std::size_t i = 0; i < k; ++i) {
      power *= n;
      phase += frac_product(power, t[i]);
    }
    const Complex z = unit_phase(static_cast<double>(frac_product(1, phase)));
    re.add(z.real());
    im.add(z.imag());
  }
  out.S = Complex(re.value(), im.value()) / static_cast<double>(N);
  out.abs_S = std::abs(out.S);

  if (thresholds.empty()) {
    for (std::size_t i = 1; i <= k; ++i)
      thresholds.push_back(std::pow(delta, -C) *
                           std::pow(static_cast<double>(N), -static_cast<double>(i)));
  }
  require(thresholds.size() == k, ErrorCode::kInvalidArgument,
          "weyl_denominator: need one threshold per coefficient");
  out.thresholds = thresholds;
  for (std::int64_t q = 1; q <= q_max && !out.q; ++q) {
    bool ok = true;
    for (std::size_t i = 0; i < k && ok; ++i)
      ok = nearest_distance(frac_product(q, t[i])) < exact_rational(thresholds[i]);
    if (ok) out.q = q;
  }
  return out;
}

}  // namespace polyrec
