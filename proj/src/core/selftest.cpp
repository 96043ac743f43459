#include "polyrec/selftest.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "polyrec/ergodic_lab.hpp"
#include "polyrec/integer_set.hpp"
#include "polyrec/lattice_dioph.hpp"
#include "polyrec/polyfam.hpp"
#include "polyrec/random.hpp"
#include "polyrec/recurrence.hpp"
#include "polyrec/weyl_tarry.hpp"
#include "polyrec/zn_fourier.hpp"

namespace polyrec {

namespace {

ZnFunction random_function(std::size_t N, Rng& rng) {
  std::vector<Complex> v(N);
  for (auto& z : v) z = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
  return ZnFunction(std::move(v));
}

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(6);
  s << x;
  return s.str();
}

}  // namespace

std::vector<SelfCheck> run_selftest(const ExperimentConfig& config) {
  validate(config);
  const auto& tol = config.tolerances;
  std::vector<SelfCheck> out;
  auto check = [&](const std::string& name, const std::function<std::string(bool&)>& body) {
    SelfCheck c{name, false, ""};
    try {
      c.detail = body(c.passed);
    } catch (const std::exception& e) {
      c.passed = false;
      c.detail = std::string("exception: ") + e.what();
    }
    out.push_back(std::move(c));
  };

  check("fourier.plancherel_inversion", [&](bool& ok) {
    Rng rng(config.seed);
    double worst = 0.0;
    for (std::size_t N : {64u, 100u, 257u}) {
      const auto f = random_function(N, rng);
      const auto F = dft(f);
      worst = std::max(worst, std::abs(lp_norm(f, 2) - ellp_norm(F, 2)));
      const auto g = inverse_dft(F);
      worst = std::max(worst, lp_norm(g - f, kInfinity));
    }
    ok = worst <= tol.fourier;
    return "max error " + fmt(worst);
  });

  check("recurrence.evens_square", [&](bool& ok) {
    const auto A = even_set(1000);
    const auto rep = find_good_shifts(A, PolynomialFamily::parse("0,1"), 0.1, config.constants.c_shift);
    ok = !rep.good_shifts.empty();
    for (auto n : rep.good_shifts) ok = ok && n % 2 == 0;
    return "M = " + std::to_string(rep.range.M) + ", good = " + std::to_string(rep.good_shifts.size());
  });

  check("polyfam.difference_identity", [&](bool& ok) {
    ok = true;
    for (int j = 1; j <= 6; ++j) ok = ok && check_difference_identity(j, 7, -3).equal;
    return std::string("j = 1..6");
  });

  check("weyl.moment_identity", [&](bool& ok) {
    const IntPolynomial P{0, 1};
    const auto S = weyl_sum(P, 6, 17);
    const double m = moment_2K(S, 2);
    const double c = static_cast<double>(count_solutions_modN(P, 6, 17, 2)) * 17.0;
    ok = std::abs(m - c) <= tol.moment_relative * c;
    return "moment " + fmt(m) + " vs " + fmt(c);
  });

  check("tarry.small_counts", [&](bool& ok) {
    const auto a = tarry_count(2, 1, 2);
    const auto b = tarry_count(1, 2, 9);
    ok = a.count == 6 && b.count == 9;
    return "K=2,k=1,M=2 -> " + a.count.str() + "; K=1,M=9 -> " + b.count.str();
  });

  check("lattice.poisson", [&](bool& ok) {
    LatticeOptions opt;
    opt.tail = tol.theta_tail;
    opt.point_budget = config.budgets.lattice_points;
    const auto L = ProductLattice::scaled_integer(1.5, {1, 2});
    const auto r = a_lambda(L, tol.poisson, opt);
    ok = r.relative_gap() <= tol.poisson;
    return "relative gap " + fmt(r.relative_gap());
  });

  check("dioph.rational_period", [&](bool& ok) {
    const auto r = approx_oracle(PolynomialFamily::parse("1"), std::vector<Rational>{Rational(1, 5)},
                                 0.1, 1000);
    ok = r.good.size() == 200;
    return "density " + fmt(r.density);
  });

  check("ergodic.khintchine", [&](bool& ok) {
    const auto sys = FiniteMPSystem::random(200, config.seed);
    const auto A = Subset::random(200, 0.3, config.seed + 1);
    std::vector<std::int64_t> v;
    for (int i = 1; i <= 10; ++i) v.push_back(i);
    const auto r = khintchine_search(sys, A, 0.1, v);
    ok = r.found && r.measure >= r.threshold;
    return "pair (" + std::to_string(r.j) + "," + std::to_string(r.k) + ")";
  });

  check("ergodic.measure_preserving", [&](bool& ok) {
    const auto sys = FiniteMPSystem::skew(7, 3);
    ok = true;
    for (std::uint64_t s = 0; s < 10; ++s) {
      const auto E = Subset::random(sys.size(), 0.5, config.seed + s);
      ok = ok && preimage(sys, E).size() == E.size();
    }
    return std::string("10 random subsets of the skew product on Z_7^2");
  });

  return out;
}

}  // namespace polyrec
