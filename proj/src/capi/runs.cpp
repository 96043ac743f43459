#include "runs.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <sstream>

#include "polyrec/ergodic_lab.hpp"
#include "polyrec/error.hpp"
#include "polyrec/integer_set.hpp"
#include "polyrec/lattice_dioph.hpp"
#include "polyrec/polyfam.hpp"
#include "polyrec/random.hpp"
#include "polyrec/recurrence.hpp"
#include "polyrec/selftest.hpp"
#include "polyrec/weyl_tarry.hpp"
#include "polyrec/zn_fourier.hpp"

namespace polyrec::capi {

namespace {

constexpr const char* kSchema = "polyrec-report/1";

// Typed access to the argument object; every key read is echoed into the
// report and unread keys are rejected.
class Args {
 public:
  explicit Args(const nlohmann::json& j) : j_(j.is_null() ? nlohmann::json::object() : j) {
    require(j_.is_object(), ErrorCode::kInvalidArgument, "args: expected a JSON object");
  }

  template <typename T>
  T get(const std::string& key, T fallback) {
    used_.insert(key);
    T v = std::move(fallback);
    if (j_.contains(key) && !j_.at(key).is_null()) {
      try {
        v = j_.at(key).get<T>();
      } catch (const nlohmann::json::exception&) {
        fail(ErrorCode::kInvalidArgument, "args: field '" + key + "' has the wrong type");
      }
    }
    echo[key] = v;
    return v;
  }

  bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }

  const nlohmann::json& raw(const std::string& key) {
    used_.insert(key);
    echo[key] = j_.at(key);
    return j_.at(key);
  }

  void finish() const {
    for (const auto& [key, value] : j_.items())
      require(used_.count(key) > 0, ErrorCode::kInvalidArgument,
              "args: unknown field '" + key + "'");
  }

  Json echo = Json::object();

 private:
  nlohmann::json j_;
  std::set<std::string> used_;
};

struct Assertions {
  Json list = Json::array();
  bool all = true;
  void add(const std::string& name, bool passed, const std::string& detail = "") {
    list.push_back({{"name", name}, {"passed", passed}, {"detail", detail}});
    all = all && passed;
  }
};

std::string rational_string(const Rational& r) {
  std::ostringstream os;
  os << boost::multiprecision::numerator(r) << "/" << boost::multiprecision::denominator(r);
  return os.str();
}

Json rational_json(const Rational& r) {
  return {{"exact", rational_string(r)}, {"value", static_cast<double>(r)}};
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

std::int64_t to_int(const std::string& raw, const std::string& field) {
  const std::string s = trim(raw);
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  require(!s.empty() && used == s.size(), ErrorCode::kInvalidArgument,
          "args: field '" + field + "' has a bad integer '" + s + "'");
  return v;
}

double to_double(const std::string& raw, const std::string& field) {
  const std::string s = trim(raw);
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  require(!s.empty() && used == s.size(), ErrorCode::kInvalidArgument,
          "args: field '" + field + "' has a bad number '" + s + "'");
  return v;
}

// "p/q" exactly, otherwise the decimal read as a double.
Rational to_rational(const std::string& raw, const std::string& field) {
  const std::string s = trim(raw);
  const auto slash = s.find('/');
  if (slash == std::string::npos) return exact_rational(to_double(s, field));
  const auto p = to_int(s.substr(0, slash), field);
  const auto q = to_int(s.substr(slash + 1), field);
  require(q != 0, ErrorCode::kInvalidArgument, "args: field '" + field + "' divides by zero");
  return Rational(p, q);
}

// "1..10", "1,4,9" or a mix.
std::vector<std::int64_t> int_list(const std::string& s, const std::string& field) {
  std::vector<std::int64_t> out;
  for (const auto& tok : split(s, ',')) {
    const auto dots = tok.find("..");
    if (dots == std::string::npos) {
      out.push_back(to_int(tok, field));
      continue;
    }
    const auto a = to_int(tok.substr(0, dots), field);
    const auto b = to_int(tok.substr(dots + 2), field);
    require(b >= a && b - a <= 10'000'000, ErrorCode::kInvalidArgument,
            "args: field '" + field + "' has a bad range");
    for (auto x = a; x <= b; ++x) out.push_back(x);
  }
  return out;
}

std::vector<double> double_list(const std::string& s, const std::string& field) {
  std::vector<double> out;
  for (const auto& tok : split(s, ','))
    out.push_back(static_cast<double>(to_rational(tok, field)));
  return out;
}

IntegerSet make_set(Args& a, std::int64_t N, std::uint64_t seed, const std::string& fallback) {
  const auto kind = a.get<std::string>("set", fallback);
  if (kind == "full") return full_set(N);
  if (kind == "even" || kind == "evens") return even_set(N);
  if (kind == "ap") {
    const auto start = a.get<std::int64_t>("start", 1);
    const auto step = a.get<std::int64_t>("step", 1);
    return progression_set(N, start, step);
  }
  if (kind == "random") {
    const auto density = a.get<double>("density", 0.5);
    return random_set(N, density, a.get<std::uint64_t>("seed", seed));
  }
  if (kind == "list") {
    const auto elems = int_list(a.get<std::string>("elements", ""), "elements");
    return IntegerSet(N, elems);
  }
  fail(ErrorCode::kInvalidArgument, "args: field 'set' must be full, evens, ap, random or list");
}

Json int_array(const std::vector<std::int64_t>& v) {
  Json j = Json::array();
  for (auto x : v) j.push_back(x);
  return j;
}

std::string csv_double(double x) {
  if (std::isnan(x)) return "nan";
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

// ---- search -------------------------------------------------------------

Json run_search(Args& a, const ExperimentConfig& cfg, Assertions& checks, std::string& csv) {
  const auto N = a.get<std::int64_t>("N", 10000);
  const auto A = make_set(a, N, cfg.seed, "evens");
  const auto family = PolynomialFamily::parse(a.get<std::string>("poly", "0,1"));
  const auto eps = a.get<double>("eps", 0.1);
  const auto c = a.get<double>("c", cfg.constants.c_shift);
  const auto permissive = a.get<bool>("permissive", false);
  const auto uniform = a.get<bool>("uniform", false);

  const auto rep = find_good_shifts(A, family, eps, c, permissive);
  Json r;
  r["set_size"] = A.size();
  r["density"] = A.density();
  r["M"] = rep.range.M;
  r["formula_M"] = rep.range.formula_M;
  r["range_shrunk"] = rep.range.shrunk;
  r["within_hypotheses"] = rep.within_hypotheses;
  r["good_count"] = rep.good_shifts.size();
  r["density_of_good"] = rep.density_of_good;
  r["good_shifts"] = int_array(rep.good_shifts);

  // Recount every shift by direct membership tests.
  const Rational threshold = Rational(static_cast<std::int64_t>(A.size() * A.size()), N * N) -
                             exact_rational(eps);
  std::vector<std::int64_t> direct_good;
  std::ostringstream table;
  table << "n";
  for (std::size_t i = 0; i < family.size(); ++i) table << ",count_" << i + 1;
  table << ",good\n";
  bool counts_match = true;
  for (std::int64_t n = 1; n <= rep.range.M; ++n) {
    bool good = true;
    table << n;
    for (std::size_t i = 0; i < family.size(); ++i) {
      const auto p = family[i].eval_i64(n);
      std::int64_t count = 0;
      for (auto x : A.elements())
        if (A.contains(x - p)) ++count;
      counts_match = counts_match && count == rep.profile.counts[i][static_cast<std::size_t>(n - 1)];
      good = good && Rational(count, N) > threshold;
      table << "," << count;
    }
    if (good) direct_good.push_back(n);
    table << "," << (good ? 1 : 0) << "\n";
  }
  csv = table.str();
  checks.add("profile_matches_direct_count", counts_match);
  checks.add("good_shifts_match_direct_check", direct_good == rep.good_shifts,
             std::to_string(direct_good.size()) + " shifts by direct check");

  if (uniform) {
    const auto K = a.get<int>("K", cfg.constants.K);
    const auto cert = uniform_certificate(A, family, eps, K, cfg.constants.C1, c);
    r["uniform"] = {{"eta", cert.eta},           {"delta", cert.delta},
                    {"counted", cert.counted},   {"fraction", cert.fraction},
                    {"predicted_lower", cert.predicted_lower},
                    {"bound_holds", cert.bound_holds}};
  }
  return r;
}

// ---- decompose ----------------------------------------------------------

Json run_decompose(Args& a, const ExperimentConfig& cfg, Assertions& checks, std::string& csv) {
  const auto N = a.get<std::int64_t>("N", 4096);
  const auto A = make_set(a, N, cfg.seed, "random");
  const auto eps = a.get<double>("eps", 0.1);
  const auto kind = a.get<std::string>("schedule", "reciprocal");
  EtaSchedule eta = EtaSchedule::experimental(eps);
  if (kind == "reciprocal") {
    eta = EtaSchedule::reciprocal(a.get<double>("scale", 0.1));
  } else if (kind == "reference") {
    eta = EtaSchedule::reference(eps, a.get<std::size_t>("l", 1), cfg.constants.C1,
                                 cfg.constants.C_kl, cfg.constants.K);
  } else {
    require(kind == "experimental", ErrorCode::kInvalidArgument,
            "args: field 'schedule' must be experimental, reciprocal or reference");
  }

  const auto f = balanced_function(A);
  const auto d = decompose(f, eps, eta);
  const double recon = lp_norm(d.f1 + d.f2 + d.f3 - f, kInfinity);
  const auto r_bound = static_cast<std::size_t>(std::ceil(1.0 / (eps * eps)));

  Json r;
  r["set_size"] = A.size();
  r["m"] = d.m;
  r["r"] = d.r;
  r["next_m"] = d.next_m;
  r["schedule"] = d.schedule;
  r["support"] = d.support;
  r["eta_of_m"] = d.eta_of_m;
  r["log_eta_of_m"] = d.log_eta_of_m;
  r["f1_norm"] = lp_norm(d.f1, 2);
  r["f2_sup"] = d.f2_sup;
  r["f3_norm"] = d.f3_norm;
  r["reconstruction_error"] = recon;

  checks.add("reconstruction", recon <= cfg.tolerances.decomposition, csv_double(recon));
  checks.add("f2_uniform", d.f2_sup <= d.eta_of_m * (1 + 1e-12) + 1e-15,
             csv_double(d.f2_sup) + " <= " + csv_double(d.eta_of_m));
  checks.add("f3_small", d.f3_norm <= eps, csv_double(d.f3_norm));
  checks.add("iteration_bound", d.r <= r_bound,
             std::to_string(d.r) + " <= " + std::to_string(r_bound));

  const auto spec = dft(f);
  std::ostringstream table;
  table << "rank,xi,abs_coefficient,part\n";
  for (std::size_t j = 0; j < d.order.size(); ++j) {
    const char* part = j < d.m ? "f1" : (j < d.next_m ? "f3" : "f2");
    table << j + 1 << "," << d.order[j] << "," << csv_double(std::abs(spec[d.order[j]])) << ","
          << part << "\n";
  }
  csv = table.str();
  return r;
}

// ---- weyl ---------------------------------------------------------------

Json run_weyl(Args& a, const ExperimentConfig& cfg, Assertions& checks, std::string& csv) {
  const auto P = IntPolynomial::parse(a.get<std::string>("poly", "0,1"));
  const auto M = a.get<std::int64_t>("M", 10);
  const auto N = a.get<std::int64_t>("N", 101);
  const auto K = a.get<int>("K", 2);
  const auto weights_kind = a.get<std::string>("weights", "ones");
  require(weights_kind == "ones" || weights_kind == "random", ErrorCode::kInvalidArgument,
          "args: field 'weights' must be ones or random");
  const auto seed = a.get<std::uint64_t>("seed", cfg.seed);
  std::vector<int> w(static_cast<std::size_t>(std::max<std::int64_t>(M, 0)), 1);
  if (weights_kind == "random") {
    Rng rng(seed);
    for (auto& x : w) x = rng.bernoulli(0.5) ? 1 : -1;
  }
  const auto S = weyl_sum(P, M, w, N);
  const double moment = moment_2K(S, K);
  const BigInt count = count_solutions_modN(P, M, N, K);
  const double bound = static_cast<double>(count) * static_cast<double>(N);

  Json r;
  r["moment"] = moment;
  r["count_mod_N"] = count.str();
  r["N_times_count"] = bound;
  if (weights_kind == "ones") {
    const double gap = std::abs(moment - bound) / bound;
    r["relative_gap"] = gap;
    checks.add("moment_identity", gap <= cfg.tolerances.moment_relative, csv_double(gap));
  } else {
    checks.add("moment_inequality", moment <= bound * (1 + cfg.tolerances.moment_relative),
               csv_double(moment) + " <= " + csv_double(bound));
  }
  // Without wrap-around the congruence count is the count over Z.
  const BigInt reach = BigInt(K) * PolynomialFamily(std::vector<IntPolynomial>{P}).max_abs_value(M);
  if (reach < N) {
    const auto over_z = tarry_count_poly(P, K, M, TarryMethod::kAuto,
                                         {cfg.budgets.signature_cells, cfg.budgets.hash_tuples});
    r["count_over_Z"] = over_z.count.str();
    checks.add("no_wrap_agreement", over_z.count == count);
  }
  std::ostringstream table;
  table << "xi,re,im,abs\n";
  for (std::size_t xi = 0; xi < S.values.size(); ++xi)
    table << xi << "," << csv_double(S.values[xi].real()) << "," << csv_double(S.values[xi].imag())
          << "," << csv_double(std::abs(S.values[xi])) << "\n";
  csv = table.str();
  return r;
}

// ---- tarry --------------------------------------------------------------

BigInt naive_tarry(int K, int k, std::int64_t M, const std::optional<IntPolynomial>& P) {
  const std::size_t n = static_cast<std::size_t>(2 * K);
  std::vector<std::int64_t> x(n, 1);
  BigInt count = 0;
  while (true) {
    bool ok = true;
    if (P) {
      std::int64_t s = 0;
      for (std::size_t i = 0; i < n; ++i) s += (i < n / 2 ? 1 : -1) * P->eval_i64(x[i]);
      ok = s == 0;
    } else {
      for (int e = 1; e <= k && ok; ++e) {
        std::int64_t s = 0;
        for (std::size_t i = 0; i < n; ++i) {
          std::int64_t p = 1;
          for (int t = 0; t < e; ++t) p *= x[i];
          s += (i < n / 2 ? 1 : -1) * p;
        }
        ok = s == 0;
      }
    }
    if (ok) ++count;
    std::size_t j = n;
    while (j > 0 && x[j - 1] == M) x[--j] = 1;
    if (j == 0) break;
    ++x[j - 1];
  }
  return count;
}

TarryMethod parse_method(const std::string& s) {
  if (s == "auto") return TarryMethod::kAuto;
  if (s == "convolution") return TarryMethod::kConvolution;
  if (s == "meet-in-the-middle" || s == "mitm") return TarryMethod::kMeetInTheMiddle;
  fail(ErrorCode::kInvalidArgument,
       "args: field 'method' must be auto, convolution or meet-in-the-middle");
}

Json run_tarry(Args& a, const ExperimentConfig& cfg, Assertions& checks, std::string& csv) {
  const auto K = a.get<int>("K", 2);
  const auto k = a.get<int>("k", 1);
  const auto M = a.get<std::int64_t>("M", 2);
  const auto method = parse_method(a.get<std::string>("method", "auto"));
  const auto poly = a.get<std::string>("poly", "");
  const auto probe = a.get<std::string>("probe", "");
  const TarryBudget budget{cfg.budgets.signature_cells, cfg.budgets.hash_tuples};

  std::optional<IntPolynomial> P;
  if (!poly.empty()) P = IntPolynomial::parse(poly);
  const auto t = P ? tarry_count_poly(*P, K, M, method, budget) : tarry_count(K, k, M, method, budget);
  Json r;
  r["count"] = t.count.str();
  r["method"] = to_string(t.method);
  if (std::pow(static_cast<double>(M), 2.0 * K) <= 1e6) {
    const auto naive = naive_tarry(K, k, M, P);
    r["naive_count"] = naive.str();
    checks.add("naive_agreement", naive == t.count);
  }
  if (!probe.empty()) {
    const auto g = growth_probe(K, k, int_list(probe, "probe"), budget);
    Json rows = Json::array();
    for (const auto& row : g.rows)
      rows.push_back({{"M", row.M}, {"count", row.count.str()}, {"log_count", row.log_count}});
    r["probe"] = {{"rows", rows},
                  {"overall_slope", g.overall_slope},
                  {"theory_exponent", g.theory_exponent}};
    csv = g.csv();
  }
  return r;
}

// ---- dioph --------------------------------------------------------------

ProductLattice make_lattice(Args& a) {
  if (a.has("lattice")) {
    const auto& raw = a.raw("lattice");
    const nlohmann::json j = raw.is_string() ? nlohmann::json::parse(raw.get<std::string>()) : raw;
    require(j.is_object() && j.contains("blocks") && j["blocks"].is_array(),
            ErrorCode::kInvalidArgument, "args: field 'lattice' needs a 'blocks' array");
    std::vector<Eigen::MatrixXd> bases;
    for (const auto& b : j["blocks"]) {
      const auto d = b.at("dim").get<Eigen::Index>();
      const auto v = b.at("basis").get<std::vector<double>>();
      require(d >= 0 && static_cast<Eigen::Index>(v.size()) == d * d, ErrorCode::kInvalidArgument,
              "args: field 'lattice' block basis must have dim*dim entries");
      Eigen::MatrixXd m(d, d);
      for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index c = 0; c < d; ++c) m(i, c) = v[static_cast<std::size_t>(i * d + c)];
      bases.push_back(std::move(m));
    }
    return ProductLattice(std::move(bases));
  }
  const auto R = a.get<double>("R", 1.0);
  std::vector<std::size_t> dims;
  for (auto d : int_list(a.get<std::string>("dims", "1"), "dims")) {
    require(d >= 0, ErrorCode::kInvalidArgument, "args: field 'dims' must be nonnegative");
    dims.push_back(static_cast<std::size_t>(d));
  }
  return ProductLattice::scaled_integer(R, dims);
}

// Blocks separated by ';', coordinates by ','.
AlphaVector make_alpha(const std::string& s, const ProductLattice& L, const std::string& field) {
  if (s.empty()) return AlphaVector::zeros(L);
  const auto parts = split(s, ';');
  require(parts.size() == L.block_count(), ErrorCode::kInvalidArgument,
          "args: field '" + field + "' needs one ';'-separated group per block");
  AlphaVector alpha;
  for (std::size_t j = 0; j < parts.size(); ++j) {
    const auto d = L.blocks()[j].dim();
    const auto vals = trim(parts[j]).empty() ? std::vector<double>{} : double_list(parts[j], field);
    require(vals.size() == d, ErrorCode::kInvalidArgument,
            "args: field '" + field + "' block " + std::to_string(j + 1) + " has the wrong length");
    alpha.blocks.push_back(Eigen::Map<const Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(d)));
  }
  return alpha;
}

LatticeOptions lattice_options(const ExperimentConfig& cfg) {
  LatticeOptions o;
  o.tail = cfg.tolerances.theta_tail;
  o.point_budget = cfg.budgets.lattice_points;
  o.threads = cfg.threads;
  return o;
}

Json run_denominator(Args& a, const ExperimentConfig& cfg, Json r) {
  const auto theta = double_list(a.get<std::string>("theta", "0,0.25"), "theta");
  const auto N = a.get<std::int64_t>("N", 100);
  const auto delta = a.get<double>("delta", 0.1);
  const auto q_max = a.get<std::int64_t>("q_max", 1000);
  std::vector<double> thresholds;
  const auto th = a.get<std::string>("thresholds", "");
  if (!th.empty()) thresholds = double_list(th, "thresholds");
  const auto w = weyl_denominator(theta, N, delta, q_max, cfg.constants.C_k, thresholds);
  r["abs_S"] = w.abs_S;
  r["S"] = {w.S.real(), w.S.imag()};
  r["thresholds"] = w.thresholds;
  if (w.q) r["q"] = *w.q;
  else r["q"] = nullptr;
  return r;
}

Json run_dioph(Args& a, const ExperimentConfig& cfg, Assertions& checks, std::string& csv) {
  const auto op = a.get<std::string>("op", "approx");
  const auto opt = lattice_options(cfg);
  Json r;
  r["op"] = op;
  if (op == "approx") {
    const auto family = PolynomialFamily::parse(a.get<std::string>("poly", "0,1"));
    std::vector<Rational> theta;
    for (const auto& tok : split(a.get<std::string>("theta", "1.4142135623730951"), ','))
      theta.push_back(to_rational(tok, "theta"));
    const auto eps = a.get<double>("eps", 0.1);
    const auto N = a.get<std::int64_t>("N", 10000);
    const auto res = approx_oracle(family, theta, eps, N, cfg.constants.C_k);
    const auto half = approx_oracle(family, theta, eps / 2, N, cfg.constants.C_k);
    r["good_count"] = res.good.size();
    r["density"] = res.density;
    r["d"] = res.d;
    r["reference_density"] = res.reference_density;
    r["good_head"] = int_array(std::vector<std::int64_t>(
        res.good.begin(), res.good.begin() + static_cast<std::ptrdiff_t>(std::min<std::size_t>(res.good.size(), 50))));
    checks.add("monotone_in_eps", std::includes(res.good.begin(), res.good.end(), half.good.begin(),
                                                half.good.end()));
    std::ostringstream table;
    table << "n\n";
    for (auto n : res.good) table << n << "\n";
    csv = table.str();
    return r;
  }
  if (op == "power") {
    const auto L = make_lattice(a);
    const auto alpha = make_alpha(a.get<std::string>("alpha", ""), L, "alpha");
    const auto eps = a.get<double>("eps", 0.1);
    const auto N = a.get<std::int64_t>("N", 10000);
    const auto res = approx_oracle_power(alpha, eps, N, cfg.constants.C_k);
    r["good_count"] = res.good.size();
    r["density"] = res.density;
    r["d"] = res.d;
    r["reference_density"] = res.reference_density;
    return r;
  }
  if (op == "denominator") return run_denominator(a, cfg, r);
  const auto L = make_lattice(a);
  r["dimension"] = L.dimension();
  r["determinant"] = L.determinant();
  if (op == "theta") {
    const auto t = a.get<double>("t", 1.0);
    const auto x = make_alpha(a.get<std::string>("x", ""), L, "x");
    const double direct = theta(L, t, x, ThetaSide::kDirect, opt);
    const double dual = theta(L, t, x, ThetaSide::kDual, opt);
    const double gap = std::abs(direct - dual) / std::max(std::abs(direct), std::abs(dual));
    r["direct"] = direct;
    r["dual"] = dual;
    r["relative_gap"] = gap;
    checks.add("poisson_agreement", gap <= cfg.tolerances.poisson, csv_double(gap));
    return r;
  }
  if (op == "a_lambda") {
    const auto v = a_lambda(L, cfg.tolerances.poisson, opt);
    r["direct"] = v.direct;
    r["dual"] = v.dual;
    r["relative_gap"] = v.relative_gap();
    checks.add("poisson_agreement", v.relative_gap() <= cfg.tolerances.poisson,
               csv_double(v.relative_gap()));
    return r;
  }
  const auto alpha = make_alpha(a.get<std::string>("alpha", ""), L, "alpha");
  const auto N = a.get<std::int64_t>("N", 100);
  if (op == "flattice") {
    const auto with_dual = a.get<bool>("dual", true);
    const auto F = f_lattice(L, alpha, N, with_dual, cfg.tolerances.f_lattice, opt);
    r["F"] = F.value;
    if (F.dual_value) {
      r["F_dual"] = *F.dual_value;
      checks.add("dual_agreement", true);
    }
    const auto orbit = theta_orbit(L, alpha, N, opt);
    std::ostringstream table;
    table << "n,theta\n";
    for (std::size_t i = 0; i < orbit.size(); ++i) table << i + 1 << "," << csv_double(orbit[i]) << "\n";
    csv = table.str();
    return r;
  }
  if (op == "averages") {
    const auto c = a.get<double>("c", 0.5);
    const auto q = a.get<std::int64_t>("q", 5);
    std::optional<AlphaVector> beta;
    const auto beta_s = a.get<std::string>("beta", "");
    if (!beta_s.empty()) beta = make_alpha(beta_s, L, "beta");
    const auto eps = a.get<double>("eps", 0.0);
    const auto rep = average_inequalities(L, alpha, N, c, q, beta, eps, opt);
    r["F_N"] = rep.F_N;
    r["cN"] = rep.cN;
    r["F_cN"] = rep.F_cN;
    r["Nq"] = rep.Nq;
    r["F_Nq"] = rep.F_Nq;
    if (rep.perturbation_ratio) {
      r["perturbation_ratio"] = *rep.perturbation_ratio;
      r["perturbation_in_range"] = *rep.perturbation_in_range;
    }
    checks.add("dilation", rep.dilation_holds);
    checks.add("subsample", rep.subsample_holds);
    return r;
  }
  if (op == "schmidt") {
    const auto q_max = a.get<std::int64_t>("q_max", 100);
    const auto radius = a.get<double>("radius", 3.0);
    const auto B = a.get<double>("B", cfg.constants.B_quality);
    const auto s = schmidt_scan(L, alpha, N, q_max, radius, B, opt);
    r["F"] = s.F;
    r["alternative_one"] = s.alternative_one;
    r["found"] = s.found;
    if (s.found) {
      r["q"] = s.q;
      Json xi = Json::array();
      for (const auto& c : s.xi_coords) xi.push_back(c);
      r["xi_coords"] = xi;
      r["quality"] = s.quality;
      r["beats_threshold"] = s.beats_threshold;
    }
    r["candidates"] = s.candidates;
    return r;
  }
  fail(ErrorCode::kInvalidArgument,
       "args: field 'op' must be approx, power, theta, a_lambda, flattice, averages, schmidt or denominator");
}

// ---- ergodic ------------------------------------------------------------

Subset make_subset(Args& a, std::size_t m, std::uint64_t seed) {
  const auto spec = a.get<std::string>("subset", "random");
  if (spec == "all") return Subset::all(m);
  if (spec == "random")
    return Subset::random(m, a.get<double>("density", 0.3), a.get<std::uint64_t>("seed", seed));
  std::vector<std::size_t> e;
  for (auto x : int_list(spec, "subset")) {
    require(x >= 0, ErrorCode::kInvalidArgument, "args: field 'subset' must be nonnegative");
    e.push_back(static_cast<std::size_t>(x));
  }
  return Subset(m, std::move(e));
}

Json run_ergodic(Args& a, const ExperimentConfig& cfg, Assertions& checks, std::string& csv) {
  const auto sys = FiniteMPSystem::parse(a.get<std::string>("system", "rotation:100:1"));
  const auto A = make_subset(a, sys.size(), cfg.seed);
  const auto op = a.get<std::string>("op", "khintchine");
  const auto eps = a.get<double>("eps", 0.1);
  const auto v = int_list(a.get<std::string>("v", "1..10"), "v");

  Json r;
  r["system_size"] = sys.size();
  r["cycles"] = sys.cycle_count();
  r["order"] = sys.order().str();
  r["subset_size"] = A.size();
  r["mu"] = rational_json(A.measure());

  bool preserving = true;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto E = Subset::random(sys.size(), 0.5, cfg.seed + 1000 + s);
    preserving = preserving && preimage(sys, E).size() == E.size();
  }
  checks.add("measure_preserving", preserving);

  if (op == "khintchine") {
    const auto mult = a.get<std::int64_t>("multiplier", 1);
    const auto permissive = a.get<bool>("permissive", false);
    const auto k = khintchine_search(sys, A, eps, v, mult, permissive);
    r["precondition_met"] = k.precondition_met;
    r["found"] = k.found;
    r["threshold"] = rational_json(k.threshold);
    r["pairs_scanned"] = k.pairs_scanned;
    if (k.found) {
      r["pair"] = {k.j, k.k};
      r["n"] = k.n;
      r["measure"] = rational_json(k.measure);
      r["strict"] = k.strict;
      checks.add("recomputed_measure", recurrence_measure(sys, A, mult * k.n) >= k.threshold);
    }
    if (k.precondition_met) checks.add("guaranteed_success", k.found);
  } else if (op == "griesmer") {
    const auto constants = int_list(a.get<std::string>("constants", "1,2"), "constants");
    const auto g = griesmer_search(sys, A, eps, constants, v);
    r["constants_padded"] = int_array(g.constants);
    r["threshold"] = rational_json(g.threshold);
    r["clique_sizes"] = g.clique_sizes;
    r["found"] = g.found;
    if (g.found) {
      r["n"] = g.n;
      Json ms = Json::array();
      for (const auto& m : g.measures) ms.push_back(rational_json(m));
      r["measures"] = ms;
      bool ok = true;
      for (auto c : constants) ok = ok && recurrence_measure(sys, A, c * g.n) >= g.threshold;
      checks.add("reverified", ok);
    }
    r["brute_force_exists"] = g.brute_force_exists;
    if (g.brute_force_n) r["brute_force_n"] = *g.brute_force_n;
  } else {
    fail(ErrorCode::kInvalidArgument, "args: field 'op' must be khintchine or griesmer");
  }

  std::ostringstream table;
  table << "n,measure\n";
  std::set<std::int64_t> diffs;
  for (auto x : v)
    for (auto y : v)
      if (y > x) diffs.insert(y - x);
  for (auto d : diffs) table << d << "," << csv_double(static_cast<double>(recurrence_measure(sys, A, d))) << "\n";
  csv = table.str();
  return r;
}

// ---- lift ---------------------------------------------------------------

Json run_lift(Args& a, const ExperimentConfig& cfg, Assertions& checks, std::string& csv) {
  const auto N = a.get<std::int64_t>("N", 20);
  const auto A = make_set(a, N, cfg.seed, "full");
  const auto family = PolynomialFamily::parse(a.get<std::string>("poly", "1;0,1"));
  const auto width = a.get<std::int64_t>("half_width", 0);
  const auto lift = lift_construction(A, family, width, cfg.budgets.lift_box);
  const auto rep = verify_lift_implication(lift, A, family);

  Json r;
  r["k"] = lift.k;
  r["rank"] = lift.matrix.rank;
  r["half_width"] = lift.half_width;
  r["min_half_width"] = lift.min_half_width;
  r["width_multiple"] = lift.width_multiple;
  r["pivot_columns"] = lift.pivot_columns;
  r["minor_determinant"] = lift.minor_determinant.str();
  r["s"] = int_array(lift.s);
  r["t"] = int_array(lift.t);
  r["m"] = int_array(lift.m);
  r["first_stage_size"] = lift.first_stage_size;
  r["size"] = lift.points.size();
  r["density"] = lift.density;
  r["differences_checked"] = rep.differences_checked;
  r["violations"] = rep.violations;
  checks.add("implication", rep.violations == 0, std::to_string(rep.differences_checked) + " differences");

  std::ostringstream table;
  for (std::size_t j = 0; j < lift.k; ++j) table << (j ? "," : "") << "b" << j + 1;
  table << "\n";
  for (const auto& p : lift.points) {
    for (std::size_t j = 0; j < p.size(); ++j) table << (j ? "," : "") << p[j];
    table << "\n";
  }
  csv = table.str();
  return r;
}

Json run_selftest_cmd(const ExperimentConfig& cfg, Assertions& checks) {
  Json r;
  const auto results = run_selftest(cfg);
  for (const auto& c : results) checks.add(c.name, c.passed, c.detail);
  r["checks"] = results.size();
  return r;
}

}  // namespace

Json config_to_json(const ExperimentConfig& c) {
  Json j;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["constants"] = {{"C1", c.constants.C1},           {"C_kl", c.constants.C_kl},
                    {"K", c.constants.K},             {"C_k", c.constants.C_k},
                    {"c_shift", c.constants.c_shift}, {"B_quality", c.constants.B_quality}};
  j["tolerances"] = {{"fourier", c.tolerances.fourier},
                     {"decomposition", c.tolerances.decomposition},
                     {"poisson", c.tolerances.poisson},
                     {"f_lattice", c.tolerances.f_lattice},
                     {"theta_tail", c.tolerances.theta_tail},
                     {"moment_relative", c.tolerances.moment_relative}};
  j["budgets"] = {{"signature_cells", c.budgets.signature_cells},
                  {"hash_tuples", c.budgets.hash_tuples},
                  {"lattice_points", c.budgets.lattice_points},
                  {"lift_box", c.budgets.lift_box}};
  j["json_out"] = c.json_out;
  j["csv_out"] = c.csv_out;
  return j;
}

namespace {

template <typename T>
void read_field(const nlohmann::json& obj, const std::string& prefix, const char* key, T& dst,
                std::set<std::string>& seen) {
  seen.insert(key);
  if (!obj.contains(key)) return;
  const auto& v = obj.at(key);
  bool ok = false;
  if constexpr (std::is_same_v<T, std::string>) {
    ok = v.is_string();
  } else if constexpr (std::is_floating_point_v<T>) {
    ok = v.is_number();
  } else if constexpr (std::is_unsigned_v<T>) {
    ok = v.is_number_unsigned();
  } else {
    ok = v.is_number_integer();
  }
  require(ok, ErrorCode::kInvalidArgument,
          "config: field '" + prefix + key + "' has the wrong type");
  dst = v.get<T>();
}

void reject_unknown(const nlohmann::json& obj, const std::string& prefix,
                    const std::set<std::string>& seen) {
  for (const auto& [key, value] : obj.items())
    require(seen.count(key) > 0, ErrorCode::kInvalidArgument,
            "config: unknown field '" + prefix + key + "'");
}

const nlohmann::json& section(const nlohmann::json& j, const char* key) {
  static const nlohmann::json empty = nlohmann::json::object();
  if (!j.contains(key)) return empty;
  require(j.at(key).is_object(), ErrorCode::kInvalidArgument,
          std::string("config: field '") + key + "' must be an object");
  return j.at(key);
}

}  // namespace

ExperimentConfig config_from_json(const nlohmann::json& j) {
  require(j.is_object(), ErrorCode::kInvalidArgument, "config: expected a JSON object");
  ExperimentConfig c;
  std::set<std::string> top;
  read_field(j, "", "seed", c.seed, top);
  read_field(j, "", "threads", c.threads, top);
  read_field(j, "", "json_out", c.json_out, top);
  read_field(j, "", "csv_out", c.csv_out, top);
  top.insert({"constants", "tolerances", "budgets"});
  reject_unknown(j, "", top);

  std::set<std::string> seen;
  const auto& k = section(j, "constants");
  read_field(k, "constants.", "C1", c.constants.C1, seen);
  read_field(k, "constants.", "C_kl", c.constants.C_kl, seen);
  read_field(k, "constants.", "K", c.constants.K, seen);
  read_field(k, "constants.", "C_k", c.constants.C_k, seen);
  read_field(k, "constants.", "c_shift", c.constants.c_shift, seen);
  read_field(k, "constants.", "B_quality", c.constants.B_quality, seen);
  reject_unknown(k, "constants.", seen);

  seen.clear();
  const auto& t = section(j, "tolerances");
  read_field(t, "tolerances.", "fourier", c.tolerances.fourier, seen);
  read_field(t, "tolerances.", "decomposition", c.tolerances.decomposition, seen);
  read_field(t, "tolerances.", "poisson", c.tolerances.poisson, seen);
  read_field(t, "tolerances.", "f_lattice", c.tolerances.f_lattice, seen);
  read_field(t, "tolerances.", "theta_tail", c.tolerances.theta_tail, seen);
  read_field(t, "tolerances.", "moment_relative", c.tolerances.moment_relative, seen);
  reject_unknown(t, "tolerances.", seen);

  seen.clear();
  const auto& b = section(j, "budgets");
  read_field(b, "budgets.", "signature_cells", c.budgets.signature_cells, seen);
  read_field(b, "budgets.", "hash_tuples", c.budgets.hash_tuples, seen);
  read_field(b, "budgets.", "lattice_points", c.budgets.lattice_points, seen);
  read_field(b, "budgets.", "lift_box", c.budgets.lift_box, seen);
  reject_unknown(b, "budgets.", seen);

  validate(c);
  return c;
}

RunOutput run_subcommand(const std::string& name, const nlohmann::json& args,
                         const ExperimentConfig& config) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();
  Args a(args);
  Assertions checks;
  RunOutput out;
  Json result;
  if (name == "search") {
    result = run_search(a, config, checks, out.csv);
  } else if (name == "decompose") {
    result = run_decompose(a, config, checks, out.csv);
  } else if (name == "weyl") {
    result = run_weyl(a, config, checks, out.csv);
  } else if (name == "tarry") {
    result = run_tarry(a, config, checks, out.csv);
  } else if (name == "dioph") {
    result = run_dioph(a, config, checks, out.csv);
  } else if (name == "ergodic") {
    result = run_ergodic(a, config, checks, out.csv);
  } else if (name == "lift") {
    result = run_lift(a, config, checks, out.csv);
  } else if (name == "selftest") {
    result = run_selftest_cmd(config, checks);
  } else {
    fail(ErrorCode::kInvalidArgument,
         "unknown subcommand '" + name +
             "' (expected search, decompose, weyl, tarry, dioph, ergodic, lift or selftest)");
  }
  a.finish();
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  out.passed = checks.all;
  out.document["schema"] = kSchema;
  out.document["subcommand"] = name;
  out.document["config"] = config_to_json(config);
  out.document["args"] = a.echo;
  out.document["result"] = result;
  out.document["assertions"] = checks.list;
  out.document["passed"] = checks.all;
  out.document["timing"] = {{"wall_seconds", seconds}};
  return out;
}

}  // namespace polyrec::capi
