#include "polyrec/polyfam.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "polyrec/error.hpp"

namespace polyrec {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\n\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\n\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

BigInt parse_bigint(std::string_view token) {
  const std::string t = trim(token);
  require(!t.empty(), ErrorCode::kInvalidArgument, "polynomial literal: empty coefficient");
  std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
  require(i < t.size(), ErrorCode::kInvalidArgument,
          "polynomial literal: malformed coefficient '" + t + "'");
  for (std::size_t j = i; j < t.size(); ++j)
    require(t[j] >= '0' && t[j] <= '9', ErrorCode::kInvalidArgument,
            "polynomial literal: malformed coefficient '" + t + "'");
  BigInt v(t[0] == '+' ? t.substr(1) : t);
  return v;
}

std::int64_t to_i64(const BigInt& v, const char* what) {
  require(v >= std::numeric_limits<std::int64_t>::min() &&
              v <= std::numeric_limits<std::int64_t>::max(),
          ErrorCode::kBudgetExceeded, std::string(what) + ": value exceeds 64 bits");
  return static_cast<std::int64_t>(v);
}

BigInt floor_rational(const Rational& q) {
  BigInt num = boost::multiprecision::numerator(q);
  BigInt den = boost::multiprecision::denominator(q);
  BigInt f = num / den;
  if (num % den != 0 && num < 0) f -= 1;
  return f;
}

BigInt ceil_rational(const Rational& q) { return -floor_rational(-q); }

Rational rpow(const Rational& base, int e) {
  Rational r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

BigInt ipow(const BigInt& base, int e) {
  BigInt r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

IntPolynomial::IntPolynomial(std::vector<BigInt> coefficients)
    : coefficients_(std::move(coefficients)) {
  while (!coefficients_.empty() && coefficients_.back() == 0) coefficients_.pop_back();
  require(!coefficients_.empty(), ErrorCode::kInvalidArgument,
          "IntPolynomial: the zero polynomial is not allowed");
}

IntPolynomial::IntPolynomial(std::initializer_list<long long> coefficients)
    : IntPolynomial(std::vector<BigInt>(coefficients.begin(), coefficients.end())) {}

IntPolynomial IntPolynomial::parse(std::string_view literal) {
  std::vector<BigInt> c;
  for (auto token : split(literal, ',')) c.push_back(parse_bigint(token));
  return IntPolynomial(std::move(c));
}

BigInt IntPolynomial::coefficient(int j) const {
  if (j < 1 || j > degree()) return 0;
  return coefficients_[static_cast<std::size_t>(j - 1)];
}

BigInt IntPolynomial::operator()(const BigInt& n) const {
  // Horner on c_1 + c_2 n + ... then one extra factor n.
  BigInt acc = 0;
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it)
    acc = acc * n + *it;
  return acc * n;
}

std::int64_t IntPolynomial::eval_i64(std::int64_t n) const {
  __int128 acc = 0;
  constexpr __int128 kLimit = static_cast<__int128>(1) << 100;
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) {
    acc = acc * n + static_cast<__int128>(to_i64(*it, "eval_i64"));
    require(acc < kLimit && acc > -kLimit, ErrorCode::kBudgetExceeded,
            "eval_i64: value exceeds 64 bits");
  }
  acc *= n;
  require(acc <= std::numeric_limits<std::int64_t>::max() &&
              acc >= std::numeric_limits<std::int64_t>::min(),
          ErrorCode::kBudgetExceeded, "eval_i64: value exceeds 64 bits");
  return static_cast<std::int64_t>(acc);
}

std::string IntPolynomial::literal() const {
  std::ostringstream os;
  for (std::size_t j = 0; j < coefficients_.size(); ++j) {
    if (j) os << ',';
    os << coefficients_[j];
  }
  return os.str();
}

BigInt evaluate(const IntPolynomial& P, const BigInt& n) { return P(n); }

PolynomialFamily::PolynomialFamily(std::vector<IntPolynomial> members)
    : members_(std::move(members)) {
  require(!members_.empty(), ErrorCode::kInvalidArgument,
          "PolynomialFamily: at least one member required");
  degree_bound_ = 0;
  for (const auto& p : members_) degree_bound_ = std::max(degree_bound_, p.degree());
  equal_degree_ = std::all_of(members_.begin(), members_.end(),
                              [&](const IntPolynomial& p) { return p.degree() == degree_bound_; });
}

PolynomialFamily PolynomialFamily::parse(std::string_view literal) {
  std::vector<IntPolynomial> m;
  for (auto part : split(literal, ';')) m.push_back(IntPolynomial::parse(part));
  return PolynomialFamily(std::move(m));
}

BigInt PolynomialFamily::max_abs_value(std::int64_t M) const {
  BigInt best = 0;
  for (const auto& p : members_)
    for (std::int64_t n = 1; n <= M; ++n) best = std::max(best, BigInt(abs(p(n))));
  return best;
}

std::string PolynomialFamily::literal() const {
  std::string s;
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (i) s += ';';
    s += members_[i].literal();
  }
  return s;
}

CoefficientMatrix coefficient_analysis(const PolynomialFamily& family) {
  const std::size_t k = static_cast<std::size_t>(family.degree_bound());
  CoefficientMatrix out;
  for (const auto& p : family.members()) {
    std::vector<BigInt> row(k);
    for (std::size_t j = 0; j < k; ++j) row[j] = p.coefficient(static_cast<int>(j + 1));
    out.rows.push_back(std::move(row));
  }

  // Echelon vectors, each expressed as a combination of the independent rows
  // selected so far.
  struct Reduced {
    std::vector<Rational> vec;
    std::size_t pivot;
    std::vector<Rational> combo;
  };
  std::vector<Reduced> basis;

  for (std::size_t i = 0; i < out.rows.size(); ++i) {
    std::vector<Rational> v(out.rows[i].begin(), out.rows[i].end());
    // v = row_i - sum_j coef[j] * independent_j
    std::vector<Rational> coef(basis.size());
    for (const auto& b : basis) {
      if (v[b.pivot] == 0) continue;
      const Rational factor = v[b.pivot] / b.vec[b.pivot];
      for (std::size_t j = 0; j < k; ++j) v[j] -= factor * b.vec[j];
      for (std::size_t j = 0; j < b.combo.size(); ++j) coef[j] += factor * b.combo[j];
    }
    const auto nz = std::find_if(v.begin(), v.end(), [](const Rational& x) { return x != 0; });
    if (nz == v.end()) {
      out.dependent_rows.push_back(i);
      out.dependency.push_back(std::move(coef));
      continue;
    }
    Reduced r;
    r.pivot = static_cast<std::size_t>(nz - v.begin());
    r.vec = std::move(v);
    r.combo.resize(basis.size() + 1);
    for (std::size_t j = 0; j < coef.size(); ++j) r.combo[j] = -coef[j];
    r.combo.back() = 1;
    for (auto& b : basis) b.combo.resize(basis.size() + 1);
    basis.push_back(std::move(r));
    out.independent_rows.push_back(i);
  }
  out.rank = out.independent_rows.size();
  for (auto& d : out.dependency) d.resize(out.rank);
  return out;
}

ShiftRange shift_range(const PolynomialFamily& family, std::int64_t N, double eps,
                       double c) {
  require(eps > 0.0 && eps < 1.0, ErrorCode::kInvalidArgument,
          "shift_range: eps must lie in (0, 1)");
  require(c > 0.0, ErrorCode::kInvalidArgument, "shift_range: c must be positive");
  require(N >= 1, ErrorCode::kInvalidArgument, "shift_range: N must be >= 1");
  const int k = family.degree_bound();
  const Rational eps_q = exact_rational(eps);
  const Rational c_q = exact_rational(c);
  const Rational budget = eps_q * N;  // eps N, exact
  const Rational ck_budget = rpow(c_q, k) * budget;

  // M = floor(c (eps N)^(1/k)): estimate in floating point, then fix exactly
  // using M <= c (eps N)^(1/k)  <=>  M^k <= c^k eps N.
  auto fits = [&](std::int64_t m) { return Rational(ipow(BigInt(m), k)) <= ck_budget; };
  const long double est =
      static_cast<long double>(c) * std::pow(static_cast<long double>(eps) * N, 1.0L / k);
  std::int64_t M = static_cast<std::int64_t>(std::floor(est));
  if (M < 0) M = 0;
  while (M > 0 && !fits(M)) --M;
  while (fits(M + 1)) ++M;

  ShiftRange out;
  out.formula_M = M;
  out.N = N;
  out.eps = eps;
  out.c = c;

  std::int64_t admissible = 0;
  for (std::int64_t n = 1; n <= M; ++n) {
    bool ok = true;
    for (const auto& p : family.members()) {
      if (Rational(BigInt(abs(p(n)))) > budget) {
        ok = false;
        break;
      }
    }
    if (!ok) break;
    admissible = n;
  }
  out.M = admissible;
  out.shrunk = admissible < M;

  if (out.M < 1) {
    // Smallest N with c (eps N)^(1/k) >= 1 and |P_i(1)| <= eps N.
    BigInt need = ceil_rational(Rational(1) / (rpow(c_q, k) * eps_q));
    for (const auto& p : family.members())
      need = std::max(need, ceil_rational(Rational(BigInt(abs(p(1)))) / eps_q));
    std::ostringstream os;
    os << "shift range empty: M = 0 for N = " << N << "; the smallest admissible N is "
       << need;
    fail(ErrorCode::kPrecondition, os.str());
  }
  return out;
}

DifferenceIdentity check_difference_identity(int j, const BigInt& x, const BigInt& d) {
  require(j >= 1, ErrorCode::kInvalidArgument, "difference identity: j must be >= 1");
  DifferenceIdentity out;
  BigInt binom = 1;  // C(j, t)
  for (int t = 0; t <= j; ++t) {
    const BigInt term = ipow(x + BigInt(t) * d, j) * binom;
    if ((j - t) % 2 == 0)
      out.lhs += term;
    else
      out.lhs -= term;
    binom = binom * (j - t) / (t + 1);
  }
  BigInt fact = 1;
  for (int i = 2; i <= j; ++i) fact *= i;
  out.rhs = fact * ipow(d, j);
  out.equal = out.lhs == out.rhs;
  return out;
}

namespace {

using IVec = std::vector<std::int64_t>;

// Determinant and inverse of a small square rational matrix.
bool invert(std::vector<std::vector<Rational>> a, std::vector<std::vector<Rational>>& inv,
            Rational& det) {
  const std::size_t n = a.size();
  inv.assign(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) return false;
    if (piv != col) {
      std::swap(a[piv], a[col]);
      std::swap(inv[piv], inv[col]);
      det = -det;
    }
    const Rational p = a[col][col];
    det *= p;
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] /= p;
      inv[col][j] /= p;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || a[i][col] == 0) continue;
      const Rational f = a[i][col];
      for (std::size_t j = 0; j < n; ++j) {
        a[i][j] -= f * a[col][j];
        inv[i][j] -= f * inv[col][j];
      }
    }
  }
  return true;
}

// Lexicographic r-subsets of {0..k-1}.
void subsets(std::size_t k, std::size_t r, std::size_t start, IVec& cur,
             std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == r) {
    out.emplace_back(cur.begin(), cur.end());
    return;
  }
  for (std::size_t i = start; i < k; ++i) {
    cur.push_back(static_cast<std::int64_t>(i));
    subsets(k, r, i + 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

LiftResult lift_construction(const IntegerSet& A, const PolynomialFamily& family,
                             std::int64_t half_width, std::uint64_t box_budget) {
  const std::int64_t N = A.ambient();
  const std::size_t k = static_cast<std::size_t>(family.degree_bound());
  const std::size_t l = family.size();
  require(k <= 3, ErrorCode::kPrecondition, "lift: degree bound k must be <= 3");
  require(N <= 200, ErrorCode::kPrecondition, "lift: N must be <= 200");
  require(half_width >= 0, ErrorCode::kInvalidArgument, "lift: N' must be >= 0");

  LiftResult out;
  out.k = k;
  out.half_width = half_width;
  out.matrix = coefficient_analysis(family);
  const auto& cm = out.matrix;
  const std::size_t r = cm.rank;
  require(r >= 1, ErrorCode::kInvalidArgument, "lift: degenerate (zero) coefficient matrix");

  // First r columns (lexicographically) with a nonsingular r x r minor of R.
  std::vector<std::vector<std::size_t>> cols;
  IVec scratch;
  subsets(k, r, 0, scratch, cols);
  std::vector<std::vector<Rational>> inv;
  Rational det;
  bool found = false;
  for (const auto& S : cols) {
    std::vector<std::vector<Rational>> minor(r, std::vector<Rational>(r));
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t b = 0; b < r; ++b)
        minor[a][b] = Rational(cm.rows[cm.independent_rows[a]][S[b]]);
    if (invert(minor, inv, det)) {
      out.pivot_columns = S;
      found = true;
      break;
    }
  }
  require(found, ErrorCode::kInternal, "lift: rank r but no nonsingular minor");
  out.minor_determinant = boost::multiprecision::numerator(det);
  const BigInt g = abs(out.minor_determinant);

  // Any y in R_S Z^r with |y|_inf <= max(N-1, g-1) has the preimage
  // b_S = R_S^{-1} y, other coordinates 0; bound |b|_inf via the row-sum norm.
  Rational row_norm = 0;
  for (const auto& row : inv) {
    Rational s = 0;
    for (const auto& x : row) s += abs(x);
    row_norm = std::max(row_norm, s);
  }
  const BigInt reach = std::max(BigInt(N - 1), BigInt(g - 1));
  out.min_half_width = to_i64(floor_rational(row_norm * reach), "lift");
  out.width_multiple = static_cast<double>(out.min_half_width) / static_cast<double>(N);
  if (half_width == 0) {
    half_width = std::max<std::int64_t>(1, out.min_half_width);
    out.half_width = half_width;
  }
  if (half_width < out.min_half_width) {
    std::ostringstream os;
    os << "lift: N' = " << half_width << " is below the required " << out.min_half_width
       << " (multiple " << out.width_multiple << " of N)";
    fail(ErrorCode::kPrecondition, os.str());
  }

  const std::int64_t side = 2 * half_width + 1;
  long double box = 1;
  for (std::size_t j = 0; j < k; ++j) box *= side;
  require(box <= static_cast<long double>(box_budget), ErrorCode::kBudgetExceeded,
          "lift: box [-N', N']^k exceeds the configured budget");

  std::vector<IVec> P(l, IVec(k));
  for (std::size_t i = 0; i < l; ++i)
    for (std::size_t j = 0; j < k; ++j) P[i][j] = to_i64(cm.rows[i][j], "lift");
  const auto mask = A.mask();
  auto in_A = [&](std::int64_t v) { return v >= 1 && v <= N && mask[static_cast<std::size_t>(v - 1)]; };

  std::vector<IVec> box_points;
  box_points.reserve(static_cast<std::size_t>(box));
  {
    IVec b(k, -half_width);
    while (true) {
      box_points.push_back(b);
      std::size_t j = k;
      while (j > 0 && b[j - 1] == half_width) b[--j] = -half_width;
      if (j == 0) break;
      ++b[j - 1];
    }
  }
  auto image = [&](const IVec& b, std::size_t row) {
    std::int64_t v = 0;
    for (std::size_t j = 0; j < k; ++j) v += P[row][j] * b[j];
    return v;
  };

  // Stage 1: s in [1, g]^r maximizing #{b : R(b) + s in A^r}.
  std::map<IVec, std::uint64_t> hist;
  for (const auto& b : box_points) {
    IVec y(r);
    for (std::size_t a = 0; a < r; ++a) y[a] = image(b, cm.independent_rows[a]);
    ++hist[y];
  }
  const std::int64_t gi = to_i64(g, "lift");
  IVec s(r, 1), best_s(r, 1);
  std::uint64_t best_score = 0;
  bool first = true;
  while (true) {
    std::uint64_t score = 0;
    for (const auto& [y, cnt] : hist) {
      bool ok = true;
      for (std::size_t a = 0; a < r && ok; ++a) ok = in_A(y[a] + s[a]);
      if (ok) score += cnt;
    }
    if (first || score > best_score) {
      best_score = score;
      best_s = s;
      first = false;
    }
    std::size_t a = r;
    while (a > 0 && s[a - 1] == gi) s[--a] = 1;
    if (a == 0) break;
    ++s[a - 1];
  }
  out.s = best_s;

  std::vector<const IVec*> stage1;
  for (const auto& b : box_points) {
    bool ok = true;
    for (std::size_t a = 0; a < r && ok; ++a)
      ok = in_A(image(b, cm.independent_rows[a]) + best_s[a]);
    if (ok) stage1.push_back(&b);
  }
  out.first_stage_size = stage1.size();

  // Stage 2: t maximizing #{b in B' : D(R(b)) + t in A^(l-r)}.
  const std::size_t dep = l - r;
  IVec best_t(dep, 0);
  if (dep > 0 && !stage1.empty()) {
    std::map<IVec, std::uint64_t> hist2;
    for (const auto* b : stage1) {
      IVec z(dep);
      for (std::size_t a = 0; a < dep; ++a) z[a] = image(*b, cm.dependent_rows[a]);
      ++hist2[z];
    }
    long double work = static_cast<long double>(hist2.size());
    for (std::size_t a = 0; a < dep; ++a) work *= static_cast<long double>(A.size());
    require(work <= static_cast<long double>(box_budget), ErrorCode::kBudgetExceeded,
            "lift: offset search for dependent rows exceeds the budget");
    std::map<IVec, std::uint64_t> score;
    const auto elems = A.elements();
    for (const auto& [z, cnt] : hist2) {
      IVec idx(dep, 0);
      while (true) {
        IVec t(dep);
        for (std::size_t a = 0; a < dep; ++a) t[a] = elems[static_cast<std::size_t>(idx[a])] - z[a];
        score[t] += cnt;
        std::size_t a = dep;
        while (a > 0 && static_cast<std::size_t>(idx[a - 1]) + 1 == elems.size()) idx[--a] = 0;
        if (a == 0) break;
        ++idx[a - 1];
      }
    }
    std::uint64_t best = 0;
    for (const auto& [t, cnt] : score)
      if (cnt > best) {
        best = cnt;
        best_t = t;
      }
  }
  out.t = best_t;

  out.m.assign(l, 0);
  for (std::size_t a = 0; a < r; ++a) out.m[cm.independent_rows[a]] = best_s[a];
  for (std::size_t a = 0; a < dep; ++a) out.m[cm.dependent_rows[a]] = best_t[a];

  for (const auto* b : stage1) {
    bool ok = true;
    for (std::size_t a = 0; a < dep && ok; ++a)
      ok = in_A(image(*b, cm.dependent_rows[a]) + best_t[a]);
    if (ok) out.points.push_back(*b);
  }
  out.density = static_cast<double>(out.points.size()) / static_cast<double>(box);
  return out;
}

LiftImplicationReport verify_lift_implication(const LiftResult& lift, const IntegerSet& A,
                                              const PolynomialFamily& family) {
  LiftImplicationReport rep;
  const std::int64_t W = lift.half_width;
  const std::int64_t side = 2 * W + 1;
  const std::size_t k = lift.k;
  auto encode = [&](const IVec& b) {
    std::int64_t idx = 0;
    for (std::size_t j = 0; j < k; ++j) idx = idx * side + (b[j] + W);
    return idx;
  };
  std::int64_t cells = 1;
  for (std::size_t j = 0; j < k; ++j) cells *= side;
  std::vector<bool> member(static_cast<std::size_t>(cells), false);
  for (const auto& b : lift.points) member[static_cast<std::size_t>(encode(b))] = true;

  const std::int64_t N = A.ambient();
  std::vector<bool> diff(static_cast<std::size_t>(2 * N - 1), false);
  for (auto a : A.elements())
    for (auto b : A.elements()) diff[static_cast<std::size_t>(a - b + N - 1)] = true;
  auto in_diff = [&](std::int64_t v) {
    return v > -N && v < N && diff[static_cast<std::size_t>(v + N - 1)];
  };

  for (std::int64_t n = -2 * W; n <= 2 * W; ++n) {
    if (n == 0) continue;
    IVec v(k);
    bool in_range = true;
    std::int64_t pw = 1;
    for (std::size_t j = 0; j < k; ++j) {
      pw *= n;
      if (pw > 2 * W || pw < -2 * W) {
        in_range = false;
        break;
      }
      v[j] = pw;
    }
    if (!in_range) continue;
    bool hit = false;
    for (const auto& b : lift.points) {
      IVec c(k);
      bool inside = true;
      for (std::size_t j = 0; j < k; ++j) {
        c[j] = b[j] + v[j];
        if (c[j] < -W || c[j] > W) inside = false;
      }
      if (inside && member[static_cast<std::size_t>(encode(c))]) {
        hit = true;
        break;
      }
    }
    if (!hit) continue;
    ++rep.differences_checked;
    rep.witnesses.push_back(n);
    for (const auto& p : family.members())
      if (!in_diff(p.eval_i64(n))) {
        ++rep.violations;
        break;
      }
  }
  return rep;
}

}  // namespace polyrec
