#include "polyrec/ergodic_lab.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "polyrec/error.hpp"
#include "polyrec/random.hpp"

namespace polyrec {

namespace {

std::size_t mod_index(std::int64_t a, std::size_t m) {
  const auto mm = static_cast<std::int64_t>(m);
  return static_cast<std::size_t>(((a % mm) + mm) % mm);
}

std::int64_t parse_int(const std::string& s, const char* what) {
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  require(used == s.size() && !s.empty(), ErrorCode::kInvalidArgument,
          std::string("system: bad ") + what + " '" + s + "'");
  return v;
}

// Caches mu(A ∩ T^{-s} A) by shift.
class MeasureCache {
 public:
  MeasureCache(const FiniteMPSystem& sys, const Subset& A) : sys_(sys), A_(A) {}
  const Rational& operator()(std::int64_t s) {
    auto it = cache_.find(s);
    if (it == cache_.end()) it = cache_.emplace(s, recurrence_measure(sys_, A_, s)).first;
    return it->second;
  }

 private:
  const FiniteMPSystem& sys_;
  const Subset& A_;
  std::map<std::int64_t, Rational> cache_;
};

void check_vertices(const std::vector<std::int64_t>& v) {
  std::set<std::int64_t> seen;
  for (auto x : v) {
    require(x >= 1, ErrorCode::kInvalidArgument, "search: B must contain natural numbers");
    require(seen.insert(x).second, ErrorCode::kInvalidArgument, "search: B must be distinct");
  }
}

struct PairHit {
  std::size_t j, k;
};

// Lexicographic scan for the first pair meeting the threshold for all constants.
std::optional<PairHit> first_pair(const std::vector<std::int64_t>& v,
                                  const std::vector<std::int64_t>& constants,
                                  const Rational& threshold, MeasureCache& mu,
                                  std::size_t* scanned) {
  for (std::size_t j = 0; j < v.size(); ++j)
    for (std::size_t k = j + 1; k < v.size(); ++k) {
      if (scanned) ++*scanned;
      const std::int64_t n = v[k] - v[j];
      bool ok = true;
      for (auto c : constants) ok = ok && mu(c * n) >= threshold;
      if (ok) return PairHit{j, k};
    }
  return std::nullopt;
}

// Keeps a pivot when most of the remaining vertices are joined to it in red;
// the kept pivots plus the final vertex form a red clique.
std::vector<std::int64_t> red_clique(const std::vector<std::int64_t>& v,
                                     const std::vector<std::int64_t>& constants,
                                     const Rational& threshold, MeasureCache& mu) {
  auto red = [&](std::int64_t a, std::int64_t b) {
    for (auto c : constants)
      if (mu(c * (b - a)) < threshold) return false;
    return true;
  };
  std::vector<std::int64_t> clique, rest(v);
  while (rest.size() > 1) {
    const std::int64_t pivot = rest.front();
    std::vector<std::int64_t> reds, blues;
    for (std::size_t i = 1; i < rest.size(); ++i)
      (red(pivot, rest[i]) ? reds : blues).push_back(rest[i]);
    if (reds.size() >= blues.size()) {
      clique.push_back(pivot);
      rest = std::move(reds);
    } else {
      rest = std::move(blues);
    }
  }
  if (!rest.empty()) clique.push_back(rest.front());
  std::sort(clique.begin(), clique.end());
  return clique;
}

std::optional<std::int64_t> recurse(const std::vector<std::int64_t>& v,
                                    const std::vector<std::int64_t>& constants,
                                    const Rational& threshold, MeasureCache& mu,
                                    std::vector<std::size_t>& sizes) {
  if (constants.size() == 1) {
    const auto hit = first_pair(v, constants, threshold, mu, nullptr);
    if (!hit) return std::nullopt;
    return v[hit->k] - v[hit->j];
  }
  const auto half = constants.size() / 2;
  const std::vector<std::int64_t> first(constants.begin(), constants.begin() + static_cast<std::ptrdiff_t>(half));
  const std::vector<std::int64_t> second(constants.begin() + static_cast<std::ptrdiff_t>(half), constants.end());
  const auto clique = red_clique(v, first, threshold, mu);
  sizes.push_back(clique.size());
  return recurse(clique, second, threshold, mu, sizes);
}

}  // namespace

FiniteMPSystem::FiniteMPSystem(std::vector<std::size_t> permutation) : perm_(std::move(permutation)) {
  const std::size_t m = perm_.size();
  require(m >= 1, ErrorCode::kInvalidArgument, "system: empty permutation");
  std::vector<bool> hit(m, false);
  for (auto x : perm_) {
    require(x < m && !hit[x], ErrorCode::kInvalidArgument, "system: not a permutation");
    hit[x] = true;
  }
  cycle_of_.assign(m, 0);
  position_.assign(m, 0);
  std::vector<bool> seen(m, false);
  for (std::size_t s = 0; s < m; ++s) {
    if (seen[s]) continue;
    std::vector<std::size_t> cycle;
    for (std::size_t x = s; !seen[x]; x = perm_[x]) {
      seen[x] = true;
      cycle_of_[x] = cycles_.size();
      position_[x] = cycle.size();
      cycle.push_back(x);
    }
    cycles_.push_back(std::move(cycle));
  }
}

FiniteMPSystem FiniteMPSystem::rotation(std::size_t m, std::int64_t a) {
  require(m >= 1, ErrorCode::kInvalidArgument, "rotation: m must be >= 1");
  std::vector<std::size_t> p(m);
  for (std::size_t x = 0; x < m; ++x) p[x] = mod_index(static_cast<std::int64_t>(x) + a, m);
  return FiniteMPSystem(std::move(p));
}

FiniteMPSystem FiniteMPSystem::skew(std::size_t m, std::int64_t a) {
  require(m >= 1 && m <= 4096, ErrorCode::kInvalidArgument, "skew: m must lie in [1, 4096]");
  std::vector<std::size_t> p(m * m);
  for (std::size_t x = 0; x < m; ++x)
    for (std::size_t y = 0; y < m; ++y)
      p[x * m + y] = mod_index(static_cast<std::int64_t>(x) + a, m) * m + (x + y) % m;
  return FiniteMPSystem(std::move(p));
}

FiniteMPSystem FiniteMPSystem::random(std::size_t m, std::uint64_t seed) {
  require(m >= 1, ErrorCode::kInvalidArgument, "random system: m must be >= 1");
  std::vector<std::size_t> p(m);
  std::iota(p.begin(), p.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = m - 1; i > 0; --i) std::swap(p[i], p[rng.below(i + 1)]);
  return FiniteMPSystem(std::move(p));
}

FiniteMPSystem FiniteMPSystem::parse(const std::string& spec) {
  const auto colon = spec.find(':');
  require(colon != std::string::npos, ErrorCode::kInvalidArgument,
          "system: expected rotation:m:a, skew:m:a or perm:<file>");
  const std::string kind = spec.substr(0, colon);
  const std::string rest = spec.substr(colon + 1);
  if (kind == "perm") {
    std::ifstream in(rest);
    require(static_cast<bool>(in), ErrorCode::kInvalidArgument, "system: cannot read " + rest);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    std::replace(text.begin(), text.end(), ',', ' ');
    std::istringstream words(text);
    std::vector<std::size_t> p;
    std::string w;
    while (words >> w) {
      const auto x = parse_int(w, "permutation entry");
      require(x >= 0, ErrorCode::kInvalidArgument, "system: negative permutation entry");
      p.push_back(static_cast<std::size_t>(x));
    }
    return FiniteMPSystem(std::move(p));
  }
  const auto colon2 = rest.find(':');
  require(colon2 != std::string::npos, ErrorCode::kInvalidArgument,
          "system: expected " + kind + ":m:a");
  const auto m = parse_int(rest.substr(0, colon2), "m");
  const auto a = parse_int(rest.substr(colon2 + 1), "a");
  require(m >= 1, ErrorCode::kInvalidArgument, "system: m must be >= 1");
  if (kind == "rotation") return rotation(static_cast<std::size_t>(m), a);
  if (kind == "skew") return skew(static_cast<std::size_t>(m), a);
  fail(ErrorCode::kInvalidArgument, "system: unknown kind '" + kind + "'");
}

std::size_t FiniteMPSystem::apply(std::size_t x, std::int64_t s) const {
  const auto& cycle = cycles_[cycle_of_[x]];
  return cycle[mod_index(static_cast<std::int64_t>(position_[x]) + s % static_cast<std::int64_t>(cycle.size()),
                         cycle.size())];
}

BigInt FiniteMPSystem::order() const {
  BigInt o = 1;
  for (const auto& c : cycles_) {
    const BigInt len = c.size();
    o = o / boost::multiprecision::gcd(o, len) * len;
  }
  return o;
}

Subset::Subset(std::size_t m, std::vector<std::size_t> elements) : mask_(m, false) {
  require(m >= 1, ErrorCode::kInvalidArgument, "subset: ambient size must be >= 1");
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  for (auto x : elements) {
    require(x < m, ErrorCode::kInvalidArgument, "subset: element outside the system");
    mask_[x] = true;
  }
  elements_ = std::move(elements);
}

Subset Subset::all(std::size_t m) {
  std::vector<std::size_t> e(m);
  std::iota(e.begin(), e.end(), std::size_t{0});
  return Subset(m, std::move(e));
}

Subset Subset::random(std::size_t m, double density, std::uint64_t seed) {
  require(density >= 0.0 && density <= 1.0, ErrorCode::kInvalidArgument,
          "subset: density must lie in [0, 1]");
  Rng rng(seed);
  std::vector<std::size_t> e;
  for (std::size_t x = 0; x < m; ++x)
    if (rng.bernoulli(density)) e.push_back(x);
  return Subset(m, std::move(e));
}

Rational Subset::measure() const {
  return Rational(static_cast<std::int64_t>(size()), static_cast<std::int64_t>(ambient()));
}

Rational recurrence_measure(const FiniteMPSystem& sys, const Subset& A, std::int64_t shift) {
  require(A.ambient() == sys.size(), ErrorCode::kInvalidArgument,
          "recurrence_measure: subset and system sizes differ");
  std::int64_t count = 0;
  for (auto x : A.elements())
    if (A.contains(sys.apply(x, shift))) ++count;
  return Rational(count, static_cast<std::int64_t>(sys.size()));
}

Subset preimage(const FiniteMPSystem& sys, const Subset& E) {
  require(E.ambient() == sys.size(), ErrorCode::kInvalidArgument,
          "preimage: subset and system sizes differ");
  std::vector<std::size_t> out;
  for (std::size_t x = 0; x < sys.size(); ++x)
    if (E.contains(sys.permutation()[x])) out.push_back(x);
  return Subset(sys.size(), std::move(out));
}

KhintchineResult khintchine_search(const FiniteMPSystem& sys, const Subset& A, double eps,
                                   const std::vector<std::int64_t>& v, std::int64_t multiplier,
                                   bool permissive) {
  require(eps > 0.0 && std::isfinite(eps), ErrorCode::kInvalidArgument,
          "khintchine_search: eps must be positive");
  require(multiplier != 0, ErrorCode::kInvalidArgument, "khintchine_search: multiplier must be nonzero");
  require(A.ambient() == sys.size(), ErrorCode::kInvalidArgument,
          "khintchine_search: subset and system sizes differ");
  check_vertices(v);
  const double need = std::max(2.0, std::ceil(1.0 / eps));
  KhintchineResult out;
  out.precondition_met = static_cast<double>(v.size()) >= need;
  require(out.precondition_met || permissive, ErrorCode::kPrecondition,
          "khintchine_search: need |B| >= max(2, ceil(1/eps))");
  const Rational mu = A.measure();
  out.threshold = mu * mu - exact_rational(eps);
  MeasureCache cache(sys, A);
  const auto hit = first_pair(v, {multiplier}, out.threshold, cache, &out.pairs_scanned);
  if (hit) {
    out.found = true;
    out.j = hit->j + 1;
    out.k = hit->k + 1;
    out.n = v[hit->k] - v[hit->j];
    out.measure = cache(multiplier * out.n);
    out.strict = out.measure > out.threshold;
  }
  return out;
}

GriesmerResult griesmer_search(const FiniteMPSystem& sys, const Subset& A, double eps,
                               const std::vector<std::int64_t>& constants,
                               const std::vector<std::int64_t>& v) {
  require(eps > 0.0 && std::isfinite(eps), ErrorCode::kInvalidArgument,
          "griesmer_search: eps must be positive");
  require(!constants.empty(), ErrorCode::kInvalidArgument, "griesmer_search: need constants");
  for (auto c : constants)
    require(c != 0, ErrorCode::kInvalidArgument, "griesmer_search: constants must be nonzero");
  require(A.ambient() == sys.size(), ErrorCode::kInvalidArgument,
          "griesmer_search: subset and system sizes differ");
  check_vertices(v);

  GriesmerResult out;
  out.constants = constants;
  std::size_t padded = 1;
  while (padded < constants.size()) padded *= 2;
  out.constants.resize(padded, constants.back());
  const Rational mu = A.measure();
  out.threshold = mu * mu - exact_rational(eps);

  MeasureCache cache(sys, A);
  const auto n = recurse(v, out.constants, out.threshold, cache, out.clique_sizes);
  if (n) {
    for (auto c : constants) {
      out.measures.push_back(recurrence_measure(sys, A, c * *n));
      if (out.measures.back() < out.threshold)
        fail(ErrorCode::kInternal, "griesmer_search: returned n fails re-verification");
    }
    out.found = true;
    out.n = *n;
  }

  std::set<std::int64_t> diffs;
  for (std::size_t j = 0; j < v.size(); ++j)
    for (std::size_t k = 0; k < v.size(); ++k)
      if (v[k] > v[j]) diffs.insert(v[k] - v[j]);
  for (auto d : diffs) {
    bool ok = true;
    for (auto c : constants) ok = ok && cache(c * d) >= out.threshold;
    if (ok) {
      out.brute_force_exists = true;
      out.brute_force_n = d;
      break;
    }
  }
  return out;
}

}  // namespace polyrec
