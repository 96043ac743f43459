#include "polyrec/weyl_tarry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "polyrec/error.hpp"
#include "polyrec/parallel.hpp"
#include "polyrec/zn_fourier.hpp"

namespace polyrec {

namespace {

using u128 = unsigned __int128;

BigInt from_u128(u128 v) {
  BigInt hi = static_cast<std::uint64_t>(v >> 64);
  return (hi << 64) + BigInt(static_cast<std::uint64_t>(v));
}

// log2 of M^e, for choosing accumulator widths.
double log2_pow(std::int64_t M, int e) { return e * std::log2(static_cast<double>(M)); }

template <typename T>
BigInt sum_of_squares(const std::vector<T>& v) {
  if constexpr (std::is_same_v<T, BigInt>) {
    BigInt acc = 0;
    for (const auto& x : v)
      if (x != 0) acc += x * x;
    return acc;
  } else {
    BigInt total = 0;
    u128 acc = 0;
    constexpr u128 kFlush = static_cast<u128>(1) << 126;
    for (const auto x : v) {
      if (x == 0) continue;
      acc += static_cast<u128>(x) * x;
      if (acc >= kFlush) {
        total += from_u128(acc);
        acc = 0;
      }
    }
    return total + from_u128(acc);
  }
}

// K-fold self-convolution of point masses placed at `offsets` inside a dense
// array of `cells`; returns the final distribution's sum of squares.
template <typename T>
BigInt dense_convolution(const std::vector<std::uint64_t>& offsets, std::uint64_t cells, int K) {
  std::vector<T> cur(cells, T(0));
  for (auto o : offsets) cur[o] += T(1);
  for (int layer = 2; layer <= K; ++layer) {
    std::vector<T> next(cells, T(0));
    for (std::uint64_t c = 0; c < cells; ++c) {
      if (cur[c] == 0) continue;
      for (auto o : offsets) next[c + o] += cur[c];
    }
    cur.swap(next);
  }
  return sum_of_squares(cur);
}

// Same over Z_N: base[r] = multiplicity of residue r.
template <typename T>
BigInt cyclic_convolution(const std::vector<std::pair<std::int64_t, std::uint64_t>>& base,
                          std::int64_t N, int K) {
  const auto n = static_cast<std::size_t>(N);
  std::vector<T> cur(n, T(0));
  for (const auto& [r, c] : base) cur[static_cast<std::size_t>(r)] += T(c);
  for (int layer = 2; layer <= K; ++layer) {
    std::vector<T> next(n, T(0));
    for (std::size_t a = 0; a < n; ++a) {
      if (cur[a] == 0) continue;
      for (const auto& [r, c] : base) {
        std::size_t idx = a + static_cast<std::size_t>(r);
        if (idx >= n) idx -= n;
        next[idx] += cur[a] * T(c);
      }
    }
    cur.swap(next);
  }
  return sum_of_squares(cur);
}

// Enumerates nondecreasing K-tuples of indices into `sigs`, hashing the
// summed signature with multiplicity K! / prod(mult!), and returns sum r(s)^2.
BigInt signature_hashing(const std::vector<std::vector<std::int64_t>>& sigs, int K) {
  const std::size_t M = sigs.size();
  const std::size_t dim = sigs.front().size();
  std::map<std::vector<std::int64_t>, BigInt> counts;
  std::vector<std::size_t> idx(static_cast<std::size_t>(K), 0);
  std::vector<BigInt> fact(static_cast<std::size_t>(K) + 1, 1);
  for (int i = 1; i <= K; ++i) fact[static_cast<std::size_t>(i)] = fact[static_cast<std::size_t>(i - 1)] * i;
  while (true) {
    std::vector<std::int64_t> s(dim, 0);
    BigInt mult = fact[static_cast<std::size_t>(K)];
    std::size_t run = 1;
    for (std::size_t j = 0; j < idx.size(); ++j) {
      for (std::size_t q = 0; q < dim; ++q) s[q] += sigs[idx[j]][q];
      if (j > 0 && idx[j] == idx[j - 1])
        ++run;
      else {
        if (j > 0) mult /= fact[run];
        run = 1;
      }
    }
    mult /= fact[run];
    counts[s] += mult;
    // next nondecreasing tuple
    std::size_t j = idx.size();
    while (j > 0 && idx[j - 1] == M - 1) --j;
    if (j == 0) break;
    const std::size_t v = idx[j - 1] + 1;
    for (std::size_t q = j - 1; q < idx.size(); ++q) idx[q] = v;
  }
  BigInt total = 0;
  for (const auto& [s, c] : counts) total += c * c;
  return total;
}

std::int64_t checked_pow(std::int64_t x, int e) {
  __int128 v = 1;
  for (int i = 0; i < e; ++i) {
    v *= x;
    require(v < (static_cast<__int128>(1) << 62), ErrorCode::kBudgetExceeded,
            "tarry: power sums exceed 62 bits");
  }
  return static_cast<std::int64_t>(v);
}

// Dispatches between the dense convolution and signature hashing given the
// per-point signature vectors (components already shifted to be >= 0).
TarryCount count_equal_signatures(const std::vector<std::vector<std::int64_t>>& sigs, int K,
                                  TarryMethod method, const TarryBudget& budget) {
  const std::size_t dim = sigs.front().size();
  std::vector<std::int64_t> extent(dim, 0);
  for (const auto& s : sigs)
    for (std::size_t q = 0; q < dim; ++q) extent[q] = std::max(extent[q], s[q]);
  long double cells_ld = 1;
  for (auto e : extent) cells_ld *= static_cast<long double>(K) * e + 1;
  const long double tuples = std::pow(static_cast<long double>(sigs.size()), K);

  TarryCount out;
  if (method == TarryMethod::kAuto)
    method = cells_ld <= budget.signature_cells ? TarryMethod::kConvolution
                                                : TarryMethod::kMeetInTheMiddle;
  out.method = method;
  if (method == TarryMethod::kConvolution) {
    require(cells_ld <= budget.signature_cells, ErrorCode::kBudgetExceeded,
            "tarry: signature space exceeds the memory budget");
    const auto cells = static_cast<std::uint64_t>(cells_ld);
    std::vector<std::uint64_t> stride(dim, 1);
    for (std::size_t q = 1; q < dim; ++q)
      stride[q] = stride[q - 1] * static_cast<std::uint64_t>(K * extent[q - 1] + 1);
    std::vector<std::uint64_t> offsets;
    for (const auto& s : sigs) {
      std::uint64_t o = 0;
      for (std::size_t q = 0; q < dim; ++q) o += static_cast<std::uint64_t>(s[q]) * stride[q];
      offsets.push_back(o);
    }
    // Layer entries never exceed M^K.
    if (log2_pow(static_cast<std::int64_t>(sigs.size()), K) < 63)
      out.count = dense_convolution<std::uint64_t>(offsets, cells, K);
    else
      out.count = dense_convolution<BigInt>(offsets, cells, K);
  } else {
    require(tuples <= budget.hash_tuples, ErrorCode::kBudgetExceeded,
            "tarry: K-tuple enumeration exceeds the hashing budget");
    out.count = signature_hashing(sigs, K);
  }
  return out;
}

}  // namespace

std::string to_string(TarryMethod method) {
  switch (method) {
    case TarryMethod::kAuto: return "auto";
    case TarryMethod::kConvolution: return "convolution";
    case TarryMethod::kMeetInTheMiddle: return "meet-in-the-middle";
  }
  return "unknown";
}

WeylSum weyl_sum(const IntPolynomial& P, std::int64_t M, std::vector<int> weights,
                 std::int64_t N) {
  require(N >= 1, ErrorCode::kInvalidArgument, "weyl_sum: N must be >= 1");
  require(M >= 1 && M <= N, ErrorCode::kPrecondition, "weyl_sum: need 1 <= M <= N");
  require(weights.size() == static_cast<std::size_t>(M), ErrorCode::kInvalidArgument,
          "weyl_sum: need exactly M weights");
  for (int w : weights)
    require(w == 1 || w == -1, ErrorCode::kInvalidArgument, "weyl_sum: weights must be +-1");
  std::vector<Complex> mass(static_cast<std::size_t>(N));
  for (std::int64_t n = 1; n <= M; ++n) {
    BigInt r = P(n) % N;
    if (r < 0) r += N;
    mass[static_cast<std::size_t>(r)] += static_cast<double>(weights[static_cast<std::size_t>(n - 1)]);
  }
  // S(xi) = sum_y mass[y] e(y xi / N)
  fft::backward(mass);
  return WeylSum{M, N, P, std::move(weights), std::move(mass)};
}

WeylSum weyl_sum(const IntPolynomial& P, std::int64_t M, std::int64_t N) {
  return weyl_sum(P, M, std::vector<int>(static_cast<std::size_t>(std::max<std::int64_t>(M, 0)), 1), N);
}

double moment_2K(const WeylSum& S, int K) {
  require(K >= 1, ErrorCode::kInvalidArgument, "moment_2K: K must be >= 1");
  CompensatedSum acc;
  for (const auto& z : S.values) acc.add(std::pow(std::norm(z), K));
  return acc.value();
}

BigInt count_solutions_modN(const IntPolynomial& P, std::int64_t M, std::int64_t N, int K) {
  require(K >= 1 && M >= 1 && N >= 1, ErrorCode::kInvalidArgument,
          "count_solutions_modN: K, M, N must be >= 1");
  std::map<std::int64_t, std::uint64_t> dist;
  for (std::int64_t n = 1; n <= M; ++n) {
    BigInt r = P(n) % N;
    if (r < 0) r += N;
    ++dist[static_cast<std::int64_t>(r)];
  }
  std::vector<std::pair<std::int64_t, std::uint64_t>> base(dist.begin(), dist.end());
  if (log2_pow(M, K) < 63) return cyclic_convolution<std::uint64_t>(base, N, K);
  return cyclic_convolution<BigInt>(base, N, K);
}

TarryCount tarry_count(int K, int k, std::int64_t M, TarryMethod method,
                       const TarryBudget& budget) {
  require(K >= 1 && k >= 1 && M >= 1, ErrorCode::kInvalidArgument,
          "tarry_count: K, k, M must be >= 1");
  std::vector<std::vector<std::int64_t>> sigs;
  for (std::int64_t x = 1; x <= M; ++x) {
    std::vector<std::int64_t> s(static_cast<std::size_t>(k));
    for (int i = 1; i <= k; ++i) s[static_cast<std::size_t>(i - 1)] = checked_pow(x, i) - 1;
    sigs.push_back(std::move(s));
  }
  for (int i = 1; i <= k; ++i)
    require(static_cast<long double>(K) * checked_pow(M, i) < 4e18L,
            ErrorCode::kBudgetExceeded, "tarry_count: power sums exceed 62 bits");
  TarryCount out = count_equal_signatures(sigs, K, method, budget);
  out.K = K;
  out.k = k;
  out.M = M;
  return out;
}

TarryCount tarry_count_poly(const IntPolynomial& P, int K, std::int64_t M, TarryMethod method,
                            const TarryBudget& budget) {
  require(K >= 1 && M >= 1, ErrorCode::kInvalidArgument, "tarry_count_poly: K, M must be >= 1");
  std::vector<std::int64_t> vals;
  for (std::int64_t x = 1; x <= M; ++x) vals.push_back(P.eval_i64(x));
  const auto [lo, hi] = std::minmax_element(vals.begin(), vals.end());
  require(static_cast<long double>(K) * (static_cast<long double>(*hi) - *lo) < 4e18L,
          ErrorCode::kBudgetExceeded, "tarry_count_poly: value span exceeds 62 bits");
  std::vector<std::vector<std::int64_t>> sigs;
  for (auto v : vals) sigs.push_back({v - *lo});
  TarryCount out = count_equal_signatures(sigs, K, method, budget);
  out.K = K;
  out.k = 0;
  out.M = M;
  out.P = P;
  return out;
}

GrowthProbe growth_probe(int K, int k, const std::vector<std::int64_t>& M_list,
                         const TarryBudget& budget) {
  require(!M_list.empty(), ErrorCode::kInvalidArgument, "growth_probe: empty M list");
  for (std::size_t i = 1; i < M_list.size(); ++i)
    require(M_list[i] > M_list[i - 1], ErrorCode::kInvalidArgument,
            "growth_probe: M list must be increasing");
  GrowthProbe probe;
  probe.K = K;
  probe.k = k;
  probe.theory_exponent = 2.0 * K - k * (k + 1) / 2.0;
  for (std::size_t i = 0; i < M_list.size(); ++i) {
    GrowthRow row;
    row.M = M_list[i];
    row.count = tarry_count(K, k, row.M, TarryMethod::kAuto, budget).count;
    row.log_count = std::log(static_cast<double>(row.count));
    row.theory_exponent = probe.theory_exponent;
    row.fitted_slope = std::numeric_limits<double>::quiet_NaN();
    if (i > 0) {
      const auto& prev = probe.rows.back();
      row.fitted_slope = (row.log_count - prev.log_count) /
                         (std::log(static_cast<double>(row.M)) - std::log(static_cast<double>(prev.M)));
    }
    probe.rows.push_back(std::move(row));
  }
  if (probe.rows.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(probe.rows.size());
    for (const auto& r : probe.rows) {
      const double x = std::log(static_cast<double>(r.M));
      sx += x;
      sy += r.log_count;
      sxx += x * x;
      sxy += x * r.log_count;
    }
    probe.overall_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  } else {
    probe.overall_slope = std::numeric_limits<double>::quiet_NaN();
  }
  return probe;
}

std::string GrowthProbe::csv() const {
  std::ostringstream os;
  os.precision(12);
  os << "M,count,log_count,fitted_slope,theory_exponent\n";
  for (const auto& r : rows) {
    os << r.M << ',' << r.count << ',' << r.log_count << ',';
    if (std::isnan(r.fitted_slope))
      os << "nan";
    else
      os << r.fitted_slope;
    os << ',' << r.theory_exponent << '\n';
  }
  return os.str();
}

}  // namespace polyrec
