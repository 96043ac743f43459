#include "polyrec/recurrence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "polyrec/error.hpp"
#include "polyrec/parallel.hpp"

namespace polyrec {

namespace {

std::int64_t residue(const BigInt& v, std::int64_t N) {
  BigInt r = v % N;
  if (r < 0) r += N;
  return static_cast<std::int64_t>(r);
}

void check_range(const IntegerSet& A, const PolynomialFamily& family, const ShiftRange& range) {
  require(range.N == A.ambient(), ErrorCode::kPrecondition,
          "intersection_profile: shift range was computed for a different N");
  require(range.M >= 1, ErrorCode::kPrecondition, "intersection_profile: M must be >= 1");
  const Rational budget = exact_rational(range.eps) * range.N;
  for (const auto& p : family.members())
    for (std::int64_t n = 1; n <= range.M; ++n)
      require(Rational(BigInt(abs(p(n)))) <= budget, ErrorCode::kPrecondition,
              "intersection_profile: M is not validated, |P_i(n)| exceeds eps N");
}

IntersectionProfile build_profile(const IntegerSet& A, const PolynomialFamily& family,
                                  std::int64_t M, OverlapMode mode) {
  const std::int64_t N = A.ambient();
  const auto mask = A.mask();
  const auto overlaps = mode == OverlapMode::kInteger ? fft::linear_autocorrelation(mask)
                                                      : fft::cyclic_autocorrelation(mask);
  IntersectionProfile out;
  out.N = N;
  out.M = M;
  out.mode = mode;
  out.counts.assign(family.size(), std::vector<std::int64_t>(static_cast<std::size_t>(M)));
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::int64_t n = 1; n <= M; ++n) {
      const BigInt shift = family[i](n);
      std::int64_t c = 0;
      if (mode == OverlapMode::kInteger) {
        // |A ∩ (A + p)| = |A ∩ (A - p)|
        const BigInt a = abs(shift);
        if (a < N) c = overlaps[static_cast<std::size_t>(a)];
      } else {
        c = overlaps[static_cast<std::size_t>(residue(shift, N))];
      }
      out.counts[i][static_cast<std::size_t>(n - 1)] = c;
    }
  }
  return out;
}

}  // namespace

IntersectionProfile intersection_profile(const IntegerSet& A, const PolynomialFamily& family,
                                         std::int64_t M) {
  require(M >= 1, ErrorCode::kInvalidArgument, "intersection_profile: M must be >= 1");
  return build_profile(A, family, M, OverlapMode::kInteger);
}

IntersectionProfile intersection_profile(const IntegerSet& A, const PolynomialFamily& family,
                                         const ShiftRange& range, OverlapMode mode) {
  if (mode == OverlapMode::kCyclic) check_range(A, family, range);
  require(range.M >= 1, ErrorCode::kInvalidArgument, "intersection_profile: M must be >= 1");
  return build_profile(A, family, range.M, mode);
}

ShiftReport find_good_shifts(const IntegerSet& A, const PolynomialFamily& family, double eps,
                             double c, bool permissive) {
  require(eps > 0.0 && eps < 1.0, ErrorCode::kInvalidArgument,
          "find_good_shifts: eps must lie in (0, 1)");
  ShiftReport rep;
  rep.eps = eps;
  rep.within_hypotheses = family.equal_degree();
  require(rep.within_hypotheses || permissive, ErrorCode::kPrecondition,
          "find_good_shifts: members have different degrees (use permissive mode)");
  rep.range = shift_range(family, A.ambient(), eps, c);
  rep.profile = intersection_profile(A, family, rep.range, OverlapMode::kInteger);

  // count / N > (|A| / N)^2 - eps  <=>  count N - |A|^2 > -eps N^2
  const BigInt N = A.ambient();
  const BigInt size = static_cast<std::int64_t>(A.size());
  const Rational slack = -exact_rational(eps) * Rational(N * N);
  for (std::int64_t n = 1; n <= rep.range.M; ++n) {
    bool good = true;
    for (std::size_t i = 0; i < family.size() && good; ++i) {
      const BigInt cnt = rep.profile.counts[i][static_cast<std::size_t>(n - 1)];
      good = Rational(cnt * N - size * size) > slack;
    }
    if (good) rep.good_shifts.push_back(n);
  }
  rep.density_of_good =
      static_cast<double>(rep.good_shifts.size()) / static_cast<double>(rep.range.M);
  return rep;
}

EtaSchedule EtaSchedule::experimental(double eps) {
  require(eps > 0.0, ErrorCode::kInvalidArgument, "eta schedule: eps must be positive");
  return {"eps/(4pi(t+1))", [eps](std::size_t t) {
            return std::log(eps) - std::log(4.0 * kPi * (static_cast<double>(t) + 1.0));
          }};
}

EtaSchedule EtaSchedule::reciprocal(double scale) {
  require(scale > 0.0, ErrorCode::kInvalidArgument, "eta schedule: scale must be positive");
  return {"scale/t", [scale](std::size_t t) {
            return std::log(scale) - std::log(static_cast<double>(t));
          }};
}

EtaSchedule EtaSchedule::reference(double eps, std::size_t l, double C1, double C_kl, int K) {
  require(eps > 0.0 && C1 > 0.0 && C_kl > 0.0 && K >= 1 && l >= 1,
          ErrorCode::kInvalidArgument, "eta schedule: constants must be positive");
  return {"reference", [=](std::size_t t) {
            const double td = static_cast<double>(t);
            return -K * std::log(static_cast<double>(l) * C1) +
                   C_kl * K * td * td * std::log(eps / (4.0 * kPi * td)) - std::log(2.0);
          }};
}

DecompositionResult decompose(const ZnFunction& f, double eps, const EtaSchedule& eta) {
  require(eps > 0.0, ErrorCode::kInvalidArgument, "decompose: eps must be positive");
  require(static_cast<bool>(eta.log_eta), ErrorCode::kInvalidArgument,
          "decompose: eta schedule missing");
  require(lp_norm(f, 2.0) <= 1.0 + 1e-12, ErrorCode::kPrecondition,
          "decompose: ||f||_2 must be <= 1 (normalise first)");
  const std::size_t N = f.modulus();
  const Spectrum F = dft(f);

  DecompositionResult d;
  d.order.resize(N);
  std::iota(d.order.begin(), d.order.end(), std::size_t{0});
  std::stable_sort(d.order.begin(), d.order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(F[a]) > std::abs(F[b]);
  });

  // prefix[j] = sum of |F|^2 over the first j sorted frequencies
  std::vector<double> prefix(N + 1, 0.0);
  {
    CompensatedSum acc;
    for (std::size_t j = 0; j < N; ++j) {
      acc.add(std::norm(F[d.order[j]]));
      prefix[j + 1] = acc.value();
    }
  }

  auto log_eta_at = [&](std::size_t t) {
    const double v = eta.log_eta(t);
    require(!std::isnan(v) && v < std::numeric_limits<double>::infinity() &&
                v > -std::numeric_limits<double>::infinity(),
            ErrorCode::kInvalidArgument, "decompose: eta must be finite and positive");
    return v;
  };

  const double log_N = std::log(static_cast<double>(N));
  const auto r_bound = static_cast<std::size_t>(std::ceil(1.0 / (eps * eps)));
  std::size_t m = 1;
  double log_eta_m = log_eta_at(m);
  d.schedule.push_back(m);
  for (std::size_t r = 1;; ++r) {
    // m_{r+1} = max(m_r + 1, ceil(eta(m_r)^(-2))), capped at N
    std::size_t next;
    const double log_need = -2.0 * log_eta_m;
    if (m >= N || log_need >= log_N) {
      next = N;
    } else {
      const double need = std::exp(log_need) * (1.0 - 1e-12);
      next = std::max(m + 1, static_cast<std::size_t>(std::ceil(need)));
      next = std::min(next, N);
    }
    next = std::max(next, m);
    d.schedule.push_back(next);

    const double f3_sq = std::max(0.0, prefix[next] - prefix[m]);
    if (std::sqrt(f3_sq) <= eps) {
      d.m = m;
      d.r = r;
      d.next_m = next;
      d.log_eta_of_m = log_eta_m;
      d.eta_of_m = std::exp(log_eta_m);
      break;
    }
    if (r >= r_bound)
      fail(ErrorCode::kInternal, "decompose: no admissible r within ceil(eps^-2) steps");

    const double log_eta_next = log_eta_at(next);
    require(log_eta_next <= log_eta_m + 1e-12, ErrorCode::kInvalidArgument,
            "decompose: eta is not decreasing");
    m = next;
    log_eta_m = log_eta_next;
  }

  std::vector<Complex> s1(N), s2(N), s3(N);
  for (std::size_t j = 0; j < N; ++j) {
    const std::size_t xi = d.order[j];
    if (j < d.m)
      s1[xi] = F[xi];
    else if (j < d.next_m)
      s3[xi] = F[xi];
    else {
      s2[xi] = F[xi];
      d.f2_sup = std::max(d.f2_sup, std::abs(F[xi]));
    }
  }
  d.support.assign(d.order.begin(), d.order.begin() + static_cast<std::ptrdiff_t>(d.m));
  for (auto xi : d.support) d.support_coefficients.push_back(F[xi]);
  d.f1 = inverse_dft(Spectrum(std::move(s1)));
  d.f2 = inverse_dft(Spectrum(std::move(s2)));
  d.f3 = inverse_dft(Spectrum(std::move(s3)));
  d.f3_norm = lp_norm(d.f3, 2.0);
  return d;
}

Complex main_term(const DecompositionResult& d, std::int64_t shift) {
  const auto N = static_cast<std::int64_t>(d.order.size());
  Complex acc = 0.0;
  for (std::size_t j = 0; j < d.support.size(); ++j) {
    __int128 prod = static_cast<__int128>(d.support[j]) * shift;
    auto r = static_cast<std::int64_t>(prod % N);
    if (r < 0) r += N;
    acc += std::norm(d.support_coefficients[j]) *
           unit_phase(static_cast<double>(r) / static_cast<double>(N));
  }
  return acc;
}

UniformCertificate uniform_certificate(const IntegerSet& A, const PolynomialFamily& family,
                                       double eps, int K, double C1, double c) {
  require(K >= 1, ErrorCode::kInvalidArgument, "uniform_certificate: K must be >= 1");
  require(eps > 0.0 && eps < 1.0, ErrorCode::kInvalidArgument,
          "uniform_certificate: eps must lie in (0, 1)");
  UniformCertificate cert;
  cert.eta = ellp_norm(dft(balanced_function(A)), kInfinity);
  cert.delta = A.density();
  cert.range = shift_range(family, A.ambient(), eps, c);
  const auto profile = intersection_profile(A, family, cert.range, OverlapMode::kCyclic);
  const double target = cert.delta * cert.delta;
  for (std::int64_t n = 1; n <= cert.range.M; ++n) {
    bool ok = true;
    for (std::size_t i = 0; i < family.size() && ok; ++i)
      ok = std::abs(profile.value(i, n) - target) < eps;
    if (ok) ++cert.counted;
  }
  const double M = static_cast<double>(cert.range.M);
  cert.fraction = static_cast<double>(cert.counted) / M;
  cert.predicted_lower =
      (1.0 - static_cast<double>(family.size()) * C1 * std::pow(cert.eta, 1.0 / K)) * M;
  cert.bound_holds = static_cast<double>(cert.counted) >= cert.predicted_lower;
  return cert;
}

std::int64_t error_term_census(const ZnFunction& h, const ZnFunction& g,
                               const IntPolynomial& P, std::int64_t M, double threshold) {
  require(lp_norm(h, 2.0) <= 1.0 + 1e-12 && lp_norm(g, 2.0) <= 1.0 + 1e-12,
          ErrorCode::kPrecondition, "error_term_census: ||h||_2, ||g||_2 must be <= 1");
  require(M >= 1, ErrorCode::kInvalidArgument, "error_term_census: M must be >= 1");
  const auto corr = correlation(h, g);
  const auto N = static_cast<std::int64_t>(h.modulus());
  std::int64_t count = 0;
  for (std::int64_t n = 1; n <= M; ++n)
    if (std::abs(corr[static_cast<std::size_t>(residue(P(n), N))]) >= threshold) ++count;
  return count;
}

}  // namespace polyrec
