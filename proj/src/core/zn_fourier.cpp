#include "polyrec/zn_fourier.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "polyrec/error.hpp"

namespace polyrec {

namespace fft {
namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// sign = -1 for forward, +1 for backward.
void radix2(std::span<Complex> a, int sign) {
  const std::size_t n = a.size();
  if (n <= 1) return;
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  // Twiddles from direct evaluation, not a running product, to keep the
  // error at O(eps log n).
  std::vector<Complex> tw(n / 2);
  for (std::size_t j = 0; j < n / 2; ++j)
    tw[j] = unit_phase(sign * static_cast<double>(j) / static_cast<double>(n));
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t step = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t j = 0; j < half; ++j) {
        const Complex u = a[i + j];
        const Complex v = a[i + j + half] * tw[j * step];
        a[i + j] = u + v;
        a[i + j + half] = u - v;
      }
    }
  }
}

void bluestein(std::span<Complex> a, int sign) {
  const std::size_t n = a.size();
  const std::size_t two_n = 2 * n;
  // chirp[m] = e(sign * m^2 / (2n)), with m^2 reduced mod 2n exactly.
  std::vector<Complex> chirp(n);
  for (std::size_t m = 0; m < n; ++m) {
    const std::uint64_t sq = (static_cast<std::uint64_t>(m) * m) % two_n;
    chirp[m] = unit_phase(sign * static_cast<double>(sq) / static_cast<double>(two_n));
  }
  const std::size_t L = std::bit_ceil(2 * n - 1);
  std::vector<Complex> u(L), v(L);
  for (std::size_t m = 0; m < n; ++m) u[m] = a[m] * chirp[m];
  v[0] = std::conj(chirp[0]);
  for (std::size_t m = 1; m < n; ++m) v[m] = v[L - m] = std::conj(chirp[m]);
  radix2(u, -1);
  radix2(v, -1);
  for (std::size_t i = 0; i < L; ++i) u[i] *= v[i];
  radix2(u, +1);
  const double scale = 1.0 / static_cast<double>(L);
  for (std::size_t k = 0; k < n; ++k) a[k] = u[k] * scale * chirp[k];
}

void transform(std::span<Complex> data, int sign) {
  if (data.size() <= 1) return;
  if (is_power_of_two(data.size()))
    radix2(data, sign);
  else
    bluestein(data, sign);
}

std::vector<std::int64_t> round_counts(const std::vector<Complex>& raw,
                                       std::size_t count, double scale,
                                       bool& exact) {
  std::vector<std::int64_t> out(count);
  exact = true;
  for (std::size_t s = 0; s < count; ++s) {
    const double v = raw[s].real() * scale;
    const double r = std::nearbyint(v);
    if (std::abs(v - r) > 0.25) exact = false;
    out[s] = static_cast<std::int64_t>(r);
  }
  return out;
}

}  // namespace

void forward(std::span<Complex> data) { transform(data, -1); }
void backward(std::span<Complex> data) { transform(data, +1); }

std::vector<std::int64_t> linear_autocorrelation(std::span<const std::uint8_t> mask) {
  const std::size_t n = mask.size();
  if (n == 0) return {};
  const std::size_t L = std::bit_ceil(2 * n);
  std::vector<Complex> a(L);
  for (std::size_t i = 0; i < n; ++i) a[i] = mask[i] ? 1.0 : 0.0;
  radix2(a, -1);
  for (auto& z : a) z = std::norm(z);
  radix2(a, +1);
  bool exact = false;
  auto out = round_counts(a, n, 1.0 / static_cast<double>(L), exact);
  if (!exact) {
    for (std::size_t s = 0; s < n; ++s) {
      std::int64_t c = 0;
      for (std::size_t x = 0; x + s < n; ++x) c += mask[x] & mask[x + s];
      out[s] = c;
    }
  }
  return out;
}

std::vector<std::int64_t> cyclic_autocorrelation(std::span<const std::uint8_t> mask) {
  const std::size_t n = mask.size();
  if (n == 0) return {};
  std::vector<Complex> a(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = mask[i] ? 1.0 : 0.0;
  transform(a, -1);
  for (auto& z : a) z = std::norm(z);
  transform(a, +1);
  bool exact = false;
  auto out = round_counts(a, n, 1.0 / static_cast<double>(n), exact);
  if (!exact) {
    for (std::size_t s = 0; s < n; ++s) {
      std::int64_t c = 0;
      for (std::size_t x = 0; x < n; ++x) c += mask[x] & mask[(x + s) % n];
      out[s] = c;
    }
  }
  return out;
}

}  // namespace fft

ZnFunction::ZnFunction(std::vector<Complex> values) : values_(std::move(values)) {
  require(!values_.empty(), ErrorCode::kInvalidArgument, "ZnFunction: N must be >= 1");
}

ZnFunction ZnFunction::zeros(std::size_t N) {
  return ZnFunction(std::vector<Complex>(N));
}

ZnFunction ZnFunction::constant(std::size_t N, Complex c) {
  return ZnFunction(std::vector<Complex>(N, c));
}

ZnFunction ZnFunction::indicator(const IntegerSet& A) {
  const auto N = static_cast<std::size_t>(A.ambient());
  std::vector<Complex> v(N);
  for (auto x : A.elements()) v[static_cast<std::size_t>(x) % N] = 1.0;
  return ZnFunction(std::move(v));
}

ZnFunction ZnFunction::indicator(std::size_t N, std::span<const std::size_t> residues) {
  std::vector<Complex> v(N);
  for (auto x : residues) {
    require(x < N, ErrorCode::kInvalidArgument, "indicator: residue out of range");
    v[x] = 1.0;
  }
  return ZnFunction(std::move(v));
}

ZnFunction ZnFunction::character(std::size_t N, std::size_t xi) {
  std::vector<Complex> v(N);
  for (std::size_t x = 0; x < N; ++x) {
    const auto r = (static_cast<std::uint64_t>(x) * xi) % N;
    v[x] = unit_phase(static_cast<double>(r) / static_cast<double>(N));
  }
  return ZnFunction(std::move(v));
}

ZnFunction ZnFunction::operator+(const ZnFunction& other) const {
  require(modulus() == other.modulus(), ErrorCode::kInvalidArgument,
          "ZnFunction: modulus mismatch");
  std::vector<Complex> v(values_);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += other.values_[i];
  return ZnFunction(std::move(v));
}

ZnFunction ZnFunction::operator-(const ZnFunction& other) const {
  return *this + other.scaled(-1.0);
}

ZnFunction ZnFunction::scaled(Complex factor) const {
  std::vector<Complex> v(values_);
  for (auto& z : v) z *= factor;
  return ZnFunction(std::move(v));
}

Spectrum::Spectrum(std::vector<Complex> coefficients)
    : coefficients_(std::move(coefficients)) {
  require(!coefficients_.empty(), ErrorCode::kInvalidArgument,
          "Spectrum: N must be >= 1");
}

Spectrum Spectrum::zeros(std::size_t N) { return Spectrum(std::vector<Complex>(N)); }

Spectrum dft(const ZnFunction& f) {
  std::vector<Complex> c(f.values().begin(), f.values().end());
  fft::forward(c);
  const double scale = 1.0 / static_cast<double>(c.size());
  for (auto& z : c) z *= scale;
  return Spectrum(std::move(c));
}

ZnFunction inverse_dft(const Spectrum& F) {
  std::vector<Complex> v(F.coefficients().begin(), F.coefficients().end());
  fft::backward(v);
  return ZnFunction(std::move(v));
}

namespace {

double pnorm_sum(std::span<const Complex> values, double p, double weight) {
  require(p >= 1.0, ErrorCode::kInvalidArgument, "norm: p must be >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& z : values) m = std::max(m, std::abs(z));
    return m;
  }
  double scale = 0.0;
  for (const auto& z : values) scale = std::max(scale, std::abs(z));
  if (scale == 0.0) return 0.0;
  // Factor out the max to avoid overflow for large p.
  double s = 0.0;
  for (const auto& z : values) s += std::pow(std::abs(z) / scale, p);
  return scale * std::pow(s * weight, 1.0 / p);
}

}  // namespace

double lp_norm(const ZnFunction& f, double p) {
  return pnorm_sum(f.values(), p, 1.0 / static_cast<double>(f.modulus()));
}

double ellp_norm(const Spectrum& F, double p) {
  return pnorm_sum(F.coefficients(), p, 1.0);
}

ZnFunction balanced_function(const IntegerSet& A) {
  const auto N = static_cast<std::size_t>(A.ambient());
  const double delta = A.density();
  std::vector<Complex> v(N, -delta);
  for (auto x : A.elements()) v[static_cast<std::size_t>(x) % N] += 1.0;
  return ZnFunction(std::move(v));
}

std::vector<Complex> correlation(const ZnFunction& h, const ZnFunction& g) {
  require(h.modulus() == g.modulus(), ErrorCode::kInvalidArgument,
          "correlation: modulus mismatch");
  const std::size_t N = h.modulus();
  const Spectrum hh = dft(h);
  const Spectrum gg = dft(g);
  // (1/N) sum_x h(x) g(x - t) = sum_xi h^(xi) g^(-xi) e(t xi / N)
  std::vector<Complex> prod(N);
  for (std::size_t xi = 0; xi < N; ++xi) prod[xi] = hh[xi] * gg[(N - xi) % N];
  fft::backward(prod);
  return prod;
}

}  // namespace polyrec
