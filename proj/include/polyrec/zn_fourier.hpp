#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "polyrec/integer_set.hpp"
#include "polyrec/numeric_types.hpp"

namespace polyrec {

// A complex-valued function on Z_N, values indexed by residues 0..N-1.
class ZnFunction {
 public:
  explicit ZnFunction(std::vector<Complex> values);
  static ZnFunction zeros(std::size_t N);
  static ZnFunction constant(std::size_t N, Complex c);
  // Indicator of A after identifying [1, N] with Z_N (N maps to 0).
  static ZnFunction indicator(const IntegerSet& A);
  static ZnFunction indicator(std::size_t N, std::span<const std::size_t> residues);
  // x -> e(x xi / N)
  static ZnFunction character(std::size_t N, std::size_t xi);

  std::size_t modulus() const { return values_.size(); }
  std::span<const Complex> values() const { return values_; }
  const Complex& operator[](std::size_t x) const { return values_[x]; }

  ZnFunction operator+(const ZnFunction& other) const;
  ZnFunction operator-(const ZnFunction& other) const;
  ZnFunction scaled(Complex factor) const;

 private:
  std::vector<Complex> values_;
};

// Fourier coefficients f^(xi), xi in 0..N-1.
class Spectrum {
 public:
  explicit Spectrum(std::vector<Complex> coefficients);
  static Spectrum zeros(std::size_t N);

  std::size_t modulus() const { return coefficients_.size(); }
  std::span<const Complex> coefficients() const { return coefficients_; }
  const Complex& operator[](std::size_t xi) const { return coefficients_[xi]; }

 private:
  std::vector<Complex> coefficients_;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// f^(xi) = (1/N) sum_x f(x) e(-x xi / N)
Spectrum dft(const ZnFunction& f);
// f(x) = sum_xi F(xi) e(x xi / N)
ZnFunction inverse_dft(const Spectrum& F);

// ((1/N) sum |f|^p)^(1/p); p = kInfinity gives max |f|. Rejects p < 1.
double lp_norm(const ZnFunction& f, double p);
// (sum |F|^p)^(1/p) under counting measure. Rejects p < 1.
double ellp_norm(const Spectrum& F, double p);

// f_A = 1_A - |A|/N on Z_N.
ZnFunction balanced_function(const IntegerSet& A);

// out[t] = (1/N) sum_x h(x) g(x - t) for every t in Z_N.
std::vector<Complex> correlation(const ZnFunction& h, const ZnFunction& g);

namespace fft {

// Unnormalised in-place transform of any length:
//   forward  X[k] = sum_n x[n] e(-nk/N)
//   backward X[k] = sum_n x[n] e(+nk/N)
// Radix-2 for powers of two, Bluestein's chirp-z otherwise.
void forward(std::span<Complex> data);
void backward(std::span<Complex> data);

// Exact integer autocorrelation over Z (no wrap-around):
// out[s] = #{x : mask[x] && mask[x + s]} for s in [0, mask.size()).
std::vector<std::int64_t> linear_autocorrelation(std::span<const std::uint8_t> mask);
// Same but cyclic in Z_n: out[s] = #{x : mask[x] && mask[(x + s) mod n]}.
std::vector<std::int64_t> cyclic_autocorrelation(std::span<const std::uint8_t> mask);

}  // namespace fft

}  // namespace polyrec
