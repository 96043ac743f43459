#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polyrec/numeric_types.hpp"

namespace polyrec {

// A permutation T of {0, ..., m-1} with the uniform measure.
class FiniteMPSystem {
 public:
  explicit FiniteMPSystem(std::vector<std::size_t> permutation);

  static FiniteMPSystem rotation(std::size_t m, std::int64_t a);
  // (x, y) -> (x + a, y + x) on Z_m x Z_m, flattened as x m + y.
  static FiniteMPSystem skew(std::size_t m, std::int64_t a);
  static FiniteMPSystem random(std::size_t m, std::uint64_t seed);
  // "rotation:m:a", "skew:m:a" or "perm:<path>" (whitespace or comma separated).
  static FiniteMPSystem parse(const std::string& spec);

  std::size_t size() const { return perm_.size(); }
  const std::vector<std::size_t>& permutation() const { return perm_; }
  // T^s x for any integer s, via the cycle containing x.
  std::size_t apply(std::size_t x, std::int64_t s) const;
  BigInt order() const;
  std::size_t cycle_count() const { return cycles_.size(); }

 private:
  std::vector<std::size_t> perm_;
  std::vector<std::vector<std::size_t>> cycles_;
  std::vector<std::size_t> cycle_of_;
  std::vector<std::size_t> position_;
};

class Subset {
 public:
  Subset(std::size_t m, std::vector<std::size_t> elements);
  static Subset all(std::size_t m);
  static Subset random(std::size_t m, double density, std::uint64_t seed);

  std::size_t ambient() const { return mask_.size(); }
  const std::vector<std::size_t>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  bool contains(std::size_t x) const { return x < mask_.size() && mask_[x]; }
  Rational measure() const;

 private:
  std::vector<std::size_t> elements_;
  std::vector<bool> mask_;
};

// |A ∩ T^{-shift} A| / m.
Rational recurrence_measure(const FiniteMPSystem& sys, const Subset& A, std::int64_t shift);
// T^{-1}E as a subset.
Subset preimage(const FiniteMPSystem& sys, const Subset& E);

struct KhintchineResult {
  bool precondition_met = false;   // N >= ceil(1/eps)
  bool found = false;
  std::size_t j = 0, k = 0;        // 1-based, j < k
  std::int64_t n = 0;              // v_k - v_j
  Rational measure;                // mu(A ∩ T^{-c n} A)
  Rational threshold;              // mu(A)^2 - eps
  bool strict = false;             // measure > threshold
  std::size_t pairs_scanned = 0;
};

// First pair (j, k) in lexicographic order with
// mu(A ∩ T^{-multiplier (v_k - v_j)} A) >= mu(A)^2 - eps.
// Throws ErrorCode::kPrecondition when N < max(2, ceil(1/eps)) unless permissive.
KhintchineResult khintchine_search(const FiniteMPSystem& sys, const Subset& A, double eps,
                                   const std::vector<std::int64_t>& v,
                                   std::int64_t multiplier = 1, bool permissive = false);

struct GriesmerResult {
  bool found = false;
  std::int64_t n = 0;
  std::vector<std::int64_t> constants;          // padded to a power of two
  std::vector<Rational> measures;               // per original constant, at n
  Rational threshold;
  std::vector<std::size_t> clique_sizes;        // red clique size per level
  bool brute_force_exists = false;              // some n in B - B works for all
  std::optional<std::int64_t> brute_force_n;    // smallest positive such n
};

// Ramsey recursion over the constants; a returned n is re-verified against every
// constant and a mismatch throws ErrorCode::kInternal.
GriesmerResult griesmer_search(const FiniteMPSystem& sys, const Subset& A, double eps,
                               const std::vector<std::int64_t>& constants,
                               const std::vector<std::int64_t>& v);

}  // namespace polyrec
