#include "polyrec/config.hpp"

#include <cmath>

#include "polyrec/error.hpp"

namespace polyrec {

namespace {

void positive(double v, const char* field) {
  require(std::isfinite(v) && v > 0.0, ErrorCode::kInvalidArgument,
          std::string("config: field '") + field + "' must be a positive number");
}

}  // namespace

void validate(const ExperimentConfig& config) {
  const auto& c = config.constants;
  positive(c.C1, "constants.C1");
  positive(c.C_kl, "constants.C_kl");
  require(c.K >= 1, ErrorCode::kInvalidArgument,
          "config: field 'constants.K' must be an integer >= 1");
  positive(c.C_k, "constants.C_k");
  positive(c.c_shift, "constants.c_shift");
  positive(c.B_quality, "constants.B_quality");

  const auto& t = config.tolerances;
  positive(t.fourier, "tolerances.fourier");
  positive(t.decomposition, "tolerances.decomposition");
  positive(t.poisson, "tolerances.poisson");
  positive(t.f_lattice, "tolerances.f_lattice");
  positive(t.theta_tail, "tolerances.theta_tail");
  positive(t.moment_relative, "tolerances.moment_relative");

  const auto& b = config.budgets;
  require(b.signature_cells > 0, ErrorCode::kInvalidArgument,
          "config: field 'budgets.signature_cells' must be positive");
  require(b.hash_tuples > 0, ErrorCode::kInvalidArgument,
          "config: field 'budgets.hash_tuples' must be positive");
  require(b.lattice_points > 0, ErrorCode::kInvalidArgument,
          "config: field 'budgets.lattice_points' must be positive");
  require(b.lift_box > 0, ErrorCode::kInvalidArgument,
          "config: field 'budgets.lift_box' must be positive");
  require(config.threads >= 1 && config.threads <= 256, ErrorCode::kInvalidArgument,
          "config: field 'threads' must lie in [1, 256]");
}

}  // namespace polyrec
