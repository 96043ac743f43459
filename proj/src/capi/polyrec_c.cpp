#include "polyrec/polyrec.h"

#include <cstring>
#include <new>
#include <string>

#include "polyrec/ergodic_lab.hpp"
#include "polyrec/error.hpp"
#include "polyrec/integer_set.hpp"
#include "polyrec/lattice_dioph.hpp"
#include "polyrec/polyfam.hpp"
#include "polyrec/weyl_tarry.hpp"
#include "polyrec/zn_fourier.hpp"
#include "runs.hpp"

struct polyrec_config {
  polyrec::ExperimentConfig value;
};
struct polyrec_set {
  polyrec::IntegerSet value;
};
struct polyrec_family {
  polyrec::PolynomialFamily value;
};
struct polyrec_lattice {
  polyrec::ProductLattice value;
};
struct polyrec_system {
  polyrec::FiniteMPSystem value;
};
struct polyrec_report {
  std::string json;
  std::string csv;
  bool passed = false;
};

namespace {

thread_local std::string last_error;

polyrec_status to_status(polyrec::ErrorCode code) {
  switch (code) {
    case polyrec::ErrorCode::kInvalidArgument: return POLYREC_INVALID_ARGUMENT;
    case polyrec::ErrorCode::kPrecondition: return POLYREC_PRECONDITION;
    case polyrec::ErrorCode::kBudgetExceeded: return POLYREC_BUDGET_EXCEEDED;
    case polyrec::ErrorCode::kNumerical: return POLYREC_NUMERICAL;
    case polyrec::ErrorCode::kInternal: return POLYREC_INTERNAL;
  }
  return POLYREC_INTERNAL;
}

// Runs `body`, translating exceptions into a status and the thread-local message.
template <typename Body>
polyrec_status guarded(Body&& body) {
  try {
    last_error.clear();
    body();
    return POLYREC_OK;
  } catch (const polyrec::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const nlohmann::json::exception& e) {
    last_error = std::string("json: ") + e.what();
    return POLYREC_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return POLYREC_OUT_OF_MEMORY;
  } catch (const std::exception& e) {
    last_error = e.what();
    return POLYREC_INTERNAL;
  }
}

polyrec_status null_pointer(const char* what) {
  last_error = std::string("null pointer: ") + what;
  return POLYREC_NULL_POINTER;
}

#define POLYREC_CHECK(ptr) \
  if (!(ptr)) return null_pointer(#ptr)

char* duplicate(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* polyrec_version(void) { return "1.0.0"; }

const char* polyrec_status_string(polyrec_status status) {
  switch (status) {
    case POLYREC_OK: return "ok";
    case POLYREC_INVALID_ARGUMENT: return "invalid argument";
    case POLYREC_PRECONDITION: return "precondition violated";
    case POLYREC_BUDGET_EXCEEDED: return "budget exceeded";
    case POLYREC_NUMERICAL: return "numerical check failed";
    case POLYREC_INTERNAL: return "internal error";
    case POLYREC_NULL_POINTER: return "null pointer";
    case POLYREC_OUT_OF_MEMORY: return "out of memory";
  }
  return "unknown status";
}

const char* polyrec_last_error(void) { return last_error.c_str(); }

void polyrec_string_free(char* s) { delete[] s; }

polyrec_status polyrec_config_default(polyrec_config** out) {
  POLYREC_CHECK(out);
  return guarded([&] { *out = new polyrec_config{}; });
}

polyrec_status polyrec_config_from_json(const char* json, polyrec_config** out) {
  POLYREC_CHECK(json);
  POLYREC_CHECK(out);
  return guarded([&] {
    const auto j = nlohmann::json::parse(json);
    *out = new polyrec_config{polyrec::capi::config_from_json(j)};
  });
}

polyrec_status polyrec_config_to_json(const polyrec_config* config, char** out) {
  POLYREC_CHECK(config);
  POLYREC_CHECK(out);
  return guarded([&] { *out = duplicate(polyrec::capi::config_to_json(config->value).dump(2)); });
}

void polyrec_config_free(polyrec_config* config) { delete config; }

polyrec_status polyrec_set_create(int64_t N, const int64_t* elements, size_t count,
                                  polyrec_set** out) {
  POLYREC_CHECK(out);
  if (count > 0) POLYREC_CHECK(elements);
  return guarded([&] {
    std::vector<std::int64_t> e(elements, elements + count);
    *out = new polyrec_set{polyrec::IntegerSet(N, std::move(e))};
  });
}

polyrec_status polyrec_set_generate(const char* kind, int64_t N, int64_t start, int64_t step,
                                    double density, uint64_t seed, polyrec_set** out) {
  POLYREC_CHECK(kind);
  POLYREC_CHECK(out);
  return guarded([&] {
    const std::string k = kind;
    if (k == "full") {
      *out = new polyrec_set{polyrec::full_set(N)};
    } else if (k == "evens" || k == "even") {
      *out = new polyrec_set{polyrec::even_set(N)};
    } else if (k == "ap") {
      *out = new polyrec_set{polyrec::progression_set(N, start, step)};
    } else if (k == "random") {
      *out = new polyrec_set{polyrec::random_set(N, density, seed)};
    } else {
      polyrec::fail(polyrec::ErrorCode::kInvalidArgument,
                    "set kind must be full, evens, ap or random");
    }
  });
}

polyrec_status polyrec_set_size(const polyrec_set* set, size_t* out) {
  POLYREC_CHECK(set);
  POLYREC_CHECK(out);
  *out = set->value.size();
  return POLYREC_OK;
}

polyrec_status polyrec_set_ambient(const polyrec_set* set, int64_t* out) {
  POLYREC_CHECK(set);
  POLYREC_CHECK(out);
  *out = set->value.ambient();
  return POLYREC_OK;
}

polyrec_status polyrec_set_elements(const polyrec_set* set, int64_t* buffer, size_t capacity,
                                    size_t* written) {
  POLYREC_CHECK(set);
  POLYREC_CHECK(written);
  if (capacity > 0) POLYREC_CHECK(buffer);
  const auto e = set->value.elements();
  for (size_t i = 0; i < e.size() && i < capacity; ++i) buffer[i] = e[i];
  *written = e.size();
  return POLYREC_OK;
}

void polyrec_set_free(polyrec_set* set) { delete set; }

polyrec_status polyrec_family_parse(const char* literal, polyrec_family** out) {
  POLYREC_CHECK(literal);
  POLYREC_CHECK(out);
  return guarded([&] { *out = new polyrec_family{polyrec::PolynomialFamily::parse(literal)}; });
}

polyrec_status polyrec_family_size(const polyrec_family* family, size_t* out) {
  POLYREC_CHECK(family);
  POLYREC_CHECK(out);
  *out = family->value.size();
  return POLYREC_OK;
}

polyrec_status polyrec_family_degree(const polyrec_family* family, int* out) {
  POLYREC_CHECK(family);
  POLYREC_CHECK(out);
  *out = family->value.degree_bound();
  return POLYREC_OK;
}

void polyrec_family_free(polyrec_family* family) { delete family; }

polyrec_status polyrec_lattice_from_json(const char* json, polyrec_lattice** out) {
  POLYREC_CHECK(json);
  POLYREC_CHECK(out);
  return guarded([&] {
    const auto j = nlohmann::json::parse(json);
    polyrec::require(j.is_object() && j.contains("blocks") && j["blocks"].is_array(),
                     polyrec::ErrorCode::kInvalidArgument, "lattice: expected {\"blocks\": [...]}");
    std::vector<Eigen::MatrixXd> bases;
    for (const auto& b : j["blocks"]) {
      const auto d = b.at("dim").get<Eigen::Index>();
      const auto v = b.at("basis").get<std::vector<double>>();
      polyrec::require(d >= 0 && static_cast<Eigen::Index>(v.size()) == d * d,
                       polyrec::ErrorCode::kInvalidArgument,
                       "lattice: block basis must have dim*dim entries");
      Eigen::MatrixXd m(d, d);
      for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index c = 0; c < d; ++c) m(i, c) = v[static_cast<size_t>(i * d + c)];
      bases.push_back(std::move(m));
    }
    *out = new polyrec_lattice{polyrec::ProductLattice(std::move(bases))};
  });
}

polyrec_status polyrec_lattice_scaled_integer(double R, const size_t* dims, size_t count,
                                              polyrec_lattice** out) {
  POLYREC_CHECK(dims);
  POLYREC_CHECK(out);
  return guarded([&] {
    *out = new polyrec_lattice{
        polyrec::ProductLattice::scaled_integer(R, std::vector<std::size_t>(dims, dims + count))};
  });
}

polyrec_status polyrec_lattice_dimension(const polyrec_lattice* lattice, size_t* out) {
  POLYREC_CHECK(lattice);
  POLYREC_CHECK(out);
  *out = lattice->value.dimension();
  return POLYREC_OK;
}

polyrec_status polyrec_lattice_determinant(const polyrec_lattice* lattice, double* out) {
  POLYREC_CHECK(lattice);
  POLYREC_CHECK(out);
  *out = lattice->value.determinant();
  return POLYREC_OK;
}

void polyrec_lattice_free(polyrec_lattice* lattice) { delete lattice; }

polyrec_status polyrec_theta(const polyrec_lattice* lattice, double t, const double* x,
                             size_t length, int dual, double* out) {
  POLYREC_CHECK(lattice);
  POLYREC_CHECK(out);
  if (length > 0) POLYREC_CHECK(x);
  return guarded([&] {
    const auto& L = lattice->value;
    polyrec::require(length == L.dimension(), polyrec::ErrorCode::kInvalidArgument,
                     "theta: point length must equal the lattice dimension");
    polyrec::AlphaVector p;
    size_t offset = 0;
    for (const auto& b : L.blocks()) {
      p.blocks.push_back(Eigen::Map<const Eigen::VectorXd>(x + offset, static_cast<Eigen::Index>(b.dim())));
      offset += b.dim();
    }
    *out = polyrec::theta(L, t, p, dual ? polyrec::ThetaSide::kDual : polyrec::ThetaSide::kDirect);
  });
}

polyrec_status polyrec_a_lambda(const polyrec_lattice* lattice, double poisson_tol,
                                double* direct, double* dual) {
  POLYREC_CHECK(lattice);
  POLYREC_CHECK(direct);
  POLYREC_CHECK(dual);
  return guarded([&] {
    const auto v = polyrec::a_lambda(lattice->value, poisson_tol);
    *direct = v.direct;
    *dual = v.dual;
  });
}

polyrec_status polyrec_system_parse(const char* spec, polyrec_system** out) {
  POLYREC_CHECK(spec);
  POLYREC_CHECK(out);
  return guarded([&] { *out = new polyrec_system{polyrec::FiniteMPSystem::parse(spec)}; });
}

polyrec_status polyrec_system_from_permutation(const size_t* permutation, size_t m,
                                               polyrec_system** out) {
  POLYREC_CHECK(permutation);
  POLYREC_CHECK(out);
  return guarded([&] {
    *out = new polyrec_system{
        polyrec::FiniteMPSystem(std::vector<std::size_t>(permutation, permutation + m))};
  });
}

polyrec_status polyrec_system_size(const polyrec_system* system, size_t* out) {
  POLYREC_CHECK(system);
  POLYREC_CHECK(out);
  *out = system->value.size();
  return POLYREC_OK;
}

void polyrec_system_free(polyrec_system* system) { delete system; }

polyrec_status polyrec_recurrence_measure(const polyrec_system* system, const size_t* A,
                                          size_t count, int64_t shift, int64_t* num,
                                          int64_t* den) {
  POLYREC_CHECK(system);
  POLYREC_CHECK(num);
  POLYREC_CHECK(den);
  if (count > 0) POLYREC_CHECK(A);
  return guarded([&] {
    const polyrec::Subset S(system->value.size(), std::vector<std::size_t>(A, A + count));
    const auto r = polyrec::recurrence_measure(system->value, S, shift);
    // keep the denominator at m rather than the reduced form
    const auto m = static_cast<std::int64_t>(system->value.size());
    *den = m;
    *num = static_cast<std::int64_t>(r * m);
  });
}

polyrec_status polyrec_dft(const double* re, const double* im, size_t N, double* out_re,
                           double* out_im) {
  POLYREC_CHECK(re);
  POLYREC_CHECK(im);
  POLYREC_CHECK(out_re);
  POLYREC_CHECK(out_im);
  return guarded([&] {
    std::vector<polyrec::Complex> v(N);
    for (size_t i = 0; i < N; ++i) v[i] = {re[i], im[i]};
    const auto F = polyrec::dft(polyrec::ZnFunction(std::move(v)));
    for (size_t i = 0; i < N; ++i) {
      out_re[i] = F[i].real();
      out_im[i] = F[i].imag();
    }
  });
}

polyrec_status polyrec_tarry_count(int K, int k, int64_t M, const char* method, char** count) {
  POLYREC_CHECK(count);
  return guarded([&] {
    const std::string m = method ? method : "auto";
    polyrec::TarryMethod tm = polyrec::TarryMethod::kAuto;
    if (m == "convolution") {
      tm = polyrec::TarryMethod::kConvolution;
    } else if (m == "meet-in-the-middle") {
      tm = polyrec::TarryMethod::kMeetInTheMiddle;
    } else {
      polyrec::require(m == "auto", polyrec::ErrorCode::kInvalidArgument,
                       "tarry: method must be auto, convolution or meet-in-the-middle");
    }
    *count = duplicate(polyrec::tarry_count(K, k, M, tm).count.str());
  });
}

polyrec_status polyrec_difference_identity(int j, int64_t x, int64_t d, int* equal) {
  POLYREC_CHECK(equal);
  return guarded([&] { *equal = polyrec::check_difference_identity(j, x, d).equal ? 1 : 0; });
}

polyrec_status polyrec_run(const char* subcommand, const char* args_json,
                           const polyrec_config* config, polyrec_report** out) {
  POLYREC_CHECK(subcommand);
  POLYREC_CHECK(out);
  return guarded([&] {
    const auto args = args_json ? nlohmann::json::parse(args_json) : nlohmann::json::object();
    const polyrec::ExperimentConfig cfg = config ? config->value : polyrec::ExperimentConfig{};
    const auto r = polyrec::capi::run_subcommand(subcommand, args, cfg);
    *out = new polyrec_report{r.document.dump(2), r.csv, r.passed};
  });
}

polyrec_status polyrec_report_json(const polyrec_report* report, const char** out) {
  POLYREC_CHECK(report);
  POLYREC_CHECK(out);
  *out = report->json.c_str();
  return POLYREC_OK;
}

polyrec_status polyrec_report_csv(const polyrec_report* report, const char** out) {
  POLYREC_CHECK(report);
  POLYREC_CHECK(out);
  *out = report->csv.c_str();
  return POLYREC_OK;
}

polyrec_status polyrec_report_passed(const polyrec_report* report, int* out) {
  POLYREC_CHECK(report);
  POLYREC_CHECK(out);
  *out = report->passed ? 1 : 0;
  return POLYREC_OK;
}

void polyrec_report_free(polyrec_report* report) { delete report; }

}  // extern "C"
