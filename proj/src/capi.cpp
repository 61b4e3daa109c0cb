#include "lambert_creep.h"

#include <cstdlib>
#include <cstring>
#include <map>
#include <new>
#include <string>
#include <vector>

#include "json.hpp"
#include "lambertcreep/creep.hpp"
#include "lambertcreep/lambertw.hpp"
#include "lambertcreep/validation.hpp"

namespace core = lambertcreep;

struct lc_context {
  core::tr::QuadratureConfig quad;
  core::tr::InversionConfig inv;
  bool linear_model = false;
  std::map<std::string, double> tol_overrides;
  std::string err;
};

namespace {

template <typename Body>
lc_status guard(lc_context* ctx, Body&& body) {
  if (ctx == nullptr) return LC_ERR_ARGUMENT;
  ctx->err.clear();
  try {
    return body();
  } catch (const core::DomainError& e) {
    ctx->err = e.what();
    return LC_ERR_DOMAIN;
  } catch (const core::ConvergenceError& e) {
    ctx->err = e.what();
    return LC_ERR_CONVERGENCE;
  } catch (const core::CutError& e) {
    ctx->err = e.what();
    return LC_ERR_CUT;
  } catch (const core::MethodError& e) {
    ctx->err = e.what();
    return LC_ERR_METHOD;
  } catch (const core::GridError& e) {
    ctx->err = e.what();
    return LC_ERR_GRID;
  } catch (const core::IoError& e) {
    ctx->err = e.what();
    return LC_ERR_IO;
  } catch (const std::exception& e) {
    ctx->err = e.what();
    return LC_ERR_INTERNAL;
  }
}

lc_status fail_argument(lc_context* ctx, const char* message) {
  ctx->err = message;
  return LC_ERR_ARGUMENT;
}

core::creep::PsiModel model_of(const lc_context* ctx) {
  return ctx->linear_model ? core::creep::linear_psi_model()
                           : core::creep::lambert_psi_model();
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename F>
lc_status eval_scalar(lc_context* ctx, double* out, F&& f) {
  return guard(ctx, [&]() -> lc_status {
    if (out == nullptr) return fail_argument(ctx, "null output pointer");
    *out = f();
    return LC_OK;
  });
}

lc_status eval_spectrum(lc_context* ctx, double* value, double* est_error,
                        const core::tr::QuadResult& r) {
  if (value == nullptr || est_error == nullptr) {
    return fail_argument(ctx, "null output pointer");
  }
  *value = r.value;
  *est_error = r.est_error;
  return LC_OK;
}

}  // namespace

extern "C" {

lc_context* lc_context_new(void) { return new (std::nothrow) lc_context; }

void lc_context_free(lc_context* ctx) { delete ctx; }

const char* lc_version(void) { return "1.0.0"; }

const char* lc_last_error(const lc_context* ctx) {
  return ctx == nullptr ? "null context" : ctx->err.c_str();
}

lc_status lc_set_quadrature(lc_context* ctx, double abs_tol, double rel_tol,
                            int max_subdivisions, double truncation_point,
                            int tail_policy) {
  return guard(ctx, [&]() -> lc_status {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
      return fail_argument(ctx, "tolerances must be positive");
    }
    if (max_subdivisions < 1) {
      return fail_argument(ctx, "max_subdivisions must be at least 1");
    }
    if (!(truncation_point > 1.0)) {
      return fail_argument(ctx, "truncation_point must exceed 1");
    }
    if (tail_policy < 0 || tail_policy > 2) {
      return fail_argument(ctx, "tail_policy must be 0, 1 or 2");
    }
    ctx->quad.abs_tol = abs_tol;
    ctx->quad.rel_tol = rel_tol;
    ctx->quad.max_subdivisions = max_subdivisions;
    ctx->quad.truncation_point = truncation_point;
    ctx->quad.tail_policy = static_cast<core::tr::TailPolicy>(tail_policy);
    return LC_OK;
  });
}

lc_status lc_set_inversion(lc_context* ctx, int method, int gs_terms,
                           int talbot_nodes) {
  return guard(ctx, [&]() -> lc_status {
    if (method != 0 && method != 1) {
      return fail_argument(ctx, "method must be 0 (Gaver-Stehfest) or 1 (Talbot)");
    }
    if (gs_terms < 2 || gs_terms > 20 || gs_terms % 2 != 0) {
      return fail_argument(ctx, "gs_terms must be even and within [2, 20]");
    }
    if (talbot_nodes < 8 || talbot_nodes > 256) {
      return fail_argument(ctx, "talbot_nodes must lie in [8, 256]");
    }
    ctx->inv.method = method == 0 ? core::tr::InversionMethod::gaver_stehfest
                                  : core::tr::InversionMethod::talbot;
    ctx->inv.gs_terms = gs_terms;
    ctx->inv.talbot_nodes = talbot_nodes;
    return LC_OK;
  });
}

lc_status lc_set_test_model(lc_context* ctx, const char* name) {
  return guard(ctx, [&]() -> lc_status {
    if (name == nullptr) return fail_argument(ctx, "null model name");
    const std::string n(name);
    if (n == "lambert") {
      ctx->linear_model = false;
    } else if (n == "linear") {
      ctx->linear_model = true;
    } else {
      return fail_argument(ctx, "unknown test model; use lambert or linear");
    }
    return LC_OK;
  });
}

lc_status lc_config_from_json(lc_context* ctx, const char* json_text) {
  return guard(ctx, [&]() -> lc_status {
    if (json_text == nullptr) return fail_argument(ctx, "null config text");
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
      return fail_argument(ctx, e.what());
    }
    if (!doc.is_object()) return fail_argument(ctx, "config must be a JSON object");

    lc_context staged = *ctx;
    try {
      for (const auto& [key, value] : doc.items()) {
        if (key == "quadrature") {
          for (const auto& [f, v] : value.items()) {
            if (f == "abs_tol") {
              staged.quad.abs_tol = v.get<double>();
            } else if (f == "rel_tol") {
              staged.quad.rel_tol = v.get<double>();
            } else if (f == "max_subdivisions") {
              staged.quad.max_subdivisions = v.get<int>();
            } else if (f == "truncation_point") {
              staged.quad.truncation_point = v.get<double>();
            } else if (f == "tail_policy") {
              const std::string p = v.get<std::string>();
              if (p == "none") {
                staged.quad.tail_policy = core::tr::TailPolicy::none;
              } else if (p == "analytic_tail") {
                staged.quad.tail_policy = core::tr::TailPolicy::analytic_tail;
              } else if (p == "log_substitution") {
                staged.quad.tail_policy = core::tr::TailPolicy::log_substitution;
              } else {
                return fail_argument(ctx, "unknown tail_policy value");
              }
            } else {
              return fail_argument(ctx, "unknown quadrature field");
            }
          }
          if (!(staged.quad.abs_tol > 0.0) || !(staged.quad.rel_tol > 0.0) ||
              staged.quad.max_subdivisions < 1 ||
              !(staged.quad.truncation_point > 1.0)) {
            return fail_argument(ctx, "invalid quadrature values");
          }
        } else if (key == "inversion") {
          for (const auto& [f, v] : value.items()) {
            if (f == "method") {
              const std::string m = v.get<std::string>();
              if (m == "gaver_stehfest") {
                staged.inv.method = core::tr::InversionMethod::gaver_stehfest;
              } else if (m == "talbot") {
                staged.inv.method = core::tr::InversionMethod::talbot;
              } else {
                return fail_argument(ctx, "unknown inversion method");
              }
            } else if (f == "gs_terms") {
              staged.inv.gs_terms = v.get<int>();
            } else if (f == "talbot_nodes") {
              staged.inv.talbot_nodes = v.get<int>();
            } else {
              return fail_argument(ctx, "unknown inversion field");
            }
          }
          if (staged.inv.gs_terms < 2 || staged.inv.gs_terms > 20 ||
              staged.inv.gs_terms % 2 != 0 || staged.inv.talbot_nodes < 8 ||
              staged.inv.talbot_nodes > 256) {
            return fail_argument(ctx, "invalid inversion values");
          }
        } else if (key == "tolerances") {
          for (const auto& [f, v] : value.items()) {
            staged.tol_overrides[f] = v.get<double>();
          }
        } else {
          return fail_argument(ctx, "unknown top-level config key");
        }
      }
    } catch (const nlohmann::json::exception& e) {
      return fail_argument(ctx, e.what());
    }
    staged.err.clear();
    *ctx = std::move(staged);
    return LC_OK;
  });
}

lc_status lc_w0(lc_context* ctx, double x, double* out) {
  return eval_scalar(ctx, out, [&] { return core::lw::w0_real(x); });
}

lc_status lc_w0_prime(lc_context* ctx, double t, double* out) {
  return eval_scalar(ctx, out, [&] { return core::lw::w0_prime_real(t); });
}

lc_status lc_w0_asym(lc_context* ctx, double t, double* out) {
  return eval_scalar(ctx, out, [&] { return core::lw::w0_asymptotic(t); });
}

lc_status lc_w0_prime_asym(lc_context* ctx, double t, double* out) {
  return eval_scalar(ctx, out, [&] { return core::lw::w0_prime_asymptotic(t); });
}

lc_status lc_psi(lc_context* ctx, double t, double* out) {
  return eval_scalar(ctx, out, [&] { return core::creep::psi(t); });
}

lc_status lc_psi_prime(lc_context* ctx, double t, double* out) {
  return eval_scalar(ctx, out, [&] { return core::creep::psi_prime(t); });
}

lc_status lc_creep_compliance(lc_context* ctx, double J0, double q, double t,
                              double* out) {
  return eval_scalar(ctx, out, [&] {
    return core::creep::creep_compliance(core::creep::CreepModel{J0, q}, t);
  });
}

lc_status lc_relaxation_modulus(lc_context* ctx, double J0, double q, double t,
                                double* out) {
  return eval_scalar(ctx, out, [&] {
    return core::creep::relaxation_modulus(core::creep::CreepModel{J0, q}, t);
  });
}

lc_status lc_spectrum_rho(lc_context* ctx, double u, double* value,
                          double* est_error) {
  return guard(ctx, [&]() -> lc_status {
    const double v = core::creep::rho(u);
    core::tr::QuadResult r{v, std::abs(v) * 1e-12, true};
    return eval_spectrum(ctx, value, est_error, r);
  });
}

lc_status lc_spectrum_rho_over_u(lc_context* ctx, double u, double* value,
                                 double* est_error) {
  return guard(ctx, [&]() -> lc_status {
    const double v = core::creep::rho(u) / u;
    core::tr::QuadResult r{v, std::abs(v) * 1e-12, true};
    return eval_spectrum(ctx, value, est_error, r);
  });
}

lc_status lc_spectrum_K(lc_context* ctx, double r, double* value,
                        double* est_error) {
  return guard(ctx, [&]() -> lc_status {
    return eval_spectrum(ctx, value, est_error,
                         core::creep::spectrum_K(r, ctx->quad));
  });
}

lc_status lc_spectrum_H(lc_context* ctx, double tau, double* value,
                        double* est_error) {
  return guard(ctx, [&]() -> lc_status {
    return eval_spectrum(ctx, value, est_error,
                         core::creep::spectrum_H(tau, ctx->quad));
  });
}

lc_status lc_psi_prime_from_rho(lc_context* ctx, double t, double* value,
                                double* est_error) {
  return guard(ctx, [&]() -> lc_status {
    return eval_spectrum(ctx, value, est_error,
                         core::creep::psi_prime_from_rho(t, ctx->quad));
  });
}

lc_status lc_phi_laplace(lc_context* ctx, const double* times, size_t n,
                         double* values, int* unstable) {
  return guard(ctx, [&]() -> lc_status {
    if (times == nullptr || values == nullptr || unstable == nullptr) {
      return fail_argument(ctx, "null buffer");
    }
    if (n == 0) return fail_argument(ctx, "empty time grid");
    const std::vector<double> ts(times, times + n);
    const auto grid =
        core::creep::phi_laplace(ts, ctx->inv, ctx->quad, model_of(ctx));
    for (size_t i = 0; i < n; ++i) {
      values[i] = grid.values[i];
      unstable[i] = grid.unstable[i] ? 1 : 0;
    }
    return LC_OK;
  });
}

lc_status lc_phi_volterra(lc_context* ctx, double t_max, int steps,
                          double* times, double* values, int* step_warning) {
  return guard(ctx, [&]() -> lc_status {
    if (times == nullptr || values == nullptr || step_warning == nullptr) {
      return fail_argument(ctx, "null buffer");
    }
    const auto grid = core::creep::phi_volterra(t_max, steps, model_of(ctx));
    for (size_t i = 0; i < grid.times.size(); ++i) {
      times[i] = grid.times[i];
      values[i] = grid.values[i];
    }
    *step_warning = grid.step_warning ? 1 : 0;
    return LC_OK;
  });
}

lc_status lc_validate(lc_context* ctx, int as_json, char** out_report,
                      int* all_pass) {
  return guard(ctx, [&]() -> lc_status {
    if (out_report == nullptr || all_pass == nullptr) {
      return fail_argument(ctx, "null output pointer");
    }
    core::val::SuiteConfig cfg;
    cfg.quad = ctx->quad;
    cfg.inversion = ctx->inv;
    cfg.tolerance_overrides = ctx->tol_overrides;
    const auto report = core::val::run_identity_suite(cfg);
    *out_report = copy_string(as_json ? report.to_json() : report.to_text());
    if (*out_report == nullptr) return fail_argument(ctx, "allocation failed");
    *all_pass = report.all_pass() ? 1 : 0;
    return LC_OK;
  });
}

void lc_string_free(char* s) { std::free(s); }

}  // extern "C"
