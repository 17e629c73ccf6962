#pragma once

// Subcommands of the locbounds driver. Each takes the JSON config plus flag
// overrides and returns the text to write, so tests can call them directly.

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "locbounds/bound_kernels.hpp"
#include "locbounds/correlation_bounds.hpp"
#include "locbounds/csv.hpp"
#include "locbounds/fse_bounds.hpp"
#include "locbounds/holo_engine.hpp"
#include "locbounds/kernel_json.hpp"
#include "locbounds/parallel.hpp"
#include "locbounds/verify.hpp"

namespace locbounds::cli {

using nlohmann::json;

struct RunConfig {
  std::string subcommand;
  json config = json::object();
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
  std::optional<int> max_sites;
};

struct CommandOutput {
  std::string text;
  std::string filename;  // default name under --out
  int exit_code = 0;
};

namespace detail {

template <class T>
std::vector<T> grid(const json& cfg, const char* key, std::vector<T> def) {
  if (!cfg.contains(key)) return def;
  const json& j = cfg.at(key);
  std::vector<T> out = j.is_array() ? j.get<std::vector<T>>() : std::vector<T>{j.get<T>()};
  require(!out.empty(), std::string("config: grid '") + key + "' is empty");
  return out;
}

template <class T>
T value(const json& cfg, const char* key, T def) {
  return cfg.contains(key) ? cfg.at(key).get<T>() : def;
}

inline std::string opt_str(std::optional<double> x) { return x ? fmt_double(*x) : ""; }

/// Geometric grid of `points` values from lo to hi (inclusive).
inline std::vector<double> log_grid(double lo, double hi, int points) {
  require(lo > 0 && hi >= lo && points >= 1, "config: need 0 < r_min <= r_max and points >= 1");
  std::vector<double> g;
  for (int i = 0; i < points; ++i)
    g.push_back(points == 1 ? lo : std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (points - 1)));
  g.back() = hi;
  return g;
}

inline std::vector<double> r_grid(const json& cfg) {
  if (cfg.contains("r")) return grid<double>(cfg, "r", {});
  return log_grid(value(cfg, "r_min", 1.0), value(cfg, "r_max", 1e6), value(cfg, "points", 25));
}

}  // namespace detail

/// Exponent columns over the (alpha, Delta/v, D) grid plus exponential rows.
///   interaction, param, D, delta_over_v, ours_lppl, ours_correlation, ours_fse,
///   fse_branch, prior_lppl, prior_correlation, qac, nonconformal
inline CommandOutput cmd_exponents(const RunConfig& rc) {
  const json& c = rc.config;
  auto alphas = detail::grid<double>(c, "alpha", {1.5, 2.0, 3.0, 4.0});
  auto ratios = detail::grid<double>(c, "delta_over_v", {0.1, 1.0, 10.0});
  auto dims = detail::grid<int>(c, "D", {1});
  auto mus = detail::grid<double>(c, "mu", {});
  const bool two_body = detail::value(c, "two_body", true);
  for (double a : alphas)
    for (int D : dims) require(a > D, "exponents: alpha must exceed D (got alpha=" + fmt_double(a) + ")");
  CsvWriter w({"interaction", "param", "D", "delta_over_v", "ours_lppl", "ours_correlation", "ours_fse", "fse_branch",
               "prior_lppl", "prior_correlation", "qac", "nonconformal"});
  for (double a : alphas)
    for (int D : dims)
      for (double q : ratios) {
        GapModel g(q, 1.0);
        double a1 = alpha1_conformal(a, g).exponent;
        auto a3 = alpha3(a, a1, D);
        auto qac = qac_comparison_exponent(a, D);
        w.row_strings({"power-law", fmt_double(a), std::to_string(D), fmt_double(q), fmt_double(a1), fmt_double(a1),
                       fmt_double(a3.value), a3.branch, "",
                       fmt_double(prior_exponents(InteractionClass::PowerLaw, a, g).exponent),
                       qac ? fmt_double(qac->exponent) : "", fmt_double(alpha1_nonconformal(a, g).exponent)});
        if (two_body && a > 2.0 * D) {
          double b = alpha1_large_alpha(a, D, g).exponent;
          auto t3 = alpha3(a, b, D, true);
          w.row_strings({"power-law-two-body", fmt_double(a), std::to_string(D), fmt_double(q), fmt_double(b),
                         fmt_double(b), fmt_double(t3.value), t3.branch, "", fmt_double(a),
                         qac ? fmt_double(qac->exponent) : "", ""});
        }
      }
  for (double mu : mus)
    for (double q : ratios) {
      GapModel g(q, 1.0);
      double m1 = mu1_exponential(mu, g).exponent;
      double prior = prior_exponents(InteractionClass::Exponential, mu, g).exponent;
      w.row_strings({"exponential", fmt_double(mu), "", fmt_double(q), fmt_double(m1), fmt_double(m1),
                     fmt_double(mu3_exponential(m1)), "mu3=mu1", fmt_double(prior), fmt_double(prior), "", ""});
    }
  return {w.str(), "exponents.csv", 0};
}

namespace detail {

/// Velocity entering the gap model: v, mu v for exponential kernels, the
/// smallest omega of a kappa family.
inline double kernel_velocity(const LrbKernel& k) {
  if (auto* e = std::get_if<Exponential>(&k)) return e->mu * e->v;
  if (auto* f = std::get_if<KappaFamily>(&k)) return *std::min_element(f->omega.begin(), f->omega.end());
  if (auto* h = std::get_if<HastingsKoma>(&k)) return h->v;
  return std::get<AlgebraicLightcone>(k).v;
}

// The correlation integral needs an envelope integrable at y -> inf, so its
// default kernel uses the linear onset.
inline LrbKernel curve_kernel(const json& c, bool linear_onset = false) {
  if (c.contains("kernel")) return kernel_from_json(c.at("kernel"));
  return HastingsKoma{1.0, 1.0, value(c, "alpha", 3.0), value(c, "D", 1), 1.0, linear_onset};
}

}  // namespace detail

/// Bound on |Omega(0)| (hence on |delta <S>|) against r for each method:
///   nonconformal: disk average, optimized over rho in (0, Delta)
///   conformal:    strip-map average, optimized over rho in (0, 1), or the
///                 disk value where that is smaller (short distances)
///   strip:        strip-map average alone
///   large-alpha:  disk average of the algebraic-lightcone envelope
inline CommandOutput cmd_curve(const RunConfig& rc) {
  const json& c = rc.config;
  LrbKernel kernel = detail::curve_kernel(c);
  GapModel gap(detail::value(c, "delta", 1.0), detail::kernel_velocity(kernel));
  auto rs = detail::r_grid(c);
  auto methods = detail::grid<std::string>(c, "methods", {"nonconformal", "conformal"});
  struct Job {
    std::string method;
    double r;
  };
  std::vector<Job> jobs;
  for (const auto& m : methods) {
    require(m == "nonconformal" || m == "conformal" || m == "strip" || m == "large-alpha", "curve: unknown method " + m);
    for (double r : rs) jobs.push_back({m, r});
  }
  std::optional<AlgebraicLightcone> lc;
  if (std::find(methods.begin(), methods.end(), "large-alpha") != methods.end()) {
    if (auto* given = std::get_if<AlgebraicLightcone>(&kernel)) {
      lc = *given;
    } else {
      AlgebraicLightcone k;
      k.alpha = detail::value(c, "alpha", 3.0);
      k.D = detail::value(c, "D", 1);
      require(k.alpha > 2.0 * k.D, "curve: large-alpha method needs alpha > 2D");
      lc = make_algebraic_lightcone(k);
    }
  }
  std::vector<std::vector<std::string>> rows(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) {
    const auto& j = jobs[i];
    RhoOptimum o{};
    std::string map = "disk";
    if (j.method == "large-alpha") {
      OmegaBarEnvelope env(*lc, j.r);
      o = optimize_rho_disk(env, GapModel(gap.Delta, lc->v));
    } else if (j.method == "strip") {
      o = optimize_rho(OmegaBarEnvelope(kernel, j.r), gap);
      map = "strip";
    } else {
      OmegaBarEnvelope env(kernel, j.r);
      o = optimize_rho_disk(env, gap);
      if (j.method == "conformal") {
        // the disk is itself an admissible map; keep whichever is smaller
        auto strip = optimize_rho(env, gap);
        if (strip.log_bound <= o.log_bound) {
          o = strip;
          map = "strip";
        }
      }
    }
    rows[i] = {j.method, map, fmt_double(j.r), fmt_double(o.log_bound), fmt_double(std::exp(o.log_bound)),
               fmt_double(o.rho_init), fmt_double(o.log_bound_init), fmt_double(o.rho_star),
               std::to_string(o.iterations), o.refined ? "1" : "0"};
  });
  CsvWriter w({"method", "map", "r", "log_bound", "bound", "rho_init", "log_bound_init", "rho_star", "iterations", "refined"});
  for (const auto& r : rows) w.row_strings(r);
  return {w.str(), "curve.csv", 0};
}

/// Correlation-decay bound against r from the conformal bound at zero.
inline CommandOutput cmd_correlation(const RunConfig& rc) {
  const json& c = rc.config;
  LrbKernel kernel = detail::curve_kernel(c, true);
  GapModel gap(detail::value(c, "delta", 1.0), detail::kernel_velocity(kernel));
  auto rs = detail::r_grid(c);
  std::vector<std::vector<std::string>> rows(rs.size());
  parallel_for(rs.size(), [&](std::size_t i) {
    OmegaBarEnvelope env(kernel, rs[i]);
    auto o = optimize_rho(env, gap);
    auto cb = correlation_bound(env, rs[i], gap, std::exp(o.log_bound));
    rows[i] = {fmt_double(rs[i]), fmt_double(std::exp(o.log_bound)), fmt_double(cb.y0), cb.y0_from_root ? "1" : "0",
               fmt_double(cb.tail_integral), fmt_double(cb.y_max), fmt_double(cb.value)};
  });
  CsvWriter w({"r", "bound_at_zero", "y0", "y0_from_root", "tail_integral", "y_max", "correlation_bound"});
  for (const auto& r : rows) w.row_strings(r);
  return {w.str(), "correlation.csv", 0};
}

/// Finite-size error bounds against L (1D) or R (sphere geometry).
inline CommandOutput cmd_fse(const RunConfig& rc) {
  const json& c = rc.config;
  const double alpha = detail::value(c, "alpha", 3.0);
  const int D = detail::value(c, "D", 1);
  std::optional<double> a1cfg;
  if (c.contains("alpha1")) a1cfg = c.at("alpha1").get<double>();
  const double alpha1 = a1cfg ? *a1cfg : alpha1_conformal(alpha, GapModel(detail::value(c, "delta_over_v", 1.0), 1.0)).exponent;
  auto poly = detail::grid<double>(c, "poly", {1.0});
  const std::string geometry = detail::value<std::string>(c, "geometry", D == 1 ? "1d" : "sphere");
  auto a3 = alpha3(alpha, alpha1, D, detail::value(c, "two_body", false));
  CsvWriter w({"geometry", "size", "exact", "asymptotic", "ratio", "class_exponent", "log_power", "alpha1", "alpha3",
               "alpha3_branch", "alpha3_other_branch"});
  auto tail = [&](std::vector<std::string> row) {
    row.insert(row.end(), {fmt_double(alpha1), fmt_double(a3.value), a3.branch,
                           a3.at_boundary ? fmt_double(a3.other_branch) : ""});
    w.row_strings(row);
  };
  if (geometry == "1d") {
    require(D == 1, "fse: 1d geometry needs D = 1");
    auto Ls = detail::grid<long long>(c, "L", {8, 16, 32, 64, 128, 256, 512, 1024});
    auto cls = fse_class_1d(alpha, alpha1, poly);
    for (long long L : Ls) {
      double ex = fse_bound_1d(L, alpha, alpha1, poly, FseMode::Exact);
      double as = fse_bound_1d(L, alpha, alpha1, poly, FseMode::Asymptotic);
      tail({"1d", std::to_string(L), fmt_double(ex), fmt_double(as), fmt_double(ex / as),
            fmt_double(cls.class_exponent), std::to_string(cls.log_power)});
    }
  } else {
    require(geometry == "sphere", "fse: geometry must be 1d or sphere");
    auto Rs = detail::grid<long long>(c, "R", {4, 8, 16, 32, 64, 128, 256, 512});
    for (long long R : Rs) {
      auto s = fse_bound_sphere(R, alpha, alpha1, D, poly);
      tail({"sphere", std::to_string(R), fmt_double(s.exact), fmt_double(s.asymptotic_value),
            fmt_double(s.exact / s.asymptotic_value), fmt_double(s.asymptotic.class_exponent),
            std::to_string(s.asymptotic.log_power)});
    }
  }
  return {w.str(), "fse.csv", 0};
}

inline VerifyConfig verify_config(const RunConfig& rc) {
  const json& c = rc.config;
  VerifyConfig v;
  v.seed = rc.seed ? *rc.seed : detail::value(c, "seed", v.seed);
  v.instances = detail::value(c, "instances", v.instances);
  v.sizes = detail::grid<int>(c, "sizes", v.sizes);
  v.alphas = detail::grid<double>(c, "alpha", v.alphas);
  v.family = detail::value(c, "family", v.family);
  v.v_strength = detail::value(c, "v_strength", v.v_strength);
  if (c.contains("lambda_grid")) {
    v.lambda_grid = c.at("lambda_grid").get<std::vector<double>>();
    require(!v.lambda_grid.empty(), "verify: empty lambda grid");
  }
  v.degenerate_instance = detail::value(c, "degenerate_instance", v.degenerate_instance);
  v.inequalities = detail::value(c, "inequalities", v.inequalities);
  if (c.contains("split_block")) v.split_block = c.at("split_block").get<std::vector<int>>();
  v.split_env = detail::value(c, "split_env", v.split_env);
  v.gap_floor_rel = detail::value(c, "gap_floor_rel", v.gap_floor_rel);
  if (rc.max_sites) v.max_sites = *rc.max_sites;
  if (c.contains("tolerances")) {
    const json& t = c.at("tolerances");
    v.tol_time = detail::value(t, "time_integral", v.tol_time);
    v.tol_axis = detail::value(t, "axis_integral", v.tol_axis);
    v.tol_derivative = detail::value(t, "derivative", v.tol_derivative);
    v.tol_q = detail::value(t, "q_anti_hermitian", v.tol_q);
    v.tol_split = detail::value(t, "split", v.tol_split);
    v.tol_identity = detail::value(t, "identity", v.tol_identity);
  }
  if (rc.tolerance) v.tol_time = v.tol_axis = v.tol_derivative = v.tol_q = v.tol_split = v.tol_identity = *rc.tolerance;
  return v;
}

/// JSON report; exit status 1 on any failed check.
inline CommandOutput cmd_verify(const RunConfig& rc) {
  auto rep = run_verification(verify_config(rc));
  return {rep.to_json().dump(2) + "\n", "verify.json", rep.ok() ? 0 : 1};
}

inline CommandOutput dispatch(const RunConfig& rc) {
  if (rc.subcommand == "exponents") return cmd_exponents(rc);
  if (rc.subcommand == "curve") return cmd_curve(rc);
  if (rc.subcommand == "correlation") return cmd_correlation(rc);
  if (rc.subcommand == "fse") return cmd_fse(rc);
  if (rc.subcommand == "verify") return cmd_verify(rc);
  throw DomainError("unknown subcommand: " + rc.subcommand);
}

}  // namespace locbounds::cli
