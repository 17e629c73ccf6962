#pragma once

// JSON form of kernels: {"variant": "...", ...constants}. Field names are
// listed in docs/kernel_schema.json.

#include <json.hpp>

#include "locbounds/bound_kernels.hpp"

namespace locbounds {

inline nlohmann::json kernel_to_json(const LrbKernel& kernel) {
  using nlohmann::json;
  json j = std::visit(
      [](const auto& k) -> json {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, HastingsKoma>) {
          return {{"C", k.C}, {"v", k.v}, {"alpha", k.alpha}, {"D", k.D}, {"cap", k.cap},
                  {"linear_onset", k.linear_onset}};
        } else if constexpr (std::is_same_v<K, AlgebraicLightcone>) {
          return {{"c_short", k.c_short}, {"c_mid_exp", k.c_mid_exp}, {"c_mid_pow", k.c_mid_pow},
                  {"cap", k.cap},         {"v", k.v},                 {"v_prime", k.v_prime},
                  {"alpha", k.alpha},     {"D", k.D},                 {"C0", k.C0},
                  {"convexity_verified", k.convexity_verified},
                  {"crossover_constant", k.crossover_constant}};
        } else if constexpr (std::is_same_v<K, Exponential>) {
          return {{"C", k.C}, {"mu", k.mu}, {"v", k.v}, {"cap", k.cap}};
        } else {
          return {{"C", k.C}, {"cap", k.cap}, {"kappa", k.kappa}, {"omega", k.omega}};
        }
      },
      kernel);
  j["variant"] = variant_name(kernel);
  return j;
}

/// Missing constants take their defaults. An AlgebraicLightcone without C0
/// goes through the convexity-driven C0 selection.
inline LrbKernel kernel_from_json(const nlohmann::json& j) {
  require(j.is_object() && j.contains("variant"), "kernel JSON must be an object with a \"variant\" field");
  const std::string name = j.at("variant").get<std::string>();
  auto get = [&j](const char* key, auto def) { return j.contains(key) ? j.at(key).get<decltype(def)>() : def; };
  LrbKernel out;
  if (name == "HastingsKoma") {
    HastingsKoma k;
    out = HastingsKoma{get("C", k.C), get("v", k.v), get("alpha", k.alpha), get("D", k.D), get("cap", k.cap),
                       get("linear_onset", k.linear_onset)};
  } else if (name == "AlgebraicLightcone") {
    AlgebraicLightcone k;
    k.c_short = get("c_short", k.c_short);
    k.c_mid_exp = get("c_mid_exp", k.c_mid_exp);
    k.c_mid_pow = get("c_mid_pow", k.c_mid_pow);
    k.cap = get("cap", k.cap);
    k.v = get("v", k.v);
    k.v_prime = get("v_prime", k.v_prime);
    k.alpha = get("alpha", k.alpha);
    k.D = get("D", k.D);
    k.crossover_constant = get("crossover_constant", k.crossover_constant);
    if (j.contains("C0")) {
      k.C0 = j.at("C0").get<double>();
      k.convexity_verified = lightcone_convex(k);
      out = k;
    } else {
      out = make_algebraic_lightcone(k);
    }
  } else if (name == "Exponential") {
    Exponential k;
    out = Exponential{get("C", k.C), get("mu", k.mu), get("v", k.v), get("cap", k.cap)};
  } else if (name == "KappaFamily") {
    KappaFamily k;
    k.C = get("C", k.C);
    k.cap = get("cap", k.cap);
    k.kappa = j.at("kappa").get<std::vector<double>>();
    k.omega = j.at("omega").get<std::vector<double>>();
    out = k;
  } else {
    throw DomainError("unknown kernel variant: " + name);
  }
  validate(out);
  return out;
}

}  // namespace locbounds
