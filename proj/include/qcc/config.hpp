#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "qcc/common.hpp"
#include "qcc/qcmap.hpp"

namespace qcc {

using ordered_json = nlohmann::ordered_json;

/// Declarative map description; builds a QcMap.
struct MapSpec {
  std::string kind = "radial_stretch";  // identity|rotation|radial_stretch|spiral|angular_shear|composition
  double K = 2.0;
  double angle = 0.0;
  double twist = 0.0;
  std::vector<double> profile_knots{0.0, 2.0 * two_pi / 3.0};
  std::vector<double> profile_values{0.0, two_pi / 3.0};
  std::vector<MapSpec> factors;

  QcMap build() const {
    if (kind == "identity") return QcMap::identity();
    if (kind == "rotation") return QcMap::rotation(angle);
    if (kind == "radial_stretch") return QcMap::radial_stretch(K);
    if (kind == "spiral") return QcMap::spiral(K, twist);
    if (kind == "angular_shear")
      return QcMap::angular_shear(ShearProfile(profile_knots, profile_values));
    if (kind == "composition") {
      std::vector<QcMap> maps;
      for (const MapSpec& f : factors) maps.push_back(f.build());
      return QcMap::composition(std::move(maps));
    }
    throw ConfigError("unknown map kind: " + kind);
  }
};

struct QuadratureConfig {
  int n_radial = 200;
  int n_angles = 512;
};

struct ToleranceConfig {
  double semigroup = 1e-8;
  double landen = 1e-9;
  double mu_symmetry = 1e-9;
  double route_equivalence = 1e-6;
  double identity_norm = 1e-6;
};

struct Weak11Config {
  int n_radial = 256;
  int n_angles = 1536;
  int k_min = 3;
  int k_max = 8;
};

struct SchattenConfig {
  std::vector<double> p_values{0.5, 1.5};
  double r_inner = 0.5;
  int levels = 16;
};

struct McConfig {
  int area_samples = 100000;
  int membership_samples = 10000;
};

struct GeometryConfig {
  int n_intervals = 10000;
  int n_pairs = 10000;
  double t0 = 0.125;
};

/// Full experiment configuration. Every field has a default; unknown keys in
/// the on-disk form are rejected; the JSON round-trip is lossless.
struct ExperimentConfig {
  MapSpec map;
  QuadratureConfig quadrature;
  int basis_degree = 48;
  uint64_t seed = 1;
  bool reproducible = false;
  double r0 = 1.0 / 64.0;
  std::vector<double> alphas;  // empty -> dyadic auto grid
  std::vector<double> p_values{1.5, 3.0};
  int n_regions = 100;
  ToleranceConfig tolerances;
  Weak11Config weak11;
  SchattenConfig schatten;
  McConfig mc;
  GeometryConfig geometry;
};

namespace detail {

inline void expect_keys(const ordered_json& j, std::initializer_list<const char*> keys,
                        const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : keys)
      if (it.key() == k) known = true;
    if (!known) throw ConfigError("unknown key '" + it.key() + "' in " + where);
  }
}

template <class T>
void maybe(const ordered_json& j, const char* key, T& out) {
  if (j.contains(key)) {
    try {
      out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
  }
}

inline MapSpec parse_map_spec(const ordered_json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  expect_keys(j, {"kind", "K", "angle", "twist", "profile_knots", "profile_values", "factors"},
              where);
  MapSpec m;
  maybe(j, "kind", m.kind);
  maybe(j, "K", m.K);
  maybe(j, "angle", m.angle);
  maybe(j, "twist", m.twist);
  maybe(j, "profile_knots", m.profile_knots);
  maybe(j, "profile_values", m.profile_values);
  if (j.contains("factors")) {
    if (!j.at("factors").is_array()) throw ConfigError(where + ".factors must be an array");
    m.factors.clear();
    int i = 0;
    for (const auto& f : j.at("factors"))
      m.factors.push_back(parse_map_spec(f, where + ".factors[" + std::to_string(i++) + "]"));
  }
  return m;
}

inline ordered_json map_spec_to_json(const MapSpec& m) {
  ordered_json j;
  j["kind"] = m.kind;
  j["K"] = m.K;
  j["angle"] = m.angle;
  j["twist"] = m.twist;
  j["profile_knots"] = m.profile_knots;
  j["profile_values"] = m.profile_values;
  ordered_json fs = ordered_json::array();
  for (const MapSpec& f : m.factors) fs.push_back(map_spec_to_json(f));
  j["factors"] = fs;
  return j;
}

}  // namespace detail

inline ordered_json config_to_json(const ExperimentConfig& c) {
  ordered_json j;
  j["map"] = detail::map_spec_to_json(c.map);
  j["quadrature"] = {{"n_radial", c.quadrature.n_radial}, {"n_angles", c.quadrature.n_angles}};
  j["basis_degree"] = c.basis_degree;
  j["seed"] = c.seed;
  j["reproducible"] = c.reproducible;
  j["r0"] = c.r0;
  j["alphas"] = c.alphas;
  j["p_values"] = c.p_values;
  j["n_regions"] = c.n_regions;
  j["tolerances"] = {{"semigroup", c.tolerances.semigroup},
                     {"landen", c.tolerances.landen},
                     {"mu_symmetry", c.tolerances.mu_symmetry},
                     {"route_equivalence", c.tolerances.route_equivalence},
                     {"identity_norm", c.tolerances.identity_norm}};
  j["weak11"] = {{"n_radial", c.weak11.n_radial},
                 {"n_angles", c.weak11.n_angles},
                 {"k_min", c.weak11.k_min},
                 {"k_max", c.weak11.k_max}};
  j["schatten"] = {{"p_values", c.schatten.p_values},
                   {"r_inner", c.schatten.r_inner},
                   {"levels", c.schatten.levels}};
  j["mc"] = {{"area_samples", c.mc.area_samples},
             {"membership_samples", c.mc.membership_samples}};
  j["geometry"] = {{"n_intervals", c.geometry.n_intervals},
                   {"n_pairs", c.geometry.n_pairs},
                   {"t0", c.geometry.t0}};
  return j;
}

inline ExperimentConfig config_from_json(const ordered_json& j) {
  if (!j.is_object()) throw ConfigError("config root must be an object");
  detail::expect_keys(j,
                      {"map", "quadrature", "basis_degree", "seed", "reproducible", "r0",
                       "alphas", "p_values", "n_regions", "tolerances", "weak11", "schatten",
                       "mc", "geometry"},
                      "config");
  ExperimentConfig c;
  if (j.contains("map")) c.map = detail::parse_map_spec(j.at("map"), "map");
  if (j.contains("quadrature")) {
    const auto& q = j.at("quadrature");
    detail::expect_keys(q, {"n_radial", "n_angles"}, "quadrature");
    detail::maybe(q, "n_radial", c.quadrature.n_radial);
    detail::maybe(q, "n_angles", c.quadrature.n_angles);
  }
  detail::maybe(j, "basis_degree", c.basis_degree);
  detail::maybe(j, "seed", c.seed);
  detail::maybe(j, "reproducible", c.reproducible);
  detail::maybe(j, "r0", c.r0);
  detail::maybe(j, "alphas", c.alphas);
  detail::maybe(j, "p_values", c.p_values);
  detail::maybe(j, "n_regions", c.n_regions);
  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    detail::expect_keys(t, {"semigroup", "landen", "mu_symmetry", "route_equivalence",
                            "identity_norm"},
                        "tolerances");
    detail::maybe(t, "semigroup", c.tolerances.semigroup);
    detail::maybe(t, "landen", c.tolerances.landen);
    detail::maybe(t, "mu_symmetry", c.tolerances.mu_symmetry);
    detail::maybe(t, "route_equivalence", c.tolerances.route_equivalence);
    detail::maybe(t, "identity_norm", c.tolerances.identity_norm);
  }
  if (j.contains("weak11")) {
    const auto& w = j.at("weak11");
    detail::expect_keys(w, {"n_radial", "n_angles", "k_min", "k_max"}, "weak11");
    detail::maybe(w, "n_radial", c.weak11.n_radial);
    detail::maybe(w, "n_angles", c.weak11.n_angles);
    detail::maybe(w, "k_min", c.weak11.k_min);
    detail::maybe(w, "k_max", c.weak11.k_max);
  }
  if (j.contains("schatten")) {
    const auto& s = j.at("schatten");
    detail::expect_keys(s, {"p_values", "r_inner", "levels"}, "schatten");
    detail::maybe(s, "p_values", c.schatten.p_values);
    detail::maybe(s, "r_inner", c.schatten.r_inner);
    detail::maybe(s, "levels", c.schatten.levels);
  }
  if (j.contains("mc")) {
    const auto& m = j.at("mc");
    detail::expect_keys(m, {"area_samples", "membership_samples"}, "mc");
    detail::maybe(m, "area_samples", c.mc.area_samples);
    detail::maybe(m, "membership_samples", c.mc.membership_samples);
  }
  if (j.contains("geometry")) {
    const auto& g = j.at("geometry");
    detail::expect_keys(g, {"n_intervals", "n_pairs", "t0"}, "geometry");
    detail::maybe(g, "n_intervals", c.geometry.n_intervals);
    detail::maybe(g, "n_pairs", c.geometry.n_pairs);
    detail::maybe(g, "t0", c.geometry.t0);
  }
  return c;
}

inline ExperimentConfig parse_config(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return config_from_json(j);
}

inline std::string serialize_config(const ExperimentConfig& c) {
  return config_to_json(c).dump(2) + "\n";
}

}  // namespace qcc
