#include "randboot/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

namespace randboot::cli {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) {
  throw ConfigError("config: " + msg);
}

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& ctx) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) {
      if (it.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) fail("unknown key '" + it.key() + "' in " + ctx);
  }
}

const json& require(const json& j, const char* key, const std::string& ctx) {
  if (!j.contains(key)) {
    fail("missing required field '" + std::string(key) + "' in " + ctx);
  }
  return j.at(key);
}

double as_double(const json& v, const std::string& field) {
  if (!v.is_number()) fail("field '" + field + "' must be a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& field) {
  if (!v.is_number_integer()) fail("field '" + field + "' must be an integer");
  return v.get<int>();
}

bool as_bool(const json& v, const std::string& field) {
  if (!v.is_boolean()) fail("field '" + field + "' must be a boolean");
  return v.get<bool>();
}

std::string as_string(const json& v, const std::string& field) {
  if (!v.is_string()) fail("field '" + field + "' must be a string");
  return v.get<std::string>();
}

double opt_double(const json& j, const char* key, double def) {
  return j.contains(key) ? as_double(j.at(key), key) : def;
}

int opt_int(const json& j, const char* key, int def) {
  return j.contains(key) ? as_int(j.at(key), key) : def;
}

dgp::DgpSpec parse_dgp(const json& j) {
  if (!j.is_object()) fail("'dgp' must be an object");
  const std::string kind = as_string(require(j, "kind", "dgp"), "dgp.kind");
  if (kind == "iid_gaussian") {
    check_keys(j, {"kind", "beta"}, "dgp");
    return dgp::IidGaussian{opt_double(j, "beta", 0.0)};
  }
  if (kind == "arch_bivariate") {
    check_keys(j, {"kind", "beta"}, "dgp");
    return dgp::ArchBivariate{opt_double(j, "beta", 0.0)};
  }
  if (kind == "endogenous_sign") {
    check_keys(j, {"kind", "delta", "beta"}, "dgp");
    return dgp::EndogenousSign{opt_double(j, "delta", 9.0),
                               opt_double(j, "beta", 0.0)};
  }
  if (kind == "cointegration_rw") {
    check_keys(j, {"kind", "beta"}, "dgp");
    return dgp::CointegrationRW{opt_double(j, "beta", 0.0)};
  }
  if (kind == "infinite_variance_iid") {
    check_keys(j, {"kind", "alpha"}, "dgp");
    const double alpha = opt_double(j, "alpha", 1.2);
    if (!(alpha > 0.0 && alpha < 2.0)) {
      fail("dgp.alpha must lie in (0, 2)");
    }
    return dgp::InfiniteVarianceIid{alpha};
  }
  if (kind == "predictive_regression") {
    check_keys(j, {"kind", "theta1", "theta2", "c"}, "dgp");
    dgp::PredictiveRegression spec;
    spec.theta1 = opt_double(j, "theta1", 0.0);
    spec.theta2 = opt_double(j, "theta2", 0.0);
    spec.c = opt_double(j, "c", 0.0);
    if (spec.c < 0.0) fail("dgp.c must be >= 0");
    return spec;
  }
  if (kind == "break_regression") {
    check_keys(j, {"kind", "beta1", "theta", "r_star", "regressor", "errors"},
               "dgp");
    dgp::BreakRegression spec;
    spec.beta1 = opt_double(j, "beta1", 1.0);
    spec.theta = opt_double(j, "theta", 0.0);
    if (j.contains("r_star") && !j.at("r_star").is_null()) {
      spec.r_star = as_double(j.at("r_star"), "dgp.r_star");
      if (!(*spec.r_star > 0.0 && *spec.r_star < 1.0)) {
        fail("dgp.r_star must lie in (0, 1)");
      }
    }
    if (j.contains("regressor")) {
      const std::string r = as_string(j.at("regressor"), "dgp.regressor");
      if (r == "iid") {
        spec.regressor = dgp::BreakRegressorKind::IidStationary;
      } else if (r == "variance_shift") {
        spec.regressor = dgp::BreakRegressorKind::VarianceShift;
      } else {
        fail("dgp.regressor must be 'iid' or 'variance_shift'");
      }
    }
    if (j.contains("errors")) {
      const std::string e = as_string(j.at("errors"), "dgp.errors");
      if (e == "homoskedastic") {
        spec.errors = dgp::BreakErrorKind::Homoskedastic;
      } else if (e == "garch") {
        spec.errors = dgp::BreakErrorKind::Garch;
      } else {
        fail("dgp.errors must be 'homoskedastic' or 'garch'");
      }
    }
    return spec;
  }
  fail("unknown dgp kind '" + kind + "'");
}

int parse_b(const json& j) {
  const int b = opt_int(j, "b", 999);
  if (b < 99) fail("scheme.b must be >= 99");
  return b;
}

boot::SchemeSpec parse_scheme(const json& j) {
  if (!j.is_object()) fail("'scheme' must be an object");
  const std::string kind =
      as_string(require(j, "kind", "scheme"), "scheme.kind");
  if (kind == "fixed_design_gaussian") {
    check_keys(j, {"kind", "analytic", "b", "alpha_exp", "known_omega"},
               "scheme");
    boot::FixedDesignGaussianSpec spec;
    if (j.contains("analytic")) {
      spec.analytic = as_bool(j.at("analytic"), "scheme.analytic");
    }
    spec.b = parse_b(j);
    spec.alpha_exp = opt_double(j, "alpha_exp", 2.0);
    if (!(spec.alpha_exp > 0.0)) fail("scheme.alpha_exp must be positive");
    if (j.contains("known_omega") && !j.at("known_omega").is_null()) {
      spec.known_omega = as_double(j.at("known_omega"), "scheme.known_omega");
      if (!(*spec.known_omega > 0.0)) {
        fail("scheme.known_omega must be positive");
      }
    }
    return spec;
  }
  if (kind == "permutation_cusum") {
    check_keys(j, {"kind", "mode", "b", "nu"}, "scheme");
    boot::PermutationCusumSpec spec;
    if (j.contains("mode")) {
      const std::string m = as_string(j.at("mode"), "scheme.mode");
      if (m == "auto") {
        spec.mode = boot::PermutationCusumSpec::Mode::Auto;
      } else if (m == "monte_carlo") {
        spec.mode = boot::PermutationCusumSpec::Mode::MonteCarlo;
      } else if (m == "full_enumeration") {
        spec.mode = boot::PermutationCusumSpec::Mode::FullEnumeration;
      } else {
        fail("scheme.mode must be 'auto', 'monte_carlo', or 'full_enumeration'");
      }
    }
    spec.b = parse_b(j);
    if (j.contains("nu")) {
      const std::string nu = as_string(j.at("nu"), "scheme.nu");
      if (nu == "sqrt_sum_squares") {
        spec.nu = stats::NuChoice::SqrtSumSquares;
      } else if (nu == "max_abs") {
        spec.nu = stats::NuChoice::MaxAbs;
      } else if (nu == "one") {
        spec.nu = stats::NuChoice::One;
      } else {
        fail("scheme.nu must be 'sqrt_sum_squares', 'max_abs', or 'one'");
      }
    }
    return spec;
  }
  if (kind == "parametric_ks") {
    check_keys(j, {"kind", "b"}, "scheme");
    boot::ParametricKsSpec spec;
    spec.b = parse_b(j);
    return spec;
  }
  if (kind == "boundary_wild") {
    check_keys(j, {"kind", "bound", "kappa", "b"}, "scheme");
    boot::BoundaryWildSpec spec;
    if (j.contains("bound")) {
      const std::string k = as_string(j.at("bound"), "scheme.bound");
      if (k == "standard") {
        spec.kind = boot::BoundaryKind::Standard;
      } else if (k == "restricted") {
        spec.kind = boot::BoundaryKind::Restricted;
      } else if (k == "shrinking") {
        spec.kind = boot::BoundaryKind::Shrinking;
      } else {
        fail("scheme.bound must be 'standard', 'restricted', or 'shrinking'");
      }
    }
    spec.kappa = opt_double(j, "kappa", 0.5);
    if (!(spec.kappa > 0.0)) fail("scheme.kappa must be positive");
    spec.b = parse_b(j);
    return spec;
  }
  if (kind == "supf_wild") {
    check_keys(j, {"kind", "b", "r_lo", "r_hi"}, "scheme");
    boot::SupFWildSpec spec;
    spec.b = parse_b(j);
    spec.r_lo = opt_double(j, "r_lo", 0.15);
    spec.r_hi = opt_double(j, "r_hi", 0.85);
    if (!(spec.r_lo > 0.0 && spec.r_lo < spec.r_hi && spec.r_hi < 1.0)) {
      fail("scheme needs 0 < r_lo < r_hi < 1");
    }
    return spec;
  }
  fail("unknown scheme kind '" + kind + "'");
}

mc::Statistic parse_statistic(const std::string& s) {
  if (s == "slope") return mc::Statistic::Slope;
  if (s == "cusum") return mc::Statistic::Cusum;
  if (s == "cusum_residuals") return mc::Statistic::CusumResiduals;
  if (s == "ks") return mc::Statistic::Ks;
  if (s == "boundary") return mc::Statistic::Boundary;
  if (s == "sup_f") return mc::Statistic::SupF;
  fail("unknown statistic '" + s + "'");
}

std::string statistic_name(mc::Statistic s) {
  switch (s) {
    case mc::Statistic::Slope: return "slope";
    case mc::Statistic::Cusum: return "cusum";
    case mc::Statistic::CusumResiduals: return "cusum_residuals";
    case mc::Statistic::Ks: return "ks";
    case mc::Statistic::Boundary: return "boundary";
    case mc::Statistic::SupF: return "sup_f";
  }
  return "slope";
}

PowerSettings parse_power(const json& j) {
  check_keys(j, {"b_values", "level", "oracle_paths", "oracle_steps"}, "power");
  PowerSettings out;
  if (j.contains("b_values")) {
    if (!j.at("b_values").is_array() || j.at("b_values").empty()) {
      fail("power.b_values must be a non-empty array");
    }
    out.b_values.clear();
    for (const auto& v : j.at("b_values")) {
      out.b_values.push_back(as_double(v, "power.b_values"));
    }
  }
  out.level = opt_double(j, "level", 0.05);
  if (!(out.level > 0.0 && out.level < 1.0)) {
    fail("power.level must lie in (0, 1)");
  }
  out.oracle_paths = opt_int(j, "oracle_paths", 100000);
  out.oracle_steps = opt_int(j, "oracle_steps", 1000);
  if (out.oracle_paths < 1 || out.oracle_steps < 1) {
    fail("power.oracle_paths and power.oracle_steps must be >= 1");
  }
  return out;
}

json dgp_to_json(const dgp::DgpSpec& spec) {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, dgp::IidGaussian>) {
          return {{"kind", "iid_gaussian"}, {"beta", s.beta}};
        } else if constexpr (std::is_same_v<T, dgp::ArchBivariate>) {
          return {{"kind", "arch_bivariate"}, {"beta", s.beta}};
        } else if constexpr (std::is_same_v<T, dgp::EndogenousSign>) {
          return {{"kind", "endogenous_sign"}, {"delta", s.delta}, {"beta", s.beta}};
        } else if constexpr (std::is_same_v<T, dgp::CointegrationRW>) {
          return {{"kind", "cointegration_rw"}, {"beta", s.beta}};
        } else if constexpr (std::is_same_v<T, dgp::InfiniteVarianceIid>) {
          return {{"kind", "infinite_variance_iid"}, {"alpha", s.alpha}};
        } else if constexpr (std::is_same_v<T, dgp::PredictiveRegression>) {
          return {{"kind", "predictive_regression"},
                  {"theta1", s.theta1},
                  {"theta2", s.theta2},
                  {"c", s.c}};
        } else {
          json out = {{"kind", "break_regression"},
                      {"beta1", s.beta1},
                      {"theta", s.theta},
                      {"regressor",
                       s.regressor == dgp::BreakRegressorKind::VarianceShift
                           ? "variance_shift"
                           : "iid"},
                      {"errors", s.errors == dgp::BreakErrorKind::Garch
                                     ? "garch"
                                     : "homoskedastic"}};
          if (s.r_star) out["r_star"] = *s.r_star;
          return out;
        }
      },
      spec);
}

json scheme_to_json(const boot::SchemeSpec& spec) {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, boot::FixedDesignGaussianSpec>) {
          json out = {{"kind", "fixed_design_gaussian"},
                      {"analytic", s.analytic},
                      {"b", s.b},
                      {"alpha_exp", s.alpha_exp}};
          if (s.known_omega) out["known_omega"] = *s.known_omega;
          return out;
        } else if constexpr (std::is_same_v<T, boot::PermutationCusumSpec>) {
          const char* mode =
              s.mode == boot::PermutationCusumSpec::Mode::Auto ? "auto"
              : s.mode == boot::PermutationCusumSpec::Mode::MonteCarlo
                  ? "monte_carlo"
                  : "full_enumeration";
          const char* nu = s.nu == stats::NuChoice::SqrtSumSquares
                               ? "sqrt_sum_squares"
                               : s.nu == stats::NuChoice::MaxAbs ? "max_abs"
                                                                 : "one";
          return {{"kind", "permutation_cusum"},
                  {"mode", mode},
                  {"b", s.b},
                  {"nu", nu}};
        } else if constexpr (std::is_same_v<T, boot::ParametricKsSpec>) {
          return {{"kind", "parametric_ks"}, {"b", s.b}};
        } else if constexpr (std::is_same_v<T, boot::BoundaryWildSpec>) {
          const char* bound = s.kind == boot::BoundaryKind::Standard
                                  ? "standard"
                                  : s.kind == boot::BoundaryKind::Restricted
                                        ? "restricted"
                                        : "shrinking";
          return {{"kind", "boundary_wild"},
                  {"bound", bound},
                  {"kappa", s.kappa},
                  {"b", s.b}};
        } else {
          return {{"kind", "supf_wild"},
                  {"b", s.b},
                  {"r_lo", s.r_lo},
                  {"r_hi", s.r_hi}};
        }
      },
      spec);
}

}  // namespace

RunConfig parse_config(const nlohmann::json& j) {
  if (!j.is_object()) fail("top level must be a JSON object");
  check_keys(j,
             {"schema_version", "n", "reps", "outer_paths", "inner_reps",
              "grid_size", "band", "master_seed", "threads", "output_dir",
              "beta0", "dgp", "scheme", "statistic", "tail", "power"},
             "top level");
  const int version =
      as_int(require(j, "schema_version", "top level"), "schema_version");
  if (version != kSchemaVersion) {
    fail("schema_version " + std::to_string(version) + " unsupported; expected " +
         std::to_string(kSchemaVersion));
  }

  RunConfig config;
  config.experiment.n = as_int(require(j, "n", "top level"), "n");
  if (config.experiment.n < 2) fail("n must be >= 2");
  config.experiment.dgp = parse_dgp(require(j, "dgp", "top level"));
  config.experiment.scheme = parse_scheme(require(j, "scheme", "top level"));
  config.experiment.statistic =
      j.contains("statistic")
          ? parse_statistic(as_string(j.at("statistic"), "statistic"))
          : mc::default_statistic(config.experiment.scheme);
  if (j.contains("tail")) {
    const std::string t = as_string(j.at("tail"), "tail");
    if (t == "left") {
      config.experiment.tail = boot::Tail::Left;
    } else if (t == "right") {
      config.experiment.tail = boot::Tail::Right;
    } else {
      fail("tail must be 'left' or 'right'");
    }
  } else {
    config.experiment.tail = mc::default_tail(config.experiment.statistic);
  }
  config.experiment.beta0 = opt_double(j, "beta0", 0.0);

  config.reps = opt_int(j, "reps", 1000);
  config.outer_paths = opt_int(j, "outer_paths", 200);
  config.inner_reps = opt_int(j, "inner_reps", 2000);
  config.grid_size = opt_int(j, "grid_size", 101);
  if (config.reps < 1 || config.outer_paths < 1 || config.inner_reps < 1) {
    fail("reps, outer_paths, and inner_reps must be >= 1");
  }
  if (config.grid_size < 2) fail("grid_size must be >= 2");

  if (j.contains("band")) {
    const auto& band = j.at("band");
    if (!band.is_array() || band.size() != 2) {
      fail("band must be an array [lo, hi]");
    }
    config.band_lo = as_double(band[0], "band");
    config.band_hi = as_double(band[1], "band");
  }
  if (!(config.band_lo >= 0.0 && config.band_lo < config.band_hi &&
        config.band_hi <= 1.0)) {
    fail("band must satisfy 0 <= lo < hi <= 1");
  }

  if (j.contains("master_seed")) {
    const auto& seed = j.at("master_seed");
    if (!seed.is_number_integer() && !seed.is_number_unsigned()) {
      fail("master_seed must be an integer");
    }
    config.master_seed = seed.get<std::uint64_t>();
  }
  config.threads = opt_int(j, "threads", 0);
  if (config.threads < 0) fail("threads must be >= 0");
  if (j.contains("output_dir")) {
    config.output_dir = as_string(j.at("output_dir"), "output_dir");
  }
  if (j.contains("power")) config.power = parse_power(j.at("power"));

  try {
    mc::validate(config.experiment);
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    fail("invalid JSON in '" + path + "': " + e.what());
  }
  return parse_config(j);
}

nlohmann::json to_json(const RunConfig& config) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["n"] = config.experiment.n;
  j["dgp"] = dgp_to_json(config.experiment.dgp);
  j["scheme"] = scheme_to_json(config.experiment.scheme);
  j["statistic"] = statistic_name(config.experiment.statistic);
  j["tail"] = config.experiment.tail == boot::Tail::Left ? "left" : "right";
  j["beta0"] = config.experiment.beta0;
  j["reps"] = config.reps;
  j["outer_paths"] = config.outer_paths;
  j["inner_reps"] = config.inner_reps;
  j["grid_size"] = config.grid_size;
  j["band"] = {config.band_lo, config.band_hi};
  j["master_seed"] = config.master_seed;
  j["threads"] = config.threads;
  j["output_dir"] = config.output_dir;
  j["power"] = {{"b_values", config.power.b_values},
                {"level", config.power.level},
                {"oracle_paths", config.power.oracle_paths},
                {"oracle_steps", config.power.oracle_steps}};
  return j;
}

std::string config_hash(const nlohmann::json& normalized) {
  const std::string dump = normalized.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << h;
  return out.str();
}

}  // namespace randboot::cli
