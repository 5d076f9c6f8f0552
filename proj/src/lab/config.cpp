#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <regex>
#include <set>
#include <string>

#include "roughlab/lab.hpp"

namespace roughlab::lab {
namespace {

using nlohmann::json;

std::size_t line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

// Line of the first occurrence of "key" (the last path component) in the text.
std::size_t line_of_key(const std::string& text, const std::string& path) {
  const auto dot = path.find_last_of('.');
  const std::string leaf = dot == std::string::npos ? path : path.substr(dot + 1);
  const auto pos = text.find('"' + leaf + '"');
  return pos == std::string::npos ? 0 : line_of_offset(text, pos);
}

// Name of the last object key that opens before `offset`, empty when none.
std::string key_before(const std::string& text, std::size_t offset) {
  static const std::regex key_re("\"([^\"\\\\]*)\"\\s*:");
  const std::string head = text.substr(0, std::min(offset, text.size()));
  std::string last;
  for (auto it = std::sregex_iterator(head.begin(), head.end(), key_re); it != std::sregex_iterator(); ++it) {
    last = (*it)[1].str();
  }
  return last;
}

class Reader {
 public:
  Reader(const std::string& text, std::string source) : text_(text), source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& path, const std::string& what) const {
    const std::size_t line = line_of_key(text_, path);
    std::string msg = source_;
    if (line) msg += ":" + std::to_string(line);
    msg += ": key '" + path + "': " + what;
    throw ConfigError(msg, path, line);
  }

  void only_keys(const json& obj, const std::string& prefix, std::initializer_list<const char*> keys) const {
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (!allowed.count(it.key())) fail(join(prefix, it.key()), "unknown key");
    }
  }

  static std::string join(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
  }

  double number(const json& obj, const std::string& prefix, const char* key, double fallback) const {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) fail(join(prefix, key), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(join(prefix, key), "expected a finite number");
    return d;
  }

  std::uint64_t integer(const json& obj, const std::string& prefix, const char* key, std::uint64_t fallback) const {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_unsigned()) fail(join(prefix, key), "expected a non-negative integer");
    return v.get<std::uint64_t>();
  }

  std::string string(const json& obj, const std::string& prefix, const char* key, std::string fallback,
                     std::initializer_list<const char*> choices = {}) const {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_string()) fail(join(prefix, key), "expected a string");
    std::string s = v.get<std::string>();
    if (choices.size() && std::find(choices.begin(), choices.end(), s) == choices.end()) {
      std::string list;
      for (const char* c : choices) list += std::string(list.empty() ? "" : ", ") + c;
      fail(join(prefix, key), "'" + s + "' is not one of " + list);
    }
    return s;
  }

  std::vector<double> numbers(const json& obj, const std::string& prefix, const char* key,
                              std::vector<double> fallback) const {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_array()) fail(join(prefix, key), "expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number() || !std::isfinite(e.get<double>())) fail(join(prefix, key), "expected an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  std::vector<std::size_t> counts(const json& obj, const std::string& prefix, const char* key) const {
    if (!obj.contains(key)) return {};
    const json& v = obj.at(key);
    if (!v.is_array()) fail(join(prefix, key), "expected an array of positive integers");
    std::vector<std::size_t> out;
    for (const auto& e : v) {
      if (!e.is_number_unsigned() || e.get<std::uint64_t>() == 0) {
        fail(join(prefix, key), "expected an array of positive integers");
      }
      out.push_back(e.get<std::size_t>());
    }
    return out;
  }

  const json& object(const json& obj, const std::string& prefix, const char* key) const {
    static const json empty = json::object();
    if (!obj.contains(key)) return empty;
    const json& v = obj.at(key);
    if (!v.is_object()) fail(join(prefix, key), "expected an object");
    return v;
  }

  FieldSpec field(const json& obj, const std::string& path, FieldSpec fallback) const {
    if (obj.empty()) return fallback;
    only_keys(obj, path, {"name", "lambda", "scale", "a", "omega"});
    FieldSpec f;
    f.name = string(obj, path, "name", fallback.name, {"constant", "linear", "tanh", "sin", "rotation"});
    if (obj.contains("lambda")) {
      if (obj.at("lambda").is_number()) {
        f.lambda_scalar = number(obj, path, "lambda", 1.0);
      } else {
        f.lambda = numbers(obj, path, "lambda", {});
      }
    } else {
      f.lambda_scalar = 1.0;
    }
    f.scale = number(obj, path, "scale", 1.0);
    f.a = numbers(obj, path, "a", {});
    f.omega = numbers(obj, path, "omega", {});
    return f;
  }

  const std::string& text() const { return text_; }

 private:
  const std::string& text_;
  std::string source_;
};

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
    const std::size_t line = line_of_offset(text, offset);
    const std::string key = key_before(text, offset);
    std::string msg = source + ":" + std::to_string(line) + ": ";
    if (!key.empty()) msg += "key '" + key + "': ";
    throw ConfigError(msg + "malformed JSON: " + e.what(), key, line);
  }
  const Reader r(text, source);
  if (!root.is_object()) throw ConfigError(source + ": the configuration must be a JSON object", "", 1);
  r.only_keys(root, "", {"schema", "alpha", "T", "n", "grid", "seed", "trials", "driver", "field", "y0",
                         "y0_shift", "z_mode", "z_field", "z_custom", "levels", "solver", "output"});
  if (!root.contains("schema")) r.fail("schema", "missing; this build reads schema 1");
  if (r.integer(root, "", "schema", 0) != 1) r.fail("schema", "unsupported schema version; expected 1");

  ExperimentConfig cfg;
  cfg.alpha = r.number(root, "", "alpha", cfg.alpha);
  cfg.horizon = r.number(root, "", "T", cfg.horizon);
  cfg.n = r.integer(root, "", "n", cfg.n);
  cfg.grid = r.string(root, "", "grid", "uniform", {"uniform", "dyadic"}) == "dyadic" ? GridKind::dyadic
                                                                                       : GridKind::uniform;
  cfg.seed = r.integer(root, "", "seed", cfg.seed);
  cfg.trials = r.integer(root, "", "trials", cfg.trials);

  const json& drv = r.object(root, "", "driver");
  r.only_keys(drv, "driver", {"kind", "dim", "hurst", "amplitude", "omega", "phase", "coefficients", "samples", "lift"});
  const std::string kind = r.string(drv, "driver", "kind", "bm", {"bm", "fbm", "sin", "poly", "samples"});
  cfg.driver.kind = kind == "bm"    ? SignalKind::bm
                    : kind == "fbm" ? SignalKind::fbm
                    : kind == "sin" ? SignalKind::sin
                    : kind == "poly" ? SignalKind::poly
                                     : SignalKind::samples;
  cfg.driver.dim = r.integer(drv, "driver", "dim", 1);
  cfg.driver.hurst = r.number(drv, "driver", "hurst", 0.5);
  cfg.driver.amplitude = r.number(drv, "driver", "amplitude", 1.0);
  cfg.driver.omega = r.numbers(drv, "driver", "omega", cfg.driver.omega);
  cfg.driver.phase = r.numbers(drv, "driver", "phase", {});
  cfg.driver.samples = r.numbers(drv, "driver", "samples", {});
  if (drv.contains("coefficients")) {
    const json& c = drv.at("coefficients");
    bool ok = c.is_array() && !c.empty();
    std::vector<std::vector<double>> rows;
    if (ok && c.front().is_number()) {
      rows.push_back(r.numbers(drv, "driver", "coefficients", {}));
    } else if (ok) {
      for (const auto& row : c) {
        if (!row.is_array()) {
          ok = false;
          break;
        }
        std::vector<double> v;
        for (const auto& e : row) {
          if (!e.is_number()) ok = false;
          else v.push_back(e.get<double>());
        }
        rows.push_back(std::move(v));
      }
    }
    if (!ok) r.fail("driver.coefficients", "expected an array of numbers or an array of arrays");
    cfg.driver.coefficients = std::move(rows);
  }
  cfg.lift = r.string(drv, "driver", "lift", "geometric", {"geometric", "ito"}) == "ito" ? LiftKind::ito
                                                                                          : LiftKind::geometric;

  cfg.field = r.field(r.object(root, "", "field"), "field", cfg.field);
  cfg.y0 = r.numbers(root, "", "y0", cfg.y0);
  cfg.y0_shift = r.number(root, "", "y0_shift", 0.0);
  const std::string zm = r.string(root, "", "z_mode", "identity", {"identity", "integral", "custom"});
  cfg.z_mode = zm == "identity" ? ZMode::identity : zm == "integral" ? ZMode::integral : ZMode::custom;
  cfg.z_field = r.field(r.object(root, "", "z_field"), "z_field", cfg.z_field);
  const json& zc = r.object(root, "", "z_custom");
  r.only_keys(zc, "z_custom", {"dim", "values", "derivatives"});
  cfg.z_dim = r.integer(zc, "z_custom", "dim", 0);
  cfg.z_values = r.numbers(zc, "z_custom", "values", {});
  cfg.z_derivatives = r.numbers(zc, "z_custom", "derivatives", {});
  cfg.levels = r.counts(root, "", "levels");

  const json& sv = r.object(root, "", "solver");
  r.only_keys(sv, "solver", {"tol", "max_iters", "tau_shrink", "min_window_cells", "initial_window_cells"});
  cfg.solver.tol = r.number(sv, "solver", "tol", cfg.solver.tol);
  cfg.solver.max_iters = r.integer(sv, "solver", "max_iters", cfg.solver.max_iters);
  cfg.solver.tau_shrink = r.integer(sv, "solver", "tau_shrink", cfg.solver.tau_shrink);
  cfg.solver.min_window_cells = r.integer(sv, "solver", "min_window_cells", cfg.solver.min_window_cells);
  cfg.solver.initial_window_cells = r.integer(sv, "solver", "initial_window_cells", 0);

  const json& out = r.object(root, "", "output");
  r.only_keys(out, "output", {"path", "format"});
  cfg.output_path = r.string(out, "output", "path", "");
  cfg.format = r.string(out, "output", "format", "csv", {"csv", "json"}) == "json" ? OutputFormat::json
                                                                                  : OutputFormat::csv;
  validate(cfg, text);
  return cfg;
}

void validate(const ExperimentConfig& cfg, const std::string& text) {
  const auto fail = [&](const std::string& key, const std::string& what) {
    const std::size_t line = text.empty() ? 0 : line_of_key(text, key);
    std::string msg = "config";
    if (line) msg += ":" + std::to_string(line);
    throw ConfigError(msg + ": key '" + key + "': " + what, key, line);
  };
  if (!(cfg.alpha > 1.0 / 3.0 && cfg.alpha <= 0.5)) fail("alpha", "must lie in (1/3, 1/2]");
  if (!(cfg.horizon > 0.0)) fail("T", "must be positive");
  if (cfg.n == 0) fail("n", "must be positive");
  if ((cfg.grid == GridKind::dyadic || !cfg.levels.empty()) && !is_power_of_two(cfg.n)) {
    fail("n", "must be a power of two when levels are given or the grid is dyadic");
  }
  for (const std::size_t f : cfg.levels) {
    if (cfg.n % f != 0) fail("levels", "factor " + std::to_string(f) + " does not divide n");
  }
  if (cfg.trials == 0) fail("trials", "must be positive");
  if (cfg.driver.dim == 0) fail("dim", "driver dimension must be positive");
  if (cfg.driver.kind == SignalKind::fbm && !(cfg.driver.hurst > 1.0 / 3.0 && cfg.driver.hurst <= 1.0)) {
    fail("hurst", "must lie in (1/3, 1]");
  }
  if (cfg.driver.kind == SignalKind::fbm && cfg.n > kMaxFbmCells) {
    fail("n", "fbm drivers are limited to " + std::to_string(kMaxFbmCells) + " cells");
  }
  if (cfg.y0.empty()) fail("y0", "must be a nonempty array");
  if (!(cfg.solver.tol > 0.0)) fail("tol", "must be positive");
  if (cfg.solver.max_iters == 0) fail("max_iters", "must be at least 1");
  if (cfg.solver.tau_shrink < 2) fail("tau_shrink", "must be at least 2");
  if (cfg.solver.min_window_cells == 0) fail("min_window_cells", "must be at least 1");
  if (cfg.z_mode == ZMode::custom) {
    if (cfg.z_dim == 0) fail("z_custom", "custom z_mode needs z_custom.dim");
    if (cfg.z_values.size() != (cfg.n + 1) * cfg.z_dim) fail("values", "expected (n+1) * dim entries");
    if (cfg.z_derivatives.size() != (cfg.n + 1) * cfg.z_dim * cfg.driver.dim) {
      fail("derivatives", "expected (n+1) * dim * driver.dim entries");
    }
  }
}

std::string schema_help() {
  return R"(Configuration (JSON, "schema": 1). Every key except "schema" is optional.

  schema      1
  alpha       Hölder exponent in (1/3, 1/2]                        [0.45]
  T           horizon                                              [1]
  n           grid cells; a power of two when levels are given     [1024]
  grid        "uniform" | "dyadic"                                 ["uniform"]
  seed        64-bit master seed; trial t uses a derived seed      [0]
  trials      independent trials                                   [1]
  driver      {kind: "bm"|"fbm"|"sin"|"poly"|"samples", dim,
               hurst (fbm), amplitude, omega, phase (sin),
               coefficients (poly), samples ((n+1)*dim values),
               lift: "geometric"|"ito"}
  field       {name: "constant"|"linear"|"tanh"|"sin"|"rotation",
               lambda: number or m*q*m array, scale, a (constant), omega (rotation)}
              F : R^m -> R^{m x q}; m = len(y0), q = dimension of Z
  y0          initial value                                        [[1]]
  y0_shift    offset added to the approximating solve's y0 (stability)  [0]
  z_mode      "identity" (Z = (X, id)) | "integral" (Z = ∫ G(X) dX) | "custom"
  z_field     G for z_mode "integral", same form as field, m = q = driver.dim
  z_custom    {dim, values ((n+1)*dim), derivatives ((n+1)*dim*driver.dim)}
  levels      subsampling / relift factors, e.g. [16, 8, 4, 2]
  solver      {tol [1e-10], max_iters [50], tau_shrink [2],
               min_window_cells [4], initial_window_cells [0 = whole grid]}
  output      {path (stdout when empty), format: "csv"|"json"}

Outputs (CSV headers):
  lift         index,time,x_<p>...,xx_<p><q>...
  integrate    index,time,value_<a>...
  solve        index,time,y_<a>...
  rates        trial,level,mesh,error   (+ <trial>,slope_mesh / slope_local summary rows)
  contraction  window_start,window_end,iters,ratio,residual,accepted
  stability    trial,factor,x_dist,z_dist,y_dist,y0_gap,z0_gap,terminal_gap   (+ median rows)

Exit codes: 0 success, 2 configuration error, 3 numerical failure, 1 other errors.
Environment: ROUGHLAB_THREADS caps the worker pool.
)";
}

}  // namespace roughlab::lab
