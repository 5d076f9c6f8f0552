#include <CLI11.hpp>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "roughlab/lab.hpp"

namespace roughlab::lab {
namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Options {
  std::string config_path;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string format;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open configuration file", "", 0);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ExperimentConfig load(const Options& opt) {
  const std::string text = read_file(opt.config_path);
  ExperimentConfig cfg = parse_config(text, opt.config_path);
  if (opt.seed) cfg.seed = *opt.seed;
  if (!opt.out.empty()) cfg.output_path = opt.out;
  if (opt.format == "csv") cfg.format = OutputFormat::csv;
  if (opt.format == "json") cfg.format = OutputFormat::json;
  validate(cfg, text);
  return cfg;
}

// Writes the finished text to the configured path, or stdout when none is set.
void emit(const ExperimentConfig& cfg, const std::string& text) {
  if (cfg.output_path.empty()) {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(cfg.output_path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + cfg.output_path);
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + cfg.output_path);
}

// Node table: index, time, then the given columns of every node.
std::string node_table(const Grid& grid, const std::vector<std::string>& names,
                       const std::function<void(std::size_t, std::vector<double>&)>& row, OutputFormat format) {
  std::vector<double> v(names.size());
  if (format == OutputFormat::json) {
    json time = json::array(), cols = json::object();
    for (const auto& name : names) cols[name] = json::array();
    for (std::size_t k = 0; k < grid.nodes(); ++k) {
      row(k, v);
      time.push_back(grid.time(k));
      for (std::size_t c = 0; c < names.size(); ++c) cols[names[c]].push_back(v[c]);
    }
    return json{{"time", time}, {"columns", cols}}.dump(2) + "\n";
  }
  std::ostringstream out;
  out << "index,time";
  for (const auto& name : names) out << ',' << name;
  out << '\n';
  for (std::size_t k = 0; k < grid.nodes(); ++k) {
    row(k, v);
    out << k << ',' << format_number(grid.time(k));
    for (const double x : v) out << ',' << format_number(x);
    out << '\n';
  }
  return out.str();
}

std::vector<std::string> indexed(const std::string& prefix, std::size_t count) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < count; ++i) names.push_back(prefix + std::to_string(i));
  return names;
}

std::string run_lift(const ExperimentConfig& cfg) {
  const RoughPathPtr x = build_driver(cfg, 0);
  const std::size_t d = x->dim();
  std::vector<std::string> names = indexed("x_", d);
  for (std::size_t p = 0; p < d; ++p) {
    for (std::size_t q = 0; q < d; ++q) names.push_back("xx_" + std::to_string(p) + std::to_string(q));
  }
  // 𝕏_{0,t_{k+1}} = 𝕏_{0,t_k} + 𝕏_{t_k,t_{k+1}} + X_{0,t_k} ⊗ X_{t_k,t_{k+1}}
  std::vector<double> area(d * d, 0.0);
  const auto x0 = x->value(0);
  return node_table(
      x->grid(), names,
      [&](std::size_t k, std::vector<double>& v) {
        if (k > 0) {
          const auto a = x->value(k - 1), b = x->value(k), cell = x->cell_area(k - 1);
          for (std::size_t p = 0; p < d; ++p) {
            for (std::size_t q = 0; q < d; ++q) area[p * d + q] += cell[p * d + q] + (a[p] - x0[p]) * (b[q] - a[q]);
          }
        }
        const auto xk = x->value(k);
        std::copy(xk.begin(), xk.end(), v.begin());
        std::copy(area.begin(), area.end(), v.begin() + static_cast<std::ptrdiff_t>(d));
      },
      cfg.format);
}

std::string run_integrate(const ExperimentConfig& cfg) {
  const ControlledPath z = build_z(cfg, build_driver(cfg, 0));
  const std::size_t q = z.shape().rows;
  const ControlledPath integral = integral_controlled(compose(build_field(cfg.field, q, q), z), z);
  return node_table(
      z.grid(), indexed("value_", integral.value_size()),
      [&](std::size_t k, std::vector<double>& v) {
        const auto val = integral.value(k);
        std::copy(val.begin(), val.end(), v.begin());
      },
      cfg.format);
}

std::string run_solve(const ExperimentConfig& cfg) {
  const ControlledPath z = build_z(cfg, build_driver(cfg, 0));
  const VectorField f = build_field(cfg.field, cfg.y0.size(), z.shape().rows);
  const ControlledPath y = solve(f, z, cfg.y0, cfg.solver).path;
  return node_table(
      y.grid(), indexed("y_", y.value_size()),
      [&](std::size_t k, std::vector<double>& v) {
        const auto val = y.value(k);
        std::copy(val.begin(), val.end(), v.begin());
      },
      cfg.format);
}

int numerical_failure(const std::string& module, const std::string& what) {
  std::cerr << "roughlab: numerical failure in module '" << module << "': " << what << '\n';
  return kExitNumerical;
}

int run(const std::string& command, const Options& opt) {
  const ExperimentConfig cfg = load(opt);
  const bool csv = cfg.format == OutputFormat::csv;
  if (command == "lift") {
    emit(cfg, run_lift(cfg));
  } else if (command == "integrate") {
    emit(cfg, run_integrate(cfg));
  } else if (command == "solve") {
    emit(cfg, run_solve(cfg));
  } else if (command == "rates") {
    const RatesResult r = run_rates(cfg);
    std::ostringstream out;
    if (csv) {
      write_rates_csv(out, r);
    } else {
      out << rates_json(r);
    }
    emit(cfg, out.str());
  } else if (command == "contraction") {
    const ContractionResult r = run_contraction(cfg);
    std::ostringstream out;
    if (csv) {
      write_contraction_csv(out, r);
    } else {
      out << contraction_json(r);
    }
    emit(cfg, out.str());
    if (r.failure) return numerical_failure("solver", *r.failure);
  } else if (command == "stability") {
    const StabilityResult r = run_stability(cfg);
    std::ostringstream out;
    if (csv) {
      write_stability_csv(out, r);
    } else {
      out << stability_json(r);
    }
    emit(cfg, out.str());
    if (r.failure) return numerical_failure(r.failure_module, *r.failure);
    std::cerr << "stability: " << r.verdict.text() << '\n';
  }
  return kExitOk;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Rough path experiments: lifts, rough integrals, RDE solves and convergence studies.", "roughlab"};
  app.set_help_flag();
  app.set_help_all_flag();
  app.add_flag("-h,--help", "Print usage and the configuration schema");
  app.require_subcommand(0, 1);

  Options opt;
  std::uint64_t seed = 0;
  const char* commands[][2] = {{"lift", "Lift the driver and print X and its second level"},
                               {"integrate", "Rough integral of F(Z) against Z"},
                               {"solve", "Solve dY = F(Y) dZ"},
                               {"rates", "Mesh and local expansion convergence rates"},
                               {"contraction", "Per-window Picard contraction records"},
                               {"stability", "Stability of the solution map under driver approximation"}};
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c[0], c[1]);
    sub->add_option("--config", opt.config_path, "JSON configuration file")->required();
    sub->add_option("--out", opt.out, "Output path (overrides output.path)");
    sub->add_option("--seed", seed, "Master seed (overrides seed)");
    sub->add_option("--format", opt.format, "Output format (overrides output.format)")
        ->check(CLI::IsMember({"csv", "json"}));
  }

  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "-h" || arg == "--help") {
      std::cout << app.help() << '\n' << schema_help();
      return kExitOk;
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::cerr << "roughlab: " << e.what() << '\n';
    return kExitConfig;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help() << '\n' << schema_help();
    return kExitConfig;
  }

  CLI::App* sub = app.get_subcommands().front();
  if (sub->count("--seed")) opt.seed = seed;
  try {
    return run(sub->get_name(), opt);
  } catch (const ConfigError& e) {
    std::cerr << "roughlab: configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidArgument& e) {
    std::cerr << "roughlab: invalid argument in module '" << e.module() << "': " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    return numerical_failure(e.module(), e.what());
  } catch (const std::exception& e) {
    std::cerr << "roughlab: " << e.what() << '\n';
    return kExitOther;
  }
}

}  // namespace roughlab::lab
