#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <spirallax/io.hpp>
#include <spirallax/suite.hpp>

namespace sl = spirallax;
namespace io = spirallax::io;

namespace {

enum Exit { ok = 0, validation = 2, numeric = 3, verification = 4 };

struct RunConfig {
  std::string input, output;
  std::optional<int> n;
  std::uint64_t rng_seed = 1;
  double twist = 0.1;
  int steps = 1;
  std::vector<double> mu;
  bool geometric = false;
  bool check_invariance = false;
  std::optional<double> tol_lift, tol_spec;

  sl::Tolerances tol() const {
    sl::Tolerances t;
    if (tol_lift) t.lift = *tol_lift;
    if (tol_spec) t.spec = *tol_spec;
    return t;
  }
};

void emit(const RunConfig& cfg, const std::string& data) {
  if (cfg.output.empty() || cfg.output == "-") {
    std::cout << data;
    std::cout.flush();
  } else {
    io::write_atomic(cfg.output, data);
    spdlog::info("wrote {}", cfg.output);
  }
}

io::json load(const RunConfig& cfg) {
  if (cfg.input.empty()) throw sl::InvalidInput("an input file is required (-i)");
  return io::parse(cfg.input == "-" ? std::string(std::istreambuf_iterator<char>(std::cin), {}) : io::read_file(cfg.input));
}

sl::Seed seed_arg(const RunConfig& cfg) {
  if (!cfg.input.empty()) {
    auto j = load(cfg);
    if (io::kind_of(j) != io::DocKind::seed) throw sl::InvalidInput("expected a seed document");
    auto s = io::seed_from(j);
    sl::check_n(s.n);
    return s;
  }
  if (!cfg.n) throw sl::InvalidInput("give -i seed.json or --n");
  sl::check_n(*cfg.n);
  return sl::random_seed(*cfg.n, cfg.rng_seed, cfg.twist);
}

// Coordinates from a seed, lifted window or coordinate document.
sl::Coords coords_arg(const RunConfig& cfg) {
  if (cfg.input.empty()) return sl::extract_coords(sl::canonical_lift(seed_arg(cfg), cfg.tol()), cfg.tol());
  auto j = load(cfg);
  switch (io::kind_of(j)) {
    case io::DocKind::seed: {
      auto s = io::seed_from(j);
      sl::check_n(s.n);
      return sl::extract_coords(sl::canonical_lift(s, cfg.tol()), cfg.tol());
    }
    case io::DocKind::lifted: {
      auto ls = io::lifted_from(j);
      sl::check_n(ls.n);
      return sl::extract_coords(ls, cfg.tol());
    }
    case io::DocKind::coords: {
      auto c = io::coords_from(j);
      sl::check_n(c.n);
      return c;
    }
    default:
      throw sl::InvalidInput("expected a seed, lifted spiral or coordinates document");
  }
}

int cmd_gen(const RunConfig& cfg) {
  if (!cfg.n) throw sl::InvalidInput("--n is required");
  emit(cfg, io::dump(io::to_json(seed_arg(cfg))));
  return ok;
}

int cmd_lift(const RunConfig& cfg) {
  emit(cfg, io::dump(io::to_json(sl::canonical_lift(seed_arg(cfg), cfg.tol()))));
  return ok;
}

int cmd_coords(const RunConfig& cfg) {
  emit(cfg, io::dump(io::to_json(coords_arg(cfg))));
  return ok;
}

int cmd_shift(const RunConfig& cfg) {
  if (cfg.steps < 0) throw sl::InvalidInput("--steps must be non-negative");
  auto t = cfg.tol();
  if (!cfg.geometric) {
    emit(cfg, io::dump(io::to_json(sl::shift_coords(coords_arg(cfg), cfg.steps))));
    return ok;
  }
  sl::Seed s;
  auto j = cfg.input.empty() ? io::json() : load(cfg);
  if (!cfg.input.empty() && io::kind_of(j) == io::DocKind::seed) {
    s = io::seed_from(j);
    sl::check_n(s.n);
  } else {
    s = sl::seed_from_coords(coords_arg(cfg), t);
  }
  for (int k = 0; k < cfg.steps; ++k) s = sl::geometric_shift(s, t);
  emit(cfg, io::dump(io::to_json(sl::extract_coords(sl::canonical_lift(s, t), t))));
  return ok;
}

int cmd_spectrum(const RunConfig& cfg) {
  auto c = coords_arg(cfg);
  if (cfg.check_invariance) {
    auto r = sl::verify_spectral_invariance(c, cfg.steps, cfg.tol());
    emit(cfg, io::dump(io::to_json(r)));
    return r.pass ? ok : verification;
  }
  emit(cfg, io::dump(io::to_json(sl::spectral_table(c, cfg.tol()))));
  return ok;
}

int cmd_orbit(const RunConfig& cfg) {
  if (cfg.steps < 0) throw sl::InvalidInput("--steps must be non-negative");
  emit(cfg, io::orbit_csv(coords_arg(cfg), cfg.steps, cfg.tol()));
  return ok;
}

int cmd_verify(const RunConfig& cfg) {
  auto s = seed_arg(cfg);
  sl::SuiteOptions o;
  o.tol = cfg.tol();
  if (!cfg.mu.empty()) o.mu_samples = cfg.mu;
  auto checks = sl::run_suite(s, o);
  bool pass = true;
  io::json arr = io::json::array();
  for (auto& r : checks) {
    pass = pass && r.pass;
    arr.push_back(io::to_json(r));
    if (!r.pass) spdlog::warn("check {} failed: max_dev {}", r.check, r.max_dev);
  }
  emit(cfg, io::dump({{"n", s.n}, {"checks", arr}, {"pass", pass}}));
  return pass ? ok : verification;
}

int cmd_render(const RunConfig& cfg) {
  auto s = seed_arg(cfg);
  auto ls = sl::canonical_lift(s, cfg.tol());
  int extra = std::max(0, cfg.steps);
  auto w = sl::extend(s, ls.V, extra, extra, cfg.tol());
  emit(cfg, io::render_svg(w, s.n));
  return ok;
}

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("spirallax");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* v = std::getenv("SPIRALLAX_LOG")) spdlog::set_level(spdlog::level::from_str(v));
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Twisted (N,1) pentagram spirals: lifts, coordinates, shift map and spectral invariants"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sc) {
    sc->add_option("-i,--input", cfg.input, "input JSON document");
    sc->add_option("-o,--output", cfg.output, "output file (stdout if omitted)");
    sc->add_option("--tol-lift", cfg.tol_lift, "unit-determinant tolerance");
    sc->add_option("--tol-spec", cfg.tol_spec, "spectral tolerance");
  };
  auto add_gen = [&](CLI::App* sc) {
    sc->add_option("--n", cfg.n, "number of base vertices");
    sc->add_option("--rng-seed", cfg.rng_seed, "random seed");
    sc->add_option("--twist", cfg.twist, "monodromy perturbation size");
  };

  std::vector<std::pair<CLI::App*, int (*)(const RunConfig&)>> cmds;
  auto* gen = app.add_subcommand("gen", "write a random seed");
  add_common(gen), add_gen(gen);
  cmds.push_back({gen, cmd_gen});
  auto* lift = app.add_subcommand("lift", "seed -> canonical lift");
  add_common(lift), add_gen(lift);
  cmds.push_back({lift, cmd_lift});
  auto* coords = app.add_subcommand("coords", "seed or lift -> coordinates");
  add_common(coords), add_gen(coords);
  cmds.push_back({coords, cmd_coords});
  auto* shift = app.add_subcommand("shift", "apply the shift map");
  add_common(shift), add_gen(shift);
  shift->add_option("--steps", cfg.steps, "number of applications");
  shift->add_flag("--geometric", cfg.geometric, "shift the seed geometrically instead of by closed form");
  cmds.push_back({shift, cmd_shift});
  auto* spectrum = app.add_subcommand("spectrum", "coefficients of det(M(mu) - r I)");
  add_common(spectrum), add_gen(spectrum);
  spectrum->add_flag("--check-invariance", cfg.check_invariance, "compare along the shift orbit");
  spectrum->add_option("--steps", cfg.steps, "orbit length for --check-invariance");
  cmds.push_back({spectrum, cmd_spectrum});
  auto* orbit = app.add_subcommand("orbit", "CSV of coordinates along the shift orbit");
  add_common(orbit), add_gen(orbit);
  orbit->add_option("--steps", cfg.steps, "orbit length");
  cmds.push_back({orbit, cmd_orbit});
  auto* verify = app.add_subcommand("verify", "run the property suite on one instance");
  add_common(verify), add_gen(verify);
  verify->add_option("--mu", cfg.mu, "spectral parameter samples");
  cmds.push_back({verify, cmd_verify});
  auto* render = app.add_subcommand("render", "SVG of the spiral window");
  add_common(render), add_gen(render);
  render->add_option("--steps", cfg.steps, "extra vertices on each side of the lift window");
  cmds.push_back({render, cmd_render});

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? ok : validation;
  }

  try {
    for (auto& [sc, fn] : cmds)
      if (sc->parsed()) return fn(cfg);
  } catch (const sl::Error& e) {
    spdlog::error("{}", e.what());
    return e.kind == sl::ErrorKind::validation ? validation : numeric;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return numeric;
  }
  return validation;
}
