#include "tiltlab/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "tiltlab/ensemble.hpp"
#include "tiltlab/hydro.hpp"
#include "tiltlab/oneline.hpp"
#include "tiltlab/special.hpp"
#include "tiltlab/verify.hpp"

namespace tiltlab {

namespace fs = std::filesystem;

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {"sample-one-line", "sample-ensemble",
                                                 "fs-density", "hydro", "verify"};
  return names;
}

namespace {

struct Key {
  std::string name;
  std::vector<std::string> commands;
};

// which keys each subcommand reads; drives both the flag set and the config text
const std::vector<Key>& keys() {
  static const std::vector<Key> k = {
      {"a", {"sample-one-line", "sample-ensemble", "fs-density"}},
      {"T", {"sample-one-line", "sample-ensemble", "hydro"}},
      {"x", {"sample-one-line"}},
      {"y", {"sample-one-line"}},
      {"grid-points", {"sample-one-line", "sample-ensemble"}},
      {"method", {"sample-one-line"}},
      {"draws", {"sample-one-line", "sample-ensemble"}},
      {"lambda", {"sample-ensemble", "hydro"}},
      {"n", {"sample-ensemble"}},
      {"boundary", {"sample-ensemble"}},
      {"sweeps", {"sample-one-line", "sample-ensemble"}},
      {"block-points", {"sample-one-line", "sample-ensemble"}},
      {"xmax", {"fs-density"}},
      {"points", {"fs-density", "hydro"}},
      {"K", {"hydro"}},
      {"delta", {"hydro"}},
      {"k", {"hydro"}},
      {"emit", {"hydro"}},
      {"suite", {"verify"}},
      {"budget", {"verify"}},
  };
  return k;
}

bool uses(const std::string& cmd, const std::string& key) {
  for (const auto& k : keys())
    if (k.name == key)
      for (const auto& c : k.commands)
        if (c == cmd) return true;
  return false;
}

// Register the options of `cmd` bound to the fields of c.
void bind(CLI::App* sub, RunConfig& c) {
  const std::string cmd = sub->get_name();
  auto opt = [&](const std::string& key, auto& field, const std::string& help) {
    if (uses(cmd, key)) sub->add_option("--" + key, field, help)->capture_default_str();
  };
  opt("a", c.a, "tilt strength");
  opt("T", c.T, "half-width of the time domain [-T, T]");
  opt("x", c.x, "left boundary value");
  opt("y", c.y, "right boundary value");
  opt("grid-points", c.grid_points, "number of grid points including both ends");
  opt("method", c.method, "exact | mcmc | pbr");
  opt("draws", c.draws, "number of recorded draws");
  opt("lambda", c.lambda, "ratio between consecutive tilt strengths");
  opt("n", c.n, "number of lines");
  opt("boundary", c.boundary, "zero | flat:<h> | nu:<L>,<R> | rho:<K>");
  opt("sweeps", c.sweeps, "sweeps between recorded draws (MCMC)");
  opt("block-points", c.block_points, "points per block update (MCMC)");
  opt("xmax", c.xmax, "right end of the density table");
  opt("points", c.points, "rows in the table");
  opt("K", c.K, "slope parameter");
  opt("delta", c.delta, "error exponent");
  opt("k", c.k, "line index");
  opt("emit", c.emit, "scaffold | envelope | shape");
  opt("suite", c.suite, "pbr | fs | scaling | confinement | slopes | gibbs | avoidance | all");
  opt("budget", c.budget, "smoke | full");
  sub->add_option("--seed", c.seed, "random seed; generated and recorded when absent");
  sub->add_option("--out", c.out, "output file");
  sub->add_option("--out-dir", c.out_dir, "directory for default output names");
  sub->add_option("--threads", c.threads, "worker threads (0 = hardware threads)");
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

}  // namespace

BoundaryScheme parse_boundary(const std::string& s) {
  auto tail = [&](std::size_t n) { return s.substr(n); };
  try {
    if (s == "zero") return BoundaryScheme::zero();
    if (s.rfind("flat:", 0) == 0) return BoundaryScheme::flat(std::stod(tail(5)));
    if (s.rfind("rho:", 0) == 0) return BoundaryScheme::top_line(std::stod(tail(4)));
    if (s.rfind("nu:", 0) == 0) {
      const std::string body = tail(3);
      const auto comma = body.find(',');
      if (comma == std::string::npos) throw InvalidArgument("nu boundary needs L,R");
      return BoundaryScheme::slopes(SlopePair(ExtendedReal::finite(std::stod(body.substr(0, comma))),
                                              ExtendedReal::finite(std::stod(body.substr(comma + 1)))));
    }
  } catch (const std::logic_error& e) {
    throw InvalidArgument("boundary '" + s + "': " + e.what());
  }
  throw InvalidArgument("boundary '" + s + "' is not one of zero, flat:<h>, nu:<L>,<R>, rho:<K>");
}

std::vector<std::string> validate(const RunConfig& c) {
  std::vector<std::string> bad;
  auto need = [&](bool ok, const std::string& key, const std::string& msg) {
    if (uses(c.command, key) && !ok) bad.push_back("--" + key + ": " + msg);
  };
  const bool one_line = c.command == "sample-one-line";
  need(one_line ? c.a >= 0 : c.a > 0, "a", one_line ? "strength must be >= 0" : "strength must be > 0");
  need(c.T > 0, "T", "half-width must be positive");
  need(c.x > 0, "x", "left boundary must be positive");
  need(c.y > 0, "y", "right boundary must be positive");
  need(c.grid_points >= 3, "grid-points", "need at least 3 points");
  need(c.method == "exact" || c.method == "mcmc" || c.method == "pbr", "method",
       "must be exact, mcmc or pbr");
  need(c.draws >= 1, "draws", "need at least one draw");
  need(c.lambda > 1, "lambda", "ratio must exceed 1");
  need(c.n >= 1, "n", "need at least one line");
  if (uses(c.command, "boundary")) {
    try {
      parse_boundary(c.boundary);
    } catch (const std::exception& e) {
      bad.push_back(std::string("--boundary: ") + e.what());
    }
  }
  need(c.sweeps >= 1, "sweeps", "need at least one sweep");
  need(c.block_points >= 3, "block-points", "need at least 3 points");
  need(c.xmax > 0, "xmax", "must be positive");
  need(c.points >= 2, "points", "need at least 2 rows");
  need(c.K > 0, "K", "must be positive");
  need(c.delta > 0 && c.delta < 0.05, "delta", "must lie in (0, 1/20)");
  need(c.k >= 2, "k", "line index must be at least 2");
  need(c.emit == "scaffold" || c.emit == "envelope" || c.emit == "shape", "emit",
       "must be scaffold, envelope or shape");
  if (uses(c.command, "suite")) {
    bool known = c.suite == "all";
    for (const auto& s : suite_names()) known = known || s == c.suite;
    if (!known) bad.push_back("--suite: unknown suite '" + c.suite + "'");
  }
  need(c.budget == "smoke" || c.budget == "full", "budget", "must be smoke or full");
  return bad;
}

RunConfig parse_config(const std::vector<std::string>& argv) {
  RunConfig c;
  CLI::App app("Area-tilted line ensembles: samplers, geometry and checks", "tiltlab");
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_config("--config", "", "key=value file; flags override it");
  app.require_subcommand(1);
  std::vector<CLI::App*> subs;
  static const std::map<std::string, std::string> about = {
      {"sample-one-line", "draws of one tilted line above the zero floor"},
      {"sample-ensemble", "draws of the n-line ensemble by block Gibbs sampling"},
      {"fs-density", "table of the stationary one-point density"},
      {"hydro", "tables of the deterministic limit-shape and scaffold functions"},
      {"verify", "statistical checks, one JSON line per report"}};
  for (const auto& name : subcommands()) {
    CLI::App* s = app.add_subcommand(name, about.at(name))->configurable();
    bind(s, c);
    subs.push_back(s);
  }
  std::vector<std::string> args(argv.rbegin(), argv.rend() - 1);
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    std::ostringstream out, err;
    const int code = app.exit(e, out, err);
    if (code == 0) throw ParseError(out.str(), 0);
    throw ParseError(err.str());
  }
  for (auto* s : subs)
    if (s->parsed()) c.command = s->get_name();
  auto bad = validate(c);
  if (!bad.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& b : bad) msg += "\n  " + b;
    throw ParseError(msg);
  }
  return c;
}

std::string to_config_text(const RunConfig& c) {
  std::ostringstream os;
  os << "[" << c.command << "]\n";
  auto put = [&](const std::string& key, const std::string& v) {
    if (uses(c.command, key)) os << key << "=" << v << "\n";
  };
  put("a", num(c.a));
  put("T", num(c.T));
  put("x", num(c.x));
  put("y", num(c.y));
  put("grid-points", std::to_string(c.grid_points));
  put("method", quoted(c.method));
  put("draws", std::to_string(c.draws));
  put("lambda", num(c.lambda));
  put("n", std::to_string(c.n));
  put("boundary", quoted(c.boundary));
  put("sweeps", std::to_string(c.sweeps));
  put("block-points", std::to_string(c.block_points));
  put("xmax", num(c.xmax));
  put("points", std::to_string(c.points));
  put("K", num(c.K));
  put("delta", num(c.delta));
  put("k", std::to_string(c.k));
  put("emit", quoted(c.emit));
  put("suite", quoted(c.suite));
  put("budget", quoted(c.budget));
  if (c.seed) os << "seed=" << *c.seed << "\n";
  if (!c.out.empty()) os << "out=" << quoted(c.out) << "\n";
  if (!c.out_dir.empty()) os << "out-dir=" << quoted(c.out_dir) << "\n";
  os << "threads=" << c.threads << "\n";
  return os.str();
}

namespace {

std::uint64_t fresh_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::string default_name(const RunConfig& c) {
  std::string stem = c.command;
  if (c.command == "verify") stem += "-" + c.suite;
  if (c.command == "hydro") stem += "-" + c.emit;
  stem += "-" + std::to_string(*c.seed);
  return stem + (c.command == "verify" ? ".jsonl" : ".csv");
}

void write_draws(std::ostream& os, const std::vector<Ensemble>& draws) {
  os.precision(17);
  os << "draw,t";
  for (std::size_t i = 0; i < draws.front().lines(); ++i) os << ",x" << i + 1;
  os << "\n";
  for (std::size_t d = 0; d < draws.size(); ++d) {
    const auto& e = draws[d];
    const std::size_t m = e.grid().points();
    for (std::size_t j = 0; j < m; ++j) {
      os << d << "," << (j + 1 == m ? e.grid().right() : e.grid().time(j));
      for (std::size_t i = 0; i < e.lines(); ++i) os << "," << e.at(i, j);
      os << "\n";
    }
  }
}

}  // namespace

std::vector<Ensemble> draw_one_line(const RunConfig& c) {
  const TimeGrid g(-c.T, c.T, c.grid_points);
  const OneLineSpec spec(g, c.a, c.x, c.y);
  RngStream rng(*c.seed, 0);
  std::vector<Ensemble> out;
  if (c.method == "mcmc") {
    McmcConfig cfg;
    cfg.block_points = c.block_points;
    GibbsChain chain = make_one_line_chain(spec, cfg);
    const std::size_t burn = cfg.burn_in_for(g);
    for (std::size_t s = 0; s < burn; ++s) chain.sweep(rng);
    for (std::size_t d = 0; d < c.draws; ++d) {
      for (std::size_t s = 0; s < c.sweeps; ++s) chain.sweep(rng);
      out.push_back(chain.state());
    }
    return out;
  }
  for (std::size_t d = 0; d < c.draws; ++d) {
    BridgeDraw b = c.method == "exact" ? sample_tilted_exact(spec, rng) : sample_pbr_dual(spec, rng);
    out.emplace_back(g, std::vector<std::vector<double>>{b.path.values});
  }
  return out;
}

std::vector<Ensemble> draw_ensemble(const RunConfig& c) {
  const TimeGrid g(-c.T, c.T, c.grid_points);
  McmcConfig cfg;
  cfg.block_points = c.block_points;
  GibbsChain chain = make_lambda_chain(g, TiltParams(c.a, c.lambda, c.n), parse_boundary(c.boundary), cfg);
  RngStream rng(*c.seed, 0);
  const std::size_t burn = cfg.burn_in_for(g);
  for (std::size_t s = 0; s < burn; ++s) chain.sweep(rng);
  std::vector<Ensemble> out;
  for (std::size_t d = 0; d < c.draws; ++d) {
    for (std::size_t s = 0; s < c.sweeps; ++s) chain.sweep(rng);
    out.push_back(chain.state());
  }
  return out;
}

std::vector<Ensemble> draw_samples(RunConfig c) {
  auto bad = validate(c);
  if (!bad.empty()) throw InvalidArgument(bad.front());
  if (!c.seed) throw InvalidArgument("draw_samples needs a seed");
  if (c.command == "sample-one-line") return draw_one_line(c);
  if (c.command == "sample-ensemble") return draw_ensemble(c);
  throw InvalidArgument("draw_samples: not a sampling command: " + c.command);
}

namespace {

void write_fs_table(std::ostream& os, const RunConfig& c) {
  os.precision(17);
  os << "x,density\n";
  for (std::size_t i = 0; i < c.points; ++i) {
    const double x = c.xmax * static_cast<double>(i) / static_cast<double>(c.points - 1);
    os << x << "," << fs_density(x, c.a) << "\n";
  }
}

void write_hydro(std::ostream& os, const RunConfig& c) {
  os.precision(17);
  const HydroGeometry geo(c.T, c.K, c.lambda, c.delta);
  auto ts = [&](std::size_t i) {
    return -c.T + 2 * c.T * static_cast<double>(i) / static_cast<double>(c.points - 1);
  };
  if (c.emit == "shape") {
    const SlopePair p(ExtendedReal::finite(-2 * c.K), ExtendedReal::finite(-2 * c.K));
    os << "t,shape\n";
    for (std::size_t i = 0; i < c.points; ++i) os << ts(i) << "," << hydro_limit_shape(p, ts(i)) << "\n";
  } else if (c.emit == "envelope") {
    const Piecewise env = heavy_envelope(geo, c.k, 2 * c.T * c.T);
    os << "t,envelope\n";
    for (std::size_t i = 0; i < c.points; ++i) os << ts(i) << "," << env(ts(i)) << "\n";
  } else {
    const LightScaffold s = light_path_scaffold(geo, c.k);
    os << "t,floor,path,hat_path,err,err_prime\n";
    for (std::size_t i = 0; i < c.points; ++i) {
      const double t = ts(i);
      const auto [e, ep] = err_bounds(geo, c.k, t);
      os << t << "," << s.floor(t) << "," << s.path(t) << "," << s.hat_path(t) << "," << e << ","
         << ep << "\n";
    }
  }
}

}  // namespace

int run(RunConfig c, std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  if (!c.seed) c.seed = fresh_seed();
  if (c.threads == 0) c.threads = std::max(1u, std::thread::hardware_concurrency());

  std::string dir = c.out_dir;
  if (dir.empty())
    if (const char* env = std::getenv("TILTLAB_OUT_DIR")) dir = env;
  if (dir.empty()) dir = ".";
  fs::path out = c.out.empty() ? fs::path(dir) / default_name(c) : fs::path(c.out);
  const fs::path parent = out.has_parent_path() ? out.parent_path() : fs::path(".");
  if (!fs::is_directory(parent)) {
    log << "error: output directory does not exist: " << parent.string() << "\n";
    return 2;
  }

  std::ostringstream body;
  int status = 0;
  std::size_t failed = 0, total = 0;
  try {
    if (c.command == "sample-one-line") {
      write_draws(body, draw_one_line(c));
    } else if (c.command == "sample-ensemble") {
      write_draws(body, draw_ensemble(c));
    } else if (c.command == "fs-density") {
      write_fs_table(body, c);
    } else if (c.command == "hydro") {
      write_hydro(body, c);
    } else if (c.command == "verify") {
      Budget b = Budget::named(c.budget);
      b.threads = c.threads;
      const auto reports = run_suite(c.suite, b, *c.seed);
      body << reports_jsonl(reports);
      for (const auto& r : reports) {
        ++total;
        if (!r.pass) {
          ++failed;
          log << "FAIL " << r.name << " value=" << r.value << " threshold=" << r.threshold << "\n";
        }
      }
      log << (total - failed) << "/" << total << " checks passed\n";
      status = failed ? 1 : 0;
    }
  } catch (const InvalidArgument& e) {
    log << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    log << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  }

  {
    std::ofstream f(out, std::ios::binary);
    if (!(f << body.str())) {
      log << "error: cannot write " << out.string() << "\n";
      return 2;
    }
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  nlohmann::ordered_json meta;
  meta["command"] = c.command;
  meta["config"] = to_config_text(c);
  meta["seed"] = *c.seed;
  meta["build"] = TILTLAB_BUILD_ID;
  meta["output"] = out.string();
  meta["wall_time_s"] = wall;
  if (c.command == "verify") {
    meta["checks"] = total;
    meta["failed"] = failed;
  }
  fs::path side = out;
  side += ".meta.json";
  std::ofstream s(side);
  if (!(s << meta.dump(2) << "\n")) {
    log << "error: cannot write " << side.string() << "\n";
    return 2;
  }
  log << "wrote " << out.string() << " (seed " << *c.seed << ")\n";
  return status;
}

int main_entry(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  RunConfig c;
  try {
    c = parse_config(args);
  } catch (const ParseError& e) {
    (e.exit_code == 0 ? std::cout : std::cerr) << e.what() << "\n";
    return e.exit_code;
  }
  return run(std::move(c), std::cerr);
}

}  // namespace tiltlab
