#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tiltlab/core.hpp"
#include "tiltlab/ensemble.hpp"

namespace tiltlab {

struct ParseError : std::runtime_error {
  ParseError(const std::string& what, int code = 2) : std::runtime_error(what), exit_code(code) {}
  // 0 when the "error" is a help request
  int exit_code;
};

struct RunConfig {
  std::string command;

  double a = 2.0;
  double T = 1.0;
  std::size_t grid_points = 129;
  std::size_t draws = 1;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string out_dir;
  std::size_t threads = 0;

  // sample-one-line
  double x = 1.0, y = 1.0;
  std::string method = "pbr";
  // sample-ensemble
  double lambda = 2.0;
  std::size_t n = 2;
  std::string boundary = "zero";
  std::size_t sweeps = 200;
  std::size_t block_points = 65;
  // fs-density
  double xmax = 5.0;
  std::size_t points = 201;
  // hydro
  double K = 1.0;
  double delta = 0.02;
  int k = 2;
  std::string emit = "scaffold";
  // verify
  std::string suite = "all";
  std::string budget = "smoke";

  bool operator==(const RunConfig&) const = default;
};

const std::vector<std::string>& subcommands();

// argv[0] is the program name.  A --config file (key=value lines under a [subcommand] section)
// is read first and flags override it.  Every invalid field is listed in the error.
RunConfig parse_config(const std::vector<std::string>& argv);
// Problems with the values, one message per field; empty when valid.
std::vector<std::string> validate(const RunConfig& c);
// The on-disk form read back by parse_config's --config.
std::string to_config_text(const RunConfig& c);

// zero | flat:<h> | nu:<L>,<R> | rho:<K>
BoundaryScheme parse_boundary(const std::string& s);
std::vector<Ensemble> draw_one_line(const RunConfig& c);
std::vector<Ensemble> draw_ensemble(const RunConfig& c);
// The draws a sample-one-line or sample-ensemble run would write, after validation.
std::vector<Ensemble> draw_samples(RunConfig c);

// Executes the pipeline; returns 0 on success, 1 on test failure, 2 on usage errors.
// Messages go to `log`.
int run(RunConfig c, std::ostream& log);
// parse_config + run with the exit-code policy applied to parse errors.
int main_entry(int argc, char** argv);

}  // namespace tiltlab
