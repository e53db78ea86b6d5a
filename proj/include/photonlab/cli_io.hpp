#pragma once

#include "photonlab/experiments.hpp"
#include "photonlab/inequalities.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace photonlab {

/// Fully resolved experiment description: grid and potential blocks plus
/// the run parameters, parsed from the sectioned key-value text format.
struct Config {
    // [grid]
    int dim = 1;
    int points = 512;
    double half_length = 128.0;
    // [potential] attractive Gaussian well -depth * exp(-(r/width)^2)
    double depth = 0.0;
    double well_width = 2.0;
    // [run]
    std::string experiment = "maxvel";
    std::string output = "run";
    int shell = 0;                    // prop-estimate shell index
    std::string variant = "f_prime";  // prop-estimate variant
    RunConfig run;
    // [inequalities]
    InequalityOptions inequalities;
};

/// Parse failure carrying every violated constraint, one message each.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> issues);
    const std::vector<std::string>& issues() const { return issues_; }

private:
    std::vector<std::string> issues_;
};

/// Parses and validates the sectioned key-value format:
///
///   [grid]
///   points = 512
///   [run]
///   experiment = maxvel
///   R = 1.15
///
/// Unknown sections or keys are rejected by name; all violations are
/// aggregated into one ConfigError.
Config parse_config(const std::string& text);

/// parse_config on the contents of a file.
Config load_config(const std::string& path);

/// Binary wavefunction snapshot: fixed 64-byte header (magic "PHMV1",
/// version, layout, grid shape, time) followed by the raw little-endian
/// complex payload, interleaved re/im. Round trips are bit-exact.
struct Checkpoint {
    Field field;
    double time = 0.0;
};

void save_checkpoint(const Field& f, double time, const std::string& path);

/// Loads a checkpoint, rebuilding the grid from the header. When
/// `expect` is non-null the stored grid must match it exactly.
Checkpoint load_checkpoint(const std::string& path,
                           const GridPtr& expect = nullptr);

/// Runs the configured experiment and writes CSV (17 significant
/// digits, with a .schema column listing per artifact), a summary.json
/// whose records each carry their "eq" anchor, and an initial-state
/// checkpoint, all under <output root>/<cfg.output>. The environment
/// variable PHOTONLAB_OUTPUT_ROOT overrides the output root (default:
/// current directory). Returns the process exit code: 0 ok, 2 config
/// error, 3 numeric failure, 4 verdict violated.
int execute(const Config& cfg);

}  // namespace photonlab
