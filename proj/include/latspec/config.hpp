#pragma once
/**
 * Run configuration for the CLI: JSON in, validated struct out.
 *
 * Every field has a usable default, so the CLI runs without a config file;
 * a file overrides selected fields. Validation failures throw ConfigError
 * carrying the JSON field path (mapped to exit code 2 by the CLI). The
 * resolved configuration has a canonical serialization whose FNV-1a 64-bit
 * hash stamps every emitted artifact, making outputs pure functions of
 * (config, code version).
 */

#include "latspec/potential.hpp"
#include "latspec/types.hpp"

#include <array>
#include <string>
#include <vector>

namespace latspec {

struct PotentialConfig {
    std::string type = "zero_range";  ///< zero_range | nearest_neighbor | table
    double mu = 1.0;        ///< coupling; a multiple of mu_star when calibrate=true
    bool calibrate = true;  ///< true: effective coupling = mu * mu_star(shape)
    double a = 2.0, b = 0.5;  ///< nearest_neighbor on-site / neighbor coefficients
    std::vector<std::array<double, 4>> coefficients;  ///< table rows (sx, sy, sz, v)

    /** The shape with unit coupling (calibration input). */
    LatticePotential shape() const;
};

struct GridConfig {
    int n = 16;       ///< two-body grid (also the calibration grid)
    int tiny_n = 3;   ///< three-body dense grid, capped at 4
    int eval_n = 6;   ///< tau p-minimization grid
    int cap = 64;     ///< refinement cap for bound-state solves
};

struct SweepConfig {
    std::vector<Vec3> k_list;    ///< dispersion quasimomenta
    std::vector<Vec3> K_list;    ///< three-body total quasimomenta
    std::vector<double> z_list;  ///< count-tiny: offsets below the channel threshold
    std::vector<double> rho_list;
    std::vector<double> r_list;
};

struct ModelConfig {
    double delta = 1.0;
    int l_max = 6;
    int radial_per_decade = 200;
    int angular_n = 64;
    double x_spacing = 0.05;
    double lambda_window = 20.0;
};

struct ToleranceConfig {
    double refine_rel = 1e-8;       ///< grid-doubling agreement for bound states
    double calib_residual = 1e-10;  ///< acceptable |top eig - 1| at mu_star
};

struct OutputConfig {
    std::string dir = "out";
};

struct RunConfig {
    PotentialConfig potential;
    GridConfig grid;
    SweepConfig sweeps;
    ModelConfig model;
    ToleranceConfig tolerances;
    OutputConfig output;

    /** Canonical JSON serialization (sorted keys, full precision). */
    std::string canonical_json() const;
    /** FNV-1a 64-bit hash of canonical_json(), as "0x" + 16 hex digits. */
    std::string hash() const;

    /** Defaults only. */
    static RunConfig defaults();
    /** Defaults overridden by the JSON text; throws ConfigError on problems. */
    static RunConfig from_json_text(const std::string& text);
    /** Defaults overridden by a JSON file. */
    static RunConfig from_file(const std::string& path);

    /** Cross-field validation (also called by the parsers). */
    void validate() const;
};

/** FNV-1a 64-bit. */
std::uint64_t fnv1a64(const std::string& bytes);

} // namespace latspec
