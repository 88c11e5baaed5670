/**
 * latspec — batch front end.
 *
 * Subcommands: lambda0 | resonance | dispersion | tau | count-model |
 * count-tiny | slope-sr. Configuration comes from an optional JSON file
 * (--config); every field has a default, so all commands run configless.
 * Artifacts are deterministic CSV/JSON files under --out (default from the
 * config), each stamped with the FNV-1a hash of the resolved config; reruns
 * are byte-identical. Exit codes: 0 success, 2 config error, 3 numerical
 * failure.
 */

#include "CLI11.hpp"
#if __has_include(<nlohmann/json.hpp>)
#include <nlohmann/json.hpp>
#else
#include "json.hpp"
#endif

#include "latspec/config.hpp"
#include "latspec/lattice_sum.hpp"
#include "latspec/model_operator.hpp"
#include "latspec/three_body.hpp"
#include "latspec/two_body.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

using nlohmann::json;
using namespace latspec;

namespace {

struct Context {
    RunConfig cfg;
    std::string outdir;
    bool json_stdout = false;
    int threads = 1;
};

std::string fmt(double x) {
    if (!std::isfinite(x)) throw NumericalError("non-finite value in output");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

class CsvWriter {
public:
    CsvWriter(const Context& ctx, const std::string& name, const std::string& header) {
        std::filesystem::create_directories(ctx.outdir);
        path_ = ctx.outdir + "/" + name;
        out_.open(path_);
        if (!out_) throw NumericalError("cannot open output file " + path_);
        out_ << "# config_hash: " << ctx.cfg.hash() << "\n" << header << "\n";
    }
    void row(const std::vector<std::string>& cells) {
        for (size_t i = 0; i < cells.size(); ++i)
            out_ << cells[i] << (i + 1 < cells.size() ? "," : "");
        out_ << "\n";
    }
    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::ofstream out_;
};

void write_json(const Context& ctx, const std::string& name, const json& j) {
    std::filesystem::create_directories(ctx.outdir);
    std::ofstream out(ctx.outdir + "/" + name);
    if (!out) throw NumericalError("cannot open output file " + ctx.outdir + "/" + name);
    out << j.dump(2) << "\n";
}

void emit(const Context& ctx, const json& summary, const std::string& human) {
    if (ctx.json_stdout)
        std::cout << summary.dump(2) << "\n";
    else
        std::cout << human;
}

/** Shape with the configured coupling; calibrate=true means mu * mu_star. */
LatticePotential resolved_potential(const Context& ctx, double* mu_star_out = nullptr) {
    const LatticePotential shape = ctx.cfg.potential.shape();
    if (!ctx.cfg.potential.calibrate) {
        if (mu_star_out) *mu_star_out = 0.0;
        return shape.with_mu(ctx.cfg.potential.mu);
    }
    const ResonanceCalibration cal =
        calibrate_resonance(shape, TorusGrid::uniform(ctx.cfg.grid.n));
    if (cal.residual > ctx.cfg.tolerances.calib_residual)
        throw NumericalError("calibration residual " + std::to_string(cal.residual) +
                             " above tolerance");
    if (mu_star_out) *mu_star_out = cal.mu_star;
    return shape.with_mu(ctx.cfg.potential.mu * cal.mu_star);
}

void cmd_lambda0(const Context& ctx) {
    const double l0 = lambda0();
    const double residual = std::abs(s0_closed_form(l0) - 1.0);
    json j{{"lambda0", l0},
           {"half_slope", l0 / (2.0 * M_PI)},
           {"full_slope", l0 / M_PI},
           {"residual", residual}};
    write_json(ctx, "lambda0.json", j);
    emit(ctx, j,
         "lambda0     = " + fmt(l0) + "\nlambda0/pi  = " + fmt(l0 / M_PI) +
             "\nlambda0/2pi = " + fmt(l0 / (2.0 * M_PI)) +
             "\nresidual    = " + fmt(residual) + "\n");
}

void cmd_resonance(const Context& ctx) {
    const ResonanceCalibration cal = calibrate_resonance(
        ctx.cfg.potential.shape(), TorusGrid::uniform(ctx.cfg.grid.n));
    json j{{"config_hash", ctx.cfg.hash()},
           {"mu_star", cal.mu_star},
           {"phi0", cal.phi0},
           {"residual", cal.residual},
           {"grid_n", ctx.cfg.grid.n},
           {"watson_reference", 2.0 / watson_constant()}};
    write_json(ctx, "resonance.json", j);
    emit(ctx, j,
         "mu_star  = " + fmt(cal.mu_star) + "  (2/W = " + fmt(2.0 / watson_constant()) +
             ")\nphi0     = " + fmt(cal.phi0) + "\nresidual = " + fmt(cal.residual) +
             "\n");
}

void cmd_dispersion(const Context& ctx) {
    const LatticePotential pot = resolved_potential(ctx);
    const TorusGrid grid = TorusGrid::uniform(ctx.cfg.grid.n);
    CsvWriter csv(ctx, "dispersion.csv", "kx,ky,kz,e_min,has_bound,z");
    std::vector<std::optional<double>> zs(ctx.cfg.sweeps.k_list.size());
    parallel_for(static_cast<int>(zs.size()), ctx.threads, [&](int i) {
        zs[i] = bound_state_energy(pot, ctx.cfg.sweeps.k_list[i], grid,
                                   ctx.cfg.tolerances.refine_rel, ctx.cfg.grid.cap);
    });
    int bound = 0;
    for (size_t i = 0; i < zs.size(); ++i) {
        const Vec3& k = ctx.cfg.sweeps.k_list[i];
        const double emin = twobody_band(k).e_min;
        if (zs[i]) ++bound;
        csv.row({fmt(k[0]), fmt(k[1]), fmt(k[2]), fmt(emin), zs[i] ? "1" : "0",
                 fmt(zs[i] ? *zs[i] : 0.0)});
    }
    json j{{"config_hash", ctx.cfg.hash()},
           {"rows", zs.size()},
           {"bound_states", bound},
           {"csv", csv.path()}};
    emit(ctx, j,
         "dispersion: " + std::to_string(zs.size()) + " rows (" + std::to_string(bound) +
             " bound) -> " + csv.path() + "\n");
}

void cmd_tau(const Context& ctx) {
    const LatticePotential pot = resolved_potential(ctx);
    const DispersionTable table =
        compute_dispersion_table(pot, TorusGrid::uniform(ctx.cfg.grid.eval_n));
    CsvWriter csv(ctx, "tau.csv", "Kx,Ky,Kz,tau,branch,band_min,band_max");
    for (const Vec3& K : ctx.cfg.sweeps.K_list) {
        const EssentialSpectrumReport rep = tau_from_table(table, K);
        csv.row({fmt(K[0]), fmt(K[1]), fmt(K[2]), fmt(rep.tau), rep.branch_name(),
                 fmt(rep.band.e_min), fmt(rep.band.e_max)});
    }
    json j{{"config_hash", ctx.cfg.hash()},
           {"rows", ctx.cfg.sweeps.K_list.size()},
           {"csv", csv.path()}};
    emit(ctx, j,
         "tau: " + std::to_string(ctx.cfg.sweeps.K_list.size()) + " rows -> " +
             csv.path() + "\n");
}

void cmd_count_model(const Context& ctx) {
    const CountingCurve curve =
        count_N_model(ctx.cfg.sweeps.rho_list, ctx.cfg.model.delta, ctx.cfg.model.l_max,
                      ctx.cfg.model.radial_per_decade, ctx.cfg.model.angular_n,
                      ctx.threads);
    CsvWriter csv(ctx, "count_model.csv", "rho,abs_log_rho,count");
    for (size_t i = 0; i < curve.abscissa.size(); ++i)
        csv.row({fmt(ctx.cfg.sweeps.rho_list[i]), fmt(curve.abscissa[i]),
                 std::to_string(curve.counts[i])});
    json j{{"config_hash", ctx.cfg.hash()},
           {"slope", curve.slope},
           {"stderr", curve.stderr_slope},
           {"target", lambda0() / (2.0 * M_PI)},
           {"csv", csv.path()}};
    write_json(ctx, "count_model_summary.json", j);
    emit(ctx, j,
         "count-model: slope = " + fmt(curve.slope) + " +- " + fmt(curve.stderr_slope) +
             "  (target lambda0/2pi = " + fmt(lambda0() / (2.0 * M_PI)) + ") -> " +
             csv.path() + "\n");
}

void cmd_count_tiny(const Context& ctx) {
    const LatticePotential pot = resolved_potential(ctx);
    const TorusGrid grid = TorusGrid::uniform(ctx.cfg.grid.tiny_n);
    CsvWriter csv(ctx, "count_tiny.csv", "Kx,Ky,Kz,z,n_direct,n_bs");
    int rows = 0;
    for (const Vec3& K : ctx.cfg.sweeps.K_list) {
        const double z_chan = discrete_channel_threshold(pot, K, grid);
        for (const double off : ctx.cfg.sweeps.z_list) {
            const double z = z_chan - off;
            const TinyCountReport rep = count_three_body_tiny(pot, K, z, grid);
            csv.row({fmt(K[0]), fmt(K[1]), fmt(K[2]), fmt(z),
                     std::to_string(rep.n_direct), std::to_string(rep.n_bs)});
            ++rows;
        }
    }
    json j{{"config_hash", ctx.cfg.hash()}, {"rows", rows}, {"csv", csv.path()}};
    emit(ctx, j, "count-tiny: " + std::to_string(rows) + " rows, all exact -> " +
                     csv.path() + "\n");
}

void cmd_slope_sr(const Context& ctx) {
    const CountingCurve curve =
        slope_S_r(ctx.cfg.sweeps.r_list, ctx.cfg.model.x_spacing, ctx.cfg.model.angular_n,
                  ctx.cfg.model.l_max, ctx.threads);
    CsvWriter csv(ctx, "slope_sr.csv", "r,count");
    for (size_t i = 0; i < curve.abscissa.size(); ++i)
        csv.row({fmt(curve.abscissa[i]), std::to_string(curve.counts[i])});
    json j{{"config_hash", ctx.cfg.hash()},
           {"slope", curve.slope},
           {"stderr", curve.stderr_slope},
           {"target", lambda0() / M_PI},
           {"csv", csv.path()}};
    write_json(ctx, "slope_sr_summary.json", j);
    emit(ctx, j,
         "slope-sr: slope = " + fmt(curve.slope) + " +- " + fmt(curve.stderr_slope) +
             "  (target lambda0/pi = " + fmt(lambda0() / M_PI) + ") -> " + csv.path() +
             "\n");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"lattice two-/three-body spectral toolkit"};
    app.require_subcommand(1);
    app.fallthrough();  // accept global options after the subcommand too

    std::string config_path, out_dir;
    bool json_stdout = false;
    int threads = 1;
    app.add_option("--config", config_path, "JSON config file (defaults if omitted)");
    app.add_option("--out", out_dir, "output directory (overrides config)");
    app.add_flag("--json", json_stdout, "print the JSON summary to stdout");
    app.add_option("--threads", threads, "worker threads for sweeps")
        ->check(CLI::PositiveNumber);

    auto* c_lambda0 = app.add_subcommand("lambda0", "spectral constant and slope targets");
    auto* c_resonance = app.add_subcommand("resonance", "calibrate the coupling mu_star");
    auto* c_dispersion = app.add_subcommand("dispersion", "two-body dispersion z(k) sweep");
    auto* c_tau = app.add_subcommand("tau", "essential spectrum bottom tau(K) sweep");
    auto* c_count_model =
        app.add_subcommand("count-model", "model operator counts over the rho sweep");
    auto* c_count_tiny =
        app.add_subcommand("count-tiny", "exact tiny-grid three-body count identity");
    auto* c_slope_sr =
        app.add_subcommand("slope-sr", "finite-interval operator counts over r");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        Context ctx;
        ctx.cfg = config_path.empty() ? RunConfig::defaults()
                                      : RunConfig::from_file(config_path);
        ctx.cfg.validate();
        ctx.outdir = out_dir.empty() ? ctx.cfg.output.dir : out_dir;
        ctx.json_stdout = json_stdout;
        ctx.threads = threads;

        if (c_lambda0->parsed()) cmd_lambda0(ctx);
        if (c_resonance->parsed()) cmd_resonance(ctx);
        if (c_dispersion->parsed()) cmd_dispersion(ctx);
        if (c_tau->parsed()) cmd_tau(ctx);
        if (c_count_model->parsed()) cmd_count_model(ctx);
        if (c_count_tiny->parsed()) cmd_count_tiny(ctx);
        if (c_slope_sr->parsed()) cmd_slope_sr(ctx);
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 3;
    }
}
