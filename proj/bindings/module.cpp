/**
 * Python bindings for the lattice spectral toolkit.
 *
 * Exposes the torus geometry, potentials, the two-body Birman-Schwinger
 * machinery, the three-body fiber operators, and the model-operator
 * asymptotics under the module name `latspec`. Matrices and vectors cross
 * the boundary as NumPy arrays (copies, not views); heavy sweeps release
 * the GIL.
 */

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "latspec/config.hpp"
#include "latspec/lattice_sum.hpp"
#include "latspec/model_operator.hpp"
#include "latspec/three_body.hpp"
#include "latspec/two_body.hpp"

namespace py = pybind11;
using namespace latspec;

PYBIND11_MODULE(latspec, m) {
    m.doc() = "Lattice two-/three-body spectral toolkit: Birman-Schwinger "
              "counting, dispersion relations, and log-counting asymptotics.";

    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    // ---- torus geometry -------------------------------------------------
    m.def("reduce_angle", &reduce_angle, py::arg("x"),
          "Reduce an angle to the fundamental interval (-pi, pi].");
    m.def("reduce_torus", &reduce_torus, py::arg("k"),
          "Componentwise reduction to the torus (-pi, pi]^3.");
    m.def("dispersion", &dispersion, py::arg("k"),
          "One-particle dispersion sum_j (1 - cos k_j).");
    m.def("twobody_symbol", &twobody_symbol, py::arg("k"), py::arg("q"),
          "Two-body kinetic symbol E_k(q) at quasimomentum k.");
    m.def("threebody_symbol", &threebody_symbol, py::arg("K"), py::arg("p"),
          py::arg("q"), "Three-body kinetic symbol E(K; p, q).");

    py::class_<TwoBodyBand>(m, "Band", "Band edges [e_min, e_max] at fixed quasimomentum.")
        .def_readonly("e_min", &TwoBodyBand::e_min)
        .def_readonly("e_max", &TwoBodyBand::e_max)
        .def("__repr__", [](const TwoBodyBand& b) {
            return "<Band [" + std::to_string(b.e_min) + ", " + std::to_string(b.e_max) + "]>";
        });
    m.def("twobody_band", &twobody_band, py::arg("k"),
          "Closed-form band edges of the two-body symbol.");
    m.def("threebody_band", &threebody_band, py::arg("K"),
          "Numerically minimized/maximized band edges of the three-body symbol.");

    py::class_<TorusGrid>(m, "TorusGrid", "Uniform n^3 product grid on (-pi, pi]^3.")
        .def_static("uniform", &TorusGrid::uniform, py::arg("n"))
        .def_readonly("n_per_axis", &TorusGrid::n_per_axis)
        .def_readonly("axis", &TorusGrid::axis)
        .def_readonly("weight", &TorusGrid::weight)
        .def("size", &TorusGrid::size)
        .def("index", &TorusGrid::index, py::arg("ix"), py::arg("iy"), py::arg("iz"))
        .def("origin_index", &TorusGrid::origin_index)
        .def("negation_index", &TorusGrid::negation_index, py::arg("i"))
        .def("contains", &TorusGrid::contains, py::arg("k"))
        .def_property_readonly("nodes", [](const TorusGrid& g) {
            Matrix out(g.size(), 3);
            for (int i = 0; i < g.size(); ++i) out.row(i) = g.nodes[i];
            return out;
        }, "All nodes as an (n^3, 3) array, row i = node i.")
        .def("__repr__", [](const TorusGrid& g) {
            return "<TorusGrid n=" + std::to_string(g.n_per_axis) + ">";
        });

    // ---- potentials ------------------------------------------------------
    py::class_<LatticePotential>(m, "LatticePotential",
                                 "Finitely supported even lattice potential mu * vhat(s).")
        .def_static("zero_range", &LatticePotential::zero_range, py::arg("mu"))
        .def_static("nearest_neighbor", &LatticePotential::nearest_neighbor,
                    py::arg("a"), py::arg("b"), py::arg("mu") = 1.0)
        .def_static("table", &LatticePotential::table, py::arg("entries"), py::arg("mu"))
        .def_readonly("mu", &LatticePotential::mu)
        .def("with_mu", &LatticePotential::with_mu, py::arg("mu"))
        .def("momentum_kernel", &LatticePotential::momentum_kernel, py::arg("p"))
        .def("halfpower_kernel", &LatticePotential::halfpower_kernel, py::arg("p"))
        .def("max_support", &LatticePotential::max_support)
        .def("support", &LatticePotential::support)
        .def("effective_coefficient", &LatticePotential::effective_coefficient,
             py::arg("s"))
        .def("__repr__", [](const LatticePotential& p) {
            return "<LatticePotential mu=" + std::to_string(p.mu) + ", " +
                   std::to_string(p.support().size()) + " sites>";
        });

    // ---- counting plumbing ----------------------------------------------
    py::class_<KernelOperator>(m, "KernelOperator",
                               "Dense symmetric operator with counting helpers.")
        .def_readonly("matrix", &KernelOperator::matrix)
        .def_readonly("label", &KernelOperator::label)
        .def("asymmetry", &KernelOperator::asymmetry)
        .def("eigenvalues", &KernelOperator::eigenvalues)
        .def("top_eigenvalue", &KernelOperator::top_eigenvalue)
        .def("top_eigenpair", &KernelOperator::top_eigenpair);

    py::class_<Inertia>(m, "Inertia")
        .def_readonly("negative", &Inertia::negative)
        .def_readonly("zero", &Inertia::zero)
        .def_readonly("positive", &Inertia::positive)
        .def("__repr__", [](const Inertia& i) {
            return "<Inertia -:" + std::to_string(i.negative) + " 0:" +
                   std::to_string(i.zero) + " +:" + std::to_string(i.positive) + ">";
        });
    m.def("symmetric_inertia", &symmetric_inertia, py::arg("a"),
          "Sylvester inertia of a symmetric matrix (LDL^T).");
    m.def("count_eigenvalues_above", &count_eigenvalues_above, py::arg("a"),
          py::arg("lam"), "n(lam, A) = #{ eigenvalues > lam }.");
    m.def("count_eigenvalues_below", &count_eigenvalues_below, py::arg("a"),
          py::arg("lam"));

    py::class_<CountingCurve>(m, "CountingCurve",
                              "(abscissa, count) pairs with a least-squares slope.")
        .def_readonly("abscissa", &CountingCurve::abscissa)
        .def_readonly("counts", &CountingCurve::counts)
        .def_readonly("slope", &CountingCurve::slope)
        .def_readonly("stderr_slope", &CountingCurve::stderr_slope);

    // ---- scalar lattice integral ------------------------------------------
    m.def("scalar_lattice_integral", &scalar_lattice_integral, py::arg("k"), py::arg("z"),
          py::call_guard<py::gil_scoped_release>(),
          "S_k(z) = (2 pi)^{-3} \\int dq / (E_k(q) - z) below the band minimum.");
    m.def("watson_constant", &watson_constant,
          "W = 2 * S_0(0), the simple-cubic lattice Green function constant.");

    // ---- two-body fiber ----------------------------------------------------
    py::enum_<GMode>(m, "GMode")
        .value("plain", GMode::plain)
        .value("threshold_safe", GMode::threshold_safe);

    m.def("convolution_matrix", &convolution_matrix, py::arg("pot"), py::arg("grid"),
          py::arg("halfpower"));
    m.def("build_h", &build_h, py::arg("pot"), py::arg("k"), py::arg("grid"),
          py::call_guard<py::gil_scoped_release>(),
          "Dense fiber Hamiltonian h(k) = diag(E_k) - Cv.");
    m.def("build_G", &build_G, py::arg("pot"), py::arg("k"), py::arg("z"),
          py::arg("grid"), py::arg("mode") = GMode::plain,
          py::call_guard<py::gil_scoped_release>(),
          "Birman-Schwinger operator G(k, z).");
    m.def("compressed_G", &compressed_G, py::arg("pot"), py::arg("k"), py::arg("z"),
          py::arg("grid"), py::arg("mode"),
          py::call_guard<py::gil_scoped_release>(),
          "Site-basis compression carrying the nonzero spectrum of G(k, z).");
    m.def("top_eigenvalue_G", &top_eigenvalue_G, py::arg("pot"), py::arg("k"),
          py::arg("z"), py::arg("grid"), py::call_guard<py::gil_scoped_release>());
    m.def("count_two_body", &count_two_body, py::arg("pot"), py::arg("k"), py::arg("z"),
          py::arg("grid"), py::call_guard<py::gil_scoped_release>(),
          "#{ eig h(k) < z }, asserted equal to n(1, G(k, z)).");

    py::class_<ResonanceCalibration>(m, "ResonanceCalibration")
        .def_readonly("mu_star", &ResonanceCalibration::mu_star)
        .def_readonly("psi", &ResonanceCalibration::psi)
        .def_readonly("phi0", &ResonanceCalibration::phi0)
        .def_readonly("residual", &ResonanceCalibration::residual);
    m.def("calibrate_resonance", &calibrate_resonance, py::arg("pot_shape"),
          py::arg("grid"), py::call_guard<py::gil_scoped_release>(),
          "Coupling mu_star with a zero-energy resonance (top-eig G(0,0) = 1).");

    m.def("bound_state_energy_fixed", &bound_state_energy_fixed, py::arg("pot"),
          py::arg("k"), py::arg("grid"), py::call_guard<py::gil_scoped_release>(),
          "Two-body dispersion z(k) on one grid; None when no bound state splits off.");
    m.def("bound_state_energy", &bound_state_energy, py::arg("pot"), py::arg("k"),
          py::arg("grid"), py::arg("rel_tol") = 1e-8, py::arg("n_cap") = 64,
          py::call_guard<py::gil_scoped_release>(),
          "z(k) under grid doubling until two refinements agree to rel_tol.");

    py::class_<ExpansionReport>(m, "ExpansionReport")
        .def_readonly("k_norms", &ExpansionReport::k_norms)
        .def_readonly("distances", &ExpansionReport::distances)
        .def_readonly("ratios", &ExpansionReport::ratios)
        .def_readonly("limit", &ExpansionReport::limit);
    m.def("expansion_check_G", &expansion_check_G, py::arg("pot"), py::arg("grid"),
          py::arg("k_sequence"), py::call_guard<py::gil_scoped_release>(),
          "Convergence of (G(k,0) - G(0,0))/|k| to its rank-one limit.");
    m.def("resonance_witness_w", &resonance_witness_w, py::arg("pot"), py::arg("grid"),
          py::arg("k"), py::arg("cal"), py::call_guard<py::gil_scoped_release>(),
          "|k| <(I - G(k,0))^{-1} psi, psi>, tending to 8 pi / phi0^2.");

    // ---- three-body fiber ---------------------------------------------------
    py::class_<DispersionTable>(m, "DispersionTable")
        .def_readonly("grid", &DispersionTable::grid)
        .def_readonly("z", &DispersionTable::z);
    m.def("compute_dispersion_table", &compute_dispersion_table, py::arg("pot"),
          py::arg("eval_grid"), py::arg("solve_n") = 16,
          py::call_guard<py::gil_scoped_release>());

    py::class_<EssentialSpectrumReport>(m, "EssentialSpectrumReport")
        .def_readonly("K", &EssentialSpectrumReport::K)
        .def_readonly("tau", &EssentialSpectrumReport::tau)
        .def_readonly("band", &EssentialSpectrumReport::band)
        .def_property_readonly("branch", &EssentialSpectrumReport::branch_name)
        .def("__repr__", [](const EssentialSpectrumReport& r) {
            return "<tau=" + std::to_string(r.tau) + " (" + r.branch_name() + ")>";
        });
    m.def("tau_from_table", &tau_from_table, py::arg("table"), py::arg("K"));
    m.def("tau", &tau, py::arg("pot"), py::arg("K"), py::arg("eval_grid"),
          py::arg("solve_n") = 16, py::call_guard<py::gil_scoped_release>(),
          "Bottom of the essential three-body spectrum at total quasimomentum K.");

    m.def("apply_H", &apply_H, py::arg("pot"), py::arg("K"), py::arg("grid"),
          py::arg("vector"), py::call_guard<py::gil_scoped_release>(),
          "Matrix-free fiber Hamiltonian H(K) on the (p, q) double grid.");
    m.def("build_dense_H", &build_dense_H, py::arg("pot"), py::arg("K"), py::arg("grid"),
          py::call_guard<py::gil_scoped_release>(),
          "Dense H(K) for tiny grids (n <= 4).");
    m.def("discrete_channel_threshold", &discrete_channel_threshold, py::arg("pot"),
          py::arg("K"), py::arg("grid"), py::call_guard<py::gil_scoped_release>(),
          "Largest z with fiber-wise top-eig A1(z) < 1.");

    py::class_<TinyCountReport>(m, "TinyCountReport")
        .def_readonly("n_direct", &TinyCountReport::n_direct)
        .def_readonly("n_bs", &TinyCountReport::n_bs)
        .def_readonly("channel_top", &TinyCountReport::channel_top)
        .def("__repr__", [](const TinyCountReport& r) {
            return "<TinyCountReport direct=" + std::to_string(r.n_direct) +
                   " bs=" + std::to_string(r.n_bs) + ">";
        });
    m.def("count_three_body_tiny", &count_three_body_tiny, py::arg("pot"), py::arg("K"),
          py::arg("z"), py::arg("grid"), py::call_guard<py::gil_scoped_release>(),
          "Exact count identity #{ eig H < z } = n(1, F (A2 + A3) F); throws on mismatch.");

    // ---- model operator asymptotics ---------------------------------------
    m.def("s_hat", &s_hat, py::arg("t"), py::arg("lam"),
          "Fourier fiber of the threshold kernel at angle t and frequency lam.");
    m.def("s0_closed_form", &s0_closed_form, py::arg("y"),
          "Closed form of the l = 0 symbol (8/sqrt3) sinh(pi y/6)/(y cosh(pi y/2)).");
    m.def("lambda0", &lambda0, "Unique positive root of s0(y) = 1.");
    m.def("channel_symbol", &channel_symbol, py::arg("l"), py::arg("lam"),
          py::arg("angular_n") = 64);
    m.def("counting_functional", &counting_functional, py::arg("mu"),
          py::arg("l_max") = 6, py::arg("lambda_window") = 20.0,
          py::arg("angular_n") = 64, py::call_guard<py::gil_scoped_release>(),
          "U(mu): normalized superlevel measure of the channel symbols.");

    py::class_<SymbolTable>(m, "SymbolTable")
        .def_readonly("lambda_grid", &SymbolTable::lambda_grid)
        .def_readonly("values", &SymbolTable::values)
        .def_readonly("l_max", &SymbolTable::l_max);
    m.def("build_symbol_table", &build_symbol_table, py::arg("lambda_grid"),
          py::arg("l_max"), py::arg("angular_n") = 64,
          py::call_guard<py::gil_scoped_release>());

    m.def("build_S_r", &build_S_r, py::arg("r"), py::arg("x_n"),
          py::arg("angular_n") = 64, py::arg("l_max") = 3,
          py::call_guard<py::gil_scoped_release>(),
          "Per-l Nystrom matrices of the finite-interval operator S(r).");
    m.def("s_r_kernel_l0", &s_r_kernel_l0, py::arg("y"));
    m.def("slope_S_r", &slope_S_r, py::arg("r_sequence"), py::arg("x_spacing") = 0.05,
          py::arg("angular_n") = 64, py::arg("l_max") = 3, py::arg("threads") = 1,
          py::call_guard<py::gil_scoped_release>(),
          "n(1, S(r)) over an r sweep with the fitted slope (target lambda0/pi).");

    py::class_<ModelOperatorT1>(m, "ModelOperatorT1")
        .def_readonly("rho", &ModelOperatorT1::rho)
        .def_readonly("delta", &ModelOperatorT1::delta)
        .def_readonly("radial_nodes", &ModelOperatorT1::radial_nodes)
        .def_readonly("channels", &ModelOperatorT1::channels);
    m.def("build_T1", &build_T1, py::arg("rho"), py::arg("delta"), py::arg("l_max") = 6,
          py::arg("radial_per_decade") = 200, py::arg("angular_n") = 64,
          py::call_guard<py::gil_scoped_release>(),
          "Radial model operator T1(delta, rho) as per-l channels.");
    m.def("count_T1", &count_T1, py::arg("op"),
          py::call_guard<py::gil_scoped_release>());
    m.def("count_N_model", &count_N_model, py::arg("rho_sequence"), py::arg("delta"),
          py::arg("l_max") = 6, py::arg("radial_per_decade") = 200,
          py::arg("angular_n") = 64, py::arg("threads") = 1,
          py::call_guard<py::gil_scoped_release>(),
          "Counts over a decreasing rho sweep vs |log rho| (target slope lambda0/2pi).");

    // ---- configuration ------------------------------------------------------
    py::class_<RunConfig>(m, "RunConfig")
        .def_static("defaults", &RunConfig::defaults)
        .def_static("from_json_text", &RunConfig::from_json_text, py::arg("text"))
        .def_static("from_file", &RunConfig::from_file, py::arg("path"))
        .def("validate", &RunConfig::validate)
        .def("canonical_json", &RunConfig::canonical_json)
        .def("hash", &RunConfig::hash);
}
