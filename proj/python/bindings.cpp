#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spinmetric/errors.hpp"
#include "spinmetric/gravity_sector.hpp"
#include "spinmetric/lattice_model.hpp"
#include "spinmetric/minimal_model.hpp"
#include "spinmetric/sweep_engine.hpp"

namespace py = pybind11;
using namespace spinmetric;

namespace {

Axis parse_axis(const std::string& s) {
    if (s == "x") return Axis::x;
    if (s == "y") return Axis::y;
    if (s == "z") return Axis::z;
    throw DomainError("direction must be 'x', 'y' or 'z'");
}

minimal::Sign parse_sign(const std::string& s) {
    if (s == "+") return minimal::Sign::plus;
    if (s == "-") return minimal::Sign::minus;
    throw DomainError("sign must be '+' or '-'");
}

minimal::ModelParams make_params(double G, double mu, int cutoff, double t_max, double dt) {
    minimal::ModelParams p;
    p.G = G;
    p.mu = mu;
    p.cutoff = cutoff;
    p.t_max = t_max;
    p.dt = dt;
    p.validate();
    return p;
}

py::array_t<double> as_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

py::dict trace_dict(const minimal::ObservableTrace& tr) {
    py::dict d;
    d["t"] = as_array(tr.times);
    d["sx"] = as_array(tr.sx);
    d["sy"] = as_array(tr.sy);
    d["sz"] = as_array(tr.sz);
    d["n_alpha"] = as_array(tr.n_alpha);
    d["n_beta"] = as_array(tr.n_beta);
    d["energy"] = as_array(tr.energy);
    d["norm"] = as_array(tr.norm);
    if (!tr.h11.empty()) {
        d["h11"] = as_array(tr.h11);
        d["h12"] = as_array(tr.h12);
    }
    return d;
}

lattice::FermiPoint parse_point(const std::string& s) {
    if (s == "+") return lattice::FermiPoint::plus;
    if (s == "-") return lattice::FermiPoint::minus;
    throw DomainError("fermi point must be '+' or '-'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Spin-metric toy model: minimal model dynamics, lattice and gravity-sector checks";
    m.attr("__version__") = sweep::code_version();

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<InvalidCutoff>(m, "InvalidCutoff", PyExc_ValueError);
    py::register_exception<ShapeError>(m, "ShapeError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<ExtractionInvalid>(m, "ExtractionInvalid", PyExc_ArithmeticError);
    py::register_exception<InsufficientData>(m, "InsufficientData", PyExc_ValueError);

    m.def("annihilation_matrix", [](int n) { return annihilation_matrix(n).entries; }, py::arg("cutoff"));
    m.def("coupling_strength", &minimal::coupling_strength, py::arg("G"), py::arg("mu") = 1.0);

    m.def("hamiltonian_matrix",
          [](double G, double mu, int cutoff) {
              return minimal::build_minimal_hamiltonian(make_params(G, mu, cutoff, 1.0, 0.02)).matrix().entries;
          },
          py::arg("G"), py::arg("mu") = 1.0, py::arg("cutoff") = 14);

    m.def("observable_trace",
          [](double G, double mu, int cutoff, double t_max, double dt, const std::string& direction,
             const std::string& sign, bool include_metric) {
              const auto p = make_params(G, mu, cutoff, t_max, dt);
              const Axis axis = parse_axis(direction);
              const minimal::Sign s = parse_sign(sign);
              minimal::ObservableTrace tr;
              {
                  py::gil_scoped_release release;
                  const auto h = minimal::build_minimal_hamiltonian(p);
                  tr = minimal::observable_trace(h, minimal::initial_state(axis, s, h.space()), p,
                                                 include_metric);
              }
              return trace_dict(tr);
          },
          py::arg("G"), py::arg("mu") = 1.0, py::arg("cutoff") = 14, py::arg("t_max") = 100.0,
          py::arg("dt") = 0.02, py::arg("direction") = "x", py::arg("sign") = "+",
          py::arg("include_metric") = false);

    m.def("symmetry_check",
          [](double G, double mu, int cutoff) {
              return minimal::symmetry_check(minimal::build_minimal_hamiltonian(make_params(G, mu, cutoff, 1.0, 0.02)));
          },
          py::arg("G"), py::arg("mu") = 1.0, py::arg("cutoff") = 14);

    m.def("bogoliubov_params",
          [](double mu) {
              const auto b = gravity::bogoliubov_params(mu);
              py::dict d;
              d["mu"] = b.mu;
              d["r"] = b.r;
              d["cosh2r"] = b.cosh2r;
              d["sinh2r"] = b.sinh2r;
              return d;
          },
          py::arg("mu"));
    m.def("resonant_momentum", &gravity::resonant_momentum, py::arg("mu"));
    m.def("spectrum_spacing",
          [](double mu, int cutoff, int levels) {
              const auto s = gravity::spectrum_spacing(gravity::quadratic_site_hamiltonian(mu, cutoff), levels);
              return py::make_tuple(s.mean_gap, s.relative_variance);
          },
          py::arg("mu"), py::arg("cutoff") = 80, py::arg("levels") = 8);

    m.def("fermi_point_residual",
          [](double G, double alpha_c, double beta_c) {
              const auto r = lattice::fermi_point_residual(lattice::LatticeCouplings::from_background(G, alpha_c, beta_c));
              return py::make_tuple(r.plus, r.minus);
          },
          py::arg("G") = 0.0, py::arg("alpha_c") = 0.0, py::arg("beta_c") = 0.0);
    m.def("low_energy_coefficients",
          [](double G, double alpha_c, double beta_c, const std::string& point) {
              const auto c = lattice::low_energy_coefficients(
                  lattice::LatticeCouplings::from_background(G, alpha_c, beta_c), parse_point(point));
              py::dict d;
              d["A"] = c.A;
              d["B"] = c.B;
              d["C"] = c.C;
              d["D"] = c.D;
              return d;
          },
          py::arg("G") = 0.0, py::arg("alpha_c") = 0.0, py::arg("beta_c") = 0.0, py::arg("point") = "+");

    m.def("run_sweep",
          [](std::vector<double> G_values, double mu, int cutoff, double t_max, double dt, double t_min,
             int workers) {
              sweep::SweepGrid grid;
              grid.G_values = std::move(G_values);
              grid.params = make_params(0.0, mu, cutoff, t_max, dt);
              sweep::SweepResult result;
              {
                  py::gil_scoped_release release;
                  result = sweep::run_sweep(grid, workers);
              }
              py::list rows;
              for (std::size_t i = 0; i < result.traces.size(); ++i) {
                  const auto d = sweep::revival_diagnostic(result.traces[i], t_min);
                  py::dict row;
                  row["G"] = grid.G_values[i];
                  row["revival_peak"] = d.revival_peak;
                  row["first_peak_time"] = d.first_peak_time;
                  row["checksum"] = result.run_checksums[i];
                  rows.append(row);
              }
              py::dict out;
              out["points"] = rows;
              out["checksum_sha256"] = result.manifest.get("checksum_sha256");
              out["heatmap_csv"] = sweep::heatmap_csv(result);
              return out;
          },
          py::arg("G_values"), py::arg("mu") = 1.0, py::arg("cutoff") = 14, py::arg("t_max") = 400.0,
          py::arg("dt") = 0.02, py::arg("t_min") = 2.0, py::arg("workers") = 1);
}
