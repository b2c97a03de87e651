#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pdhs/analysis.hpp"
#include "pdhs/errors.hpp"
#include "pdhs/grid.hpp"
#include "pdhs/lp.hpp"
#include "pdhs/solver.hpp"
#include "pdhs/system.hpp"

namespace py = pybind11;
using namespace pdhs;

namespace {

using RealArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using ComplexArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

GridFunction to_grid_function(const Grid& g, const RealArray& a) {
  if (a.ndim() != 1 || static_cast<std::size_t>(a.size()) != g.size()) {
    throw py::value_error("expected a 1-d array of length " + std::to_string(g.size()));
  }
  return GridFunction(g, std::vector<double>(a.data(), a.data() + a.size()));
}

SpectralFunction to_spectral(const Grid& g, const ComplexArray& a) {
  if (a.ndim() != 1 || static_cast<std::size_t>(a.size()) != g.size()) {
    throw py::value_error("expected a 1-d array of length " + std::to_string(g.size()));
  }
  return SpectralFunction(g, std::vector<Complex>(a.data(), a.data() + a.size()));
}

template <typename T>
py::array_t<T> to_array(const std::vector<T>& v) {
  return py::array_t<T>(static_cast<py::ssize_t>(v.size()), v.data());
}

VectorGridFunction to_vector(const Grid& g, const RealArray& a) {
  if (a.ndim() != 2 || static_cast<std::size_t>(a.shape(1)) != g.size()) {
    throw py::value_error("expected an (N, n_points) array");
  }
  std::vector<GridFunction> comps;
  for (py::ssize_t c = 0; c < a.shape(0); ++c) {
    const double* row = a.data(c, 0);
    comps.emplace_back(g, std::vector<double>(row, row + g.size()));
  }
  return VectorGridFunction(std::move(comps));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Discrete Littlewood-Paley analysis of partially dissipative systems";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

  py::class_<Grid>(m, "Grid")
      .def(py::init<double, std::size_t, double>(), py::arg("h"), py::arg("n_points"),
           py::arg("offset") = 0.0)
      .def_property_readonly("h", &Grid::h)
      .def_property_readonly("n_points", &Grid::size)
      .def_property_readonly("offset", &Grid::offset)
      .def_property_readonly("half_length", &Grid::half_length)
      .def("positions", [](const Grid& g) {
        std::vector<double> x(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) x[i] = g.position(i);
        return to_array(x);
      })
      .def("frequencies", [](const Grid& g) {
        std::vector<double> x(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) x[i] = g.frequency(i);
        return to_array(x);
      })
      .def("__repr__", [](const Grid& g) {
        return "Grid(h=" + std::to_string(g.h()) + ", n_points=" + std::to_string(g.size()) +
               ", offset=" + std::to_string(g.offset()) + ")";
      });
  m.def("window_grid", &window_grid, py::arg("h"), py::arg("half_length"),
        py::arg("offset") = 0.0);

  m.def("dft", [](const Grid& g, const RealArray& v) {
    return to_array(dft(to_grid_function(g, v)).coeffs());
  });
  m.def("idft", [](const Grid& g, const ComplexArray& c) {
    return to_array(idft(to_spectral(g, c)).values());
  });
  m.def("d_central", [](const Grid& g, const RealArray& v) {
    return to_array(d_central(to_grid_function(g, v)).values());
  });
  m.def("l2_norm", [](const Grid& g, const RealArray& v) {
    return l2_norm(to_grid_function(g, v));
  });
  m.def("sobolev_norm", [](const Grid& g, const RealArray& v, double s, bool homogeneous) {
    return sobolev_norm(to_grid_function(g, v), s, homogeneous);
  }, py::arg("grid"), py::arg("values"), py::arg("s"), py::arg("homogeneous") = true);

  m.def("localize", [](const Grid& g, const RealArray& v, int j) {
    return to_array(localize(to_grid_function(g, v), j).values());
  });
  m.def("besov_norm", [](const Grid& g, const RealArray& v, double s) {
    return besov_norm(to_grid_function(g, v), s);
  });
  m.def("band_range", [](const Grid& g) {
    const BandGeometry b(g);
    return py::make_tuple(b.j_min(), b.j_max());
  });
  py::class_<BernsteinResult>(m, "BernsteinResult")
      .def_readonly("lower_ok", &BernsteinResult::lower_ok)
      .def_readonly("upper_ok", &BernsteinResult::upper_ok)
      .def_readonly("ratio", &BernsteinResult::ratio);
  m.def("bernstein_check", [](const Grid& g, const RealArray& v, int j) {
    return bernstein_check(to_grid_function(g, v), j);
  });

  py::class_<SystemSpec>(m, "SystemSpec")
      .def_readonly("A", &SystemSpec::A)
      .def_readonly("B", &SystemSpec::B)
      .def_readonly("N", &SystemSpec::N)
      .def_readonly("N2", &SystemSpec::N2)
      .def_readonly("lam", &SystemSpec::lambda);
  m.def("validate_system", &validate_system, py::arg("A"), py::arg("B"), py::arg("N2"));
  m.def("euler_system", &euler_system);
  m.def("kalman_matrix", &kalman_matrix);
  py::class_<KalmanCertificate>(m, "KalmanCertificate")
      .def_readonly("holds", &KalmanCertificate::holds)
      .def_readonly("numerical_rank", &KalmanCertificate::numerical_rank)
      .def_readonly("singular_values", &KalmanCertificate::singular_values);
  m.def("kalman_rank_holds",
        [](const SystemSpec& s) { return kalman_rank_holds(s); });

  py::class_<CorrectorConstants>(m, "CorrectorConstants")
      .def_readonly("eta0", &CorrectorConstants::eta0)
      .def_readonly("eps0", &CorrectorConstants::eps0)
      .def_readonly("eps_k", &CorrectorConstants::eps_k)
      .def_readonly("C", &CorrectorConstants::C)
      .def_readonly("C2", &CorrectorConstants::C2)
      .def("all_hold", &CorrectorConstants::all_hold);
  m.def("choose_corrector_constants", &choose_corrector_constants);

  m.def("spectral_propagate",
        [](const SystemSpec& s, const Grid& g, const RealArray& u0,
           const std::vector<double>& times) {
          const auto out = spectral_propagate(s, to_vector(g, u0), times);
          py::array_t<double> a({static_cast<py::ssize_t>(out.size()),
                                 static_cast<py::ssize_t>(s.N),
                                 static_cast<py::ssize_t>(g.size())});
          auto r = a.mutable_unchecked<3>();
          for (std::size_t t = 0; t < out.size(); ++t)
            for (int c = 0; c < s.N; ++c)
              for (std::size_t i = 0; i < g.size(); ++i) r(t, c, i) = out[t][c][i];
          return a;
        },
        py::arg("spec"), py::arg("grid"), py::arg("u0"), py::arg("times"));

  py::class_<StabilityReport>(m, "StabilityReport")
      .def_readonly("max_amplification", &StabilityReport::max_amplification)
      .def_readonly("stable", &StabilityReport::stable)
      .def_readonly("worst_frequency", &StabilityReport::worst_frequency);
  m.def("stability_report",
        [](const std::string& scheme, const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
           const Grid& g, double T) { return stability_report(parse_scheme(scheme), A, B, g, T); },
        py::arg("scheme"), py::arg("A"), py::arg("B"), py::arg("grid"), py::arg("T"));

  py::class_<RelaxationErrorRecord>(m, "RelaxationErrorRecord")
      .def_readonly("eps", &RelaxationErrorRecord::eps)
      .def_readonly("h", &RelaxationErrorRecord::h)
      .def_readonly("T", &RelaxationErrorRecord::T)
      .def_readonly("sup_error_besov", &RelaxationErrorRecord::sup_error_besov)
      .def_readonly("l1t_error_besov", &RelaxationErrorRecord::l1t_error_besov)
      .def_readonly("darcy_l1t", &RelaxationErrorRecord::darcy_l1t)
      .def_readonly("sup_error_linf", &RelaxationErrorRecord::sup_error_linf)
      .def_readonly("darcy_l1t_linf", &RelaxationErrorRecord::darcy_l1t_linf);
  m.def("relaxation_errors",
        [](double eps, double h, double T, double s, double s_prime, double kappa) {
          RelaxationSetup setup;
          setup.eps = eps;
          setup.h = h;
          setup.T = T;
          setup.s = s;
          setup.s_prime = s_prime;
          setup.kappa = kappa;
          py::gil_scoped_release release;
          return relaxation_errors(setup);
        },
        py::arg("eps"), py::arg("h"), py::arg("T") = 5.0, py::arg("s") = 2.25,
        py::arg("s_prime") = 3.0, py::arg("kappa") = 0.5);

  m.def("decay_slope",
        [](double h, double half_length, double T, std::size_t samples, double t_lo,
           double t_hi) {
          py::gil_scoped_release release;
          const SystemSpec e = euler_system();
          const CorrectorConstants c = choose_corrector_constants(e);
          const Grid g = window_grid(h, half_length);
          const InitialSpectra d = initial_spectra(InitialDataKind::kDecay, g);
          const DecayRecord r =
              decay_record(e, SpectralState{d.rho0, d.u0}, make_times(T, samples, Spacing::kLog), c);
          return std::make_pair(decay_rate_fit(r, t_lo, t_hi).slope, decay_constant(r));
        },
        "Euler pair with the decay data: (fitted slope, decay constant).", py::arg("h"),
        py::arg("half_length") = 512.0, py::arg("T") = 200.0, py::arg("samples") = 301,
        py::arg("t_lo") = 10.0, py::arg("t_hi") = 200.0);
}
