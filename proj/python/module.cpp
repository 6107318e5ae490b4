#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cchlab/acceptance.hpp"
#include "cchlab/continuation.hpp"
#include "cchlab/errors.hpp"
#include "cchlab/evolution.hpp"
#include "cchlab/harness.hpp"
#include "cchlab/linearization.hpp"
#include "cchlab/phase_plane.hpp"
#include "cchlab/potential.hpp"
#include "cchlab/profile_io.hpp"

namespace py = pybind11;
using namespace cch;

namespace {

template <class T>
py::array_t<T> to_array(std::span<const T> v) {
  return py::array_t<T>(static_cast<py::ssize_t>(v.size()), v.data());
}

template <class T>
py::array_t<T> to_array(const std::vector<T>& v) {
  return to_array(std::span<const T>(v));
}

Field field_from_array(const SpectralGrid& g, py::array_t<double, py::array::c_style | py::array::forcecast> a) {
  if (a.ndim() != 1 || a.shape(0) != g.points()) throw DomainError("values must be a 1-d array of length N");
  return Field::from_values(g, std::span<const double>(a.data(), a.shape(0)));
}

}  // namespace

PYBIND11_MODULE(_cchlab, m) {
  m.doc() = "convective Cahn-Hilliard steady states, spectra and trajectories";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
  py::register_exception<InternalError>(m, "InternalError", PyExc_RuntimeError);

  py::class_<PhaseParams>(m, "PhaseParams")
      .def(py::init<double, double>(), py::arg("c1"), py::arg("c2"))
      .def_readwrite("c1", &PhaseParams::c1)
      .def_readwrite("c2", &PhaseParams::c2)
      .def("__repr__", [](const PhaseParams& p) { return "PhaseParams(" + std::to_string(p.c1) + ", " + std::to_string(p.c2) + ")"; });

  m.def("quartic_roots", [](double c1, double c2) { return quartic_roots({c1, c2}).roots; }, py::arg("c1"), py::arg("c2"));
  m.def("classify_admissible", [](double c1, double c2) { return to_string(classify_admissible(PhaseParams{c1, c2})); },
        py::arg("c1"), py::arg("c2"));
  m.def("boundary_r", &boundary_r, py::arg("c2"));
  m.def(
      "quad_g",
      [](double c1, double c2, double tol) {
        const auto q = quad_g({c1, c2}, tol);
        return py::make_tuple(q.g1, q.g2, q.estimated_error);
      },
      py::arg("c1"), py::arg("c2"), py::arg("tol") = 1e-13, "(g1, g2, estimated_error)");
  m.def(
      "find_steady_params",
      [](double L) {
        std::vector<PhaseParams> out;
        for (const auto& s : find_steady_params(L)) out.push_back(s.c);
        return out;
      },
      py::arg("L"));

  py::class_<SpectralGrid>(m, "Grid")
      .def(py::init<double, int>(), py::arg("L"), py::arg("N"))
      .def_property_readonly("L", &SpectralGrid::length)
      .def_property_readonly("N", &SpectralGrid::points)
      .def_property_readonly("x", [](const SpectralGrid& g) {
        std::vector<double> x(g.points());
        for (int j = 0; j < g.points(); ++j) x[j] = g.x(j);
        return to_array(x);
      });
  m.def("default_points", &default_points, py::arg("L"));

  py::class_<Field>(m, "Field")
      .def(py::init(&field_from_array), py::arg("grid"), py::arg("values"))
      .def_property_readonly("grid", &Field::grid)
      .def_property_readonly("values", [](const Field& f) { return to_array(f.values()); })
      .def_property_readonly("coefficients", [](const Field& f) { return to_array(f.coefficients()); })
      .def_property_readonly("mean", &Field::mean)
      .def("__call__", &Field::operator(), py::arg("x"))
      .def("__add__", &Field::operator+)
      .def("__sub__", [](const Field& a, const Field& b) { return a - b; })
      .def("__mul__", &Field::operator*);

  m.def("derivative", &derivative, py::arg("f"), py::arg("order"));
  m.def("inverse_laplacian", &inverse_laplacian, py::arg("f"));
  m.def("shift", &shift, py::arg("f"), py::arg("s"));
  m.def("rhs", &rhs, py::arg("u"), py::arg("delta"));
  m.def("steady_residual", &steady_residual, py::arg("u"));
  m.def("l2_norm", &l2_norm, py::arg("f"));
  m.def("sobolev_norm", &sobolev_norm, py::arg("f"), py::arg("order"));

  py::class_<Profile>(m, "Profile")
      .def_readonly("field", &Profile::field)
      .def_readonly("length", &Profile::length)
      .def_property_readonly("c1", [](const Profile& p) { return p.c.c1; })
      .def_property_readonly("c2", [](const Profile& p) { return p.c.c2; })
      .def_readonly("k", &Profile::k)
      .def_readonly("family_id", &Profile::family_id);
  m.def(
      "enumerate_families", [](double L, int N) { return enumerate_families(L, N > 0 ? N : default_points(L)).profiles; },
      py::arg("L"), py::arg("N") = 0);
  m.def("reflection_error", &reflection_error, py::arg("u"));
  m.def("read_profile", [](const std::string& path) { return read_profile_csv(path); }, py::arg("path"));
  m.def("write_profile", [](const std::string& path, const Profile& p) { write_profile_csv(path, p); }, py::arg("path"),
        py::arg("profile"));

  py::class_<SpectrumReport>(m, "SpectrumReport")
      .def_property_readonly("eigenvalues", [](const SpectrumReport& r) { return to_array(r.eigenvalues); })
      .def_readonly("kernel_dim", &SpectrumReport::kernel_dim)
      .def_readonly("kernel_alignment", &SpectrumReport::kernel_alignment)
      .def_readonly("n_unstable", &SpectrumReport::n_unstable)
      .def_readonly("zero_tol", &SpectrumReport::zero_tol)
      .def_readonly("spectral_gap", &SpectrumReport::spectral_gap)
      .def_readonly("spectral_radius", &SpectrumReport::spectral_radius)
      .def("to_json", [](const SpectrumReport& r) { return to_json(r); });
  m.def(
      "spectrum", [](const Field& u, double delta, double zero_tol) { return spectrum(assemble(u, delta), u, zero_tol); },
      py::arg("u"), py::arg("delta") = 0.0, py::arg("zero_tol") = 0.0);

  py::class_<ContinuedFamily>(m, "ContinuedFamily")
      .def_readonly("delta", &ContinuedFamily::delta)
      .def_readonly("representative", &ContinuedFamily::representative)
      .def_readonly("source_family", &ContinuedFamily::source_family)
      .def_readonly("residual", &ContinuedFamily::residual)
      .def_readonly("newton_iters", &ContinuedFamily::newton_iters)
      .def_readonly("drift", &ContinuedFamily::drift);
  m.def(
      "continue_to", [](double delta, const Profile& p, int steps) { return continue_to(delta, p, steps); },
      py::arg("delta"), py::arg("profile"), py::arg("steps") = 4);
  m.def(
      "shift_distance",
      [](const Field& u, const Field& v, int order) {
        const auto d = shift_distance(u, v, order);
        return py::make_tuple(d.distance, d.best_shift);
      },
      py::arg("u"), py::arg("v"), py::arg("order") = 2, "(distance, best_shift)");
  m.def(
      "hausdorff_families", [](const Field& a, const Field& b, int n) { return hausdorff_families(a, b, n); },
      py::arg("a"), py::arg("b"), py::arg("n_samples") = 64);

  py::class_<TrajectoryRecord>(m, "TrajectoryRecord")
      .def_property_readonly("times", [](const TrajectoryRecord& r) { return to_array(r.times); })
      .def_property_readonly("F", [](const TrajectoryRecord& r) { return to_array(r.F_values); })
      .def_property_readonly("E1", [](const TrajectoryRecord& r) { return to_array(r.E1_values); })
      .def_property_readonly("velocity", [](const TrajectoryRecord& r) { return to_array(r.velocity); })
      .def_property_readonly("mean", [](const TrajectoryRecord& r) { return to_array(r.mean); })
      .def_readonly("mean_drift", &TrajectoryRecord::mean_drift)
      .def_property_readonly("final_state", &TrajectoryRecord::final_state);
  m.def("random_initial_state", &random_initial_state, py::arg("grid"), py::arg("seed"), py::arg("rms") = 0.5,
        py::arg("decay") = 2.0);
  m.def("default_dt", &default_dt, py::arg("grid"));
  m.def(
      "evolve",
      [](const Field& u0, double delta, double T, double dt, int stride) {
        EvolveOptions o;
        o.stride = stride;
        py::gil_scoped_release release;
        return evolve(u0, delta, T, dt, o);
      },
      py::arg("u0"), py::arg("delta"), py::arg("T"), py::arg("dt"), py::arg("stride") = 100);
  m.def(
      "classify_omega",
      [](const TrajectoryRecord& rec, const std::vector<std::pair<int, Field>>& families) {
        std::vector<FamilyRef> refs;
        for (const auto& [id, u] : families) refs.push_back({id, u});
        const auto v = classify_omega(rec, refs);
        py::dict d;
        d["status"] = to_string(v.status);
        d["family_id"] = v.family_id;
        d["distance"] = v.distance;
        d["shift"] = v.shift;
        d["final_velocity"] = v.final_velocity;
        return d;
      },
      py::arg("record"), py::arg("families"), "families: list of (id, Field)");

  m.def(
      "sweep",
      [](const std::vector<double>& L, const std::vector<double>& delta, const std::vector<std::uint64_t>& seeds,
         double T, int N, double dt, const std::string& output_dir) {
        ExperimentConfig c;
        c.lengths = L;
        c.deltas = delta;
        c.seeds = seeds;
        c.T = T;
        c.points = N;
        c.dt = dt;
        c.output_dir = output_dir;
        SweepManifest mf;
        {
          py::gil_scoped_release release;
          mf = run_sweep(c);
        }
        return summary_csv(mf);
      },
      py::arg("L"), py::arg("delta"), py::arg("seeds"), py::arg("T"), py::arg("N") = 0, py::arg("dt") = 0.0,
      py::arg("output_dir"), "runs the grid and returns summary.csv");

  m.def("criterion_count", &criterion_count);
  m.def(
      "run_criterion",
      [](int id) {
        CriterionResult r;
        {
          py::gil_scoped_release release;
          r = run_criterion(id);
        }
        return py::make_tuple(r.passed, format_result(r));
      },
      py::arg("id"), "(passed, report line)");
}
