// Python bindings for the core operations. Vectors cross as numpy arrays,
// trajectories as dicts of arrays; everything is computed by the same C++
// paths the CLI uses.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mdslb/covariance.hpp"
#include "mdslb/ctmc.hpp"
#include "mdslb/diffusion.hpp"
#include "mdslb/drift.hpp"
#include "mdslb/experiments.hpp"
#include "mdslb/fluid.hpp"
#include "mdslb/io.hpp"
#include "mdslb/rates.hpp"
#include "mdslb/types.hpp"

namespace py = pybind11;
using namespace mdslb;

namespace {

QueuePMF pmf_from_array(py::array_t<double, py::array::c_style | py::array::forcecast> arr,
                        double tail_mass) {
  QueuePMF r;
  r.probs.assign(arr.data(), arr.data() + arr.size());
  r.tail_mass = tail_mass;
  return r;
}

std::vector<double> vec_from_array(
    py::array_t<double, py::array::c_style | py::array::forcecast> arr) {
  return std::vector<double>(arr.data(), arr.data() + arr.size());
}

py::array_t<double> array_from_vec(const std::vector<double>& v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::array_t<double> array_from_cov(const CovMatrix& m) {
  py::array_t<double> out({m.dim, m.dim});
  std::copy(m.a.begin(), m.a.end(), out.mutable_data());
  return out;
}

CovMatrix cov_from_array(
    py::array_t<double, py::array::c_style | py::array::forcecast> arr) {
  if (arr.ndim() != 2 || arr.shape(0) != arr.shape(1))
    throw ValidationError("matrix must be square");
  CovMatrix m = CovMatrix::zero(static_cast<int>(arr.shape(0)));
  std::copy(arr.data(), arr.data() + arr.size(), m.a.begin());
  return m;
}

} // namespace

PYBIND11_MODULE(mdslb, m) {
  m.doc() = "batch-sampling load balancer: exact chain, fluid limit, diffusion";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  m.def("build_id", &build_id, "git id of the built library");

  py::class_<SystemParams>(m, "SystemParams")
      .def(py::init<>())
      .def_readwrite("n", &SystemParams::n)
      .def_readwrite("lam", &SystemParams::lambda)
      .def_readwrite("L", &SystemParams::L)
      .def_readwrite("k", &SystemParams::k)
      .def_readwrite("c", &SystemParams::c)
      .def_readwrite("T", &SystemParams::T)
      .def("validate", &SystemParams::validate);

  py::class_<TruncationConfig>(m, "TruncationConfig")
      .def(py::init<>())
      .def_readwrite("K", &TruncationConfig::K)
      .def_readwrite("leak_tol", &TruncationConfig::leak_tol)
      .def("validate", &TruncationConfig::validate);

  m.def(
      "zeta_bar",
      [](int j, py::array_t<double> probs, double tail_mass, int L, int k) {
        return zeta_bar(j, pmf_from_array(probs, tail_mass), L, k);
      },
      py::arg("j"), py::arg("probs"), py::arg("tail_mass"), py::arg("L"), py::arg("k"));

  m.def(
      "drift_f",
      [](py::array_t<double> probs, double tail_mass, const SystemParams& p) {
        return array_from_vec(drift_F(pmf_from_array(probs, tail_mass), p));
      },
      py::arg("probs"), py::arg("tail_mass"), py::arg("params"));

  m.def(
      "drift_f_powerd",
      [](py::array_t<double> probs, double tail_mass, double lam, int d) {
        return array_from_vec(drift_F_powerd(pmf_from_array(probs, tail_mass), lam, d));
      },
      py::arg("probs"), py::arg("tail_mass"), py::arg("lam"), py::arg("d"));

  m.def(
      "phi_matrix",
      [](py::array_t<double> probs, double tail_mass, const SystemParams& p) {
        return array_from_cov(phi_matrix(pmf_from_array(probs, tail_mass), p));
      },
      py::arg("probs"), py::arg("tail_mass"), py::arg("params"));

  m.def(
      "sqrt_psd",
      [](py::array_t<double> mat) { return array_from_cov(sqrt_psd(cov_from_array(mat))); },
      py::arg("mat"));

  m.def(
      "drift_g",
      [](py::array_t<double> x, py::array_t<double> probs, double tail_mass,
         const SystemParams& p) {
        QueuePMF r = pmf_from_array(probs, tail_mass);
        return array_from_vec(
            drift_G(vec_from_array(x), r, p, static_cast<int>(r.probs.size()) - 1));
      },
      py::arg("x"), py::arg("probs"), py::arg("tail_mass"), py::arg("params"));

  m.def(
      "solve_ode",
      [](const SystemParams& p, const TruncationConfig& tc, double h, double dt) {
        FluidTrajectory fl = solve_ode(pmf_delta0(tc.K), p, tc, h, uniform_grid(p.T, dt));
        py::dict out;
        out["times"] = array_from_vec(fl.times);
        py::list pis;
        py::list leaks;
        for (const QueuePMF& s : fl.states) {
          pis.append(array_from_vec(s.probs));
          leaks.append(s.tail_mass);
        }
        out["pi"] = pis;
        out["leak"] = leaks;
        return out;
      },
      py::arg("params"), py::arg("trunc"), py::arg("h") = 0.01, py::arg("dt") = 0.1);

  m.def(
      "simulate_ctmc",
      [](const SystemParams& p, double dt, uint64_t seed) {
        CtmcTrajectory tr =
            simulate_ctmc(p, counts_all_empty(p.n), uniform_grid(p.T, dt), seed);
        py::dict out;
        out["times"] = array_from_vec(tr.times);
        py::list counts;
        for (const auto& c : tr.counts) {
          py::array_t<int64_t> row(static_cast<py::ssize_t>(c.size()));
          std::copy(c.begin(), c.end(), row.mutable_data());
          counts.append(row);
        }
        out["counts"] = counts;
        py::array_t<int64_t> jobs(static_cast<py::ssize_t>(tr.jobs.size()));
        std::copy(tr.jobs.begin(), tr.jobs.end(), jobs.mutable_data());
        out["jobs"] = jobs;
        out["events"] = tr.events;
        return out;
      },
      py::arg("params"), py::arg("dt") = 0.1, py::arg("seed") = 1);

  m.def(
      "simulate_sde",
      [](const SystemParams& p, const TruncationConfig& tc, double dt, double h,
         uint64_t seed) {
        SdeCoeffs coeffs = make_sde_coeffs(pmf_delta0(tc.K), p, tc, dt, h);
        FluctuationVector x0(static_cast<size_t>(tc.K) + 1, 0.0);
        SdeTrajectory tr = simulate_sde(x0, coeffs, p, seed);
        py::dict out;
        out["times"] = array_from_vec(tr.times);
        py::list xs;
        for (const auto& x : tr.x) xs.append(array_from_vec(x));
        out["x"] = xs;
        py::list pis;
        for (const auto& s : coeffs.pi) pis.append(array_from_vec(s.probs));
        out["pi"] = pis;
        return out;
      },
      py::arg("params"), py::arg("trunc"), py::arg("dt") = 0.1, py::arg("h") = 0.01,
      py::arg("seed") = 1);

  m.def(
      "metrics",
      [](py::array_t<double> probs, double tail_mass, int64_t n) {
        MetricSample s = metrics(pmf_from_array(probs, tail_mass), n);
        return py::make_tuple(s.empty_count, s.large_count, s.mean_len);
      },
      py::arg("probs"), py::arg("tail_mass"), py::arg("n"));

  m.def(
      "reconstruct",
      [](py::array_t<double> probs, double tail_mass, py::array_t<double> x, int64_t n) {
        QueuePMF out = reconstruct(pmf_from_array(probs, tail_mass), vec_from_array(x), n);
        return py::make_tuple(array_from_vec(out.probs), out.tail_mass);
      },
      py::arg("probs"), py::arg("tail_mass"), py::arg("x"), py::arg("n"));
}
