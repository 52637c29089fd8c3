#include "lpplab/bounds.hpp"
#include "lpplab/experiment.hpp"
#include "lpplab/mixing.hpp"
#include "lpplab/stats.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace lpp;

namespace {

// Thin value wrapper so the const shared_ptr never needs a pybind holder.
struct Law {
  MarginalPtr p;
  const Marginal& get() const { return *p; }
};

std::vector<double> run(const std::string& marginal, const std::string& lattice,
                        const std::string& coupling, long long reps,
                        std::uint64_t seed, int threads) {
  RunConfig cfg;
  cfg.marginal = marginal;
  cfg.lattice = lattice;
  cfg.coupling = coupling;
  cfg.reps = reps;
  cfg.seed = seed;
  cfg.threads = threads;
  return simulate_lpp(cfg);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "last-passage percolation coupling laboratory";

  py::class_<Law>(m, "Law")
      .def("cdf", [](const Law& l, double x) { return l.get().cdf(x); })
      .def("survival", [](const Law& l, double x) { return l.get().survival(x); })
      .def("upper_quantile",
           [](const Law& l, double u) { return l.get().upper_quantile(u); })
      .def("premium", [](const Law& l, double x) { return l.get().premium(x); })
      .def("mean_residual",
           [](const Law& l, double x) { return l.get().mean_residual(x); })
      .def("mean", [](const Law& l) { return l.get().mean(); })
      .def("variance", [](const Law& l) { return l.get().variance(); })
      .def("support_min", [](const Law& l) { return l.get().support_min(); })
      .def("support_max", [](const Law& l) { return l.get().support_max(); })
      .def("__repr__", [](const Law& l) { return l.get().describe(); });

  m.def("marginal", [](const std::string& text) { return Law{parse_marginal(text)}; },
        py::arg("text"), "parse a marginal string such as 'exp:theta=1'");
  m.def("worst_case_law",
        [](const std::string& lattice, const std::string& marginal) {
          return Law{worst_case_law(parse_lattice(lattice), parse_marginal(marginal))};
        },
        py::arg("lattice"), py::arg("marginal"));
  m.def("frechet_envelope",
        [](const std::string& marginal, int n) {
          return Law{frechet_envelope(parse_marginal(marginal), n)};
        },
        py::arg("marginal"), py::arg("n"));

  m.def("simulate", &run, py::arg("marginal"), py::arg("lattice"), py::arg("coupling"),
        py::arg("reps"), py::arg("seed") = 1, py::arg("threads") = 0,
        py::call_guard<py::gil_scoped_release>(),
        "one LPP value per replicate, deterministic in (seed, replicate)");

  m.def("shape_convex_bound", &shape_convex_bound, py::arg("gamma"));
  m.def("shape_rost", &shape_rost, py::arg("gamma"));
  m.def("harmonic", &harmonic, py::arg("n"));

  m.def("variance_law",
        [](const std::string& marginal, double b, int n) {
          return variance_law(*parse_marginal(marginal), b, n);
        },
        py::arg("marginal"), py::arg("b"), py::arg("n"));
  m.def("block_b_for_n", &BlockSchemeExponential::b_for_n, py::arg("n"));

  m.def("ks_distance",
        [](std::vector<double> values, const Law& law) {
          return ks_distance(EmpiricalSample(std::move(values)), law.get());
        },
        py::arg("values"), py::arg("law"));
  m.def("ks_critical", &ks_critical, py::arg("n"));

  m.def("moments",
        [](std::vector<double> values) {
          const MomentSummary s = moment_summary(EmpiricalSample(std::move(values)));
          py::dict d;
          d["n"] = s.n;
          d["mean"] = s.mean;
          d["var"] = s.variance;
          d["se_mean"] = s.se_mean;
          d["se_var"] = s.se_variance;
          return d;
        },
        py::arg("values"));

  m.attr("__version__") = kVersion;
}
