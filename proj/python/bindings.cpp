#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "moran/config_chain.hpp"
#include "moran/error.hpp"
#include "moran/limit_law.hpp"
#include "moran/model.hpp"
#include "moran/monte_carlo.hpp"
#include "moran/report_io.hpp"
#include "moran/verify.hpp"
#include "moran/weights.hpp"

namespace py = pybind11;

namespace {

moran::ModelConfig make_config(std::size_t n, std::size_t m, const std::string& variant,
                               std::uint64_t seed) {
  moran::ModelConfig config;
  config.population_size = n;
  config.parent_count = m;
  config.variant = moran::parse_variant(variant);
  config.seed = seed;
  config.validate();
  return config;
}

moran::Arithmetic parse_arithmetic(const std::string& text) {
  if (text == "auto") return moran::Arithmetic::Auto;
  if (text == "exact") return moran::Arithmetic::Exact;
  if (text == "floating") return moran::Arithmetic::Floating;
  throw moran::ConfigError("arithmetic must be auto, exact or floating");
}

// Rich reports cross the boundary as JSON text; the Python layer decodes them.
std::string exact_json(std::size_t n, int k, std::size_t m, const std::string& method,
                       const std::string& arithmetic) {
  const auto chain = moran::build_transition_matrix(n, m, k, parse_arithmetic(arithmetic));
  moran::StationaryResult result;
  if (method == "linear-solve") {
    result = moran::stationary_linear(chain);
  } else if (method == "tree-theorem") {
    result = moran::stationary_tree_theorem(chain);
  } else if (method == "power-iteration") {
    result = moran::stationary_power(chain);
  } else {
    throw moran::ConfigError("method must be linear-solve, tree-theorem or power-iteration");
  }
  return moran::exact_report_json(chain, result).dump();
}

std::string simulate_json(std::size_t n, std::size_t m, const std::string& variant,
                          std::size_t replicates, std::size_t tracked, std::uint64_t seed,
                          double epsilon, std::uint64_t max_steps, std::size_t jobs, int moments) {
  moran::ExperimentSpec spec;
  spec.model = make_config(n, m, variant, seed);
  spec.replicates = replicates;
  spec.tracked = tracked;
  spec.epsilon = epsilon;
  spec.max_steps = max_steps;
  spec.jobs = jobs;
  moran::SampleSet samples;
  {
    py::gil_scoped_release release;
    samples = moran::run_experiment(spec);
  }
  const auto summary = moran::summarize(samples, moments);
  const auto layers = moran::compare_layers(samples, moments);
  auto report = moran::summary_json(samples, summary, layers);
  moran::Json values = moran::Json::array();
  for (std::size_t r = 0; r < samples.replicates(); ++r) {
    std::vector<double> row(samples.tracked());
    for (std::size_t j = 0; j < row.size(); ++j) row[j] = samples.at(r, j);
    values.push_back(row);
  }
  report["samples"] = std::move(values);
  return report.dump();
}

std::string verify_json(const std::string& name) {
  const auto result = moran::run_suite(name);
  moran::Json j;
  j["name"] = result.name;
  j["passed"] = result.passed;
  j["seconds"] = result.seconds;
  j["lines"] = result.lines;
  j["details"] = result.details;
  return j.dump();
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Ancestor weights in the m-parental Moran model";
  mod.attr("__version__") = MORAN_VERSION;

  py::register_exception<moran::ConfigError>(mod, "ConfigError", PyExc_ValueError);
  py::register_exception<moran::RegimeError>(mod, "RegimeError", PyExc_ValueError);
  py::register_exception<moran::StructuralError>(mod, "StructuralError", PyExc_RuntimeError);
  py::register_exception<moran::CapabilityError>(mod, "CapabilityError", PyExc_RuntimeError);

  mod.def(
      "generate_pedigree",
      [](std::size_t n, std::size_t m, const std::string& variant, std::uint64_t steps,
         std::uint64_t seed) {
        const auto pedigree = moran::generate_pedigree(make_config(n, m, variant, seed), steps);
        std::vector<std::tuple<std::uint64_t, std::size_t, std::vector<std::size_t>>> out;
        out.reserve(pedigree.events.size());
        for (const auto& e : pedigree.events) out.emplace_back(e.time, e.child, e.parents);
        return out;
      },
      py::arg("population_size"), py::arg("parent_count") = 2, py::arg("variant") = "distinct",
      py::arg("steps") = 0, py::arg("seed") = 0,
      "List of (t, child, parents) with 0-based individuals.");

  mod.def(
      "run_to_convergence",
      [](std::size_t n, std::size_t m, const std::string& variant, std::vector<std::size_t> tracked,
         std::uint64_t seed, double epsilon, std::uint64_t max_steps) {
        const auto config = make_config(n, m, variant, seed);
        moran::Rng rng(seed);
        const auto report = moran::run_to_convergence(
            config, tracked, epsilon, max_steps ? max_steps : moran::default_max_steps(n), rng);
        py::list ancestors;
        for (const auto& a : report.ancestors) {
          py::dict d;
          d["ancestor"] = a.ancestor;
          d["estimate"] = a.estimate;
          d["lower"] = a.bounds.lower;
          d["upper"] = a.bounds.upper;
          d["extinct"] = a.extinct;
          d["converged"] = a.converged;
          ancestors.append(d);
        }
        py::dict out;
        out["steps"] = report.steps;
        out["ancestors"] = ancestors;
        return out;
      },
      py::arg("population_size"), py::arg("parent_count") = 2, py::arg("variant") = "distinct",
      py::arg("tracked") = std::vector<std::size_t>{0}, py::arg("seed") = 0,
      py::arg("epsilon") = moran::kDefaultEpsilon, py::arg("max_steps") = 0);

  mod.def("_exact_json", &exact_json, py::arg("population_size"), py::arg("order"),
          py::arg("parent_count") = 2, py::arg("method") = "linear-solve",
          py::arg("arithmetic") = "auto");

  mod.def(
      "joint_moment",
      [](std::size_t n, std::vector<int> exponents, std::size_t m, const std::string& arithmetic) {
        const auto v = moran::joint_moment(n, m, exponents, parse_arithmetic(arithmetic));
        std::optional<std::string> exact;
        if (v.exact) exact = moran::to_string(*v.exact);
        return std::make_tuple(v.value, exact);
      },
      py::arg("population_size"), py::arg("exponents"), py::arg("parent_count") = 2,
      py::arg("arithmetic") = "auto", "(value, exact 'p/q' or None)");

  mod.def(
      "K_closed_form",
      [](std::vector<int> parts, std::size_t m) {
        return moran::to_string(moran::K_closed_form(moran::Configuration(parts), m));
      },
      py::arg("parts"), py::arg("parent_count") = 2);

  py::class_<moran::MixtureLaw>(mod, "MixtureLaw")
      .def(py::init<std::size_t>(), py::arg("parent_count") = 2)
      .def_property_readonly("parent_count", &moran::MixtureLaw::parent_count)
      .def_property_readonly("atom_weight", &moran::MixtureLaw::atom_weight)
      .def_property_readonly("exponential_mean", &moran::MixtureLaw::exponential_mean)
      .def("cdf", &moran::MixtureLaw::cdf)
      .def("quantile", &moran::MixtureLaw::quantile)
      .def("density", &moran::MixtureLaw::continuous_density)
      .def("moment", [](const moran::MixtureLaw& law, int k) {
        return moran::to_string(law.moment(k));
      });

  mod.def("_simulate_json", &simulate_json, py::arg("population_size"),
          py::arg("parent_count") = 2, py::arg("variant") = "distinct",
          py::arg("replicates") = 1000, py::arg("tracked") = 2, py::arg("seed") = 0,
          py::arg("epsilon") = moran::kDefaultEpsilon, py::arg("max_steps") = 0,
          py::arg("jobs") = 0, py::arg("moments") = 4);

  mod.def("suite_names", &moran::suite_names);
  mod.def("_verify_json", &verify_json, py::arg("suite"));
}
