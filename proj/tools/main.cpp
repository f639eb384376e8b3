#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

#include "moran/config_chain.hpp"
#include "moran/error.hpp"
#include "moran/limit_law.hpp"
#include "moran/monte_carlo.hpp"
#include "moran/report_io.hpp"
#include "moran/verify.hpp"
#include "moran/weights.hpp"

namespace fs = std::filesystem;
using moran::Json;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kGate = 2;

std::string command_line(int argc, char** argv) {
  std::string out;
  for (int i = 0; i < argc; ++i) {
    if (i) out += ' ';
    out += argv[i];
  }
  return out;
}

// Writes to `path`, or stdout when path is empty or "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string csv_preamble(const std::string& command) {
  return "# tool=moran-weights version=" + std::string(MORAN_VERSION) +
         " rng=" + std::string(moran::Rng::algorithm) + "\n# command=" + command + "\n";
}

std::string default_output_dir() {
  if (const char* env = std::getenv("MORAN_OUTPUT_DIR"); env && *env) return env;
  return ".";
}

struct SimulateOptions {
  std::size_t pop_size = 100;
  std::size_t parents = 2;
  std::string variant = "distinct";
  std::size_t replicates = 1000;
  std::size_t track = 2;
  double eps = moran::kDefaultEpsilon;
  std::uint64_t max_steps = 0;
  std::uint64_t seed = 1;
  std::size_t jobs = 0;
  int moments = 4;
  double confidence = 0.99;
  bool strict = false;
  bool gate = false;
  std::string out_dir;
  std::string prefix = "moran";
};

int run_simulate(const SimulateOptions& o, const std::string& command) {
  moran::ExperimentSpec spec;
  spec.model.population_size = o.pop_size;
  spec.model.parent_count = o.parents;
  spec.model.variant = moran::parse_variant(o.variant);
  spec.model.seed = o.seed;
  spec.replicates = o.replicates;
  spec.tracked = o.track;
  spec.epsilon = o.eps;
  spec.max_steps = o.max_steps;
  spec.jobs = o.jobs;
  spec.validate();
  if (o.moments < 1) throw moran::ConfigError("--moments must be at least 1");

  const auto samples = moran::run_experiment(spec);
  const auto summary = moran::summarize(samples, o.moments, o.confidence);
  const auto layers = moran::compare_layers(samples, o.moments, o.confidence);

  const fs::path dir = o.out_dir.empty() ? fs::path(default_output_dir()) : fs::path(o.out_dir);
  fs::create_directories(dir);
  const fs::path csv_path = dir / (o.prefix + "_samples.csv");
  const fs::path json_path = dir / (o.prefix + "_summary.json");
  {
    std::ofstream csv(csv_path);
    if (!csv) throw std::runtime_error("cannot write " + csv_path.string());
    csv << "# command=" << command << '\n';
    moran::write_samples_csv(csv, samples);
  }
  Json report;
  report["metadata"] = moran::metadata_json(command);
  report.update(moran::summary_json(samples, summary, layers));
  emit(json_path.string(), report.dump(2) + "\n");

  std::cout << std::setprecision(6);
  std::cout << "N=" << o.pop_size << " m=" << o.parents << " variant=" << o.variant
            << " replicates=" << samples.replicates() << " tracked=" << o.track << '\n';
  for (const auto& row : layers.rows) {
    std::cout << "  " << row.label << ": " << row.monte_carlo.normal.mean << " ["
              << row.monte_carlo.bootstrap.lower << ", " << row.monte_carlo.bootstrap.upper << "]";
    if (row.exact) std::cout << "  exact " << *row.exact;
    std::cout << "  limit " << moran::to_double(row.limit) << (row.covered ? "" : "  (not covered)")
              << '\n';
  }
  std::cout << "  zero fraction " << summary.pooled_zero_fraction << ", KS distance "
            << summary.pooled_ks_distance << ", non-converged " << summary.nonconverged << '\n';
  std::cout << "wrote " << csv_path.string() << " and " << json_path.string() << '\n';

  if (o.strict && summary.nonconverged > 0) {
    std::cerr << summary.nonconverged << " replicate(s) did not converge within "
              << spec.effective_max_steps() << " steps\n";
    return kGate;
  }
  if (o.gate && !layers.all_covered()) {
    std::cerr << "statistical gate failed: a moment interval misses its reference value\n";
    return kGate;
  }
  return kOk;
}

struct ExactOptions {
  std::size_t pop_size = 10;
  int order = 2;
  std::size_t parents = 2;
  bool rational = false;
  bool floating = false;
  bool tree = false;
  bool power = false;
  std::string format = "json";
  std::string output;
};

int run_exact(const ExactOptions& o, const std::string& command) {
  if (o.order < 1) throw moran::ConfigError("--order must be at least 1");
  if (o.pop_size <= static_cast<std::size_t>(o.order)) {
    throw moran::RegimeError("population size must exceed the order (N > k)");
  }
  const auto arithmetic = o.rational    ? moran::Arithmetic::Exact
                          : o.floating  ? moran::Arithmetic::Floating
                                        : moran::Arithmetic::Auto;
  const auto chain = moran::build_transition_matrix(o.pop_size, o.parents, o.order, arithmetic);
  const auto stationary = o.tree    ? moran::stationary_tree_theorem(chain)
                          : o.power ? moran::stationary_power(chain)
                                    : moran::stationary_linear(chain);
  if (o.format == "csv") {
    std::ostringstream out;
    out << csv_preamble(command) << std::setprecision(std::numeric_limits<double>::max_digits10);
    out << "config,nu,nu_float,scaled_moment,K\n";
    for (std::size_t i = 0; i < chain.states.size(); ++i) {
      const auto& c = chain.states[i];
      const auto moment = moran::joint_moment(stationary, o.pop_size, c.parts());
      out << '"' << c.label() << "\","
          << (stationary.exact ? moran::to_string((*stationary.exact)[i]) : "") << ','
          << stationary.nu[i] << ',' << moment.value << ','
          << moran::to_string(moran::K_closed_form(c, o.parents)) << '\n';
    }
    emit(o.output, out.str());
    return kOk;
  }
  Json report;
  report["metadata"] = moran::metadata_json(command);
  report.update(moran::exact_report_json(chain, stationary));
  emit(o.output, report.dump(2) + "\n");
  return kOk;
}

struct LimitOptions {
  std::size_t parents = 2;
  std::vector<double> points;
  std::vector<double> quantiles;
  int moments = 8;
  std::string format = "json";
  std::string output;
};

int run_limit(const LimitOptions& o, const std::string& command) {
  if (o.moments < 0) throw moran::ConfigError("--moments must be non-negative");
  const moran::MixtureLaw law(o.parents);
  std::vector<double> points = o.points;
  if (points.empty()) points = {0.0, 0.5, 1.0, 2.0, 4.0, 8.0};
  for (double u : o.quantiles) {
    if (!(u >= 0.0 && u < 1.0)) throw moran::ConfigError("--quantile values must lie in [0, 1)");
  }
  if (o.format == "csv") {
    std::ostringstream out;
    out << csv_preamble(command) << std::setprecision(std::numeric_limits<double>::max_digits10);
    out << "kind,argument,value,exact\n";
    for (double t : points) {
      out << "cdf," << t << ',' << law.cdf(t) << ",\n";
      out << "density," << t << ',' << law.continuous_density(t) << ",\n";
    }
    for (double u : o.quantiles) out << "quantile," << u << ',' << law.quantile(u) << ",\n";
    for (int k = 1; k <= o.moments; ++k) {
      const auto m = law.moment(k);
      out << "moment," << k << ',' << moran::to_double(m) << ',' << moran::to_string(m) << '\n';
    }
    emit(o.output, out.str());
    return kOk;
  }
  Json report;
  report["metadata"] = moran::metadata_json(command);
  report["m"] = o.parents;
  report["atom_weight"] = law.atom_weight();
  report["exponential_weight"] = law.exponential_weight();
  report["exponential_mean"] = law.exponential_mean();
  Json cdf = Json::array();
  for (double t : points) {
    cdf.push_back({{"t", t}, {"cdf", law.cdf(t)}, {"density", law.continuous_density(t)}});
  }
  report["cdf"] = std::move(cdf);
  Json quantiles = Json::array();
  for (double u : o.quantiles) quantiles.push_back({{"u", u}, {"quantile", law.quantile(u)}});
  report["quantiles"] = std::move(quantiles);
  Json moments = Json::array();
  for (int k = 1; k <= o.moments; ++k) {
    const auto m = law.moment(k);
    moments.push_back({{"k", k}, {"exact", moran::to_string(m)}, {"value", moran::to_double(m)}});
  }
  report["moments"] = std::move(moments);
  emit(o.output, report.dump(2) + "\n");
  return kOk;
}

struct VerifyOptions {
  std::string suite = "all";
  std::string format = "text";
  std::string report;
};

int run_verify(const VerifyOptions& o, const std::string& command) {
  std::vector<std::string> names;
  if (o.suite == "all") {
    names = moran::suite_names();
  } else {
    names.push_back(o.suite);
  }
  bool all_passed = true;
  Json suites = Json::array();
  std::ostringstream text;
  for (const auto& name : names) {
    const auto result = moran::run_suite(name);
    all_passed = all_passed && result.passed;
    text << (result.passed ? "PASS " : "FAIL ") << result.name << " (" << std::fixed
         << std::setprecision(2) << result.seconds << " s)\n";
    text.unsetf(std::ios::fixed);
    for (const auto& line : result.lines) text << "  " << line << '\n';
    suites.push_back({{"name", result.name},
                      {"passed", result.passed},
                      {"seconds", result.seconds},
                      {"lines", result.lines},
                      {"details", result.details}});
  }
  Json report;
  report["metadata"] = moran::metadata_json(command);
  report["suite"] = o.suite;
  report["passed"] = all_passed;
  report["suites"] = std::move(suites);
  if (o.format == "json") {
    std::cout << report.dump(2) << '\n';
  } else {
    std::cout << text.str();
  }
  if (!o.report.empty()) emit(o.report, report.dump(2) + "\n");
  return all_passed ? kOk : kGate;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string command = command_line(argc, argv);
  CLI::App app{"Ancestor weights in the m-parental Moran model: simulation, exact chains, limit law.",
               "moran-weights"};
  app.set_version_flag("--version", std::string(MORAN_VERSION));
  app.require_subcommand(1);

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimates of stationary ancestor weights");
  simulate->add_option("--pop-size", sim.pop_size, "Population size N")->capture_default_str();
  simulate->add_option("--parents", sim.parents, "Parents per offspring m")->capture_default_str();
  simulate->add_option("--variant", sim.variant, "Tuple sampling: distinct or independent")
      ->check(CLI::IsMember({"distinct", "independent"}))
      ->capture_default_str();
  simulate->add_option("--replicates", sim.replicates, "Independent pedigrees R")->capture_default_str();
  simulate->add_option("--track", sim.track, "Ancestors followed per replicate l")->capture_default_str();
  simulate->add_option("--eps", sim.eps, "Convergence threshold on L_n - l_n")->capture_default_str();
  simulate->add_option("--max-steps", sim.max_steps, "Event cap per replicate (0: 100 N^2)")
      ->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Master seed; replicate seeds are derived from it")
      ->capture_default_str();
  simulate->add_option("--jobs", sim.jobs, "Worker threads (0: all cores)")->capture_default_str();
  simulate->add_option("--moments", sim.moments, "Highest moment order summarised")->capture_default_str();
  simulate->add_option("--confidence", sim.confidence, "Confidence level of reported intervals")
      ->check(CLI::Range(0.5, 0.99999))
      ->capture_default_str();
  simulate->add_flag("--strict", sim.strict, "Exit 2 if any replicate fails to converge");
  simulate->add_flag("--gate", sim.gate, "Exit 2 if a moment interval misses its exact or limit value");
  simulate->add_option("--out", sim.out_dir, "Output directory (default: $MORAN_OUTPUT_DIR or .)");
  simulate->add_option("--prefix", sim.prefix, "Output file name prefix")->capture_default_str();

  ExactOptions ex;
  auto* exact = app.add_subcommand("exact", "Exact stationary law of the lumped k-lineage chain (JSON)");
  exact->add_option("--pop-size", ex.pop_size, "Population size N")->capture_default_str();
  exact->add_option("--order", ex.order, "Number of lineages k")->capture_default_str();
  exact->add_option("--parents", ex.parents, "Parents per offspring m")->capture_default_str();
  auto* rational = exact->add_flag("--rational", ex.rational, "Force exact rational arithmetic");
  auto* floating = exact->add_flag("--floating", ex.floating, "Force double arithmetic");
  rational->excludes(floating);
  auto* tree = exact->add_flag("--tree-theorem", ex.tree, "Solve via the Markov-chain tree theorem");
  auto* power = exact->add_flag("--power", ex.power, "Solve by power iteration");
  tree->excludes(power);
  exact->add_option("--format", ex.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  exact->add_option("--output,-o", ex.output, "Output file (default: stdout)");

  LimitOptions lim;
  auto* limit = app.add_subcommand("limit", "Evaluate the large-population limit law");
  limit->add_option("--parents", lim.parents, "Parents per offspring m")->capture_default_str();
  limit->add_option("--at", lim.points, "Points t at which to evaluate the CDF and density");
  limit->add_option("--quantile", lim.quantiles, "Probabilities u in [0,1) to invert");
  limit->add_option("--moments", lim.moments, "Highest moment order listed")->capture_default_str();
  limit->add_option("--format", lim.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  limit->add_option("--output,-o", lim.output, "Output file (default: stdout)");

  VerifyOptions ver;
  auto* verify = app.add_subcommand("verify", "Run deterministic invariant suites");
  std::vector<std::string> suites{"all"};
  for (const auto& s : moran::suite_names()) suites.push_back(s);
  verify->add_option("--suite", ver.suite, "all, recursion, tree, asymptotics, lumping or limit")
      ->check(CLI::IsMember(suites))
      ->capture_default_str();
  verify->add_option("--format", ver.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  verify->add_option("--report", ver.report, "Also write the JSON report to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*simulate) return run_simulate(sim, command);
    if (*exact) return run_exact(ex, command);
    if (*limit) return run_limit(lim, command);
    if (*verify) return run_verify(ver, command);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
