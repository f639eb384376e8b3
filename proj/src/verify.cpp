#include "moran/verify.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "moran/asymptotics.hpp"
#include "moran/config_chain.hpp"
#include "moran/limit_law.hpp"
#include "moran/vector_chain.hpp"

namespace moran {

namespace {

template <class... Args>
std::string cat(Args&&... args) {
  std::ostringstream out;
  out.precision(6);
  (out << ... << args);
  return out.str();
}

SuiteResult recursion_suite() {
  SuiteResult r;
  const auto report = verify_K_recursion(8);
  const auto solved = solve_K_recursion(8);
  std::size_t mismatches = 0;
  for (const auto& [config, value] : solved) {
    if (value != K_closed_form(config, 2)) ++mismatches;
  }
  r.passed = report.ok() && mismatches == 0;
  r.lines.push_back(cat("K recursion: ", report.checks.size(), " partitions of k<=8 checked, ",
                        report.violations, " violations"));
  r.lines.push_back(cat("recursion solved from K({1,..,1})=1 matches closed form on ",
                        solved.size() - mismatches, "/", solved.size(), " partitions"));
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"config", c.config.label()},
                      {"lhs", to_string(c.lhs)},
                      {"rhs", to_string(c.rhs)},
                      {"holds", c.holds}});
  }
  r.details["checks"] = std::move(checks);
  r.details["solved_mismatches"] = mismatches;
  return r;
}

SuiteResult tree_suite() {
  SuiteResult r;
  r.passed = true;
  Json cases = Json::array();
  for (std::size_t n : {3, 5, 10, 50, 100}) {
    const auto chain = build_transition_matrix(n, 2, 2, Arithmetic::Exact);
    const auto lin = stationary_linear(chain);
    const auto tree = stationary_tree_theorem(chain);
    const bool same = *lin.exact == *tree.exact;
    const bool formula = (*lin.exact)[0] == Rational(4, static_cast<long>(n) + 3);
    r.passed = r.passed && same && formula;
    r.lines.push_back(cat("k=2 N=", n, ": tree == linear exactly: ", same ? "yes" : "NO",
                          ", nu({2}) = ", to_string((*lin.exact)[0])));
    cases.push_back({{"N", n}, {"k", 2}, {"exact_equal", same}, {"nu_2", to_string((*lin.exact)[0])}});
  }
  for (std::size_t n : {6, 10, 20}) {
    for (int k = 1; k <= 4; ++k) {
      const auto chain = build_transition_matrix(n, 2, k);
      const auto lin = stationary_linear(chain);
      const auto tree = stationary_tree_theorem(chain);
      const auto power = stationary_power(chain);
      double diff = 0.0;
      double diff_power = 0.0;
      for (std::size_t i = 0; i < lin.nu.size(); ++i) {
        diff = std::max(diff, std::abs(lin.nu[i] - tree.nu[i]));
        diff_power = std::max(diff_power, std::abs(lin.nu[i] - power.nu[i]));
      }
      const bool ok = diff <= 1e-10 && diff_power <= 1e-10;
      r.passed = r.passed && ok;
      r.lines.push_back(cat("k=", k, " N=", n, ": |tree-linear|=", diff, " |power-linear|=",
                            diff_power, ok ? "" : "  FAIL"));
      cases.push_back({{"N", n}, {"k", k}, {"max_diff_tree", diff}, {"max_diff_power", diff_power}});
    }
  }
  r.details["cases"] = std::move(cases);
  return r;
}

SuiteResult asymptotics_suite() {
  SuiteResult r;
  r.passed = true;
  const std::vector<std::size_t> grid{16, 32, 64, 128, 256};
  Json orders = Json::array();
  for (int k = 2; k <= 4; ++k) {
    const auto report = check_order_classes(k, 2, grid, 0.05);
    r.passed = r.passed && report.ok();
    r.lines.push_back(cat("order classes k=", k, ": ", report.rows.size(), " transitions, ",
                          report.failures, " outside tolerance"));
    for (const auto& row : report.rows) {
      orders.push_back({{"from", row.from.label()},
                        {"to", row.to.label()},
                        {"class", std::string(to_string(row.kind))},
                        {"predicted", row.predicted},
                        {"exponent", row.fit.exponent},
                        {"constant", row.fit.constant},
                        {"passed", row.passed}});
    }
  }
  r.details["order_classes"] = std::move(orders);

  const std::vector<std::size_t> nu_grid{8, 16, 32, 64, 128};
  Json scaling = Json::array();
  for (int k = 2; k <= 4; ++k) {
    const auto report = nu_scaling_check(nu_grid, k, 2);
    for (const auto& row : report.rows) {
      const bool converging = !row.error_exponent || std::abs(*row.error_exponent - 1.0) <= 0.05;
      const bool ok = row.positive_finite && row.error_decreasing && converging;
      r.passed = r.passed && ok;
      r.lines.push_back(cat("N^k nu ", row.config.label(), " -> K=", to_string(row.limit),
                            ": value at N=128 ", row.scaled_vector.back(), ", error exponent ",
                            row.error_exponent.value_or(0.0), ok ? "" : "  FAIL"));
      scaling.push_back({{"config", row.config.label()},
                         {"limit", to_string(row.limit)},
                         {"values", row.scaled_vector},
                         {"errors", row.errors},
                         {"error_exponent", row.error_exponent ? Json(*row.error_exponent) : Json(nullptr)}});
    }
  }
  r.details["nu_scaling"] = std::move(scaling);
  return r;
}

SuiteResult lumping_suite() {
  SuiteResult r;
  r.passed = true;
  Json cases = Json::array();
  const std::pair<int, std::size_t> runs[] = {{2, 3}, {2, 4}, {2, 5}, {3, 4}, {3, 5}};
  for (auto [k, n] : runs) {
    const auto check = check_lumping(n, 2, k, 1e-12);
    r.passed = r.passed && check.passed;
    r.lines.push_back(cat("k=", k, " N=", n, ": within-configuration spread ",
                          check.max_within_configuration, ", aggregate error ",
                          check.max_aggregate_error, ", lift error ", check.max_lift_error,
                          check.passed ? "" : "  FAIL"));
    cases.push_back({{"N", n},
                     {"k", k},
                     {"within", check.max_within_configuration},
                     {"aggregate", check.max_aggregate_error},
                     {"lift", check.max_lift_error},
                     {"passed", check.passed}});
  }
  r.details["cases"] = std::move(cases);
  return r;
}

SuiteResult limit_suite() {
  SuiteResult r;
  r.passed = true;
  Json table = Json::array();
  const MixtureLaw law(2);
  for (int k = 1; k <= 8; ++k) {
    Rational expected = 1;
    for (int i = 0; i < k - 1; ++i) expected *= 2;
    for (int i = 2; i <= k; ++i) expected *= i;
    const auto kc = K_closed_form(Configuration({k}), 2);
    const bool ok = kc == expected && law.moment(k) == kc;
    r.passed = r.passed && ok;
    table.push_back({{"k", k}, {"K", to_string(kc)}, {"moment", to_string(law.moment(k))}, {"ok", ok}});
  }
  r.lines.push_back(cat("K({k},2) = 2^(k-1) k! = limit-law moment for k<=8: ", r.passed ? "yes" : "NO"));

  boost::math::quadrature::exp_sinh<double> integrator;
  double worst = 0.0;
  for (std::size_t m : {2, 3, 4}) {
    const MixtureLaw lm(m);
    for (int k = 1; k <= 10; ++k) {
      const double integral = integrator.integrate(
          [&](double t) {
            const double f = lm.continuous_density(t);
            return f > 0.0 ? std::pow(t, k) * f : 0.0;
          });
      const double exact = to_double(lm.moment(k));
      worst = std::max(worst, std::abs(integral / exact - 1.0));
    }
  }
  const bool quad_ok = worst <= 1e-9;
  r.passed = r.passed && quad_ok;
  r.lines.push_back(cat("quadrature of the density reproduces moments k<=10 (m=2,3,4): max rel err ",
                        worst, quad_ok ? "" : "  FAIL"));
  r.details["table"] = std::move(table);
  r.details["quadrature_max_relative_error"] = worst;
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"recursion", "tree", "asymptotics", "lumping", "limit"};
  return names;
}

SuiteResult run_suite(std::string_view name) {
  const auto start = std::chrono::steady_clock::now();
  SuiteResult r;
  if (name == "recursion") {
    r = recursion_suite();
  } else if (name == "tree") {
    r = tree_suite();
  } else if (name == "asymptotics") {
    r = asymptotics_suite();
  } else if (name == "lumping") {
    r = lumping_suite();
  } else if (name == "limit") {
    r = limit_suite();
  } else {
    throw std::invalid_argument("unknown suite '" + std::string(name) + "'");
  }
  r.name = std::string(name);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.details["passed"] = r.passed;
  return r;
}

}  // namespace moran
