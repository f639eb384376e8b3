#include <doctest.h>

#include "moran/config_chain.hpp"
#include "moran/vector_chain.hpp"

using namespace moran;

TEST_CASE("vector chain is stochastic") {
  const auto chain = build_vector_chain(4, 2, 2);
  CHECK(chain.state_count() == 16);
  for (const auto& row : chain.matrix) {
    double s = 0.0;
    for (double v : row) s += v;
    CHECK(s == doctest::Approx(1.0));
  }
  CHECK(chain.decode(5) == std::vector<std::size_t>{1, 1});
}

TEST_CASE("lumping holds on small instances") {
  for (auto [n, k] : {std::pair{3, 2}, std::pair{4, 2}, std::pair{4, 3}}) {
    const auto check = check_lumping(n, 2, k);
    CHECK(check.passed);
    CHECK(check.max_within_configuration < 1e-12);
    CHECK(check.max_aggregate_error < 1e-12);
    CHECK(check.max_lift_error < 1e-12);
  }
  CHECK(check_lumping(5, 3, 2).passed);
}
