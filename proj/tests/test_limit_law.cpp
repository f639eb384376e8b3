#include <doctest.h>

#include <cmath>
#include <vector>

#include "moran/limit_law.hpp"

using namespace moran;

TEST_CASE("cdf shape") {
  for (std::size_t m : {2, 3, 5}) {
    const MixtureLaw law(m);
    const double atom = (m - 1.0) / m;
    CHECK(law.cdf(0.0) == doctest::Approx(atom));
    CHECK(law.cdf_left(0.0) == 0.0);
    CHECK(law.cdf(-1.0) == 0.0);
    CHECK(law.cdf(1e-12) == doctest::Approx(atom));
    CHECK(law.cdf(m * 1.0) == doctest::Approx(atom + (1.0 - std::exp(-1.0)) / m));
    double prev = 0.0;
    for (double t = 0.0; t < 50.0; t += 0.25) {
      REQUIRE(law.cdf(t) >= prev);
      prev = law.cdf(t);
    }
    CHECK(law.cdf(1e6) == doctest::Approx(1.0));
  }
  CHECK_THROWS(MixtureLaw(1));
}

TEST_CASE("quantile inverts cdf") {
  const MixtureLaw law(2);
  CHECK(law.quantile(0.0) == 0.0);
  CHECK(law.quantile(0.4) == 0.0);
  CHECK(law.quantile(0.5) == 0.0);
  for (double u : {0.55, 0.7, 0.9, 0.999}) CHECK(law.cdf(law.quantile(u)) == doctest::Approx(u));
}

TEST_CASE("moments are m^(k-1) k!") {
  const MixtureLaw two(2), three(3);
  CHECK(two.moment(0) == 1);
  CHECK(two.moment(1) == 1);
  CHECK(two.moment(2) == 4);
  CHECK(two.moment(3) == 24);
  CHECK(two.moment(4) == 192);
  CHECK(three.moment(2) == 6);
}

TEST_CASE("sampler matches the law") {
  const MixtureLaw law(2);
  Rng rng(31);
  std::vector<double> x(200000);
  double sum = 0.0;
  std::size_t zeros = 0;
  for (auto& v : x) {
    v = law.sample(rng);
    sum += v;
    zeros += v == 0.0;
  }
  CHECK(sum / x.size() == doctest::Approx(1.0).epsilon(0.02));
  CHECK(static_cast<double>(zeros) / x.size() == doctest::Approx(0.5).epsilon(0.01));
  CHECK(ks_distance(x, law) < 0.005);
}

TEST_CASE("ks distance handles the atom") {
  const MixtureLaw law(2);
  const std::vector<double> all_zero(10, 0.0);
  CHECK(ks_distance(all_zero, law) == doctest::Approx(0.5));
  const std::vector<double> no_zero{1.0, 2.0};
  CHECK(ks_distance(no_zero, law) >= 0.5);
  CHECK_THROWS(ks_distance(std::vector<double>{}, law));
}
