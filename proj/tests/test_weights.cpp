#include <doctest.h>

#include <numeric>
#include <sstream>

#include "moran/error.hpp"
#include "moran/weights.hpp"

using namespace moran;

namespace {

ReproductionEvent event(std::uint64_t t, std::size_t child, std::vector<std::size_t> parents) {
  return {t, child, std::move(parents)};
}

double sum(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

TEST_CASE("initial columns are indicators") {
  const auto w = init_weights(4, {1, 3});
  CHECK(w.column(1)[1] == 1.0);
  CHECK(sum(w.column(1)) == 1.0);
  CHECK(w.column(3)[3] == 1.0);
  CHECK(marginal_weight(w, 3) == 1.0);
  CHECK(w.bounds(1).lower == 0.0);
  CHECK(w.bounds(1).upper == 1.0);
  CHECK_THROWS_AS(w.slot_of(0), std::out_of_range);
}

TEST_CASE("constructor rejects bad ancestor sets") {
  CHECK_THROWS_AS(AncestorWeights(3, {0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(AncestorWeights(3, {3}), std::invalid_argument);
}

TEST_CASE("hand-worked biparental steps") {
  auto w = init_weights(3, {0, 1, 2});
  apply_event(w, event(0, 0, {1, 2}));
  CHECK(w.column(0)[0] == 0.0);
  CHECK(w.extinct(0));
  CHECK(w.column(1)[0] == 0.5);
  CHECK(w.column(2)[0] == 0.5);
  CHECK(w.marginal(1) == 1.5);

  apply_event(w, event(1, 1, {0, 2}));
  CHECK(w.column(1)[1] == doctest::Approx(0.25));
  CHECK(w.column(2)[1] == doctest::Approx(0.75));
  CHECK(w.marginal(2) == doctest::Approx(0.5 + 0.75 + 1.0));
  CHECK(w.marginal(0) == 0.0);
}

TEST_CASE("doubled parent contributes 2/m") {
  auto w = init_weights(2, {0, 1});
  apply_event(w, event(0, 0, {1, 1}));
  CHECK(w.column(1)[0] == 1.0);
  CHECK(w.column(0)[0] == 0.0);

  auto v = init_weights(3, {0});
  apply_event(v, event(0, 1, {0, 0, 2}));
  CHECK(v.column(0)[1] == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("child as its own parent") {
  auto w = init_weights(2, {0});
  apply_event(w, event(0, 0, {0, 1}));
  CHECK(w.column(0)[0] == 0.5);
}

TEST_CASE("events must arrive in order") {
  auto w = init_weights(3, {0});
  CHECK_THROWS_AS(apply_event(w, event(1, 0, {1, 2})), SequencingError);
  apply_event(w, event(0, 0, {1, 2}));
  CHECK(w.step() == 1);
}

TEST_CASE("random pedigrees: row-stochastic, monotone bounds, absorbing zero") {
  for (auto variant : {Variant::DistinctTuple, Variant::IndependentTuple}) {
    for (std::size_t m : {2, 3}) {
      ModelConfig c;
      c.population_size = 7;
      c.parent_count = m;
      c.variant = variant;
      c.seed = 99 + m;
      std::vector<std::size_t> all(7);
      std::iota(all.begin(), all.end(), 0);
      auto w = init_weights(7, all);
      Rng rng(c.seed);
      std::vector<SpreadBounds> prev;
      for (std::size_t j = 0; j < 7; ++j) prev.push_back(w.bounds(j));
      std::vector<bool> dead(7, false);
      for (std::uint64_t t = 0; t < 400; ++t) {
        apply_event(w, sample_event(c, t, rng));
        for (std::size_t i = 0; i < 7; ++i) {
          double row = 0.0;
          for (std::size_t j = 0; j < 7; ++j) row += w.column(j)[i];
          REQUIRE(row == doctest::Approx(1.0).epsilon(1e-12));
        }
        for (std::size_t j = 0; j < 7; ++j) {
          const auto b = w.bounds(j);
          // Averages of m doubles can round one ulp past the previous extreme.
          REQUIRE(b.lower >= prev[j].lower - 1e-15);
          REQUIRE(b.upper <= prev[j].upper + 1e-15);
          prev[j] = b;
          if (dead[j]) REQUIRE(w.extinct(j));
          dead[j] = w.extinct(j);
        }
      }
      double total = 0.0;
      for (std::size_t j = 0; j < 7; ++j) total += w.marginal(j);
      CHECK(total == doctest::Approx(7.0));
    }
  }
}

TEST_CASE("run_to_convergence") {
  ModelConfig c;
  c.population_size = 10;
  c.seed = 4;
  const std::vector<std::size_t> tracked{0, 1, 2};
  Rng a(4), b(4);
  const auto r1 = run_to_convergence(c, tracked, 1e-9, default_max_steps(10), a);
  const auto r2 = run_to_convergence(c, tracked, 1e-9, default_max_steps(10), b);
  CHECK(r1.all_converged());
  CHECK(r1.steps == r2.steps);
  CHECK(r1.steps % 10 == 0);
  for (std::size_t j = 0; j < tracked.size(); ++j) {
    const auto& x = r1.ancestors[j];
    CHECK(x.estimate == r2.ancestors[j].estimate);
    CHECK(x.bounds.spread() < 1e-9);
    if (x.extinct) CHECK(x.estimate == 0.0);
  }

  Rng z(1);
  CHECK_THROWS(run_to_convergence(c, tracked, 1e-9, 0, z));
  const auto one = run_to_convergence(c, tracked, 1e-9, 1, z);
  CHECK(one.steps == 1);
  CHECK_FALSE(one.all_converged());
}

TEST_CASE("trajectory checkpoints") {
  ModelConfig c;
  c.population_size = 6;
  c.seed = 8;
  Rng rng(8);
  const std::vector<std::size_t> tracked{0, 1};
  const std::vector<std::uint64_t> checkpoints{0, 6, 36};
  const auto points = record_trajectory(c, tracked, checkpoints, rng);
  CHECK(points.size() == 6);
  CHECK(points[0].marginal == 1.0);
  std::ostringstream out;
  write_trajectory_csv(out, points);
  CHECK(out.str().rfind("n,j,M_n,l_n,L_n\n0,1,", 0) == 0);
}
