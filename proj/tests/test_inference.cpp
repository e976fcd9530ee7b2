// Copyright 2026 The probtable Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "probtable/inference.hpp"

using namespace probtable;
using fixtures::q;

namespace {

ObservationSet single(const std::string& intervention, const std::string& result,
                      std::int64_t n = 1) {
  ObservationSet obs;
  obs.add(intervention, result, n);
  return obs;
}

}  // namespace

TEST_CASE("disjunction within one intervention") {
  const auto dec =
      decompose(fixtures::example_table(), fixtures::example_basis());
  // exhaustive pair: certainty for every preparation
  CHECK(disjunction_within(dec, 0, 0, 1, 4) == 1);
  CHECK(disjunction_within(dec, 1, 0, 1, 0) == 1);
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t j = 0; j < 7; ++j)
      CHECK(disjunction_within(dec, k, 0, 1, j) == 1);
  CHECK_THROWS_AS(disjunction_within(dec, 0, 1, 1, 0), Error);
  CHECK_THROWS_AS(disjunction_within(dec, 0, 0, 5, 0),
                  ResultsNotSameIntervention);
}

TEST_CASE("disjunction across interventions mixes by the given weights") {
  const auto dec =
      decompose(fixtures::example_table(), fixtures::example_basis());
  // p_11 = 1 and p_31 = 1/2 with equal weights
  CHECK(disjunction_across(dec, 0, 0, 1, 0, q(1, 2), q(1, 2), 0) == q(3, 4));
  // a degenerate mixture reduces to the plain entry
  CHECK(disjunction_across(dec, 0, 0, 1, 0, q(1), q(0), 4) == q(3, 4));
  CHECK_THROWS_AS(
      disjunction_across(dec, 0, 0, 1, 0, q(3, 5), q(3, 5), 0),
      WeightsNotNormalized);
  CHECK_THROWS_AS(disjunction_across(dec, 1, 0, 1, 1, q(1, 2), q(1, 2), 0),
                  SameIntervention);
}

TEST_CASE("likelihood values on the example table") {
  const auto table = fixtures::example_table();
  CHECK(likelihood(table, 0, single("M_1", "R_1")).value == 1);
  CHECK(likelihood(table, 2, single("M_1", "R_1")).value == 0);
  CHECK(likelihood(table, 2, single("M_1", "R_1")).log_value ==
        -std::numeric_limits<double>::infinity());

  ObservationSet obs;
  obs.add("M_1", "R_1", 2);
  obs.add("M_2", "R_3", 1);
  CHECK(likelihood(table, 4, obs).value == q(27, 64));
}

TEST_CASE("posterior over preparations follows Bayes' rule exactly") {
  const auto table = fixtures::example_table();
  const auto prior = uniform_prior<Rational>(7);

  SUBCASE("one observation of the first result") {
    const auto report = posterior(table, prior, single("M_1", "R_1"));
    // proportional to the first row: 1, 1/2, 0, 1/2, 3/4, 1/2, 3/4
    const Rational z = q(1) + q(1, 2) + q(0) + q(1, 2) + q(3, 4) + q(1, 2) +
                       q(3, 4);
    CHECK(report.weights[0] == q(1) / z);
    CHECK(report.weights[2] == 0);
    CHECK(report.weights[4] == q(3, 4) / z);
    Rational sum = 0;
    for (const auto& w : report.weights) sum += w;
    CHECK(sum == 1);

    // independent reference: plain products, no log-space
    const auto ref = oracles::bayes_oracle(table,
                                           std::vector<double>(7, 1.0 / 7),
                                           single("M_1", "R_1"));
    for (std::size_t j = 0; j < 7; ++j)
      CHECK(to_double(report.weights[j]) == doctest::Approx(ref[j]));
  }

  SUBCASE("a point-mass prior is a fixed point") {
    std::vector<Rational> point(7, q(0));
    point[1] = 1;
    const auto report = posterior(table, point, single("M_1", "R_1"));
    CHECK(report.weights[1] == 1);
  }

  SUBCASE("impossible data raise ZeroEvidence") {
    std::vector<Rational> point(7, q(0));
    point[2] = 1;  // p(R_1 | S_3) = 0
    CHECK_THROWS_AS(posterior(table, point, single("M_1", "R_1")),
                    ZeroEvidence);
  }

  SUBCASE("no data leaves the prior untouched") {
    const auto report = posterior(table, prior, ObservationSet{});
    for (std::size_t j = 0; j < 7; ++j) CHECK(report.weights[j] == prior[j]);
    CHECK(report.log_evidence == doctest::Approx(0.0));
  }
}

TEST_CASE("sequential updating equals batch updating, exactly") {
  const auto table = fixtures::example_table();
  std::mt19937_64 rng(99);
  for (int round = 0; round < 10; ++round) {
    const auto obs1 = simulate_observations(
        table, 4, {{"M_1", 5}, {"M_2", 3}}, 1000 + round);
    const auto obs2 =
        simulate_observations(table, 4, {{"M_2", 4}, {"M_3", 6}}, 2000 + round);
    const auto prior = uniform_prior<Rational>(7);
    const auto batch = posterior(table, prior, obs1.merged_with(obs2));
    const auto step1 = posterior(table, prior, obs1);
    const auto step2 = posterior(table, step1.weights, obs2);
    for (std::size_t j = 0; j < 7; ++j)
      CHECK(batch.weights[j] == step2.weights[j]);
  }
  (void)rng;
}

TEST_CASE("prediction mixes columns by the posterior") {
  const auto table = fixtures::example_table();

  std::vector<Rational> point(7, q(0));
  point[4] = 1;
  CHECK(predict(table, point, 0) ==
        std::vector<Rational>{q(3, 4), q(1, 4)});

  std::vector<Rational> two(7, q(0));
  two[0] = q(1, 2);
  two[2] = q(1, 2);
  CHECK(predict(table, two, 0) == std::vector<Rational>{q(1, 2), q(1, 2)});

  // predictive distributions stay normalized for random weights
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> w(0, 5);
  for (int round = 0; round < 20; ++round) {
    std::vector<Rational> weights(7);
    Rational total = 0;
    for (auto& x : weights) {
      x = w(rng);
      total += x;
    }
    if (total == 0) weights[0] = total = 1;
    for (auto& x : weights) x /= total;
    for (std::size_t k = 0; k < 3; ++k) {
      Rational sum = 0;
      for (const auto& p : predict(table, weights, k)) sum += p;
      CHECK(sum == 1);
    }
  }
}

TEST_CASE("the effective vector reproduces predictions and stays on e.s=1") {
  const auto table = fixtures::example_table();
  const auto dec = decompose(table, fixtures::example_basis());

  std::vector<Rational> point(7, q(0));
  point[5] = 1;
  CHECK(effective_vector(dec, point) ==
        std::vector<Rational>{q(1), q(0), q(0)});

  std::vector<Rational> two(7, q(0));
  two[0] = q(1, 2);
  two[2] = q(1, 2);
  // the average of (1,1,0) and (1,-1,0) happens to equal s_6
  CHECK(effective_vector(dec, two) == std::vector<Rational>{q(1), q(0), q(0)});

  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> w(0, 5);
  const auto e = *intervention_sum_vectors(dec).common_sum;
  for (int round = 0; round < 20; ++round) {
    std::vector<Rational> weights(7);
    Rational total = 0;
    for (auto& x : weights) {
      x = w(rng);
      total += x;
    }
    if (total == 0) weights[0] = total = 1;
    for (auto& x : weights) x /= total;
    const auto s_new = effective_vector(dec, weights);
    CHECK(dot(e, s_new) == 1);
    for (std::size_t k = 0; k < 3; ++k)
      CHECK(predict(table, weights, k) == predict_from_vector(dec, s_new, k));
  }
}

TEST_CASE("table and vector predictions agree in floating point") {
  const auto table = to_float(fixtures::example_table());
  const auto dec = decompose(table);
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int round = 0; round < 100; ++round) {
    std::vector<double> weights(7);
    double total = 0;
    for (auto& x : weights) {
      x = u(rng);
      total += x;
    }
    for (auto& x : weights) x /= total;
    const auto s_new = effective_vector(dec, weights);
    for (std::size_t k = 0; k < 3; ++k) {
      const auto via_table = predict(table, weights, k);
      const auto via_vector = predict_from_vector(dec, s_new, k);
      for (std::size_t i = 0; i < via_table.size(); ++i)
        CHECK(std::abs(via_table[i] - via_vector[i]) <= 1e-10);
    }
  }
}

TEST_CASE("simulation is deterministic and hits exact columns") {
  const auto table = fixtures::example_table();

  SUBCASE("a deterministic column yields deterministic counts") {
    const auto obs = simulate_observations(table, 0, {{"M_1", 100}}, 42);
    REQUIRE(obs.entries.size() == 2);
    CHECK(obs.entries[0].count == 100);
    CHECK(obs.entries[1].count == 0);
    CHECK(*obs.true_prep == "S_1");
    CHECK(*obs.seed == 42);
    CHECK(*obs.rng_algorithm == kRngAlgorithm);
  }

  SUBCASE("the same seed reproduces the same observations") {
    const std::vector<ScheduleItem> schedule{{"M_1", 500}, {"M_2", 300}};
    const auto a = simulate_observations(table, 4, schedule, 7);
    const auto b = simulate_observations(table, 4, schedule, 7);
    REQUIRE(a.entries.size() == b.entries.size());
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
      CHECK(a.entries[i].intervention == b.entries[i].intervention);
      CHECK(a.entries[i].result == b.entries[i].result);
      CHECK(a.entries[i].count == b.entries[i].count);
    }
    const auto c = simulate_observations(table, 4, schedule, 8);
    bool any_difference = false;
    for (std::size_t i = 0; i < a.entries.size(); ++i)
      any_difference |= a.entries[i].count != c.entries[i].count;
    CHECK(any_difference);
  }

  SUBCASE("long-run frequencies approach the column, within 3 sigma") {
    const std::int64_t n = 100000;
    const auto obs = simulate_observations(table, 4, {{"M_1", n}}, 20260810);
    const double p = 0.75;
    const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(n));
    const double freq =
        static_cast<double>(obs.entries[0].count) / static_cast<double>(n);
    CHECK(std::abs(freq - p) <= 3 * sigma);
  }

  SUBCASE("float-mode simulation works the same way") {
    const auto table_f = to_float(table);
    const auto obs = simulate_observations(table_f, 0, {{"M_1", 50}}, 1);
    CHECK(obs.entries[0].count == 50);
  }
}

TEST_CASE("embedding recovers a hidden preparation from exact frequencies") {
  // drop S_7 = (1, 1/2, 0) and re-derive it from its frequencies
  const auto table = fixtures::example_table_without(6);
  const auto dec = decompose(table, fixtures::example_basis());

  ObservationSet obs;
  obs.add("M_1", "R_1", 3);
  obs.add("M_1", "R_2", 1);
  obs.add("M_2", "R_3", 1);
  obs.add("M_2", "R_4", 1);
  obs.add("M_3", "R_5", 1);

  const auto embed = embed_new_preparation(table, dec, obs);
  CHECK(embed.vector == std::vector<Rational>{q(1), q(1, 2), q(0)});
  CHECK_FALSE(embed.rank_grew);
  CHECK(embed.rank_covered == 3);
  CHECK(embed.rank_augmented == 3);
  CHECK(embed.max_residual == 0.0);
}

TEST_CASE("embedding a column that matches an existing one returns it") {
  const auto table = fixtures::example_table();
  const auto dec = decompose(table, fixtures::example_basis());
  ObservationSet obs;  // exact frequencies of S_5: 3/4,1/4 | 3/4,1/4 | 1,0
  obs.add("M_1", "R_1", 3);
  obs.add("M_1", "R_2", 1);
  obs.add("M_2", "R_3", 3);
  obs.add("M_2", "R_4", 1);
  obs.add("M_3", "R_5", 2);
  const auto embed = embed_new_preparation(table, dec, obs);
  CHECK(embed.vector == dec.prep_vectors[4]);
  CHECK_FALSE(embed.rank_grew);
}

TEST_CASE("frequencies outside the span raise the rank flag") {
  const auto table = fixtures::example_table();
  const auto dec = decompose(table, fixtures::example_basis());
  ObservationSet obs;  // (1,0) under M_1 and M_2, (0,1) under M_3
  obs.add("M_1", "R_1", 1);
  obs.add("M_2", "R_3", 1);
  obs.add("M_3", "R_6", 1);
  const auto embed = embed_new_preparation(table, dec, obs);
  CHECK(embed.rank_grew);
  CHECK(embed.rank_augmented == 4);
  CHECK(embed.max_residual > 0.0);

  // reference: the rank of the table with the frequency column appended
  Matrix<Rational> augmented(6, 8);
  const std::vector<Rational> freq{q(1), q(0), q(1), q(0), q(0), q(1)};
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 7; ++j) augmented(i, j) = table.entry(i, j);
    augmented(i, 7) = freq[i];
  }
  CHECK(oracles::rank_oracle(augmented) == 4);
}

TEST_CASE("embedding needs enough independent result vectors") {
  const auto table = fixtures::example_table();
  const auto dec = decompose(table, fixtures::example_basis());
  // M_3 alone spans a single direction
  CHECK_THROWS_AS(
      embed_new_preparation(table, dec, single("M_3", "R_5", 10)),
      InsufficientCoverage);
  CHECK_THROWS_AS(embed_new_preparation(table, dec, ObservationSet{}),
                  InsufficientCoverage);
}

TEST_CASE("embedding from simulated data lands near the true vector") {
  const auto full = to_float(fixtures::example_table());
  const auto table = to_float(fixtures::example_table_without(6));
  const auto dec = decompose(table);

  // ground truth in this decomposition's own basis: embed the hidden
  // column from its exact frequencies (3/4,1/4 | 1/2,1/2 | 1,0)
  ObservationSet exact;
  exact.add("M_1", "R_1", 3);
  exact.add("M_1", "R_2", 1);
  exact.add("M_2", "R_3", 1);
  exact.add("M_2", "R_4", 1);
  exact.add("M_3", "R_5", 1);
  const auto truth = embed_new_preparation(table, dec, exact);
  REQUIRE_FALSE(truth.rank_grew);
  CHECK(truth.max_residual <= 1e-12);

  const auto obs = simulate_observations(
      full, 6, {{"M_1", 10000}, {"M_2", 10000}, {"M_3", 10000}}, 20260810);
  const auto embed = embed_new_preparation(table, dec, obs);
  REQUIRE(embed.vector.size() == 3);
  for (std::size_t t = 0; t < 3; ++t)
    CHECK(std::abs(embed.vector[t] - truth.vector[t]) <= 0.05);
  CHECK_FALSE(embed.rank_grew);

  // the estimate reproduces the hidden column's probabilities directly
  std::size_t row = 0;
  for (std::size_t k = 0; k < table.num_interventions(); ++k)
    for (std::size_t i = 0; i < table.num_results(k); ++i, ++row) {
      const double predicted = dot(dec.result_vectors[row], embed.vector);
      CHECK(std::abs(predicted - full.entry(row, 6)) <= 0.05);
    }

  // the least-squares estimate respects the normalization hyperplane
  const auto e = *intervention_sum_vectors(dec).common_sum;
  CHECK(std::abs(dot(e, embed.vector) - 1.0) <= 1e-12);
}

TEST_CASE("disjunction probabilities are basis invariant") {
  const auto table = fixtures::example_table();
  const auto dec_a = decompose(table);
  const auto dec_b = decompose(table, fixtures::example_basis());
  for (std::size_t j = 0; j < 7; ++j) {
    CHECK(disjunction_within(dec_a, 0, 0, 1, j) ==
          disjunction_within(dec_b, 0, 0, 1, j));
    CHECK(disjunction_across(dec_a, 0, 0, 1, 0, q(1, 3), q(2, 3), j) ==
          disjunction_across(dec_b, 0, 0, 1, 0, q(1, 3), q(2, 3), j));
  }
}

TEST_CASE("a prior over known preparations adds the mixture vector") {
  const auto table = fixtures::example_table();
  const auto dec = decompose(table, fixtures::example_basis());
  ObservationSet obs;
  obs.add("M_1", "R_1", 3);
  obs.add("M_1", "R_2", 1);
  obs.add("M_2", "R_3", 3);
  obs.add("M_2", "R_4", 1);
  obs.add("M_3", "R_5", 2);
  const auto embed = embed_new_preparation(table, dec, obs,
                                           uniform_prior<Rational>(7));
  REQUIRE(embed.posterior_mixture.has_value());
  const auto e = *intervention_sum_vectors(dec).common_sum;
  CHECK(dot(e, *embed.posterior_mixture) == 1);
}

TEST_CASE("basis choice does not affect posteriors or predictions") {
  const auto table = fixtures::example_table();
  const auto dec_a = decompose(table);
  const auto dec_b = decompose(table, fixtures::example_basis());
  const auto obs = simulate_observations(table, 4, {{"M_1", 20}, {"M_2", 10}},
                                         5);
  const auto prior = uniform_prior<Rational>(7);
  const auto post = posterior(table, prior, obs);
  // posteriors live on the table, not the basis; predictions must match
  for (std::size_t k = 0; k < 3; ++k) {
    const auto via_a =
        predict_from_vector(dec_a, effective_vector(dec_a, post.weights), k);
    const auto via_b =
        predict_from_vector(dec_b, effective_vector(dec_b, post.weights), k);
    CHECK(via_a == via_b);
  }
}
