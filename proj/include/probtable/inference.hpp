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

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "probtable/decompose.hpp"
#include "probtable/geometry.hpp"
#include "probtable/table.hpp"

namespace probtable {

/// Identifier of the categorical sampler: raw mt19937_64 output mapped
/// through the inverse CDF, which is platform-stable and reproducible.
inline constexpr const char* kRngAlgorithm = "mt19937_64/inverse-cdf";

/// Outcome counts from repeated trials of one (unknown) preparation.
struct ObservationSet {
  struct Entry {
    std::string intervention;
    std::string result;
    std::int64_t count = 0;
  };
  std::vector<Entry> entries;

  // provenance, carried through serialization when present
  std::optional<std::uint64_t> seed;
  std::optional<std::string> rng_algorithm;
  std::optional<std::string> true_prep;

  void add(const std::string& intervention, const std::string& result,
           std::int64_t count) {
    for (auto& e : entries) {
      if (e.intervention == intervention && e.result == result) {
        e.count += count;
        return;
      }
    }
    entries.push_back({intervention, result, count});
  }

  std::int64_t total() const {
    std::int64_t t = 0;
    for (const auto& e : entries) t += e.count;
    return t;
  }

  ObservationSet merged_with(const ObservationSet& other) const {
    ObservationSet out = *this;
    for (const auto& e : other.entries)
      out.add(e.intervention, e.result, e.count);
    return out;
  }
};

struct ResolvedCounts {
  std::vector<std::int64_t> row_counts;          // length L
  std::vector<std::int64_t> intervention_totals;  // length #interventions
};

template <class T>
ResolvedCounts resolve_observations(const Table<T>& table,
                                    const ObservationSet& obs) {
  ResolvedCounts out;
  out.row_counts.assign(table.num_rows(), 0);
  out.intervention_totals.assign(table.num_interventions(), 0);
  for (const auto& e : obs.entries) {
    if (e.count < 0)
      throw Error("negative observation count for (" + e.intervention + ", " +
                  e.result + ")");
    auto k = table.find_intervention(e.intervention);
    if (!k) throw UnknownLabel("unknown intervention '" + e.intervention + "'");
    auto i = table.find_result(*k, e.result);
    if (!i)
      throw UnknownLabel("unknown result '" + e.result + "' in intervention '" +
                         e.intervention + "'");
    out.row_counts[table.global_row(*k, *i)] += e.count;
    out.intervention_totals[*k] += e.count;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Disjunction probabilities
// ---------------------------------------------------------------------------

/// P(R_i or R_i' | same intervention, preparation j) = (r_i + r_i') . s_j.
template <class T>
T disjunction_within(const Decomposition<T>& dec, std::size_t k,
                     std::size_t result_a, std::size_t result_b,
                     std::size_t prep) {
  if (k >= dec.interventions.size())
    throw UnknownLabel("intervention index out of range");
  const std::size_t nres = dec.interventions[k].results.size();
  if (result_a >= nres || result_b >= nres)
    throw ResultsNotSameIntervention(
        "both results must belong to intervention '" +
        dec.interventions[k].name + "'");
  if (result_a == result_b)
    throw Error("disjunction requires two distinct results");
  const std::size_t base = dec.row_offset(k);
  std::vector<T> sum(dec.rank);
  for (std::size_t t = 0; t < dec.rank; ++t)
    sum[t] = dec.result_vectors[base + result_a][t] +
             dec.result_vectors[base + result_b][t];
  return dot(sum, dec.prep_vectors.at(prep));
}

/// P(R' or R'') for results of two different interventions, weighted by
/// the caller-supplied intervention probabilities (the table itself is
/// silent about those). Weights must be nonnegative and sum to one.
template <class T>
T disjunction_across(const Decomposition<T>& dec, std::size_t k1,
                     std::size_t result_1, std::size_t k2,
                     std::size_t result_2, const T& weight_1,
                     const T& weight_2, std::size_t prep,
                     double tol_norm = Tolerances{}.norm) {
  if (k1 == k2)
    throw SameIntervention(
        "cross-intervention disjunction needs two different interventions");
  if (k1 >= dec.interventions.size() || k2 >= dec.interventions.size())
    throw UnknownLabel("intervention index out of range");
  if (weight_1 < T(0) || weight_2 < T(0) ||
      !is_zero(T(weight_1 + weight_2 - T(1)), tol_norm))
    throw WeightsNotNormalized("intervention weights must be >= 0 and sum to 1");
  const std::size_t row_1 = dec.row_offset(k1) + result_1;
  const std::size_t row_2 = dec.row_offset(k2) + result_2;
  std::vector<T> mix(dec.rank);
  for (std::size_t t = 0; t < dec.rank; ++t)
    mix[t] = weight_1 * dec.result_vectors.at(row_1)[t] +
             weight_2 * dec.result_vectors.at(row_2)[t];
  return dot(mix, dec.prep_vectors.at(prep));
}

// ---------------------------------------------------------------------------
// Bayesian preparation tomography
// ---------------------------------------------------------------------------

template <class T>
std::vector<T> uniform_prior(std::size_t m) {
  if constexpr (std::is_same_v<T, Rational>) {
    return std::vector<T>(m, Rational(1, static_cast<long>(m)));
  } else {
    return std::vector<T>(m, 1.0 / static_cast<double>(m));
  }
}

template <class T>
void check_prior(const std::vector<T>& prior, std::size_t m,
                 double tol_norm = Tolerances{}.norm) {
  if (prior.size() != m)
    throw DimensionMismatch("prior length does not match preparations");
  T sum{};
  for (const auto& w : prior) {
    if (w < T(0)) throw WeightsNotNormalized("prior has a negative weight");
    sum += w;
  }
  if (!is_zero(T(sum - T(1)), tol_norm))
    throw WeightsNotNormalized("prior weights sum to " + value_to_string(sum));
}

template <class T>
struct LikelihoodValue {
  T value{};         // exact in rational mode; may underflow in float mode
  double log_value;  // -inf when the data are impossible
};

/// P(D | S_j) = product over observed (intervention, result) pairs of
/// p_ij ^ count. The log form is always computed alongside.
template <class T>
LikelihoodValue<T> likelihood(const Table<T>& table, std::size_t prep,
                              const ObservationSet& obs) {
  const auto resolved = resolve_observations(table, obs);
  LikelihoodValue<T> out;
  out.value = T(1);
  out.log_value = 0.0;
  for (std::size_t row = 0; row < table.num_rows(); ++row) {
    const std::int64_t n = resolved.row_counts[row];
    if (n == 0) continue;
    const T& p = table.entry(row, prep);
    if constexpr (std::is_same_v<T, Rational>) {
      out.value *= rational_pow(p, static_cast<std::uint64_t>(n));
    } else {
      out.value *= std::pow(p, static_cast<double>(n));
    }
    const double pd = to_double(p);
    out.log_value += pd > 0.0 ? static_cast<double>(n) * std::log(pd)
                              : -std::numeric_limits<double>::infinity();
  }
  return out;
}

template <class T>
struct PosteriorReport {
  std::vector<T> weights;   // over preparations, normalized
  double log_evidence = 0;  // log sum_j P(D|S_j) P(S_j)
  std::optional<std::vector<T>> effective;  // s_new, with a decomposition
};

namespace detail {

inline double log_sum_exp(const std::vector<double>& logs) {
  double m = -std::numeric_limits<double>::infinity();
  for (double l : logs) m = std::max(m, l);
  if (!std::isfinite(m)) return m;
  double acc = 0.0;
  for (double l : logs) acc += std::exp(l - m);
  return m + std::log(acc);
}

}  // namespace detail

/// Bayes' rule over the preparations: posterior(j) is proportional to
/// P(D|S_j) P(S_j). Exact arithmetic in rational mode; log-space with a
/// max shift in floating mode.
template <class T>
PosteriorReport<T> posterior(const Table<T>& table, const std::vector<T>& prior,
                             const ObservationSet& obs,
                             double tol_norm = Tolerances{}.norm) {
  const std::size_t m = table.num_preps();
  check_prior(prior, m, tol_norm);

  std::vector<double> log_terms(m);
  PosteriorReport<T> report;
  report.weights.assign(m, T{});

  if constexpr (std::is_same_v<T, Rational>) {
    std::vector<Rational> terms(m);
    Rational evidence = 0;
    for (std::size_t j = 0; j < m; ++j) {
      const auto like = likelihood(table, j, obs);
      terms[j] = like.value * prior[j];
      evidence += terms[j];
      const double lp = to_double(prior[j]);
      log_terms[j] = like.log_value +
                     (lp > 0.0 ? std::log(lp)
                               : -std::numeric_limits<double>::infinity());
    }
    if (evidence == 0)
      throw ZeroEvidence("observed data are impossible under every "
                         "preparation with nonzero prior");
    for (std::size_t j = 0; j < m; ++j) report.weights[j] = terms[j] / evidence;
  } else {
    for (std::size_t j = 0; j < m; ++j) {
      const auto like = likelihood(table, j, obs);
      log_terms[j] = like.log_value +
                     (prior[j] > 0.0 ? std::log(prior[j])
                                     : -std::numeric_limits<double>::infinity());
    }
    double max_log = -std::numeric_limits<double>::infinity();
    for (double l : log_terms) max_log = std::max(max_log, l);
    if (!std::isfinite(max_log))
      throw ZeroEvidence("observed data are impossible under every "
                         "preparation with nonzero prior");
    double norm = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      report.weights[j] = std::exp(log_terms[j] - max_log);
      norm += report.weights[j];
    }
    for (auto& w : report.weights) w /= norm;
  }
  report.log_evidence = detail::log_sum_exp(log_terms);
  return report;
}

/// s_new = sum_j s_j * weight_j: the vector effectively associated with
/// an unknown preparation after inference.
template <class T>
std::vector<T> effective_vector(const Decomposition<T>& dec,
                                const std::vector<T>& weights) {
  if (weights.size() != dec.num_preps())
    throw DimensionMismatch("weights length does not match preparations");
  std::vector<T> s(dec.rank, T{});
  for (std::size_t j = 0; j < weights.size(); ++j)
    for (std::size_t t = 0; t < dec.rank; ++t)
      s[t] += dec.prep_vectors[j][t] * weights[j];
  return s;
}

template <class T>
PosteriorReport<T> posterior(const Table<T>& table, const Decomposition<T>& dec,
                             const std::vector<T>& prior,
                             const ObservationSet& obs,
                             double tol_norm = Tolerances{}.norm) {
  auto report = posterior(table, prior, obs, tol_norm);
  report.effective = effective_vector(dec, report.weights);
  return report;
}

/// Predictive distribution over intervention k's results:
/// P(R_i) = sum_j p_ij * weight_j.
template <class T>
std::vector<T> predict(const Table<T>& table, const std::vector<T>& weights,
                       std::size_t k) {
  if (weights.size() != table.num_preps())
    throw DimensionMismatch("weights length does not match preparations");
  const std::size_t base = table.row_offset(k);
  std::vector<T> out(table.num_results(k), T{});
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = 0; j < weights.size(); ++j)
      out[i] += table.entry(base + i, j) * weights[j];
  return out;
}

/// Same prediction via the effective vector: P(R_i) = r_i . s_new.
template <class T>
std::vector<T> predict_from_vector(const Decomposition<T>& dec,
                                   const std::vector<T>& s_new,
                                   std::size_t k) {
  const std::size_t base = dec.row_offset(k);
  const std::size_t nres = dec.interventions.at(k).results.size();
  std::vector<T> out(nres);
  for (std::size_t i = 0; i < nres; ++i)
    out[i] = dot(dec.result_vectors[base + i], s_new);
  return out;
}

// ---------------------------------------------------------------------------
// Embedding a brand-new preparation
// ---------------------------------------------------------------------------

template <class T>
struct EmbedResult {
  std::vector<T> vector;  // estimated preparation vector, length K
  bool rank_grew = false;
  std::size_t rank_covered = 0;    // rank of the table rows actually probed
  std::size_t rank_augmented = 0;  // same rows with the frequency column
  double max_residual = 0.0;       // max |r_i . s - f_i| over probed rows
  std::optional<std::vector<T>> posterior_mixture;  // from prior over knowns
};

/// Associates a vector with a preparation that has no table column yet.
/// Frequencies estimated per covered intervention are matched against the
/// existing result vectors (exactly in rational mode, least squares on
/// the normalization hyperplane in floating mode). The rank check reports
/// whether appending the frequency column would raise the table's rank,
/// which would mean the new phenomenon does not fit this decomposition.
template <class T>
EmbedResult<T> embed_new_preparation(
    const Table<T>& table, const Decomposition<T>& dec,
    const ObservationSet& obs,
    const std::optional<std::vector<T>>& prior_over_known = std::nullopt,
    const Tolerances& tol = {}) {
  const auto resolved = resolve_observations(table, obs);
  const std::size_t k_rank = dec.rank;

  std::vector<std::size_t> covered_rows;
  for (std::size_t k = 0; k < table.num_interventions(); ++k) {
    if (resolved.intervention_totals[k] == 0) continue;
    for (std::size_t i = 0; i < table.num_results(k); ++i)
      covered_rows.push_back(table.global_row(k, i));
  }
  if (covered_rows.empty())
    throw InsufficientCoverage("no intervention has any observations");

  // stacked result vectors and estimated frequencies over covered rows
  Matrix<T> a(covered_rows.size(), k_rank);
  std::vector<T> freq(covered_rows.size());
  for (std::size_t r = 0; r < covered_rows.size(); ++r) {
    const std::size_t row = covered_rows[r];
    for (std::size_t t = 0; t < k_rank; ++t)
      a(r, t) = dec.result_vectors[row][t];
    const std::size_t k = table.intervention_of_row(row);
    if constexpr (std::is_same_v<T, Rational>) {
      freq[r] = Rational(resolved.row_counts[row],
                         resolved.intervention_totals[k]);
    } else {
      freq[r] = static_cast<double>(resolved.row_counts[row]) /
                static_cast<double>(resolved.intervention_totals[k]);
    }
  }

  if (matrix_rank(a, tol.rank) < k_rank)
    throw InsufficientCoverage(
        "observed interventions span only " +
        std::to_string(matrix_rank(a, tol.rank)) + " of " +
        std::to_string(k_rank) + " result-vector dimensions");

  EmbedResult<T> out;
  if constexpr (std::is_same_v<T, Rational>) {
    const auto pick = first_independent_rows(a);
    const std::vector<std::size_t> rows(pick.begin(), pick.begin() + k_rank);
    std::vector<std::size_t> all_cols(k_rank);
    for (std::size_t t = 0; t < k_rank; ++t) all_cols[t] = t;
    Matrix<Rational> square = a.submatrix(rows, all_cols);
    Matrix<Rational> rhs(k_rank, 1);
    for (std::size_t t = 0; t < k_rank; ++t) rhs(t, 0) = freq[rows[t]];
    const Matrix<Rational> sol = solve(square, rhs);
    out.vector.resize(k_rank);
    for (std::size_t t = 0; t < k_rank; ++t) out.vector[t] = sol(t, 0);
  } else {
    Matrix<double> ad(covered_rows.size(), k_rank);
    std::vector<double> fd(covered_rows.size());
    for (std::size_t r = 0; r < covered_rows.size(); ++r) {
      fd[r] = to_double(freq[r]);
      for (std::size_t t = 0; t < k_rank; ++t) ad(r, t) = to_double(a(r, t));
    }
    const auto sums = intervention_sum_vectors(dec, tol.geo);
    if (sums.common_sum) {
      out.vector = least_squares_on_hyperplane(ad, fd, *sums.common_sum, 1.0);
    } else {
      out.vector = least_squares(ad, fd);
    }
  }

  for (std::size_t r = 0; r < covered_rows.size(); ++r) {
    const T res = dot(a.row(r), out.vector) - freq[r];
    out.max_residual = std::max(out.max_residual, std::abs(to_double(res)));
  }

  // would the frequency column raise the rank of the probed sub-table?
  Matrix<T> probed(covered_rows.size(), table.num_preps());
  Matrix<T> augmented(covered_rows.size(), table.num_preps() + 1);
  for (std::size_t r = 0; r < covered_rows.size(); ++r) {
    for (std::size_t j = 0; j < table.num_preps(); ++j) {
      probed(r, j) = table.entry(covered_rows[r], j);
      augmented(r, j) = probed(r, j);
    }
    augmented(r, table.num_preps()) = freq[r];
  }
  out.rank_covered = matrix_rank(probed, tol.rank);
  out.rank_augmented = matrix_rank(augmented, tol.rank);
  out.rank_grew = out.rank_augmented > out.rank_covered;

  if (prior_over_known) {
    const auto post = posterior(table, *prior_over_known, obs, tol.norm);
    out.posterior_mixture = effective_vector(dec, post.weights);
  }
  return out;
}

template <class T>
EmbedResult<T> embed_new_preparation(const Table<T>& table,
                                     const Decomposition<T>& dec,
                                     const ObservationSet& obs,
                                     const std::vector<T>& prior_over_known,
                                     const Tolerances& tol = {}) {
  return embed_new_preparation(
      table, dec, obs, std::optional<std::vector<T>>(prior_over_known), tol);
}

// ---------------------------------------------------------------------------
// Seeded experiment simulation
// ---------------------------------------------------------------------------

struct ScheduleItem {
  std::string intervention;
  std::int64_t trials = 0;
};

/// Draws categorical outcomes from column `prep`, one intervention block
/// at a time, using the documented platform-stable sampler. Identical
/// seeds give identical observation sets.
template <class T>
ObservationSet simulate_observations(const Table<T>& table, std::size_t prep,
                                     const std::vector<ScheduleItem>& schedule,
                                     std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::vector<std::int64_t> row_counts(table.num_rows(), 0);
  std::vector<bool> touched(table.num_interventions(), false);

  for (const auto& item : schedule) {
    auto k = table.find_intervention(item.intervention);
    if (!k) throw UnknownLabel("unknown intervention '" + item.intervention + "'");
    if (item.trials < 0) throw Error("negative trial count in schedule");
    touched[*k] = true;
    const std::size_t base = table.row_offset(*k);
    const std::size_t nres = table.num_results(*k);

    if constexpr (std::is_same_v<T, Rational>) {
      // exact inverse CDF: compare the raw 64-bit draw against
      // cumulative * 2^64
      std::vector<Rational> thresholds(nres);
      Rational cum = 0;
      const Rational two64 = Rational(BigInt(1) << 64);
      for (std::size_t i = 0; i < nres; ++i) {
        cum += table.entry(base + i, prep);
        thresholds[i] = cum * two64;
      }
      for (std::int64_t t = 0; t < item.trials; ++t) {
        const Rational draw{BigInt(engine())};
        std::size_t pick = nres - 1;
        for (std::size_t i = 0; i < nres; ++i) {
          if (draw < thresholds[i]) {
            pick = i;
            break;
          }
        }
        ++row_counts[base + pick];
      }
    } else {
      std::vector<double> thresholds(nres);
      double cum = 0.0;
      for (std::size_t i = 0; i < nres; ++i) {
        cum += table.entry(base + i, prep);
        thresholds[i] = cum;
      }
      for (std::int64_t t = 0; t < item.trials; ++t) {
        const double u =
            static_cast<double>(engine() >> 11) * 0x1.0p-53;  // [0, 1)
        std::size_t pick = nres - 1;
        for (std::size_t i = 0; i < nres; ++i) {
          if (u < thresholds[i]) {
            pick = i;
            break;
          }
        }
        ++row_counts[base + pick];
      }
    }
  }

  ObservationSet out;
  for (std::size_t k = 0; k < table.num_interventions(); ++k) {
    if (!touched[k]) continue;
    for (std::size_t i = 0; i < table.num_results(k); ++i)
      out.add(table.intervention(k).name, table.intervention(k).results[i],
              row_counts[table.global_row(k, i)]);
  }
  out.seed = seed;
  out.rng_algorithm = kRngAlgorithm;
  out.true_prep = table.preparations().at(prep);
  return out;
}

}  // namespace probtable
