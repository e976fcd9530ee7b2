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

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <variant>

#include <CLI11.hpp>

#include "probtable/io.hpp"

using namespace probtable;

namespace {

// exit codes: 0 success, 1 domain error, 2 input/parse error
constexpr int kOk = 0;
constexpr int kDomainError = 1;
constexpr int kInputError = 2;

template <class T>
std::string format_value(const T& v) {
  if constexpr (std::is_same_v<T, Rational>) {
    return format_rational(v);
  } else {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
  }
}

template <class T>
std::string format_vec(const std::vector<T>& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_value(v[i]);
  }
  return out + ")";
}

ValueMode parse_mode_flag(const std::string& mode) {
  if (mode == "exact") return ValueMode::Exact;
  if (mode == "float") return ValueMode::Floating;
  throw ParseError("--mode must be 'exact' or 'float'");
}

// Applies a requested mode to a freshly loaded table. Exact tables can be
// demoted to floating; the reverse would invent precision and is refused.
io::AnyTable coerce_mode(io::AnyTable table, const std::string& mode_flag) {
  if (mode_flag.empty()) return table;
  const ValueMode want = parse_mode_flag(mode_flag);
  if (io::mode_of(table) == want) return table;
  if (want == ValueMode::Floating)
    return to_float(std::get<Table<Rational>>(table));
  throw ParseError("cannot promote a floating table to exact mode");
}

Matrix<Rational> reference_basis_exact() {
  Matrix<Rational> x(3, 3);
  x(0, 0) = 1;  x(0, 1) = 1;  x(0, 2) = 1;
  x(1, 0) = 1;  x(1, 1) = 0;  x(1, 2) = -1;
  x(2, 0) = 0;  x(2, 1) = 1;  x(2, 2) = 0;
  return x;
}

template <class T>
std::optional<Matrix<T>> resolve_basis(const std::string& basis_flag,
                                       std::size_t rank) {
  if (basis_flag.empty() || basis_flag == "identity") return std::nullopt;
  if (basis_flag == "paper-example") {
    if (rank != 3)
      throw Error("the paper-example basis is 3x3 but the table has rank " +
                  std::to_string(rank));
    const auto xq = reference_basis_exact();
    Matrix<T> x(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) {
        if constexpr (std::is_same_v<T, Rational>) {
          x(i, j) = xq(i, j);
        } else {
          x(i, j) = to_double(xq(i, j));
        }
      }
    return x;
  }
  const auto loaded = io::load_matrix_json(basis_flag, Table<T>::mode());
  return std::get<Matrix<T>>(loaded);
}

struct CommonFlags {
  std::string mode;
  std::string out;
  bool json = false;
  Tolerances tol;
};

void add_tolerance_flags(CLI::App* cmd, Tolerances& tol) {
  cmd->add_option("--tol-norm", tol.norm, "column normalization tolerance");
  cmd->add_option("--tol-rec", tol.rec, "reconstruction tolerance");
  cmd->add_option("--tol-geo", tol.geo, "geometry tolerance");
  cmd->add_option("--tol-herm", tol.herm, "Hermiticity tolerance");
  cmd->add_option("--tol-psd", tol.psd, "positive-semidefinite tolerance");
  cmd->add_option("--tol-rank", tol.rank,
                  "singular-value threshold (0 = automatic)");
  cmd->add_option("--tol-pivot", tol.pivot,
                  "pivot magnitude threshold (0 = automatic)");
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

int run_validate(const std::string& path, const CommonFlags& flags) {
  const bool is_csv =
      path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
  const ValueMode csv_mode =
      flags.mode.empty() ? ValueMode::Exact : parse_mode_flag(flags.mode);
  io::TableLoadResult loaded =
      is_csv ? io::load_table_csv(path, csv_mode) : io::load_table_json(path);

  ValidationReport report = loaded.report;
  if (loaded.table)
    report = std::visit(
        [&](const auto& t) { return validate(t, flags.tol.norm); },
        *loaded.table);

  if (flags.json) {
    io::JsonWriter w;
    w.begin_object();
    w.key("valid").value(report.ok());
    w.key("findings");
    w.begin_array();
    for (const auto& f : report.findings) w.value(f.message);
    w.end_array();
    w.end_object();
    std::cout << w.take();
  } else {
    if (report.ok()) {
      std::cout << "valid\n";
    } else {
      for (const auto& f : report.findings)
        std::cout << "finding: " << f.message << "\n";
    }
  }
  return report.ok() ? kOk : kDomainError;
}

// ---------------------------------------------------------------------------
// decompose
// ---------------------------------------------------------------------------

template <class T>
int run_decompose_typed(const Table<T>& table, const std::string& basis_flag,
                        const CommonFlags& flags) {
  const std::size_t rank = numerical_rank(table, flags.tol.rank);
  const auto basis = resolve_basis<T>(basis_flag, rank);
  const auto dec = decompose(table, basis, flags.tol);

  const auto stats =
      compression_stats(table.num_rows(), table.num_preps(), dec.rank);
  std::cout << "K = " << dec.rank << "\n";
  std::cout << "stored entries: " << stats.compressed << " vs " << stats.original
            << " (saving " << stats.saving << ")\n";
  const auto sums = intervention_sum_vectors(dec, flags.tol.geo);
  if (sums.common_sum)
    std::cout << "common sum = " << format_vec(*sums.common_sum) << "\n";
  else
    std::cout << "common sum = none (sum vectors disagree)\n";
  std::cout << "prep affine dim = " << prep_affine_dimension(dec, flags.tol.rank)
            << "\n";

  if (!flags.out.empty())
    io::save_decomposition(flags.out, dec, flags.tol);
  return kOk;
}

int run_decompose(const std::string& path, const std::string& basis_flag,
                  const CommonFlags& flags) {
  const ValueMode csv_mode =
      flags.mode.empty() ? ValueMode::Exact : parse_mode_flag(flags.mode);
  auto table = coerce_mode(
      io::load_valid_table(path, csv_mode, flags.tol.norm), flags.mode);
  return std::visit(
      [&](const auto& t) { return run_decompose_typed(t, basis_flag, flags); },
      table);
}

// ---------------------------------------------------------------------------
// reconstruct
// ---------------------------------------------------------------------------

int run_reconstruct(const std::string& path, const CommonFlags& flags) {
  const auto dec = io::load_decomposition(path);
  const io::AnyTable table = std::visit(
      [&](const auto& d) -> io::AnyTable {
        return reconstruct(d, flags.tol.norm);
      },
      dec);
  std::visit(
      [&](const auto& t) {
        std::cout << "reconstructed " << t.num_rows() << "x" << t.num_preps()
                  << " table; validation "
                  << (validate(t, flags.tol.norm).ok() ? "clean" : "FAILED")
                  << "\n";
      },
      table);
  if (!flags.out.empty()) io::save_table(flags.out, table);
  return kOk;
}

// ---------------------------------------------------------------------------
// geometry
// ---------------------------------------------------------------------------

int run_geometry(const std::string& path, const CommonFlags& flags) {
  const auto dec_any = io::load_decomposition(path);
  return std::visit(
      [&](const auto& dec) {
        const auto geo = build_geometry_export(dec, flags.tol);
        const auto sums = intervention_sum_vectors(dec, flags.tol.geo);
        if (sums.common_sum)
          std::cout << "common sum = " << format_vec(*sums.common_sum) << "\n";
        else
          std::cout << "common sum = none (sum vectors disagree)\n";
        std::cout << "prep affine dim = " << geo.preps.affine_dim << "\n";
        std::cout << "result affine dim = " << geo.results.affine_dim << "\n";
        for (const auto& w : geo.warnings)
          std::cout << "warning: " << w << "\n";

        if (!flags.out.empty()) {
          std::string base = flags.out;
          if (base.size() > 5 && base.compare(base.size() - 5, 5, ".json") == 0)
            base.resize(base.size() - 5);
          io::write_file(
              base + ".json",
              io::geometry_to_json(geo, std::decay_t<decltype(dec)>::mode(),
                                   flags.tol));
          io::write_file(base + "_preps.off", io::family_to_off(geo.preps));
          io::write_file(base + "_results.off",
                         io::family_to_off(geo.results));
          std::cout << "wrote " << base << ".json, " << base << "_preps.off, "
                    << base << "_results.off\n";
        }
        return kOk;
      },
      dec_any);
}

// ---------------------------------------------------------------------------
// tomography
// ---------------------------------------------------------------------------

std::vector<ScheduleItem> parse_schedule(const std::string& spec,
                                         const std::vector<InterventionSpec>& ivs) {
  std::vector<ScheduleItem> schedule;
  std::string item;
  std::istringstream in(spec);
  while (std::getline(in, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos)
      throw ParseError("schedule items look like NAME:TRIALS or each:TRIALS");
    const std::string name = item.substr(0, colon);
    std::int64_t trials = 0;
    try {
      trials = std::stoll(item.substr(colon + 1));
    } catch (const std::exception&) {
      throw ParseError("invalid trial count in schedule item '" + item + "'");
    }
    if (name == "each") {
      for (const auto& iv : ivs) schedule.push_back({iv.name, trials});
    } else {
      schedule.push_back({name, trials});
    }
  }
  if (schedule.empty()) throw ParseError("empty schedule");
  return schedule;
}

template <class T>
int run_tomography_typed(const Table<T>& table, const std::string& truth,
                         const std::string& obs_path,
                         const std::string& schedule_spec,
                         const std::string& prior_path, std::uint64_t seed,
                         const CommonFlags& flags) {
  ObservationSet obs;
  if (!truth.empty()) {
    const auto prep = table.find_prep(truth);
    if (!prep) throw UnknownLabel("unknown preparation '" + truth + "'");
    obs = simulate_observations(
        table, *prep, parse_schedule(schedule_spec, table.interventions()),
        seed);
  } else if (!obs_path.empty()) {
    obs = io::load_observations(obs_path);
  } else {
    throw ParseError("tomography needs --truth or --observations");
  }

  std::vector<T> prior = prior_path.empty()
                             ? uniform_prior<T>(table.num_preps())
                             : io::load_prior<T>(prior_path, table);

  const auto dec = decompose(table, std::optional<Matrix<T>>{}, flags.tol);
  io::TomographyOutput<T> out;
  out.report = posterior(table, dec, prior, obs, flags.tol.norm);
  for (std::size_t k = 0; k < table.num_interventions(); ++k)
    out.predictions.push_back(predict(table, out.report.weights, k));
  out.observations = obs;

  std::size_t mode_idx = 0;
  for (std::size_t j = 1; j < table.num_preps(); ++j)
    if (out.report.weights[j] > out.report.weights[mode_idx]) mode_idx = j;
  std::cout << "posterior mode: " << table.preparations()[mode_idx] << " ("
            << format_value(out.report.weights[mode_idx]) << ")\n";
  std::cout << "log evidence: " << out.report.log_evidence << "\n";
  std::cout << "s_new = " << format_vec(*out.report.effective) << "\n";

  if (!flags.out.empty())
    io::write_file(flags.out, io::to_json(table, out, flags.tol));
  return kOk;
}

int run_tomography(const std::string& path, const std::string& truth,
                   const std::string& obs_path, const std::string& schedule,
                   const std::string& prior_path, std::uint64_t seed,
                   const CommonFlags& flags) {
  const ValueMode csv_mode =
      flags.mode.empty() ? ValueMode::Exact : parse_mode_flag(flags.mode);
  auto table = coerce_mode(
      io::load_valid_table(path, csv_mode, flags.tol.norm), flags.mode);
  return std::visit(
      [&](const auto& t) {
        return run_tomography_typed(t, truth, obs_path, schedule, prior_path,
                                    seed, flags);
      },
      table);
}

// ---------------------------------------------------------------------------
// quantum
// ---------------------------------------------------------------------------

int run_quantum(const std::string& preset, const std::string& model_path,
                int dim, const std::vector<double>& prep_angles,
                const std::vector<double>& purities,
                const std::vector<double>& filter_angles, bool include_mixed,
                const CommonFlags& flags) {
  quantum::QuantumModel model;
  if (!model_path.empty()) {
    model = io::load_quantum_model(model_path);
  } else if (preset == "qubit-polarization") {
    model = quantum::qubit_polarization_preset(prep_angles, purities,
                                               filter_angles);
    if (include_mixed) {
      model.state_labels.push_back("S_mixed");
      model.states.push_back(quantum::CMatrix::Identity(2, 2) / 2.0);
    }
  } else if (preset == "qubit-ic") {
    model = quantum::qubit_ic_preset();
  } else if (dim > 0) {
    model = quantum::computational_basis_model(dim);
  } else {
    throw ParseError("quantum needs --preset, --model or --dim");
  }

  const auto table = quantum::quantum_table(model, flags.tol);
  std::cout << "generated " << table.num_rows() << "x" << table.num_preps()
            << " table, rank " << numerical_rank(table, flags.tol.rank) << "\n";

  // spot values when the preset covers the well-known angle pairs
  const auto spot = [&](const char* prep, const char* filter) {
    const auto j = table.find_prep(prep);
    const auto k = table.find_intervention(filter);
    if (j && k) {
      std::cout << prep << " under " << filter << ": ("
                << format_value(table.entry(table.global_row(*k, 0), *j))
                << ", "
                << format_value(table.entry(table.global_row(*k, 1), *j))
                << ")\n";
    }
  };
  spot("S_0", "M_45");
  spot("S_0", "M_60");
  spot("S_45", "M_60");

  if (!flags.out.empty()) io::save_table(flags.out, table);
  return kOk;
}

// ---------------------------------------------------------------------------
// from-counts
// ---------------------------------------------------------------------------

int run_from_counts(const std::string& path, std::int64_t min_count,
                    const CommonFlags& flags) {
  const auto grid = io::load_counts_grid(path);
  const ValueMode mode =
      flags.mode.empty() ? ValueMode::Exact : parse_mode_flag(flags.mode);
  io::AnyTable table = [&]() -> io::AnyTable {
    if (mode == ValueMode::Exact) {
      auto result = table_from_counts<Rational>(grid.counts, grid.preparations,
                                                grid.interventions, min_count);
      for (const auto& w : result.report.warnings)
        std::cout << "warning: " << w.message << "\n";
      return result.table;
    }
    auto result = table_from_counts<double>(grid.counts, grid.preparations,
                                            grid.interventions, min_count);
    for (const auto& w : result.report.warnings)
      std::cout << "warning: " << w.message << "\n";
    return result.table;
  }();
  std::visit(
      [&](const auto& t) {
        std::cout << "estimated " << t.num_rows() << "x" << t.num_preps()
                  << " table from counts\n";
      },
      table);
  if (!flags.out.empty()) io::save_table(flags.out, table);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "probability-table toolkit: validation, rank decomposition, vector "
      "geometry, Bayesian preparation tomography and quantum-model table "
      "generation"};
  app.require_subcommand(1);

  std::string table_path, basis_flag = "identity", truth, obs_path;
  std::string schedule = "each:1000", prior_path, model_path, preset;
  std::string dec_path, counts_path;
  std::uint64_t seed = 1;
  int dim = 0;
  std::int64_t min_count = 10;
  std::vector<double> prep_angles{0, 45, 90, 135};
  std::vector<double> purities{1.0};
  std::vector<double> filter_angles{0, 30, 45, 60};
  bool include_mixed = true;
  CommonFlags flags;

  auto* validate_cmd =
      app.add_subcommand("validate", "check a table file's invariants");
  validate_cmd->add_option("table", table_path, "table file (.json or .csv)")
      ->required();
  validate_cmd->add_option("--mode", flags.mode, "value mode for CSV input");
  validate_cmd->add_flag("--json", flags.json, "machine-readable report");
  add_tolerance_flags(validate_cmd, flags.tol);

  auto* decompose_cmd = app.add_subcommand(
      "decompose", "factor a table into preparation and result vectors");
  decompose_cmd->add_option("table", table_path, "table file")->required();
  decompose_cmd->add_option(
      "--basis", basis_flag,
      "identity | paper-example | path to a K x K matrix file");
  decompose_cmd->add_option("--mode", flags.mode, "force exact or float mode");
  decompose_cmd->add_option("--out", flags.out, "decomposition output path");
  add_tolerance_flags(decompose_cmd, flags.tol);

  auto* reconstruct_cmd = app.add_subcommand(
      "reconstruct", "rebuild the table from a decomposition");
  reconstruct_cmd->add_option("decomposition", dec_path, "decomposition file")
      ->required();
  reconstruct_cmd->add_option("--out", flags.out, "table output path");
  add_tolerance_flags(reconstruct_cmd, flags.tol);

  auto* geometry_cmd = app.add_subcommand(
      "geometry", "sum vectors, hyperplane, affine dims and hull exports");
  geometry_cmd->add_option("decomposition", dec_path, "decomposition file")
      ->required();
  geometry_cmd->add_option("--out", flags.out,
                           "output base name (.json and .off files)");
  add_tolerance_flags(geometry_cmd, flags.tol);

  auto* tomography_cmd = app.add_subcommand(
      "tomography", "Bayesian inference of an unknown preparation");
  tomography_cmd->add_option("table", table_path, "table file")->required();
  tomography_cmd->add_option("--truth", truth,
                             "simulate data from this preparation");
  tomography_cmd->add_option("--observations", obs_path,
                             "observation file (instead of --truth)");
  tomography_cmd->add_option("--schedule", schedule,
                             "e.g. each:1000 or M_1:500,M_2:200");
  tomography_cmd->add_option("--seed", seed, "simulation seed");
  tomography_cmd->add_option("--prior", prior_path,
                             "prior weights file (default uniform)");
  tomography_cmd->add_option("--mode", flags.mode, "force exact or float mode");
  tomography_cmd->add_option("--out", flags.out, "posterior report path");
  add_tolerance_flags(tomography_cmd, flags.tol);

  auto* quantum_cmd = app.add_subcommand(
      "quantum", "generate a table from a quantum model");
  quantum_cmd->add_option("--preset", preset,
                          "qubit-polarization | qubit-ic");
  quantum_cmd->add_option("--model", model_path, "model file (re/im matrices)");
  quantum_cmd->add_option("--dim", dim, "computational-basis model dimension");
  quantum_cmd->add_option("--prep-angles", prep_angles,
                          "polarization angles in degrees");
  quantum_cmd->add_option("--purities", purities,
                          "one purity, or one per angle");
  quantum_cmd->add_option("--filter-angles", filter_angles,
                          "filter angles in degrees");
  quantum_cmd->add_flag("--include-mixed,!--no-mixed", include_mixed,
                        "append the fully mixed state to the preset");
  quantum_cmd->add_option("--out", flags.out, "table output path");
  add_tolerance_flags(quantum_cmd, flags.tol);

  auto* counts_cmd = app.add_subcommand(
      "from-counts", "estimate a table from observed counts");
  counts_cmd->add_option("counts", counts_path, "count grid file")->required();
  counts_cmd->add_option("--mode", flags.mode, "exact (default) or float");
  counts_cmd->add_option("--min-count", min_count,
                         "cell totals below this raise LowCount warnings");
  counts_cmd->add_option("--out", flags.out, "table output path");
  add_tolerance_flags(counts_cmd, flags.tol);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (app.got_subcommand(validate_cmd))
      return run_validate(table_path, flags);
    if (app.got_subcommand(decompose_cmd))
      return run_decompose(table_path, basis_flag, flags);
    if (app.got_subcommand(reconstruct_cmd))
      return run_reconstruct(dec_path, flags);
    if (app.got_subcommand(geometry_cmd)) return run_geometry(dec_path, flags);
    if (app.got_subcommand(tomography_cmd))
      return run_tomography(table_path, truth, obs_path, schedule, prior_path,
                            seed, flags);
    if (app.got_subcommand(quantum_cmd))
      return run_quantum(preset, model_path, dim, prep_angles, purities,
                         filter_angles, include_mixed, flags);
    if (app.got_subcommand(counts_cmd))
      return run_from_counts(counts_path, min_count, flags);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomainError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomainError;
  }
  return kOk;
}
