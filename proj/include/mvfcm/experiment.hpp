#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mvfcm/core.hpp"
#include "mvfcm/io.hpp"
#include "mvfcm/metrics.hpp"

namespace mvfcm {

/// A multi-seed sweep over algorithms and chunk fractions.
struct ExperimentSpec {
    std::vector<std::filesystem::path> view_paths;
    std::optional<std::filesystem::path> label_path;
    std::vector<Algorithm> algorithms;
    std::vector<double> chunk_fractions;
    std::size_t trials = 1;
    std::uint64_t base_seed = 0;
    /// k, m, gamma, epsilon, max_iters, normalize and friends. Seed, algorithm
    /// and chunk_fraction are overwritten per cell.
    RunConfig run;

    /// Throws ConfigError when trials == 0 or a fraction lies outside (0, 1].
    void validate() const;
};

/// Keys: views, labels, algorithms, chunk_fractions, trials, base_seed, k, m,
/// gamma, epsilon, max_iters, normalize, weighted_phase2, workers.
/// Relative paths resolve against `base_dir`.
ExperimentSpec experiment_spec_from(const KeyValues& values, const std::filesystem::path& base_dir = {});

struct ResultRow {
    Algorithm algorithm = Algorithm::IminimaxFCM1;
    double chunk_fraction = 1.0;
    TrialSummary accuracy;
    TrialSummary nmi;
    TrialSummary f_measure;
    double mean_seconds = 0.0;
    std::size_t trials = 0;
    /// Set when a trial of this cell failed; the metrics are then left at zero.
    std::optional<std::string> error;
};

struct ResultTable {
    std::vector<ResultRow> rows;
};

/// Runs every (algorithm, fraction) cell for trials t = 0..trials-1 with seed
/// base_seed + t. A failing cell is recorded in its row and the sweep continues.
ResultTable run_experiment(const ExperimentSpec& spec);
/// Same, on an already loaded dataset; it must carry labels.
ResultTable run_experiment(const ExperimentSpec& spec, const MultiViewDataset& data);

enum class TableFormat { Plain, Csv, Json };

/// Throws ConfigError for anything but plain, csv or json.
TableFormat parse_table_format(std::string_view name);

/// Deterministic text. Plain prints mean(std) at 4 decimals; csv and json keep
/// full precision. Wall-clock seconds are only written when `include_timing` is set.
std::string emit_table(const ResultTable& table, TableFormat format, bool include_timing = false);

/// Inverses of the csv and json emitters, used to check round trips.
ResultTable parse_table_csv(const std::string& text);
ResultTable parse_table_json(const std::string& text);

}  // namespace mvfcm
