#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mvfcm/core.hpp"

namespace mvfcm {

/// Maximum-weight one-to-one matching between rows and columns of a
/// (possibly rectangular) weight matrix. Returns, per row, the matched column
/// or -1 when the row is left unmatched.
std::vector<int> max_weight_assignment(const Eigen::MatrixXd& weights);

/// Cluster-vs-class counts. Rows follow the sorted distinct cluster labels,
/// columns the sorted distinct class labels.
struct ContingencyTable {
    Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> counts;
    std::vector<std::int64_t> cluster_sizes;
    std::vector<std::int64_t> class_sizes;
    std::int64_t total = 0;
    std::vector<int> cluster_values;
    std::vector<int> class_values;

    /// Throws DataError when the label vectors differ in length or are empty.
    static ContingencyTable build(std::span<const int> labels, std::span<const int> truth);
};

/// Normalised mutual information with geometric-mean normalisation. A
/// single-cluster partition on either side yields 0 and a diagnostic.
double nmi(std::span<const int> labels, std::span<const int> truth, Diagnostics* diagnostics = nullptr);

/// Class-size-weighted best-match F-measure: sum_p (n_p/n) max_c F(c, p).
double f_measure(std::span<const int> labels, std::span<const int> truth);

/// Fraction of objects on the optimal one-to-one cluster/class matching.
double accuracy(std::span<const int> labels, std::span<const int> truth);
double accuracy(const ContingencyTable& table);

enum class StdDevKind { Population, Sample };

struct TrialSummary {
    double mean = 0.0;
    double stddev = 0.0;
};

/// Mean and standard deviation; the population divisor is the default. Throws on empty input.
TrialSummary aggregate_trials(std::span<const double> values, StdDevKind kind = StdDevKind::Population);

}  // namespace mvfcm
