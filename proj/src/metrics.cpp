#include "mvfcm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace mvfcm {

namespace {

// Shortest augmenting path Hungarian method on an n x m cost matrix, n <= m.
// Returns the column assigned to each row. Index 0 is a sentinel in the
// potential and ownership arrays.
std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost) {
    const auto n = static_cast<std::size_t>(cost.rows());
    const auto m = static_cast<std::size_t>(cost.cols());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
    std::vector<std::size_t> owner(m + 1, 0), way(m + 1, 0);

    for (std::size_t row = 1; row <= n; ++row) {
        owner[0] = row;
        std::size_t col0 = 0;
        std::vector<double> minv(m + 1, inf);
        std::vector<bool> used(m + 1, false);
        do {
            used[col0] = true;
            const std::size_t row0 = owner[col0];
            double delta = inf;
            std::size_t col1 = 0;
            for (std::size_t j = 1; j <= m; ++j) {
                if (used[j]) continue;
                const double cur = cost(static_cast<Eigen::Index>(row0 - 1), static_cast<Eigen::Index>(j - 1)) - u[row0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = col0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    col1 = j;
                }
            }
            for (std::size_t j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            col0 = col1;
        } while (owner[col0] != 0);
        do {
            const std::size_t col1 = way[col0];
            owner[col0] = owner[col1];
            col0 = col1;
        } while (col0 != 0);
    }

    std::vector<int> match(n, -1);
    for (std::size_t j = 1; j <= m; ++j) {
        if (owner[j] != 0) match[owner[j] - 1] = static_cast<int>(j - 1);
    }
    return match;
}

}  // namespace

std::vector<int> max_weight_assignment(const Eigen::MatrixXd& weights) {
    if (weights.size() == 0) return std::vector<int>(static_cast<std::size_t>(weights.rows()), -1);
    if (weights.rows() <= weights.cols()) return min_cost_assignment(-weights);

    const auto by_col = min_cost_assignment(-weights.transpose());
    std::vector<int> match(static_cast<std::size_t>(weights.rows()), -1);
    for (std::size_t j = 0; j < by_col.size(); ++j) {
        if (by_col[j] >= 0) match[static_cast<std::size_t>(by_col[j])] = static_cast<int>(j);
    }
    return match;
}

ContingencyTable ContingencyTable::build(std::span<const int> labels, std::span<const int> truth) {
    if (labels.size() != truth.size()) throw DataError("label and truth vectors differ in length");
    if (labels.empty()) throw DataError("cannot evaluate an empty labelling");

    std::map<int, Eigen::Index> rows, cols;
    for (int l : labels) rows.emplace(l, 0);
    for (int t : truth) cols.emplace(t, 0);
    ContingencyTable table;
    for (auto& [value, index] : rows) {
        index = static_cast<Eigen::Index>(table.cluster_values.size());
        table.cluster_values.push_back(value);
    }
    for (auto& [value, index] : cols) {
        index = static_cast<Eigen::Index>(table.class_values.size());
        table.class_values.push_back(value);
    }
    table.counts.setZero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < labels.size(); ++i) ++table.counts(rows.at(labels[i]), cols.at(truth[i]));

    table.cluster_sizes.resize(rows.size());
    table.class_sizes.resize(cols.size());
    for (Eigen::Index c = 0; c < table.counts.rows(); ++c) table.cluster_sizes[static_cast<std::size_t>(c)] = table.counts.row(c).sum();
    for (Eigen::Index p = 0; p < table.counts.cols(); ++p) table.class_sizes[static_cast<std::size_t>(p)] = table.counts.col(p).sum();
    table.total = static_cast<std::int64_t>(labels.size());
    return table;
}

double nmi(std::span<const int> labels, std::span<const int> truth, Diagnostics* diagnostics) {
    const auto table = ContingencyTable::build(labels, truth);
    if (table.cluster_sizes.size() < 2 || table.class_sizes.size() < 2) {
        if (diagnostics) diagnostics->push_back("degenerate partition: NMI denominator is zero, reporting 0");
        return 0.0;
    }
    // Identical partitions up to relabelling: the value is exactly 1.
    if (table.counts.rows() == table.counts.cols() &&
        ((table.counts.array() != 0).cast<int>().rowwise().sum() == 1).all() &&
        ((table.counts.array() != 0).cast<int>().colwise().sum() == 1).all()) {
        return 1.0;
    }
    const auto n = static_cast<double>(table.total);
    double mutual = 0.0;
    for (Eigen::Index c = 0; c < table.counts.rows(); ++c) {
        for (Eigen::Index p = 0; p < table.counts.cols(); ++p) {
            const auto ncp = static_cast<double>(table.counts(c, p));
            if (ncp == 0.0) continue;
            const auto nc = static_cast<double>(table.cluster_sizes[static_cast<std::size_t>(c)]);
            const auto np = static_cast<double>(table.class_sizes[static_cast<std::size_t>(p)]);
            mutual += ncp * std::log((n * ncp) / (nc * np));
        }
    }
    double h_clusters = 0.0, h_classes = 0.0;
    for (auto nc : table.cluster_sizes) h_clusters += static_cast<double>(nc) * std::log(static_cast<double>(nc) / n);
    for (auto np : table.class_sizes) h_classes += static_cast<double>(np) * std::log(static_cast<double>(np) / n);
    const double value = mutual / std::sqrt(h_clusters * h_classes);
    return std::clamp(value, 0.0, 1.0);
}

double f_measure(std::span<const int> labels, std::span<const int> truth) {
    const auto table = ContingencyTable::build(labels, truth);
    const auto n = static_cast<double>(table.total);
    double total = 0.0;
    for (Eigen::Index p = 0; p < table.counts.cols(); ++p) {
        const auto np = static_cast<double>(table.class_sizes[static_cast<std::size_t>(p)]);
        double best = 0.0;
        for (Eigen::Index c = 0; c < table.counts.rows(); ++c) {
            const auto ncp = static_cast<double>(table.counts(c, p));
            const auto nc = static_cast<double>(table.cluster_sizes[static_cast<std::size_t>(c)]);
            if (ncp == 0.0 || nc == 0.0) continue;
            const double precision = ncp / nc;
            const double recall = ncp / np;
            best = std::max(best, 2.0 * precision * recall / (precision + recall));
        }
        total += np / n * best;
    }
    return total;
}

double accuracy(const ContingencyTable& table) {
    const Eigen::MatrixXd overlap = table.counts.cast<double>();
    const auto match = max_weight_assignment(overlap);
    std::int64_t hits = 0;
    for (std::size_t c = 0; c < match.size(); ++c) {
        if (match[c] >= 0) hits += table.counts(static_cast<Eigen::Index>(c), match[c]);
    }
    return static_cast<double>(hits) / static_cast<double>(table.total);
}

double accuracy(std::span<const int> labels, std::span<const int> truth) {
    return accuracy(ContingencyTable::build(labels, truth));
}

TrialSummary aggregate_trials(std::span<const double> values, StdDevKind kind) {
    if (values.empty()) throw ConfigError("cannot aggregate an empty list of trials");
    // Summation error would otherwise leave a tiny spread on constant inputs.
    if (std::all_of(values.begin(), values.end(), [&](double v) { return v == values.front(); })) {
        return {values.front(), 0.0};
    }
    const auto n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double divisor = kind == StdDevKind::Sample ? n - 1.0 : n;
    return {mean, divisor > 0.0 ? std::sqrt(ss / divisor) : 0.0};
}

}  // namespace mvfcm
