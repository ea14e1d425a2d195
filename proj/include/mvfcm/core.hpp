#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "mvfcm/error.hpp"

namespace mvfcm {

/// Feature matrix, one object per row.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
/// Class or cluster indices, 1-based.
using Labels = std::vector<int>;
using Diagnostics = std::vector<std::string>;

inline constexpr double kStochasticTolerance = 1e-9;

/// N objects observed through P views, view p being an N x D(p) matrix.
class MultiViewDataset {
public:
    MultiViewDataset() = default;
    explicit MultiViewDataset(std::vector<Matrix> views, std::optional<Labels> labels = std::nullopt,
                              std::vector<std::string> view_names = {});

    static MultiViewDataset single_view(Matrix view, std::optional<Labels> labels = std::nullopt);

    std::size_t size() const { return views_.empty() ? 0 : static_cast<std::size_t>(views_.front().rows()); }
    std::size_t num_views() const { return views_.size(); }
    const Matrix& view(std::size_t p) const { return views_.at(p); }
    std::span<const Matrix> views() const { return views_; }
    std::vector<std::size_t> dims() const;
    const std::optional<Labels>& labels() const { return labels_; }
    const std::vector<std::string>& view_names() const { return view_names_; }

    /// Rows `indices` of every view (and of the labels), in that order.
    MultiViewDataset subset(std::span<const std::size_t> indices) const;
    /// All views side by side as one N x sum(D) matrix.
    Matrix concatenated() const;

private:
    std::vector<Matrix> views_;
    std::optional<Labels> labels_;
    std::vector<std::string> view_names_;
};

struct Chunk {
    MultiViewDataset data;
    std::vector<double> object_weights;
    std::vector<std::size_t> origin_indices;  // 0-based rows of the parent dataset
};

/// K x N fuzzy assignment. Every column lies on the probability simplex.
class MembershipMatrix {
public:
    MembershipMatrix() = default;
    /// Throws NumericalError unless every column is non-negative and sums to 1.
    explicit MembershipMatrix(Eigen::MatrixXd values);

    /// Uniform 1/K membership for n objects.
    static MembershipMatrix uniform(std::size_t k, std::size_t n);

    std::size_t clusters() const { return static_cast<std::size_t>(values_.rows()); }
    std::size_t objects() const { return static_cast<std::size_t>(values_.cols()); }
    const Eigen::MatrixXd& values() const { return values_; }
    double operator()(std::size_t c, std::size_t i) const { return values_(c, i); }

    /// Largest absolute deviation of a column sum from 1.
    double max_column_error() const;
    /// Index of the largest membership in each column (ties: lowest index).
    std::vector<std::size_t> argmax() const;

private:
    Eigen::MatrixXd values_;
};

bool is_column_stochastic(const Eigen::MatrixXd& values, double tolerance = kStochasticTolerance);

/// Per-view K x D(p) centroids, optionally carrying a mass per centroid.
struct CentroidSet {
    std::vector<Matrix> per_view;
    std::optional<Vector> weights;

    std::size_t clusters() const { return per_view.empty() ? 0 : static_cast<std::size_t>(per_view.front().rows()); }
    std::size_t num_views() const { return per_view.size(); }
    /// Throws NumericalError on mismatched K or non-finite entries.
    void validate() const;
};

/// View weights alpha on the simplex together with the exponent gamma.
struct ViewWeights {
    Vector alpha;
    double gamma = 0.5;

    static ViewWeights uniform(std::size_t views, double gamma);
    bool is_valid(double tolerance = kStochasticTolerance) const;
};

enum class ConvergenceNorm { Frobenius, MaxAbs };

enum class Algorithm { FCM, SPFCM, OFCM, NaiveMVOFCM, NaiveMVSPFCM, IminimaxFCM1, IminimaxFCM2 };

std::string_view to_string(Algorithm algorithm);
/// Throws ConfigError for unknown names.
Algorithm parse_algorithm(std::string_view name);

struct RunConfig {
    std::size_t k = 2;
    double m = 2.0;
    double gamma = 0.5;
    double epsilon = 1e-6;
    ConvergenceNorm norm = ConvergenceNorm::Frobenius;
    int max_iters = 300;
    double chunk_fraction = 1.0;
    std::uint64_t seed = 0;
    Algorithm algorithm = Algorithm::IminimaxFCM1;
    bool normalize = false;
    /// Weight Phase-2 pooled centroids by their membership mass (off: unweighted Phase 2).
    bool weighted_phase2 = false;
    /// Worker threads for independent chunks; results do not depend on it.
    unsigned workers = 1;

    /// Throws ConfigError when a field is out of range for a dataset of n objects.
    void validate(std::size_t n) const;
};

struct ClusterResult {
    Labels labels;
    MembershipMatrix membership;
    CentroidSet centroids;
    std::optional<ViewWeights> view_weights;
    std::vector<int> iterations_per_stage;
    std::vector<double> objective_trace;
    Diagnostics diagnostics;
};

/// Seeded shuffle followed by consecutive slices of floor(N * fraction) objects;
/// the last chunk holds the remainder. All object weights are 1.
std::vector<Chunk> partition_into_chunks(const MultiViewDataset& data, double chunk_fraction, std::uint64_t seed);

/// Nominal chunk size for n objects; throws ConfigError if it is zero.
std::size_t chunk_size_for(std::size_t n, double chunk_fraction);

/// Per-view, per-column z-score with population standard deviation. Constant columns become 0.
MultiViewDataset zscore_normalize(const MultiViewDataset& data);

}  // namespace mvfcm
