#include "mvfcm/core.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "mvfcm/rng.hpp"

namespace mvfcm {

MultiViewDataset::MultiViewDataset(std::vector<Matrix> views, std::optional<Labels> labels,
                                   std::vector<std::string> view_names)
    : views_(std::move(views)), labels_(std::move(labels)), view_names_(std::move(view_names)) {
    if (views_.empty()) throw DataError("dataset needs at least one view");
    const auto n = views_.front().rows();
    if (n < 1) throw DataError("dataset needs at least one object");
    for (std::size_t p = 0; p < views_.size(); ++p) {
        if (views_[p].rows() != n) {
            throw DataError("view " + std::to_string(p + 1) + " has " + std::to_string(views_[p].rows()) +
                            " objects, expected " + std::to_string(n));
        }
        if (views_[p].cols() < 1) throw DataError("view " + std::to_string(p + 1) + " has no features");
        if (!views_[p].allFinite()) throw DataError("view " + std::to_string(p + 1) + " contains non-finite values");
    }
    if (labels_ && static_cast<Eigen::Index>(labels_->size()) != n) {
        throw DataError("label count " + std::to_string(labels_->size()) + " does not match object count " +
                        std::to_string(n));
    }
    if (labels_ && std::any_of(labels_->begin(), labels_->end(), [](int l) { return l < 1; })) {
        throw DataError("labels must be integers >= 1");
    }
    if (!view_names_.empty() && view_names_.size() != views_.size()) {
        throw DataError("view name count does not match view count");
    }
}

MultiViewDataset MultiViewDataset::single_view(Matrix view, std::optional<Labels> labels) {
    std::vector<Matrix> views;
    views.push_back(std::move(view));
    return MultiViewDataset(std::move(views), std::move(labels));
}

std::vector<std::size_t> MultiViewDataset::dims() const {
    std::vector<std::size_t> out;
    out.reserve(views_.size());
    for (const auto& v : views_) out.push_back(static_cast<std::size_t>(v.cols()));
    return out;
}

MultiViewDataset MultiViewDataset::subset(std::span<const std::size_t> indices) const {
    std::vector<Matrix> views;
    views.reserve(views_.size());
    for (const auto& v : views_) {
        Matrix rows(static_cast<Eigen::Index>(indices.size()), v.cols());
        for (std::size_t r = 0; r < indices.size(); ++r) rows.row(static_cast<Eigen::Index>(r)) = v.row(static_cast<Eigen::Index>(indices[r]));
        views.push_back(std::move(rows));
    }
    std::optional<Labels> labels;
    if (labels_) {
        labels.emplace();
        labels->reserve(indices.size());
        for (auto i : indices) labels->push_back(labels_->at(i));
    }
    return MultiViewDataset(std::move(views), std::move(labels), view_names_);
}

Matrix MultiViewDataset::concatenated() const {
    Eigen::Index cols = 0;
    for (const auto& v : views_) cols += v.cols();
    Matrix out(static_cast<Eigen::Index>(size()), cols);
    Eigen::Index offset = 0;
    for (const auto& v : views_) {
        out.middleCols(offset, v.cols()) = v;
        offset += v.cols();
    }
    return out;
}

MembershipMatrix::MembershipMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
    if (!values_.allFinite()) throw NumericalError("membership matrix contains non-finite values");
    if (!is_column_stochastic(values_)) throw NumericalError("membership matrix columns are not on the simplex");
}

MembershipMatrix MembershipMatrix::uniform(std::size_t k, std::size_t n) {
    return MembershipMatrix(Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n),
                                                      1.0 / static_cast<double>(k)));
}

double MembershipMatrix::max_column_error() const {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < values_.cols(); ++i) worst = std::max(worst, std::abs(values_.col(i).sum() - 1.0));
    return worst;
}

std::vector<std::size_t> MembershipMatrix::argmax() const {
    std::vector<std::size_t> out(objects());
    for (Eigen::Index i = 0; i < values_.cols(); ++i) {
        Eigen::Index best = 0;
        for (Eigen::Index c = 1; c < values_.rows(); ++c) {
            if (values_(c, i) > values_(best, i)) best = c;
        }
        out[static_cast<std::size_t>(i)] = static_cast<std::size_t>(best);
    }
    return out;
}

bool is_column_stochastic(const Eigen::MatrixXd& values, double tolerance) {
    if ((values.array() < 0.0).any()) return false;
    for (Eigen::Index i = 0; i < values.cols(); ++i) {
        if (std::abs(values.col(i).sum() - 1.0) > tolerance) return false;
    }
    return true;
}

void CentroidSet::validate() const {
    const auto k = clusters();
    for (std::size_t p = 0; p < per_view.size(); ++p) {
        if (static_cast<std::size_t>(per_view[p].rows()) != k) {
            throw NumericalError("centroid view " + std::to_string(p + 1) + " has a different cluster count");
        }
        if (!per_view[p].allFinite()) throw NumericalError("centroid view " + std::to_string(p + 1) + " is not finite");
    }
    if (weights && static_cast<std::size_t>(weights->size()) != k) throw NumericalError("centroid weight count mismatch");
}

ViewWeights ViewWeights::uniform(std::size_t views, double gamma) {
    return ViewWeights{Vector::Constant(static_cast<Eigen::Index>(views), 1.0 / static_cast<double>(views)), gamma};
}

bool ViewWeights::is_valid(double tolerance) const {
    return alpha.size() > 0 && alpha.allFinite() && (alpha.array() >= 0.0).all() &&
           std::abs(alpha.sum() - 1.0) <= tolerance;
}

namespace {

constexpr std::array<std::pair<Algorithm, std::string_view>, 7> kAlgorithmNames{{
    {Algorithm::FCM, "FCM"},
    {Algorithm::SPFCM, "SPFCM"},
    {Algorithm::OFCM, "OFCM"},
    {Algorithm::NaiveMVOFCM, "NaiveMVOFCM"},
    {Algorithm::NaiveMVSPFCM, "NaiveMVSPFCM"},
    {Algorithm::IminimaxFCM1, "IminimaxFCM1"},
    {Algorithm::IminimaxFCM2, "IminimaxFCM2"},
}};

}  // namespace

std::string_view to_string(Algorithm algorithm) {
    for (const auto& [a, name] : kAlgorithmNames) {
        if (a == algorithm) return name;
    }
    return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
    for (const auto& [a, n] : kAlgorithmNames) {
        if (n == name) return a;
    }
    throw ConfigError("unknown algorithm '" + std::string(name) + "'");
}

void RunConfig::validate(std::size_t n) const {
    if (!(m > 1.0) || !std::isfinite(m)) throw ConfigError("fuzzifier m must be > 1");
    if (!(gamma >= 0.0 && gamma < 1.0)) throw ConfigError("gamma must lie in [0, 1)");
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
    if (max_iters < 1) throw ConfigError("max_iters must be >= 1");
    if (!(chunk_fraction > 0.0 && chunk_fraction <= 1.0)) throw ConfigError("chunk_fraction must lie in (0, 1]");
    if (k < 1 || k > n) {
        throw ConfigError("cluster count k = " + std::to_string(k) + " must lie in [1, " + std::to_string(n) + "]");
    }
}

std::size_t chunk_size_for(std::size_t n, double chunk_fraction) {
    if (!(chunk_fraction > 0.0 && chunk_fraction <= 1.0)) throw ConfigError("chunk_fraction must lie in (0, 1]");
    // The slack absorbs representation error such as 10 * 0.3 = 2.9999...
    const auto size = static_cast<std::size_t>(std::floor(static_cast<double>(n) * chunk_fraction + 1e-9));
    if (size == 0) {
        throw ConfigError("chunk fraction " + std::to_string(chunk_fraction) + " of " + std::to_string(n) +
                          " objects gives an empty chunk");
    }
    return std::min(size, n);
}

std::vector<Chunk> partition_into_chunks(const MultiViewDataset& data, double chunk_fraction, std::uint64_t seed) {
    const std::size_t n = data.size();
    const std::size_t size = chunk_size_for(n, chunk_fraction);
    const auto order = shuffled_indices(n, seed);

    std::vector<Chunk> chunks;
    chunks.reserve((n + size - 1) / size);
    for (std::size_t begin = 0; begin < n; begin += size) {
        const std::size_t end = std::min(n, begin + size);
        Chunk chunk;
        chunk.origin_indices.assign(order.begin() + static_cast<std::ptrdiff_t>(begin),
                                    order.begin() + static_cast<std::ptrdiff_t>(end));
        chunk.data = data.subset(chunk.origin_indices);
        chunk.object_weights.assign(end - begin, 1.0);
        chunks.push_back(std::move(chunk));
    }
    return chunks;
}

MultiViewDataset zscore_normalize(const MultiViewDataset& data) {
    std::vector<Matrix> views;
    views.reserve(data.num_views());
    for (const auto& v : data.views()) {
        Matrix out = v;
        const auto n = static_cast<double>(v.rows());
        for (Eigen::Index j = 0; j < v.cols(); ++j) {
            const double mean = v.col(j).mean();
            const double var = (v.col(j).array() - mean).square().sum() / n;
            const double sd = std::sqrt(var);
            if (sd < 1e-12) {
                out.col(j).setZero();
            } else {
                out.col(j) = (v.col(j).array() - mean) / sd;
            }
        }
        views.push_back(std::move(out));
    }
    return MultiViewDataset(std::move(views), data.labels(), data.view_names());
}

}  // namespace mvfcm
