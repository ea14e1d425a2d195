#include "mvfcm/datagen.hpp"

#include <algorithm>
#include <cmath>

#include "mvfcm/rng.hpp"

namespace mvfcm {

namespace {

constexpr int kCentreAttempts = 10000;

// Rejection-sample k centres in a box until all pairs are `separation` apart;
// fall back to a line of evenly spaced centres.
Matrix draw_centres(Rng& rng, std::size_t k, std::size_t dim, double separation) {
    const double side = separation * std::max<double>(2.0, static_cast<double>(k));
    Matrix centres(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(dim));
    for (int attempt = 0; attempt < kCentreAttempts; ++attempt) {
        for (Eigen::Index c = 0; c < centres.rows(); ++c) {
            for (Eigen::Index d = 0; d < centres.cols(); ++d) centres(c, d) = rng.uniform(0.0, side);
        }
        bool ok = true;
        for (Eigen::Index a = 0; a < centres.rows() && ok; ++a) {
            for (Eigen::Index b = a + 1; b < centres.rows() && ok; ++b) {
                ok = (centres.row(a) - centres.row(b)).norm() >= separation;
            }
        }
        if (ok) return centres;
    }
    centres.setZero();
    for (Eigen::Index c = 0; c < centres.rows(); ++c) centres(c, 0) = separation * static_cast<double>(c);
    return centres;
}

}  // namespace

void SyntheticSpec::validate() const {
    if (k < 1) throw ConfigError("k must be >= 1");
    if (per_cluster_n < 1) throw ConfigError("per_cluster_n must be >= 1");
    if (view_dims.empty()) throw ConfigError("view_dims must list at least one view");
    for (auto d : view_dims) {
        if (d < 1) throw ConfigError("every view dimension must be >= 1");
    }
    if (!(separation > 0.0)) throw ConfigError("separation must be > 0");
    if (!(spread > 0.0)) throw ConfigError("spread must be > 0");
    if (!(noise_view_prob >= 0.0 && noise_view_prob <= 1.0)) throw ConfigError("noise_view_prob must lie in [0, 1]");
    for (auto v : noise_views) {
        if (v < 1 || v > view_dims.size()) throw ConfigError("noise_views entries must be 1-based view indices");
    }
}

std::vector<std::size_t> noise_view_indices(const SyntheticSpec& spec) {
    spec.validate();
    Rng rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<std::size_t> out;
    for (std::size_t p = 0; p < spec.view_dims.size(); ++p) {
        const bool forced = std::find(spec.noise_views.begin(), spec.noise_views.end(), p + 1) != spec.noise_views.end();
        const bool drawn = rng.uniform() < spec.noise_view_prob;
        if (forced || drawn) out.push_back(p);
    }
    return out;
}

MultiViewDataset generate(const SyntheticSpec& spec) {
    const auto noisy = noise_view_indices(spec);
    const std::size_t n = spec.k * spec.per_cluster_n;
    const double noise_std = spec.noise_std > 0.0 ? spec.noise_std : spec.separation / 2.0;

    Rng rng(spec.seed);
    std::vector<Matrix> views;
    for (std::size_t p = 0; p < spec.view_dims.size(); ++p) {
        const auto dim = static_cast<Eigen::Index>(spec.view_dims[p]);
        Matrix x(static_cast<Eigen::Index>(n), dim);
        if (std::find(noisy.begin(), noisy.end(), p) != noisy.end()) {
            for (Eigen::Index i = 0; i < x.rows(); ++i) {
                for (Eigen::Index d = 0; d < dim; ++d) x(i, d) = noise_std * rng.normal();
            }
        } else {
            const Matrix centres = draw_centres(rng, spec.k, spec.view_dims[p], spec.separation);
            for (Eigen::Index i = 0; i < x.rows(); ++i) {
                const auto c = static_cast<Eigen::Index>(static_cast<std::size_t>(i) / spec.per_cluster_n);
                for (Eigen::Index d = 0; d < dim; ++d) x(i, d) = centres(c, d) + spec.spread * rng.normal();
            }
        }
        views.push_back(std::move(x));
    }

    Labels labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(i / spec.per_cluster_n) + 1;
    return MultiViewDataset(std::move(views), std::move(labels));
}

}  // namespace mvfcm
