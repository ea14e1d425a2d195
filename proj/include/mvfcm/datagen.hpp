#pragma once

#include <cstdint>
#include <vector>

#include "mvfcm/core.hpp"

namespace mvfcm {

/// Gaussian-blob multi-view dataset description.
struct SyntheticSpec {
    std::size_t k = 3;
    std::size_t per_cluster_n = 100;
    std::vector<std::size_t> view_dims{2, 2};
    /// Minimum distance between cluster centres within an informative view.
    double separation = 10.0;
    /// Within-cluster standard deviation.
    double spread = 0.5;
    /// Probability that each view is pure noise.
    double noise_view_prob = 0.0;
    /// 1-based views that are always pure noise.
    std::vector<std::size_t> noise_views;
    /// Standard deviation of the shared noise distribution; <= 0 means separation / 2.
    double noise_std = 0.0;
    std::uint64_t seed = 0;

    /// Throws ConfigError on out-of-range fields.
    void validate() const;
};

/// k * per_cluster_n objects with ground-truth labels, grouped by cluster.
/// Informative views draw cluster centres at least `separation` apart; noise
/// views draw every object from N(0, noise_std^2 I).
MultiViewDataset generate(const SyntheticSpec& spec);

/// 0-based indices of the views `generate` turns into noise for this spec.
std::vector<std::size_t> noise_view_indices(const SyntheticSpec& spec);

}  // namespace mvfcm
