#include <cmath>
#include <limits>

#include "mvfcm/fcm.hpp"
#include "mvfcm/metrics.hpp"
#include "mvfcm/minimax.hpp"

namespace mvfcm {

std::vector<std::size_t> farthest_first_indices(const Matrix& view, std::size_t k) {
    const auto n = static_cast<std::size_t>(view.rows());
    if (k < 1 || k > n) throw ConfigError("farthest-first selection needs 1 <= k <= N");
    const auto row = [&](std::size_t i) { return view.row(static_cast<Eigen::Index>(i)); };

    std::size_t first = 0;
    double best_total = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) total += (row(j) - row(i)).norm();
        if (total < best_total) {
            best_total = total;
            first = j;
        }
    }

    std::vector<std::size_t> chosen{first};
    std::vector<bool> taken(n, false);
    taken[first] = true;
    std::vector<double> nearest(n);
    for (std::size_t i = 0; i < n; ++i) nearest[i] = (row(i) - row(first)).norm();

    while (chosen.size() < k) {
        std::size_t pick = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (taken[i]) continue;
            if (pick == n || nearest[i] > nearest[pick]) pick = i;
        }
        chosen.push_back(pick);
        taken[pick] = true;
        for (std::size_t i = 0; i < n; ++i) nearest[i] = std::min(nearest[i], (row(i) - row(pick)).norm());
    }
    return chosen;
}

namespace {

// Index of the nearest seed for every object in one view, ties to the lowest index.
std::vector<std::size_t> nearest_seed(const Matrix& view, const std::vector<std::size_t>& seeds) {
    std::vector<std::size_t> out(static_cast<std::size_t>(view.rows()));
    for (Eigen::Index i = 0; i < view.rows(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < seeds.size(); ++c) {
            const double d = (view.row(i) - view.row(static_cast<Eigen::Index>(seeds[c]))).squaredNorm();
            if (d < best) {
                best = d;
                out[static_cast<std::size_t>(i)] = c;
            }
        }
    }
    return out;
}

}  // namespace

MembershipMatrix init_farthest_first(const MultiViewDataset& data, std::size_t k) {
    const auto n = static_cast<Eigen::Index>(data.size());
    const auto kk = static_cast<Eigen::Index>(k);
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(kk, n);
    std::vector<std::size_t> reference;
    for (const auto& view : data.views()) {
        auto seeds = farthest_first_indices(view, k);
        // Seed c of this view must denote the same cluster as seed c of view 1:
        // match the nearest-seed partitions by overlap and reorder.
        const auto part = nearest_seed(view, seeds);
        if (reference.empty()) {
            reference = part;
        } else {
            Eigen::MatrixXd overlap = Eigen::MatrixXd::Zero(kk, kk);
            for (std::size_t i = 0; i < part.size(); ++i) overlap(static_cast<Eigen::Index>(reference[i]), static_cast<Eigen::Index>(part[i])) += 1.0;
            const auto match = max_weight_assignment(overlap);
            std::vector<std::size_t> aligned(k);
            for (std::size_t c = 0; c < k; ++c) aligned[c] = seeds[static_cast<std::size_t>(match[c])];
            seeds = std::move(aligned);
        }
        for (std::size_t c = 0; c < seeds.size(); ++c) sum(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(seeds[c])) += 1.0;
    }
    Eigen::MatrixXd u = sum / static_cast<double>(data.num_views());
    for (Eigen::Index i = 0; i < n; ++i) {
        const double total = u.col(i).sum();
        if (total == 0.0) {
            u.col(i).setConstant(1.0 / static_cast<double>(k));
        } else {
            u.col(i) /= total;
        }
    }
    return MembershipMatrix(std::move(u));
}

MembershipMatrix init_fcm_consensus(const MultiViewDataset& data, const RunConfig& config) {
    const std::size_t k = config.k;
    if (k < 1 || k > data.size()) throw ConfigError("cluster count must lie in [1, N]");

    Eigen::MatrixXd reference;
    Eigen::MatrixXd sum;
    for (const auto& view : data.views()) {
        const auto seeds = farthest_first_indices(view, k);
        Matrix centroids(static_cast<Eigen::Index>(k), view.cols());
        for (std::size_t c = 0; c < k; ++c) centroids.row(static_cast<Eigen::Index>(c)) = view.row(static_cast<Eigen::Index>(seeds[c]));
        const Eigen::MatrixXd u = run_wfcm(view, {}, centroids, config).membership.values();

        if (reference.size() == 0) {
            reference = u;
            sum = u;
            continue;
        }
        // Row c of the reference is matched with the view cluster it overlaps most.
        const Eigen::MatrixXd overlap = reference * u.transpose();
        const auto match = max_weight_assignment(overlap);
        for (std::size_t c = 0; c < k; ++c) sum.row(static_cast<Eigen::Index>(c)) += u.row(match[c]);
    }
    return MembershipMatrix(sum / static_cast<double>(data.num_views()));
}

}  // namespace mvfcm
