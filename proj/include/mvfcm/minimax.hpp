#pragma once

#include <functional>
#include <span>
#include <vector>

#include "mvfcm/core.hpp"

namespace mvfcm {

/// Floor applied to view costs before the weight update.
inline constexpr double kViewCostFloor = 1e-12;

struct MinimaxState {
    MembershipMatrix consensus_membership;
    CentroidSet centroids;
    ViewWeights view_weights;
    Vector per_view_cost;
    int iterations = 0;
    bool converged = false;
    /// sum_p alpha_p^gamma Q_p after each sweep.
    std::vector<double> objective_trace;
    Diagnostics diagnostics;
};

using MinimaxObserver = std::function<void(const MinimaxState&)>;

/// Q = sum_c sum_i w_i (u*_ci)^m ||x_i - v_c||^2 for one view (unit weights if `weights` is empty).
double view_cost(const Matrix& view, const MembershipMatrix& consensus, const Matrix& centroids, double m,
                 std::span<const double> weights = {});

/// Q for every view.
Vector view_costs(const MultiViewDataset& data, const MembershipMatrix& consensus, const CentroidSet& centroids,
                  double m, std::span<const double> weights = {});

/// sum_p alpha_p^gamma Q_p.
double minimax_objective(const MinimaxState& state, const MultiViewDataset& data, double m);
double weighted_view_sum(const ViewWeights& weights, const Vector& costs);

/// Aggregated distance D_ci = sum_p alpha_p^gamma ||x_i^(p) - v_c^(p)||^2 (K x N).
Eigen::MatrixXd aggregated_distances(const MultiViewDataset& data, const CentroidSet& centroids,
                                     const ViewWeights& weights);

MembershipMatrix update_consensus_membership(const MultiViewDataset& data, const CentroidSet& centroids,
                                             const ViewWeights& weights, double m);

/// Standard FCM centroid rule driven by the consensus membership.
Matrix update_view_centroids(const Matrix& view, const MembershipMatrix& consensus, double m,
                             Diagnostics* diagnostics = nullptr);

/// alpha_p = [sum_j (Q_p / Q_j)^(1/(gamma-1))]^-1. Throws DegenerateGammaError for gamma == 0.
ViewWeights update_view_weights(const Vector& per_view_cost, double gamma);

/// Alternating optimisation: centroids, then consensus membership, then view
/// weights, starting from alpha = 1/P. `weights` (optional) scale each object's
/// contribution to the centroids and costs.
MinimaxState run_minimax(const MultiViewDataset& data, const MembershipMatrix& init_membership,
                         const RunConfig& config, std::span<const double> weights = {},
                         const MinimaxObserver& observer = {});

/// Farthest-first selection on one view: the object with the least total
/// Euclidean distance to all others, then repeatedly the object whose distance
/// to the chosen set is largest. Ties go to the lowest index.
std::vector<std::size_t> farthest_first_indices(const Matrix& view, std::size_t k);

/// Crisp seeds from farthest-first selection in every view, averaged over views.
/// Each view's seeds are first reordered to match view 1 by the overlap of their
/// nearest-seed partitions. Columns that receive no seed are set to 1/K; the
/// others are renormalised to sum to 1.
MembershipMatrix init_farthest_first(const MultiViewDataset& data, std::size_t k);

/// Per-view FCM (farthest-first seeded), clusters aligned to view 1 by maximum
/// membership overlap, then averaged.
MembershipMatrix init_fcm_consensus(const MultiViewDataset& data, const RunConfig& config);

}  // namespace mvfcm
