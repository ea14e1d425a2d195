#pragma once

#include <functional>
#include <span>
#include <vector>

#include "mvfcm/core.hpp"

namespace mvfcm {

/// Squared distances below this are treated as a coincident object and centroid.
inline constexpr double kCoincidenceThreshold = 1e-12;
/// Clusters whose weighted membership mass falls below this are re-seeded.
inline constexpr double kEmptyClusterThreshold = 1e-12;

struct WfcmState {
    MembershipMatrix membership;
    Matrix centroids;
    std::vector<double> object_weights;
    int iterations = 0;
    bool converged = false;
    std::vector<double> objective_trace;
    Diagnostics diagnostics;
};

using WfcmObserver = std::function<void(const WfcmState&)>;

/// K x N squared Euclidean distances between centroids (rows) and objects (columns).
Eigen::MatrixXd squared_distances(const Matrix& data, const Matrix& centroids);

/// Fuzzy membership minimising sum_c u^m d for fixed distances d (K x N).
/// Objects coinciding with centroids split their membership evenly among them.
MembershipMatrix membership_from_distances(const Eigen::MatrixXd& sq_dist, double m);

/// sum_c sum_i w_i u_ci^m ||x_i - v_c||^2. Empty `weights` means unit weights.
double weighted_fcm_objective(const Matrix& data, const MembershipMatrix& membership, const Matrix& centroids,
                              std::span<const double> weights, double m);

double fcm_objective(const WfcmState& state, const Matrix& data, double m);

MembershipMatrix wfcm_update_membership(const Matrix& data, const Matrix& centroids, double m);

/// v_c = sum_i w_i u_ci^m x_i / sum_i w_i u_ci^m. A cluster with no mass is
/// re-seeded at the object farthest from its nearest centroid and a diagnostic is appended.
Matrix wfcm_update_centroids(const Matrix& data, const MembershipMatrix& membership, std::span<const double> weights,
                             double m, Diagnostics* diagnostics = nullptr);

/// Multi-view form of the centroid update sharing one membership across views.
/// Empty clusters are re-seeded jointly: the same object in every view, chosen by
/// the summed squared distance to the nearest non-empty centroid.
std::vector<Matrix> weighted_centroids(std::span<const Matrix> views, const MembershipMatrix& membership,
                                       std::span<const double> weights, double m, Diagnostics* diagnostics = nullptr);

/// Alternating wFCM starting from centroids. Stops when the membership change
/// falls below config.epsilon or after config.max_iters sweeps.
WfcmState run_wfcm(const Matrix& data, std::span<const double> weights, const Matrix& init_centroids,
                   const RunConfig& config, const WfcmObserver& observer = {});

/// Same loop, starting from a membership: the first step computes centroids.
WfcmState run_wfcm_from_membership(const Matrix& data, std::span<const double> weights,
                                   const MembershipMatrix& init_membership, const RunConfig& config,
                                   const WfcmObserver& observer = {});

/// Cluster masses w_c = sum_i u_ci w_i over the combined chunk + carried centroids.
Vector spfcm_cluster_weights(const MembershipMatrix& membership, std::span<const double> object_weights);

/// Cluster masses w_c = sum_i u_ci of an independently clustered chunk.
Vector ofcm_cluster_weights(const MembershipMatrix& membership);

/// Distance between consecutive memberships under the configured norm.
double membership_change(const MembershipMatrix& next, const MembershipMatrix& prev, ConvergenceNorm norm);

}  // namespace mvfcm
