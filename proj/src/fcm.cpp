#include "mvfcm/fcm.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace mvfcm {

namespace {

double weight_at(std::span<const double> weights, std::size_t i) { return weights.empty() ? 1.0 : weights[i]; }

void check_weights(std::span<const double> weights, std::size_t n) {
    if (weights.empty()) return;
    if (weights.size() != n) throw ConfigError("object weight count does not match object count");
    for (double w : weights) {
        if (!(w > 0.0) || !std::isfinite(w)) throw ConfigError("object weights must be positive and finite");
    }
}

}  // namespace

Eigen::MatrixXd squared_distances(const Matrix& data, const Matrix& centroids) {
    const auto n = data.rows();
    const auto k = centroids.rows();
    Eigen::MatrixXd out(k, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index c = 0; c < k; ++c) out(c, i) = (data.row(i) - centroids.row(c)).squaredNorm();
    }
    return out;
}

MembershipMatrix membership_from_distances(const Eigen::MatrixXd& sq_dist, double m) {
    const auto k = sq_dist.rows();
    const auto n = sq_dist.cols();
    const double exponent = 1.0 / (m - 1.0);
    Eigen::MatrixXd u(k, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto d = sq_dist.col(i);
        Eigen::Index coincident = 0;
        for (Eigen::Index c = 0; c < k; ++c) coincident += d(c) < kCoincidenceThreshold ? 1 : 0;
        if (coincident > 0) {
            for (Eigen::Index c = 0; c < k; ++c) {
                u(c, i) = d(c) < kCoincidenceThreshold ? 1.0 / static_cast<double>(coincident) : 0.0;
            }
            continue;
        }
        // u_ci = 1 / sum_j (d_ci / d_ji)^(1/(m-1)), evaluated relative to the nearest
        // centroid so that the powers stay in range.
        const double nearest = d.minCoeff();
        double total = 0.0;
        for (Eigen::Index c = 0; c < k; ++c) {
            u(c, i) = std::pow(nearest / d(c), exponent);
            total += u(c, i);
        }
        u.col(i) /= total;
    }
    return MembershipMatrix(std::move(u));
}

double weighted_fcm_objective(const Matrix& data, const MembershipMatrix& membership, const Matrix& centroids,
                              std::span<const double> weights, double m) {
    const Eigen::MatrixXd d2 = squared_distances(data, centroids);
    double total = 0.0;
    for (Eigen::Index i = 0; i < d2.cols(); ++i) {
        double column = 0.0;
        for (Eigen::Index c = 0; c < d2.rows(); ++c) {
            column += std::pow(membership(static_cast<std::size_t>(c), static_cast<std::size_t>(i)), m) * d2(c, i);
        }
        total += weight_at(weights, static_cast<std::size_t>(i)) * column;
    }
    return total;
}

double fcm_objective(const WfcmState& state, const Matrix& data, double m) {
    return weighted_fcm_objective(data, state.membership, state.centroids, state.object_weights, m);
}

MembershipMatrix wfcm_update_membership(const Matrix& data, const Matrix& centroids, double m) {
    return membership_from_distances(squared_distances(data, centroids), m);
}

std::vector<Matrix> weighted_centroids(std::span<const Matrix> views, const MembershipMatrix& membership,
                                       std::span<const double> weights, double m, Diagnostics* diagnostics) {
    const auto k = static_cast<Eigen::Index>(membership.clusters());
    const auto n = static_cast<Eigen::Index>(membership.objects());
    check_weights(weights, static_cast<std::size_t>(n));

    // Row c holds w_i u_ci^m.
    Eigen::MatrixXd coeff = membership.values().array().pow(m);
    if (!weights.empty()) {
        for (Eigen::Index i = 0; i < n; ++i) coeff.col(i) *= weights[static_cast<std::size_t>(i)];
    }
    const Eigen::VectorXd mass = coeff.rowwise().sum();

    std::vector<Matrix> out;
    out.reserve(views.size());
    for (const auto& x : views) {
        if (x.rows() != n) throw DataError("membership and data disagree on the object count");
        Matrix v = coeff * x;
        for (Eigen::Index c = 0; c < k; ++c) {
            if (mass(c) >= kEmptyClusterThreshold) v.row(c) /= mass(c);
        }
        out.push_back(std::move(v));
    }

    std::vector<bool> placed(static_cast<std::size_t>(k));
    bool any_empty = false;
    for (Eigen::Index c = 0; c < k; ++c) {
        placed[static_cast<std::size_t>(c)] = mass(c) >= kEmptyClusterThreshold;
        any_empty = any_empty || !placed[static_cast<std::size_t>(c)];
    }
    if (!any_empty) return out;

    for (Eigen::Index c = 0; c < k; ++c) {
        if (placed[static_cast<std::size_t>(c)]) continue;
        Eigen::Index farthest = 0;
        double farthest_dist = -1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            double nearest = std::numeric_limits<double>::infinity();
            for (Eigen::Index j = 0; j < k; ++j) {
                if (!placed[static_cast<std::size_t>(j)]) continue;
                double d = 0.0;
                for (std::size_t p = 0; p < views.size(); ++p) d += (views[p].row(i) - out[p].row(j)).squaredNorm();
                nearest = std::min(nearest, d);
            }
            if (!std::isfinite(nearest)) nearest = 0.0;  // nothing placed yet
            if (nearest > farthest_dist) {
                farthest_dist = nearest;
                farthest = i;
            }
        }
        for (std::size_t p = 0; p < views.size(); ++p) out[p].row(c) = views[p].row(farthest);
        placed[static_cast<std::size_t>(c)] = true;
        if (diagnostics) {
            diagnostics->push_back("empty cluster " + std::to_string(c + 1) + " re-seeded at object " +
                                   std::to_string(farthest + 1));
        }
    }
    return out;
}

Matrix wfcm_update_centroids(const Matrix& data, const MembershipMatrix& membership, std::span<const double> weights,
                             double m, Diagnostics* diagnostics) {
    auto views = weighted_centroids(std::span<const Matrix>(&data, 1), membership, weights, m, diagnostics);
    return std::move(views.front());
}

double membership_change(const MembershipMatrix& next, const MembershipMatrix& prev, ConvergenceNorm norm) {
    const Eigen::MatrixXd delta = next.values() - prev.values();
    return norm == ConvergenceNorm::Frobenius ? delta.norm() : delta.cwiseAbs().maxCoeff();
}

WfcmState run_wfcm_from_membership(const Matrix& data, std::span<const double> weights,
                                   const MembershipMatrix& init_membership, const RunConfig& config,
                                   const WfcmObserver& observer) {
    const auto n = static_cast<std::size_t>(data.rows());
    check_weights(weights, n);
    if (init_membership.objects() != n) throw ConfigError("initial membership does not match the object count");
    if (init_membership.clusters() > n) throw ConfigError("more clusters than objects");

    WfcmState state;
    state.object_weights.assign(weights.begin(), weights.end());
    if (state.object_weights.empty()) state.object_weights.assign(n, 1.0);
    state.membership = init_membership;
    state.centroids = wfcm_update_centroids(data, state.membership, weights, config.m, &state.diagnostics);

    for (int iter = 1; iter <= config.max_iters; ++iter) {
        MembershipMatrix next = wfcm_update_membership(data, state.centroids, config.m);
        const double change = membership_change(next, state.membership, config.norm);
        state.membership = std::move(next);
        state.iterations = iter;
        const double objective = fcm_objective(state, data, config.m);
        if (!std::isfinite(objective)) throw NumericalError("wFCM objective became non-finite");
        state.objective_trace.push_back(objective);
        if (observer) observer(state);
        if (change < config.epsilon) {
            state.converged = true;
            break;
        }
        state.centroids = wfcm_update_centroids(data, state.membership, weights, config.m, &state.diagnostics);
    }
    return state;
}

WfcmState run_wfcm(const Matrix& data, std::span<const double> weights, const Matrix& init_centroids,
                   const RunConfig& config, const WfcmObserver& observer) {
    if (init_centroids.cols() != data.cols()) throw ConfigError("initial centroids have the wrong dimension");
    return run_wfcm_from_membership(data, weights, wfcm_update_membership(data, init_centroids, config.m), config,
                                    observer);
}

Vector spfcm_cluster_weights(const MembershipMatrix& membership, std::span<const double> object_weights) {
    check_weights(object_weights, membership.objects());
    if (object_weights.empty()) return membership.values().rowwise().sum();
    const Eigen::Map<const Eigen::VectorXd> w(object_weights.data(), static_cast<Eigen::Index>(object_weights.size()));
    return membership.values() * w;
}

Vector ofcm_cluster_weights(const MembershipMatrix& membership) { return membership.values().rowwise().sum(); }

}  // namespace mvfcm
