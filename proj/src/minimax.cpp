#include "mvfcm/minimax.hpp"

#include <cmath>

#include "mvfcm/fcm.hpp"

namespace mvfcm {

namespace {

void check_shapes(const MultiViewDataset& data, const CentroidSet& centroids) {
    if (centroids.num_views() != data.num_views()) throw ConfigError("centroid set and data disagree on the view count");
    for (std::size_t p = 0; p < data.num_views(); ++p) {
        if (centroids.per_view[p].cols() != data.view(p).cols()) {
            throw ConfigError("centroid dimension mismatch in view " + std::to_string(p + 1));
        }
    }
}

}  // namespace

double view_cost(const Matrix& view, const MembershipMatrix& consensus, const Matrix& centroids, double m,
                 std::span<const double> weights) {
    return weighted_fcm_objective(view, consensus, centroids, weights, m);
}

Vector view_costs(const MultiViewDataset& data, const MembershipMatrix& consensus, const CentroidSet& centroids,
                  double m, std::span<const double> weights) {
    check_shapes(data, centroids);
    Vector q(static_cast<Eigen::Index>(data.num_views()));
    for (std::size_t p = 0; p < data.num_views(); ++p) {
        q(static_cast<Eigen::Index>(p)) = view_cost(data.view(p), consensus, centroids.per_view[p], m, weights);
    }
    return q;
}

double weighted_view_sum(const ViewWeights& weights, const Vector& costs) {
    double total = 0.0;
    for (Eigen::Index p = 0; p < costs.size(); ++p) total += std::pow(weights.alpha(p), weights.gamma) * costs(p);
    return total;
}

double minimax_objective(const MinimaxState& state, const MultiViewDataset& data, double m) {
    return weighted_view_sum(state.view_weights, view_costs(data, state.consensus_membership, state.centroids, m));
}

Eigen::MatrixXd aggregated_distances(const MultiViewDataset& data, const CentroidSet& centroids,
                                     const ViewWeights& weights) {
    check_shapes(data, centroids);
    if (static_cast<std::size_t>(weights.alpha.size()) != data.num_views()) {
        throw ConfigError("view weight count does not match the view count");
    }
    Eigen::MatrixXd total = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(centroids.clusters()),
                                                  static_cast<Eigen::Index>(data.size()));
    for (std::size_t p = 0; p < data.num_views(); ++p) {
        const double scale = std::pow(weights.alpha(static_cast<Eigen::Index>(p)), weights.gamma);
        total += scale * squared_distances(data.view(p), centroids.per_view[p]);
    }
    return total;
}

MembershipMatrix update_consensus_membership(const MultiViewDataset& data, const CentroidSet& centroids,
                                             const ViewWeights& weights, double m) {
    return membership_from_distances(aggregated_distances(data, centroids, weights), m);
}

Matrix update_view_centroids(const Matrix& view, const MembershipMatrix& consensus, double m,
                             Diagnostics* diagnostics) {
    return wfcm_update_centroids(view, consensus, {}, m, diagnostics);
}

ViewWeights update_view_weights(const Vector& per_view_cost, double gamma) {
    if (gamma == 0.0) throw DegenerateGammaError();
    if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("gamma must lie in (0, 1) for the view-weight update");
    if (per_view_cost.size() == 0) throw ConfigError("no view costs given");
    if (!per_view_cost.allFinite()) throw NumericalError("view cost is not finite");

    // alpha_p = Q_p^e / sum_j Q_j^e with e = 1 / (1 - gamma), evaluated relative
    // to the largest cost.
    const Vector q = per_view_cost.cwiseMax(kViewCostFloor);
    const double exponent = 1.0 / (1.0 - gamma);
    const double largest = q.maxCoeff();
    Vector alpha(q.size());
    for (Eigen::Index p = 0; p < q.size(); ++p) alpha(p) = std::pow(q(p) / largest, exponent);
    alpha /= alpha.sum();
    return ViewWeights{std::move(alpha), gamma};
}

MinimaxState run_minimax(const MultiViewDataset& data, const MembershipMatrix& init_membership,
                         const RunConfig& config, std::span<const double> weights, const MinimaxObserver& observer) {
    if (init_membership.objects() != data.size()) throw ConfigError("initial membership does not match the object count");
    if (init_membership.clusters() < 1 || init_membership.clusters() > data.size()) {
        throw ConfigError("cluster count must lie in [1, N]");
    }
    if (config.gamma == 0.0) throw DegenerateGammaError();

    MinimaxState state;
    state.consensus_membership = init_membership;
    state.view_weights = ViewWeights::uniform(data.num_views(), config.gamma);

    for (int iter = 1; iter <= config.max_iters; ++iter) {
        state.centroids.per_view =
            weighted_centroids(data.views(), state.consensus_membership, weights, config.m, &state.diagnostics);

        MembershipMatrix next = update_consensus_membership(data, state.centroids, state.view_weights, config.m);
        const double change = membership_change(next, state.consensus_membership, config.norm);
        state.consensus_membership = std::move(next);

        state.per_view_cost = view_costs(data, state.consensus_membership, state.centroids, config.m, weights);
        state.view_weights = update_view_weights(state.per_view_cost, config.gamma);

        const double objective = weighted_view_sum(state.view_weights, state.per_view_cost);
        if (!std::isfinite(objective)) throw NumericalError("minimax objective became non-finite");
        state.objective_trace.push_back(objective);
        state.iterations = iter;
        if (observer) observer(state);
        if (change < config.epsilon) {
            state.converged = true;
            break;
        }
    }
    return state;
}

}  // namespace mvfcm
