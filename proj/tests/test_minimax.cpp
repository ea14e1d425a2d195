#include <cmath>

#include <gtest/gtest.h>

#include "mvfcm/fcm.hpp"
#include "mvfcm/minimax.hpp"
#include "test_util.hpp"

using namespace mvfcm;
using mvfcm::testing::column;
using mvfcm::testing::random_dataset;
using mvfcm::testing::random_matrix;
using mvfcm::testing::random_membership;

namespace {

RunConfig config_k(std::size_t k) {
    RunConfig c;
    c.k = k;
    c.epsilon = 1e-9;
    return c;
}

MembershipMatrix crisp(const std::vector<int>& assignment, std::size_t k) {
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(assignment.size()));
    for (std::size_t i = 0; i < assignment.size(); ++i) u(assignment[i], static_cast<Eigen::Index>(i)) = 1.0;
    return MembershipMatrix(u);
}

ViewWeights weights_of(std::initializer_list<double> alpha, double gamma) {
    ViewWeights w;
    w.alpha = Eigen::Map<const Eigen::VectorXd>(alpha.begin(), static_cast<Eigen::Index>(alpha.size()));
    w.gamma = gamma;
    return w;
}

}  // namespace

TEST(ViewCost, ZeroOnCrispCentroids) {
    EXPECT_EQ(view_cost(column({1, 1, 4}), crisp({0, 0, 1}, 2), column({1, 4}), 2.0), 0.0);
}

TEST(ViewCost, HandSum) { EXPECT_DOUBLE_EQ(view_cost(column({0, 2}), crisp({0, 0}, 1), column({1}), 2.0), 2.0); }

TEST(ViewCost, ScalesWithSquareOfFeatureScale) {
    Rng rng(3);
    const Matrix x = random_matrix(rng, 20, 3);
    const Matrix v = random_matrix(rng, 4, 3);
    const auto u = random_membership(rng, 4, 20);
    const double s = 3.5;
    EXPECT_NEAR(view_cost(s * x, u, s * v, 2.0), s * s * view_cost(x, u, v, 2.0), 1e-9);
}

TEST(MinimaxObjective, HandArithmetic) {
    EXPECT_NEAR(weighted_view_sum(weights_of({0.2, 0.8}, 0.5), Eigen::Vector2d(1, 2)), 2.2360679775, 1e-9);
}

TEST(MinimaxObjective, SingleViewEqualsItsCost) {
    EXPECT_DOUBLE_EQ(weighted_view_sum(weights_of({1.0}, 0.5), Vector::Constant(1, 7.25)), 7.25);
}

TEST(MinimaxObjective, GammaZeroIgnoresAlpha) {
    EXPECT_DOUBLE_EQ(weighted_view_sum(weights_of({0.1, 0.9}, 0.0), Eigen::Vector2d(3, 4)), 7.0);
}

TEST(ConsensusMembership, TwoViewExample) {
    // Per-view squared distances to the two clusters: view 1 (1, 2), view 2 (2, 1).
    const MultiViewDataset data({column({0}), column({0})});
    CentroidSet v;
    v.per_view = {column({1, std::sqrt(2.0)}), column({std::sqrt(2.0), 1})};
    const auto u = update_consensus_membership(data, v, weights_of({0.25, 0.75}, 0.5), 2.0);
    // D = (0.5 + 0.866 * 2, 0.5 * 2 + 0.866) and u_1 = D_2 / (D_1 + D_2).
    const double d1 = 0.5 + std::sqrt(0.75) * 2, d2 = 1.0 + std::sqrt(0.75);
    EXPECT_NEAR(u(0, 0), d2 / (d1 + d2), 1e-12);
    EXPECT_NEAR(u(0, 0), 0.4553, 1e-4);
    EXPECT_NEAR(u(1, 0), 0.5447, 1e-4);
}

TEST(ConsensusMembership, SingleViewMatchesFcmUpdate) {
    Rng rng(9);
    const Matrix x = random_matrix(rng, 15, 2);
    const Matrix v = random_matrix(rng, 3, 2);
    CentroidSet set;
    set.per_view = {v};
    const auto a = update_consensus_membership(MultiViewDataset({x}), set, weights_of({1.0}, 0.5), 2.0);
    const auto b = wfcm_update_membership(x, v, 2.0);
    EXPECT_LE((a.values() - b.values()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ConsensusMembership, ArgmaxFollowsSmallestAggregatedDistance) {
    Rng rng(10);
    const auto data = random_dataset(rng, 30, 3);
    CentroidSet set;
    for (const auto& view : data.views()) set.per_view.push_back(random_matrix(rng, 4, view.cols()));
    const auto w = weights_of({0.2, 0.5, 0.3}, 0.5);
    const auto d = aggregated_distances(data, set, w);
    const auto u = update_consensus_membership(data, set, w, 2.0);
    const auto best = u.argmax();
    for (Eigen::Index i = 0; i < d.cols(); ++i) {
        Eigen::Index arg = 0;
        d.col(i).minCoeff(&arg);
        EXPECT_EQ(best[static_cast<std::size_t>(i)], static_cast<std::size_t>(arg));
    }
}

TEST(ViewCentroids, HandArithmetic) {
    Eigen::MatrixXd u(2, 2);
    u << 0.8, 0.4, 0.2, 0.6;
    const Matrix v = update_view_centroids(column({0, 1}), MembershipMatrix(u), 2.0);
    EXPECT_NEAR(v(0, 0), 0.2, 1e-12);
    EXPECT_NEAR(v(1, 0), 0.9, 1e-12);
}

TEST(ViewCentroids, UniformAndCrispReductions) {
    const Matrix x = column({1, 3, 10, 20});
    EXPECT_DOUBLE_EQ(update_view_centroids(x, MembershipMatrix::uniform(2, 4), 2.0)(1, 0), 8.5);
    const Matrix v = update_view_centroids(x, crisp({0, 0, 1, 1}, 2), 2.0);
    EXPECT_DOUBLE_EQ(v(0, 0), 2.0);
    EXPECT_DOUBLE_EQ(v(1, 0), 15.0);
}

TEST(ViewWeightUpdate, HandExample) {
    const auto w = update_view_weights(Eigen::Vector2d(1, 2), 0.5);
    EXPECT_NEAR(w.alpha(0), 0.2, 1e-12);
    EXPECT_NEAR(w.alpha(1), 0.8, 1e-12);
}

TEST(ViewWeightUpdate, EqualCostsGiveUniformWeights) {
    const auto w = update_view_weights(Vector::Constant(4, 3.0), 0.3);
    for (Eigen::Index p = 0; p < 4; ++p) EXPECT_NEAR(w.alpha(p), 0.25, 1e-15);
}

TEST(ViewWeightUpdate, PermutationEquivariant) {
    const auto a = update_view_weights(Eigen::Vector3d(1, 4, 9), 0.4);
    const auto b = update_view_weights(Eigen::Vector3d(9, 1, 4), 0.4);
    EXPECT_NEAR(a.alpha(0), b.alpha(1), 1e-15);
    EXPECT_NEAR(a.alpha(1), b.alpha(2), 1e-15);
    EXPECT_NEAR(a.alpha(2), b.alpha(0), 1e-15);
}

TEST(ViewWeightUpdate, ZeroCostIsFloored) {
    const auto w = update_view_weights(Eigen::Vector2d(0.0, 1.0), 0.5);
    EXPECT_TRUE(w.is_valid());
    EXPECT_GT(w.alpha(0), 0.0);
}

TEST(ViewWeightUpdate, GammaZeroIsRejected) {
    EXPECT_THROW(update_view_weights(Eigen::Vector2d(1, 2), 0.0), DegenerateGammaError);
    EXPECT_THROW(run_minimax(MultiViewDataset({column({0, 1})}), MembershipMatrix::uniform(1, 2), [] {
        RunConfig c;
        c.k = 1;
        c.gamma = 0.0;
        return c;
    }()),
                 ConfigError);
}

TEST(ViewWeightUpdate, MaximisesOverSimplexGrid) {
    Rng rng(55);
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = static_cast<Eigen::Index>(2 + rng.below(2));
        Vector q(p);
        for (Eigen::Index i = 0; i < p; ++i) q(i) = 0.1 + 10.0 * rng.uniform();
        const double gamma = 0.1 + 0.8 * rng.uniform();
        const auto w = update_view_weights(q, gamma);
        const double engine = weighted_view_sum(w, q);
        double best = 0.0;
        const int steps = 100;
        for (int a = 0; a <= steps; ++a) {
            for (int b = 0; a + b <= steps; ++b) {
                if (p == 2 && a + b != steps) continue;
                const int c = steps - a - b;
                ViewWeights g;
                g.gamma = gamma;
                g.alpha = p == 2 ? Vector(Eigen::Vector2d(a / 100.0, b / 100.0)) : Vector(Eigen::Vector3d(a / 100.0, b / 100.0, c / 100.0));
                best = std::max(best, weighted_view_sum(g, q));
            }
        }
        EXPECT_GE(engine, best - 1e-12);
    }
}

TEST(RunMinimax, SingleViewTrajectoryMatchesFcm) {
    Rng rng(101);
    for (int trial = 0; trial < 5; ++trial) {
        const Matrix x = random_matrix(rng, 40, 2);
        const auto init = random_membership(rng, 3, 40);
        std::vector<Eigen::MatrixXd> fcm_steps, minimax_steps;
        run_wfcm_from_membership(x, {}, init, config_k(3), [&](const WfcmState& s) { fcm_steps.push_back(s.membership.values()); });
        run_minimax(MultiViewDataset({x}), init, config_k(3), {},
                    [&](const MinimaxState& s) { minimax_steps.push_back(s.consensus_membership.values()); });
        ASSERT_EQ(fcm_steps.size(), minimax_steps.size());
        for (std::size_t t = 0; t < fcm_steps.size(); ++t) {
            EXPECT_LE((fcm_steps[t] - minimax_steps[t]).cwiseAbs().maxCoeff(), 1e-9);
        }
    }
}

TEST(RunMinimax, DuplicatedViewKeepsEqualWeights) {
    Rng rng(7);
    const Matrix x = random_matrix(rng, 30, 2);
    run_minimax(MultiViewDataset({x, x}), random_membership(rng, 3, 30), config_k(3), {}, [](const MinimaxState& s) {
        EXPECT_DOUBLE_EQ(s.view_weights.alpha(0), 0.5);
        EXPECT_DOUBLE_EQ(s.view_weights.alpha(1), 0.5);
    });
}

TEST(RunMinimax, SweepsKeepConstraints) {
    Rng rng(8);
    for (int trial = 0; trial < 10; ++trial) {
        const auto data = random_dataset(rng, 20 + rng.below(60), 1 + rng.below(4));
        const auto k = 1 + rng.below(5);
        run_minimax(data, random_membership(rng, k, data.size()), config_k(k), {}, [](const MinimaxState& s) {
            EXPECT_LE(s.consensus_membership.max_column_error(), 1e-9);
            EXPECT_GE(s.consensus_membership.values().minCoeff(), 0.0);
            EXPECT_TRUE(s.view_weights.is_valid());
        });
    }
}

TEST(RunMinimax, MinimisationSweepDoesNotIncreaseObjectiveForFixedAlpha) {
    Rng rng(19);
    for (int trial = 0; trial < 20; ++trial) {
        const auto data = random_dataset(rng, 25, 3);
        const auto k = 2 + rng.below(3);
        auto u = random_membership(rng, k, data.size());
        const auto alpha = weights_of({0.2, 0.3, 0.5}, 0.5);
        CentroidSet v;
        for (std::size_t p = 0; p < 3; ++p) v.per_view.push_back(update_view_centroids(data.view(p), u, 2.0));
        double before = weighted_view_sum(alpha, view_costs(data, u, v, 2.0));
        for (int sweep = 0; sweep < 5; ++sweep) {
            for (std::size_t p = 0; p < 3; ++p) v.per_view[p] = update_view_centroids(data.view(p), u, 2.0);
            const double mid = weighted_view_sum(alpha, view_costs(data, u, v, 2.0));
            u = update_consensus_membership(data, v, alpha, 2.0);
            const double after = weighted_view_sum(alpha, view_costs(data, u, v, 2.0));
            EXPECT_LE(mid, before + 1e-9);
            EXPECT_LE(after, mid + 1e-9);
            before = after;
        }
    }
}

TEST(RunMinimax, GradientVanishesAtUpdatedCentroids) {
    Rng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        const auto data = random_dataset(rng, 10 + rng.below(30), 1 + rng.below(3));
        const auto k = 1 + rng.below(4);
        const auto u = random_membership(rng, k, data.size());
        ViewWeights alpha = ViewWeights::uniform(data.num_views(), 0.5);
        CentroidSet v;
        for (const auto& view : data.views()) v.per_view.push_back(update_view_centroids(view, u, 2.0));
        const auto objective = [&](const CentroidSet& c) { return weighted_view_sum(alpha, view_costs(data, u, c, 2.0)); };
        const double j0 = objective(v);
        const double h = 1e-5;
        for (std::size_t p = 0; p < v.num_views(); ++p) {
            for (Eigen::Index c = 0; c < v.per_view[p].rows(); ++c) {
                for (Eigen::Index d = 0; d < v.per_view[p].cols(); ++d) {
                    CentroidSet plus = v, minus = v;
                    plus.per_view[p](c, d) += h;
                    minus.per_view[p](c, d) -= h;
                    EXPECT_LE(std::abs(objective(plus) - objective(minus)) / (2 * h), 1e-6 * (1 + std::abs(j0)));
                }
            }
        }
    }
}

TEST(RunMinimax, SeparatedBlobsMatchExhaustiveBestPartition) {
    // Two clusters of four objects, separation ten times the spread, in two views.
    Rng rng(31);
    Matrix a(8, 2), b(8, 1);
    for (Eigen::Index i = 0; i < 8; ++i) {
        const double shift = i < 4 ? 0.0 : 10.0;
        a(i, 0) = shift + rng.normal();
        a(i, 1) = rng.normal();
        b(i, 0) = -shift + rng.normal();
    }
    const MultiViewDataset data({a, b});
    const auto state = run_minimax(data, init_farthest_first(data, 2), config_k(2));
    const auto rounded = state.consensus_membership.argmax();

    // Best crisp 2-partition under the equal-weight objective, by enumeration.
    double best = INFINITY;
    unsigned best_mask = 0;
    for (unsigned mask = 1; mask < 255; ++mask) {
        std::vector<int> assign(8);
        for (int i = 0; i < 8; ++i) assign[static_cast<std::size_t>(i)] = (mask >> i) & 1;
        const auto u = crisp(assign, 2);
        CentroidSet v;
        for (const auto& view : data.views()) v.per_view.push_back(update_view_centroids(view, u, 2.0));
        const double j = weighted_view_sum(ViewWeights::uniform(2, 0.5), view_costs(data, u, v, 2.0));
        if (j < best) {
            best = j;
            best_mask = mask;
        }
    }
    for (std::size_t i = 1; i < 8; ++i) {
        const bool same_engine = rounded[i] == rounded[0];
        const bool same_best = ((best_mask >> i) & 1) == (best_mask & 1);
        EXPECT_EQ(same_engine, same_best) << "object " << i;
    }
    EXPECT_EQ(best_mask == 0xF0 || best_mask == 0x0F, true);
}

TEST(FarthestFirst, OneDimensionalExample) {
    EXPECT_EQ(farthest_first_indices(column({0, 1, 10}), 2), (std::vector<std::size_t>{1, 2}));
}

TEST(FarthestFirst, SingleViewMembershipIsCrispAtSeeds) {
    const auto u = init_farthest_first(MultiViewDataset({column({0, 1, 10})}), 2);
    EXPECT_EQ(u(0, 1), 1.0);
    EXPECT_EQ(u(1, 2), 1.0);
    EXPECT_EQ(u(0, 0), 0.5);
    EXPECT_EQ(u(1, 0), 0.5);
}

TEST(FarthestFirst, KEqualsNGivesCrispColumns) {
    Rng rng(2);
    const auto u = init_farthest_first(MultiViewDataset({random_matrix(rng, 6, 2)}), 6);
    for (Eigen::Index i = 0; i < 6; ++i) EXPECT_EQ(u.values().col(i).maxCoeff(), 1.0);
}

TEST(FarthestFirst, MultiViewColumnsStayStochastic) {
    Rng rng(6);
    const auto data = random_dataset(rng, 12, 3);
    EXPECT_LE(init_farthest_first(data, 4).max_column_error(), 1e-12);
}

TEST(FcmConsensusInit, SingleViewIsThatViewsFcm) {
    Rng rng(3);
    const Matrix x = random_matrix(rng, 30, 2);
    const auto cfg = config_k(3);
    const auto consensus = init_fcm_consensus(MultiViewDataset({x}), cfg);
    Matrix seeds(3, 2);
    const auto idx = farthest_first_indices(x, 3);
    for (Eigen::Index c = 0; c < 3; ++c) seeds.row(c) = x.row(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(c)]));
    const auto direct = run_wfcm(x, {}, seeds, cfg).membership;
    EXPECT_LE((consensus.values() - direct.values()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(FcmConsensusInit, IdenticalViewsAverageToEachView) {
    Rng rng(4);
    const Matrix x = random_matrix(rng, 30, 2);
    const auto cfg = config_k(3);
    const auto one = init_fcm_consensus(MultiViewDataset({x}), cfg);
    const auto two = init_fcm_consensus(MultiViewDataset({x, x}), cfg);
    EXPECT_LE((one.values() - two.values()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(FcmConsensusInit, PermutedClustersAreAligned) {
    // View 2 is view 1 with features negated, so FCM finds the same partition
    // under a different cluster order.
    Matrix x(6, 1);
    x << 0, 0.2, 5, 5.3, 11, 11.1;
    const auto two = init_fcm_consensus(MultiViewDataset({x, Matrix(-x)}), config_k(3));
    EXPECT_LE(two.max_column_error(), 1e-12);
    const auto best = two.argmax();
    EXPECT_EQ(best[0], best[1]);
    EXPECT_NE(best[0], best[2]);
    EXPECT_GT(two.values().col(0).maxCoeff(), 0.9);
}
