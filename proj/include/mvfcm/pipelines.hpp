#pragma once

#include <optional>
#include <vector>

#include "mvfcm/core.hpp"
#include "mvfcm/fcm.hpp"
#include "mvfcm/minimax.hpp"

namespace mvfcm {

enum class NaiveBase { OFCM, SPFCM };
enum class MinimaxInit { FarthestFirst, FcmConsensus };

/// Multi-view centroids stacked over all chunks.
struct CentroidPool {
    std::vector<Matrix> per_view;
    std::optional<Vector> per_centroid_weights;
    std::vector<std::size_t> chunk_of_origin;

    std::size_t size() const { return chunk_of_origin.size(); }
    MultiViewDataset as_dataset() const { return MultiViewDataset(per_view); }
};

/// Label q_j = argmin_c sum_p ||x_j^(p) - v_c^(p)|| (unsquared), ties to the lowest index. 1-based.
Labels assign_labels(const MultiViewDataset& data, const CentroidSet& centroids);

/// Chunk partition used by the pipelines that cluster each chunk on its own:
/// a trailing chunk with fewer than k objects is folded into its predecessor.
std::vector<Chunk> partition_for_independent_chunks(const MultiViewDataset& data, const RunConfig& config);

/// Batch FCM on the seeded random object order, farthest-first seeded.
ClusterResult run_fcm(const Matrix& data, const RunConfig& config);

/// Single-pass FCM: k weighted centroids are carried into each following chunk.
ClusterResult run_spfcm(const Matrix& data, const RunConfig& config);
ClusterResult run_spfcm(const Matrix& data, const std::vector<Chunk>& chunks, const RunConfig& config);

struct OfcmPhases {
    std::vector<WfcmState> chunk_states;
    CentroidPool pool;  // single view, weighted by per-chunk cluster mass
    WfcmState final_state;
};

/// Online FCM: chunks are clustered independently, then their weighted centroids are re-clustered.
ClusterResult run_ofcm(const Matrix& data, const RunConfig& config);
OfcmPhases run_ofcm_phases(const std::vector<Chunk>& chunks, const RunConfig& config);

/// Base incremental algorithm per view; clusters are aligned to view 1 and
/// objects labelled by the summed distance rule.
ClusterResult run_naive_mv(const MultiViewDataset& data, const RunConfig& config, NaiveBase base);

struct IminimaxPhases {
    std::vector<MinimaxState> chunk_states;
    CentroidPool pool;
    MinimaxState final_state;
};

/// Phase 1 minimax per chunk, Phase 2 minimax over the pooled multi-view centroids.
ClusterResult run_iminimax(const MultiViewDataset& data, const RunConfig& config, MinimaxInit init);
IminimaxPhases run_iminimax_phases(const std::vector<Chunk>& chunks, const RunConfig& config, MinimaxInit init);

/// Dispatch on config.algorithm; single-view algorithms see the concatenated views.
/// Applies z-score normalisation first when config.normalize is set.
ClusterResult run_algorithm(const MultiViewDataset& data, const RunConfig& config);

}  // namespace mvfcm
