#include "mvfcm/pipelines.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "mvfcm/metrics.hpp"
#include "mvfcm/rng.hpp"

namespace mvfcm {

namespace {

constexpr std::size_t kAlignmentSample = 2000;

// Runs fn(0..count-1) on up to `workers` threads; results keep index order.
template <class Fn>
auto parallel_map(std::size_t count, unsigned workers, Fn fn) -> std::vector<decltype(fn(std::size_t{}))> {
    using T = decltype(fn(std::size_t{}));
    std::vector<std::optional<T>> slots(count);
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                slots[i].emplace(fn(i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const auto threads = std::min<std::size_t>(std::max(1u, workers), count);
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
    }
    std::vector<T> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (errors[i]) std::rethrow_exception(errors[i]);
        out.push_back(std::move(*slots[i]));
    }
    return out;
}

Matrix rows_of(const Matrix& view, const std::vector<std::size_t>& indices) {
    Matrix out(static_cast<Eigen::Index>(indices.size()), view.cols());
    for (std::size_t r = 0; r < indices.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = view.row(static_cast<Eigen::Index>(indices[r]));
    return out;
}

Matrix farthest_first_centroids(const Matrix& view, std::size_t k) { return rows_of(view, farthest_first_indices(view, k)); }

void check_single_view_config(std::size_t n, const RunConfig& config) {
    config.validate(n);
    if (chunk_size_for(n, config.chunk_fraction) < config.k) {
        throw ConfigError("chunk size " + std::to_string(chunk_size_for(n, config.chunk_fraction)) +
                          " is smaller than k = " + std::to_string(config.k));
    }
}

CentroidSet single_view_set(Matrix centroids) {
    CentroidSet set;
    set.per_view.push_back(std::move(centroids));
    return set;
}

void append(Diagnostics& into, const Diagnostics& from, const std::string& prefix) {
    for (const auto& d : from) into.push_back(prefix + d);
}

}  // namespace

Labels assign_labels(const MultiViewDataset& data, const CentroidSet& centroids) {
    if (centroids.num_views() != data.num_views()) throw ConfigError("centroid set and data disagree on the view count");
    const auto k = static_cast<Eigen::Index>(centroids.clusters());
    const auto n = static_cast<Eigen::Index>(data.size());
    Eigen::MatrixXd total = Eigen::MatrixXd::Zero(k, n);
    for (std::size_t p = 0; p < data.num_views(); ++p) {
        if (centroids.per_view[p].cols() != data.view(p).cols()) throw ConfigError("centroid dimension mismatch");
        total += squared_distances(data.view(p), centroids.per_view[p]).cwiseSqrt();
    }
    Labels labels(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::Index best = 0;
        for (Eigen::Index c = 1; c < k; ++c) {
            if (total(c, i) < total(best, i)) best = c;
        }
        labels[static_cast<std::size_t>(i)] = static_cast<int>(best) + 1;
    }
    return labels;
}

std::vector<Chunk> partition_for_independent_chunks(const MultiViewDataset& data, const RunConfig& config) {
    auto chunks = partition_into_chunks(data, config.chunk_fraction, config.seed);
    if (chunks.size() > 1 && chunks.back().origin_indices.size() < config.k) {
        Chunk tail = std::move(chunks.back());
        chunks.pop_back();
        Chunk& last = chunks.back();
        last.origin_indices.insert(last.origin_indices.end(), tail.origin_indices.begin(), tail.origin_indices.end());
        last.object_weights.insert(last.object_weights.end(), tail.object_weights.begin(), tail.object_weights.end());
        last.data = data.subset(last.origin_indices);
    }
    return chunks;
}

ClusterResult run_fcm(const Matrix& data, const RunConfig& config) {
    config.validate(static_cast<std::size_t>(data.rows()));
    const auto order = shuffled_indices(static_cast<std::size_t>(data.rows()), config.seed);
    const Matrix shuffled = rows_of(data, order);
    WfcmState state = run_wfcm(shuffled, {}, farthest_first_centroids(shuffled, config.k), config);

    ClusterResult result;
    result.centroids = single_view_set(state.centroids);
    result.labels = assign_labels(MultiViewDataset::single_view(data), result.centroids);
    result.membership = std::move(state.membership);
    result.iterations_per_stage = {state.iterations};
    result.objective_trace = std::move(state.objective_trace);
    result.diagnostics = std::move(state.diagnostics);
    return result;
}

ClusterResult run_spfcm(const Matrix& data, const RunConfig& config) {
    check_single_view_config(static_cast<std::size_t>(data.rows()), config);
    const auto chunks = partition_into_chunks(MultiViewDataset::single_view(data), config.chunk_fraction, config.seed);
    return run_spfcm(data, chunks, config);
}

ClusterResult run_spfcm(const Matrix& data, const std::vector<Chunk>& chunks, const RunConfig& config) {
    if (chunks.empty()) throw ConfigError("no chunks to cluster");
    const std::size_t k = config.k;
    ClusterResult result;
    Matrix carried;
    Vector carried_weights;
    WfcmState state;

    for (std::size_t m = 0; m < chunks.size(); ++m) {
        const Matrix& x = chunks[m].data.view(0);
        if (m == 0) {
            if (static_cast<std::size_t>(x.rows()) < k) throw ConfigError("first chunk is smaller than k");
            state = run_wfcm(x, chunks[m].object_weights, farthest_first_centroids(x, k), config);
        } else {
            // The chunk's objects (weight 1) followed by the k carried centroids.
            Matrix combined(x.rows() + carried.rows(), x.cols());
            combined << x, carried;
            std::vector<double> weights = chunks[m].object_weights;
            for (Eigen::Index c = 0; c < carried_weights.size(); ++c) weights.push_back(carried_weights(c));
            state = run_wfcm(combined, weights, carried, config);
        }
        carried = state.centroids;
        carried_weights = spfcm_cluster_weights(state.membership, state.object_weights);
        result.iterations_per_stage.push_back(state.iterations);
        append(result.diagnostics, state.diagnostics, "chunk " + std::to_string(m + 1) + ": ");
    }

    result.centroids = single_view_set(std::move(carried));
    result.centroids.weights = std::move(carried_weights);
    result.labels = assign_labels(MultiViewDataset::single_view(data), result.centroids);
    result.membership = std::move(state.membership);
    result.objective_trace = std::move(state.objective_trace);
    return result;
}

OfcmPhases run_ofcm_phases(const std::vector<Chunk>& chunks, const RunConfig& config) {
    if (chunks.empty()) throw ConfigError("no chunks to cluster");
    const std::size_t k = config.k;
    OfcmPhases phases;
    phases.chunk_states = parallel_map(chunks.size(), config.workers, [&](std::size_t m) {
        const Matrix& x = chunks[m].data.view(0);
        if (static_cast<std::size_t>(x.rows()) < k) throw ConfigError("chunk " + std::to_string(m + 1) + " is smaller than k");
        return run_wfcm(x, chunks[m].object_weights, farthest_first_centroids(x, k), config);
    });

    const auto dim = chunks.front().data.view(0).cols();
    Matrix pooled(static_cast<Eigen::Index>(chunks.size() * k), dim);
    Vector pooled_weights(pooled.rows());
    for (std::size_t m = 0; m < chunks.size(); ++m) {
        const auto& state = phases.chunk_states[m];
        const auto offset = static_cast<Eigen::Index>(m * k);
        pooled.middleRows(offset, static_cast<Eigen::Index>(k)) = state.centroids;
        pooled_weights.segment(offset, static_cast<Eigen::Index>(k)) = ofcm_cluster_weights(state.membership);
        for (std::size_t c = 0; c < k; ++c) phases.pool.chunk_of_origin.push_back(m);
    }
    phases.pool.per_view.push_back(pooled);
    phases.pool.per_centroid_weights = pooled_weights;

    const std::vector<double> weights(pooled_weights.data(), pooled_weights.data() + pooled_weights.size());
    phases.final_state = run_wfcm(pooled, weights, farthest_first_centroids(pooled, k), config);
    return phases;
}

ClusterResult run_ofcm(const Matrix& data, const RunConfig& config) {
    check_single_view_config(static_cast<std::size_t>(data.rows()), config);
    const auto single = MultiViewDataset::single_view(data);
    auto phases = run_ofcm_phases(partition_for_independent_chunks(single, config), config);

    ClusterResult result;
    for (std::size_t m = 0; m < phases.chunk_states.size(); ++m) {
        result.iterations_per_stage.push_back(phases.chunk_states[m].iterations);
        append(result.diagnostics, phases.chunk_states[m].diagnostics, "chunk " + std::to_string(m + 1) + ": ");
    }
    result.iterations_per_stage.push_back(phases.final_state.iterations);
    append(result.diagnostics, phases.final_state.diagnostics, "final: ");
    result.centroids = single_view_set(phases.final_state.centroids);
    result.centroids.weights = spfcm_cluster_weights(phases.final_state.membership, phases.final_state.object_weights);
    result.labels = assign_labels(single, result.centroids);
    result.membership = std::move(phases.final_state.membership);
    result.objective_trace = std::move(phases.final_state.objective_trace);
    return result;
}

ClusterResult run_naive_mv(const MultiViewDataset& data, const RunConfig& config, NaiveBase base) {
    check_single_view_config(data.size(), config);
    const std::size_t k = config.k;

    auto per_view = parallel_map(data.num_views(), config.workers, [&](std::size_t p) {
        return base == NaiveBase::OFCM ? run_ofcm(data.view(p), config) : run_spfcm(data.view(p), config);
    });

    // Align each view's clusters to view 1 using nearest-centroid labels on a sample.
    const auto order = shuffled_indices(data.size(), config.seed);
    const std::vector<std::size_t> sample(order.begin(),
                                          order.begin() + static_cast<std::ptrdiff_t>(std::min(order.size(), kAlignmentSample)));
    const auto sample_labels = [&](std::size_t p) {
        return assign_labels(MultiViewDataset::single_view(rows_of(data.view(p), sample)), per_view[p].centroids);
    };
    const Labels reference = sample_labels(0);

    ClusterResult result;
    result.centroids.per_view.push_back(per_view[0].centroids.per_view[0]);
    for (std::size_t p = 1; p < data.num_views(); ++p) {
        const Labels labels = sample_labels(p);
        Eigen::MatrixXd overlap = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
        for (std::size_t i = 0; i < sample.size(); ++i) overlap(reference[i] - 1, labels[i] - 1) += 1.0;
        const auto match = max_weight_assignment(overlap);
        const Matrix& own = per_view[p].centroids.per_view[0];
        Matrix aligned(own.rows(), own.cols());
        for (std::size_t c = 0; c < k; ++c) aligned.row(static_cast<Eigen::Index>(c)) = own.row(match[c]);
        result.centroids.per_view.push_back(std::move(aligned));
    }

    for (std::size_t p = 0; p < data.num_views(); ++p) {
        for (int it : per_view[p].iterations_per_stage) result.iterations_per_stage.push_back(it);
        append(result.diagnostics, per_view[p].diagnostics, "view " + std::to_string(p + 1) + ": ");
    }
    result.labels = assign_labels(data, result.centroids);
    result.membership = std::move(per_view.back().membership);
    result.objective_trace = std::move(per_view.back().objective_trace);
    return result;
}

IminimaxPhases run_iminimax_phases(const std::vector<Chunk>& chunks, const RunConfig& config, MinimaxInit init) {
    if (chunks.empty()) throw ConfigError("no chunks to cluster");
    const std::size_t k = config.k;
    const auto initial_membership = [&](const MultiViewDataset& d) {
        return init == MinimaxInit::FarthestFirst ? init_farthest_first(d, k) : init_fcm_consensus(d, config);
    };

    IminimaxPhases phases;
    phases.chunk_states = parallel_map(chunks.size(), config.workers, [&](std::size_t m) {
        const auto& d = chunks[m].data;
        if (d.size() < k) throw ConfigError("chunk " + std::to_string(m + 1) + " is smaller than k");
        return run_minimax(d, initial_membership(d), config);
    });

    const std::size_t views = chunks.front().data.num_views();
    for (std::size_t p = 0; p < views; ++p) {
        Matrix stacked(static_cast<Eigen::Index>(chunks.size() * k), chunks.front().data.view(p).cols());
        for (std::size_t m = 0; m < chunks.size(); ++m) {
            stacked.middleRows(static_cast<Eigen::Index>(m * k), static_cast<Eigen::Index>(k)) =
                phases.chunk_states[m].centroids.per_view[p];
        }
        phases.pool.per_view.push_back(std::move(stacked));
    }
    Vector mass(static_cast<Eigen::Index>(chunks.size() * k));
    for (std::size_t m = 0; m < chunks.size(); ++m) {
        mass.segment(static_cast<Eigen::Index>(m * k), static_cast<Eigen::Index>(k)) =
            ofcm_cluster_weights(phases.chunk_states[m].consensus_membership);
        for (std::size_t c = 0; c < k; ++c) phases.pool.chunk_of_origin.push_back(m);
    }
    phases.pool.per_centroid_weights = mass;

    const MultiViewDataset pool = phases.pool.as_dataset();
    std::vector<double> weights;
    if (config.weighted_phase2) weights.assign(mass.data(), mass.data() + mass.size());
    phases.final_state = run_minimax(pool, initial_membership(pool), config, weights);
    return phases;
}

ClusterResult run_iminimax(const MultiViewDataset& data, const RunConfig& config, MinimaxInit init) {
    check_single_view_config(data.size(), config);
    auto phases = run_iminimax_phases(partition_for_independent_chunks(data, config), config, init);

    ClusterResult result;
    for (std::size_t m = 0; m < phases.chunk_states.size(); ++m) {
        result.iterations_per_stage.push_back(phases.chunk_states[m].iterations);
        append(result.diagnostics, phases.chunk_states[m].diagnostics, "chunk " + std::to_string(m + 1) + ": ");
    }
    auto& final_state = phases.final_state;
    result.iterations_per_stage.push_back(final_state.iterations);
    append(result.diagnostics, final_state.diagnostics, "final: ");
    result.centroids = final_state.centroids;
    result.centroids.weights = ofcm_cluster_weights(final_state.consensus_membership);
    result.labels = assign_labels(data, result.centroids);
    result.view_weights = final_state.view_weights;
    result.membership = std::move(final_state.consensus_membership);
    result.objective_trace = std::move(final_state.objective_trace);
    return result;
}

ClusterResult run_algorithm(const MultiViewDataset& input, const RunConfig& config) {
    const MultiViewDataset data = config.normalize ? zscore_normalize(input) : input;
    switch (config.algorithm) {
        case Algorithm::FCM: return run_fcm(data.concatenated(), config);
        case Algorithm::SPFCM: return run_spfcm(data.concatenated(), config);
        case Algorithm::OFCM: return run_ofcm(data.concatenated(), config);
        case Algorithm::NaiveMVOFCM: return run_naive_mv(data, config, NaiveBase::OFCM);
        case Algorithm::NaiveMVSPFCM: return run_naive_mv(data, config, NaiveBase::SPFCM);
        case Algorithm::IminimaxFCM1: return run_iminimax(data, config, MinimaxInit::FarthestFirst);
        case Algorithm::IminimaxFCM2: return run_iminimax(data, config, MinimaxInit::FcmConsensus);
    }
    throw ConfigError("unknown algorithm");
}

}  // namespace mvfcm
