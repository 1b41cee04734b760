#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "bioledger/biometrics.hpp"

namespace bioledger {

struct SizeExceedsDimension : std::invalid_argument {
    SizeExceedsDimension() : std::invalid_argument("requested subset size exceeds feature dimension") {}
};

/// Subset quality; higher is better. Throws propagate to the caller.
using SubsetCriterion = std::function<double(const std::vector<size_t>&)>;

struct SelectedSubset {
    std::vector<size_t> features;  // sorted ascending
    double quality = 0.0;
};

/// Sequential forward floating search. Records the best subset found for
/// every size up to max(target_sizes). The plain forward pass seeds the
/// records, so per-size quality never falls below straight forward
/// selection; floating removals then only replace a record when they
/// strictly improve it. Ties break on the lowest feature index.
std::map<size_t, SelectedSubset> sffs_select(size_t pool_size, const SubsetCriterion& criterion,
                                             const std::vector<size_t>& target_sizes);

struct SweepPoint {
    size_t size = 0;
    double eer_percent = 0.0;
    uint64_t seed = 0;
};

/// Feature embeddings with integer identity labels.
struct LabeledEmbeddings {
    std::vector<std::vector<double>> vectors;
    std::vector<int> labels;

    size_t dim() const { return vectors.empty() ? 0 : vectors[0].size(); }
};

/// Genuine/impostor Euclidean scores over an index subset, pair sampling
/// capped per class (deterministic in `seed`).
ScoreSet pairwise_euclidean_scores(const LabeledEmbeddings& data, const std::vector<size_t>& subset,
                                   size_t max_pairs_per_class, uint64_t seed);

/// For each requested size, draws one uniform random feature subset and
/// reports the EER of Euclidean matching restricted to it. Size equal to
/// the full dimension short-circuits to the identity subset.
std::vector<SweepPoint> random_removal_sweep(const LabeledEmbeddings& data,
                                             const std::vector<size_t>& sizes, uint64_t seed,
                                             size_t max_pairs_per_class = 3000);

/// Train-5 / test-rest protocol over per-user feature vectors with
/// Mahalanobis scoring: genuine scores from held-out samples against the
/// owner's model, impostor scores from other users' samples.
ScoreSet mahalanobis_protocol_scores(const std::vector<std::vector<std::vector<double>>>& users,
                                     const std::vector<size_t>& subset, int train_count = 5);

}  // namespace bioledger
