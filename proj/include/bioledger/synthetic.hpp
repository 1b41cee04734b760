#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bioledger/biometrics.hpp"
#include "bioledger/selection.hpp"

namespace bioledger {

/// Desk-scale synthetic stand-ins for the face/signature corpora. All
/// generators are bit-deterministic in their seed.

/// Face embeddings: per-user Gaussian clusters living in a shared low-rank
/// subspace of the ambient dimension, plus a whisper of ambient noise. The
/// low intrinsic rank is what makes aggressive feature removal nearly free,
/// mirroring the redundancy of CNN embeddings.
LabeledEmbeddings generate_face_embeddings(size_t users, size_t samples_per_user, size_t dim,
                                           size_t rank, double separation, uint64_t seed);

/// Global signature features: the first `informative` dimensions carry
/// user identity at the given separation; the tail is identity-free noise
/// of growing amplitude. Model fitting on 5 samples degrades as noisy tail
/// features are added, which produces the familiar peaking curve.
LabeledEmbeddings generate_global_features(size_t users, size_t samples_per_user, size_t dim,
                                           size_t informative, double separation, uint64_t seed);

/// Dynamic signatures: per-user smooth 2D trajectories (sums of seeded
/// sinusoids) sampled with per-point jitter and per-sample length
/// variation, expanded into derived channels (coordinates, deltas, speeds,
/// angles, ...).
std::vector<std::vector<TimeFunctionSet>> generate_local_signatures(size_t users,
                                                                    size_t samples_per_user,
                                                                    size_t channels,
                                                                    size_t base_length,
                                                                    double separation, uint64_t seed);

struct SyntheticDataset {
    Modality modality = Modality::Face;
    size_t users = 0;
    size_t samples_per_user = 0;
    double separation = 1.0;
    uint64_t seed = 0;
    LabeledEmbeddings embeddings;                             // face / signature_global
    std::vector<std::vector<TimeFunctionSet>> trajectories;   // signature_local
};

/// Default-dimension generator front end (face 4096 @ rank 50, global 100
/// with 30 informative, local 21 channels around 100 samples).
SyntheticDataset generate_synthetic(Modality modality, size_t users, size_t samples_per_user,
                                    double separation, uint64_t seed);

/// Groups embedding vectors by label, preserving sample order.
std::vector<std::vector<std::vector<double>>> embeddings_by_user(const LabeledEmbeddings& data);

void save_dataset(const SyntheticDataset& dataset, const std::string& path);
SyntheticDataset load_dataset(const std::string& path);

}  // namespace bioledger
