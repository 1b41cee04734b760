#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bioledger {

struct LengthMismatch : std::invalid_argument {
    LengthMismatch() : std::invalid_argument("feature vectors differ in length") {}
};
struct DimensionMismatch : std::invalid_argument {
    DimensionMismatch() : std::invalid_argument("sample dimension does not match the model") {}
};
struct DegenerateModel : std::invalid_argument {
    DegenerateModel() : std::invalid_argument("model variance is zero before regularization") {}
};
struct ChannelMismatch : std::invalid_argument {
    ChannelMismatch() : std::invalid_argument("time function sets differ in channel count") {}
};
struct EmptySequence : std::invalid_argument {
    EmptySequence() : std::invalid_argument("time function set has no samples") {}
};
struct WrongEnrollmentCount : std::invalid_argument {
    WrongEnrollmentCount() : std::invalid_argument("local verification expects exactly 5 enrollment samples") {}
};
struct EmptyScores : std::invalid_argument {
    EmptyScores() : std::invalid_argument("score set needs genuine and impostor scores") {}
};

enum class Modality { Face, SignatureGlobal, SignatureLocal };

std::string modality_name(Modality m);
Modality modality_from_name(const std::string& name);

/// Fixed-length feature embedding (face CNN features, global signature
/// features). Face embeddings carry up to 4096 values, global signature
/// vectors up to 100.
struct FeatureVector {
    std::vector<double> values;
    Modality modality = Modality::Face;

    void validate() const;
};

/// Multichannel time series: 1 to 21 channels, every channel the same
/// sample count.
struct TimeFunctionSet {
    std::vector<std::vector<double>> channels;

    size_t channel_count() const { return channels.size(); }
    size_t length() const { return channels.empty() ? 0 : channels[0].size(); }
    void validate() const;
};

/// Per-user diagonal-covariance model trained on a handful of samples.
struct UserModel {
    std::vector<double> mean;
    std::vector<double> variance;
    int training_count = 5;
};

enum class ScorePolarity { Distance, Similarity };

struct ScoreSet {
    std::vector<double> genuine;
    std::vector<double> impostor;
    ScorePolarity polarity = ScorePolarity::Distance;
};

double euclidean_score(const FeatureVector& a, const FeatureVector& b);
double euclidean_score(std::span<const double> a, std::span<const double> b);

/// Euclidean over an index subset of both vectors.
double euclidean_subset(std::span<const double> a, std::span<const double> b,
                        std::span<const size_t> subset);

/// Mean and floored diagonal variance over one user's training samples.
/// `variance_floor` is per-feature (typically 1e-6 of the population
/// variance); zero-variance features without a positive floor throw.
UserModel fit_user_model(const std::vector<std::vector<double>>& samples,
                         const std::vector<double>& variance_floor);

std::vector<double> population_variance(const std::vector<std::vector<double>>& samples);

double mahalanobis_score(const UserModel& model, const FeatureVector& sample);
double mahalanobis_score(const UserModel& model, std::span<const double> sample);
double mahalanobis_subset(const UserModel& model, std::span<const double> sample,
                          std::span<const size_t> subset);

struct DtwOptions {
    /// Normalize the accumulated cost by len(a) + len(b).
    bool normalize = true;
    /// Optional Sakoe-Chiba band half-width; unset means unconstrained.
    std::optional<size_t> band;
};

/// Elastic distance between two multichannel sequences: dynamic programming
/// over steps {(1,0),(0,1),(1,1)} with per-cell cost equal to the Euclidean
/// distance across channels.
double dtw_score(const TimeFunctionSet& a, const TimeFunctionSet& b, const DtwOptions& options = {});

/// Average of the five one-to-one DTW comparisons against the enrollment
/// set.
double verify_local(const std::vector<TimeFunctionSet>& enrollment, const TimeFunctionSet& query,
                    const DtwOptions& options = {});

struct EerResult {
    double eer_percent = 0.0;
    double threshold = 0.0;
    double far_at_threshold = 0.0;
    double frr_at_threshold = 0.0;
};

/// Equal error rate by threshold sweep over the merged score support with
/// linear interpolation between the bracketing thresholds.
EerResult compute_eer(const ScoreSet& scores);

}  // namespace bioledger
