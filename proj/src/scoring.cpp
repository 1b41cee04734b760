#include <algorithm>
#include <cmath>
#include <limits>

#include "bioledger/biometrics.hpp"

namespace bioledger {

std::string modality_name(Modality m) {
    switch (m) {
        case Modality::Face: return "face";
        case Modality::SignatureGlobal: return "signature_global";
        case Modality::SignatureLocal: return "signature_local";
    }
    throw std::invalid_argument("unknown modality");
}

Modality modality_from_name(const std::string& name) {
    if (name == "face") return Modality::Face;
    if (name == "signature_global" || name == "global") return Modality::SignatureGlobal;
    if (name == "signature_local" || name == "local") return Modality::SignatureLocal;
    throw std::invalid_argument("unknown modality: " + name);
}

void FeatureVector::validate() const {
    size_t cap = modality == Modality::Face ? 4096 : 100;
    if (values.size() > cap) {
        throw std::invalid_argument("feature vector exceeds the " + modality_name(modality) +
                                    " dimension cap of " + std::to_string(cap));
    }
    for (double v : values) {
        if (!std::isfinite(v)) throw std::invalid_argument("feature vector has a non-finite entry");
    }
}

void TimeFunctionSet::validate() const {
    if (channels.empty() || channels[0].empty()) throw EmptySequence();
    if (channels.size() > 21) throw ChannelMismatch();
    for (const auto& c : channels) {
        if (c.size() != channels[0].size()) throw EmptySequence();
    }
}

double euclidean_score(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw LengthMismatch();
    double sum = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

double euclidean_score(const FeatureVector& a, const FeatureVector& b) {
    a.validate();
    b.validate();
    return euclidean_score(std::span(a.values), std::span(b.values));
}

double euclidean_subset(std::span<const double> a, std::span<const double> b,
                        std::span<const size_t> subset) {
    if (a.size() != b.size()) throw LengthMismatch();
    double sum = 0.0;
    for (size_t i : subset) {
        double d = a[i] - b[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

std::vector<double> population_variance(const std::vector<std::vector<double>>& samples) {
    if (samples.empty()) return {};
    size_t dim = samples[0].size();
    std::vector<double> mean(dim, 0.0), var(dim, 0.0);
    for (const auto& s : samples) {
        if (s.size() != dim) throw DimensionMismatch();
        for (size_t i = 0; i < dim; ++i) mean[i] += s[i];
    }
    for (auto& m : mean) m /= static_cast<double>(samples.size());
    for (const auto& s : samples) {
        for (size_t i = 0; i < dim; ++i) {
            double d = s[i] - mean[i];
            var[i] += d * d;
        }
    }
    for (auto& v : var) v /= static_cast<double>(samples.size());
    return var;
}

UserModel fit_user_model(const std::vector<std::vector<double>>& samples,
                         const std::vector<double>& variance_floor) {
    if (samples.empty()) throw std::invalid_argument("cannot fit a model on zero samples");
    size_t dim = samples[0].size();
    if (variance_floor.size() != dim) throw DimensionMismatch();

    UserModel model;
    model.training_count = static_cast<int>(samples.size());
    model.mean.assign(dim, 0.0);
    model.variance = population_variance(samples);
    for (const auto& s : samples) {
        if (s.size() != dim) throw DimensionMismatch();
        for (size_t i = 0; i < dim; ++i) model.mean[i] += s[i];
    }
    for (auto& m : model.mean) m /= static_cast<double>(samples.size());
    for (size_t i = 0; i < dim; ++i) {
        double floored = std::max(model.variance[i], variance_floor[i]);
        if (floored <= 0.0) throw DegenerateModel();
        model.variance[i] = floored;
    }
    return model;
}

double mahalanobis_score(const UserModel& model, std::span<const double> sample) {
    if (sample.size() != model.mean.size()) throw DimensionMismatch();
    double sum = 0.0;
    for (size_t i = 0; i < sample.size(); ++i) {
        if (model.variance[i] <= 0.0) throw DegenerateModel();
        double d = sample[i] - model.mean[i];
        sum += d * d / model.variance[i];
    }
    return std::sqrt(sum);
}

double mahalanobis_score(const UserModel& model, const FeatureVector& sample) {
    sample.validate();
    return mahalanobis_score(model, std::span(sample.values));
}

double mahalanobis_subset(const UserModel& model, std::span<const double> sample,
                          std::span<const size_t> subset) {
    if (sample.size() != model.mean.size()) throw DimensionMismatch();
    double sum = 0.0;
    for (size_t i : subset) {
        if (model.variance[i] <= 0.0) throw DegenerateModel();
        double d = sample[i] - model.mean[i];
        sum += d * d / model.variance[i];
    }
    return std::sqrt(sum);
}

namespace {

double cell_cost(const TimeFunctionSet& a, const TimeFunctionSet& b, size_t i, size_t j) {
    double sum = 0.0;
    for (size_t c = 0; c < a.channels.size(); ++c) {
        double d = a.channels[c][i] - b.channels[c][j];
        sum += d * d;
    }
    return std::sqrt(sum);
}

}  // namespace

double dtw_score(const TimeFunctionSet& a, const TimeFunctionSet& b, const DtwOptions& options) {
    a.validate();
    b.validate();
    if (a.channel_count() != b.channel_count()) throw ChannelMismatch();

    const size_t n = a.length();
    const size_t m = b.length();
    constexpr double kInf = std::numeric_limits<double>::infinity();

    // two-row dynamic program over the alignment lattice
    std::vector<double> prev(m, kInf), cur(m, kInf);
    for (size_t i = 0; i < n; ++i) {
        std::fill(cur.begin(), cur.end(), kInf);
        size_t j_lo = 0, j_hi = m;
        if (options.band.has_value()) {
            // Sakoe-Chiba band around the diagonal scaled to the lengths
            double center = m == 1 ? 0.0 : static_cast<double>(i) * (m - 1) / std::max<size_t>(n - 1, 1);
            double half = static_cast<double>(*options.band);
            j_lo = center - half < 0 ? 0 : static_cast<size_t>(center - half);
            j_hi = std::min<size_t>(m, static_cast<size_t>(center + half) + 1);
        }
        for (size_t j = j_lo; j < j_hi; ++j) {
            double cost = cell_cost(a, b, i, j);
            double best;
            if (i == 0 && j == 0) {
                best = 0.0;
            } else {
                best = kInf;
                if (i > 0) best = std::min(best, prev[j]);
                if (j > 0) best = std::min(best, cur[j - 1]);
                if (i > 0 && j > 0) best = std::min(best, prev[j - 1]);
            }
            cur[j] = cost + best;
        }
        std::swap(prev, cur);
    }

    double total = prev[m - 1];
    if (!options.normalize) return total;
    return total / static_cast<double>(n + m);
}

double verify_local(const std::vector<TimeFunctionSet>& enrollment, const TimeFunctionSet& query,
                    const DtwOptions& options) {
    if (enrollment.size() != 5) throw WrongEnrollmentCount();
    double sum = 0.0;
    for (const auto& sample : enrollment) sum += dtw_score(sample, query, options);
    return sum / 5.0;
}

}  // namespace bioledger
