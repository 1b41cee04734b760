#include "bioledger/selection.hpp"

#include <algorithm>

#include "bioledger/rng.hpp"

namespace bioledger {

namespace {

std::vector<size_t> sorted_copy(std::vector<size_t> v) {
    std::sort(v.begin(), v.end());
    return v;
}

void record_best(std::map<size_t, SelectedSubset>& best, const std::vector<size_t>& subset,
                 double quality) {
    auto it = best.find(subset.size());
    if (it == best.end() || quality > it->second.quality) {
        best[subset.size()] = {sorted_copy(subset), quality};
    }
}

/// Best single feature to add; ties go to the lowest index.
struct Candidate {
    size_t feature;
    double quality;
    bool valid = false;
};

Candidate best_addition(size_t pool_size, const std::vector<size_t>& current,
                        const SubsetCriterion& criterion) {
    Candidate best;
    std::vector<bool> in_set(pool_size, false);
    for (size_t f : current) in_set[f] = true;
    for (size_t f = 0; f < pool_size; ++f) {
        if (in_set[f]) continue;
        std::vector<size_t> trial = current;
        trial.push_back(f);
        std::sort(trial.begin(), trial.end());
        double q = criterion(trial);
        if (!best.valid || q > best.quality) {
            best = {f, q, true};
        }
    }
    return best;
}

Candidate best_removal(const std::vector<size_t>& current, const SubsetCriterion& criterion) {
    Candidate best;
    for (size_t f : current) {
        std::vector<size_t> trial;
        trial.reserve(current.size() - 1);
        for (size_t g : current) {
            if (g != f) trial.push_back(g);
        }
        double q = criterion(trial);
        if (!best.valid || q > best.quality) {
            best = {f, q, true};
        }
    }
    return best;
}

}  // namespace

std::map<size_t, SelectedSubset> sffs_select(size_t pool_size, const SubsetCriterion& criterion,
                                             const std::vector<size_t>& target_sizes) {
    if (target_sizes.empty()) return {};
    size_t max_size = *std::max_element(target_sizes.begin(), target_sizes.end());
    if (max_size > pool_size) throw SizeExceedsDimension();

    std::map<size_t, SelectedSubset> best;

    // plain forward pass seeds the per-size records
    {
        std::vector<size_t> subset;
        while (subset.size() < max_size) {
            Candidate add = best_addition(pool_size, subset, criterion);
            subset.push_back(add.feature);
            std::sort(subset.begin(), subset.end());
            record_best(best, subset, add.quality);
        }
    }

    // floating search proper
    std::vector<size_t> subset;
    while (subset.size() < max_size) {
        Candidate add = best_addition(pool_size, subset, criterion);
        subset.push_back(add.feature);
        std::sort(subset.begin(), subset.end());
        record_best(best, subset, add.quality);

        // conditional exclusions: keep removing while it strictly improves
        // the recorded best at the reduced size
        while (subset.size() > 2) {
            Candidate drop = best_removal(subset, criterion);
            size_t reduced = subset.size() - 1;
            if (drop.quality > best[reduced].quality) {
                subset.erase(std::find(subset.begin(), subset.end(), drop.feature));
                record_best(best, subset, drop.quality);
            } else {
                break;
            }
        }
    }

    std::map<size_t, SelectedSubset> out;
    for (size_t size : target_sizes) out[size] = best.at(size);
    return out;
}

ScoreSet pairwise_euclidean_scores(const LabeledEmbeddings& data, const std::vector<size_t>& subset,
                                   size_t max_pairs_per_class, uint64_t seed) {
    std::vector<std::pair<size_t, size_t>> genuine_pairs, impostor_pairs;
    for (size_t i = 0; i < data.vectors.size(); ++i) {
        for (size_t j = i + 1; j < data.vectors.size(); ++j) {
            if (data.labels[i] == data.labels[j]) {
                genuine_pairs.push_back({i, j});
            } else {
                impostor_pairs.push_back({i, j});
            }
        }
    }

    auto sample_pairs = [&](std::vector<std::pair<size_t, size_t>>& pairs, uint64_t stream) {
        if (pairs.size() <= max_pairs_per_class) return;
        Rng rng(seed, stream);
        // partial Fisher-Yates: the first max_pairs entries are a uniform sample
        for (size_t i = 0; i < max_pairs_per_class; ++i) {
            size_t j = i + rng.next_below(pairs.size() - i);
            std::swap(pairs[i], pairs[j]);
        }
        pairs.resize(max_pairs_per_class);
    };
    sample_pairs(genuine_pairs, 1);
    sample_pairs(impostor_pairs, 2);

    ScoreSet scores;
    scores.polarity = ScorePolarity::Distance;
    for (auto [i, j] : genuine_pairs) {
        scores.genuine.push_back(euclidean_subset(data.vectors[i], data.vectors[j], subset));
    }
    for (auto [i, j] : impostor_pairs) {
        scores.impostor.push_back(euclidean_subset(data.vectors[i], data.vectors[j], subset));
    }
    return scores;
}

std::vector<SweepPoint> random_removal_sweep(const LabeledEmbeddings& data,
                                             const std::vector<size_t>& sizes, uint64_t seed,
                                             size_t max_pairs_per_class) {
    size_t dim = data.dim();
    std::vector<SweepPoint> out;
    for (size_t size : sizes) {
        if (size > dim) throw SizeExceedsDimension();
        std::vector<size_t> subset(dim);
        for (size_t i = 0; i < dim; ++i) subset[i] = i;
        if (size < dim) {
            Rng rng(seed, size);
            for (size_t i = 0; i < size; ++i) {
                size_t j = i + rng.next_below(dim - i);
                std::swap(subset[i], subset[j]);
            }
            subset.resize(size);
            std::sort(subset.begin(), subset.end());
        }
        ScoreSet scores = pairwise_euclidean_scores(data, subset, max_pairs_per_class, seed);
        out.push_back({size, compute_eer(scores).eer_percent, seed});
    }
    return out;
}

ScoreSet mahalanobis_protocol_scores(const std::vector<std::vector<std::vector<double>>>& users,
                                     const std::vector<size_t>& subset, int train_count) {
    if (users.empty()) throw EmptyScores();

    // population variance over all training samples sets the floor scale
    std::vector<std::vector<double>> all_train;
    for (const auto& samples : users) {
        for (int k = 0; k < train_count && k < static_cast<int>(samples.size()); ++k) {
            all_train.push_back(samples[k]);
        }
    }
    std::vector<double> floor = population_variance(all_train);
    for (auto& f : floor) f = std::max(f * 1e-6, 1e-12);

    std::vector<UserModel> models;
    models.reserve(users.size());
    for (const auto& samples : users) {
        std::vector<std::vector<double>> train(samples.begin(),
                                               samples.begin() + std::min<size_t>(train_count, samples.size()));
        models.push_back(fit_user_model(train, floor));
    }

    ScoreSet scores;
    scores.polarity = ScorePolarity::Distance;
    for (size_t u = 0; u < users.size(); ++u) {
        // held-out genuine samples against the owner's model
        for (size_t k = train_count; k < users[u].size(); ++k) {
            scores.genuine.push_back(mahalanobis_subset(models[u], users[u][k], subset));
        }
        // one genuine sample of every other user as a zero-effort impostor
        for (size_t v = 0; v < users.size(); ++v) {
            if (v == u || users[v].size() <= static_cast<size_t>(train_count)) continue;
            scores.impostor.push_back(mahalanobis_subset(models[u], users[v][train_count], subset));
        }
    }
    return scores;
}

}  // namespace bioledger
