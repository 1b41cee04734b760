#include "bioledger/synthetic.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <stdexcept>

#include "bioledger/rng.hpp"
#include "json.hpp"

namespace bioledger {

using nlohmann::json;

LabeledEmbeddings generate_face_embeddings(size_t users, size_t samples_per_user, size_t dim,
                                           size_t rank, double separation, uint64_t seed) {
    Rng basis_rng(seed, 1);
    // shared basis, rows roughly unit-norm
    std::vector<std::vector<double>> basis(rank, std::vector<double>(dim));
    double scale = 1.0 / std::sqrt(static_cast<double>(dim));
    for (auto& row : basis) {
        for (auto& v : row) v = basis_rng.gaussian() * scale;
    }

    LabeledEmbeddings out;
    out.vectors.reserve(users * samples_per_user);
    out.labels.reserve(users * samples_per_user);

    Rng user_rng(seed, 2);
    std::vector<std::vector<double>> user_latent(users, std::vector<double>(rank));
    for (auto& latent : user_latent) {
        for (auto& v : latent) v = user_rng.gaussian() * separation;
    }

    for (size_t u = 0; u < users; ++u) {
        Rng sample_rng(seed, 100 + u);
        for (size_t s = 0; s < samples_per_user; ++s) {
            std::vector<double> latent(rank);
            for (size_t k = 0; k < rank; ++k) latent[k] = user_latent[u][k] + sample_rng.gaussian();
            std::vector<double> vec(dim, 0.0);
            for (size_t k = 0; k < rank; ++k) {
                double w = latent[k];
                const auto& row = basis[k];
                for (size_t i = 0; i < dim; ++i) vec[i] += w * row[i];
            }
            for (size_t i = 0; i < dim; ++i) vec[i] += 0.01 * sample_rng.gaussian();
            out.vectors.push_back(std::move(vec));
            out.labels.push_back(static_cast<int>(u));
        }
    }
    return out;
}

LabeledEmbeddings generate_global_features(size_t users, size_t samples_per_user, size_t dim,
                                           size_t informative, double separation, uint64_t seed) {
    if (informative > dim) throw std::invalid_argument("informative count exceeds dimension");

    Rng user_rng(seed, 3);
    std::vector<std::vector<double>> user_mean(users, std::vector<double>(informative));
    for (auto& mean : user_mean) {
        for (auto& v : mean) v = user_rng.gaussian() * separation;
    }

    LabeledEmbeddings out;
    for (size_t u = 0; u < users; ++u) {
        Rng sample_rng(seed, 200 + u);
        for (size_t s = 0; s < samples_per_user; ++s) {
            std::vector<double> vec(dim);
            for (size_t i = 0; i < informative; ++i) {
                vec[i] = user_mean[u][i] + sample_rng.gaussian();
            }
            for (size_t i = informative; i < dim; ++i) {
                // identity-free tail, noise amplitude ramping up
                double ramp = 1.0 + 5.0 * static_cast<double>(i - informative) /
                                        std::max<size_t>(dim - informative, 1);
                vec[i] = ramp * sample_rng.gaussian();
            }
            out.vectors.push_back(std::move(vec));
            out.labels.push_back(static_cast<int>(u));
        }
    }
    return out;
}

namespace {

std::vector<double> diff(const std::vector<double>& v) {
    std::vector<double> d(v.size(), 0.0);
    for (size_t i = 1; i < v.size(); ++i) d[i] = v[i] - v[i - 1];
    if (v.size() > 1) d[0] = d[1];
    return d;
}

}  // namespace

std::vector<std::vector<TimeFunctionSet>> generate_local_signatures(size_t users,
                                                                    size_t samples_per_user,
                                                                    size_t channels,
                                                                    size_t base_length,
                                                                    double separation, uint64_t seed) {
    if (channels == 0 || channels > 21) throw std::invalid_argument("channel count must be in [1, 21]");

    constexpr int kHarmonics = 3;
    std::vector<std::vector<TimeFunctionSet>> out(users);

    Rng user_rng(seed, 4);
    for (size_t u = 0; u < users; ++u) {
        // per-user pen-stroke "style": harmonic amplitudes and phases
        double ax[kHarmonics], ay[kHarmonics], px[kHarmonics], py[kHarmonics];
        for (int h = 0; h < kHarmonics; ++h) {
            ax[h] = 1.0 / (h + 1) + separation * 0.35 * user_rng.gaussian();
            ay[h] = 1.0 / (h + 1) + separation * 0.35 * user_rng.gaussian();
            px[h] = user_rng.uniform(0.0, 2.0 * std::numbers::pi);
            py[h] = user_rng.uniform(0.0, 2.0 * std::numbers::pi);
        }

        Rng sample_rng(seed, 300 + u);
        out[u].reserve(samples_per_user);
        for (size_t s = 0; s < samples_per_user; ++s) {
            size_t length = base_length + sample_rng.next_below(std::max<size_t>(base_length / 5, 1));
            std::vector<double> x(length), y(length), p(length);
            double speed_wobble = 1.0 + 0.05 * sample_rng.gaussian();
            for (size_t t = 0; t < length; ++t) {
                double tau = speed_wobble * static_cast<double>(t) / static_cast<double>(length - 1 ? length - 1 : 1);
                double xs = 0.0, ys = 0.0;
                for (int h = 0; h < kHarmonics; ++h) {
                    xs += ax[h] * std::sin(2.0 * std::numbers::pi * (h + 1) * tau + px[h]);
                    ys += ay[h] * std::sin(2.0 * std::numbers::pi * (h + 1) * tau + py[h]);
                }
                x[t] = xs + 0.05 * sample_rng.gaussian();
                y[t] = ys + 0.05 * sample_rng.gaussian();
                p[t] = std::sin(std::numbers::pi * tau) + 0.05 * sample_rng.gaussian();
            }

            auto dx = diff(x), dy = diff(y), dp = diff(p);
            auto ddx = diff(dx), ddy = diff(dy);
            std::vector<double> v(length), dv, theta(length), dtheta, rho(length);
            for (size_t t = 0; t < length; ++t) {
                v[t] = std::hypot(dx[t], dy[t]);
                theta[t] = std::atan2(dy[t], dx[t]);
            }
            dv = diff(v);
            dtheta = diff(theta);
            for (size_t t = 0; t < length; ++t) rho[t] = v[t] * dtheta[t];

            std::vector<std::vector<double>> all = {x,  y,  p,   dx,    dy,  dp, ddx,
                                                    ddy, v, dv, theta, dtheta, rho};
            // remaining channels: lag products and mixes, identity-light
            while (all.size() < 21) {
                size_t k = all.size();
                std::vector<double> extra(length);
                for (size_t t = 0; t < length; ++t) {
                    switch (k % 4) {
                        case 0: extra[t] = x[t] * y[t]; break;
                        case 1: extra[t] = std::abs(x[t]) + std::abs(y[t]); break;
                        case 2: extra[t] = v[t] * p[t]; break;
                        default: extra[t] = dx[t] * dy[t]; break;
                    }
                    extra[t] += 0.05 * sample_rng.gaussian();
                }
                all.push_back(std::move(extra));
            }
            all.resize(channels);
            out[u].push_back(TimeFunctionSet{std::move(all)});
        }
    }
    return out;
}

SyntheticDataset generate_synthetic(Modality modality, size_t users, size_t samples_per_user,
                                    double separation, uint64_t seed) {
    if (separation < 0.0) throw std::invalid_argument("separation must be >= 0");
    SyntheticDataset dataset;
    dataset.modality = modality;
    dataset.users = users;
    dataset.samples_per_user = samples_per_user;
    dataset.separation = separation;
    dataset.seed = seed;
    switch (modality) {
        case Modality::Face:
            dataset.embeddings = generate_face_embeddings(users, samples_per_user, 4096, 50, separation, seed);
            break;
        case Modality::SignatureGlobal:
            dataset.embeddings = generate_global_features(users, samples_per_user, 100, 30, separation, seed);
            break;
        case Modality::SignatureLocal:
            dataset.trajectories = generate_local_signatures(users, samples_per_user, 21, 100, separation, seed);
            break;
    }
    return dataset;
}

std::vector<std::vector<std::vector<double>>> embeddings_by_user(const LabeledEmbeddings& data) {
    std::map<int, std::vector<std::vector<double>>> grouped;
    for (size_t i = 0; i < data.vectors.size(); ++i) {
        grouped[data.labels[i]].push_back(data.vectors[i]);
    }
    std::vector<std::vector<std::vector<double>>> out;
    out.reserve(grouped.size());
    for (auto& [label, samples] : grouped) out.push_back(std::move(samples));
    return out;
}

void save_dataset(const SyntheticDataset& dataset, const std::string& path) {
    json j;
    j["modality"] = modality_name(dataset.modality);
    j["users"] = dataset.users;
    j["samples_per_user"] = dataset.samples_per_user;
    j["separation"] = dataset.separation;
    j["seed"] = dataset.seed;
    if (dataset.modality == Modality::SignatureLocal) {
        j["channels"] = dataset.trajectories.empty() || dataset.trajectories[0].empty()
                            ? 0
                            : dataset.trajectories[0][0].channel_count();
        json users = json::array();
        for (const auto& user : dataset.trajectories) {
            json samples = json::array();
            for (const auto& sample : user) samples.push_back(sample.channels);
            users.push_back(samples);
        }
        j["trajectories"] = users;
    } else {
        j["dim"] = dataset.embeddings.dim();
        j["vectors"] = dataset.embeddings.vectors;
        j["labels"] = dataset.embeddings.labels;
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write dataset file: " + path);
    out << j.dump() << "\n";
}

SyntheticDataset load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset file: " + path);
    json j = json::parse(in);

    SyntheticDataset dataset;
    dataset.modality = modality_from_name(j.at("modality").get<std::string>());
    dataset.users = j.at("users").get<size_t>();
    dataset.samples_per_user = j.at("samples_per_user").get<size_t>();
    dataset.separation = j.value("separation", 1.0);
    dataset.seed = j.at("seed").get<uint64_t>();
    if (dataset.modality == Modality::SignatureLocal) {
        for (const auto& user : j.at("trajectories")) {
            std::vector<TimeFunctionSet> samples;
            for (const auto& sample : user) {
                samples.push_back(TimeFunctionSet{sample.get<std::vector<std::vector<double>>>()});
            }
            dataset.trajectories.push_back(std::move(samples));
        }
    } else {
        dataset.embeddings.vectors = j.at("vectors").get<std::vector<std::vector<double>>>();
        dataset.embeddings.labels = j.at("labels").get<std::vector<int>>();
    }
    return dataset;
}

}  // namespace bioledger
