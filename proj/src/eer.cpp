#include <algorithm>
#include <cmath>

#include "bioledger/biometrics.hpp"

namespace bioledger {

namespace {

// Acceptance rule for distance scores: accept when score <= threshold.
// FAR(t) = fraction of impostor scores accepted, FRR(t) = fraction of
// genuine scores rejected. Both are step functions of t; FAR is
// non-decreasing and FRR non-increasing, so FAR - FRR crosses zero once.
struct Rates {
    double far;
    double frr;
};

Rates rates_at(const std::vector<double>& genuine, const std::vector<double>& impostor, double t) {
    auto count_le = [](const std::vector<double>& sorted, double threshold) {
        return static_cast<double>(std::upper_bound(sorted.begin(), sorted.end(), threshold) -
                                   sorted.begin());
    };
    double far = count_le(impostor, t) / static_cast<double>(impostor.size());
    double frr = 1.0 - count_le(genuine, t) / static_cast<double>(genuine.size());
    return {far, frr};
}

}  // namespace

EerResult compute_eer(const ScoreSet& scores) {
    if (scores.genuine.empty() || scores.impostor.empty()) throw EmptyScores();

    // similarity scores are mirrored into distance space
    double sign = scores.polarity == ScorePolarity::Distance ? 1.0 : -1.0;
    std::vector<double> genuine, impostor;
    genuine.reserve(scores.genuine.size());
    impostor.reserve(scores.impostor.size());
    for (double s : scores.genuine) genuine.push_back(sign * s);
    for (double s : scores.impostor) impostor.push_back(sign * s);
    std::sort(genuine.begin(), genuine.end());
    std::sort(impostor.begin(), impostor.end());

    std::vector<double> thresholds;
    thresholds.reserve(genuine.size() + impostor.size());
    thresholds.insert(thresholds.end(), genuine.begin(), genuine.end());
    thresholds.insert(thresholds.end(), impostor.begin(), impostor.end());
    std::sort(thresholds.begin(), thresholds.end());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

    auto finish = [&](double eer, double t, const Rates& r) {
        EerResult result;
        result.eer_percent = 100.0 * eer;
        result.threshold = sign * t;
        result.far_at_threshold = 100.0 * r.far;
        result.frr_at_threshold = 100.0 * r.frr;
        return result;
    };

    Rates prev_rates{0.0, 1.0};  // below every score: nothing accepted
    double prev_t = thresholds.front() - 1.0;
    for (double t : thresholds) {
        Rates r = rates_at(genuine, impostor, t);
        double diff = r.far - r.frr;
        if (std::abs(diff) < 1e-12) {
            return finish(r.far, t, r);
        }
        if (diff > 0.0) {
            // crossed between prev_t and t: interpolate both rates linearly
            double df = r.far - prev_rates.far;
            double dr = r.frr - prev_rates.frr;
            double denom = df - dr;
            double s = denom == 0.0 ? 0.5 : (prev_rates.frr - prev_rates.far) / denom;
            s = std::clamp(s, 0.0, 1.0);
            double eer = prev_rates.far + s * df;
            double t_star = prev_t + s * (t - prev_t);
            return finish(eer, t_star, rates_at(genuine, impostor, t_star));
        }
        prev_rates = r;
        prev_t = t;
    }

    // never crossed: accepting everything is the closest operating point
    Rates last = rates_at(genuine, impostor, thresholds.back());
    return finish(last.far, thresholds.back(), last);
}

}  // namespace bioledger
