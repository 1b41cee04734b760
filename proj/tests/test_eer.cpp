#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "bioledger/biometrics.hpp"
#include "bioledger/rng.hpp"

using namespace bioledger;

namespace {

ScoreSet make_scores(std::vector<double> genuine, std::vector<double> impostor,
                     ScorePolarity polarity = ScorePolarity::Distance) {
    return {std::move(genuine), std::move(impostor), polarity};
}

}  // namespace

TEST_CASE("perfect separation gives zero") {
    EerResult r = compute_eer(make_scores({0.1, 0.2, 0.3}, {5.0, 6.0, 7.0}));
    CHECK(r.eer_percent == doctest::Approx(0.0));
    CHECK(r.threshold >= 0.3);
    CHECK(r.threshold < 5.0);
}

TEST_CASE("hand-enumerated three-vs-three case") {
    EerResult r = compute_eer(make_scores({1, 2, 3}, {2, 3, 4}));
    CHECK(r.eer_percent == doctest::Approx(100.0 / 3.0).epsilon(1e-9));
    CHECK(r.threshold == doctest::Approx(2.0));
    CHECK(r.far_at_threshold == doctest::Approx(r.frr_at_threshold));
}

TEST_CASE("identical distributions sit near fifty percent") {
    Rng rng(123);
    std::vector<double> genuine(2000), impostor(2000);
    for (auto& s : genuine) s = rng.gaussian();
    for (auto& s : impostor) s = rng.gaussian();
    EerResult r = compute_eer(make_scores(genuine, impostor));
    CHECK(r.eer_percent > 47.0);
    CHECK(r.eer_percent < 53.0);
}

TEST_CASE("similarity polarity mirrors distance") {
    ScoreSet distance = make_scores({1, 2, 3}, {2, 3, 4});
    ScoreSet similarity = make_scores({-1, -2, -3}, {-2, -3, -4}, ScorePolarity::Similarity);
    EerResult a = compute_eer(distance);
    EerResult b = compute_eer(similarity);
    CHECK(a.eer_percent == doctest::Approx(b.eer_percent));
    CHECK(b.threshold == doctest::Approx(-a.threshold));
}

TEST_CASE("scaling all scores leaves the rate unchanged") {
    Rng rng(9);
    std::vector<double> genuine(300), impostor(300);
    for (auto& s : genuine) s = std::abs(rng.gaussian());
    for (auto& s : impostor) s = std::abs(rng.gaussian()) + 0.8;
    EerResult base = compute_eer(make_scores(genuine, impostor));

    for (double factor : {0.25, 3.0, 1000.0}) {
        std::vector<double> g2 = genuine, i2 = impostor;
        for (auto& s : g2) s *= factor;
        for (auto& s : i2) s *= factor;
        EerResult scaled = compute_eer(make_scores(g2, i2));
        CHECK(scaled.eer_percent == doctest::Approx(base.eer_percent).epsilon(1e-9));
        CHECK(scaled.threshold == doctest::Approx(base.threshold * factor).epsilon(1e-9));
    }
}

TEST_CASE("rates bracket at the returned threshold") {
    Rng rng(17);
    for (int round = 0; round < 25; ++round) {
        size_t n_genuine = 5 + rng.next_below(200);
        size_t n_impostor = 5 + rng.next_below(200);
        std::vector<double> genuine(n_genuine), impostor(n_impostor);
        for (auto& s : genuine) s = rng.gaussian();
        for (auto& s : impostor) s = rng.gaussian() + rng.uniform(0.0, 2.0);
        EerResult r = compute_eer(make_scores(genuine, impostor));
        CHECK(r.eer_percent >= 0.0);
        CHECK(r.eer_percent <= 100.0);
        double step = 100.0 * (1.0 / static_cast<double>(n_genuine) + 1.0 / static_cast<double>(n_impostor));
        CHECK(std::abs(r.far_at_threshold - r.frr_at_threshold) <= step + 1e-9);
    }
}

TEST_CASE("empty score sets are rejected") {
    CHECK_THROWS_AS(compute_eer(make_scores({}, {1.0})), EmptyScores);
    CHECK_THROWS_AS(compute_eer(make_scores({1.0}, {})), EmptyScores);
}
