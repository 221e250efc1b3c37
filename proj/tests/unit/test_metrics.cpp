#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>
#include <silex/errors.hpp>
#include <silex/metrics.hpp>

#include "oracles.hpp"

using namespace silex;

TEST_SUITE_BEGIN("metrics");

TEST_CASE("error_percent worked examples") {
    std::mt19937_64 rng(11);
    const BinaryMask m = oracle::random_mask(rng, 10, 10);
    CHECK(error_percent(m, m) == 0.0);
    CHECK(error_percent(m, m.complement()) == 100.0);

    BinaryMask flipped = m;
    flipped.set(0, 0, !flipped.at(0, 0));
    flipped.set(5, 5, !flipped.at(5, 5));
    flipped.set(9, 9, !flipped.at(9, 9));
    CHECK(error_percent(flipped, m) == 3.0);
}

TEST_CASE("error_percent rejects mismatched shapes") {
    CHECK_THROWS_AS(error_percent(BinaryMask(4, 4), BinaryMask(4, 3)), ShapeError);
}

TEST_CASE("error_percent properties against the confusion oracle") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        const BinaryMask a = oracle::random_mask(rng, 16, 12, 0.3);
        const BinaryMask b = oracle::random_mask(rng, 16, 12, 0.3);
        const BinaryMask c = oracle::random_mask(rng, 16, 12, 0.3);
        CHECK(error_percent(a, b) == doctest::Approx(oracle::error_percent(a, b)).epsilon(1e-12));
        CHECK(error_percent(a, b) == error_percent(b, a));
        CHECK(error_percent(a, a) == 0.0);
        CHECK(error_percent(a, a.complement()) == 100.0);
        CHECK(error_percent(a, c) <= error_percent(a, b) + error_percent(b, c) + 1e-12);
    }
}

TEST_CASE("score_masks computes foreground precision and recall") {
    BinaryMask truth(4, 4);
    truth.set(1, 1, true);
    truth.set(2, 1, true);
    truth.set(1, 2, true);
    truth.set(2, 2, true);

    SUBCASE("perfect prediction") {
        const FrameScore s = score_masks(7, truth, truth);
        CHECK(s.frame_index == 7);
        CHECK(s.error_pct == 0.0);
        CHECK(s.precision == 1.0);
        CHECK(s.recall == 1.0);
        CHECK(s.f1 == 1.0);
    }
    SUBCASE("half the object found, no false alarms") {
        BinaryMask pred(4, 4);
        pred.set(1, 1, true);
        pred.set(2, 1, true);
        const FrameScore s = score_masks(0, pred, truth);
        CHECK(s.error_pct == doctest::Approx(100.0 * 2 / 16));
        CHECK(s.precision == 1.0);
        CHECK(s.recall == doctest::Approx(0.5));
        CHECK(s.f1 == doctest::Approx(2.0 * 0.5 / 1.5));
    }
    SUBCASE("both empty is a perfect frame") {
        const BinaryMask empty(4, 4);
        const FrameScore s = score_masks(0, empty, empty);
        CHECK(s.error_pct == 0.0);
        CHECK(s.precision == 1.0);
        CHECK(s.recall == 1.0);
        CHECK(s.f1 == 1.0);
    }
    SUBCASE("empty prediction misses everything") {
        const BinaryMask empty(4, 4);
        const FrameScore s = score_masks(0, empty, truth);
        CHECK(s.precision == 1.0); // no positives claimed
        CHECK(s.recall == 0.0);
        CHECK(s.f1 == 0.0);
    }
    SUBCASE("disjoint foregrounds score zero f1") {
        BinaryMask pred(4, 4);
        pred.set(0, 0, true);
        const FrameScore s = score_masks(0, pred, truth);
        CHECK(s.precision == 0.0);
        CHECK(s.recall == 0.0);
        CHECK(s.f1 == 0.0);
    }
}

TEST_CASE("score_masks agrees with the oracle confusion matrix") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 60; ++trial) {
        const BinaryMask pred = oracle::random_mask(rng, 9, 7, 0.4);
        const BinaryMask truth = oracle::random_mask(rng, 9, 7, 0.4);
        const auto c = oracle::confusion(pred, truth);
        const FrameScore s = score_masks(0, pred, truth);
        if (c.tp + c.fp > 0)
            CHECK(s.precision ==
                  doctest::Approx(double(c.tp) / double(c.tp + c.fp)).epsilon(1e-12));
        if (c.tp + c.fn > 0)
            CHECK(s.recall == doctest::Approx(double(c.tp) / double(c.tp + c.fn)).epsilon(1e-12));
        CHECK(s.error_pct == doctest::Approx(oracle::error_percent(pred, truth)).epsilon(1e-12));
    }
}

TEST_CASE("evaluate_sequence averages per-frame scores") {
    // Frame 0: 2% error, frame 1: 4% error on 10x10 masks.
    BinaryMask truth(10, 10);
    BinaryMask p0 = truth, p1 = truth;
    p0.set(0, 0, true);
    p0.set(1, 0, true);
    p1.set(0, 0, true);
    p1.set(1, 0, true);
    p1.set(2, 0, true);
    p1.set(3, 0, true);
    const std::vector<BinaryMask> preds{p0, p1};
    const std::vector<BinaryMask> truths{truth, truth};

    const ErrorReport r = evaluate_sequence(preds, truths);
    CHECK(r.frames_evaluated == 2);
    CHECK(r.skipped == 0);
    CHECK(r.frames[0].error_pct == doctest::Approx(2.0));
    CHECK(r.frames[1].error_pct == doctest::Approx(4.0));
    CHECK(r.mean_error_pct == doctest::Approx(3.0));
}

TEST_CASE("evaluate_sequence identical pairs are perfect") {
    std::mt19937_64 rng(14);
    std::vector<BinaryMask> masks;
    for (int i = 0; i < 5; ++i) masks.push_back(oracle::random_mask(rng, 8, 8));
    const ErrorReport r = evaluate_sequence(masks, masks);
    CHECK(r.mean_error_pct == 0.0);
    CHECK(r.mean_f1 == 1.0);
    for (const auto& f : r.frames) CHECK(f.f1 == 1.0);
}

TEST_CASE("evaluate_sequence skip drops leading pairs and renumbers nothing") {
    std::mt19937_64 rng(15);
    std::vector<BinaryMask> preds, truths;
    for (int i = 0; i < 6; ++i) {
        preds.push_back(oracle::random_mask(rng, 6, 6));
        truths.push_back(oracle::random_mask(rng, 6, 6));
    }
    const ErrorReport r = evaluate_sequence(preds, truths, 2, 10);
    CHECK(r.skipped == 2);
    CHECK(r.frames_evaluated == 4);
    REQUIRE(r.frames.size() == 4);
    CHECK(r.frames.front().frame_index == 12);
    CHECK(r.frames.back().frame_index == 15);
    CHECK(r.frames.front().error_pct == doctest::Approx(error_percent(preds[2], truths[2])));
}

TEST_CASE("evaluate_sequence input validation") {
    std::vector<BinaryMask> two{BinaryMask(2, 2), BinaryMask(2, 2)};
    std::vector<BinaryMask> three{BinaryMask(2, 2), BinaryMask(2, 2), BinaryMask(2, 2)};
    CHECK_THROWS_AS(evaluate_sequence(two, three), InputDomainError);
    CHECK_THROWS_AS(evaluate_sequence(two, two, 2), InputDomainError);  // nothing left
    CHECK_THROWS_AS(evaluate_sequence(two, two, -1), InputDomainError); // negative skip
    CHECK_NOTHROW(evaluate_sequence(two, two, 1));
}

TEST_CASE("report_to_csv carries the summary comment and per-frame rows") {
    std::vector<BinaryMask> masks{BinaryMask(2, 2, true), BinaryMask(2, 2, true)};
    const ErrorReport r = evaluate_sequence(masks, masks, 1, 0);
    const std::string csv = report_to_csv(r);

    std::istringstream in(csv);
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "# frames_evaluated=1 skipped=1 mean_error_pct=0");
    REQUIRE(std::getline(in, line));
    CHECK(line == "frame_index,error_pct,precision,recall,f1");
    REQUIRE(std::getline(in, line));
    CHECK(line == "1,0,1,1,1");
    CHECK_FALSE(std::getline(in, line));
}

TEST_CASE("report_to_json round-trips through a parser") {
    std::vector<BinaryMask> preds{BinaryMask(4, 4), BinaryMask(4, 4)};
    std::vector<BinaryMask> truths = preds;
    truths[1].set(0, 0, true);
    const ErrorReport r = evaluate_sequence(preds, truths);
    const auto j = nlohmann::json::parse(report_to_json(r));
    CHECK(j.at("frames_evaluated") == 2);
    CHECK(j.at("skipped") == 0);
    CHECK(j.at("mean_error_pct").get<double>() ==
          doctest::Approx(r.mean_error_pct).epsilon(1e-12));
    REQUIRE(j.at("frames").size() == 2);
    CHECK(j.at("frames")[1].at("error_pct").get<double>() == doctest::Approx(100.0 / 16));
    CHECK(j.at("frames")[0].at("frame_index") == 0);
}

TEST_SUITE_END();
