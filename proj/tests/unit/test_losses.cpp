#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>

#include "emolab/error.hpp"
#include "emolab/losses.hpp"
#include "oracles.hpp"

using namespace emolab;

namespace {

double rel_err(double a, double b) { return std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), 1e-8}); }

// Central-difference check over z in [-6, 6] in steps of 0.05.
void check_gradient(const std::function<LossGrad(double p)>& f) {
    for (int s = -120; s <= 120; ++s) {
        const double z = 0.05 * s;
        const auto analytic = f(sigmoid(z)).grad;
        const auto numeric = oracle::numeric_logit_grad([&](double p) { return f(p).loss; }, z, 1e-5);
        CAPTURE(z);
        CHECK(rel_err(analytic, numeric) <= 1e-4);
    }
}

}  // namespace

TEST_CASE("class weights") {
    std::vector<LabelCounts> c{{50, 50}, {2, 8}, {0, 10}};
    CHECK_THROWS_AS(class_weights(c, 100), DataError);

    const std::vector<LabelCounts> balanced{{50, 50}};
    const auto b = class_weights(balanced, 100);
    CHECK(b.positive[0] == 1.0);
    CHECK(b.negative[0] == 1.0);

    const std::vector<LabelCounts> skewed{{2, 8}, {0, 10}};
    const auto w = class_weights(skewed, 10);
    CHECK(w.positive[0] == 2.5);
    CHECK(w.negative[0] == 0.625);
    CHECK(w.positive[1] == 10.0);
    CHECK(w.negative[1] == 0.5);
    CHECK(w.for_label(0, true) == 2.5);

    const std::vector<LabelCounts> none{{0, 0}};
    CHECK_THROWS_AS(class_weights(none, 0), DataError);
}

TEST_CASE("weighted BCE examples") {
    const auto half = weighted_bce(0.5, true, 1.0);
    CHECK(half.loss == doctest::Approx(std::numbers::ln2).epsilon(1e-15));
    CHECK(half.grad == doctest::Approx(-0.5).epsilon(1e-15));
    const auto e = weighted_bce(0.8, false, 2.0);
    CHECK(e.loss == doctest::Approx(3.2188758248682006).epsilon(1e-12));
    CHECK(e.grad == doctest::Approx(1.6).epsilon(1e-12));
    CHECK(weighted_bce(1.0 - 1e-12, true, 1.0).loss < 1e-6);
}

TEST_CASE("focal loss examples") {
    const auto f = focal_loss(0.5, true, FocalParams{2.0}, 1.0);
    CHECK(f.loss == doctest::Approx(0.17328679513998632).epsilon(1e-12));
    CHECK(focal_loss(1.0, true, FocalParams{2.0}, 1.0).loss < 1e-12);
    CHECK(focal_loss(0.0, false, FocalParams{2.0}, 1.0).loss < 1e-12);
}

TEST_CASE("asymmetric loss examples") {
    const AsymmetricParams defaults;
    CHECK(defaults.gamma_pos == 0.0);
    CHECK(defaults.gamma_neg == 4.0);
    CHECK(defaults.margin == 0.05);

    const auto neg = asymmetric_loss(0.9, false, defaults);
    CHECK(neg.loss == doctest::Approx(0.9903084891103354).epsilon(1e-12));
    for (double p : {0.0, 0.01, 0.03, 0.05}) {
        const auto below = asymmetric_loss(p, false, defaults);
        CHECK(below.loss == 0.0);
        CHECK(below.grad == 0.0);
    }
    for (double p : {0.1, 0.5, 0.9}) {
        CHECK(asymmetric_loss(p, true, defaults).loss == doctest::Approx(-std::log(p)).epsilon(1e-12));
    }
}

TEST_CASE("reductions to plain cross-entropy") {
    for (int s = -60; s <= 60; ++s) {
        const double p = sigmoid(0.1 * s);
        for (bool y : {false, true}) {
            const auto ce = weighted_bce(p, y, 1.0);
            const auto focal = focal_loss(p, y, FocalParams{0.0}, 1.0);
            const auto asym = asymmetric_loss(p, y, AsymmetricParams{0.0, 0.0, 0.0});
            CHECK(std::fabs(focal.loss - ce.loss) <= 1e-12);
            CHECK(std::fabs(focal.grad - ce.grad) <= 1e-12);
            CHECK(std::fabs(asym.loss - ce.loss) <= 1e-12);
            CHECK(std::fabs(asym.grad - ce.grad) <= 1e-12);
        }
    }
}

TEST_CASE("analytic gradients match finite differences") {
    for (bool y : {false, true}) {
        CAPTURE(y);
        for (double w : {1.0, 2.5, 0.625}) {
            check_gradient([&](double p) { return weighted_bce(p, y, w); });
            check_gradient([&](double p) { return focal_loss(p, y, FocalParams{2.0}, w); });
        }
        check_gradient([&](double p) { return focal_loss(p, y, FocalParams{0.5}, 1.0); });
        check_gradient([&](double p) { return asymmetric_loss(p, y, AsymmetricParams{}); });
        check_gradient([&](double p) { return asymmetric_loss(p, y, AsymmetricParams{1.0, 2.0, 0.2}); });
    }
}

TEST_CASE("losses are non-negative") {
    for (int s = -80; s <= 80; ++s) {
        const double p = sigmoid(0.1 * s);
        for (bool y : {false, true}) {
            CHECK(weighted_bce(p, y, 3.0).loss >= 0.0);
            CHECK(focal_loss(p, y, FocalParams{2.0}, 2.0).loss >= 0.0);
            CHECK(asymmetric_loss(p, y, AsymmetricParams{}).loss >= 0.0);
        }
    }
}

TEST_CASE("clamping and dispatch") {
    CHECK(clamp_probability(0.0) == kProbEpsilon);
    CHECK(clamp_probability(1.0) == 1.0 - kProbEpsilon);
    CHECK(std::isfinite(weighted_bce(0.0, true, 1.0).loss));
    CHECK(sigmoid(-800.0) >= 0.0);
    CHECK(sigmoid(800.0) <= 1.0);
    CHECK(parse_loss("focal") == LossKind::Focal);
    CHECK_THROWS_AS(parse_loss("hinge"), ConfigError);

    LossSpec spec;
    spec.kind = LossKind::Focal;
    CHECK(evaluate_loss(spec, 0.3, true, 2.0).loss == focal_loss(0.3, true, spec.focal, 2.0).loss);
    spec.kind = LossKind::Asymmetric;
    CHECK(evaluate_loss(spec, 0.3, false, 2.0).loss == asymmetric_loss(0.3, false, spec.asymmetric).loss);
    spec.kind = LossKind::WeightedBce;
    CHECK(evaluate_loss(spec, 0.3, false, 2.0).loss == weighted_bce(0.3, false, 2.0).loss);
}
