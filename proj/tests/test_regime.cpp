#include "polypin/errors.hpp"
#include "polypin/regime.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace polypin;

namespace {
ScalingPoint pt(const char* a, const char* b, long N, double beta = 1.0) {
    return ScalingPoint{Exponent::parse(a), Exponent::parse(b), beta, N};
}
RegimeLabel label(const char* a, const char* b) { return classify(Exponent::parse(a), Exponent::parse(b)).label; }
} // namespace

TEST_CASE("classify: examples and borders") {
    CHECK(label("0.4", "0.1") == RegimeLabel::TH1_LOCALIZED);
    CHECK(label("0.45", "0.35") == RegimeLabel::BC3_CRITICAL);
    CHECK(label("0.3", "0.3") == RegimeLabel::BC1_DIAGONAL);
    CHECK(label("1/2", "1/2") == RegimeLabel::BC1_DIAGONAL);
    CHECK(label("0.7", "0.5") == RegimeLabel::BC2_HALFLINE);
    CHECK(label("0.7", "0.8") == RegimeLabel::R3_SRW);
    CHECK(label("0.3", "0.4") == RegimeLabel::R2_DIFFUSIVE);
    CHECK(label("0.3", "0.1") == RegimeLabel::R1_SUBDIFFUSIVE);
    CHECK(label("1/3", "0") == RegimeLabel::BC3_CRITICAL);
    CHECK(label("2/5", "1/5") == RegimeLabel::BC3_CRITICAL);

    const auto wd = classify(Exponent::parse("0.6"), Exponent::parse("0.2"));
    CHECK(wd.label == RegimeLabel::TH1_LOCALIZED);
    CHECK(wd.sub_tag == "weakly_depinned");
    const auto r2 = classify(Exponent::parse("0.3"), Exponent::parse("0.6"));
    CHECK(r2.label == RegimeLabel::R2_DIFFUSIVE);
    CHECK_FALSE(r2.provenance.empty());

    // float inputs: tie tolerance 1e-12
    CHECK(classify(Exponent::from_double(0.45), Exponent::from_double(0.35 + 1e-14)).label ==
          RegimeLabel::BC3_CRITICAL);
    CHECK(classify(Exponent::from_double(0.45), Exponent::from_double(0.35 + 1e-9)).label ==
          RegimeLabel::R1_SUBDIFFUSIVE);
}

TEST_CASE("classify is total and deterministic on a grid") {
    for (int i = 1; i <= 40; ++i)
        for (int j = 0; j <= 40; ++j) {
            const Exponent a(Rational::make(i, 40)), b(Rational::make(j, 40));
            const auto c1 = classify(a, b), c2 = classify(a, b);
            CHECK(c1.label == c2.label);
            CHECK(!to_string(c1.label).empty());
        }
}

TEST_CASE("predicted orders") {
    {
        const auto p = pt("0.3", "0.1", 100000);
        const auto m = p.params();
        const auto pr = predicted_orders(p);
        CHECK(pr.endpoint_scale ==
              doctest::Approx(std::numbers::pi * std::sqrt(1e5 / (static_cast<double>(m.T) * m.delta))));
        REQUIRE(pr.constant.has_value());
        CHECK(*pr.constant == doctest::Approx(std::numbers::pi));
    }
    {
        const auto pr = predicted_orders(pt("0.3", "0.3", 100000));
        REQUIRE(pr.constant.has_value());
        CHECK(*pr.constant == doctest::Approx(kappa(1.0)));
        CHECK(pr.endpoint_scale == doctest::Approx(kappa(1.0) * std::sqrt(1e5)));
    }
    {
        const auto p = pt("0.4", "0.1", 100000);
        const auto pr = predicted_orders(p);
        const double d = p.delta_N();
        CHECK(pr.last_contact_scale == doctest::Approx(1.0 / (d * d)));
        CHECK(pr.endpoint_scale == doctest::Approx(static_cast<double>(p.T_N())));
    }
    // continuity in beta within a label
    double prev = predicted_orders(pt("0.3", "0.1", 100000, 1.0)).endpoint_scale;
    for (double beta = 1.001; beta < 1.02; beta += 0.001) {
        const double v = predicted_orders(pt("0.3", "0.1", 100000, beta)).endpoint_scale;
        CHECK(std::fabs(v / prev - 1.0) < 0.01);
        prev = v;
    }
    for (const char* a : {"0.2", "0.4", "0.6"})
        for (const char* b : {"0", "0.2", "0.5", "0.7"}) {
            const auto pr = predicted_orders(pt(a, b, 10000));
            CHECK(pr.endpoint_scale > 0.0);
            CHECK(std::isfinite(pr.endpoint_scale));
            CHECK(pr.last_contact_scale > 0.0);
            CHECK(pr.contacts_scale > 0.0);
        }
}

TEST_CASE("srw window contrast") {
    CHECK(srw_window_contact_prob(2, 100, 1.0) == 1.0);
    const double p5 = srw_contrast(pt("0.45", "0.35", 100000), 0.1);
    const double p6 = srw_contrast(pt("0.45", "0.35", 1000000), 0.1);
    CHECK(p6 > p5);
    CHECK(p6 < 1.0);
    CHECK_THROWS_AS(srw_contrast(pt("0.6", "0.35", 1000), 0.1), ParameterError);
    // brute force on a tiny case: T = 4, N = 10, eps = 0.4 means a contact in [6, 10]
    long hit = 0;
    for (unsigned mask = 0; mask < 1024; ++mask) {
        long S = 0;
        bool any = false;
        for (int i = 1; i <= 10; ++i) {
            S += (mask >> (i - 1)) & 1U ? 1 : -1;
            if (i >= 6 && S % 4 == 0) any = true;
        }
        hit += any;
    }
    CHECK(srw_window_contact_prob(4, 10, 0.4) == doctest::Approx(hit / 1024.0).epsilon(1e-14));
}

TEST_CASE("experiment guardrails and delta = 0 identity") {
    ExperimentConfig cfg;
    cfg.point = pt("0.3", "0.1", 4'000'000);
    CHECK_THROWS_AS(run_experiment(cfg), InfeasibleError);
    cfg.point = pt("0.3", "0.1", 10000);
    cfg.n_samples = 200'000;
    CHECK_THROWS_AS(run_experiment(cfg), InfeasibleError);

    // a vanishing beta makes the measure the SRW: Var(S_N)/N should be 1 within MC error.
    cfg.point = pt("0.3", "0.3", 10000, 1e-12);
    cfg.n_samples = 4000;
    cfg.seed = 3;
    const auto rep = run_experiment(cfg);
    const double var = rep.var_x * rep.v_N * rep.v_N / 1e4;
    CHECK(std::fabs(var - 1.0) < 0.1);
    CHECK(rep.abs_z_minus_1 < 1e-9);

    // reproducible
    const auto again = run_experiment(cfg);
    CHECK(again.var_x == rep.var_x);
    CHECK(again.mean_L == rep.mean_L);
}

TEST_CASE("normal cdf") {
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
    CHECK(normal_cdf(1.96) == doctest::Approx(0.9750021).epsilon(1e-6));
}
