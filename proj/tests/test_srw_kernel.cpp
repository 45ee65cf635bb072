#include "oracles.hpp"

#include "polypin/errors.hpp"
#include "polypin/srw_kernel.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace polypin;

TEST_CASE("hitting law: spec examples") {
    const auto t2 = hitting_law(InterfaceSpec::finite(2), 2);
    CHECK(t2.q_at(2) == 1.0);
    CHECK(t2.q0_at(2) == 0.5);
    CHECK(t2.q1_at(2) == 0.25);

    const auto t4 = hitting_law(InterfaceSpec::finite(4), 8);
    CHECK(t4.q1_at(4) == 1.0 / 16);

    const auto inf = hitting_law(InterfaceSpec::infinite(), 8);
    CHECK(inf.q_at(4) == doctest::Approx(1.0 / 8).epsilon(1e-15));
}

TEST_CASE("hitting law agrees with path enumeration") {
    for (long T : {0L, 2L, 4L, 6L, 8L}) {
        const auto spec = T == 0 ? InterfaceSpec::infinite() : InterfaceSpec::finite(T);
        const auto law = hitting_law(spec, 18);
        for (long n = 2; n <= 18; n += 2) {
            const auto ref = oracle::first_hit(T, n);
            CHECK(law.q0_at(n) == doctest::Approx(ref.q0).epsilon(1e-14));
            CHECK(law.q1_at(n) == doctest::Approx(ref.qp).epsilon(1e-14));
        }
    }
}

TEST_CASE("hitting law invariants") {
    for (long T : {2L, 4L, 10L, 32L, 100L}) {
        const auto law = hitting_law(InterfaceSpec::finite(T), 4000);
        double s = law.tail_mass;
        for (long n = 2; n <= 4000; n += 2) {
            s += law.q_at(n);
            CHECK(law.q1_at(n) == law.qm1[static_cast<std::size_t>(n / 2)]); // symmetric sweeps agree exactly
            if (n < T) CHECK(law.q1_at(n) == 0.0);
            CHECK(law.q0_at(n) >= 0.0);
            CHECK(law.q0_at(n) <= 1.0);
        }
        CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }
    // T = infinity: the telescoping identity sum q + tail = 1 over a long horizon.
    const auto inf = hitting_law(InterfaceSpec::infinite(), 1 << 20);
    double s = inf.tail_mass;
    for (double x : inf.q0) s += x;
    CHECK(std::fabs(s - 1.0) < 1e-12);
}

TEST_CASE("monotone coupling: q_T(n) = q_inf(n) for n < T") {
    const auto inf = hitting_law(InterfaceSpec::infinite(), 200);
    for (long T : {8L, 50L, 120L}) {
        const auto law = hitting_law(InterfaceSpec::finite(T), 200);
        for (long n = 2; n < T && n <= 200; n += 2) CHECK(law.q_at(n) == doctest::Approx(inf.q_at(n)).epsilon(1e-12));
    }
}

TEST_CASE("hitting law rejects bad parameters") {
    CHECK_THROWS_AS(InterfaceSpec::finite(3), ParameterError);
    CHECK_THROWS_AS(InterfaceSpec::finite(0), ParameterError);
    CHECK_THROWS_AS(hitting_law(InterfaceSpec::finite(4), 7), ParameterError);
    CHECK_THROWS_AS(hitting_law(InterfaceSpec::finite(4), 0), ParameterError);
}

TEST_CASE("k-fold: spec examples and oracles") {
    CHECK(k_fold_hitting(InterfaceSpec::infinite(), 2, 8, false).at(4) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(k_fold_hitting(InterfaceSpec::finite(2), 3, 10, false).at(6) == 1.0);

    const auto spec = InterfaceSpec::finite(4);
    const auto law = hitting_law(spec, 40);
    auto trunc = [&](long n) { return n <= 16 ? law.q_at(n) : 0.0; };
    const double ref = oracle::double_sum(trunc, trunc, 34);
    CHECK(k_fold_hitting(spec, 2, 40, true).at(34) == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("k-fold: k = 1 is bit-identical, associativity, support") {
    for (long T : {4L, 16L}) {
        const auto spec = InterfaceSpec::finite(T);
        const auto law = hitting_law(spec, 600);
        const auto k1 = k_fold_hitting(spec, 1, 600, false);
        const auto q = law.total();
        CHECK(k1.mass == q);

        const auto all = k_fold_hitting_all(spec, 7, 600, false);
        // K_7 = K_3 * K_4
        std::vector<double> conv(all[0].mass.size(), 0.0);
        for (std::size_t i = 0; i < conv.size(); ++i)
            for (std::size_t j = 0; j <= i; ++j) conv[i] += all[2].mass[j] * all[3].mass[i - j];
        double sum = 0.0;
        for (std::size_t i = 0; i < conv.size(); ++i) {
            CHECK(std::fabs(conv[i] - all[6].mass[i]) <= 1e-12);
            sum += all[6].mass[i];
        }
        CHECK(sum <= 1.0 + 1e-12);
        for (long n = 0; n < 14; n += 2) CHECK(all[6].at(n) == 0.0);
    }
}

TEST_CASE("bound ratios: spec examples") {
    CHECK(hitting_bound_ratio(InterfaceSpec::infinite(), 1, 2, 0.5) == doctest::Approx(std::sqrt(2.0)));
    const double r2 = hitting_bound_ratio(InterfaceSpec::finite(2), 1, 2, 1.0);
    CHECK(std::isfinite(r2));
    CHECK(r2 > 0.0);

    BoundGrid grid{{8, 16}, 6, 4, 1};
    const auto rep = verify_hitting_bounds(grid);
    CHECK(std::isfinite(rep.max_ratio));
    CHECK(rep.max_ratio > 0.0);
    for (const auto& row : rep.rows) {
        CHECK(row.max_ratio_constrained > 0.0);
        CHECK(row.fitted_C_prime >= 0.0);
    }
    // Threads do not change the report.
    grid.threads = 2;
    const auto rep2 = verify_hitting_bounds(grid);
    CHECK(rep2.max_ratio == rep.max_ratio);
    CHECK(rep2.arg_n == rep.arg_n);
}

TEST_CASE("interface visit probabilities") {
    for (long n = 2; n <= 40; n += 2) CHECK(interface_visit_prob(InterfaceSpec::finite(2), n) == doctest::Approx(1.0));
    for (long T : {4L, 8L, 100L}) CHECK(interface_visit_prob(InterfaceSpec::finite(T), 2) == 0.5);
    CHECK(interface_visit_prob(InterfaceSpec::finite(4), 4) == doctest::Approx(0.5).epsilon(1e-15));
    // Binomial oracle.
    for (long T : {4L, 6L, 10L}) {
        for (long n = 2; n <= 50; n += 2) {
            double ref = 0.0;
            for (long x = -n; x <= n; x += 2)
                if (x % T == 0) ref += oracle::binom(n, (n + x) / 2) * std::ldexp(1.0, -static_cast<int>(n));
            CHECK(interface_visit_prob(InterfaceSpec::finite(T), n) == doctest::Approx(ref).epsilon(1e-13));
        }
    }
    // Two-sided band of value * min(sqrt n, T).
    std::vector<long> ns;
    for (long n = 2; n <= 20000; n *= 2) ns.push_back(n);
    const auto band = interface_visit_band(InterfaceSpec::finite(32), ns);
    CHECK(band.lo > 0.3);
    CHECK(band.hi < 2.1); // the stationary value of P(S_n in T Z) is 2/T
}

TEST_CASE("return-to-origin expansions") {
    const auto rep = return_origin_expansions({2, 6, 100, 200, 500, 1000});
    CHECK(rep.rows[0].p_return == 0.5);
    CHECK(rep.rows[1].p_first == doctest::Approx(1.0 / 16).epsilon(1e-15));
    const auto& r1000 = rep.rows.back();
    CHECK(std::fabs(r1000.residual_return) <= 10.0 / (1000.0 * 1000.0));
    CHECK(rep.order_return == doctest::Approx(2.0).epsilon(0.05));
    CHECK(rep.order_first == doctest::Approx(2.0).epsilon(0.05));
    // The stated three-term bound for P(tau_1 <= 2l) misses a l^{-3/2} term: its residual only
    // decays at order 3/2, while the corrected expansion decays at order 5/2.
    CHECK_FALSE(rep.stated_bound_holds);
    CHECK(rep.order_first_le == doctest::Approx(1.5).epsilon(0.02));
    CHECK(rep.order_first_le_corrected == doctest::Approx(2.5).epsilon(0.05));
    const double l = 500.0;
    CHECK(r1000.residual_first_le * std::pow(l, 1.5) ==
          doctest::Approx(1.0 / (2.0 * std::sqrt(std::numbers::pi))).epsilon(0.01));
}

TEST_CASE("reflection identity") {
    const auto t4 = hitting_law(InterfaceSpec::finite(4), 4);
    const auto t2 = hitting_law(InterfaceSpec::finite(2), 4);
    CHECK(2 * t4.q1_at(2) == 0.0);
    CHECK(t4.q0_at(2) - t2.q0_at(2) == 0.0);
    CHECK(2 * t4.q1_at(4) == 0.125);
    CHECK(t4.q0_at(4) - t2.q0_at(4) == 0.125);
    CHECK(reflection_identity_check(8, 10) <= 1e-12);
    CHECK(reflection_identity_check(40, 20000) <= 1e-12);
    CHECK_THROWS_AS(reflection_identity_check(6, 10), ParameterError);
}
