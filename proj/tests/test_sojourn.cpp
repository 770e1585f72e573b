#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <optional>
#include <vector>

#include "hetren/sojourn.hpp"

using namespace hetren;

namespace {
bool close(double a, double b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

// Exhaustive oracle over the full (m, n) rectangle in extended precision:
// smallest n (then smallest m) satisfying both inequalities.
std::optional<SojournPair> brute_force_sojourn(double sigma, double lambda, double tau, double xi,
                                               double eps, long n0, long limit) {
    PrecisionScope scope(300);
    BigFloat ls = log(BigFloat(sigma)), ll = log(BigFloat(lambda));
    BigFloat eta = -ll / ls;
    BigFloat eta_t = log(BigFloat(tau) / BigFloat(xi)) / ls;
    for (long n = n0 + 1; n <= limit; ++n)
        for (long m = n0 + 1; m <= limit; ++m) {
            BigFloat product = exp(BigFloat(m) * ls + BigFloat(n) * ll);
            if (abs(BigFloat(tau) * product - BigFloat(xi)) >= BigFloat(eps)) continue;
            BigFloat slack = abs(BigFloat(m) - BigFloat(n) * eta - eta_t);
            if (slack >= 1) continue;
            return SojournPair{m, n, to_double(product), to_double(slack)};
        }
    return std::nullopt;
}
}  // namespace

TEST_CASE("check_spectral worked values") {
    SaddleSpectrum sp;
    sp.lambda_P = 0.04;
    sp.sigma_P = 2.0;
    sp.lambda_Q = 0.5;
    sp.sigma_Q = 2.0;
    SpectralCheck r = check_spectral(sp);
    CHECK(close(r.eta, 1.0));
    CHECK(close(r.value, 0.8, 1e-12));
    CHECK(r.ok);

    sp.lambda_Q = 0.4;
    sp.sigma_Q = 3.0;
    r = check_spectral(sp);
    CHECK(close(r.eta, std::log(2.5) / std::log(2.0), 1e-12));
    CHECK(close(r.value, 0.8934560, 1e-6));
    CHECK(r.ok);

    sp.lambda_Q = 0.5;
    sp.sigma_Q = 3.0;
    r = check_spectral(sp);
    CHECK(close(r.value, 1.2, 1e-12));
    CHECK_FALSE(r.ok);
}

TEST_CASE("sigma_interval worked values") {
    auto [lo, hi] = sigma_interval(0.04, 2.0, 0.5);
    CHECK(lo == 1.0);
    CHECK(close(hi, 2.5, 1e-12));

    auto [lo2, hi2] = sigma_interval(0.04, 2.0, 0.25);
    CHECK(close(hi2, 6.25, 1e-12));

    CHECK_THROWS_AS(sigma_interval(0.25, 2.0, 0.5), NotInZTilde);  // sqrt(0.25)*2 = 1
}

TEST_CASE("sigma_interval consistent with check_spectral membership") {
    double lt = 0.04, st = 2.0, l = 0.4;
    auto [lo, hi] = sigma_interval(lt, st, l);
    SaddleSpectrum sp;
    sp.lambda_P = lt;
    sp.sigma_P = st;
    sp.lambda_Q = l;
    for (int i = 0; i < 100; ++i) {
        double sq = 1.0 + (hi + 1.0) * (i + 0.5) / 100.0;
        sp.sigma_Q = sq;
        bool member = sq > lo && sq < hi;
        if (std::abs(sq - hi) < 1e-9) continue;  // skip the boundary
        CHECK(check_spectral(sp).ok == member);
    }
    sp.sigma_Q = hi * (1.0 + 1e-6);
    CHECK_FALSE(check_spectral(sp).ok);
}

TEST_CASE("tau_of sign and value") {
    ModelConfig cfg;
    cfg.qp.gamma3 = 1.0;
    cfg.pq.a2 = 0.0;
    cfg.pq.a3 = 1.0;
    CHECK(close(tau_of(cfg), 1.0 / std::sqrt(2.0)));
    cfg.pq.a3 = 2.0;
    CHECK(close(tau_of(cfg), std::sqrt(2.0)));
    cfg.qp.gamma3 = -1.0;
    cfg.pq.a3 = -1.0;  // both negative, product positive
    CHECK(close(tau_of(cfg), 1.0 / std::sqrt(2.0)));
    // the shipped worked model has tau = 1
    ModelConfig worked;
    CHECK(close(tau_of(worked), 1.0, 1e-15));
}

TEST_CASE("find_sojourn frozen example (28, 21)") {
    SojournPair p = find_sojourn(2.0, 0.4, 1.0, 1.185, 0.01, 10, 100);
    CHECK(p.m == 28);
    CHECK(p.n == 21);
    CHECK(std::abs(p.product - 1.185) < 0.01);
    CHECK(close(p.product, 1.18059, 1e-4));
    CHECK(p.slack < 1.0);
    CHECK(close(p.slack, 0.4844, 2e-4));

    auto oracle = brute_force_sojourn(2.0, 0.4, 1.0, 1.185, 0.01, 10, 200);
    REQUIRE(oracle.has_value());
    CHECK(oracle->m == p.m);
    CHECK(oracle->n == p.n);
}

TEST_CASE("find_sojourn resonance diagnostics") {
    CHECK_THROWS_AS(find_sojourn(2.0, 0.5, 1.0, 1.185, 0.01, 10, 100), SojournNotFound);
    try {
        find_sojourn(2.0, 0.5, 1.0, 1.185, 0.01, 10, 100);
    } catch (const SojournNotFound& e) {
        CHECK(e.resonance);
        CHECK(std::string(e.what()).find("resonance") != std::string::npos);
    }
    CHECK(brute_force_sojourn(2.0, 0.5, 1.0, 1.185, 0.01, 10, 200) == std::nullopt);
}

TEST_CASE("find_sojourn postconditions re-verified in extended precision") {
    SojournPair p = find_sojourn(2.0, 0.4, 1.0, 1.0, 0.05, 20, 2000);
    CHECK(p.m > 20);
    CHECK(p.n > 20);
    PrecisionScope scope(300);
    BigFloat product = exp(BigFloat(p.m) * log(BigFloat(2)) + BigFloat(p.n) * log(BigFloat("0.4")));
    CHECK(to_double(abs(product - 1)) < 0.05);
    BigFloat eta = -log(BigFloat("0.4")) / log(BigFloat(2));
    BigFloat slack = abs(BigFloat(p.m) - BigFloat(p.n) * eta - log(BigFloat(1)) / log(BigFloat(2)));
    CHECK(to_double(slack) < 1.0);
}

TEST_CASE("build_schedule shapes") {
    SojournSchedule empty = build_schedule(2.0, 0.4, 1.0, 1.185, 0, 0.02);
    CHECK(empty.entries.empty());
    CHECK(close(empty.target, 1.185));

    SojournSchedule s = build_schedule(2.0, 0.4, 1.0, 1.185, 3, 0.02);
    REQUIRE(s.entries.size() == 3);
    for (size_t k = 0; k < 3; ++k) {
        double bound = 0.02 / std::pow(2.0, k);
        CHECK(std::abs(s.entries[k].pair.product - 1.185) < bound);
        CHECK(close(s.entries[k].zeta, 1.0 / (k + 2.0)));
        if (k) {
            CHECK(s.entries[k].pair.m > s.entries[k - 1].pair.m);
            CHECK(s.entries[k].pair.n > s.entries[k - 1].pair.n);
        }
    }
    CHECK(s.entries[0].pair.m == 28);
    CHECK(s.entries[0].pair.n == 21);

    ScheduleOptions geo;
    geo.offset0 = 0.02;
    SojournSchedule g = build_schedule(2.0, 0.4, 1.0, 1.185, 2, 0.02, geo);
    CHECK(close(g.entries[0].zeta, 0.02));
    CHECK(close(g.entries[1].zeta, 0.01));
}

TEST_CASE("schedule json round trip") {
    SojournSchedule s = build_schedule(2.0, 0.4, 1.0, 1.185, 2, 0.02);
    SojournSchedule back = schedule_from_json(schedule_to_json(s));
    CHECK(back.target == s.target);
    REQUIRE(back.entries.size() == 2);
    CHECK(back.entries[1].pair.m == s.entries[1].pair.m);
    CHECK(back.entries[1].zeta == s.entries[1].zeta);
    CHECK_THROWS_AS(schedule_from_json("[1,2"), ConfigError);
}

TEST_CASE("adapted arguments hit the congruence angles exactly") {
    double theta = 0.1137, omega = 0.2741;
    auto [alpha, beta] = adapted_arguments(28L, 21L, theta, omega, 0.0, 0.0);
    CHECK(angle_congruence_defect_P(28, theta, 0.0, alpha) <= 1e-13);
    CHECK(angle_congruence_defect_Q(21, omega, 0.0, beta) <= 1e-13);

    // with zeta = 0 the m-step angle is exactly pi/4 mod 2pi
    double full = 2 * pi_value<double>() * 28 * (theta + alpha);
    CHECK(close(std::cos(full), 1.0 / std::sqrt(2.0), 1e-10));
    // with vartheta = 0 the n-step angle is exactly pi/2 mod 2pi
    double fullq = 2 * pi_value<double>() * 21 * (omega + beta);
    CHECK(close(std::sin(fullq), 1.0, 1e-10));

    // size bound |alpha| < (pi/4 + 2 pi)/(2 pi m)
    auto [a2, b2] = adapted_arguments(1000L, 1000L, 0.1137, 0.4, 0.0, 0.0);
    CHECK(std::abs(a2) < 0.0012);
    CHECK(std::abs(b2) < (pi_value<double>() / 2 + 2 * pi_value<double>()) /
                             (2 * pi_value<double>() * 1000));

    // in extended precision the congruence defect collapses further
    PrecisionScope scope(200);
    BigFloat th("0.1137"), ze("0.015625");
    BigFloat al = adapted_argument_P(492L, th, ze);
    CHECK(to_double(angle_congruence_defect_P(492L, th, ze, al)) < 1e-50);
}

TEST_CASE("trig sequences on reduced angles") {
    auto t = trig_sequences(0.0, 0.0);
    CHECK(close(t.ct, 1.0 / std::sqrt(2.0)));
    CHECK(close(t.st, 1.0 / std::sqrt(2.0)));
    CHECK(close(t.c, 0.0, 1e-15));
    CHECK(close(t.s, 1.0));

    auto t2 = trig_sequences(0.0, pi_value<double>() / 2);
    CHECK(close(t2.c, -1.0));
    CHECK(close(t2.s, 0.0, 1e-15));

    auto t3 = trig_sequences(-pi_value<double>() / 4, 0.0);
    CHECK(close(t3.ct, 1.0));
    CHECK(close(t3.st, 0.0, 1e-15));
}

TEST_CASE("rho_tilde quadratic tails") {
    TransitionQP qp;  // zero hessians
    auto [r2, r3] = rho_tilde(qp, 0.0, 1.0);
    CHECK(r2 == 0.0);
    CHECK(r3 == 0.0);

    qp.hqp[1][0][0] = 2.0;
    auto [r2b, r3b] = rho_tilde(qp, 0.0, 1.0);
    CHECK(close(r2b, 1.0));
    CHECK(r3b == 0.0);

    TransitionQP qp2;
    qp2.hqp[1][0][0] = qp2.hqp[1][2][2] = 1.0;
    qp2.hqp[2][0][0] = qp2.hqp[2][2][2] = 1.0;
    auto [r2c, r3c] = rho_tilde(qp2, 0.0, 1.0);
    CHECK(close(r2c, 1.0));
    CHECK(close(r3c, 1.0));
}

TEST_CASE("spectral condition drives the landau product along a schedule") {
    SojournSchedule s = build_schedule(2.0, 0.4, 1.0, 1.185, 3, 0.02);
    auto landau = [&](double lambda_P, const SojournPair& p) {
        PrecisionScope scope(300);
        BigFloat v = exp(BigFloat(p.m) * log(BigFloat(lambda_P)) +
                         BigFloat(2 * p.m) * log(BigFloat(2)) +
                         BigFloat(2 * p.n) * log(BigFloat(3)));
        return to_double(v);
    };
    // lambda_P = 0.04 passes the spectral condition with (2, 0.4, 3): decays
    double first = landau(0.04, s.entries.front().pair);
    double last = landau(0.04, s.entries.back().pair);
    CHECK(last * 10.0 <= first);
    // lambda_P = 0.9 violates it: grows
    SaddleSpectrum bad;
    bad.lambda_P = 0.9;
    bad.sigma_P = 2.0;
    bad.lambda_Q = 0.4;
    bad.sigma_Q = 3.0;
    CHECK_FALSE(check_spectral(bad).ok);
    CHECK(landau(0.9, s.entries.back().pair) > landau(0.9, s.entries.front().pair));
}
