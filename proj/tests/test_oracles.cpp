#include <doctest.h>

#include "qpl/oracles.hpp"

using namespace qpl;

TEST_CASE("worked oracle values") {
    CHECK(oracle_multi_beta(0.3, 1, 1, 0.0).value.real() == doctest::Approx(-1.0 / 0.7).epsilon(1e-12));
    CHECK(oracle_multi_beta(0.3, 2, 2, 0.0).value.real() == doctest::Approx(2.0 / 0.49).epsilon(1e-12));
    CHECK(closed_multi_beta(0.3, 1, 1, 0.0) == doctest::Approx(-1.428571).epsilon(1e-6));
    CHECK(closed_multi_beta(0.3, 2, 2, 0.0) == doctest::Approx(4.0816).epsilon(1e-4));

    auto v60 = oracle_q_zeta(0.5, 3.0, 1, 1.0, 60, 1e-12);
    CHECK(v60.tail_bound < 1e-12);
    auto v80 = oracle_q_zeta(0.5, 3.0, 1, 1.0, 80, 1e-12);
    CHECK(std::abs(v60.value - v80.value) < 1e-12);
    CHECK_THROWS_AS(oracle_q_zeta(0.5, 3.0, 1, 1.0, 5, 1e-12), TailTooLarge);
    CHECK_THROWS_AS(oracle_q_zeta(0.5, 1.0, 1, 1.0), PreconditionViolated);
    CHECK_THROWS_AS(oracle_multi_beta(0.5, 1, 2, 1.0), PreconditionViolated);
}

TEST_CASE("direct sums match closed forms") {
    for (double q : {0.2, 0.3, 0.5, 0.7}) {
        for (double z : {0.0, 0.4, 1.0, 2.5}) {
            for (long r = 1; r <= 3; ++r) {
                for (long n = r; n <= 8; ++n) {
                    double closed = closed_multi_beta(q, n, r, z);
                    double direct = oracle_multi_beta(q, n, r, z, 0, 1e-13).value.real();
                    CHECK(direct == doctest::Approx(closed).epsilon(1e-9).scale(1.0));
                }
            }
        }
    }
}

TEST_CASE("Carlitz closed form solves its recurrence") {
    for (double q : {0.2, 0.3, 0.6}) {
        auto rec = carlitz_recurrence_real(q, 8);
        for (long n = 0; n <= 8; ++n)
            CHECK(closed_carlitz_beta(q, n, 0.0) == doctest::Approx(rec[n]).epsilon(1e-9));
    }
    // polynomial shift: beta_n(x) = sum_k C(n,k) q^(kx) beta_k [x]^(n-k)
    double q = 0.3, x = 0.8;
    auto b = carlitz_recurrence_real(q, 6);
    double bx = (1 - std::pow(q, x)) / (1 - q);
    for (long n = 0; n <= 6; ++n) {
        double s = 0;
        for (long k = 0; k <= n; ++k)
            s += binomial(n, k).get_d() * std::pow(q, k * x) * b[k] * std::pow(bx, n - k);
        CHECK(closed_carlitz_beta(q, n, x) == doctest::Approx(s).epsilon(1e-9));
    }
}

TEST_CASE("twisted sums at non-positive integers") {
    DirichletCharacter legendre3 = DirichletCharacter::omega_power(3, 1);
    std::vector<std::vector<cplx>> tables{{}, complex_character_table(legendre3),
                                          complex_character_table(DirichletCharacter::omega_power(5, 1))};
    for (const auto& chi : tables) {
        for (long r = 1; r <= 2; ++r) {
            for (long n = 0; n <= 3; ++n) {
                OracleConfig cfg;
                cfg.q = 0.4;
                cfg.chi = chi;
                cplx direct = oracle_q_l(cfg, cplx(-double(n), 0), r, 0.5).value;
                cplx closed = closed_q_l_special(0.4, n, r, chi, 0.5);
                CHECK(std::abs(direct - closed) < 1e-9 * std::max(1.0, std::abs(closed)));
            }
        }
    }
}

TEST_CASE("complex character tables") {
    auto t = complex_character_table(DirichletCharacter::omega_power(5, 1));
    REQUIRE(t.size() == 5);
    CHECK(std::abs(t[0]) == 0.0);
    CHECK(std::abs(t[4] - cplx(-1, 0)) < 1e-15);
    for (long a = 1; a < 5; ++a)
        for (long b = 1; b < 5; ++b) CHECK(std::abs(t[a * b % 5] - t[a] * t[b]) < 1e-12);
}

TEST_CASE("nested-sum normalization search") {
    auto rows = oracle_convention_residuals();
    CHECK(rows.size() == 8);
    for (const auto& row : rows) {
        if (row.normalization == "n+r" && row.single_beta == "pure_sum") CHECK(row.worst_r >= 2);
    }
    // at r = 1 the identity is a tautology for either single convention
    for (const auto& row : oracle_convention_residuals({0.2, 0.3}, 1, 4))
        if (row.normalization == "n+r") CHECK(row.residual < 1e-12);
    CHECK_THROWS_AS(oracle_resolve_conventions(), NoConsistentNormalization);
    try {
        oracle_resolve_conventions();
    } catch (const NoConsistentNormalization& e) {
        CHECK(std::string(e.what()).find("max_residual") != std::string::npos);
    }
}
