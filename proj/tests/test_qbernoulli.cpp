#include <doctest.h>

#include <cstdio>

#include "qpl/q_bernoulli.hpp"

using namespace qpl;

namespace {

auto qmake = [](const mpz_class& k) { return mpq_class(k); };

mpq_class qpow(const mpq_class& q, long e) {
    mpq_class r = 1;
    for (long i = 0; i < e; ++i) r *= q;
    return r;
}

bool agrees(const PadicNumber& a, const PadicNumber& b, long digits) {
    PadicNumber d = a - b;
    return std::min(a.prec(), b.prec()) >= digits && (d.is_zero() || d.val() >= digits);
}

}  // namespace

TEST_CASE("pure-sum multiples match exact rational evaluation") {
    QContext ctx(5, mpq_class(6), 20);
    for (long r = 1; r <= 3; ++r) {
        for (long n = 0; n <= 7; ++n) {
            for (long x = 0; x <= 3; ++x) {
                for (long base : {1L, 5L}) {
                    mpq_class Q = qpow(6, base);
                    mpq_class exact = closed_form::pure_multiple(n, r, Q, qpow(Q, x), qmake);
                    PadicNumber got = pure_multi_beta(ctx, n, r, ExponentForm(x), base);
                    CHECK(got.prec() == 20);
                    CHECK(got == ctx.rational(exact));
                }
            }
        }
    }
    CHECK(pure_multi_beta(ctx, 1, 2, ExponentForm(1)).is_zero());
}

TEST_CASE("expansion in q^z and [z]") {
    // beta^(r)_n(z) = q^((1-r)z) sum_k C(n,k) q^(kz) beta^(r)_k [z]^(n-k)
    QContext ctx(5, mpq_class(6), 20);
    for (mpq_class z : {mpq_class(3), mpq_class(7, 3), mpq_class(-2, 7)}) {
        ExponentForm x(z);
        PadicNumber qz = ctx.q_power(1, x), br = ctx.q_bracket(1, x);
        for (long r = 1; r <= 3; ++r) {
            for (long n = 0; n <= 6; ++n) {
                PadicNumber sum = ctx.zero();
                for (long k = 0; k <= n; ++k)
                    sum += ctx.integer(binomial(n, k)) * qz.pow(k) * pure_multi_beta(ctx, k, r, 0) *
                           br.pow(n - k);
                CHECK(agrees(pure_multi_beta(ctx, n, r, x), qz.pow(1 - r) * sum, 12));
            }
        }
    }
}

TEST_CASE("Carlitz numbers") {
    QContext ctx(5, mpq_class(6), 20);
    CHECK(carlitz_beta(ctx, 0) == (ctx.q() - ctx.integer(1)) / ctx.log_q());
    for (long n = 0; n <= 10; ++n) {
        PadicNumber res = carlitz_residual(ctx, n);
        CHECK((res.is_zero() || res.val() >= 15));
        CHECK(carlitz_beta(ctx, n).prec() == 20);
    }
    // polynomial equals closed form pure^(1)_n + c (1-q)^(-n) at exact x
    PadicNumber c = carlitz_beta(ctx, 0);
    for (long n = 0; n <= 6; ++n) {
        for (mpq_class x : {mpq_class(0), mpq_class(2), mpq_class(4, 3)}) {
            PadicNumber cf = closed_form::carlitz_single(n, ctx.q(), ctx.q_power(1, ExponentForm(x)), c,
                                                         [&](const mpz_class& k) { return ctx.integer(k); });
            CHECK(agrees(carlitz_beta_poly(ctx, n, ExponentForm(x)), cf, 12));
        }
    }
    // q -> 1 recovers the classical numbers
    for (long m : {6L, 10L}) {
        QContext near = QContext::from_descriptor(5, "1+p^" + std::to_string(m), 40);
        for (long n = 0; n <= 8; ++n)
            CHECK(agrees(carlitz_beta(near, n), near.rational(bernoulli_number(n)), m - 2));
    }
}

TEST_CASE("convention flag") {
    QContext pure(5, mpq_class(6), 16);
    QContext carl = pure.with_convention(Convention::Carlitz);
    CHECK(multi_q_beta_number(carl, 3, 1) == carlitz_beta(carl, 3));
    CHECK(multi_q_beta_number(pure, 3, 1) == pure_multi_beta(pure, 3, 1, 0));
    CHECK(multi_q_beta_number(carl, 0, 2) == carlitz_beta(carl, 0).pow(2));
    CHECK(multi_q_beta_number(carl, 4, 2) == pure_multi_beta(pure, 4, 2, 0));
    CHECK(parse_convention("carlitz") == Convention::Carlitz);
    CHECK_THROWS_AS(parse_convention("other"), ParseError);
}

TEST_CASE("generalized multiples are independent of the period") {
    QContext ctx(5, mpq_class(6), 20);
    for (long r = 1; r <= 2; ++r) {
        for (long h : {0L, 1L, 2L}) {
            DirichletCharacter chi = DirichletCharacter::omega_power(5, h);
            long f = chi.conductor();
            for (long n = r; n <= r + 3; ++n) {
                ExponentForm z(mpq_class(2, 3));
                MultiSumOptions a, b, c;
                a.F = f;
                b.F = 2 * f;
                c.F = 5 * f;
                PadicNumber va = multi_gen_q_beta_poly(ctx, n, r, chi, z, a);
                PadicNumber vb = multi_gen_q_beta_poly(ctx, n, r, chi, z, b);
                PadicNumber vc = multi_gen_q_beta_poly(ctx, n, r, chi, z, c);
                CHECK(agrees(va, vb, std::min(va.prec(), vb.prec())));
                CHECK(agrees(va, vc, std::min(va.prec(), vc.prec())));
                CHECK(std::min({va.prec(), vb.prec(), vc.prec()}) >= 12);
            }
            if (f > 1) CHECK_THROWS_AS(gen_q_beta_poly(ctx, 2, chi, 0, f + 1), PreconditionViolated);
        }
    }
    MultiSumOptions tight;
    tight.F = 25;
    tight.budget = 100;
    CHECK_THROWS_AS(multi_gen_q_beta_poly(ctx, 3, 2, DirichletCharacter::omega_power(5, 1), 0, tight),
                    BudgetExceeded);
}

TEST_CASE("principal generalized single is the Carlitz polynomial") {
    QContext ctx(5, mpq_class(6), 20);
    DirichletCharacter one = DirichletCharacter::principal(5);
    for (long n = 0; n <= 5; ++n)
        CHECK(agrees(gen_q_beta_poly(ctx, n, one, ExponentForm(mpq_class(1, 2))),
                     carlitz_beta_poly(ctx, n, ExponentForm(mpq_class(3, 2))), 12));
}

TEST_CASE("nested-sum identity requires a certificate") {
    QContext ctx(5, mpq_class(6), 12);
    CHECK_THROWS_AS(kim_sum_of_products(ctx, 2, 2, {1, 2}, std::nullopt), NormalizationUnresolved);
    CHECK_THROWS_AS(load_certificate("/nonexistent/cert.json"), NormalizationUnresolved);
    std::string path = "qpl_test_certificate.json";
    save_certificate({"n+r", "pure_sum", {0.0, 1e-15}}, path);
    ConventionCertificate back = load_certificate(path);
    CHECK(back.normalization == "n+r");
    CHECK(back.single_beta == "pure_sum");
    CHECK(back.residuals.size() == 2);
    // r = 1 with the (n+r, pure) certificate is the single multiple itself
    for (long n = 0; n <= 4; ++n)
        CHECK(agrees(kim_sum_of_products(ctx, n, 1, {ExponentForm(mpq_class(1, 3))}, back),
                     pure_multi_beta(ctx, n + 1, 1, ExponentForm(mpq_class(1, 3))), 7));
    std::remove(path.c_str());
}

TEST_CASE("loss budget") {
    CHECK(loss_budget(0, 1, 5) == 0);
    CHECK(loss_budget(6, 1, 5) == 6 * (1 + 2 + 2));
}
