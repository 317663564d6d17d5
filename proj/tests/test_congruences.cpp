#include <doctest.h>

#include "qpl/congruences.hpp"

using namespace qpl;

namespace {

mpq_class power_seq(long a, long m) { return mpq_class(int_pow(a, m)); }

}  // namespace

TEST_CASE("forward differences") {
    auto cube = [](long m) { return mpq_class(m * m * m); };
    CHECK(forward_diff<mpq_class>(cube, 2, 1, 3) == 6);
    CHECK(forward_diff<mpq_class>(cube, 5, 3, 4) == 0);
    CHECK(forward_diff<mpq_class>(cube, 7, 2, 0) == 343);
    auto bn = [](long m) -> mpq_class { return bernoulli_number(m) / mpq_class(m); };
    CHECK(forward_diff<mpq_class>(bn, 2, 4, 1) == mpq_class(-5, 63));
    CHECK(valuation(mpq_class(-5, 63), 5) == 1);
    CHECK_THROWS_AS(forward_diff<mpq_class>(cube, 0, 0, 1), PreconditionViolated);
}

TEST_CASE("binomial operator acts on eigen-sequences") {
    // Delta_c a^m = (a^c - 1) a^m, so the operator gives C((a^c - 1)/p*, k) a^n
    for (long k = 0; k <= 4; ++k) {
        for (long n = 0; n <= 3; ++n) {
            auto seq = [](long m) { return power_seq(11, m); };
            CHECK(binom_operator<mpq_class>(seq, n, 1, k, 5) == mpq_class(binomial(2, k) * int_pow(11, n)));
            auto seq3 = [](long m) { return power_seq(4, m); };
            // (4^2 - 1)/5 = 3
            CHECK(binom_operator<mpq_class>(seq3, n, 2, k, 5) == mpq_class(binomial(3, k) * int_pow(4, n)));
        }
    }
}

TEST_CASE("p-adic and rational difference operators agree") {
    QContext ctx(7, mpq_class(8), 20);
    auto rat = [](long m) -> mpq_class { return bernoulli_number(m) + mpq_class(m, 3); };
    auto pad = [&](long m) -> PadicNumber { return ctx.rational(rat(m)); };
    for (long k = 1; k <= 3; ++k) {
        CHECK(forward_diff<PadicNumber>(pad, 2, 6, k) == ctx.rational(forward_diff<mpq_class>(rat, 2, 6, k)));
        CHECK(binom_operator<PadicNumber>(pad, 1, 6, k, 7) ==
              ctx.rational(binom_operator<mpq_class>(rat, 1, 6, k, 7)));
    }
}

TEST_CASE("classical Kummer congruences") {
    CongruenceReport rep = verify_classical_kummer(5, 2, 4, 1);
    CHECK(rep.pass());
    CHECK(rep.observed_valuation == 0);
    CHECK(*rep.exact_witness == mpq_class(-1, 63));
    CHECK(rep.to_json()["certified_precision"] == "exact");
    for (long p : {5L, 7L}) {
        for (long n = 2; n <= 10; n += 2) {
            if (n % (p - 1) == 0) continue;
            for (long k = 1; k <= 2 && k < n; ++k)
                for (long c : {p - 1, 2 * (p - 1)}) CHECK(verify_classical_kummer(p, n, c, k).pass());
        }
    }
    CHECK_THROWS_AS(verify_classical_kummer(5, 4, 4, 1), PreconditionViolated);
    CHECK_THROWS_AS(verify_classical_kummer(5, 2, 3, 1), PreconditionViolated);
    CHECK_THROWS_AS(verify_classical_kummer(5, 3, 4, 1), PreconditionViolated);
}

TEST_CASE("twisted Kummer congruences") {
    for (long p : {5L, 7L}) {
        DirichletCharacter quad3 = DirichletCharacter::build(p, 3, {{2, RootOfUnity{1, 2}}});
        DirichletCharacter quad4 = DirichletCharacter::build(p, 4, {{3, RootOfUnity{1, 2}}});
        for (const auto& chi : {quad3, quad4}) {
            for (long n = 2; n <= 6; ++n)
                for (long k = 1; k < n && k <= 2; ++k)
                    CHECK(verify_classical_kummer(p, n, p - 1, k, KummerForm::Carlitz, chi).pass());
        }
        CHECK_THROWS_AS(verify_classical_kummer(p, 3, p - 1, 1, KummerForm::Carlitz,
                                                DirichletCharacter::omega_power(p, 1)),
                        PreconditionViolated);
        for (long h = 1; h < 4; ++h) {
            DirichletCharacter chi = DirichletCharacter::omega_power(p, h);
            for (long n = 1; n <= 4; ++n)
                for (long c = 1; c <= p - 1; ++c)
                    for (long k = 1; k <= 2; ++k) {
                        CongruenceReport rep = verify_classical_kummer(p, n, c, k, KummerForm::Shiratani, chi);
                        CHECK_MESSAGE(rep.pass(), rep.to_json().dump());
                    }
        }
    }
    CHECK_THROWS_AS(verify_classical_kummer(5, 2, 1, 1, KummerForm::Shiratani), PreconditionViolated);
    CHECK(parse_kummer_form("shiratani") == KummerForm::Shiratani);
    CHECK_THROWS_AS(parse_kummer_form("other"), ParseError);
}

TEST_CASE("judging observed valuations") {
    CongruenceReport base;
    CHECK(judge(base, PadicNumber::from_integer(25, 5, 10), 2).verdict == Verdict::Pass);
    CHECK(judge(base, PadicNumber::from_integer(5, 5, 10), 2).verdict == Verdict::Fail);
    CHECK(judge(base, PadicNumber::from_integer(25, 5, 4), 2).verdict == Verdict::Inconclusive);
    CHECK(judge(base, PadicNumber::zero(5, 4), 2).verdict == Verdict::Inconclusive);
    CHECK(judge(base, PadicNumber::zero(5, 5), 2).verdict == Verdict::Pass);
}

TEST_CASE("q-difference congruences at r = 1") {
    QContext ctx = QContext::from_descriptor(5, "1+p", 12);
    for (long h : {0L, 1L, 2L}) {
        DirichletCharacter chi = DirichletCharacter::omega_power(5, h);
        for (const mpq_class& z : congruence_z_samples(5, 1, chi)) {
            for (long k = 0; k <= 2; ++k) {
                for (auto& rep : verify_thm53(ctx, chi, 1, {1, 2, 3}, 4, k, ExponentForm(z)))
                    CHECK_MESSAGE(rep.pass(), rep.to_json().dump());
                for (auto& rep : verify_binom_op_thm(ctx, chi, 1, {1, 2}, 4, k, ExponentForm(z)))
                    CHECK_MESSAGE(rep.pass(), rep.to_json().dump());
            }
            CHECK(verify_thm54(ctx, chi, 1, 1, 4, 1, 5, ExponentForm(z)).pass());
            CHECK(verify_thm54(ctx, chi, 1, 2, 1, 2, 2, ExponentForm(z)).witness->is_zero());
        }
    }
}

TEST_CASE("structure values and operator reductions") {
    QContext ctx = QContext::from_descriptor(7, "1+p", 12);
    DirichletCharacter chi = DirichletCharacter::omega_power(7, 2);
    ExponentForm z(mpq_class(98, 3));
    for (long n = 1; n <= 3; ++n) CHECK(Bnr_structure(ctx, n, 2, chi, z) == Lpq_special(ctx, n, 2, chi, z));
    CHECK_THROWS_AS(Bnr_structure(ctx, 0, 1, chi, z), PreconditionViolated);
    auto diff = verify_thm53(ctx, chi, 1, {2}, 6, 1, ExponentForm(98));
    auto binom = verify_binom_op_thm(ctx, chi, 1, {2}, 6, 1, ExponentForm(98));
    CHECK(binom[0].witness->scaled(mpq_class(7)) == *diff[0].witness);
    CHECK(binom[0].audit == std::vector<std::string>{"1/7 * Delta_c^1"});
    auto b2 = verify_binom_op_thm(ctx, chi, 1, {2}, 6, 2, ExponentForm(98));
    CHECK(b2[0].audit == std::vector<std::string>{"-1/14 * Delta_c^1", "1/98 * Delta_c^2"});
}

TEST_CASE("points outside the certified domain") {
    QContext ctx(5, mpq_class(6), 12);
    DirichletCharacter chi = DirichletCharacter::omega_power(5, 2);
    VerifyOptions probe;
    probe.enforce_domain = false;
    for (auto& rep : verify_thm53(ctx, chi, 1, {1, 2, 3}, 4, 1, ExponentForm(5), probe))
        CHECK_MESSAGE(rep.pass(), rep.to_json().dump());
    CHECK_THROWS_AS(verify_thm53(ctx, chi, 1, {1, 2, 3}, 4, 1, ExponentForm(5)), DomainError);
}

TEST_CASE("second-order stencils through a principal twist leave R*") {
    QContext ctx(5, mpq_class(6), 12);
    DirichletCharacter one = DirichletCharacter::principal(5);
    auto reps = verify_thm53(ctx, one, 2, {1}, 1, 1, ExponentForm(50));
    REQUIRE(reps.size() == 1);
    CHECK(reps[0].verdict == Verdict::Fail);
    CHECK(reps[0].observed_valuation == -2);
    CHECK(reps[0].required_valuation == 2);
    CHECK_THROWS_AS(require_decided({CongruenceReport{}}), InconclusivePrecision);
    CHECK_NOTHROW(require_decided(reps));
}

TEST_CASE("q-difference preconditions") {
    QContext ctx = QContext::from_descriptor(5, "1+p", 12);
    DirichletCharacter chi = DirichletCharacter::omega_power(5, 1);
    CHECK(congruence_z_valuation(5, 1, chi) == 2);
    CHECK_THROWS_AS(verify_thm54(ctx, chi, 1, 1, 4, 1, 2, ExponentForm(25)), PreconditionViolated);
    CHECK_THROWS_AS(verify_thm53(ctx, chi, 1, {1}, 4, 1, ExponentForm(5)), DomainError);
    CHECK_THROWS_AS(verify_thm53(ctx, chi, 1, {1}, 0, 1, ExponentForm(25)), PreconditionViolated);
    CongruenceReport rep = verify_thm54(ctx, chi, 1, 1, 1, 1, 5, ExponentForm(25));
    CHECK(rep.verdict != Verdict::Inconclusive);
    CHECK(rep.to_json()["k"].size() == 2);
}
