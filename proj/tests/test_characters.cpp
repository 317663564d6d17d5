#include <doctest.h>

#include "qpl/characters.hpp"

using namespace qpl;

TEST_CASE("Teichmuller character as a Dirichlet character") {
    QContext ctx(5, mpq_class(6), 12);
    auto omega = DirichletCharacter::omega_power(5, 1);
    CHECK(omega.conductor() == 5);
    CHECK(omega.order() == 4);
    CHECK(omega.eval(ctx, 4) == ctx.integer(-1));
    CHECK(omega.eval(ctx, 10).is_zero());
    for (long a = 1; a < 5; ++a) CHECK(omega.eval(ctx, a) == teichmuller(a, 5, 12));

    auto w2 = DirichletCharacter::omega_power(5, 2);
    auto w3 = DirichletCharacter::omega_power(5, 3);
    CHECK(w2 * w3 == omega);
    CHECK(DirichletCharacter::omega_power(5, 4).is_principal());
    CHECK(omega.twist(1).is_principal());
    CHECK(w2.is_integer_valued());
    CHECK_FALSE(omega.is_integer_valued());
}

TEST_CASE("conductor of induced characters") {
    // omega lifted to modulus 25: generator 2 of (Z/25)^x maps to ind_2(2) = 1
    auto chi = DirichletCharacter::build(5, 25, {{2, RootOfUnity{1, 4}}});
    CHECK(chi.modulus() == 25);
    CHECK(chi.conductor() == 5);
    CHECK(chi.primitive() == DirichletCharacter::omega_power(5, 1));
}

TEST_CASE("building from generator images") {
    // Legendre symbol mod 3 at p = 5: value -1 = zeta^2
    auto leg3 = DirichletCharacter::build(5, 3, {{2, RootOfUnity{1, 2}}});
    CHECK(leg3.conductor() == 3);
    CHECK(leg3.sign(2) == -1);
    CHECK(leg3.sign(1) == 1);
    CHECK(leg3.sign(3) == 0);
    CHECK_THROWS_AS(DirichletCharacter::build(5, 3, {{2, RootOfUnity{1, 3}}}), UnsupportedOrder);
    CHECK_THROWS_AS(DirichletCharacter::build(5, 8, {{3, RootOfUnity{1, 2}}}),
                    PreconditionViolated);
    // 2 has order 2 mod 3; an order-4 image is inconsistent
    CHECK_THROWS_AS(DirichletCharacter::build(5, 3, {{2, RootOfUnity{1, 4}}}),
                    PreconditionViolated);
}

TEST_CASE("parsing character specs") {
    auto a = DirichletCharacter::parse(5, "omega^2");
    CHECK(a == DirichletCharacter::omega_power(5, 2));
    auto b = DirichletCharacter::parse(5, "mod:3;gens:2->2");
    CHECK(b.conductor() == 3);
    CHECK(b.sign(2) == -1);
    CHECK(DirichletCharacter::parse(5, "principal").is_principal());
    CHECK(DirichletCharacter::parse(7, "omega^-1") == DirichletCharacter::omega_power(7, 5));
    CHECK_THROWS_AS(DirichletCharacter::parse(5, "bogus"), ParseError);
    CHECK(DirichletCharacter::parse(5, b.to_string()) == b);
}

TEST_CASE("multiplicativity and products over all pairs") {
    for (long p : {3L, 5L, 7L}) {
        QContext ctx(p, mpq_class(1 + p), 10);
        long phi = p - 1;
        for (long h1 = 0; h1 < phi; ++h1) {
            for (long h2 = 0; h2 < phi; ++h2) {
                auto x = DirichletCharacter::omega_power(p, h1);
                auto y = DirichletCharacter::omega_power(p, h2);
                auto xy = x * y;
                CHECK(xy == DirichletCharacter::omega_power(p, h1 + h2));
                for (long a = 1; a < 3 * p; ++a) {
                    if (a % p == 0) {
                        // primitive product: principal means value 1 even at multiples of p
                        if (xy.is_principal()) CHECK(xy.eval(ctx, a) == ctx.integer(1));
                        continue;
                    }
                    CHECK(xy.eval(ctx, a) == x.eval(ctx, a) * y.eval(ctx, a));
                    CHECK(x.eval(ctx, a * (a + 1)) == x.eval(ctx, a) * x.eval(ctx, a + 1));
                }
            }
        }
    }
    // mixed conductor product
    auto leg3 = DirichletCharacter::build(5, 3, {{2, RootOfUnity{1, 2}}});
    auto prod = leg3 * DirichletCharacter::omega_power(5, 1);
    CHECK(prod.conductor() == 15);
}

TEST_CASE("p = 2 conventions") {
    auto w = DirichletCharacter::omega_power(2, 1);
    CHECK(w.conductor() == 4);
    CHECK(w.sign(3) == -1);
    CHECK(w.sign(5) == 1);
    CHECK(lcm_long(5, p_star(2)) == 20);
}
