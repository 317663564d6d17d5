#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>

#include "qpl/characters.hpp"

namespace qpl {

// Element of Q(zeta) written as sum_e c_e zeta^e with zeta the fixed
// primitive phi(p*)-th root of unity; exponents are kept reduced mod phi.
struct RootOfUnitySum {
    long phi = 1;
    std::map<long, mpq_class> coeffs;

    void add(long e, const mpq_class& c);
    RootOfUnitySum scaled(const mpq_class& c) const;
    RootOfUnitySum operator-(const RootOfUnitySum& o) const;
    bool is_rational() const;
    std::optional<mpq_class> rational() const;
    PadicNumber to_padic(const QContext& ctx) const;
};

mpz_class binomial(long n, long k);
mpz_class factorial(long n);
mpz_class multinomial(long n, const std::vector<long>& parts);

mpq_class bernoulli_number(long n);  // B_1 = -1/2
mpq_class bernoulli_poly(long n, const mpq_class& x);
mpq_class norlund_number(long n, long r);  // B^(r)_n
mpq_class norlund_poly(long n, long r, const mpq_class& x);
mpz_class stirling_first(long k, long m);  // signed
mpz_class pochhammer(const mpz_class& x, long r);  // rising factorial (x)_r
mpq_class pochhammer(const mpq_class& x, long r);

// f^(n-1) sum_{a=1}^{f} chi(a) B_n((a+z)/f), f the conductor
RootOfUnitySum gen_bernoulli_poly(long n, const DirichletCharacter& chi, const mpq_class& z);
// f^(n-r) sum_{a in [1,f]^r} chi(a_1+..+a_r) B^(r)_n((z+a_1+..+a_r)/f)
RootOfUnitySum multi_gen_bernoulli_poly(long n, long r, const DirichletCharacter& chi,
                                        const mpq_class& z);

// Number of tuples in [1,F]^r with coordinate sum S, indexed by S - r.
std::vector<mpz_class> tuple_sum_counts(long F, long r);

}  // namespace qpl
