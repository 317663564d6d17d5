#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qpl/characters.hpp"
#include "qpl/classical_bernoulli.hpp"
#include "qpl/qcontext.hpp"

namespace qpl {

// Closed forms shared by the p-adic code and the real-q oracle.  T is a field
// type; make(k) embeds an integer.
namespace closed_form {

template <class T, class Make>
T ipow(const T& x, long e, Make make) {
    if (e < 0) return T(make(1) / ipow<T>(x, -e, make));
    T result = make(1), base = x;
    while (e > 0) {
        if (e & 1) result = T(result * base);
        e >>= 1;
        if (e) base = T(base * base);
    }
    return result;
}

// Pure-sum multiple: (-1)^r n!/(n-r)! (1-Q)^(r-n)
//   * sum_{j=0}^{n-r} C(n-r,j) (-1)^j Qx^(j+1) / (1-Q^(j+1))^r,  Qx = Q^x.
template <class T, class Make>
T pure_multiple(long n, long r, const T& Q, const T& Qx, Make make) {
    if (n < r) return make(0);
    T one = make(1);
    T sum = make(0);
    T Qj = one, Qxj = one;
    for (long j = 0; j <= n - r; ++j) {
        Qj = T(Qj * Q);
        Qxj = T(Qxj * Qx);
        T term = T(make(binomial(n - r, j)) * Qxj / ipow<T>(T(one - Qj), r, make));
        sum = (j % 2) ? T(sum - term) : T(sum + term);
    }
    mpz_class coeff = factorial(n) / factorial(n - r);
    if (r % 2) coeff = -coeff;
    return T(make(coeff) * ipow<T>(T(one - Q), r - n, make) * sum);
}

// Carlitz single: pure_multiple(n, 1) + c (1-Q)^(-n), c = (Q-1)/log Q.
template <class T, class Make>
T carlitz_single(long n, const T& Q, const T& Qx, const T& c, Make make) {
    return T(pure_multiple<T>(n, 1, Q, Qx, make) + c * ipow<T>(T(make(1) - Q), -n, make));
}

// Nested multinomial sum of products of singles; singles[j][m] = beta_m(z_j).
template <class T, class Make>
T nested_product_sum(long N, long r, const std::vector<std::vector<T>>& singles, const T& qm1,
                 Make make) {
    T total = make(0);
    std::vector<long> parts(r);
    // i_1..i_r composition of N, then k_1..k_{r-1}
    auto rec_k = [&](auto&& self, long j, long remaining, T acc, mpz_class coeff,
                     long ksum) -> void {
        if (j == r - 1) {
            T term = T(acc * singles[r - 1][parts[r - 1]]);
            total = T(total + make(coeff) * term * ipow<T>(qm1, ksum, make));
            return;
        }
        long rem = remaining - parts[j];
        for (long k = 0; k <= rem; ++k) {
            self(self, j + 1, rem, T(acc * singles[j][k + parts[j]]), coeff * binomial(rem, k),
                 ksum + k);
        }
    };
    auto rec_i = [&](auto&& self, long j, long left) -> void {
        if (j == r - 1) {
            parts[j] = left;
            rec_k(rec_k, 0, N, make(1), multinomial(N, parts), 0);
            return;
        }
        for (long i = 0; i <= left; ++i) {
            parts[j] = i;
            self(self, j + 1, left - i);
        }
    };
    rec_i(rec_i, 0, N);
    return total;
}

}  // namespace closed_form

struct ConventionCertificate {
    std::string normalization;  // "n+r" or "n"
    std::string single_beta;    // "pure_sum" or "carlitz"
    std::vector<double> residuals;
};

ConventionCertificate load_certificate(const std::string& path);
void save_certificate(const ConventionCertificate& cert, const std::string& path);

long loss_budget(long n, long v_q_minus_one, long p);
// Extra working digits for sums whose beta numbers run up to index n in q^base.
long working_extra(const QContext& ctx, long n, long base);
// v truncated to the context precision.
PadicNumber settle(const PadicNumber& v, const QContext& ctx);
// factor(w) * v settled to ctx, with the factor evaluated in a context lifted by -v(v)
// so that a negative valuation of v costs no absolute digits.
template <class Factor>
PadicNumber times_factor(const QContext& ctx, const PadicNumber& v, Factor&& factor) {
    long extra = v.is_zero() ? 0 : std::max(0L, -v.val());
    return settle(factor(ctx.lifted(extra + 2)) * v, ctx);
}

// Carlitz numbers beta_{n,Q}, Q = q^base, from (Q beta + 1)^n - beta_n = delta_{n,1}
// with beta_0 = (Q-1)/log_p Q.
PadicNumber carlitz_beta(const QContext& ctx, long n, long base = 1);
PadicNumber carlitz_beta_poly(const QContext& ctx, long n, const ExponentForm& x, long base = 1);
// Residual of the recurrence at index n (zero to full precision when consistent).
PadicNumber carlitz_residual(const QContext& ctx, long n, long base = 1);

// Pure-sum multiple polynomial beta^(r)_{n,Q}(x), Q = q^base.
PadicNumber pure_multi_beta(const QContext& ctx, long n, long r, const ExponentForm& x,
                            long base = 1);
// Multiple polynomial under the context convention (pure-sum by default;
// Carlitz: r = 1 uses Carlitz singles, r >= 2 replaces the n = 0 number).
PadicNumber multi_q_beta_poly(const QContext& ctx, long n, long r, const ExponentForm& x,
                              long base = 1);
PadicNumber multi_q_beta_number(const QContext& ctx, long n, long r, long base = 1);

// [F]_q^(n-1) sum_{a=1}^{F} chi(a) beta_{n,q^F}((a+z)/F), Carlitz singles.
PadicNumber gen_q_beta_poly(const QContext& ctx, long n, const DirichletCharacter& chi,
                            const ExponentForm& z, long F = 0);

struct MultiSumOptions {
    long base = 1;        // evaluate in q^base
    long F = 0;           // period, multiple of the conductor; 0 means conductor
    double budget = 1e7;  // cap on F^r
};

// [F]_{Q}^(n-r) sum_{a in [1,F]^r} chi(sum a) beta^(r)_{n,Q^F}((z+sum a)/F), Q = q^base
PadicNumber multi_gen_q_beta_poly(const QContext& ctx, long n, long r,
                                  const DirichletCharacter& chi, const ExponentForm& z,
                                  const MultiSumOptions& opt = {});

PadicNumber kim_sum_of_products(const QContext& ctx, long n, long r,
                                const std::vector<ExponentForm>& z,
                                const std::optional<ConventionCertificate>& cert);
// Character version: [f]^n sum_a chi(sum a) * nested sum in q^f over ((a_j+z_j)/f);
// returns the bracketed sum without the (-1)^r/(n+1)_r prefactor.
PadicNumber character_nested_sum(const QContext& ctx, long n, long r, const DirichletCharacter& chi,
                              const std::vector<ExponentForm>& z,
                              const std::optional<ConventionCertificate>& cert);

}  // namespace qpl
