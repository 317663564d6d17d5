#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qpl/classical_bernoulli.hpp"
#include "qpl/errors.hpp"
#include "qpl/l_functions.hpp"

namespace qpl {

inline mpz_class int_pow(long b, long e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), b, e);
    return r;
}

inline PadicNumber scale_by(const PadicNumber& x, const mpq_class& c) { return x.scaled(c); }
inline mpq_class scale_by(const mpq_class& x, const mpq_class& c) { return x * c; }

// sum_{m=0}^{k} C(k,m) (-1)^(k-m) x_{n+mc}
template <class T, class Seq>
T forward_diff(Seq&& seq, long n, long c, long k) {
    if (k < 0 || c < 1) throw PreconditionViolated("forward difference needs k >= 0 and c >= 1");
    T total = scale_by(seq(n + k * c), mpq_class(1));
    for (long m = 0; m < k; ++m) {
        mpz_class b = binomial(k, m);
        if ((k - m) % 2) b = -b;
        total = total + scale_by(seq(n + m * c), mpq_class(b));
    }
    return total;
}

// ((p*)^-1 Delta_c choose k) x_n = (1/k!) sum_m s(k,m) (p*)^-m Delta_c^m x_n
template <class T, class Seq>
T binom_operator(Seq&& seq, long n, long c, long k, long pstar) {
    T total = scale_by(forward_diff<T>(seq, n, c, k), mpq_class(1, 1) / mpq_class(factorial(k)) /
                                                          mpq_class(int_pow(pstar, k)));
    for (long m = 0; m < k; ++m) {
        mpz_class s = stirling_first(k, m);
        if (s == 0) continue;
        total = total + scale_by(forward_diff<T>(seq, n, c, m),
                                 mpq_class(s) / mpq_class(factorial(k)) / mpq_class(int_pow(pstar, m)));
    }
    return total;
}

enum class Verdict { Pass, Fail, Inconclusive };
std::string to_string(Verdict v);

struct CongruenceReport {
    std::string theorem;
    long p = 0;
    std::string q;
    long r = 0;
    std::string chi;
    std::vector<long> n;
    long c = 0;
    std::vector<long> k;
    std::string z;
    long required_valuation = 0;
    long observed_valuation = 0;
    std::optional<long> difference_valuation;  // before the p-power scaling, exact forms only
    long certified_precision = 0;  // kExactPrecision for exact rational checks
    Verdict verdict = Verdict::Inconclusive;
    std::optional<PadicNumber> witness;
    std::optional<mpq_class> exact_witness;
    std::vector<std::string> audit;
    std::string note;

    bool pass() const { return verdict == Verdict::Pass; }
    nlohmann::ordered_json to_json() const;
};

// Verdict from an observed difference: pass only when certified >= required + 3 digits.
CongruenceReport judge(CongruenceReport base, const PadicNumber& witness, long required);

// B_n^r(z, q, chi): the interpolated special-value polynomial.
PadicNumber Bnr_structure(const QContext& ctx, long n, long r, const DirichletCharacter& chi,
                          const ExponentForm& z);

// Minimal valuation of z in p (p*)^-1 r F0 R*.
long congruence_z_valuation(long p, long r, const DirichletCharacter& chi);
// Sample points z1 = p (p*)^-1 r F0 p and z2 = 2 z1 / 3.
std::vector<mpq_class> congruence_z_samples(long p, long r, const DirichletCharacter& chi);

struct VerifyOptions {
    bool enforce_domain = true;  // false probes z outside the theorem's domain
    int attempts = 3;            // precision retries before a report is inconclusive
};

std::vector<CongruenceReport> verify_thm53(const QContext& ctx, const DirichletCharacter& chi, long r,
                                           const std::vector<long>& n_list, long c, long k,
                                           const ExponentForm& z, const VerifyOptions& opt = {});
CongruenceReport verify_thm54(const QContext& ctx, const DirichletCharacter& chi, long r, long n, long c,
                              long k, long k_prime, const ExponentForm& z, const VerifyOptions& opt = {});
std::vector<CongruenceReport> verify_binom_op_thm(const QContext& ctx, const DirichletCharacter& chi,
                                                  long r, const std::vector<long>& n_list, long c,
                                                  long k, const ExponentForm& z,
                                                  const VerifyOptions& opt = {});
// Throws InconclusivePrecision if any report is undecided.
void require_decided(const std::vector<CongruenceReport>& reports);

enum class KummerForm { Classical, Carlitz, Shiratani };
KummerForm parse_kummer_form(const std::string& text);

// Classical: p^-k Delta_c^k B_n/n.  Carlitz: p^-k Delta_c^k B_{n,chi}/n.
// Shiratani: (p*)^-k Delta_c^k -(1 - chi_n(p) p^(n-1)) B_{n,chi_n}/n with chi_n = chi omega^-n.
CongruenceReport verify_classical_kummer(long p, long n, long c, long k,
                                         KummerForm form = KummerForm::Classical,
                                         const std::optional<DirichletCharacter>& chi = std::nullopt);

}  // namespace qpl
