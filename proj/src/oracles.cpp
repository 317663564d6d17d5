#include "qpl/oracles.hpp"

#include <cmath>
#include <sstream>

namespace qpl {

namespace {

auto dmake = [](const mpz_class& k) { return k.get_d(); };

double qbr(double q, double x) { return (1.0 - std::pow(q, x)) / (1.0 - q); }

// Union bound on the part of an r-fold geometric sum with some index > M.
double tail_bound(double q, long r, long M, double bound_per_term) {
    return r * std::pow(q, M + 1) / std::pow(1.0 - q, r) * bound_per_term;
}

long pick_M(double q, long r, double per_term, double tol) {
    long M = 8;
    while (tail_bound(q, r, M, per_term) > tol) {
        M *= 2;
        if (M > (1L << 20)) throw TailTooLarge("no truncation bound meets the tolerance");
    }
    return M;
}

}  // namespace

OracleValue oracle_multi_beta(double q, long n, long r, double z, long M, double tolerance) {
    if (n < r) throw PreconditionViolated("direct sum needs n >= r");
    if (!(q > 0 && q < 1) || z < 0) throw DomainError("oracle needs 0 < q < 1 and z >= 0");
    double coeff = mpz_class(factorial(n) / factorial(n - r)).get_d() * (r % 2 ? -1.0 : 1.0);
    double per_term = std::abs(coeff) * std::pow(q, z) * std::pow(1.0 / (1.0 - q), n - r);
    double tb = 0;
    if (M == 0) M = pick_M(q, r, per_term, tolerance);
    tb = tail_bound(q, r, M, per_term);
    if (tb > tolerance) throw TailTooLarge("tail bound " + std::to_string(tb) + " above tolerance");
    auto counts = tuple_sum_counts(M + 1, r);
    double sum = 0;
    for (size_t S = 0; S < counts.size(); ++S) {
        double x = z + static_cast<double>(S);
        sum += counts[S].get_d() * std::pow(q, x) * std::pow(qbr(q, x), n - r);
    }
    return {cplx(coeff * sum, 0.0), M, tb};
}

OracleValue oracle_q_zeta(double q, cplx s, long r, double z, long M, double tolerance) {
    if (s.real() <= r) throw PreconditionViolated("oracle zeta needs Re(s) > r");
    if (!(q > 0 && q < 1) || z <= 0) throw DomainError("oracle needs 0 < q < 1 and z > 0");
    double per_term = std::pow(q, z) * std::pow(qbr(q, z), -s.real());
    if (M == 0) M = pick_M(q, r, per_term, tolerance);
    double tb = tail_bound(q, r, M, per_term);
    if (tb > tolerance) throw TailTooLarge("tail bound " + std::to_string(tb) + " above tolerance");
    auto counts = tuple_sum_counts(M + 1, r);
    cplx sum = 0;
    for (size_t S = 0; S < counts.size(); ++S) {
        double x = z + static_cast<double>(S);
        sum += counts[S].get_d() * std::pow(q, x) * std::exp(-s * std::log(qbr(q, x)));
    }
    return {sum, M, tb};
}

OracleValue oracle_q_l(const OracleConfig& cfg, cplx s, long r, double z) {
    double q = cfg.q;
    if (!(q > 0 && q < 1) || z < 0) throw DomainError("oracle needs 0 < q < 1 and z >= 0");
    long f = cfg.chi.empty() ? 1 : static_cast<long>(cfg.chi.size());
    // |[x]^(-s)| <= max([z+r]^(-Re s), (1-q)^(Re s)) for x >= z + r
    double lo = qbr(q, z + r);
    double per_term = std::pow(q, z) * std::max(std::pow(lo, -s.real()), std::pow(1.0 - q, s.real()));
    long M = cfg.M ? cfg.M : pick_M(q, r, per_term, cfg.tolerance);
    double tb = tail_bound(q, r, M, per_term);
    if (tb > cfg.tolerance) throw TailTooLarge("tail bound above tolerance");
    // tuples of positive integers m_i <= M + 1
    auto counts = tuple_sum_counts(M + 1, r);
    cplx sum = 0;
    for (size_t i = 0; i < counts.size(); ++i) {
        long S = r + static_cast<long>(i);
        cplx c = cfg.chi.empty() ? cplx(1, 0) : cfg.chi[S % f];
        if (c == cplx(0, 0)) continue;
        double x = z + static_cast<double>(S);
        sum += c * counts[i].get_d() * std::pow(q, x) * std::exp(-s * std::log(qbr(q, x)));
    }
    return {sum, M, tb};
}

double closed_multi_beta(double q, long n, long r, double z) {
    return closed_form::pure_multiple(n, r, q, std::pow(q, z), dmake);
}

double closed_carlitz_beta(double q, long n, double z) {
    return closed_form::carlitz_single(n, q, std::pow(q, z), (q - 1.0) / std::log(q), dmake);
}

std::vector<double> carlitz_recurrence_real(double q, long n_max) {
    std::vector<double> b{(q - 1.0) / std::log(q)};
    for (long m = 1; m <= n_max; ++m) {
        double rhs = m == 1 ? 1.0 : 0.0;
        for (long k = 0; k < m; ++k) rhs -= binomial(m, k).get_d() * std::pow(q, k) * b[k];
        b.push_back(rhs / (std::pow(q, m) - 1.0));
    }
    return b;
}

cplx closed_q_l_special(double q, long n, long r, const std::vector<cplx>& chi, double z) {
    long f = chi.empty() ? 1 : static_cast<long>(chi.size());
    double Q = std::pow(q, f);
    auto counts = tuple_sum_counts(f, r);
    cplx sum = 0;
    for (size_t i = 0; i < counts.size(); ++i) {
        long S = r + static_cast<long>(i);
        cplx c = chi.empty() ? cplx(1, 0) : chi[S % f];
        double x = (z + S) / f;
        sum += c * counts[i].get_d() * closed_form::pure_multiple(n + r, r, Q, std::pow(Q, x), dmake);
    }
    double pref = mpq_class(factorial(n), factorial(n + r)).get_d() * (r % 2 ? -1.0 : 1.0);
    return pref * std::pow(qbr(q, f), n) * sum;
}

std::vector<cplx> complex_character_table(const DirichletCharacter& chi) {
    DirichletCharacter prim = chi.primitive();
    std::vector<cplx> table(prim.modulus());
    for (long a = 0; a < prim.modulus(); ++a) {
        auto e = prim.exponent(a);
        table[a] = e ? std::polar(1.0, 2.0 * M_PI * static_cast<double>(*e) / prim.phi()) : cplx(0, 0);
    }
    return table;
}

namespace {

// Multiple polynomial of the given convention at real q (LHS of the nested-sum identity).
double convention_multiple(double q, long N, long r, double x, const std::string& single) {
    if (single == "carlitz") {
        if (r == 1) return closed_carlitz_beta(q, N, x);
        if (N == 0) return std::pow((q - 1.0) / std::log(q), r);
    }
    return closed_multi_beta(q, N, r, x);
}

}  // namespace

std::vector<ConventionResidual> oracle_convention_residuals(const std::vector<double>& qs,
                                                           long r_max, long n_max) {
    const double zs[] = {0.3, 0.7, 1.1};
    std::vector<ConventionResidual> rows;
    for (const char* norm : {"n+r", "n"}) {
        for (const char* single : {"pure_sum", "carlitz"}) {
            for (double q : qs) {
                ConventionResidual row{norm, single, q, 0, 0, 0.0};
                for (long r = 1; r <= r_max; ++r) {
                    for (long n = 0; n <= n_max; ++n) {
                        long N = n + r;
                        std::vector<std::vector<double>> singles;
                        double zsum = 0;
                        for (long j = 0; j < r; ++j) {
                            zsum += zs[j];
                            std::vector<double> col;
                            for (long m = 0; m <= N; ++m)
                                col.push_back(std::string(single) == "carlitz"
                                                  ? closed_carlitz_beta(q, m, zs[j])
                                                  : closed_multi_beta(q, m, 1, zs[j]));
                            singles.push_back(col);
                        }
                        double rhs = closed_form::nested_product_sum(N, r, singles, q - 1.0, dmake);
                        long lhs_order = std::string(norm) == "n+r" ? N : n;
                        double lhs = convention_multiple(q, lhs_order, r, zsum, single);
                        double res = std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
                        if (res > row.residual) {
                            row.residual = res;
                            row.worst_r = r;
                            row.worst_n = n;
                        }
                    }
                }
                rows.push_back(row);
            }
        }
    }
    return rows;
}

std::string format_residual_table(const std::vector<ConventionResidual>& rows) {
    std::ostringstream os;
    for (const auto& row : rows) {
        os << "normalization=" << row.normalization << " single_beta=" << row.single_beta
           << " q=" << row.q << " max_residual=" << row.residual << " at r=" << row.worst_r
           << " n=" << row.worst_n << "\n";
    }
    return os.str();
}

ConventionCertificate oracle_resolve_conventions(const std::vector<double>& qs, long r_max, long n_max) {
    auto rows = oracle_convention_residuals(qs, r_max, n_max);
    std::vector<ConventionCertificate> passing;
    for (const char* norm : {"n+r", "n"}) {
        for (const char* single : {"pure_sum", "carlitz"}) {
            ConventionCertificate cert{norm, single, {}};
            bool ok = true;
            for (const auto& row : rows) {
                if (row.normalization != norm || row.single_beta != single) continue;
                cert.residuals.push_back(row.residual);
                if (!(row.residual < 1e-8)) ok = false;
            }
            if (ok) passing.push_back(cert);
        }
    }
    if (passing.size() != 1)
        throw NoConsistentNormalization(
            std::to_string(passing.size()) + " candidate conventions pass (need exactly 1)\n" +
            format_residual_table(rows));
    return passing.front();
}

}  // namespace qpl
