#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "qpl/q_bernoulli.hpp"

namespace qpl {

using cplx = std::complex<double>;

struct OracleConfig {
    double q = 0.3;
    long M = 0;             // per-index truncation bound; 0 picks one from the tail bound
    double tolerance = 1e-13;
    std::vector<cplx> chi;  // character table mod f (index a mod f); empty for none
};

struct OracleValue {
    cplx value;
    long M = 0;
    double tail_bound = 0;
};

// Direct coefficient extraction from the multiple generating function (n >= r, z >= 0).
OracleValue oracle_multi_beta(double q, long n, long r, double z, long M = 0,
                              double tolerance = 1e-13);
// Truncated multiple q-zeta sum over m_i >= 0, Re(s) > r, z > 0.
OracleValue oracle_q_zeta(double q, cplx s, long r, double z, long M = 0,
                          double tolerance = 1e-13);
// Character-twisted sum over m_i >= 1 (any s: the q^m weight makes it converge for 0<q<1).
OracleValue oracle_q_l(const OracleConfig& cfg, cplx s, long r, double z);

// Closed forms evaluated in double precision through the shared templates.
double closed_multi_beta(double q, long n, long r, double z);
double closed_carlitz_beta(double q, long n, double z);
std::vector<double> carlitz_recurrence_real(double q, long n_max);
// (-1)^r/(n+1)_r [f]^n sum_a chi(sum a) beta^(r)_{n+r,q^f}((z+sum a)/f)
cplx closed_q_l_special(double q, long n, long r, const std::vector<cplx>& chi, double z);

// Complex table of a Dirichlet character: chi(a) = exp(2 pi i E(a)/phi).
std::vector<cplx> complex_character_table(const DirichletCharacter& chi);

struct ConventionResidual {
    std::string normalization;
    std::string single_beta;
    double q;
    long worst_r;
    long worst_n;
    double residual;
};

std::vector<ConventionResidual> oracle_convention_residuals(const std::vector<double>& qs = {0.2, 0.3},
                                                           long r_max = 3, long n_max = 4);
// Unique candidate below 1e-8 at every q, or NoConsistentNormalization.
ConventionCertificate oracle_resolve_conventions(const std::vector<double>& qs = {0.2, 0.3},
                                          long r_max = 3, long n_max = 4);
std::string format_residual_table(const std::vector<ConventionResidual>& rows);

}  // namespace qpl
