#pragma once

#include <string>
#include <vector>

#include "qpl/characters.hpp"
#include "qpl/q_bernoulli.hpp"

namespace qpl {

struct SeriesValue {
    PadicNumber value;
    long terms_used = 0;
    long tail_valuation_bound = 0;
    bool converged = false;
};

enum class FPurpose { Interpolation, Difference };

long choose_F(long f, long p, long r, FPurpose purpose);

struct SeriesOptions {
    long F = 0;          // 0: choose_F(f, p, r, interpolation)
    long target = 0;     // 0: context precision
    long max_terms = 0;  // 0: derived from target
    double budget = 1e7;
};

PadicNumber q_zeta_special(const QContext& ctx, long n, long r, const ExponentForm& x);
PadicNumber partial_q_zeta_special(const QContext& ctx, long n, long r,
                                   const std::vector<long>& a, long F, const ExponentForm& z);
PadicNumber Lq_special(const QContext& ctx, long n, long r, const DirichletCharacter& chi,
                       const ExponentForm& z);
// Same value through the partial zeta decomposition with period F.
PadicNumber Lq_via_partial(const QContext& ctx, long n, long r, const DirichletCharacter& chi,
                           const ExponentForm& z, long F);

PadicNumber Lpq_special(const QContext& ctx, long n, long r, const DirichletCharacter& chi,
                        const ExponentForm& z);

// s is an exact rational (p-adic integer) or a p-adic value in D.
SeriesValue Lpq_eval(const QContext& ctx, const ExponentForm& s, long r,
                     const DirichletCharacter& chi, const ExponentForm& z,
                     const SeriesOptions& opt = {});
SeriesValue Lpq_at_r(const QContext& ctx, long r, const DirichletCharacter& chi,
                     const ExponentForm& z, const SeriesOptions& opt = {});

PadicNumber Lpq_difference_rhs(const QContext& ctx, const ExponentForm& s, long r,
                               const DirichletCharacter& chi, const ExponentForm& z, long F);
// sum_j C(r,j) (-1)^(r-j) L(s, z + jF)
PadicNumber Lpq_rth_difference(const QContext& ctx, const ExponentForm& s, long r,
                               const DirichletCharacter& chi, const ExponentForm& z, long F);

}  // namespace qpl
