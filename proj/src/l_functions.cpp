#include "qpl/l_functions.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace qpl {

long choose_F(long f, long p, long r, FPurpose purpose) {
    long F0 = lcm_long(f, p_star(p));
    if (purpose == FPurpose::Interpolation) return F0;
    // p (p*)^-1 r F0
    return p * r * F0 / p_star(p);
}

namespace {

PadicNumber sign_over_pochhammer(const QContext& ctx, long n, long r) {
    mpq_class c(factorial(n), factorial(n + r));
    if (r % 2) c = -c;
    return ctx.rational(c);
}

mpq_class general_binomial(const mpq_class& m, long k) {
    mpq_class num = 1;
    for (long i = 0; i < k; ++i) num *= m - i;
    return num / mpq_class(factorial(k));
}

struct OuterTerm {
    PadicNumber weight;  // multiplicity * chi(S) * q^((1-r)A) [* <A>^(r-s)]
    PadicNumber ratio;   // q^A [F]_q / [A]_q
    PadicNumber angle;   // <A>_q
};

// Terms of the outer sum over S = a_1 + .. + a_r in [r, rF] with p not dividing S.
std::vector<OuterTerm> outer_terms(const QContext& ctx, long r, const DirichletCharacter& chi,
                                   const ExponentForm& z, long F, double budget) {
    if (std::pow(static_cast<double>(F), static_cast<double>(r)) > budget)
        throw BudgetExceeded("F^r exceeds the configured term budget");
    long p = ctx.p();
    auto counts = tuple_sum_counts(F, r);
    PadicNumber bracketF = ctx.q_bracket(1, ExponentForm(F));
    ExponentForm pz = z.scaled(mpq_class(ctx.pstar()));
    std::vector<OuterTerm> out;
    for (size_t i = 0; i < counts.size(); ++i) {
        long S = r + static_cast<long>(i);
        if (S % p == 0) continue;
        auto e = chi.exponent(S);
        if (!e) continue;
        ExponentForm A = pz + ExponentForm(S);
        PadicNumber qA = ctx.q_power(1, A);
        PadicNumber w = ctx.root_of_unity_power(*e) * ctx.integer(counts[i]);
        if (r != 1) w *= ctx.q_power(1, A.scaled(mpq_class(1 - r)));
        out.push_back({w, qA * bracketF / ctx.q_bracket(1, A), ctx.angle(A)});
    }
    return out;
}

long vmin(const PadicNumber& t) { return t.is_zero() ? t.prec() : t.val(); }


// Lower bound for v(sum_i w_i ratio_i^k): grows by min v(ratio) per step.
struct InnerBound {
    long base = kInfiniteValuation;
    long step = kInfiniteValuation;

    InnerBound(const std::vector<PadicNumber>& weights, const std::vector<PadicNumber>& ratios) {
        for (const auto& w : weights) base = std::min(base, vmin(w));
        for (const auto& r : ratios) step = std::min(step, vmin(r));
    }
    long at(long k) const { return base + k * std::max(step, 0L); }
};

struct SeriesMonitor {
    long target;
    long min_k;
    long max_terms;
    std::deque<long> window;
    long decreasing_run = 0;
    long last = kInfiniteValuation;

    // true when the series may stop after this term
    bool push(long k, long bound) {
        window.push_back(bound);
        if (window.size() > 5) window.pop_front();
        decreasing_run = (last != kInfiniteValuation && bound < last && bound < target)
                             ? decreasing_run + 1
                             : 0;
        last = bound;
        if (k >= min_k && window.size() == 5) {
            bool ok = true;
            for (size_t i = 0; i < window.size(); ++i) {
                if (window[i] < target) ok = false;
                if (i > 0 && window[i] < window[i - 1]) ok = false;
            }
            if (ok) return true;
        }
        if (decreasing_run >= 12 || k >= max_terms)
            throw DivergenceDetected("k-series term valuations fail to increase (last bound " +
                                     std::to_string(bound) + " at k=" + std::to_string(k) + ")");
        return false;
    }
    long tail() const { return *std::min_element(window.begin(), window.end()); }
};

long factorial_valuation(long k, long p) {
    long v = 0;
    for (long pk = p; pk <= k; pk *= p) v += k / pk;
    return v;
}

}  // namespace

PadicNumber q_zeta_special(const QContext& ctx, long n, long r, const ExponentForm& x) {
    const QContext& W = ctx.lifted(working_extra(ctx, n + r, 1));
    return settle(sign_over_pochhammer(W, n, r) * multi_q_beta_poly(W, n + r, r, x), ctx);
}

PadicNumber partial_q_zeta_special(const QContext& ctx, long n, long r,
                                   const std::vector<long>& a, long F, const ExponentForm& z) {
    long S = 0;
    for (long v : a) {
        if (v < 1 || v > F) throw PreconditionViolated("residues must lie in [1, F]");
        S += v;
    }
    ExponentForm x = (z + ExponentForm(S)).scaled(mpq_class(1, F));
    const QContext& W = ctx.lifted(working_extra(ctx, n + r, F));
    return settle(W.q_bracket(1, ExponentForm(F)).pow(n) * sign_over_pochhammer(W, n, r) *
                      multi_q_beta_poly(W, n + r, r, x, F),
                  ctx);
}

PadicNumber Lq_special(const QContext& ctx, long n, long r, const DirichletCharacter& chi,
                       const ExponentForm& z) {
    const QContext& W = ctx.lifted(working_extra(ctx, n + r, chi.primitive().conductor()));
    return settle(sign_over_pochhammer(W, n, r) * multi_gen_q_beta_poly(W, n + r, r, chi, z), ctx);
}

PadicNumber Lq_via_partial(const QContext& ctx0, long n, long r, const DirichletCharacter& chi,
                           const ExponentForm& z, long F) {
    const QContext& ctx = ctx0.lifted(working_extra(ctx0, n + r, F));
    DirichletCharacter prim = chi.primitive();
    if (F % prim.conductor()) throw PreconditionViolated("period must be a multiple of the conductor");
    auto counts = tuple_sum_counts(F, r);
    PadicNumber sum = ctx.zero();
    for (size_t i = 0; i < counts.size(); ++i) {
        long S = r + static_cast<long>(i);
        auto e = prim.exponent(S);
        if (!e) continue;
        // one representative tuple with sum S
        std::vector<long> a(r, 1);
        long extra = S - r;
        for (long j = 0; j < r && extra > 0; ++j) {
            long add = std::min(extra, F - 1);
            a[j] += add;
            extra -= add;
        }
        sum += ctx.root_of_unity_power(*e) * partial_q_zeta_special(ctx, n, r, a, F, z).scaled(counts[i]);
    }
    return settle(sum, ctx0);
}

PadicNumber Lpq_special(const QContext& ctx_in, long n, long r, const DirichletCharacter& chi,
                        const ExponentForm& z) {
    long p = ctx_in.p();
    mpq_class c(factorial(n), factorial(n + r));
    const QContext& ctx = ctx_in.lifted(valuation(mpq_class(c.get_den()), p) + 2);
    DirichletCharacter psi = chi.twist(n + r);
    ExponentForm x1 = z.scaled(mpq_class(ctx.pstar()));
    ExponentForm x2 = z.scaled(mpq_class(ctx.pstar(), p));
    PadicNumber value = multi_gen_q_beta_poly(ctx, n + r, r, psi, x1);
    if (auto e = psi.exponent(p)) {
        MultiSumOptions opt;
        opt.base = p;
        value -= times_factor(ctx, multi_gen_q_beta_poly(ctx, n + r, r, psi, x2, opt), [&](const QContext& w) {
            return w.root_of_unity_power(*e) * w.q_bracket(1, ExponentForm(p)).pow(n);
        });
    }
    return settle(value.scaled(r % 2 ? mpq_class(-c) : c), ctx_in);
}

namespace {

SeriesValue eval_lifted(const QContext& ctx_in, const ExponentForm& s, long r,
                        const DirichletCharacter& chi_in, const ExponentForm& z,
                        const SeriesOptions& opt, long bonus) {
    DirichletCharacter chi = chi_in.primitive();
    const QContext& ctx0 = ctx_in;
    long p = ctx0.p();
    long F = opt.F ? opt.F : choose_F(chi.conductor(), p, r, FPurpose::Interpolation);
    if (F % lcm_long(chi.conductor(), ctx0.pstar()))
        throw PreconditionViolated("F must be a multiple of lcm(f, p*)");
    if (!in_R(z.value(p, ctx0.precision()))) throw DomainError("z must lie in Z_p");
    if (!in_D(s.value(p, ctx0.precision()))) throw DomainError("s outside the domain D");
    long target = opt.target ? opt.target : ctx0.precision();

    bool integer_s = s.is_integer();
    bool finite = integer_s && s.exact().get_num() <= r;
    long kmax_finite = finite ? r - s.exact().get_num().get_si() : -1;
    const QContext& ctx = ctx0.lifted(
        bonus + std::max(target - ctx0.precision(), 0L) +
        working_extra(ctx0, finite ? kmax_finite : r + 5, F));
    PadicNumber s_val = s.value(p, ctx.precision());
    if (integer_s) {
        const mpz_class& si = s.exact().get_num();
        if (si >= 1 && si <= r) {
            if (chi.is_principal()) throw PoleError("pole of the p-adic L-function at s = " + si.get_str());
            throw DomainError("removable singularity at s = " + si.get_str() + "; use the limit form");
        }
    }

    // prefactor 1/([F]^r prod_{j=1}^r (s-j))
    PadicNumber denom = ctx.q_bracket(1, ExponentForm(F)).pow(r);
    for (long j = 1; j <= r; ++j) {
        if (s.is_exact())
            denom *= ctx.rational(s.exact() - j);
        else
            denom *= s_val - ctx.integer(j);
    }

    auto terms = outer_terms(ctx, r, chi, z, F, opt.budget);
    for (auto& t : terms) {
        if (integer_s && s.exact().get_num() <= r) {
            t.weight *= t.angle.pow(r - s.exact().get_num().get_si());
        } else {
            PadicNumber e = ctx.integer(r) - s_val;
            t.weight *= padic_power(t.angle, e);
        }
    }

    SeriesValue out;
    PadicNumber sum = ctx.zero();
    std::vector<PadicNumber> powers, ratios;
    for (const auto& t : terms) {
        powers.push_back(t.weight);
        ratios.push_back(t.ratio);
    }
    InnerBound inner_bound(powers, ratios);

    long shift = std::max(0L, denom.val());
    SeriesMonitor monitor{target + shift, r + 5, opt.max_terms ? opt.max_terms : 4 * target + 60, {}};
    PadicNumber m_val = ctx.integer(r) - s_val;
    long vm = vmin(m_val);
    long beta_floor = kInfiniteValuation;
    for (long k = 0;; ++k) {
        PadicNumber coef = s.is_exact() ? ctx.rational(general_binomial(mpq_class(r) - s.exact(), k))
                                        : binom_padic(m_val, k);
        PadicNumber inner = ctx.zero();
        for (size_t i = 0; i < terms.size(); ++i) {
            inner += powers[i];
            powers[i] *= terms[i].ratio;
        }
        PadicNumber beta = multi_q_beta_number(ctx, k, r, F);
        PadicNumber term = ctx.zero();
        if (!coef.is_zero()) term = coef * beta * inner;
        sum += term;
        out.terms_used = k + 1;
        beta_floor = std::min(beta_floor, vmin(beta));
        if (finite) {
            if (k == kmax_finite) {
                out.tail_valuation_bound = kExactPrecision;
                break;
            }
            continue;
        }
        long coef_bound = vm >= 0 ? 0 : k * vm - factorial_valuation(k, p);
        if (monitor.push(k, coef_bound + beta_floor + inner_bound.at(k))) {
            out.tail_valuation_bound = monitor.tail();
            break;
        }
    }
    out.converged = true;
    if (terms.empty()) {
        out.value = ctx0.zero();
        return out;
    }
    if (!finite) sum = sum.with_precision(std::min(sum.prec(), out.tail_valuation_bound));
    out.value = settle(sum / denom, ctx0);
    if (!finite) out.tail_valuation_bound -= denom.val();
    return out;
}

SeriesValue at_r_lifted(const QContext& ctx0, long r, const DirichletCharacter& chi_in,
                        const ExponentForm& z, const SeriesOptions& opt, long bonus) {
    DirichletCharacter chi = chi_in.primitive();
    if (chi.is_principal()) throw PoleError("s = r is a pole for the principal character");
    long p = ctx0.p();
    long F = opt.F ? opt.F : choose_F(chi.conductor(), p, r, FPurpose::Interpolation);
    if (F % lcm_long(chi.conductor(), ctx0.pstar()))
        throw PreconditionViolated("F must be a multiple of lcm(f, p*)");
    long target = opt.target ? opt.target : ctx0.precision();
    const QContext& ctx =
        ctx0.lifted(bonus + std::max(target - ctx0.precision(), 0L) + working_extra(ctx0, r + 5, F));
    auto terms = outer_terms(ctx, r, chi, z, F, opt.budget);

    PadicNumber beta0 = multi_q_beta_number(ctx, 0, r, F);
    PadicNumber sum = ctx.zero();
    if (!beta0.is_zero()) {
        PadicNumber residue = ctx.zero();
        for (const auto& t : terms) {
            residue += t.weight;
            sum -= t.weight * beta0 * iwasawa_log(t.angle);
        }
        residue *= beta0;
        if (!residue.is_zero() && residue.val() < target)
            throw PoleError("constant term does not cancel at s = r under this convention");
    }

    SeriesValue out;
    std::vector<PadicNumber> powers, ratios;
    for (const auto& t : terms) {
        powers.push_back(t.weight * t.ratio);
        ratios.push_back(t.ratio);
    }
    InnerBound inner_bound(powers, ratios);
    PadicNumber denom = ctx.q_bracket(1, ExponentForm(F)).pow(r) * ctx.integer(factorial(r - 1));
    long shift = std::max(0L, denom.val());
    SeriesMonitor monitor{target + shift, r + 5, opt.max_terms ? opt.max_terms : 4 * target + 60, {}};
    long beta_floor = kInfiniteValuation;
    for (long k = 1;; ++k) {
        PadicNumber inner = ctx.zero();
        for (size_t i = 0; i < terms.size(); ++i) {
            inner += powers[i];
            powers[i] *= terms[i].ratio;
        }
        PadicNumber beta = multi_q_beta_number(ctx, k, r, F);
        PadicNumber term = ctx.zero();
        if (!beta.is_zero()) term = ctx.rational(mpq_class(k % 2 ? -1 : 1, k)) * beta * inner;
        sum += term;
        out.terms_used = k + 1;
        beta_floor = std::min(beta_floor, vmin(beta));
        long log_k = 0;
        for (long pk = p; pk <= k; pk *= p) ++log_k;
        if (monitor.push(k, beta_floor - log_k + inner_bound.at(k - 1))) break;
    }
    out.tail_valuation_bound = monitor.tail();
    out.converged = true;
    out.value = settle(sum.with_precision(std::min(sum.prec(), out.tail_valuation_bound)) / denom, ctx0);
    out.tail_valuation_bound -= denom.val();
    return out;
}

// Retry with more working digits until the value is known to the context precision.
template <class Eval>
SeriesValue with_retries(const QContext& ctx, Eval eval) {
    long bonus = 0;
    SeriesValue v = eval(bonus);
    for (int attempt = 0; attempt < 3 && v.value.prec() < ctx.precision(); ++attempt) {
        bonus = 2 * bonus + 2 * (ctx.precision() - v.value.prec()) + 8;
        v = eval(bonus);
    }
    return v;
}

}  // namespace

SeriesValue Lpq_eval(const QContext& ctx, const ExponentForm& s, long r, const DirichletCharacter& chi,
                     const ExponentForm& z, const SeriesOptions& opt) {
    return with_retries(ctx, [&](long bonus) { return eval_lifted(ctx, s, r, chi, z, opt, bonus); });
}

SeriesValue Lpq_at_r(const QContext& ctx, long r, const DirichletCharacter& chi, const ExponentForm& z,
                     const SeriesOptions& opt) {
    return with_retries(ctx, [&](long bonus) { return at_r_lifted(ctx, r, chi, z, opt, bonus); });
}

PadicNumber Lpq_difference_rhs(const QContext& ctx, const ExponentForm& s, long r,
                               const DirichletCharacter& chi, const ExponentForm& z, long F) {
    long p = ctx.p();
    DirichletCharacter chir = chi.primitive().twist(r);
    long ps = ctx.pstar();
    long f0 = lcm_long(chi.primitive().conductor(), ps);
    if ((F * ps) % (p * r * f0)) throw PreconditionViolated("F must be a multiple of p (p*)^-1 r F0");
    long M = ps * F;
    if (std::pow(static_cast<double>(M), static_cast<double>(r)) > 1e7)
        throw BudgetExceeded("(p* F)^r exceeds the configured term budget");
    auto counts = tuple_sum_counts(M, r);
    ExponentForm pz = z.scaled(mpq_class(ps));
    PadicNumber sum = ctx.zero();
    PadicNumber s_val = s.value(p, ctx.precision());
    for (size_t i = 0; i < counts.size(); ++i) {
        long S = r + static_cast<long>(i);
        if (S % p == 0) continue;
        auto e = chir.exponent(S);
        if (!e) continue;
        ExponentForm A = pz + ExponentForm(S);
        PadicNumber angle = ctx.angle(A);
        PadicNumber power = s.is_integer() ? angle.pow(-s.exact().get_num().get_si())
                                           : padic_power(angle, -s_val);
        sum += ctx.root_of_unity_power(*e) * ctx.integer(counts[i]) * ctx.q_power(1, A) * power;
    }
    return -sum;
}

PadicNumber Lpq_rth_difference(const QContext& ctx, const ExponentForm& s, long r,
                               const DirichletCharacter& chi, const ExponentForm& z, long F) {
    SeriesOptions opt;
    opt.F = F;
    PadicNumber total = ctx.zero();
    for (long j = 0; j <= r; ++j) {
        PadicNumber v = Lpq_eval(ctx, s, r, chi, z + ExponentForm(mpq_class(j * F)), opt).value;
        total += v.scaled(mpq_class((r - j) % 2 ? -binomial(r, j) : binomial(r, j)));
    }
    return total;
}

}  // namespace qpl
