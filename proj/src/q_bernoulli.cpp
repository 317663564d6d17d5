#include "qpl/q_bernoulli.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

namespace qpl {

ConventionCertificate load_certificate(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw NormalizationUnresolved("no convention certificate at " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw NormalizationUnresolved(std::string("unreadable certificate: ") + e.what());
    }
    ConventionCertificate c;
    c.normalization = j.at("normalization").get<std::string>();
    c.single_beta = j.at("single_beta").get<std::string>();
    c.residuals = j.value("residuals", std::vector<double>{});
    if ((c.normalization != "n+r" && c.normalization != "n") ||
        (c.single_beta != "pure_sum" && c.single_beta != "carlitz"))
        throw NormalizationUnresolved("certificate has unknown fields");
    return c;
}

void save_certificate(const ConventionCertificate& cert, const std::string& path) {
    nlohmann::json j{{"schema", "qpl/1"},
                     {"normalization", cert.normalization},
                     {"single_beta", cert.single_beta},
                     {"residuals", cert.residuals}};
    std::ofstream out(path);
    out << j.dump(2) << "\n";
}

long loss_budget(long n, long v_q_minus_one, long p) {
    long lg = 0;
    for (long x = 1; x < n; x *= p) ++lg;
    return n * (v_q_minus_one + lg + 2);
}

long working_extra(const QContext& ctx, long n, long base) {
    long v = ctx.q_minus_one_valuation() + valuation(mpz_class(base), ctx.p());
    return 2 * loss_budget(n + 1, v, ctx.p());
}

PadicNumber settle(const PadicNumber& v, const QContext& ctx) {
    return v.with_precision(std::min(v.prec(), ctx.precision()));
}

namespace {

auto maker(const QContext& ctx) {
    return [&ctx](const mpz_class& k) { return ctx.integer(k); };
}

long q_loss_valuation(const QContext& ctx, long base) {
    return ctx.q_minus_one_valuation() + valuation(mpz_class(base), ctx.p());
}

}  // namespace

PadicNumber carlitz_beta(const QContext& ctx, long n, long base) {
    QMemo& memo = ctx.memo();
    {
        std::lock_guard<std::mutex> lock(memo.mutex);
        auto& table = memo.carlitz[base];
        if (static_cast<long>(table.size()) > n) return table[n];
    }
    const QContext& W = ctx.lifted(loss_budget(n + 1, q_loss_valuation(ctx, base), ctx.p()));
    PadicNumber one = W.integer(1);
    PadicNumber Q = W.q_power(base, 1);
    std::vector<PadicNumber> raw{(Q - one) / W.log_q_power(base)};
    while (static_cast<long>(raw.size()) <= n) {
        long m = raw.size();
        PadicNumber rhs = m == 1 ? one : W.zero();
        PadicNumber Qk = one;
        for (long k = 0; k < m; ++k) {
            rhs -= raw[k] * Qk * W.integer(binomial(m, k));
            Qk *= Q;
        }
        raw.push_back(rhs / (Qk - one));
    }
    std::vector<PadicNumber> table;
    for (const auto& b : raw) {
        if (b.prec() < ctx.precision())
            throw PrecisionExhausted("Carlitz table lost more digits than the loss budget");
        table.push_back(b.with_precision(ctx.precision()));
    }
    std::lock_guard<std::mutex> lock(memo.mutex);
    auto& slot = memo.carlitz[base];
    if (slot.size() < table.size()) slot = table;
    return table[n];
}

PadicNumber carlitz_residual(const QContext& ctx, long n, long base) {
    PadicNumber Q = ctx.q_power(base, 1);
    PadicNumber sum = ctx.zero();
    PadicNumber Qk = ctx.integer(1);
    for (long k = 0; k <= n; ++k) {
        sum += ctx.integer(binomial(n, k)) * Qk * carlitz_beta(ctx, k, base);
        Qk *= Q;
    }
    sum -= carlitz_beta(ctx, n, base);
    if (n == 1) sum -= ctx.integer(1);
    return sum;
}

PadicNumber carlitz_beta_poly(const QContext& ctx, long n, const ExponentForm& x, long base) {
    PadicNumber Qx = ctx.q_power(base, x);
    PadicNumber bracket = ctx.q_bracket(base, x);
    PadicNumber sum = ctx.zero();
    PadicNumber Qxk = ctx.integer(1);
    for (long k = 0; k <= n; ++k) {
        sum += ctx.integer(binomial(n, k)) * Qxk * carlitz_beta(ctx, k, base) *
               bracket.pow(n - k);
        Qxk *= Qx;
    }
    return sum;
}

PadicNumber pure_multi_beta(const QContext& ctx, long n, long r, const ExponentForm& x,
                            long base) {
    if (n < r) return PadicNumber::zero(ctx.p(), ctx.precision());
    long v = q_loss_valuation(ctx, base);
    const QContext& W = ctx.lifted(2 * loss_budget(n + r, v, ctx.p()));
    PadicNumber b = closed_form::pure_multiple(n, r, W.q_power(base, 1), W.q_power(base, x), maker(W));
    return b.with_precision(std::min(b.prec(), ctx.precision()));
}

PadicNumber multi_q_beta_number(const QContext& ctx, long n, long r, long base) {
    if (ctx.convention() == Convention::Carlitz) {
        if (r == 1) return carlitz_beta(ctx, n, base);
        if (n == 0) {
            PadicNumber c = (ctx.q_power(base, 1) - ctx.integer(1)) / ctx.log_q_power(base);
            return c.pow(r);
        }
    }
    return pure_multi_beta(ctx, n, r, ExponentForm(0), base);
}

PadicNumber multi_q_beta_poly(const QContext& ctx, long n, long r, const ExponentForm& x,
                              long base) {
    if (ctx.convention() == Convention::Carlitz) {
        if (r == 1) return carlitz_beta_poly(ctx, n, x, base);
        if (n == 0) return multi_q_beta_number(ctx, 0, r, base);
    }
    return pure_multi_beta(ctx, n, r, x, base);
}

PadicNumber gen_q_beta_poly(const QContext& ctx0, long n, const DirichletCharacter& chi,
                            const ExponentForm& z, long F) {
    DirichletCharacter prim = chi.primitive();
    if (F == 0) F = prim.conductor();
    const QContext& ctx = ctx0.lifted(2);
    if (F % prim.conductor()) throw PreconditionViolated("period must be a multiple of the conductor");
    PadicNumber sum = ctx.zero();
    for (long a = 1; a <= F; ++a) {
        auto e = prim.exponent(a);
        if (!e) continue;
        ExponentForm x = (z + ExponentForm(a)).scaled(mpq_class(1, F));
        sum += times_factor(ctx, carlitz_beta_poly(ctx, n, x, F),
                            [&](const QContext& w) { return w.root_of_unity_power(*e); });
    }
    return times_factor(ctx0, sum,
                        [&](const QContext& w) { return w.q_bracket(1, ExponentForm(F)).pow(n - 1); });
}

PadicNumber multi_gen_q_beta_poly(const QContext& ctx0, long n, long r,
                                  const DirichletCharacter& chi, const ExponentForm& z,
                                  const MultiSumOptions& opt) {
    DirichletCharacter prim = chi.primitive();
    long F = opt.F == 0 ? prim.conductor() : opt.F;
    const QContext& ctx = ctx0.lifted(2);
    if (F % prim.conductor()) throw PreconditionViolated("period must be a multiple of the conductor");
    if (std::pow(static_cast<double>(F), static_cast<double>(r)) > opt.budget)
        throw BudgetExceeded("F^r exceeds the configured term budget");
    long D = opt.base * F;
    auto counts = tuple_sum_counts(F, r);
    PadicNumber sum = ctx.zero();
    for (size_t i = 0; i < counts.size(); ++i) {
        long S = r + static_cast<long>(i);
        auto e = prim.exponent(S);
        if (!e) continue;
        ExponentForm x = (z + ExponentForm(S)).scaled(mpq_class(1, F));
        sum += times_factor(ctx, multi_q_beta_poly(ctx, n, r, x, D).scaled(counts[i]),
                            [&](const QContext& w) { return w.root_of_unity_power(*e); });
    }
    return times_factor(ctx0, sum, [&](const QContext& w) {
        return w.q_bracket(opt.base, ExponentForm(F)).pow(n - r);
    });
}

namespace {

std::vector<PadicNumber> singles_for(const QContext& ctx, long N, const ExponentForm& z,
                                     long base, const ConventionCertificate& cert) {
    std::vector<PadicNumber> out;
    for (long m = 0; m <= N; ++m) {
        if (cert.single_beta == "carlitz")
            out.push_back(carlitz_beta_poly(ctx, m, z, base));
        else
            out.push_back(pure_multi_beta(ctx, m, 1, z, base));
    }
    return out;
}

}  // namespace

PadicNumber kim_sum_of_products(const QContext& ctx, long n, long r,
                                const std::vector<ExponentForm>& z,
                                const std::optional<ConventionCertificate>& cert) {
    if (!cert) throw NormalizationUnresolved("no convention certificate for the nested sum");
    if (r < 1 || static_cast<long>(z.size()) != r)
        throw PreconditionViolated("need r >= 1 and r arguments");
    long N = n + r;
    std::vector<std::vector<PadicNumber>> singles;
    for (const auto& zj : z) singles.push_back(singles_for(ctx, N, zj, 1, *cert));
    return closed_form::nested_product_sum(N, r, singles, ctx.q() - ctx.integer(1), maker(ctx));
}

PadicNumber character_nested_sum(const QContext& ctx, long n, long r, const DirichletCharacter& chi,
                              const std::vector<ExponentForm>& z,
                              const std::optional<ConventionCertificate>& cert) {
    if (!cert) throw NormalizationUnresolved("no convention certificate for the nested sum");
    if (r < 1 || static_cast<long>(z.size()) != r)
        throw PreconditionViolated("need r >= 1 and r arguments");
    DirichletCharacter prim = chi.primitive();
    long f = prim.conductor();
    long N = n + r;
    PadicNumber qm1 = ctx.q_power(f, 1) - ctx.integer(1);
    // singles[j][a-1][m] = beta_{m,q^f}((a + z_j)/f)
    std::vector<std::vector<std::vector<PadicNumber>>> table(r);
    for (long j = 0; j < r; ++j)
        for (long a = 1; a <= f; ++a)
            table[j].push_back(singles_for(ctx, N, (z[j] + ExponentForm(a)).scaled(mpq_class(1, f)),
                                           f, *cert));
    PadicNumber total = ctx.zero();
    std::vector<long> a(r, 1);
    while (true) {
        long S = 0;
        for (long v : a) S += v;
        if (auto e = prim.exponent(S)) {
            std::vector<std::vector<PadicNumber>> singles;
            for (long j = 0; j < r; ++j) singles.push_back(table[j][a[j] - 1]);
            total += ctx.root_of_unity_power(*e) *
                     closed_form::nested_product_sum(N, r, singles, qm1, maker(ctx));
        }
        long j = 0;
        while (j < r && a[j] == f) a[j++] = 1;
        if (j == r) break;
        ++a[j];
    }
    return ctx.q_bracket(1, ExponentForm(f)).pow(n) * total;
}

}  // namespace qpl
