#include "qpl/congruences.hpp"

#include <algorithm>
#include <functional>

namespace qpl {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        default: return "inconclusive";
    }
}

KummerForm parse_kummer_form(const std::string& text) {
    if (text == "classical") return KummerForm::Classical;
    if (text == "carlitz") return KummerForm::Carlitz;
    if (text == "shiratani") return KummerForm::Shiratani;
    throw ParseError("unknown Kummer form: " + text);
}

nlohmann::ordered_json CongruenceReport::to_json() const {
    nlohmann::ordered_json j;
    j["theorem"] = theorem;
    j["p"] = p;
    if (!q.empty()) j["q"] = q;
    if (r) j["r"] = r;
    j["chi"] = chi;
    j["n"] = n;
    j["c"] = c;
    j["k"] = k;
    if (!z.empty()) j["z"] = z;
    j["required_valuation"] = required_valuation;
    if (observed_valuation >= kExactPrecision)
        j["observed_valuation"] = "inf";
    else
        j["observed_valuation"] = observed_valuation;
    if (difference_valuation) j["difference_valuation"] = *difference_valuation;
    if (certified_precision >= kExactPrecision)
        j["certified_precision"] = "exact";
    else
        j["certified_precision"] = certified_precision;
    j["status"] = to_string(verdict);
    if (exact_witness) j["witness"] = exact_witness->get_str();
    else if (witness) j["witness"] = witness->to_string();
    if (!audit.empty()) j["audit"] = audit;
    if (!note.empty()) j["note"] = note;
    return j;
}

CongruenceReport judge(CongruenceReport base, const PadicNumber& witness, long required) {
    base.required_valuation = required;
    base.witness = witness;
    base.certified_precision = witness.prec();
    if (witness.is_zero()) {
        base.observed_valuation = witness.prec();
        base.verdict = witness.prec() >= required + 3 ? Verdict::Pass : Verdict::Inconclusive;
    } else {
        base.observed_valuation = witness.val();
        if (witness.val() < required)
            base.verdict = Verdict::Fail;
        else
            base.verdict = witness.prec() >= required + 3 ? Verdict::Pass : Verdict::Inconclusive;
    }
    return base;
}

PadicNumber Bnr_structure(const QContext& ctx, long n, long r, const DirichletCharacter& chi,
                          const ExponentForm& z) {
    if (n < 1 || r < 1) throw PreconditionViolated("B_n^r needs n >= 1 and r >= 1");
    std::string key = "bnr|" + std::to_string(n) + "|" + std::to_string(r) + "|" + chi.to_string() + "|" +
                      z.to_string() + "|" + std::to_string(ctx.precision()) + "|" +
                      to_string(ctx.convention());
    {
        std::lock_guard<std::mutex> lock(ctx.memo().mutex);
        auto it = ctx.memo().values.find(key);
        if (it != ctx.memo().values.end()) return it->second;
    }
    PadicNumber v = Lpq_special(ctx, n, r, chi, z);
    std::lock_guard<std::mutex> lock(ctx.memo().mutex);
    ctx.memo().values.emplace(key, v);
    return v;
}

long congruence_z_valuation(long p, long r, const DirichletCharacter& chi) {
    long F = choose_F(chi.conductor(), p, r, FPurpose::Difference);
    return valuation(mpz_class(F), p) + rstar_threshold(p);
}

std::vector<mpq_class> congruence_z_samples(long p, long r, const DirichletCharacter& chi) {
    long F = choose_F(chi.conductor(), p, r, FPurpose::Difference);
    mpq_class z1(F * p);
    return {z1, z1 * mpq_class(2, 3)};
}

namespace {

constexpr long kStep = 8;
const char* kCollapse = "R*[chi] = R* for Z_p-valued chi";

std::string q_label(const QContext& ctx) {
    if (ctx.q_rational()) return ctx.q_rational()->get_str();
    return ctx.q().to_string();
}

CongruenceReport header(const std::string& theorem, const QContext& ctx, long r,
                        const DirichletCharacter& chi, std::vector<long> n, long c, std::vector<long> k,
                        const ExponentForm& z) {
    CongruenceReport rep;
    rep.theorem = theorem;
    rep.p = ctx.p();
    rep.q = q_label(ctx);
    rep.r = r;
    rep.chi = chi.to_string();
    rep.n = std::move(n);
    rep.c = c;
    rep.k = std::move(k);
    rep.z = z.to_string();
    rep.note = kCollapse;
    return rep;
}

void check_z(const QContext& ctx, long r, const DirichletCharacter& chi, const ExponentForm& z,
             long min_val, const VerifyOptions& opt) {
    if (!opt.enforce_domain) return;
    PadicNumber zv = z.value(ctx.p(), ctx.precision() + min_val + 1);
    if (zv.is_zero()) return;
    if (zv.val() < min_val)
        throw DomainError("z must have valuation at least " + std::to_string(min_val) + " for r = " +
                          std::to_string(r) + " and conductor " + std::to_string(chi.conductor()));
}

// Extra digits so that a witness scaled down by `loss` digits still carries required + 3.
long head_start(const QContext& ctx, long required, long loss) {
    return std::max(0L, required + 3 + loss - ctx.precision());
}

// Evaluates the witness at increasing precision until the verdict is decided.
template <class Compute>
CongruenceReport certify(const CongruenceReport& base, const QContext& ctx, long required,
                         const VerifyOptions& opt, long head, Compute&& compute) {
    CongruenceReport rep = base;
    for (int attempt = 0; attempt < std::max(1, opt.attempts); ++attempt) {
        rep = judge(base, compute(ctx.lifted(head + attempt * kStep)), required);
        if (rep.verdict != Verdict::Inconclusive) return rep;
    }
    rep.note += "; precision insufficient after " + std::to_string(opt.attempts) + " attempts";
    return rep;
}

struct Differences {
    const DirichletCharacter& chi;
    long r;
    const ExponentForm& z;

    PadicNumber x(const QContext& ctx, long m) const {
        return Bnr_structure(ctx, m, r, chi, z) - Bnr_structure(ctx, m, r, chi, ExponentForm(0));
    }
    PadicNumber delta(const QContext& ctx, long n, long c, long k) const {
        return forward_diff<PadicNumber>([&](long m) { return x(ctx, m); }, n, c, k);
    }
    PadicNumber normalized(const QContext& ctx, long n, long c, long k) const {
        return delta(ctx, n, c, k).scaled(mpq_class(1) / mpq_class(int_pow(ctx.pstar(), k)));
    }
    PadicNumber binom(const QContext& ctx, long n, long c, long k) const {
        return binom_operator<PadicNumber>([&](long m) { return x(ctx, m); }, n, c, k, ctx.pstar());
    }
};

void check_grid(long r, long c, long k, const std::vector<long>& n_list) {
    if (r < 1 || c < 1 || k < 0) throw PreconditionViolated("r and c must be positive, k non-negative");
    if (n_list.empty()) throw PreconditionViolated("at least one n is required");
    for (long n : n_list)
        if (n < 1) throw PreconditionViolated("n must be positive");
}

std::vector<std::string> stirling_audit(long k, long pstar) {
    std::vector<std::string> out;
    for (long m = 0; m <= k; ++m) {
        mpq_class coeff = mpq_class(stirling_first(k, m)) / mpq_class(factorial(k)) /
                          mpq_class(int_pow(pstar, m));
        if (coeff != 0) out.push_back(coeff.get_str() + " * Delta_c^" + std::to_string(m));
    }
    return out;
}

}  // namespace

void require_decided(const std::vector<CongruenceReport>& reports) {
    for (const auto& rep : reports)
        if (rep.verdict == Verdict::Inconclusive)
            throw InconclusivePrecision("cannot certify " + rep.theorem + ": " + rep.to_json().dump());
}

std::vector<CongruenceReport> verify_thm53(const QContext& ctx, const DirichletCharacter& chi, long r,
                                           const std::vector<long>& n_list, long c, long k,
                                           const ExponentForm& z, const VerifyOptions& opt) {
    check_grid(r, c, k, n_list);
    check_z(ctx, r, chi, z, congruence_z_valuation(ctx.p(), r, chi), opt);
    long t = rstar_threshold(ctx.p());
    long vps = v_p_star(ctx.p());
    Differences d{chi, r, z};
    long head = head_start(ctx, vps + t, k * vps);
    std::vector<CongruenceReport> out;
    for (long n : n_list) {
        out.push_back(certify(header("difference-membership", ctx, r, chi, {n}, c, {k}, z), ctx,
                              k * vps + t, opt, head, [&](const QContext& w) { return d.delta(w, n, c, k); }));
    }
    for (size_t i = 0; i < n_list.size(); ++i) {
        for (size_t j = i + 1; j < n_list.size(); ++j) {
            long a = n_list[i], b = n_list[j];
            out.push_back(certify(header("difference-independence", ctx, r, chi, {a, b}, c, {k}, z), ctx,
                                  vps + t, opt, head, [&](const QContext& w) {
                                      return d.normalized(w, a, c, k) - d.normalized(w, b, c, k);
                                  }));
        }
    }
    return out;
}

CongruenceReport verify_thm54(const QContext& ctx, const DirichletCharacter& chi, long r, long n, long c,
                              long k, long k_prime, const ExponentForm& z, const VerifyOptions& opt) {
    check_grid(r, c, std::min(k, k_prime), {n});
    long p = ctx.p();
    long phi = p == 2 ? 1 : p - 1;
    if ((k - k_prime) % phi)
        throw PreconditionViolated("k and k' must agree modulo p - 1");
    check_z(ctx, r, chi, z, congruence_z_valuation(p, r, chi), opt);
    Differences d{chi, r, z};
    return certify(header("difference-period", ctx, r, chi, {n}, c, {k, k_prime}, z), ctx,
                   1 + rstar_threshold(p), opt,
                   head_start(ctx, 1 + rstar_threshold(p), std::max(k, k_prime) * v_p_star(p)), [&](const QContext& w) {
                       return d.normalized(w, n, c, k) - d.normalized(w, n, c, k_prime);
                   });
}

std::vector<CongruenceReport> verify_binom_op_thm(const QContext& ctx, const DirichletCharacter& chi,
                                                  long r, const std::vector<long>& n_list, long c,
                                                  long k, const ExponentForm& z,
                                                  const VerifyOptions& opt) {
    check_grid(r, c, k, n_list);
    check_z(ctx, r, chi, z, congruence_z_valuation(ctx.p(), 1, chi), opt);
    long t = rstar_threshold(ctx.p());
    long vps = v_p_star(ctx.p());
    Differences d{chi, r, z};
    long head = head_start(ctx, vps + t, k * vps + valuation(mpq_class(factorial(k)), ctx.p()));
    std::vector<CongruenceReport> out;
    for (long n : n_list) {
        out.push_back(certify(header("binomial-membership", ctx, r, chi, {n}, c, {k}, z), ctx, t, opt,
                              head,
                              [&](const QContext& w) { return d.binom(w, n, c, k); }));
        out.back().audit = stirling_audit(k, ctx.pstar());
    }
    for (size_t i = 0; i < n_list.size(); ++i) {
        for (size_t j = i + 1; j < n_list.size(); ++j) {
            long a = n_list[i], b = n_list[j];
            out.push_back(certify(header("binomial-independence", ctx, r, chi, {a, b}, c, {k}, z), ctx,
                                  vps + t, opt, head, [&](const QContext& w) {
                                      return d.binom(w, a, c, k) - d.binom(w, b, c, k);
                                  }));
            out.back().audit = stirling_audit(k, ctx.pstar());
        }
    }
    return out;
}

namespace {

RootOfUnitySum plus(const RootOfUnitySum& a, const RootOfUnitySum& b) { return a - b.scaled(-1); }

RootOfUnitySum shifted(const RootOfUnitySum& a, long e) {
    RootOfUnitySum out;
    out.phi = a.phi;
    for (const auto& [f, v] : a.coeffs) out.add(f + e, v);
    return out;
}

RootOfUnitySum diff_sums(const std::function<RootOfUnitySum(long)>& seq, long n, long c, long k) {
    RootOfUnitySum total = seq(n + k * c);
    for (long m = 0; m < k; ++m) {
        mpz_class b = binomial(k, m);
        if ((k - m) % 2) b = -b;
        total = plus(total, seq(n + m * c).scaled(mpq_class(b)));
    }
    return total;
}

bool is_power_of(long f, long p) {
    if (f == 1) return true;
    while (f % p == 0) f /= p;
    return f == 1;
}

}  // namespace

CongruenceReport verify_classical_kummer(long p, long n, long c, long k, KummerForm form,
                                         const std::optional<DirichletCharacter>& chi_in) {
    if (k < 1 || c < 1 || n < 1) throw PreconditionViolated("n, c and k must be positive");
    DirichletCharacter chi = chi_in ? *chi_in : DirichletCharacter::principal(p);
    long phi = p == 2 ? 1 : p - 1;
    CongruenceReport rep;
    rep.p = p;
    rep.chi = chi.to_string();
    rep.n = {n};
    rep.c = c;
    rep.k = {k};
    rep.required_valuation = 0;
    std::function<RootOfUnitySum(long)> seq;
    mpz_class divisor;
    switch (form) {
        case KummerForm::Classical:
            rep.theorem = "kummer-classical";
            if (c % phi) throw PreconditionViolated("c must be a multiple of p - 1");
            if (n % 2 || (p != 2 && n % phi == 0) || n <= k)
                throw PreconditionViolated("n must be even, not divisible by p - 1 and exceed k");
            seq = [](long m) {
                RootOfUnitySum s;
                s.add(0, bernoulli_number(m) / mpq_class(m));
                return s;
            };
            divisor = int_pow(p, k);
            break;
        case KummerForm::Carlitz:
            rep.theorem = "kummer-carlitz";
            if (c % phi) throw PreconditionViolated("c must be a multiple of p - 1");
            if (is_power_of(chi.conductor(), p))
                throw PreconditionViolated("conductor must not be a power of p");
            if (n <= k) throw PreconditionViolated("n must exceed k");
            seq = [chi](long m) { return gen_bernoulli_poly(m, chi, 0).scaled(mpq_class(1, m)); };
            divisor = int_pow(p, k);
            break;
        case KummerForm::Shiratani:
            rep.theorem = "kummer-shiratani";
            if (chi.is_principal())
                throw PreconditionViolated("principal character: the p-adic L-function has a pole at s = 1");
            seq = [chi, p](long m) {
                DirichletCharacter chim = chi.twist(m);
                RootOfUnitySum b = gen_bernoulli_poly(m, chim, 0).scaled(mpq_class(-1, m));
                if (auto e = chim.exponent(p))
                    b = b - shifted(b, *e).scaled(mpq_class(int_pow(p, m - 1)));
                return b;
            };
            divisor = int_pow(p_star(p), k);
            break;
    }
    RootOfUnitySum diff = diff_sums(seq, n, c, k);
    RootOfUnitySum value = diff.scaled(mpq_class(1) / mpq_class(divisor));
    if (auto x = value.rational()) {
        if (*x != 0) rep.difference_valuation = valuation(*diff.rational(), p);
        rep.exact_witness = *x;
        rep.certified_precision = kExactPrecision;
        rep.observed_valuation = *x == 0 ? kExactPrecision : valuation(*x, p);
        rep.verdict = rep.observed_valuation >= 0 ? Verdict::Pass : Verdict::Fail;
        return rep;
    }
    for (int attempt = 0; attempt < 3; ++attempt) {
        QContext ctx(p, mpq_class(1 + p_star(p)), 40 + attempt * 40);
        rep = judge(rep, value.to_padic(ctx), 0);
        if (rep.verdict != Verdict::Inconclusive) return rep;
    }
    rep.note = "precision insufficient";
    return rep;
}

}  // namespace qpl
