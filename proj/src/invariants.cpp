#include "qpl/invariants.hpp"

#include <functional>
#include <random>

#include "qpl/qcontext.hpp"

namespace qpl {

namespace {

const long kPrimes[] = {2, 3, 5, 7, 11, 13};

struct Suite {
    InvariantResult result;

    void run(long cases, const std::function<std::string(long)>& check) {
        for (long i = 0; i < cases; ++i) {
            std::string failure;
            try {
                failure = check(i);
            } catch (const std::exception& e) {
                failure = std::string("exception: ") + e.what();
            }
            ++result.cases;
            if (!failure.empty()) {
                if (!result.failures) result.first_failure = failure;
                ++result.failures;
            }
        }
    }
};

// Value of valuation at least v: p^v * (random unit or zero).
PadicNumber random_small(std::mt19937_64& rng, long p, long v, long prec) {
    std::uniform_int_distribution<long> digits(0, 1000000);
    return PadicNumber::from_integer(mpz_class(digits(rng)) * prime_power(p, v), p, prec);
}

}  // namespace

std::vector<InvariantResult> run_core_invariants(std::uint64_t seed, long cases) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, 5);
    std::uniform_int_distribution<long> precs(6, 30);
    std::uniform_int_distribution<long> ints(-1000000, 1000000);
    std::vector<InvariantResult> out;

    Suite teich{{"teichmuller", 0, 0, ""}};
    teich.run(cases, [&](long) -> std::string {
        long p = kPrimes[pick(rng)], prec = precs(rng);
        long a = ints(rng);
        if (a % p == 0) a += 1;
        PadicNumber w = teichmuller(mpz_class(a), p, prec);
        long phi = p == 2 ? 2 : p - 1;
        if (w.pow(phi) != PadicNumber::from_integer(1, p, prec)) return "omega^phi != 1 for a = " + std::to_string(a);
        PadicNumber d = w - PadicNumber::from_integer(a, p, prec);
        if (!d.is_zero() && d.val() < v_p_star(p)) return "omega(a) != a mod p* for a = " + std::to_string(a);
        return "";
    });
    out.push_back(teich.result);

    Suite logexp{{"log_exp_round_trip", 0, 0, ""}};
    logexp.run(cases, [&](long) -> std::string {
        long p = kPrimes[pick(rng)], prec = precs(rng);
        PadicNumber x = random_small(rng, p, rstar_threshold(p), prec);
        PadicNumber one = PadicNumber::from_integer(1, p, prec);
        if (agreement(iwasawa_log(padic_exp(x)), x) < x.prec() - 1 - v_p_star(p))
            return "log(exp(x)) != x for " + x.to_string();
        PadicNumber y = one + x;
        if (agreement(padic_exp(iwasawa_log(y)), y) < y.prec() - 1 - v_p_star(p))
            return "exp(log(y)) != y for " + y.to_string();
        return "";
    });
    out.push_back(logexp.result);

    Suite qpow{{"q_power_integer_consistency", 0, 0, ""}};
    std::uniform_int_distribution<long> exps(-30, 60);
    qpow.run(cases, [&](long) -> std::string {
        long p = kPrimes[pick(rng)], prec = precs(rng);
        std::uniform_int_distribution<long> units(1, 50);
        QContext ctx(p, mpq_class(1 + p_star(p) * units(rng)), prec);
        long m = exps(rng), k = exps(rng);
        PadicNumber direct = ctx.q_power(1, m);
        PadicNumber via_exp = ctx.q_power(1, ExponentForm(PadicNumber::from_integer(m, p, prec)));
        if (agreement(direct, via_exp) < std::min(direct.prec(), via_exp.prec()) - 1 - v_p_star(p))
            return "q^m repeated product vs exp(m log q), m = " + std::to_string(m);
        if (ctx.q_power(1, m + k) != ctx.q_power(1, m) * ctx.q_power(1, k)) return "q^(m+k) != q^m q^k";
        PadicNumber lhs = ctx.q_bracket(1, ExponentForm(m + k));
        PadicNumber rhs = ctx.q_bracket(1, ExponentForm(m)) + ctx.q_power(1, m) * ctx.q_bracket(1, ExponentForm(k));
        if (lhs != rhs) return "[m+k] != [m] + q^m [k]";
        return "";
    });
    out.push_back(qpow.result);

    Suite mono{{"precision_monotonicity", 0, 0, ""}};
    mono.run(cases, [&](long) -> std::string {
        long p = kPrimes[pick(rng)], lo = precs(rng), hi = lo + 1 + precs(rng) / 3;
        mpq_class a(ints(rng), 1 + std::abs(ints(rng)) % 997);
        mpq_class b(ints(rng) | 1, 1 + std::abs(ints(rng)) % 991);
        if (valuation(mpq_class(a.get_den()), p) > 0 || valuation(mpq_class(b.get_den()), p) > 0)
            return "";
        if (a == 0 || b == 0) return "";
        auto eval = [&](long prec) {
            PadicNumber x = PadicNumber::from_rational(a, p, prec), y = PadicNumber::from_rational(b, p, prec);
            PadicNumber small = PadicNumber::from_rational(mpq_class(a * prime_power(p, rstar_threshold(p))), p, prec);
            return std::vector<PadicNumber>{x + y, x * y, x / y, padic_exp(small),
                                            iwasawa_log(PadicNumber::from_integer(1, p, prec) + small)};
        };
        auto vl = eval(lo), vh = eval(hi);
        for (size_t i = 0; i < vl.size(); ++i) {
            if (vl[i].prec() > vh[i].prec()) return "precision decreased when raised, op " + std::to_string(i);
            if (vl[i] != vh[i]) return "higher precision contradicts lower, op " + std::to_string(i);
        }
        return "";
    });
    out.push_back(mono.result);
    return out;
}

}  // namespace qpl
