#include "qpl/qcontext.hpp"

#include <cctype>
#include <numeric>
#include <sstream>

namespace qpl {

std::string to_string(Convention c) { return c == Convention::PureSum ? "pure_sum" : "carlitz"; }

Convention parse_convention(const std::string& s) {
    if (s == "pure_sum" || s == "pure") return Convention::PureSum;
    if (s == "carlitz") return Convention::Carlitz;
    throw ParseError("unknown convention: " + s);
}

PadicNumber ExponentForm::value(long p, long prec) const {
    if (exact_) return PadicNumber::from_rational(*exact_, p, prec);
    return padic_->with_precision(prec);
}

ExponentForm ExponentForm::operator+(const ExponentForm& o) const {
    if (exact_ && o.exact_) return ExponentForm(mpq_class(*exact_ + *o.exact_));
    long p = exact_ ? o.padic_->prime() : padic_->prime();
    long prec = std::min(exact_ ? kExactPrecision : padic_->prec(),
                         o.exact_ ? kExactPrecision : o.padic_->prec());
    return ExponentForm(value(p, prec) + o.value(p, prec));
}

ExponentForm ExponentForm::scaled(const mpq_class& c) const {
    if (exact_) return ExponentForm(mpq_class(*exact_ * c));
    return ExponentForm(padic_->scaled(c));
}

std::string ExponentForm::to_string() const {
    if (exact_) return exact_->get_str();
    return padic_->to_string();
}

long discrete_log(long a, long gamma, long modulus) {
    long x = 1;
    a %= modulus;
    if (a < 0) a += modulus;
    for (long e = 0; e < modulus; ++e) {
        if (x == a) return e;
        x = x * gamma % modulus;
    }
    throw NotAUnit("discrete log of a non-unit");
}

long least_primitive_root(long p) {
    if (p == 2) return 3;
    for (long g = 2; g < p; ++g) {
        long x = 1;
        long order = 0;
        do {
            x = x * g % p;
            ++order;
        } while (x != 1);
        if (order == p - 1) return g;
    }
    return 1;
}

namespace {

// term := INT | 'p' | base '^' INT ; sums and a trailing "/den" on integers.
mpq_class parse_term(const std::string& t, long p) {
    auto caret = t.find('^');
    auto slash = t.find('/');
    auto base_of = [&](const std::string& b) -> mpz_class {
        if (b == "p") return p;
        return mpz_class(b);
    };
    if (caret != std::string::npos) {
        mpz_class base = base_of(t.substr(0, caret));
        long e = std::stol(t.substr(caret + 1));
        mpz_class r;
        mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(e));
        return mpq_class(r);
    }
    if (slash != std::string::npos) {
        mpq_class r(base_of(t.substr(0, slash)), base_of(t.substr(slash + 1)));
        if (r.get_den() == 0) throw ParseError("zero denominator in " + t);
        r.canonicalize();
        return r;
    }
    return mpq_class(base_of(t));
}

}  // namespace

mpq_class parse_rational(const std::string& text, long p) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw ParseError("empty number");
    try {
        mpq_class total = 0;
        size_t i = 0;
        int sign = 1;
        if (s[0] == '-' || s[0] == '+') {
            sign = s[0] == '-' ? -1 : 1;
            i = 1;
        }
        while (i <= s.size()) {
            size_t j = s.find_first_of("+-", i);
            if (j == std::string::npos) j = s.size();
            std::string term = s.substr(i, j - i);
            if (term.empty()) throw ParseError("malformed number: " + text);
            total += parse_term(term, p) * sign;
            if (j == s.size()) break;
            sign = s[j] == '-' ? -1 : 1;
            i = j + 1;
        }
        return total;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError("malformed number: " + text);
    }
}

QContext::QContext(long p, const PadicNumber& q, long precision, Convention convention)
    : p_(p), q_(q.with_precision(precision)), precision_(precision), convention_(convention),
      gamma_(least_primitive_root(p)), memo_(std::make_shared<QMemo>()) {
    PadicNumber d = q_ - PadicNumber::from_integer(1, p, precision);
    if (d.is_zero()) throw DomainError("q must differ from 1");
    if (!in_Rstar(d)) throw DomainError("q - 1 must lie in R*");
    log_q_ = iwasawa_log(q_);
}

QContext::QContext(long p, const mpq_class& q, long precision, Convention convention)
    : QContext(p, PadicNumber::from_rational(q, p, precision), precision, convention) {
    q_rational_ = q;
}

QContext QContext::from_descriptor(long p, const std::string& q, long precision,
                                   Convention convention) {
    return QContext(p, parse_rational(q, p), precision, convention);
}

long QContext::q_minus_one_valuation() const { return (q_ - integer(1)).val(); }

QContext QContext::with_precision(long precision) const {
    if (q_rational_) return QContext(p_, *q_rational_, precision, convention_);
    return QContext(p_, q_.lifted(precision), precision, convention_);
}

const QContext& QContext::lifted(long extra) const {
    if (extra <= 0) return *this;
    std::lock_guard<std::mutex> lock(memo_->mutex);
    auto& slot = memo_->lifted[extra];
    if (!slot) slot = std::make_shared<const QContext>(with_precision(precision_ + extra));
    return *slot;
}

QContext QContext::with_convention(Convention c) const {
    QContext out = *this;
    out.convention_ = c;
    out.memo_ = std::make_shared<QMemo>();
    return out;
}

PadicNumber QContext::integer(const mpz_class& n) const {
    return PadicNumber::from_integer(n, p_, precision_);
}

PadicNumber QContext::rational(const mpq_class& x) const {
    return PadicNumber::from_rational(x, p_, precision_);
}

PadicNumber QContext::q_power(long base, long m) const {
    {
        std::lock_guard<std::mutex> lock(memo_->mutex);
        auto it = memo_->q_powers.find({base, m});
        if (it != memo_->q_powers.end()) return it->second;
    }
    PadicNumber r = m == 0 ? integer(1) : q_.pow(base * m).with_precision(precision_);
    std::lock_guard<std::mutex> lock(memo_->mutex);
    memo_->q_powers.emplace(std::make_pair(base, m), r);
    return r;
}

PadicNumber QContext::q_root(long d) const {
    {
        std::lock_guard<std::mutex> lock(memo_->mutex);
        auto it = memo_->q_roots.find(d);
        if (it != memo_->q_roots.end()) return it->second;
    }
    PadicNumber r = padic_exp(log_q_ / integer(d));
    std::lock_guard<std::mutex> lock(memo_->mutex);
    memo_->q_roots.emplace(d, r);
    return r;
}

PadicNumber QContext::log_q_power(long base) const { return log_q_ * base; }

PadicNumber QContext::q_power(long base, const ExponentForm& x) const {
    ExponentForm y = x.scaled(mpq_class(base));
    if (y.is_integer() && y.exact().get_num().fits_slong_p())
        return q_power(1, y.exact().get_num().get_si());
    if (y.is_exact() && y.exact().get_num().fits_slong_p() && y.exact().get_den().fits_slong_p()) {
        long d = y.exact().get_den().get_si();
        if (d % p_ != 0) return q_root(d).pow(y.exact().get_num().get_si());
    }
    PadicNumber e = y.value(p_, precision_);
    if (!in_R(e)) throw DomainError("q-power exponent is not a p-adic integer");
    return padic_exp(e * log_q_);
}

PadicNumber QContext::q_bracket(long base, const ExponentForm& x) const {
    PadicNumber one = integer(1);
    ExponentForm y = x.scaled(mpq_class(base));
    if (y.is_integer() && y.exact().get_num().fits_slong_p()) {
        // geometric sum in Q = q^base avoids dividing by Q - 1
        long m = y.exact().get_num().get_si() / base;
        if (y.exact().get_num().get_si() % base == 0) {
            long am = m < 0 ? -m : m;
            PadicNumber Q = q_power(base, 1), sum = zero(), Qk = one;
            for (long k = 0; k < am; ++k) {
                sum += Qk;
                Qk *= Q;
            }
            if (m < 0) return -(sum / Qk);
            return sum;
        }
    }
    return (one - q_power(base, x)) / (one - q_power(base, 1));
}

PadicNumber QContext::teichmuller(long a) const {
    long ps = pstar();
    long r = ((a % ps) + ps) % ps;
    {
        std::lock_guard<std::mutex> lock(memo_->mutex);
        auto it = memo_->teichmuller.find(r);
        if (it != memo_->teichmuller.end()) return it->second;
    }
    PadicNumber w = qpl::teichmuller(mpz_class(r), p_, precision_);
    std::lock_guard<std::mutex> lock(memo_->mutex);
    memo_->teichmuller.emplace(r, w);
    return w;
}

PadicNumber QContext::root_of_unity_power(long e) const {
    long phi = pstar() / p_ * (p_ - 1);
    e %= phi;
    if (e < 0) e += phi;
    long a = 1;
    for (long i = 0; i < e; ++i) a = a * gamma_ % pstar();
    return teichmuller(a);
}

PadicNumber QContext::angle(const ExponentForm& a) const {
    long ps = pstar();
    long r;
    if (a.is_exact()) {
        const mpq_class& x = a.exact();
        mpz_class den_inv;
        if (mpz_invert(den_inv.get_mpz_t(), x.get_den().get_mpz_t(), mpz_class(ps).get_mpz_t()) == 0)
            throw NotAUnit("angle of a non-integral exponent");
        mpz_class res = x.get_num() * den_inv;
        mpz_mod_ui(res.get_mpz_t(), res.get_mpz_t(), ps);
        r = res.get_si();
    } else {
        r = a.value(p_, precision_).residue(v_p_star(p_)).get_si();
    }
    if (r % p_ == 0) throw NotAUnit("angle of a non-unit");
    return q_bracket(1, a) / teichmuller(r);
}

}  // namespace qpl
