#include "qpl/padic.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

namespace qpl {

const mpz_class& prime_power(long p, long k) {
    thread_local std::unordered_map<long, std::vector<mpz_class>> cache;
    if (k < 0) throw DomainError("negative exponent for prime power");
    auto& table = cache[p];
    if (table.empty()) table.emplace_back(1);
    while (static_cast<long>(table.size()) <= k) table.push_back(table.back() * p);
    return table[k];
}

long valuation(const mpz_class& n, long p) {
    if (n == 0) return kInfiniteValuation;
    mpz_class m = n;
    long v = 0;
    while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
        mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
        ++v;
    }
    return v;
}

long valuation(const mpq_class& x, long p) {
    if (x == 0) return kInfiniteValuation;
    return valuation(x.get_num(), p) - valuation(x.get_den(), p);
}

long p_star(long p) { return p == 2 ? 4 : p; }
long v_p_star(long p) { return p == 2 ? 2 : 1; }
long rstar_threshold(long p) { return p == 2 ? 2 : 1; }
long domain_d_threshold(long p) { return p == 2 ? -1 : 0; }

PadicNumber PadicNumber::zero(long p, long prec) {
    PadicNumber z;
    z.p_ = p;
    z.prec_ = prec;
    z.exact_zero_ = true;
    return z;
}

PadicNumber PadicNumber::from_parts(long p, long val, const mpz_class& unit, long prec) {
    PadicNumber x;
    x.p_ = p;
    x.prec_ = prec;
    if (unit == 0 || val >= prec) {
        x.val_ = kInfiniteValuation;
        return x;
    }
    x.val_ = val;
    x.unit_ = unit;
    x.normalize();
    return x;
}

PadicNumber PadicNumber::from_integer(const mpz_class& n, long p, long prec) {
    if (n == 0) return zero(p, prec);
    long v = valuation(n, p);
    mpz_class u = n;
    if (v > 0) mpz_divexact(u.get_mpz_t(), u.get_mpz_t(), prime_power(p, v).get_mpz_t());
    return from_parts(p, v, u, prec);
}

PadicNumber PadicNumber::from_rational(const mpz_class& num, const mpz_class& den, long p,
                                       long prec) {
    if (den == 0) throw DivisionByZero("rational with zero denominator");
    if (num == 0) return zero(p, prec);
    long vn = valuation(num, p);
    long vd = valuation(den, p);
    mpz_class un = num, ud = den;
    if (vn > 0) mpz_divexact(un.get_mpz_t(), un.get_mpz_t(), prime_power(p, vn).get_mpz_t());
    if (vd > 0) mpz_divexact(ud.get_mpz_t(), ud.get_mpz_t(), prime_power(p, vd).get_mpz_t());
    long v = vn - vd;
    if (v >= prec) {
        PadicNumber z;
        z.p_ = p;
        z.prec_ = prec;
        return z;
    }
    const mpz_class& mod = prime_power(p, prec - v);
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), ud.get_mpz_t(), mod.get_mpz_t());
    return from_parts(p, v, un * inv, prec);
}

PadicNumber PadicNumber::from_rational(const mpq_class& x, long p, long prec) {
    return from_rational(x.get_num(), x.get_den(), p, prec);
}

void PadicNumber::normalize() {
    if (val_ == kInfiniteValuation) return;
    if (val_ >= prec_) {
        val_ = kInfiniteValuation;
        unit_ = 0;
        return;
    }
    mpz_mod(unit_.get_mpz_t(), unit_.get_mpz_t(), prime_power(p_, prec_ - val_).get_mpz_t());
    if (unit_ == 0) {
        val_ = kInfiniteValuation;
        return;
    }
    long extra = 0;
    while (mpz_divisible_ui_p(unit_.get_mpz_t(), p_)) {
        mpz_divexact_ui(unit_.get_mpz_t(), unit_.get_mpz_t(), p_);
        ++extra;
    }
    val_ += extra;
    if (val_ >= prec_) {
        val_ = kInfiniteValuation;
        unit_ = 0;
    }
}

void PadicNumber::check_same_prime(const PadicNumber& o) const {
    if (p_ != o.p_) throw DomainError("p-adic values over different primes");
}

mpz_class PadicNumber::residue(long k) const {
    if (k > prec_) throw PrecisionExhausted("residue requested beyond known precision");
    if (is_zero() || val_ >= k) return 0;
    if (val_ < 0) throw DomainError("residue of a non-integral p-adic value");
    mpz_class r = unit_ * prime_power(p_, val_);
    mpz_mod(r.get_mpz_t(), r.get_mpz_t(), prime_power(p_, k).get_mpz_t());
    return r;
}

PadicNumber PadicNumber::with_precision(long prec) const {
    if (prec >= prec_) return *this;
    PadicNumber x = *this;
    x.prec_ = prec;
    x.normalize();
    return x;
}

PadicNumber PadicNumber::lifted(long prec) const {
    if (prec <= prec_) return with_precision(prec);
    PadicNumber x = *this;
    x.prec_ = prec;
    return x;
}

PadicNumber PadicNumber::operator-() const {
    PadicNumber x = *this;
    if (!is_zero()) x.unit_ = prime_power(p_, prec_ - val_) - unit_;
    return x;
}

PadicNumber& PadicNumber::operator+=(const PadicNumber& o) {
    check_same_prime(o);
    long n = std::min(prec_, o.prec_);
    if (o.is_zero()) {
        if (n < prec_) *this = with_precision(n);
        exact_zero_ = exact_zero_ && o.exact_zero_;
        return *this;
    }
    if (is_zero()) {
        *this = o.with_precision(n);
        return *this;
    }
    long m = std::min(val_, o.val_);
    if (m >= n) {
        *this = PadicNumber::from_parts(p_, 0, 0, n);
        return *this;
    }
    mpz_class s = unit_ * prime_power(p_, val_ - m) + o.unit_ * prime_power(p_, o.val_ - m);
    val_ = m;
    unit_ = s;
    prec_ = n;
    exact_zero_ = false;
    normalize();
    return *this;
}

PadicNumber& PadicNumber::operator-=(const PadicNumber& o) { return *this += -o; }

PadicNumber& PadicNumber::operator*=(const PadicNumber& o) {
    check_same_prime(o);
    if (is_zero() && o.is_zero()) {
        prec_ = prec_ + o.prec_;
        exact_zero_ = exact_zero_ || o.exact_zero_;
        return *this;
    }
    if (is_zero()) {
        prec_ += o.val_;
        return *this;
    }
    if (o.is_zero()) {
        bool exact = o.exact_zero_;
        long n = o.prec_ + val_;
        *this = PadicNumber::zero(p_, n);
        exact_zero_ = exact;
        return *this;
    }
    long rel = std::min(prec_ - val_, o.prec_ - o.val_);
    val_ += o.val_;
    prec_ = val_ + rel;
    unit_ *= o.unit_;
    normalize();
    return *this;
}

PadicNumber PadicNumber::inverse() const {
    if (is_zero()) {
        if (exact_zero_) throw DivisionByZero("division by an exact zero");
        throw PrecisionExhausted("divisor is zero to its known precision");
    }
    long rel = prec_ - val_;
    PadicNumber x;
    x.p_ = p_;
    x.val_ = -val_;
    x.prec_ = x.val_ + rel;
    mpz_invert(x.unit_.get_mpz_t(), unit_.get_mpz_t(), prime_power(p_, rel).get_mpz_t());
    return x;
}

PadicNumber& PadicNumber::operator/=(const PadicNumber& o) {
    check_same_prime(o);
    if (o.is_zero()) return *this *= o.inverse();
    if (is_zero()) {
        prec_ -= o.val_;
        return *this;
    }
    return *this *= o.inverse();
}

PadicNumber PadicNumber::scaled(const mpq_class& c) const {
    if (c == 0) return PadicNumber::zero(p_, prec_);
    long v = valuation(c, p_);
    PadicNumber x = *this;
    x.prec_ += v;
    if (is_zero()) return x;
    mpz_class num = c.get_num(), den = c.get_den();
    long vn = valuation(num, p_), vd = valuation(den, p_);
    if (vn > 0) mpz_divexact(num.get_mpz_t(), num.get_mpz_t(), prime_power(p_, vn).get_mpz_t());
    if (vd > 0) mpz_divexact(den.get_mpz_t(), den.get_mpz_t(), prime_power(p_, vd).get_mpz_t());
    x.val_ += v;
    const mpz_class& mod = prime_power(p_, x.prec_ - x.val_);
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t());
    x.unit_ = x.unit_ * num * inv;
    x.normalize();
    return x;
}

PadicNumber PadicNumber::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    PadicNumber result;
    PadicNumber base = *this;
    bool any = false;
    while (e > 0) {
        if (e & 1) {
            result = any ? result * base : base;
            any = true;
        }
        e >>= 1;
        if (e) base = base * base;
    }
    return any ? result : PadicNumber::from_integer(1, p_, prec_ - std::min(0L, val_));
}

bool operator==(const PadicNumber& a, const PadicNumber& b) {
    if (a.p_ != b.p_) return false;
    return agreement(a, b) >= std::min(a.prec_, b.prec_);
}

long agreement(const PadicNumber& a, const PadicNumber& b) {
    PadicNumber d = a - b;
    return d.is_zero() ? d.prec() : d.val();
}

std::vector<long> PadicNumber::digits() const {
    std::vector<long> out;
    if (is_zero()) return out;
    mpz_class u = unit_;
    long n = prec_ - val_;
    out.reserve(n);
    for (long i = 0; i < n; ++i) {
        out.push_back(mpz_fdiv_q_ui(u.get_mpz_t(), u.get_mpz_t(), p_));
    }
    return out;
}

std::string PadicNumber::to_string() const {
    std::ostringstream os;
    if (is_zero()) {
        os << "O(" << p_ << "^" << prec_ << ")";
        return os.str();
    }
    os << unit_.get_str() << "*" << p_ << "^" << val_ << " + O(" << p_ << "^" << prec_ << ")";
    return os.str();
}

bool in_R(const PadicNumber& x) { return x.is_zero() || x.val() >= 0; }

bool in_Rstar(const PadicNumber& x) {
    return x.is_zero() || x.val() >= rstar_threshold(x.prime());
}

bool in_D(const PadicNumber& s) {
    return s.is_zero() || s.val() >= domain_d_threshold(s.prime());
}

PadicNumber teichmuller(const mpz_class& a, long p, long prec) {
    mpz_class r = a;
    mpz_mod(r.get_mpz_t(), r.get_mpz_t(), mpz_class(p_star(p)).get_mpz_t());
    if (mpz_divisible_ui_p(r.get_mpz_t(), p)) throw NotAUnit("Teichmuller lift of a non-unit");
    if (p == 2) return PadicNumber::from_integer(r == 1 ? 1 : -1, 2, prec);
    const mpz_class& mod = prime_power(p, prec);
    mpz_class x = r;
    mpz_class e = p;
    for (long i = 0; i < prec; ++i) mpz_powm(x.get_mpz_t(), x.get_mpz_t(), e.get_mpz_t(), mod.get_mpz_t());
    return PadicNumber::from_integer(x, p, prec);
}

namespace {

long floor_log(long k, long p) {
    long e = 0;
    while (k >= p) {
        k /= p;
        ++e;
    }
    return e;
}

}  // namespace

PadicNumber iwasawa_log(const PadicNumber& x) {
    long p = x.prime();
    PadicNumber one = PadicNumber::from_integer(1, p, x.prec());
    PadicNumber y = x - one;
    if (!in_Rstar(y)) throw DomainError("iwasawa_log needs x - 1 in R*");
    if (y.is_zero()) return PadicNumber::zero(p, y.prec());
    long m = y.val();
    long target = x.prec();
    PadicNumber sum = PadicNumber::zero(p, target);
    PadicNumber power = y;
    for (long k = 1;; ++k) {
        PadicNumber term = power.scaled(mpq_class(1, k));
        if (k % 2 == 0) term = -term;
        sum += term;
        long next = k + 1;
        if (next * m - floor_log(next, p) >= target && next * m >= 2 * floor_log(next, p) + 1) break;
        power *= y;
    }
    return sum.with_precision(target);
}

PadicNumber padic_exp(const PadicNumber& x) {
    long p = x.prime();
    if (!in_Rstar(x)) throw DomainError("padic_exp needs x in R*");
    long target = x.prec();
    PadicNumber sum = PadicNumber::from_integer(1, p, target);
    if (x.is_zero()) return sum;
    long m = x.val();
    PadicNumber term = PadicNumber::from_integer(1, p, target);
    for (long k = 1;; ++k) {
        term = (term * x).scaled(mpq_class(1, k));
        sum += term;
        // v(x^j / j!) >= j*m - (j-1)/(p-1), increasing in j
        long j = k + 1;
        if (j * m * (p - 1) - (j - 1) >= target * (p - 1)) break;
    }
    return sum.with_precision(target);
}

PadicNumber padic_power(const PadicNumber& x, const PadicNumber& s) {
    long p = x.prime();
    PadicNumber y = x - PadicNumber::from_integer(1, p, x.prec());
    if (!y.is_zero() && y.val() < v_p_star(p)) throw DomainError("padic_power needs x = 1 mod p*");
    if (!in_D(s)) throw DomainError("padic_power exponent outside D");
    PadicNumber e = s * iwasawa_log(x);
    if (!in_Rstar(e)) throw DomainError("padic_power: s*log(x) outside the exp disc");
    return padic_exp(e);
}

PadicNumber binom_padic(const PadicNumber& t, long k) {
    long p = t.prime();
    if (k < 0) throw DomainError("negative binomial index");
    PadicNumber num = PadicNumber::from_integer(1, p, t.prec());
    mpz_class fact = 1;
    for (long i = 0; i < k; ++i) {
        num *= t - PadicNumber::from_integer(i, p, t.prec());
        fact *= i + 1;
    }
    PadicNumber r = num.scaled(mpq_class(1) / fact);
    if (r.prec() < 1) throw PrecisionExhausted("binomial coefficient lost all digits");
    return r;
}

}  // namespace qpl
