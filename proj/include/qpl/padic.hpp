#pragma once

#include <gmpxx.h>

#include <climits>
#include <string>
#include <vector>

#include "qpl/errors.hpp"

namespace qpl {

constexpr long kInfiniteValuation = LONG_MAX;
// Precision carried by exact zeros that are not tied to a context.
constexpr long kExactPrecision = LONG_MAX / 8;

// Powers of p are cached per thread.
const mpz_class& prime_power(long p, long k);

long valuation(const mpz_class& n, long p);  // n != 0
long valuation(const mpq_class& x, long p);  // x != 0
long p_star(long p);
long v_p_star(long p);
long rstar_threshold(long p);  // 1 for odd p, 2 for p = 2
long domain_d_threshold(long p);  // least admissible v(s) for s in D

// Value known modulo p^prec.  Nonzero values are p^val * unit with
// p not dividing unit and 0 <= unit < p^(prec - val).  Zero carries the
// valuation sentinel; an exact zero (created as zero, not by cancellation)
// is tracked so that division by it can be told apart from running out
// of digits.
class PadicNumber {
public:
    PadicNumber() = default;

    static PadicNumber zero(long p, long prec);
    static PadicNumber from_integer(const mpz_class& n, long p, long prec);
    static PadicNumber from_integer(long n, long p, long prec) {
        return from_integer(mpz_class(n), p, prec);
    }
    static PadicNumber from_rational(const mpz_class& num, const mpz_class& den, long p,
                                     long prec);
    static PadicNumber from_rational(const mpq_class& x, long p, long prec);
    static PadicNumber from_parts(long p, long val, const mpz_class& unit, long prec);

    long prime() const { return p_; }
    long val() const { return val_; }
    long prec() const { return prec_; }
    const mpz_class& unit() const { return unit_; }
    bool is_zero() const { return val_ == kInfiniteValuation; }
    bool is_exact_zero() const { return is_zero() && exact_zero_; }
    long relative_precision() const { return is_zero() ? 0 : prec_ - val_; }

    // Residue mod p^k of a value in Z_p (requires val >= 0 and k <= prec).
    mpz_class residue(long k) const;
    mpz_class residue() const { return residue(prec_); }

    PadicNumber with_precision(long prec) const;  // truncates, never extends
    PadicNumber lifted(long prec) const;          // pads unknown digits with zeros

    PadicNumber operator-() const;
    PadicNumber& operator+=(const PadicNumber& o);
    PadicNumber& operator-=(const PadicNumber& o);
    PadicNumber& operator*=(const PadicNumber& o);
    PadicNumber& operator/=(const PadicNumber& o);
    friend PadicNumber operator+(PadicNumber a, const PadicNumber& b) { return a += b; }
    friend PadicNumber operator-(PadicNumber a, const PadicNumber& b) { return a -= b; }
    friend PadicNumber operator*(PadicNumber a, const PadicNumber& b) { return a *= b; }
    friend PadicNumber operator/(PadicNumber a, const PadicNumber& b) { return a /= b; }

    // Multiplication by an exact rational; precision moves with its valuation.
    PadicNumber scaled(const mpq_class& c) const;
    PadicNumber operator*(long k) const { return scaled(mpq_class(k)); }
    PadicNumber pow(long e) const;
    PadicNumber inverse() const;

    // Agreement modulo p^min(prec).
    friend bool operator==(const PadicNumber& a, const PadicNumber& b);
    // Largest k with a == b mod p^k, capped at the joint precision.
    friend long agreement(const PadicNumber& a, const PadicNumber& b);

    std::vector<long> digits() const;  // base-p, little endian, of the unit
    std::string to_string() const;

private:
    void check_same_prime(const PadicNumber& o) const;
    void normalize();

    long p_ = 0;
    long val_ = kInfiniteValuation;
    mpz_class unit_ = 0;
    long prec_ = 0;
    bool exact_zero_ = false;
};

bool in_R(const PadicNumber& x);
bool in_Rstar(const PadicNumber& x);
bool in_D(const PadicNumber& s);

PadicNumber teichmuller(const mpz_class& a, long p, long prec);
PadicNumber iwasawa_log(const PadicNumber& x);
PadicNumber padic_exp(const PadicNumber& x);
PadicNumber padic_power(const PadicNumber& x, const PadicNumber& s);
PadicNumber binom_padic(const PadicNumber& t, long k);

}  // namespace qpl
