#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "qpl/padic.hpp"

namespace qpl {

enum class Convention { PureSum, Carlitz };

std::string to_string(Convention c);
Convention parse_convention(const std::string& s);

// A p-adic integer exponent, kept as an exact rational while possible so that
// integer powers of q stay on the repeated-multiplication path.
class ExponentForm {
public:
    ExponentForm() : exact_(mpq_class(0)) {}
    ExponentForm(long n) : exact_(mpq_class(n)) {}
    ExponentForm(const mpq_class& x) : exact_(x) {}
    ExponentForm(const PadicNumber& x) : padic_(x) {}

    bool is_exact() const { return exact_.has_value(); }
    bool is_integer() const { return exact_ && exact_->get_den() == 1; }
    const mpq_class& exact() const { return *exact_; }
    PadicNumber value(long p, long prec) const;

    ExponentForm operator+(const ExponentForm& o) const;
    ExponentForm scaled(const mpq_class& c) const;

    std::string to_string() const;

private:
    std::optional<mpq_class> exact_;
    std::optional<PadicNumber> padic_;
};

struct QMemo;

// q-context: prime, q with q - 1 in R*, working precision and convention.
// Memo tables are internally locked; a context may be shared across threads.
class QContext {
public:
    QContext(long p, const PadicNumber& q, long precision,
             Convention convention = Convention::PureSum);
    QContext(long p, const mpq_class& q, long precision,
             Convention convention = Convention::PureSum);

    // Descriptor forms: "1+p^m", "num/den", integer, sums like "1+5^3".
    static QContext from_descriptor(long p, const std::string& q, long precision,
                                    Convention convention = Convention::PureSum);

    long p() const { return p_; }
    long pstar() const { return p_star(p_); }
    long precision() const { return precision_; }
    Convention convention() const { return convention_; }
    const PadicNumber& q() const { return q_; }
    const PadicNumber& log_q() const { return log_q_; }
    const std::optional<mpq_class>& q_rational() const { return q_rational_; }
    long q_minus_one_valuation() const;

    QContext with_precision(long precision) const;
    // Same q and convention at precision() + extra, cached on the memo.
    const QContext& lifted(long extra) const;
    QContext with_convention(Convention c) const;

    PadicNumber integer(const mpz_class& n) const;
    PadicNumber integer(long n) const { return integer(mpz_class(n)); }
    PadicNumber rational(const mpq_class& x) const;
    PadicNumber zero() const { return PadicNumber::zero(p_, precision_); }

    PadicNumber q_power(long base, const ExponentForm& x) const;  // (q^base)^x
    PadicNumber q_power(long base, long m) const;
    PadicNumber q_bracket(long base, const ExponentForm& x) const;  // [x]_{q^base}
    PadicNumber q_root(long d) const;  // q^(1/d), p not dividing d
    PadicNumber log_q_power(long base) const;                      // log_p(q^base)
    PadicNumber angle(const ExponentForm& a) const;                 // <a>_q
    PadicNumber teichmuller(long a) const;
    PadicNumber root_of_unity_power(long e) const;  // zeta^e, zeta = omega(gamma)
    long primitive_root() const { return gamma_; }

    QMemo& memo() const { return *memo_; }

private:
    long p_;
    PadicNumber q_;
    std::optional<mpq_class> q_rational_;
    long precision_;
    Convention convention_;
    PadicNumber log_q_;
    long gamma_;
    std::shared_ptr<QMemo> memo_;
};

struct QMemo {
    std::mutex mutex;
    std::map<std::pair<long, long>, PadicNumber> q_powers;
    std::map<long, PadicNumber> q_roots;
    std::map<long, PadicNumber> teichmuller;
    std::map<long, std::vector<PadicNumber>> carlitz;
    std::map<std::string, PadicNumber> values;
    std::map<long, std::shared_ptr<const QContext>> lifted;
};

long discrete_log(long a, long gamma, long modulus);
long least_primitive_root(long p);  // generator of (Z/p*)^x; 3 for p = 2

mpq_class parse_rational(const std::string& text, long p);

}  // namespace qpl
