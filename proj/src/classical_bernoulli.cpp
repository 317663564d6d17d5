#include "qpl/classical_bernoulli.hpp"

#include <algorithm>
#include <mutex>
#include <vector>

namespace qpl {

void RootOfUnitySum::add(long e, const mpq_class& c) {
    e %= phi;
    if (e < 0) e += phi;
    mpq_class& slot = coeffs[e];
    slot += c;
    if (slot == 0) coeffs.erase(e);
}

RootOfUnitySum RootOfUnitySum::scaled(const mpq_class& c) const {
    RootOfUnitySum out{phi, {}};
    for (const auto& [e, v] : coeffs) out.add(e, v * c);
    return out;
}

RootOfUnitySum RootOfUnitySum::operator-(const RootOfUnitySum& o) const {
    RootOfUnitySum out = *this;
    for (const auto& [e, v] : o.coeffs) out.add(e, -v);
    return out;
}

bool RootOfUnitySum::is_rational() const {
    for (const auto& [e, v] : coeffs)
        if (e != 0 && 2 * e != phi) return false;
    return true;
}

std::optional<mpq_class> RootOfUnitySum::rational() const {
    if (!is_rational()) return std::nullopt;
    mpq_class total = 0;
    for (const auto& [e, v] : coeffs) total += e == 0 ? v : mpq_class(-v);
    return total;
}

PadicNumber RootOfUnitySum::to_padic(const QContext& ctx) const {
    if (auto r = rational()) return ctx.rational(*r);
    PadicNumber total = ctx.zero();
    for (const auto& [e, v] : coeffs) total += ctx.root_of_unity_power(e) * ctx.rational(v);
    return total;
}

mpz_class binomial(long n, long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

mpz_class factorial(long n) {
    mpz_class r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

mpz_class multinomial(long n, const std::vector<long>& parts) {
    mpz_class r = factorial(n);
    for (long k : parts) r /= factorial(k);
    return r;
}

mpq_class bernoulli_number(long n) {
    static std::mutex mutex;
    static std::vector<mpq_class> table{mpq_class(1)};
    std::lock_guard<std::mutex> lock(mutex);
    while (static_cast<long>(table.size()) <= n) {
        long m = table.size();
        // sum_{k<m} C(m+1,k) B_k + (m+1) B_m = 0
        mpq_class s = 0;
        for (long k = 0; k < m; ++k) s += mpq_class(binomial(m + 1, k)) * table[k];
        table.push_back(-s / (m + 1));
    }
    return table[n];
}

mpq_class bernoulli_poly(long n, const mpq_class& x) {
    mpq_class s = 0, xp = 1;
    for (long k = n; k >= 0; --k) {
        s += mpq_class(binomial(n, k)) * bernoulli_number(k) * xp;
        xp *= x;
    }
    return s;
}

mpq_class norlund_number(long n, long r) {
    if (r == 0) return n == 0 ? 1 : 0;
    static std::mutex mutex;
    static std::map<long, std::vector<mpq_class>> tables;
    {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = tables.find(r);
        if (it != tables.end() && static_cast<long>(it->second.size()) > n) return it->second[n];
    }
    // coefficients of (t/(e^t-1))^r from c_k = B_k/k!
    long len = std::max(n + 1, 16L);
    std::vector<mpq_class> base(len), acc;
    for (long k = 0; k < len; ++k) base[k] = bernoulli_number(k) / mpq_class(factorial(k));
    acc = base;
    for (long j = 1; j < r; ++j) {
        std::vector<mpq_class> next(len, mpq_class(0));
        for (long a = 0; a < len; ++a)
            for (long b = 0; a + b < len; ++b) next[a + b] += acc[a] * base[b];
        acc = std::move(next);
    }
    for (long k = 0; k < len; ++k) acc[k] *= mpq_class(factorial(k));
    std::lock_guard<std::mutex> lock(mutex);
    tables[r] = acc;
    return acc[n];
}

mpq_class norlund_poly(long n, long r, const mpq_class& x) {
    mpq_class s = 0, xp = 1;
    for (long k = n; k >= 0; --k) {
        s += mpq_class(binomial(n, k)) * norlund_number(k, r) * xp;
        xp *= x;
    }
    return s;
}

mpz_class stirling_first(long k, long m) {
    if (k < 0 || m < 0) return 0;
    std::vector<mpz_class> row{1};
    for (long n = 0; n < k; ++n) {
        std::vector<mpz_class> next(n + 2, mpz_class(0));
        for (long j = 0; j <= n; ++j) {
            next[j + 1] += row[j];
            next[j] -= row[j] * n;
        }
        row = std::move(next);
    }
    return m < static_cast<long>(row.size()) ? row[m] : mpz_class(0);
}

mpz_class pochhammer(const mpz_class& x, long r) {
    mpz_class p = 1;
    for (long i = 0; i < r; ++i) p *= x + i;
    return p;
}

mpq_class pochhammer(const mpq_class& x, long r) {
    mpq_class p = 1;
    for (long i = 0; i < r; ++i) p *= x + i;
    return p;
}

std::vector<mpz_class> tuple_sum_counts(long F, long r) {
    std::vector<mpz_class> counts{1};  // r = 0: sum 0
    for (long j = 0; j < r; ++j) {
        std::vector<mpz_class> next(counts.size() + F - 1, mpz_class(0));
        for (size_t s = 0; s < counts.size(); ++s)
            for (long a = 0; a < F; ++a) next[s + a] += counts[s];
        counts = std::move(next);
    }
    return counts;
}

RootOfUnitySum gen_bernoulli_poly(long n, const DirichletCharacter& chi, const mpq_class& z) {
    return multi_gen_bernoulli_poly(n, 1, chi, z);
}

RootOfUnitySum multi_gen_bernoulli_poly(long n, long r, const DirichletCharacter& chi,
                                        const mpq_class& z) {
    DirichletCharacter prim = chi.primitive();
    long f = prim.conductor();
    RootOfUnitySum out{prim.phi(), {}};
    auto counts = tuple_sum_counts(f, r);
    mpq_class scale = 1;
    if (n - r >= 0) {
        mpz_class fp;
        mpz_pow_ui(fp.get_mpz_t(), mpz_class(f).get_mpz_t(), n - r);
        scale = fp;
    } else {
        mpz_class fp;
        mpz_pow_ui(fp.get_mpz_t(), mpz_class(f).get_mpz_t(), r - n);
        scale = mpq_class(1) / fp;
    }
    for (size_t i = 0; i < counts.size(); ++i) {
        long S = r + static_cast<long>(i);
        auto e = prim.exponent(S);
        if (!e) continue;
        mpq_class x = (z + S) / f;
        out.add(*e, mpq_class(counts[i]) * norlund_poly(n, r, x) * scale);
    }
    return out;
}

}  // namespace qpl
