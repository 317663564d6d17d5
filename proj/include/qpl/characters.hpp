#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qpl/qcontext.hpp"

namespace qpl {

// exp(2 pi i numerator / order)
struct RootOfUnity {
    long numerator;
    long order;
};

long euler_phi(long n);
long lcm_long(long a, long b);

// Dirichlet character with values in the phi(p*)-th roots of unity of Z_p.
// chi(a) = zeta^E(a) where zeta = omega(gamma) for the least primitive root
// gamma mod p*; E is stored as a table over residues (-1 where chi vanishes).
class DirichletCharacter {
public:
    static DirichletCharacter principal(long p);
    static DirichletCharacter omega_power(long p, long h);
    static DirichletCharacter build(long p, long modulus,
                                    const std::vector<std::pair<long, RootOfUnity>>& images);
    // "principal" | "omega^h" | "mod:<m>;gens:<g1>-><e1>,..." (e = Teichmuller exponent)
    static DirichletCharacter parse(long p, const std::string& spec);

    long prime() const { return p_; }
    long modulus() const { return modulus_; }
    long conductor() const { return conductor_; }
    long order() const;
    long phi() const { return phi_; }
    bool is_principal() const { return conductor_ == 1; }
    bool is_integer_valued() const;

    std::optional<long> exponent(const mpz_class& a) const;
    std::optional<long> exponent(long a) const { return exponent(mpz_class(a)); }
    PadicNumber eval(const QContext& ctx, const mpz_class& a) const;
    PadicNumber eval(const QContext& ctx, long a) const { return eval(ctx, mpz_class(a)); }
    // Integer value for characters with values in {0, 1, -1}.
    int sign(long a) const;

    DirichletCharacter primitive() const;
    DirichletCharacter twist(long n) const;  // chi * omega^-n
    friend DirichletCharacter operator*(const DirichletCharacter& a, const DirichletCharacter& b);
    friend bool operator==(const DirichletCharacter& a, const DirichletCharacter& b);

    std::string to_string() const;

private:
    DirichletCharacter(long p, long modulus, std::vector<long> exps);
    long compute_conductor() const;

    long p_ = 2;
    long modulus_ = 1;
    long phi_ = 2;
    long conductor_ = 1;
    std::vector<long> exps_;
};

}  // namespace qpl
