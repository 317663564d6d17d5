#include "qpl/characters.hpp"

#include <deque>
#include <numeric>
#include <sstream>

namespace qpl {

long euler_phi(long n) {
    long result = n;
    for (long d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            while (n % d == 0) n /= d;
            result -= result / d;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

long lcm_long(long a, long b) { return a / std::gcd(a, b) * b; }

namespace {

long mod_pos(long a, long m) {
    long r = a % m;
    return r < 0 ? r + m : r;
}

}  // namespace

DirichletCharacter::DirichletCharacter(long p, long modulus, std::vector<long> exps)
    : p_(p), modulus_(modulus), phi_(euler_phi(p_star(p))), exps_(std::move(exps)) {
    conductor_ = compute_conductor();
}

long DirichletCharacter::compute_conductor() const {
    for (long d = 1; d <= modulus_; ++d) {
        if (modulus_ % d) continue;
        bool trivial = true;
        for (long a = 1; a < modulus_ + 1 && trivial; a += d) {
            long r = mod_pos(a, modulus_);
            if (exps_[r] > 0) trivial = false;
        }
        if (trivial) return d;
    }
    return modulus_;
}

DirichletCharacter DirichletCharacter::principal(long p) { return DirichletCharacter(p, 1, {0}); }

DirichletCharacter DirichletCharacter::omega_power(long p, long h) {
    long m = p_star(p);
    long phi = euler_phi(m);
    long gamma = least_primitive_root(p);
    std::vector<long> exps(m, -1);
    for (long a = 1; a < m; ++a) {
        if (a % p == 0) continue;
        exps[a] = mod_pos(h * discrete_log(a, gamma, m), phi);
    }
    return DirichletCharacter(p, m, std::move(exps)).primitive();
}

DirichletCharacter DirichletCharacter::build(
    long p, long modulus, const std::vector<std::pair<long, RootOfUnity>>& images) {
    if (modulus < 1) throw PreconditionViolated("character modulus must be positive");
    long phi = euler_phi(p_star(p));
    std::vector<long> gens, gexp;
    for (const auto& [g, root] : images) {
        if (root.order <= 0) throw PreconditionViolated("root of unity order must be positive");
        long num = mod_pos(root.numerator, root.order);
        long g_ = std::gcd(num, root.order);
        long order = root.order / g_;
        if (phi % order) throw UnsupportedOrder("root of unity of order " + std::to_string(order) +
                                                " is not in mu_" + std::to_string(phi));
        if (std::gcd(mod_pos(g, modulus), modulus) != 1 && modulus > 1)
            throw PreconditionViolated("generator " + std::to_string(g) + " is not a unit");
        gens.push_back(mod_pos(g, modulus));
        gexp.push_back(num / g_ * (phi / order));
    }
    std::vector<long> exps(modulus, -1);
    exps[mod_pos(1, modulus)] = 0;
    std::deque<long> queue{mod_pos(1, modulus)};
    while (!queue.empty()) {
        long x = queue.front();
        queue.pop_front();
        for (size_t i = 0; i < gens.size(); ++i) {
            long y = x * gens[i] % modulus;
            long e = (exps[x] + gexp[i]) % phi;
            if (exps[y] < 0) {
                exps[y] = e;
                queue.push_back(y);
            } else if (exps[y] != e) {
                throw PreconditionViolated("generator images are inconsistent");
            }
        }
    }
    for (long a = 0; a < modulus; ++a) {
        if (std::gcd(a, modulus) == 1 && exps[a] < 0)
            throw PreconditionViolated("generators do not generate the unit group");
    }
    if (modulus == 1) exps[0] = 0;
    return DirichletCharacter(p, modulus, std::move(exps));
}

DirichletCharacter DirichletCharacter::parse(long p, const std::string& spec) {
    if (spec == "principal" || spec == "1") return principal(p);
    if (spec.rfind("omega", 0) == 0) {
        if (spec == "omega") return omega_power(p, 1);
        if (spec.size() < 7 || spec[5] != '^') throw ParseError("bad character descriptor: " + spec);
        try {
            return omega_power(p, std::stol(spec.substr(6)));
        } catch (const std::invalid_argument&) {
            throw ParseError("bad character descriptor: " + spec);
        }
    }
    if (spec.rfind("mod:", 0) == 0) {
        auto semi = spec.find(';');
        if (semi == std::string::npos || spec.compare(semi + 1, 5, "gens:") != 0)
            throw ParseError("bad character descriptor: " + spec);
        long m;
        try {
            m = std::stol(spec.substr(4, semi - 4));
        } catch (const std::exception&) {
            throw ParseError("bad character modulus: " + spec);
        }
        std::vector<std::pair<long, RootOfUnity>> images;
        long phi = euler_phi(p_star(p));
        std::stringstream ss(spec.substr(semi + 6));
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.empty()) continue;
            auto arrow = item.find("->");
            if (arrow == std::string::npos) throw ParseError("bad generator image: " + item);
            try {
                long g = std::stol(item.substr(0, arrow));
                long e = std::stol(item.substr(arrow + 2));
                images.push_back({g, RootOfUnity{e, phi}});
            } catch (const std::exception&) {
                throw ParseError("bad generator image: " + item);
            }
        }
        return build(p, m, images);
    }
    throw ParseError("bad character descriptor: " + spec);
}

long DirichletCharacter::order() const {
    long g = phi_;
    for (long e : exps_)
        if (e > 0) g = std::gcd(g, e);
    return phi_ / g;
}

bool DirichletCharacter::is_integer_valued() const {
    for (long e : exps_)
        if (e > 0 && 2 * e != phi_) return false;
    return true;
}

std::optional<long> DirichletCharacter::exponent(const mpz_class& a) const {
    mpz_class r;
    mpz_fdiv_r_ui(r.get_mpz_t(), a.get_mpz_t(), modulus_);
    long e = exps_[r.get_si()];
    if (e < 0) return std::nullopt;
    return e;
}

PadicNumber DirichletCharacter::eval(const QContext& ctx, const mpz_class& a) const {
    if (ctx.p() != p_) throw DomainError("character and context use different primes");
    auto e = exponent(a);
    if (!e) return PadicNumber::zero(p_, ctx.precision());
    return ctx.root_of_unity_power(*e);
}

int DirichletCharacter::sign(long a) const {
    auto e = exponent(a);
    if (!e) return 0;
    if (*e == 0) return 1;
    if (2 * *e == phi_) return -1;
    throw DomainError("character value is not rational");
}

DirichletCharacter DirichletCharacter::primitive() const {
    if (conductor_ == modulus_) return *this;
    long f = conductor_;
    std::vector<long> exps(f, -1);
    for (long a = 0; a < modulus_; ++a) {
        if (exps_[a] >= 0) exps[a % f] = exps_[a];
    }
    if (f == 1) exps[0] = 0;
    return DirichletCharacter(p_, f, std::move(exps));
}

DirichletCharacter DirichletCharacter::twist(long n) const {
    return *this * omega_power(p_, -n);
}

DirichletCharacter operator*(const DirichletCharacter& a, const DirichletCharacter& b) {
    if (a.p_ != b.p_) throw DomainError("characters over different primes");
    DirichletCharacter pa = a.primitive(), pb = b.primitive();
    long m = lcm_long(pa.modulus_, pb.modulus_);
    std::vector<long> exps(m, -1);
    for (long x = 0; x < m; ++x) {
        long ea = pa.exps_[x % pa.modulus_], eb = pb.exps_[x % pb.modulus_];
        if (std::gcd(x, m) != 1 && m > 1) continue;
        exps[x] = (ea + eb) % a.phi_;
    }
    if (m == 1) exps[0] = 0;
    return DirichletCharacter(a.p_, m, std::move(exps)).primitive();
}

bool operator==(const DirichletCharacter& a, const DirichletCharacter& b) {
    DirichletCharacter pa = a.primitive(), pb = b.primitive();
    return pa.p_ == pb.p_ && pa.exps_ == pb.exps_;
}

std::string DirichletCharacter::to_string() const {
    if (is_principal()) return "principal";
    std::ostringstream os;
    os << "mod:" << modulus_ << ";gens:";
    bool first = true;
    for (long a = 1; a < modulus_; ++a) {
        if (exps_[a] < 0) continue;
        if (!first) os << ",";
        os << a << "->" << exps_[a];
        first = false;
    }
    return os.str();
}

}  // namespace qpl
