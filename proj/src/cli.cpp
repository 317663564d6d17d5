#include "qpl/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "qpl/congruences.hpp"
#include "qpl/invariants.hpp"
#include "qpl/l_functions.hpp"
#include "qpl/oracles.hpp"

namespace qpl {

using Json = nlohmann::ordered_json;

nlohmann::ordered_json padic_json(const PadicNumber& x) {
    Json j;
    j["p"] = x.prime();
    if (x.is_zero()) {
        j["valuation"] = "inf";
        j["unit"] = "0";
    } else {
        j["valuation"] = x.val();
        j["unit"] = x.unit().get_str();
    }
    j["precision"] = x.prec();
    j["text"] = x.to_string();
    return j;
}

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    long p = 0;
    std::string q = "1+p";
    long prec = 20;
    std::string convention = "pure_sum";
    std::string chi = "principal";
    long r = 1;
    std::string z = "0";
    long F = 0;
    std::string format = "json";
    unsigned jobs = 1;

    long require_p() const {
        if (p < 2) throw UsageError("--p is required and must be a prime");
        for (long d = 2; d * d <= p; ++d)
            if (p % d == 0) throw UsageError("--p must be prime");
        return p;
    }
    QContext context() const {
        return QContext::from_descriptor(require_p(), q, prec, parse_convention(convention));
    }
    DirichletCharacter character() const { return DirichletCharacter::parse(require_p(), chi); }
    ExponentForm z_form() const { return ExponentForm(parse_rational(z, p)); }
};

long default_precision() {
    if (const char* env = std::getenv("QPL_PREC")) {
        try {
            long v = std::stol(env);
            if (v > 0) return v;
        } catch (const std::exception&) {
        }
    }
    return 20;
}

Json header(const std::string& command) {
    Json j;
    j["schema"] = "qpl/1";
    j["command"] = command;
    return j;
}

Json context_json(const Common& c) {
    Json j;
    j["p"] = c.p;
    j["q"] = c.q;
    j["precision"] = c.prec;
    j["convention"] = c.convention;
    return j;
}

Json root_sum_json(const RootOfUnitySum& s) {
    if (auto x = s.rational()) return x->get_str();
    Json j;
    j["root_order"] = s.phi;
    Json terms = Json::object();
    for (const auto& [e, v] : s.coeffs) terms["zeta^" + std::to_string(e)] = v.get_str();
    j["terms"] = terms;
    return j;
}

std::vector<long> parse_list(const std::string& text) {
    std::vector<long> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        auto dots = item.find("..");
        try {
            if (dots == std::string::npos) {
                out.push_back(std::stol(item));
            } else {
                long a = std::stol(item.substr(0, dots)), b = std::stol(item.substr(dots + 2));
                for (long v = a; v <= b; ++v) out.push_back(v);
            }
        } catch (const std::exception&) {
            throw UsageError("bad integer list: " + text);
        }
    }
    if (out.empty()) throw UsageError("empty integer list");
    return out;
}

void add_context_options(CLI::App* app, Common& c, bool with_chi = true) {
    app->add_option("--p", c.p, "prime");
    app->add_option("--q", c.q, "q descriptor, e.g. 1+p, 1+p^3, 6, 26/5")->capture_default_str();
    app->add_option("--prec", c.prec, "absolute p-adic precision (default QPL_PREC or 20)");
    app->add_option("--convention", c.convention, "pure_sum | carlitz")->capture_default_str();
    if (with_chi) {
        app->add_option("--chi", c.chi, "principal | omega^h | mod:<m>;gens:<g>-><e>,...")
            ->capture_default_str();
        app->add_option("--r", c.r, "multiplicity r")->capture_default_str();
        app->add_option("--z", c.z, "shift z (rational or p-adic integer descriptor)")->capture_default_str();
    }
}

template <class T>
void emit(std::ostream& out, const T& doc) {
    out << doc.dump(2) << "\n";
}

int run_bernoulli(const Common& c, long n, const std::string& x_text, std::ostream& out) {
    Json doc = header("bernoulli");
    doc["n"] = n;
    doc["r"] = c.r;
    if (n < 0 || c.r < 1) throw UsageError("need n >= 0 and r >= 1");
    if (c.chi != "principal") {
        DirichletCharacter chi = c.character();
        mpq_class x = x_text.empty() ? mpq_class(0) : parse_rational(x_text, c.p);
        doc["chi"] = chi.to_string();
        doc["x"] = x.get_str();
        doc["value"] = root_sum_json(c.r == 1 ? gen_bernoulli_poly(n, chi, x)
                                              : multi_gen_bernoulli_poly(n, c.r, chi, x));
    } else if (x_text.empty()) {
        doc["value"] = (c.r == 1 ? bernoulli_number(n) : norlund_number(n, c.r)).get_str();
    } else {
        mpq_class x = parse_rational(x_text, c.p);
        doc["x"] = x.get_str();
        doc["value"] = (c.r == 1 ? bernoulli_poly(n, x) : norlund_poly(n, c.r, x)).get_str();
    }
    doc["precision"] = "exact";
    emit(out, doc);
    return kExitOk;
}

int run_qbernoulli(Common c, long n, bool convention_given, std::ostream& out) {
    // single numbers default to the Carlitz normalization
    if (!convention_given) c.convention = "carlitz";
    QContext ctx = c.context();
    DirichletCharacter chi = c.character();
    ExponentForm z = c.z_form();
    if (n < 0) throw UsageError("need n >= 0");
    Json doc = header("qbernoulli");
    doc["context"] = context_json(c);
    doc["n"] = n;
    doc["r"] = c.r;
    doc["chi"] = chi.to_string();
    doc["z"] = z.to_string();
    PadicNumber v;
    if (!chi.is_principal()) {
        v = c.r == 1 ? gen_q_beta_poly(ctx, n, chi, z) : multi_gen_q_beta_poly(ctx, n, c.r, chi, z);
    } else if (c.r == 1 && ctx.convention() == Convention::Carlitz) {
        v = carlitz_beta_poly(ctx, n, z);
    } else {
        v = multi_q_beta_poly(ctx, n, c.r, z);
    }
    doc["value"] = padic_json(v);
    emit(out, doc);
    return kExitOk;
}

Json series_json(const SeriesValue& v) {
    Json j;
    j["value"] = padic_json(v.value);
    j["terms_used"] = v.terms_used;
    if (v.tail_valuation_bound >= kExactPrecision)
        j["tail_valuation_bound"] = "inf";
    else
        j["tail_valuation_bound"] = v.tail_valuation_bound;
    j["converged"] = v.converged;
    return j;
}

int run_lp(const Common& c, const std::string& s_text, std::ostream& out) {
    QContext ctx = c.context();
    DirichletCharacter chi = c.character();
    SeriesOptions opt;
    opt.F = c.F;
    ExponentForm s(parse_rational(s_text, c.p));
    Json doc = header("lp");
    doc["context"] = context_json(c);
    doc["s"] = s.to_string();
    doc["r"] = c.r;
    doc["chi"] = chi.to_string();
    doc["z"] = c.z_form().to_string();
    doc["result"] = series_json(Lpq_eval(ctx, s, c.r, chi, c.z_form(), opt));
    emit(out, doc);
    return kExitOk;
}

int run_lp_at_r(const Common& c, std::ostream& out) {
    QContext ctx = c.context();
    DirichletCharacter chi = c.character();
    SeriesOptions opt;
    opt.F = c.F;
    Json doc = header("lp-at-r");
    doc["context"] = context_json(c);
    doc["r"] = c.r;
    doc["chi"] = chi.to_string();
    doc["z"] = c.z_form().to_string();
    doc["result"] = series_json(Lpq_at_r(ctx, c.r, chi, c.z_form(), opt));
    emit(out, doc);
    return kExitOk;
}

// Rows n = 0..n_max: series value at s = -n against the special value.
int run_lp_table(const Common& c, long n_max, std::ostream& out) {
    QContext ctx = c.context();
    DirichletCharacter chi = c.character();
    ExponentForm z = c.z_form();
    SeriesOptions opt;
    opt.F = c.F;
    if (n_max < 0) throw UsageError("need --n-max >= 0");
    struct Row {
        std::string series, special, error;
        long agree = 0, terms = 0;
    };
    std::vector<Row> rows(n_max + 1);
    std::mutex guard;
    long next = 0;
    auto worker = [&] {
        for (;;) {
            long n;
            {
                std::lock_guard<std::mutex> lock(guard);
                if (next > n_max) return;
                n = next++;
            }
            Row row;
            try {
                SeriesValue v = Lpq_eval(ctx, ExponentForm(-n), c.r, chi, z, opt);
                PadicNumber sp = Lpq_special(ctx, n, c.r, chi, z);
                row.series = v.value.to_string();
                row.special = sp.to_string();
                row.agree = agreement(v.value, sp);
                row.terms = v.terms_used;
            } catch (const Error& e) {
                row.error = e.kind();
            }
            rows[n] = row;
        }
    };
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < std::max(1u, c.jobs); ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (c.format == "csv") {
        out << "n,series,special,agreement_digits,terms_used,error\n";
        for (long n = 0; n <= n_max; ++n) {
            const Row& r = rows[n];
            out << n << "," << r.series << "," << r.special << "," << r.agree << "," << r.terms << ","
                << r.error << "\n";
        }
        return kExitOk;
    }
    Json doc = header("lp-table");
    doc["context"] = context_json(c);
    doc["r"] = c.r;
    doc["chi"] = chi.to_string();
    doc["z"] = z.to_string();
    Json arr = Json::array();
    for (long n = 0; n <= n_max; ++n) {
        Json j;
        j["n"] = n;
        if (rows[n].error.empty()) {
            j["series"] = rows[n].series;
            j["special"] = rows[n].special;
            j["agreement_digits"] = rows[n].agree;
            j["terms_used"] = rows[n].terms;
        } else {
            j["error"] = rows[n].error;
        }
        arr.push_back(j);
    }
    doc["rows"] = arr;
    emit(out, doc);
    return kExitOk;
}

struct KummerArgs {
    std::string theorem = "classical";
    std::string n = "1";
    long c = 1;
    long k = 1;
    long k_prime = -1;
    bool probe = false;
};

int run_kummer(const Common& cm, const KummerArgs& a, std::ostream& out) {
    std::vector<CongruenceReport> reports;
    std::vector<long> ns = parse_list(a.n);
    const std::string& t = a.theorem;
    if (t == "classical" || t == "carlitz" || t == "shiratani") {
        std::optional<DirichletCharacter> chi;
        if (cm.chi != "principal") chi = cm.character();
        for (long n : ns)
            reports.push_back(verify_classical_kummer(cm.require_p(), n, a.c, a.k, parse_kummer_form(t), chi));
    } else if (t == "difference" || t == "binomial" || t == "period") {
        QContext ctx = cm.context();
        DirichletCharacter chi = cm.character();
        VerifyOptions opt;
        opt.enforce_domain = !a.probe;
        if (t == "difference") reports = verify_thm53(ctx, chi, cm.r, ns, a.c, a.k, cm.z_form(), opt);
        if (t == "binomial") reports = verify_binom_op_thm(ctx, chi, cm.r, ns, a.c, a.k, cm.z_form(), opt);
        if (t == "period") {
            long kp = a.k_prime >= 0 ? a.k_prime : a.k + (cm.p == 2 ? 1 : cm.p - 1);
            for (long n : ns) reports.push_back(verify_thm54(ctx, chi, cm.r, n, a.c, a.k, kp, cm.z_form(), opt));
        }
    } else {
        throw UsageError("unknown --theorem " + t +
                         " (classical, carlitz, shiratani, difference, period, binomial)");
    }
    bool failed = false, undecided = false;
    Json arr = Json::array();
    for (const auto& rep : reports) {
        failed |= rep.verdict == Verdict::Fail;
        undecided |= rep.verdict == Verdict::Inconclusive;
        arr.push_back(rep.to_json());
    }
    Json doc = header("kummer-verify");
    doc["status"] = failed ? "fail" : undecided ? "inconclusive" : "pass";
    doc["reports"] = arr;
    if (!failed && undecided) {
        doc["error"] = {{"kind", "InconclusivePrecision"}, {"message", "raise --prec to decide every report"}};
        emit(out, doc);
        return kExitError;
    }
    emit(out, doc);
    return failed ? kExitCheckFailed : kExitOk;
}

int run_oracle_certify(const std::string& qs_text, long r_max, long n_max, const std::string& path,
                       const std::string& format, std::ostream& out) {
    std::vector<double> qs;
    std::stringstream ss(qs_text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            qs.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw UsageError("bad --qs list: " + qs_text);
        }
    }
    if (qs.empty()) throw UsageError("empty --qs list");
    auto rows = oracle_convention_residuals(qs, r_max, n_max);
    if (format == "csv") {
        out << "normalization,single_beta,q,worst_r,worst_n,residual\n";
        for (const auto& row : rows) {
            std::ostringstream res;
            res.precision(6);
            res << std::scientific << row.residual;
            out << row.normalization << "," << row.single_beta << "," << row.q << "," << row.worst_r << ","
                << row.worst_n << "," << res.str() << "\n";
        }
    }
    ConventionCertificate cert = oracle_resolve_conventions(qs, r_max, n_max);
    if (!path.empty()) save_certificate(cert, path);
    if (format != "csv") {
        Json doc = header("oracle-certify");
        doc["normalization"] = cert.normalization;
        doc["single_beta"] = cert.single_beta;
        doc["residuals"] = cert.residuals;
        if (!path.empty()) doc["certificate"] = path;
        emit(out, doc);
    }
    return kExitOk;
}

int run_identity_check(std::uint64_t seed, long cases, std::ostream& out) {
    if (cases < 1) throw UsageError("--cases must be positive");
    auto suites = run_core_invariants(seed, cases);
    Json doc = header("identity-check");
    doc["seed"] = seed;
    bool failed = false;
    Json arr = Json::array();
    for (const auto& s : suites) {
        Json j;
        j["suite"] = s.name;
        j["cases"] = s.cases;
        j["failures"] = s.failures;
        if (s.failures) j["first_failure"] = s.first_failure;
        failed |= s.failures > 0;
        arr.push_back(j);
    }
    doc["suites"] = arr;
    doc["status"] = failed ? "fail" : "pass";
    emit(out, doc);
    return failed ? kExitCheckFailed : kExitOk;
}

void emit_error(std::ostream& out, const std::string& kind, const std::string& message) {
    Json doc;
    doc["schema"] = "qpl/1";
    doc["error"] = {{"kind", kind}, {"message", message}};
    out << doc.dump(2) << "\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"q-deformed p-adic L-function toolkit"};
    app.require_subcommand(1);
    Common c;
    c.prec = default_precision();

    long n = 0;
    std::string x_text;
    auto* bern = app.add_subcommand("bernoulli", "exact Bernoulli, generalized and Norlund values");
    bern->add_option("--n", n, "index")->required();
    bern->add_option("--r", c.r, "order r (Norlund numbers for r > 1)");
    bern->add_option("--x", x_text, "polynomial argument");
    bern->add_option("--p", c.p, "prime (needed with --chi)");
    bern->add_option("--chi", c.chi, "character descriptor");

    auto* qb = app.add_subcommand("qbernoulli", "q-Bernoulli numbers and polynomials");
    add_context_options(qb, c);
    qb->add_option("--n", n, "index")->required();

    std::string s_text;
    auto* lp = app.add_subcommand("lp", "p-adic q-L-function at s");
    add_context_options(lp, c);
    lp->add_option("--s", s_text, "argument s (rational p-adic integer or in D)")->required();
    lp->add_option("--F", c.F, "period override");

    long n_max = 4;
    auto* table = app.add_subcommand("lp-table", "series against special values at s = -n");
    add_context_options(table, c);
    table->add_option("--n-max", n_max, "last n")->capture_default_str();
    table->add_option("--F", c.F, "period override");
    table->add_option("--format", c.format, "csv | json")->capture_default_str();
    table->add_option("--jobs", c.jobs, "worker threads")->capture_default_str();

    auto* atr = app.add_subcommand("lp-at-r", "value at s = r");
    add_context_options(atr, c);
    atr->add_option("--F", c.F, "period override");

    KummerArgs ka;
    auto* kv = app.add_subcommand("kummer-verify", "congruence verification reports");
    add_context_options(kv, c);
    kv->add_option("--theorem", ka.theorem, "classical | carlitz | shiratani | difference | period | binomial")
        ->capture_default_str();
    kv->add_option("--n", ka.n, "n or list like 1,2,3 or 1..5")->capture_default_str();
    kv->add_option("--c", ka.c, "difference step")->capture_default_str();
    kv->add_option("--k", ka.k, "difference order")->capture_default_str();
    kv->add_option("--k-prime", ka.k_prime, "second order for period checks (default k + p - 1)");
    kv->add_flag("--probe", ka.probe, "skip the z-domain check");

    std::string qs_text = "0.2,0.3", cert_path, oracle_format = "json";
    long r_max = 3, on_max = 4;
    auto* oc = app.add_subcommand("oracle-certify", "resolve the nested-sum normalization with real-q oracles");
    oc->add_option("--qs", qs_text, "real q values")->capture_default_str();
    oc->add_option("--r-max", r_max)->capture_default_str();
    oc->add_option("--n-max", on_max)->capture_default_str();
    oc->add_option("--out", cert_path, "write the certificate here");
    oc->add_option("--format", oracle_format, "json | csv")->capture_default_str();

    std::uint64_t seed = 1;
    long cases = 1000;
    auto* ic = app.add_subcommand("identity-check", "randomized core invariant suites");
    ic->add_option("--seed", seed)->capture_default_str();
    ic->add_option("--cases", cases, "cases per suite")->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }
    if (c.format != "csv" && c.format != "json") {
        err << "usage error: --format must be csv or json\n";
        return kExitUsage;
    }

    try {
        if (*bern) return run_bernoulli(c, n, x_text, out);
        if (*qb) return run_qbernoulli(c, n, qb->get_option("--convention")->count() > 0, out);
        if (*lp) return run_lp(c, s_text, out);
        if (*table) return run_lp_table(c, n_max, out);
        if (*atr) return run_lp_at_r(c, out);
        if (*kv) return run_kummer(c, ka, out);
        if (*oc) return run_oracle_certify(qs_text, r_max, on_max, cert_path, oracle_format, out);
        if (*ic) return run_identity_check(seed, cases, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const NoConsistentNormalization& e) {
        if (oracle_format != "csv") emit_error(out, e.kind(), e.what());
        else err << e.kind() << ": " << e.what() << "\n";
        return kExitError;
    } catch (const Error& e) {
        emit_error(out, e.kind(), e.what());
        return kExitError;
    } catch (const std::exception& e) {
        emit_error(out, "InternalError", e.what());
        return kExitError;
    }
    return kExitUsage;
}

}  // namespace qpl
