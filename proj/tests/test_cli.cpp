#include <doctest.h>

#include <cstdio>
#include <sstream>

#include "qpl/cli.hpp"
#include "qpl/q_bernoulli.hpp"

using namespace qpl;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

nlohmann::json parse(const Run& r) { return nlohmann::json::parse(r.out); }

}  // namespace

TEST_CASE("exact Bernoulli values") {
    Run r = run({"bernoulli", "--n", "4"});
    CHECK(r.code == kExitOk);
    auto j = parse(r);
    CHECK(j["schema"] == "qpl/1");
    CHECK(j["value"] == "-1/30");
    CHECK(j["precision"] == "exact");
    CHECK(parse(run({"bernoulli", "--n", "2", "--x", "1/2"}))["value"] == "-1/12");
    CHECK(parse(run({"bernoulli", "--n", "2", "--r", "2"}))["value"] == "5/6");
    CHECK(parse(run({"bernoulli", "--n", "1", "--p", "3", "--chi", "omega"}))["value"] == "-1/3");
    CHECK(parse(run({"bernoulli", "--n", "1", "--p", "5", "--chi", "omega^2"}))["value"] == "0");
}

TEST_CASE("q-Bernoulli numbers default to the Carlitz normalization") {
    Run r = run({"qbernoulli", "--p", "5", "--q", "1+p", "--prec", "12", "--n", "0"});
    REQUIRE(r.code == kExitOk);
    QContext ctx = QContext::from_descriptor(5, "1+p", 12);
    PadicNumber expected = carlitz_beta(ctx, 0);
    CHECK(agreement(expected, (ctx.q() - ctx.integer(1)) / ctx.log_q()) >= 11);
    auto v = parse(r)["value"];
    CHECK(v["precision"] == 12);
    CHECK(v["text"] == expected.to_string());
    auto pure = parse(run({"qbernoulli", "--p", "5", "--prec", "12", "--n", "0", "--convention", "pure_sum"}));
    CHECK(pure["value"]["valuation"] == "inf");
}

TEST_CASE("deterministic output") {
    std::vector<std::string> args{"lp-table", "--p", "5", "--chi", "omega", "--prec", "10", "--n-max", "3",
                                  "--format", "csv", "--jobs", "3"};
    Run a = run(args), b = run(args);
    CHECK(a.code == kExitOk);
    CHECK(a.out == b.out);
    CHECK(a.out.rfind("n,series,special,agreement_digits,terms_used,error\n", 0) == 0);
    CHECK(std::count(a.out.begin(), a.out.end(), '\n') == 5);
    Run j1 = run({"lp", "--p", "7", "--s", "-2", "--chi", "omega^3", "--prec", "10"});
    Run j2 = run({"lp", "--p", "7", "--s", "-2", "--chi", "omega^3", "--prec", "10"});
    CHECK(j1.out == j2.out);
    CHECK(parse(j1)["result"]["converged"] == true);
}

TEST_CASE("congruence reports and exit codes") {
    Run pass = run({"kummer-verify", "--theorem", "classical", "--p", "5", "--n", "2", "--c", "4", "--k", "1"});
    CHECK(pass.code == kExitOk);
    auto rep = parse(pass)["reports"][0];
    CHECK(rep["status"] == "pass");
    CHECK(rep["difference_valuation"] == 1);
    Run fail = run({"kummer-verify", "--theorem", "difference", "--p", "5", "--q", "6", "--prec", "12", "--r", "2",
                    "--z", "50", "--n", "1", "--c", "1", "--k", "1"});
    CHECK(fail.code == kExitCheckFailed);
    CHECK(parse(fail)["status"] == "fail");
    Run domain = run({"kummer-verify", "--theorem", "difference", "--p", "5", "--z", "5", "--n", "1", "--c", "4"});
    CHECK(domain.code == kExitError);
    CHECK(parse(domain)["error"]["kind"] == "DomainError");
    Run probe = run({"kummer-verify", "--theorem", "difference", "--p", "5", "--q", "6", "--prec", "12", "--chi",
                     "omega^2", "--z", "5", "--n", "1..3", "--c", "4", "--probe"});
    CHECK(probe.code == kExitOk);
    CHECK(parse(probe)["reports"].size() == 6);
    Run period = run({"kummer-verify", "--theorem", "period", "--p", "5", "--z", "25", "--n", "1", "--c", "4"});
    CHECK(period.code == kExitOk);
    CHECK(parse(period)["reports"][0]["k"] == nlohmann::json::array({1, 5}));
}

TEST_CASE("usage and computation errors") {
    CHECK(run({}).code == kExitUsage);
    CHECK(run({"bernoulli"}).code == kExitUsage);
    CHECK(run({"lp", "--s", "0"}).code == kExitUsage);
    CHECK(run({"lp", "--p", "6", "--s", "0"}).code == kExitUsage);
    CHECK(run({"lp", "--p", "5", "--s", "0", "--chi", "nonsense"}).code == kExitUsage);
    Run pole = run({"lp", "--p", "5", "--s", "1"});
    CHECK(pole.code == kExitError);
    CHECK(parse(pole)["error"]["kind"] == "PoleError");
    Run badq = run({"lp", "--p", "5", "--q", "2", "--s", "0"});
    CHECK(badq.code == kExitError);
    CHECK(parse(badq)["error"]["kind"] == "DomainError");
}

TEST_CASE("oracle certification and invariant suites") {
    Run oc = run({"oracle-certify"});
    CHECK(oc.code == kExitError);
    CHECK(parse(oc)["error"]["kind"] == "NoConsistentNormalization");
    // at r = 1 both single conventions fit, so no unique certificate exists
    Run csv = run({"oracle-certify", "--format", "csv", "--r-max", "1"});
    CHECK(csv.code == kExitError);
    CHECK(csv.out.rfind("normalization,single_beta,q,worst_r,worst_n,residual\n", 0) == 0);
    Run ic = run({"identity-check", "--seed", "7", "--cases", "50"});
    CHECK(ic.code == kExitOk);
    auto j = parse(ic);
    CHECK(j["status"] == "pass");
    CHECK(j["suites"].size() == 4);
}

TEST_CASE("precision from the environment") {
    setenv("QPL_PREC", "9", 1);
    auto j = parse(run({"qbernoulli", "--p", "7", "--n", "2"}));
    CHECK(j["context"]["precision"] == 9);
    CHECK(j["value"]["precision"] == 9);
    unsetenv("QPL_PREC");
}
