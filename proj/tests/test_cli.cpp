#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <abelkit/io.hpp>

#include "cli.hpp"

using namespace abelkit;
using io::json;

namespace
{

struct result {
    int code;
    std::string out;
    std::string err;

    [[nodiscard]] json report() const
    {
        return json::parse(out);
    }
};

result run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

const std::string gamma_vf = R"({"vf": {"P": "v", "Q": "-4*x^2*v - x^5"}})";
const std::string tan_riccati = R"({"kind": "riccati", "coeffs": {"A0": "1", "A2": "1"}})";

} // namespace

TEST_CASE("hierarchy subcommand")
{
    const auto r = run({"hierarchy", "--n", "2", "--p", "1,0,0,0"});
    REQUIRE(r.code == 0);
    const auto j = r.report();
    CHECK(j["jet"]["text"] == "u2 + 4*x^2*u1 + x^5");
    CHECK(j["equation"] == "u2 + 4*x^2*u1 + x^5 = 0");
    const json want = json::parse(R"([
        {"coeff": "1", "powers": [0, 0, 1]},
        {"coeff": "4", "powers": [2, 1, 0]},
        {"coeff": "1", "powers": [5, 0, 0]}])");
    CHECK(j["jet"]["monomials"] == want);

    const auto symbolic = run({"hierarchy", "--n", "1", "--p", "t,0,0"});
    REQUIRE(symbolic.code == 0);
    CHECK(symbolic.report()["jet"].is_null());
    CHECK(run({"hierarchy", "--n", "2", "--p", "1,0"}).code == 3);
}

TEST_CASE("classify subcommand")
{
    const auto r = run({"classify", R"({"kind":"abel1","coeffs":{"A0":"0","A1":"t","A2":"0","A3":"t^2"}})"});
    REQUIRE(r.code == 0);
    CHECK(r.report() == json{{"class", "Bernoulli"}});

    const auto two = run({"classify", R"({"kind":"abel1","coeffs":{"A0":"3*t-2","A1":"3*t","A2":"3","A3":"1"}})"});
    REQUIRE(two.code == 0);
    CHECK(two.report() == json{{"class", "SolvableTwoDim"}, {"mu", "1"}});
}

TEST_CASE("multiplier subcommand on the second-order Abel field")
{
    const auto r = run({"multiplier", gamma_vf});
    REQUIRE(r.code == 0);
    const auto j = r.report();
    REQUIRE(j["multipliers"].size() == 2u);
    CHECK(j["multipliers"][0]["nu"] == "-4");
    CHECK(j["multipliers"][0]["multiplier"]["factors"][0]["base"]["text"] == "x^3 + v");
    CHECK(j["multipliers"][1]["nu"] == "-4/3");
    CHECK(j["multipliers"][1]["multiplier"]["factors"][0]["base"]["text"] == "1/3*x^3 + v");
    for (const auto &m : j["multipliers"]) {
        CHECK(m["residual"].get<double>() < 1e-12);
    }
    CHECK(j["divergence"]["text"] == "-4*x^2");
}

TEST_CASE("darboux and lagrangian subcommands")
{
    const auto d = run({"darboux", gamma_vf, "--max-bdeg", "3"});
    REQUIRE(d.code == 0);
    REQUIRE(d.report()["pairs"].size() == 2u);
    CHECK(d.report()["pairs"][1]["cofactor"]["text"] == "-3*x^2");

    const auto l = run({"lagrangian", gamma_vf});
    REQUIRE(l.code == 0);
    const auto j = l.report();
    REQUIRE(j["lagrangians"].size() == 2u);
    CHECK(j["lagrangians"][0]["lagrangian"]["c"] == "1/6");
    CHECK(j["lagrangians"][0]["lagrangian"]["rho"] == "-2");
    CHECK(j["lagrangians"][1]["lagrangian"]["rho"] == "2/3");
    for (const auto &item : j["lagrangians"]) {
        CHECK(item["euler_lagrange_residual"].get<double>() < 1e-10);
        CHECK(item["energy_drift"].get<double>() < 1e-6);
    }
    CHECK(run({"lagrangian", R"({"P": "x", "Q": "v"})"}).code == 3);
}

TEST_CASE("solve subcommand")
{
    const std::string bern = R"({"kind":"abel1","coeffs":{"A1":"-1","A3":"-1"}})";
    const auto r = run({"solve", bern, "--t0", "0", "--x0", "1", "--tf", "2"});
    REQUIRE(r.code == 0);
    CHECK(r.report()["path"] == "bernoulli");
    CHECK(r.report()["residual"].get<double>() < 1e-6);

    const std::string generic = R"js({"kind":"abel1","coeffs":{"A0":"sin(t)","A1":"t","A2":"1","A3":"-1"}})js";
    const std::string csv = "solve_cli_test.csv";
    const auto g = run({"solve", generic, "--t0", "0", "--x0", "0.5", "--tf", "2", "--emit-csv", csv});
    REQUIRE(g.code == 0);
    CHECK(g.report()["path"] == "integrate_ode");
    CHECK(g.report()["status"] == "completed");
    std::ifstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,x");
    in.close();
    std::remove(csv.c_str());

    const std::string linear = R"js({"kind":"riccati","coeffs":{"A0":"cos(t)","A1":"-1"}})js";
    CHECK(run({"solve", linear, "--t0", "0", "--x0", "1", "--tf", "3"}).report()["path"] == "linear");

    // An unreachable tolerance reports and exits with 4.
    const auto strict = run({"solve", bern, "--t0", "0", "--x0", "1", "--tf", "2", "--tol", "1e-30"});
    CHECK(strict.code == 4);
    CHECK(strict.report().contains("residual"));
}

TEST_CASE("superpose and sl2 subcommands")
{
    const auto r = run({"superpose", tan_riccati, "--k", "0.37", "--t0", "0", "--x1", "0", "--x2", "0.5", "--x3", "-0.5",
                        "--tf", "1.2"});
    REQUIRE(r.code == 0);
    CHECK(r.report()["residual"].get<double>() < 1e-6);
    CHECK(r.report()["direct_difference"].get<double>() < 1e-6);

    const auto inf = run({"superpose", tan_riccati, "--k", "inf", "--t0", "0", "--x1", "0.2", "--x2", "0.5", "--x3",
                          "-0.5", "--tf", "1"});
    REQUIRE(inf.code == 0);
    CHECK(inf.report()["x_initial"].get<double>() == doctest::Approx(0.2));

    CHECK(run({"superpose", tan_riccati, "--k", "1", "--t0", "0", "--x1", "0", "--x2", "0", "--x3", "1", "--tf", "1"})
              .code
          == 3);
    CHECK(run({"superpose", tan_riccati, "--k", "abc", "--t0", "0", "--x1", "0", "--x2", "1", "--x3", "2", "--tf", "1"})
              .code
          == 1);

    const auto s = run({"sl2", tan_riccati, "--matrix", "1,0,0,1"});
    REQUIRE(s.code == 0);
    CHECK(s.report()["kind"] == "riccati");
    CHECK(run({"sl2", tan_riccati, "--matrix", "2,0,0,1"}).code == 3);
    CHECK(run({"sl2", tan_riccati, "--matrix", "1,0,1"}).code == 1);
}

TEST_CASE("equation subcommands")
{
    const std::string eq = R"({"kind":"abel1","coeffs":{"A0":"1","A1":"t","A2":"3","A3":"1"}})";
    const auto c = run({"canonicalize", eq});
    REQUIRE(c.code == 0);
    CHECK(c.report()["form"] == "CanonicalII");
    CHECK(c.report()["equation"]["coeffs"]["A2"] == "0");
    CHECK(run({"canonicalize", R"({"kind":"abel1","coeffs":{"A0":"1","A1":"t"}})"}).code == 3);

    const auto inv = run({"invariants", eq, "--phi5-variant", "timesphi3"});
    REQUIRE(inv.code == 0);
    CHECK(inv.report()["phi5_variant"] == "timesphi3");
    CHECK(run({"invariants", eq, "--phi5-variant", "other"}).code == 1);

    const auto tr = run({"transform", eq, "--alpha", "1", "--beta", "0"});
    REQUIRE(tr.code == 0);
    CHECK(tr.report()["coeffs"]["A3"] == "1");

    const auto conv = run({"convert", R"({"kind":"abel2","coeffs":{"f":"0","B0":"1/t^3","B1":"-1"}})"});
    REQUIRE(conv.code == 0);
    const auto first = io::abel_from_json(conv.report());
    for (const double t : {0.5, 1.3, 2.2}) {
        CHECK(eval_scalar(first.coeff(2), t) == doctest::Approx(1));
        CHECK(eval_scalar(first.coeff(3), t) == doctest::Approx(-1 / (t * t * t)));
        CHECK(eval_scalar(first.coeff(0), t) == doctest::Approx(0));
        CHECK(eval_scalar(first.coeff(1), t) == doctest::Approx(0));
    }

    const auto li = run({"lienard", "--f", "x", "--g", "x^2"});
    REQUIRE(li.code == 0);
    CHECK(li.report()["coeffs"]["A2"] == "t");
}

TEST_CASE("normalizer subcommand")
{
    const auto r = run({"normalizer", "--span", "abel", "--max-deg", "4"});
    REQUIRE(r.code == 0);
    CHECK(r.report()["dim"] == 2);
    CHECK(r.report()["basis"][0]["coeffs"] == json::parse(R"(["1"])"));
    CHECK(r.report()["basis"][1]["coeffs"] == json::parse(R"(["0", "1"])"));
    CHECK(run({"normalizer", "--span", R"({"basis": [["0", "1"], ["0", "2"]]})", "--max-deg", "3"}).code == 3);
}

TEST_CASE("usage and input errors")
{
    CHECK(run({}).code == 1);
    CHECK(run({"hierarchy", "--n", "2"}).code == 1);
    CHECK(run({"classify", "/nonexistent/eq.json"}).code == 2);
    CHECK(run({"classify", "{\"kind\":"}).code == 2);
    CHECK(run({"classify", R"({"kind":"abel1","coeffs":{"A0":"sin("}})"}).code == 2);
    CHECK(run({"classify", R"({"kind":"abel9","coeffs":{}})"}).code == 2);
    CHECK(run({"darboux", R"({"P":"t","Q":"v"})"}).code == 2);
    CHECK(run({"darboux", R"({"P":"0","Q":"0"})"}).code == 2);
    const auto help = run({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("hierarchy") != std::string::npos);
}

TEST_CASE("output is deterministic and the seed can be overridden")
{
    const std::vector<std::string> job{"multiplier", gamma_vf};
    const auto a = run(job);
    const auto b = run(job);
    CHECK(a.out == b.out);

    auto seeded = job;
    seeded.insert(seeded.begin(), {"--seed", "12345"});
    const auto c = run(seeded);
    REQUIRE(c.code == 0);
    CHECK(c.report()["multipliers"] == a.report()["multipliers"]);

    ::setenv("ABELKIT_SEED", "7", 1);
    const auto d = run({"lagrangian", gamma_vf});
    ::setenv("ABELKIT_SEED", "not-a-number", 1);
    const auto e = run({"lagrangian", gamma_vf});
    ::unsetenv("ABELKIT_SEED");
    const auto f = run({"lagrangian", gamma_vf});
    CHECK(d.code == 0);
    CHECK(e.code == 1);
    CHECK(d.out != f.out);
}

TEST_CASE("floats are printed with 17 significant digits and keys sorted")
{
    const json j{{"b", 0.1}, {"a", 1}, {"c", std::numeric_limits<double>::infinity()}};
    CHECK(io::dump(j) == "{\n  \"a\": 1,\n  \"b\": 0.10000000000000001,\n  \"c\": null\n}\n");
}
