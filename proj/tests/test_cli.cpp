#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>
#include <map>
#include <sstream>

#include "ptl/cli.hpp"

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args, std::map<std::string, std::string> env = {}) {
    args.insert(args.begin(), "ptl");
    std::ostringstream out, err;
    const auto lookup = [&env](const std::string& name) -> std::optional<std::string> {
        auto it = env.find(name);
        if (it == env.end()) return std::nullopt;
        return it->second;
    };
    const int code = ptl::cli::run(args, out, err, lookup);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("scalar commands print bare values") {
    auto r = run({"count", "pi", "--x", "100"});
    CHECK(r.code == 0);
    CHECK(r.out == "25\n");
    CHECK(run({"count", "pi2", "--x", "10"}).out == "2\n");
    CHECK(run({"count", "nth", "--n", "25"}).out == "97\n");
    CHECK(run({"count", "tuple", "--x", "1000", "--shifts", "0,1"}).out == "1\n");
    CHECK(run({"count", "ap", "--x", "100", "--q", "3", "--a", "0"}).out == "1\n");
    CHECK(run({"arith", "factor", "--n", "175"}).out == "5^2 * 7\n");
    CHECK(run({"arith", "mobius", "--n", "30"}).out == "-1\n");
    CHECK(run({"arith", "phi", "--q", "12"}).out == "4\n");
    CHECK(run({"gpy", "poly", "--n", "3", "--shifts", "0,2,4"}).out == "105\n");
}

TEST_CASE("admissibility reports the covering prime") {
    auto r = run({"tuples", "admissible", "--shifts", "0,2,4"});
    CHECK(r.code == 0);
    CHECK(r.out == "false\np=3 covers all residues\n");
    CHECK(run({"tuples", "admissible", "--shifts", "0,2,6"}).out == "true\n");
    auto j = nlohmann::json::parse(run({"tuples", "admissible", "--shifts", "0,2,4", "--format", "json"}).out);
    CHECK(j["admissible"] == false);
    CHECK(j["covering_prime"] == 3);
}

TEST_CASE("json output") {
    auto r = run({"constants", "twin", "--cutoff", "10000000", "--format", "json"});
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(std::fabs(j["value"].get<double>() - 1.32032362) < 1e-6);
    auto e = nlohmann::json::parse(run({"euclid", "--primes", "2,3,29"}).out);
    CHECK(e["N"] == 175);
    CHECK(e["new_primes"] == nlohmann::json::array({5, 7}));
    auto m = nlohmann::json::parse(run({"analytic", "mertens", "--P", "5"}).out);
    CHECK(m["exact"] == "4/15");
    auto keys = nlohmann::ordered_json::parse(run({"analytic", "euler-product", "--z", "2", "--P", "10", "--N", "10"}).out);
    std::vector<std::string> names;
    for (auto& [k, v] : keys.items()) names.push_back(k);
    CHECK(names == std::vector<std::string>{"z", "P", "N", "sum_side", "product_side", "difference"});
}

TEST_CASE("csv output") {
    auto r = run({"sieve", "--lo", "2", "--hi", "20"});
    CHECK(r.out == "p\n2\n3\n5\n7\n11\n13\n17\n19\n");
    auto f = run({"figure", "1", "--resolution", "100"});
    CHECK(f.code == 0);
    CHECK(f.out.rfind("x,pi\n", 0) == 0);
    CHECK(f.out.find("\n100,25\n") != std::string::npos);
    auto s = run({"count", "pi", "--x", "100", "--format", "csv"});
    CHECK(s.out == "x,pi\n100,25\n");
    CHECK(f.out.find(",\n") == std::string::npos);
    auto t = run({"bv", "probe", "--x", "10000", "--thetas", "0,0.5"});
    CHECK(t.out.rfind("theta,Q,total,normalized\n0,1,", 0) == 0);
}

TEST_CASE("figure headers") {
    const std::map<int, std::string> headers{{1, "x,pi"},      {2, "x,pi"},
                                             {3, "x,pi"},      {4, "x,pi,x_over_log"},
                                             {5, "x,li,pi,x_over_log"}, {6, "x,pi2"},
                                             {7, "x,pi2"},     {8, "x,pi2"},
                                             {9, "x,pi2,li2,x_over_log2"}, {10, "x,pi2,scaled_li2"}};
    for (const auto& [id, header] : headers) {
        auto r = run({"figure", std::to_string(id), "--resolution", "20"});
        CHECK(r.code == 0);
        CHECK(r.out.substr(0, r.out.find('\n')) == header);
    }
    CHECK(run({"figure", "11"}).code == 2);
}

TEST_CASE("determinism across thread counts") {
    auto a = run({"figure", "10", "--resolution", "100", "--threads", "1"});
    auto b = run({"figure", "10", "--resolution", "100", "--threads", "8"});
    auto c = run({"figure", "10", "--resolution", "100"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);
    auto d1 = run({"gpy", "detect", "--N", "5000", "--shifts", "0,2", "--approx", "sieve", "--threads", "1"});
    auto d2 = run({"gpy", "detect", "--N", "5000", "--shifts", "0,2", "--approx", "sieve", "--threads", "7"});
    CHECK(d1.out == d2.out);
}

TEST_CASE("exit codes") {
    CHECK(run({}).code == 2);
    CHECK(run({"count"}).code == 2);
    CHECK(run({"count", "pi"}).code == 2);
    CHECK(run({"count", "pi", "--x", "abc"}).code == 2);
    CHECK(run({"bogus"}).code == 2);
    CHECK(run({"count", "pi", "--x", "10", "--threads", "0"}).code == 2);
    CHECK(run({"count", "pi", "--x", "10", "--format", "yaml"}).code == 2);
    auto dom = run({"arith", "mobius", "--n", "0"});
    CHECK(dom.code == 2);
    CHECK(dom.err.find("error:") == 0);
    auto res = run({"count", "pi", "--x", "2000000000"});
    CHECK(res.code == 3);
    CHECK(run({"tuples", "narrowest", "--k", "13"}).code == 3);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("configuration precedence: flags over environment over defaults") {
    CHECK(run({"count", "pi", "--x", "1000"}, {{"PTL_MAX_X", "100"}}).code == 3);
    CHECK(run({"count", "pi", "--x", "1000", "--max-x", "1000"}, {{"PTL_MAX_X", "100"}}).out == "168\n");
    CHECK(run({"count", "pi", "--x", "100"}, {{"PTL_THREADS", "two"}}).code == 2);
    CHECK(run({"count", "pi", "--x", "100"}, {{"PTL_THREADS", "0"}}).code == 2);
    CHECK(run({"count", "pi", "--x", "100", "--threads", "2"}, {{"PTL_THREADS", "0"}}).code == 0);
    CHECK(run({"count", "pi", "--x", "100000"}, {{"PTL_SEGMENT_SIZE", "1000"}}).out == "9592\n");
}

TEST_CASE("every subcommand runs") {
    const std::vector<std::vector<std::string>> cmds{
        {"gaps", "--lo", "2", "--hi", "100"},
        {"analytic", "li", "--x", "1000"},
        {"analytic", "lik", "--x", "1000", "--k", "2"},
        {"analytic", "series", "--x", "1000", "--m", "3"},
        {"analytic", "mobius-divisor-sum", "--P", "7"},
        {"analytic", "mobius-sum", "--N", "1000"},
        {"analytic", "harmonic", "--N", "1000"},
        {"analytic", "brun", "--x", "1000", "--variant", "pairs"},
        {"arith", "mangoldt", "--n", "8"},
        {"arith", "mangoldt-k", "--n", "15", "--k", "2"},
        {"tuples", "nu", "--shifts", "0,2,4", "--p", "3"},
        {"tuples", "singular", "--shifts", "0,2", "--cutoff", "1000"},
        {"tuples", "narrowest", "--k", "4"},
        {"tuples", "predict", "--x", "100000", "--shifts", "0,2", "--observed"},
        {"gpy", "lambda", "--n", "30", "--R", "5"},
        {"gpy", "lambda-tuple", "--n", "11", "--shifts", "0,2", "--R", "5"},
        {"gpy", "lambda-sieve", "--n", "3", "--shifts", "0,2,4", "--ell", "1", "--R", "4"},
        {"gpy", "moment1", "--N", "1000", "--shifts", "0,2", "--R", "5"},
        {"gpy", "moment2", "--N", "1000", "--shifts", "0,2", "--h0", "0"},
        {"gpy", "detect-interval", "--N", "200", "--h", "5", "--k", "2"},
        {"bv", "sum", "--x", "1000", "--Q", "10"},
        {"bv", "expected", "--x", "100000", "--q", "4"},
    };
    for (const auto& c : cmds) {
        auto r = run(c);
        INFO(c[0] << " " << c[1]);
        CHECK(r.code == 0);
        CHECK_FALSE(r.out.empty());
    }
    CHECK(run({"arith", "mangoldt", "--n", "8"}).out == "0.69314718056\n");
    CHECK(run({"gpy", "lambda", "--n", "30", "--R", "5"}).out == "0.182321556794\n");
}
