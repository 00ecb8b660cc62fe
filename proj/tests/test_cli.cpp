#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hermrel/cli.hpp"
#include "json.hpp"

using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = hermrel::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

json run_json(std::vector<std::string> args) {
    args.push_back("--format");
    args.push_back("json");
    const Result r = run(args);
    REQUIRE(r.code == 0);
    return json::parse(r.out);
}

}  // namespace

TEST_CASE("classify") {
    const Result r = run({"classify", "--field", "3^2", "--matrix", "0 1 0 4 0 0 0 0 1"});
    CHECK(r.code == 0);
    CHECK(r.out.find("type C\n") != std::string::npos);
    CHECK(r.out.find("invariant 4\n") != std::string::npos);

    const json j = run_json({"classify", "--field", "3^2", "--matrix", "0 1 0 8 0 0 0 0 1"});
    CHECK(j["type"] == "C");
    CHECK(j["invariant"] == 4);
    CHECK(j["omega"] == 8);
    CHECK(j["n_points"] == 10);
    CHECK(j["transform"].size() == 9);

    const json a = run_json({"classify", "--field", "3^2", "1 0 0 0 1 0 0 0 1"});
    CHECK(a["type"] == "A");
    CHECK(a["invariant"].is_null());

    const json out = run_json({"classify", "--field", "2^2", "--matrix", "1 0 0 0 2 0 0 0 3"});
    CHECK(out["type"] == "out_of_scope");
    CHECK(out["n_points"] == 9);
    CHECK(out["transform"].is_null());
}

TEST_CASE("table1") {
    const Result r = run({"table1", "--field", "3^2", "--format", "csv"});
    CHECK(r.code == 0);
    CHECK(r.out == "type,classes,N_q,inflexions\nA,1,28,28\nB,3,4,4\nC,2,10,2\n");

    const Result r4 = run({"table1", "--field", "2^2"});
    CHECK(r4.code == 0);
    CHECK(r4.out.find("C,0,,\n") != std::string::npos);
    CHECK(r4.out.find("# note:") != std::string::npos);
}

TEST_CASE("points and inflexions") {
    const json j = run_json({"points", "--field", "2^2", "--matrix", "1 0 0 0 1 0 0 0 1"});
    CHECK(j["N"] == 9);
    CHECK(j["points"].size() == 9);
    CHECK(j["inflexions"].size() == 9);
    CHECK(j["A"] == json::array({1, 0, 0, 0, 1, 0, 0, 0, 1}));

    const json i = run_json({"inflexions", "--field", "3^2", "--matrix", "0 1 0 2 0 0 0 0 1"});
    CHECK(i["count"] == 4);

    const Result csv = run({"points", "--field", "3^2", "--matrix", "0 1 0 4 0 0 0 0 1", "--format", "csv"});
    CHECK(csv.out.rfind("x,y,z,inflexion\n", 0) == 0);
    CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 11);
}

TEST_CASE("equiv") {
    const json j = run_json({"equiv", "--field", "3^2", "--matrix", "0 1 0 4 0 0 0 0 1", "--other", "0 1 0 8 0 0 0 0 1"});
    CHECK(j["equivalent"] == true);
    CHECK(j["witness"].size() == 9);
    const json n = run_json({"equiv", "--field", "2^2", "1 0 0 0 1 0 0 0 2", "1 0 0 0 1 0 0 0 3", "--bruteforce"});
    CHECK(n["equivalent"] == false);
    CHECK(n["method"] == "bruteforce");
    CHECK(run({"equiv", "--field", "3^2", "1 0 0 0 1 0 0 0 1", "1 0 0 0 1 0 0 0 1", "--bruteforce"}).code == 2);
}

TEST_CASE("solve") {
    const json s = run_json({"solve", "semilinear", "--field", "3^2", "--alpha", "2", "--beta", "0"});
    CHECK(s["roots"] == json::array({0, 1, 2}));
    const json k = run_json({"solve", "kummer", "--field", "3^2", "--beta", "4"});
    CHECK(k["count"] == 0);
    const json a = run_json({"solve", "artin-schreier", "--field", "3^2", "--beta", "3"});
    CHECK(a["count"] == 3);
    CHECK(run({"solve", "kummer", "--field", "3^2", "--beta", "0"}).code == 2);
    CHECK(run({"solve", "semilinear", "--field", "3^2", "--beta", "1"}).code == 2);
    CHECK(run({"solve", "kummer", "--field", "3^2", "--beta", "9"}).code == 2);
}

TEST_CASE("field-info") {
    const json j = run_json({"field-info", "--field", "2^2", "--tables", "--element", "0"});
    CHECK(j["modulus_code"] == 7);
    CHECK(j["generator"] == 2);
    CHECK(j["element"]["norm_of_zero"] == true);
    CHECK(j["tables"]["frobenius"] == json::array({0, 1, 3, 2}));
    const Result t = run({"field-info", "--field", "3^2"});
    CHECK(t.out.find("modulus t^2 + 1\n") != std::string::npos);
}

TEST_CASE("sweep") {
    const std::vector<std::string> base{"sweep", "bounds", "--field", "3^2", "--samples", "400", "--seed", "5"};
    auto with = [&](std::vector<std::string> extra) {
        auto v = base;
        v.insert(v.end(), extra.begin(), extra.end());
        return run(v);
    };
    const Result one = with({"--workers", "1", "--format", "json"});
    const Result four = with({"--workers", "4", "--format", "json"});
    CHECK(one.code == 0);
    CHECK(one.out == four.out);
    const json j = json::parse(one.out);
    CHECK(j["totals"]["curves"] == 400);
    CHECK(j.find("timing") == j.end());
    CHECK(json::parse(with({"--format", "json", "--timing"}).out).contains("timing"));
    CHECK(with({}).out == with({}).out);

    const std::string path = "hermrel_test_plan.txt";
    {
        std::ofstream plan(path);
        plan << "field=2^2\nmode=exhaustive\nchecks=congruence\n";
    }
    const Result p = run({"sweep", "congruence", "--plan", path, "--format", "json"});
    CHECK(p.code == 0);
    const json pj = json::parse(p.out);
    CHECK(pj["mode"] == "exhaustive");
    CHECK(pj["totals"]["curves"] == 60480);
    std::remove(path.c_str());

    CHECK(run({"sweep", "congruence", "--field", "3^2", "--exhaustive"}).code == 2);
    CHECK(run({"sweep", "parity"}).code == 2);
}

TEST_CASE("usage errors") {
    CHECK(run({}).code == 2);
    CHECK(run({"points"}).code == 2);
    CHECK(run({"points", "--field", "4^2", "--matrix", "1 0 0 0 1 0 0 0 1"}).code == 2);
    const Result singular = run({"points", "--matrix", "1 0 0 0 1 0 0 0 0"});
    CHECK(singular.code == 2);
    CHECK(singular.err.find("SingularMatrix") != std::string::npos);
    CHECK(run({"classify", "--matrix", "1 0 0 0 1 0 0 0 1", "--format", "xml"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("verify-all at q = 4") {
    const json j = run_json({"verify-all", "--field", "2^2", "--samples", "2000"});
    CHECK(j["passed"] == true);
    CHECK(j["suites"].size() == 9);
}

TEST_CASE("installed binary") {
    const char* bin = std::getenv("HERMREL_BIN");
    if (!bin) return;
    const std::string cmd = std::string(bin) + " points --field 2^2 --matrix \"1 0 0 0 1 0 0 0 1\"";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe);
    std::string out;
    char buf[256];
    while (fgets(buf, sizeof buf, pipe)) out += buf;
    const int status = pclose(pipe);
    CHECK(status == 0);
    CHECK(out.find("N 9\n") != std::string::npos);
}
