#include "coarsefield/io.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>
#include <unistd.h>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
    json report;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(COARSEFIELD_CLI) + " " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    REQUIRE(pipe);
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int status = ::pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.report = json::parse(r.out, nullptr, false);
    return r;
}

class Workspace {
public:
    Workspace() : dir_(fs::temp_directory_path() / ("coarsefield_cli_" + std::to_string(::getpid()))) {
        fs::create_directories(dir_);
    }
    ~Workspace() { fs::remove_all(dir_); }

    std::string put(const std::string& name, const std::string& text) {
        std::ofstream(dir_ / name) << text;
        return (dir_ / name).string();
    }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

private:
    fs::path dir_;
};

const char* line2 = R"({"points":["a","b"],"dist":[[0,1],[1,0]]})";
const char* point = R"({"points":["p"],"dist":[[0]]})";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors exit with 2") {
    CHECK(run("").code == 2);
    CHECK(run("metric").code == 2);
    CHECK(run("metric frobnicate").code == 2);
    CHECK(run("metric validate").code == 2);
    const auto missing = run("metric validate --space /nonexistent/space.json");
    CHECK(missing.code == 2);
    CHECK(missing.report.at("status") == "error");
}

TEST_CASE("metric validate passes and fails") {
    Workspace w;
    const auto good = run("metric validate --space " + w.put("good.json", line2));
    CHECK(good.code == 0);
    CHECK(good.report.at("status") == "pass");
    const auto bad = run("metric validate --space " +
                         w.put("bad.json", R"({"points":["a","b","c"],"dist":[[0,1,5],[1,0,1],[5,1,0]]})"));
    CHECK(bad.code == 1);
    CHECK(bad.report.at("status") == "fail");
}

TEST_CASE("glue, compose and derive chain through files") {
    Workspace w;
    const auto x = w.put("x.json", line2), y = w.put("y.json", point);
    const auto cross = w.put("cross.json", "[[2],[3]]");
    const auto g = run("--out " + w.path("d.json") + " metric glue --left " + x + " --right " + y + " --cross " + cross);
    REQUIRE(g.code == 0);
    const auto d = coarsefield::io::read_json_file(w.path("d.json"));
    CHECK(d.at("cross") == json::parse("[[[2,1]],[[3,1]]]"));

    const auto der = run("metric derive --glue " + w.path("d.json"));
    CHECK(der.code == 0);

    // the glue with its adjoint: X -> Y -> X
    const auto adj = run("--out " + w.path("adj.json") + " metric glue --left " + y + " --right " + x +
                         " --cross " + w.put("crossT.json", "[[2,3]]"));
    REQUIRE(adj.code == 0);
    const auto c = run("--out " + w.path("c.json") + " metric compose --left " + w.path("d.json") + " --right " +
                       w.path("adj.json"));
    REQUIRE(c.code == 0);
    const auto comp = coarsefield::io::read_json_file(w.path("c.json"));
    // (d* d)(a, b') = min over p of d(a, p) + d(b, p) = 5
    CHECK(comp.at("cross")[0][1] == json::array({5, 1}));
}

TEST_CASE("a glue without a gap is rejected") {
    Workspace w;
    const auto r = run("metric glue --left " + w.put("x.json", line2) + " --right " + w.put("y.json", point) +
                       " --cross " + w.put("c.json", "[[0],[1]]"));
    CHECK(r.code == 1);
    CHECK(r.report.at("status") == "fail");
}

TEST_CASE("topology on the three-chain") {
    Workspace w;
    const auto p = w.put("chain.json", R"({"elements":["0","1","2"],"leq":[["0","1"],["1","2"]]})");
    const auto s = run("topology spectrum --poset " + p);
    REQUIRE(s.code == 0);
    CHECK(s.report.at("count") == 3);
    const auto sep = run("topology separate --poset " + p + " --a 0 --b 2");
    CHECK(sep.code == 0);
    const auto cover = run("topology refute-cover --poset " + w.put("anti.json", R"({"elements":["a","b","c"],"leq":[]})") +
                           " --cover a,b");
    CHECK(cover.code == 0);
    CHECK(cover.report.dump().find("\"c\"") != std::string::npos);
}

TEST_CASE("dot export writes a file") {
    Workspace w;
    const auto p = w.put("chain.json", R"({"elements":["0","1"],"leq":[["0","1"]]})");
    const auto r = run("--out " + w.path("h.dot") + " export dot --poset " + p);
    REQUIRE(r.code == 0);
    std::ifstream in(w.path("h.dot"));
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(text.rfind("digraph", 0) == 0);
}

TEST_CASE("corona commands") {
    Workspace w;
    const auto b3 = run("--out " + w.path("b3.json") + " corona bseq --k 3");
    REQUIRE(b3.code == 0);
    const auto phi = run("corona phi --matrix " + w.path("b3.json"));
    CHECK(phi.code == 0);
    CHECK(phi.report.at("value") == 1);
    CHECK(phi.report.at("N") == 3);
    const auto esc = run("corona escape --matrix " + w.path("b3.json"));
    CHECK(esc.code == 0);
    const auto perm = w.put("perm.json", R"({"entries":[{"i":1,"j":2,"class":"I"},{"i":2,"j":1,"class":"I"}]})");
    const auto perm3 = w.put("perm3.json",
                             R"({"entries":[{"i":1,"j":2,"class":"I"},{"i":2,"j":1,"class":"I"},{"i":3,"j":3,"class":"I"}]})");
    const auto leq = run("corona leq --left " + perm + " --right " + perm3);
    CHECK(leq.code == 3);
    CHECK(leq.report.at("status") == "inconclusive");
    const auto bad = run("corona validate --matrix " +
                         w.put("bad.json", R"({"entries":[{"i":1,"j":1,"class":"I"},{"i":1,"j":2,"class":"I"}]})"));
    CHECK(bad.code == 1);
}

TEST_CASE("grid stabilization from a file") {
    Workspace w;
    const auto f = w.put("f.json", R"({"grid":[0,[1,2],1],"values":[[[1]],[[0.95]],[[0.9]]],"modulus":1})");
    const auto r = run("field stabilize --field " + f + " --anchor 0 --eps 0.2");
    REQUIRE(r.code == 0);
    CHECK(r.report.at("status") == "pass");
    const auto coarse = run("field stabilize --field " + f + " --anchor 0 --eps 0.01");
    CHECK(coarse.code == 1);
    const auto pre = run("field stabilize --field " + f + " --anchor 2 --eps 0.2");
    CHECK(pre.code == 2);
}

TEST_CASE("selftest runs clean") {
    const auto r = run("selftest --seed 7 --rounds 5");
    CHECK(r.code == 0);
    CHECK(r.report.at("status") == "pass");
}

TEST_CASE("text format prints a summary line") {
    const auto r = run("--format text corona bseq --k 2");
    CHECK(r.code == 0);
    CHECK_FALSE(r.out.empty());
}

}
