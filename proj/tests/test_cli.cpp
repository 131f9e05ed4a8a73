#include <catch_amalgamated.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
};

/// Runs the CLI with the given argument string; stderr is discarded.
Run run(const std::string& args) {
    std::string cmd = std::string(PBAMB_CLI) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe);
    std::string out;
    std::array<char, 4096> buf{};
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe))
        out.append(buf.data(), n);
    int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

/// Fresh scratch directory per test case.
struct Scratch {
    fs::path dir;
    explicit Scratch(const std::string& tag) {
        dir = fs::temp_directory_path() / ("pbamb_cli_" + tag + "_" + std::to_string(::getpid()));
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
    std::string operator()(const std::string& name) const { return (dir / name).string(); }
};

bool has(const std::string& text, const std::string& piece) { return text.find(piece) != std::string::npos; }

}  // namespace

TEST_CASE("gadget then prob prints the exact value") {
    Scratch s("prob");
    REQUIRE(run("gadget fig-a " + s("fa.aut")).code == 0);
    Run r = run("prob " + s("fa.aut") + " --prefix a,a,b --period '$'");
    CHECK(r.code == 0);
    CHECK(r.out == "5/8\n");
    CHECK(run("member " + s("fa.aut") + " --prefix a,a,b --period '$'").out == "true\n");
    CHECK(run("member " + s("fa.aut") + " --semantics threshold --lambda 1/2 --prefix a,b --period '$'").out ==
          "false\n");
}

TEST_CASE("classify reports the pattern facts") {
    Scratch s("classify");
    REQUIRE(run("gadget p-lambda --lambda 1/2 " + s("pl.aut")).code == 0);
    Run r = run("classify " + s("pl.aut"));
    CHECK(r.code == 0);
    CHECK(has(r.out, "EDA_F: yes"));
    CHECK(has(r.out, "class: uncountable"));

    REQUIRE(run("gadget fig-a " + s("fa.aut")).code == 0);
    Run f = run("classify " + s("fa.aut"));
    CHECK(has(f.out, "IDA: yes"));
    CHECK(has(f.out, "IDA_F: no"));
    CHECK(has(f.out, "EDA: no"));
    CHECK(has(f.out, "class: polynomial"));
}

TEST_CASE("translate writes automata and reports violated preconditions") {
    Scratch s("translate");
    REQUIRE(run("gadget p-lambda --lambda 1/2 " + s("pl.aut")).code == 0);
    CHECK(run("translate --mode pos2nba " + s("pl.aut") + " " + s("out.aut")).code == 3);
    CHECK_FALSE(fs::exists(s("out.aut")));

    REQUIRE(run("gadget fig-a " + s("fa.aut")).code == 0);
    REQUIRE(run("translate --mode pos2nba " + s("fa.aut") + " " + s("nba.aut")).code == 0);
    CHECK(run("member " + s("nba.aut") + " --prefix b --period '$'").out == "true\n");
    CHECK(run("member " + s("nba.aut") + " --period a").out == "false\n");
    Run e = run("check empty " + s("nba.aut"));
    CHECK(e.code == 0);
    CHECK(has(e.out, "empty: no"));
    CHECK(has(e.out, "witness: "));
}

TEST_CASE("exit codes") {
    Scratch s("codes");
    CHECK(run("gadget p-lambda --lambda 0.5 " + s("x.aut")).code == 1);
    CHECK(run("no-such-verb").code == 1);
    CHECK(run("prob " + s("missing.aut") + " --period a").code == 2);
    {
        std::ofstream bad(s("bad.aut"));
        bad << "automaton broken\ntype: pba\nstates: q\n";
    }
    CHECK(run("classify " + s("bad.aut")).code == 2);
    REQUIRE(run("gadget fig-a " + s("fa.aut")).code == 0);
    CHECK(run("translate --mode th2gnba --lambda 1/2 " + s("fa.aut") + " -").code == 1);
    CHECK(run("translate --mode th2gnba --lambda 1/2 --k 2 " + s("fa.aut") + " -").code == 3);
}

TEST_CASE("identical invocations give identical output") {
    Scratch s("determinism");
    REQUIRE(run("gadget fig-a " + s("fa.aut")).code == 0);
    for (const std::string& args :
         {"sample " + s("fa.aut") + " --prefix a,b --period '$' --runs 20000 --horizon 50 --seed 4",
          "classify " + s("fa.aut"), "supports " + s("fa.aut"), "epsilon " + s("fa.aut") + " --lambda 1/2 --k 2",
          "translate --mode as2dba-flat " + s("fa.aut") + " -"}) {
        Run a = run(args), b = run(args);
        CHECK(a.code == 0);
        CHECK_FALSE(a.out.empty());
        CHECK(a.out == b.out);
    }
    Run smp = run("sample " + s("fa.aut") + " --prefix a,b --period '$' --runs 1000 --horizon 50 --seed 1");
    CHECK(has(smp.out, "approx"));
}

TEST_CASE("gadget output round-trips through translate") {
    Scratch s("roundtrip");
    REQUIRE(run("gadget p-tilde-lambda --lambda 1/3 " + s("pt.aut")).code == 0);
    REQUIRE(run("translate --mode complement-pwa " + s("pt.aut") + " " + s("c.aut")).code == 0);
    REQUIRE(run("translate --mode complement-pwa " + s("c.aut") + " " + s("cc.aut")).code == 0);
    for (const char* period : {"a", "b", "a,b", "a,a,b"}) {
        std::string w = std::string(" --period ") + period;
        CHECK(run("prob " + s("pt.aut") + w).out == run("prob " + s("cc.aut") + w).out);
    }
}
