#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>

#include "eciv/io.hpp"
#include "eciv/structural.hpp"
#include "fixtures.hpp"

using namespace eciv;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
};

CliResult run_cli(const std::string& args) {
    std::string cmd = std::string(ECIV_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult result;
    char buffer[4096];
    std::size_t n;
    while ((n = fread(buffer, 1, sizeof(buffer), pipe)) > 0) result.out.append(buffer, n);
    int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

struct Workspace {
    std::filesystem::path dir;

    Workspace() {
        dir = std::filesystem::temp_directory_path() / "eciv_cli_test";
        std::filesystem::create_directories(dir);
        save_json((dir / "m_ty.json").string(), model_to_json(fixtures::ty_model()));
        save_json((dir / "m_viol.json").string(), model_to_json(fixtures::forced_value_model()));
        save_json((dir / "ty_dag.json").string(), dag_to_json(dag_of(fixtures::ty_spec())));
        save_json((dir / "m_seq.json").string(),
                  model_to_json(generate_structural_model(fixtures::sequential_spec(1))));
    }

    std::string path(const char* name) const { return (dir / name).string(); }
};

const Workspace& workspace() {
    static Workspace w;
    return w;
}

}  // namespace

TEST_CASE("eval exit codes track the verdict") {
    const auto& ws = workspace();
    CHECK(run_cli("eval --model " + ws.path("m_ty.json") + " --stmt 'T _||_ F(T)'").exit_code == 0);
    auto fails = run_cli("eval --model " + ws.path("m_ty.json") + " --stmt 'Y _||_ F(T) | T'");
    CHECK(fails.exit_code == 1);
    CHECK(fails.out.find("fails") != std::string::npos);
    CHECK(fails.out.find("0.6") != std::string::npos);
}

TEST_CASE("syntax errors exit with the usage code") {
    const auto& ws = workspace();
    auto r = run_cli("eval --model " + ws.path("m_ty.json") + " --stmt 'Y _||_'");
    CHECK(r.exit_code == 2);
}

TEST_CASE("dc reports the violated value") {
    const auto& ws = workspace();
    auto r = run_cli("dc --model " + ws.path("m_viol.json") + " --target T");
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("F(T)=1") != std::string::npos);
    CHECK(run_cli("dc --model " + ws.path("m_ty.json") + " --target T").exit_code == 0);
}

TEST_CASE("structured output parses back and carries the same verdict") {
    const auto& ws = workspace();
    auto r = run_cli("eval --model " + ws.path("m_ty.json") +
                     " --stmt 'Y _||_ F(T) | T' --format structured");
    CHECK(r.exit_code == 1);
    auto j = Json::parse(r.out);
    CHECK(j["outcome"] == "fails");
    CHECK(j["witness"]["discrepancy"].get<double>() == doctest::Approx(0.6));

    auto text = run_cli("eval --model " + ws.path("m_ty.json") + " --stmt 'Y _||_ F(T) | T'");
    CHECK(text.out.find("fails") != std::string::npos);
}

TEST_CASE("validate distinguishes clean, broken, and unreadable models") {
    const auto& ws = workspace();
    CHECK(run_cli("validate --model " + ws.path("m_ty.json")).exit_code == 0);

    auto broken = fixtures::ty_model();
    broken.regimes[RegimeAssignment{1}].probs[0] += 0.2;
    save_json(ws.path("m_broken.json"), model_to_json(broken));
    auto r = run_cli("validate --model " + ws.path("m_broken.json"));
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("normalization") != std::string::npos);

    CHECK(run_cli("validate --model " + ws.path("no_such_file.json")).exit_code == 2);
}

TEST_CASE("dsep answers graph queries") {
    const auto& ws = workspace();
    CHECK(run_cli("dsep --dag " + ws.path("ty_dag.json") + " --x 'F(T)' --y Y --z T").exit_code == 0);
    CHECK(run_cli("dsep --dag " + ws.path("ty_dag.json") + " --x 'F(T)' --y Y").exit_code == 1);
    CHECK(run_cli("dsep --dag " + ws.path("ty_dag.json") + " --x Q --y Y").exit_code == 2);
}

TEST_CASE("markov verifies the statement family from files") {
    const auto& ws = workspace();
    auto r = run_cli("markov --model " + ws.path("m_ty.json") + " --dag " + ws.path("ty_dag.json"));
    CHECK(r.exit_code == 0);
}

TEST_CASE("lemma command aggregates bindings") {
    const auto& ws = workspace();
    auto r = run_cli("lemma --model " + ws.path("m_ty.json") + " --lemma L3_PROMOTE");
    CHECK(r.exit_code == 0);
    auto viol = run_cli("lemma --model " + ws.path("m_viol.json") + " --lemma DC_DEF");
    CHECK(viol.exit_code == 1);
    CHECK(run_cli("lemma --model " + ws.path("m_ty.json") + " --lemma NO_SUCH").exit_code == 2);
}

TEST_CASE("dag-based lemmas need their dag and use it when given") {
    const auto& ws = workspace();
    auto without = run_cli("lemma --model " + ws.path("m_ty.json") + " --lemma L5_INDUCTION");
    CHECK(without.exit_code == 3);  // no admissible bindings
    auto with = run_cli("lemma --model " + ws.path("m_ty.json") + " --lemma L5_INDUCTION --dag " +
                        ws.path("ty_dag.json"));
    CHECK(with.exit_code == 0);
}

TEST_CASE("gcomp checks identification from a model file") {
    const auto& ws = workspace();
    auto r = run_cli("gcomp --model " + ws.path("m_seq.json") + " --x0 1 --x1 0 --format structured");
    CHECK(r.exit_code == 0);
    auto j = Json::parse(r.out);
    CHECK(j["pass"].get<bool>());
    CHECK(j["distance"].get<double>() <= 1e-9);
}

TEST_CASE("suite runs deterministically from the command line") {
    auto a = run_cli("suite --trials 3 --seed 9 --lemma L3_PROMOTE --format structured");
    auto b = run_cli("suite --trials 3 --seed 9 --lemma L3_PROMOTE --format structured");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    auto j = Json::parse(a.out);
    CHECK(j["lemmas"]["L3_PROMOTE"]["implication_failures"].get<long>() == 0);
}

TEST_CASE("lab searches map found and not-found onto distinct exit codes") {
    CHECK(run_cli("lab --search fathand").exit_code == 0);
    CHECK(run_cli("lab --search contextual").exit_code == 0);
    CHECK(run_cli("lab --search vi --trials 5000 --seed 2").exit_code == 1);
    CHECK(run_cli("lab --search vi --trials 50 --seed 2 --restricted").exit_code == 3);
    CHECK(run_cli("lab --search nothing").exit_code == 2);
}

TEST_CASE("unknown subcommands are usage errors") {
    CHECK(run_cli("frobnicate").exit_code == 2);
}
