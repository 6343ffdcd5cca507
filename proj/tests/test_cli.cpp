#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <json.hpp>
#include <string>

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run_with_redirect(const std::string& args, const char* redirect) {
    std::string cmd = std::string(std::getenv("POLYD_BIN")) + " " + args + " " + redirect;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf;
    size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
    int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

RunResult run(const std::string& args) { return run_with_redirect(args, "2>/dev/null"); }
RunResult run_merged(const std::string& args) { return run_with_redirect(args, "2>&1"); }

std::string fixture(const char* name) {
    return std::string(std::getenv("POLYD_FIXTURES")) + "/" + name;
}

}  // namespace

TEST_CASE("classify end to end") {
    auto r = run("classify --network " + fixture("four_cell_nonregular.json") +
                 " --partition 1,1,-1,-1 --out json");
    CHECK(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["flags"]["invariant_under_W"] == true);
    CHECK(j["flags"]["invariant_under_L"] == false);
    CHECK(j["flags"]["even_odd_balanced"] == true);
    CHECK(j["schema_version"] == 1);
    CHECK(j["block_conditions_W"]["pass"] == true);
    CHECK(j["block_conditions_L"]["pass"] == false);
}

TEST_CASE("lattice end to end") {
    auto r = run("lattice --network " + fixture("four_cell.json") +
                 " --matrix both --method both --out json");
    CHECK(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.out);
    REQUIRE(j.is_array());
    REQUIRE(j.size() == 2);
    CHECK(j[0]["matrix"] == "W");
    CHECK(j[0]["count"] == 12);
    CHECK(j[1]["matrix"] == "L");
    CHECK(j[1]["count"] == 13);
    CHECK(j[0]["warnings"].empty());
    CHECK(j[1]["warnings"].empty());
}

TEST_CASE("usage errors exit with code 2") {
    auto r = run("classify --network " + fixture("four_cell.json") + " --partition 1,1");
    CHECK(r.exit_code == 2);
    auto rerr = run_merged("classify --network " + fixture("four_cell.json") + " --partition 1,1");
    CHECK(rerr.out.find("partition length mismatch") != std::string::npos);

    auto r2 = run("frobnicate");
    CHECK(r2.exit_code == 2);

    auto r3 = run("classify --network /nonexistent.json --partition 1");
    CHECK(r3.exit_code == 2);

    // brute force refuses oversized networks with a partition-count estimate
    auto r4 = run_merged("lattice --network " + fixture("four_cell.json") + " --max-n 3");
    CHECK(r4.exit_code == 2);
    CHECK(r4.out.find("116 tagged partitions") != std::string::npos);

    // unknown quotient kind is a usage error, not a verification failure
    auto r5 = run("quotient --network " + fixture("four_cell.json") +
                  " --partition 1,1,2,2 --kind bogus");
    CHECK(r5.exit_code == 2);
}

TEST_CASE("partition argument accepts the JSON form and --jobs works") {
    auto r = run("classify --network " + fixture("four_cell.json") +
                 " --partition {\\\"labels\\\":[1,1,-1,1]} --out json");
    CHECK(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["flags"]["odd_balanced"] == true);

    auto a = run("lattice --network " + fixture("four_cell.json") + " --matrix W --out json");
    auto b = run("--jobs 4 lattice --network " + fixture("four_cell.json") + " --matrix W --out json");
    CHECK(b.exit_code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("verification failures exit with code 1") {
    // a balanced quotient of a partition that is not balanced
    auto r = run("quotient --network " + fixture("three_cell_chain.json") +
                 " --partition 1,1,2 --kind balanced");
    CHECK(r.exit_code == 1);

    // expected escape that does not happen
    auto r2 = run("simulate --network " + fixture("three_cell_chain.json") +
                  " --partition 1,1,2 --class I_G0 --trials 3 --steps 2000 --expect-fail");
    CHECK(r2.exit_code == 1);

    // and one that does
    auto r3 = run("simulate --network " + fixture("three_cell_chain.json") +
                  " --partition 1,1,2 --class I_G --trials 20 --steps 2000 --expect-fail");
    CHECK(r3.exit_code == 0);
}

TEST_CASE("restriction mode end to end") {
    auto r = run("simulate --network " + fixture("three_cell_regular.json") +
                 " --partition 1,-1,-1 --class I_Godd --mode restriction --steps 2000 --tol 1e-6");
    CHECK(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["pass"] == true);
    CHECK(j["max_deviation"].get<double>() <= 1e-6);
}

TEST_CASE("json output is byte-for-byte deterministic") {
    std::string args = "report --network " + fixture("three_cell_regular.json") + " --out json";
    auto a = run(args), b = run(args);
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);

    std::string sim = "simulate --network " + fixture("three_cell_regular.json") +
                      " --partition 1,-1,-1 --class I_Godd --trials 2 --steps 1000";
    CHECK(run(sim).out == run(sim).out);
}

TEST_CASE("laplacian output is itself a network file") {
    auto r = run("laplacian --network " + fixture("three_cell_regular.json") + " --out json");
    CHECK(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["n"] == 3);
    CHECK(j["weights"][0][0] == "2");
    CHECK(j["weights"][0][1] == "-1");
}

TEST_CASE("every fixture loads and classifies") {
    for (const char* name :
         {"four_cell.json", "four_cell_nonregular.json", "five_cell_mixed_weights.json",
          "six_cell_bidirectional_a.json", "six_cell_bidirectional_b.json", "path6.json",
          "eight_cell_regular.json", "four_cell_fractional.json", "three_cell_regular.json",
          "three_cell_chain.json", "six_cell_feedforward.json", "six_cell_coupled_pairs.json",
          "four_cell_negative.json"}) {
        auto r = run("report --network " + fixture(name) + " --out json");
        CHECK(r.exit_code == 0);
    }
}

TEST_CASE("quotient and hasse dot output") {
    auto r = run("quotient --network " + fixture("six_cell_feedforward.json") +
                 " --partition 1,1,1,2,2,3 --kind exo --out dot");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("digraph") != std::string::npos);

    auto r2 = run("lattice --network " + fixture("three_cell_regular.json") +
                  " --matrix W --out dot");
    CHECK(r2.exit_code == 0);
    CHECK(r2.out.find("digraph") != std::string::npos);
}
