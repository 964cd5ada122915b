#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "boxlab/box_json.hpp"
#include "boxlab/cli.hpp"
#include "boxlab/generators.hpp"
#include "boxlab/measures.hpp"

using namespace boxlab;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "boxlab");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(int(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "boxlab-cli-tests";
    fs::create_directories(dir);
    const fs::path p = dir / name;
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write(const fs::path& p, const std::string& text) {
    std::ofstream(p) << text;
}

}  // namespace

TEST_CASE("analyze canonical boxes") {
    auto r = run({"analyze", "--canonical", "pr"});
    REQUIRE(r.code == 0);
    auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["flags"]["strongly_nonclassical"] == true);
    CHECK(doc["flags"]["weakly_nonclassical"] == true);
    CHECK(doc["cost_full256"]["eta"] == "1/1");

    r = run({"analyze", "--canonical", "d0_0"});
    REQUIRE(r.code == 0);
    doc = nlohmann::json::parse(r.out);
    CHECK(doc["flags"]["lhv"] == true);
    CHECK(doc["signal"]["s"] == "0/1");
    CHECK(doc["cost_full256"]["c"] == "0/1");

    r = run({"analyze", "--isotropic", "3/4", "--dim", "2"});
    REQUIRE(r.code == 0);
    doc = nlohmann::json::parse(r.out);
    CHECK(doc["cost_full256"]["eta"] == "1/2");
    CHECK(doc["flags"]["lhv"] == false);
    CHECK(doc["flags"]["eta_star"]["value"] == "-0.5");
}

TEST_CASE("analyze from a file, text mode, and errors") {
    const fs::path box = scratch("noise.json");
    write(box, serialize_box(Box::uniform()));
    CHECK(run({"analyze", box.string()}).code == 0);
    CHECK(run({"analyze", box.string(), "--text"}).code == 0);

    const fs::path bad = scratch("bad.json");
    write(bad, R"({"format":"box-v1","p":[["1/4","1/4","1/4","1/4"],["1/4","1/4","1/4","1/4"],["1/4","1/4","1/4","1/4"],["1/4","1/4","1/4","3/20"]]})");
    const auto r = run({"analyze", bad.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("NotNormalized") != std::string::npos);

    CHECK(run({"analyze", scratch("missing.json").string()}).code == 2);
    CHECK(run({"analyze", "--canonical", "pr", "--dim", "1"}).code == 2);
    CHECK(run({"analyze", "--canonical", "nope"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({}).code == 2);
}

TEST_CASE("flag implication on asserted domains") {
    for (const Box& box : sample(RandomFamily::chsh16_mixture, 12, 40)) {
        const auto report = analyze(box);
        if (report.flags.strongly_nonclassical) CHECK(report.flags.weakly_nonclassical);
        CHECK(report.flags.strongly_nonclassical == (sgn(report.cost_full.eta) > 0));
    }
    // A = b, B = a: eta = 1 with deterministic marginals, so the implication
    // does not reach two-way boxes.
    const auto two_way = analyze(DeterministicBox::from_tables(0b0101, 0b0011).to_box());
    CHECK(two_way.flags.strongly_nonclassical);
    CHECK_FALSE(two_way.flags.weakly_nonclassical);
}

TEST_CASE("gen") {
    const fs::path pr = scratch("pr.json");
    REQUIRE(run({"gen", "--kind", "pr", "--out", pr.string()}).code == 0);
    CHECK(parse_box(slurp(pr)) ==
          mix(std::vector<WeightedBox>{{ratio(1, 2), canonical("d0_1")}, {ratio(1, 2), canonical("d3_1")}}));

    const fs::path dir = scratch("random");
    REQUIRE(run({"gen", "--kind", "random", "--sub", "general", "--seed", "1", "--count", "2", "--out", dir.string()})
                .code == 0);
    int files = 0;
    for (const auto& entry : fs::directory_iterator(dir)) {
        parse_box(slurp(entry.path()));
        ++files;
    }
    CHECK(files == 2);

    const auto q = run({"gen", "--kind", "quantum", "--angles", "tsirelson", "--denom", "1000000"});
    REQUIRE(q.code == 0);
    CHECK(std::fabs(to_double(chsh(parse_box(q.out)).lambda_max) - 2.828427) <= 4e-6);

    CHECK(run({"gen", "--kind", "isotropic", "--v", "3/2"}).code == 2);
    CHECK(run({"gen", "--kind", "quantum", "--angles", "1,2"}).code == 2);
    CHECK(run({"gen", "--kind", "wat"}).code == 2);
}

TEST_CASE("decompose") {
    auto r = run({"decompose", "--canonical", "pr", "--basis", "chsh16"});
    REQUIRE(r.code == 0);
    auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["status"] == "optimal");
    CHECK(doc["decomposition"]["cost"] == "1/1");

    r = run({"decompose", "--canonical", "noise", "--basis", "full256", "--alt"});
    REQUIRE(r.code == 0);
    doc = nlohmann::json::parse(r.out);
    CHECK(doc["decomposition"]["cost"] == "0/1");
    REQUIRE(doc["alternative"].is_object());
    CHECK(doc["alternative"]["cost"] == "0/1");
    CHECK(doc["alternative"]["weights"] != doc["decomposition"]["weights"]);

    r = run({"decompose", "--canonical", "d5_1"});
    REQUIRE(r.code == 0);
    doc = nlohmann::json::parse(r.out);
    CHECK(doc["decomposition"]["weights"].size() == 1);
    CHECK(doc["decomposition"]["weights"][std::to_string(strategy_id("d5_1"))] == "1/1");
    CHECK(doc["decomposition"]["cost"] == "1/1");

    const fs::path two_way = scratch("two_way.json");
    write(two_way, serialize_box(DeterministicBox::from_tables(0b0101, 0b0011).to_box()));
    r = run({"decompose", two_way.string(), "--basis", "chsh16"});
    CHECK(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["status"] == "not-in-hull");

    CHECK(run({"decompose", "--canonical", "pr", "--basis", "nope"}).code == 2);
}

TEST_CASE("fuzz exit codes") {
    const fs::path report = scratch("findings.json");
    auto r = run({"fuzz", "--family", "general", "--seed", "7", "--count", "200", "--out", report.string()});
    CHECK(r.code == 0);
    const auto doc = nlohmann::json::parse(slurp(report));
    CHECK(doc["per_property"]["S_LE_C"]["violated"] == 0);
    CHECK(doc["per_property"]["S_LE_C"]["checked"] == 200);

    const fs::path witness = scratch("witness.json");
    r = run({"fuzz", "--family", "general", "--seed", "7", "--count", "20", "--inject-corrupt-sampler", "--witness",
             witness.string(), "--out", scratch("corrupt.json").string()});
    CHECK(r.code == 1);
    REQUIRE(fs::exists(witness));
    const auto w = nlohmann::json::parse(slurp(witness));
    CHECK(w["strictness"] == "asserted");
    CHECK(w["holds"] == false);
    parse_box(w["box"].dump());

    CHECK(run({"fuzz", "--family", "nope"}).code == 2);
    CHECK(run({"fuzz", "--family", "general", "--count", "0"}).code == 2);
}

TEST_CASE("byte-identical output") {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"analyze", "--canonical", "pr"},
             {"decompose", "--isotropic", "3/4", "--alt"},
             {"gen", "--kind", "random", "--sub", "chsh16_mixture", "--seed", "5"},
             {"fuzz", "--family", "oneway_slice", "--seed", "2", "--count", "30"},
             {"sweep", "--family", "isotropic", "--steps", "4"}}) {
        const auto a = run(args), b = run(args);
        CHECK(a.code == 0);
        CHECK(a.out == b.out);
    }
}

TEST_CASE("sweep csv") {
    const auto r = run({"sweep", "--family", "isotropic", "--steps", "10"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string header;
    std::getline(in, header);
    CHECK(header.rfind("param,lambda_max,s,C,eta,I,U_A,U_B,", 0) == 0);
    int rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    CHECK(rows == 11);
    CHECK(run({"sweep", "--family", "isotropic", "--steps", "0"}).code == 2);
}

TEST_CASE("repro") {
    const fs::path out = scratch("repro.json");
    const auto r = run({"repro", "--out", out.string()});
    CHECK(r.code == 0);
    const auto doc = nlohmann::json::parse(slurp(out));
    CHECK(doc["format"] == "repro-v1");
    CHECK_FALSE(doc["discrepancies"].empty());
}
