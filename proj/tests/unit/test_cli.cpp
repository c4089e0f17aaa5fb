#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

#include "emolab/dataset.hpp"
#include "emolab/stratify.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
};

Run cli(const std::string& args, const fs::path& dir) {
    const auto out = dir / "stdout.txt";
    const std::string cmd = "cd '" + dir.string() + "' && '" EMOLAB_CLI "' " + args + " > '" + out.string() + "' 2>&1";
    const int status = std::system(cmd.c_str());
    std::ifstream in(out);
    std::ostringstream ss;
    ss << in.rdbuf();
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("usage errors exit 2, help exits 0") {
    const auto dir = oracle::scratch_dir("cli_usage");
    CHECK(cli("--help", dir).code == 0);
    CHECK(cli("split", dir).code == 2);
    CHECK(cli("split --data x.csv --bogus", dir).code == 2);
    CHECK(cli("frobnicate", dir).code == 2);
    CHECK(cli("run --config x.json --language-mode BOTH", dir).code == 2);
}

TEST_CASE("missing data exits 3, bad config exits 2") {
    const auto dir = oracle::scratch_dir("cli_errors");
    CHECK(cli("split --data absent.csv", dir).code == 3);
    write_file(dir / "bad.json", R"({"datasets": [{"language": "x", "synth": {}}], "split": {"train_fraction": 2}})");
    CHECK(cli("run --config bad.json", dir).code == 2);
    write_file(dir / "broken.json", "{ not json");
    CHECK(cli("run --config broken.json", dir).code == 2);
}

TEST_CASE("synth, split, train, predict, evaluate chain") {
    const auto dir = oracle::scratch_dir("cli_chain");
    REQUIRE(cli("synth --language syn --data-out syn.csv --embs-out syn.embs", dir).code == 0);
    REQUIRE(cli("split --data syn.csv --out split.json", dir).code == 0);
    REQUIRE(cli("train --data syn.csv --embeddings syn.embs --split split.json --out model.json", dir).code == 0);
    REQUIRE(cli("predict --model model.json --embeddings syn.embs --split split.json --part val --out pred.csv", dir).code == 0);
    const auto ev = cli("evaluate --pred pred.csv --gold syn.csv --language syn", dir);
    REQUIRE(ev.code == 0);
    CHECK(ev.out.find("macro\t100.00") != std::string::npos);
}

TEST_CASE("config file supplies defaults and flags override them") {
    const auto dir = oracle::scratch_dir("cli_config");
    REQUIRE(cli("synth --language syn --n 60 --data-out syn.csv", dir).code == 0);
    write_file(dir / "cfg.json", R"({"split": {"fraction": 0.5, "seed": 3}})");
    REQUIRE(cli("split --config cfg.json --data syn.csv --out a.json", dir).code == 0);
    REQUIRE(cli("split --config cfg.json --data syn.csv --fraction 0.8 --out b.json", dir).code == 0);
    // Each file must equal the library split under the merged parameters.
    const std::vector<emolab::LabeledDataset> ds{emolab::load_dataset(dir / "syn.csv", "syn")};
    const auto expect = [&](double fraction) {
        const auto split = emolab::split_by_language(ds, fraction, 3).at("syn");
        return emolab::split_to_json(ds[0], split).dump();
    };
    CHECK(nlohmann::json::parse(std::ifstream(dir / "a.json")).dump() == expect(0.5));
    CHECK(nlohmann::json::parse(std::ifstream(dir / "b.json")).dump() == expect(0.8));
}

TEST_CASE("run writes the experiment artifacts") {
    const auto dir = oracle::scratch_dir("cli_run");
    write_file(dir / "exp.json", R"({"datasets": [{"language": "syn", "synth": {}}], "output_dir": "out"})");
    REQUIRE(cli("run --config exp.json --name mo", dir).code == 0);
    CHECK(fs::exists(dir / "out/syn/predictions.csv"));
    const auto t = emolab::load_score_table(dir / "out/report.csv");
    CHECK(t.models() == std::vector<std::string>{"mo"});
    CHECK(*t.score(0, 0) >= 95.0);
}

TEST_CASE("stats over the development table") {
    const auto dir = oracle::scratch_dir("cli_stats");
    write_file(dir / "spec.json", R"({"name": "fl", "mode": "paired", "factor_a": "FL", "factor_b": "AL"})");
    const auto r = cli("stats --scores '" + oracle::source_path("data/fixtures/dev_scores.csv").string() +
                           "' --spec spec.json --pairs",
                       dir);
    REQUIRE(r.code == 0);
    CHECK(r.out.find("0.875") != std::string::npos);
    CHECK(r.out.find("XLMR-MO-LANG-FL") != std::string::npos);
}
