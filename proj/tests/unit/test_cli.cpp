#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "../support/tempdir.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

/// Runs the CLI with `args`, capturing stdout and stderr together.
Run cli(const std::string& args, const fs::path& scratch) {
    const fs::path log = scratch / "cli.log";
    const std::string cmd = std::string("\"") + GSAC_CLI_PATH + "\" " + args + " > \"" + log.string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream is(log);
    std::stringstream ss;
    ss << is.rdbuf();
    r.out = ss.str();
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("cli usage and data errors") {
    TempDir dir("cli");
    CHECK(cli("--help", dir.path()).code == 0);
    CHECK(cli("", dir.path()).code == 1);
    CHECK(cli("frobnicate", dir.path()).code == 1);
    CHECK(cli("place only_one_arg", dir.path()).code == 1);

    std::ofstream(dir.path() / "bad.json") << R"({"schema_version": 1, "id": "x", "walls": [], "objects": []})";
    const Run bad = cli("validate \"" + (dir.path() / "bad.json").string() + "\"", dir.path());
    CHECK(bad.code == 2);
    CHECK(bad.out.find("walls") != std::string::npos);
    CHECK(cli("validate \"" + (dir.path() / "missing.json").string() + "\"", dir.path()).code == 2);
    CHECK(cli("synth --rooms 1", dir.path()).code == 2);  // no --out

    std::ofstream(dir.path() / "cfg.json") << R"({"train": {"epoch": 1}})";
    const Run cfg = cli("--config \"" + (dir.path() / "cfg.json").string() + "\" --out x synth --rooms 1", dir.path());
    CHECK(cfg.code == 2);
    CHECK(cfg.out.find("train.epoch") != std::string::npos);
}

TEST_CASE("cli end to end") {
    TempDir dir("cli_e2e");
    const fs::path corpus = dir.path() / "corpus";
    const fs::path models = dir.path() / "models";
    std::ofstream(dir.path() / "cfg.json")
        << R"({"train": {"epochs": 2, "batch_pairs": 8, "l2_siamese": 0}, "model": {"preset": "reduced"},
               "augment": {"variants_per_room": 2}, "grid": {"cell_size": 0.25}})";
    const std::string cfg = "--config \"" + (dir.path() / "cfg.json").string() + "\" --seed 3 ";

    REQUIRE(cli(cfg + "--out \"" + corpus.string() + "\" synth --rooms 8", dir.path()).code == 0);
    const Run v = cli("validate \"" + corpus.string() + "\"", dir.path());
    CHECK(v.code == 0);
    CHECK(v.out.find("ok ") != std::string::npos);

    const fs::path aug = dir.path() / "aug";
    const Run a = cli(cfg + "--out \"" + aug.string() + "\" augment \"" + corpus.string() + "\"", dir.path());
    CHECK(a.code == 0);
    CHECK(fs::exists(aug / "stage_report.txt"));

    const Run t = cli(cfg + "--groups Table,TV --out \"" + models.string() + "\" train \"" + corpus.string() + "\"", dir.path());
    REQUIRE(t.code == 0);
    CHECK(t.out.find("no instances of TV") != std::string::npos);
    CHECK(fs::exists(models / "Table" / "params.bin"));
    const std::string loss = slurp(models / "Table" / "loss.csv");
    CHECK(loss.rfind("epoch,siamese_loss,ae_loss\n", 0) == 0);

    const fs::path scene = corpus / "synth_0000.json";
    const fs::path heat = dir.path() / "heat";
    const Run p = cli(cfg + "--groups Table --out \"" + heat.string() + "\" place \"" + models.string() + "\" \"" +
                          scene.string() + "\" --dims 1.2,0.8,0.75 -k 3",
                      dir.path());
    REQUIRE(p.code == 0);
    CHECK(p.out.find("rank, x, y, P\n1, ") != std::string::npos);
    CHECK(fs::exists(heat / "heatmap.csv"));
    CHECK(fs::exists(heat / "heatmap.pgm"));
    CHECK(cli(cfg + "--groups Sofa place \"" + models.string() + "\" \"" + scene.string() + "\" --dims 1,1,1", dir.path()).code ==
          2);
    CHECK(cli(cfg + "--groups Table place \"" + models.string() + "\" \"" + scene.string() + "\" --dims 1,-1,1", dir.path()).code ==
          2);

    const fs::path report = dir.path() / "report";
    const Run e = cli(cfg + "--groups Table --out \"" + report.string() + "\" evaluate --baseline \"" + corpus.string() + "\"",
                      dir.path());
    CHECK(e.code == 0);
    CHECK(slurp(report / "report.txt").find("Table") != std::string::npos);
    CHECK(fs::exists(report / "report.json"));
}
