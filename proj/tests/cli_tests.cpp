#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <string>

#include <json.hpp>

#include "rosd/dataset_io.hpp"
#include "rosd/scores_io.hpp"
#include "testutil.hpp"

using rosd::testing::TempDir;
using rosd::testing::read_file;

namespace {

#ifndef ROSD_TOOL_PATH
#error "ROSD_TOOL_PATH must be defined by the build"
#endif

struct RunResult {
    int exit_code;
    std::string out, err;
};

RunResult run_tool(const TempDir& dir, const std::string& args, const std::string& env = "") {
    const auto out = dir / "stdout.txt";
    const auto err = dir / "stderr.txt";
    const std::string cmd = env + (env.empty() ? "" : " ") + ROSD_TOOL_PATH + " " + args + " >" +
                            out.string() + " 2>" + err.string();
    const int rc = std::system(cmd.c_str());
    return {WEXITSTATUS(rc), read_file(out), read_file(err)};
}

}  // namespace

TEST_CASE("simulate writes the dataset and a manifest that references it") {
    TempDir dir("cli");
    auto out = dir / "d.jsonl";
    auto r = run_tool(dir, "simulate --preset scenario1-slander --seed 7 -o " + out.string());
    CHECK(r.exit_code == 0);
    rosd::Dataset d = rosd::load_dataset(out);
    CHECK(d.num_reviews() == 1000);

    auto manifest = nlohmann::json::parse(read_file(out.string() + ".manifest.json"));
    CHECK(manifest["tool"] == "rosd");
    CHECK(manifest["seed"] == 7);
    REQUIRE(manifest["outputs"].size() == 1);
    CHECK(manifest["outputs"][0] == out.string());
}

TEST_CASE("simulate with a bad config exits 1 with a diagnostic") {
    TempDir dir("cli");
    auto cfg = dir / "bad.json";
    std::ofstream(cfg) << "{ not json";
    auto r = run_tool(dir, "simulate -c " + cfg.string() + " -o " + (dir / "d.jsonl").string());
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("error") != std::string::npos);
    auto r2 = run_tool(dir, "simulate -o " + (dir / "d.jsonl").string());
    CHECK(r2.exit_code == 1);
}

TEST_CASE("simulate is deterministic for a fixed seed") {
    TempDir dir("cli");
    auto a = dir / "a.jsonl";
    auto b = dir / "b.jsonl";
    CHECK(run_tool(dir, "simulate --preset scenario2-promote --seed 5 -o " + a.string()).exit_code == 0);
    CHECK(run_tool(dir, "simulate --preset scenario2-promote --seed 5 -o " + b.string()).exit_code == 0);
    CHECK(read_file(a) == read_file(b));
}

TEST_CASE("ROSD_SEED supplies the default seed") {
    TempDir dir("cli");
    auto a = dir / "a.jsonl";
    auto b = dir / "b.jsonl";
    CHECK(run_tool(dir, "simulate --preset scenario1-slander -o " + a.string(),
                   "ROSD_SEED=42").exit_code == 0);
    CHECK(run_tool(dir, "simulate --preset scenario1-slander --seed 42 -o " + b.string())
              .exit_code == 0);
    CHECK(read_file(a) == read_file(b));
    CHECK(run_tool(dir, "simulate --preset scenario1-slander -o " + a.string(),
                   "ROSD_SEED=abc").exit_code == 1);
}

TEST_CASE("dump-preset output feeds back into simulate unchanged") {
    TempDir dir("cli");
    auto cfg = dir / "cfg.json";
    auto a = dir / "a.jsonl";
    auto b = dir / "b.jsonl";
    CHECK(run_tool(dir, "simulate --dump-preset scenario3-slander -o " + cfg.string()).exit_code == 0);
    CHECK(run_tool(dir, "simulate -c " + cfg.string() + " --seed 9 -o " + a.string()).exit_code == 0);
    CHECK(run_tool(dir, "simulate --preset scenario3-slander --seed 9 -o " + b.string()).exit_code == 0);
    CHECK(read_file(a) == read_file(b));
}

TEST_CASE("detect scores a dataset and surfaces non-convergence as a warning") {
    TempDir dir("cli");
    auto data = dir / "d.jsonl";
    auto scores = dir / "s.jsonl";
    REQUIRE(run_tool(dir, "simulate --preset scenario1-slander --seed 7 -o " + data.string())
                .exit_code == 0);
    auto r = run_tool(dir, "detect -i " + data.string() + " -o " + scores.string());
    CHECK(r.exit_code == 0);
    rosd::Dataset d = rosd::load_dataset(data);
    auto [state, meta] = rosd::load_scores(d, scores, rosd::FileFormat::jsonl);
    CHECK(meta.converged);
    CHECK(state.trust_of(d, "s01") == 0.0);

    auto warn = run_tool(dir, "detect --max-iters 1 -i " + data.string() + " -o " +
                                  scores.string());
    CHECK(warn.exit_code == 0);
    CHECK(warn.err.find("warning") != std::string::npos);
    auto [state2, meta2] = rosd::load_scores(d, scores, rosd::FileFormat::jsonl);
    CHECK_FALSE(meta2.converged);
}

TEST_CASE("detect on an empty dataset succeeds with an empty export") {
    TempDir dir("cli");
    auto data = dir / "empty.csv";
    std::ofstream(data) << "";
    auto scores = dir / "s.csv";
    auto r = run_tool(dir, "detect -i " + data.string() + " -o " + scores.string());
    CHECK(r.exit_code == 0);
    const std::string body = read_file(scores);
    CHECK(body.find("trust") == std::string::npos);
    CHECK(body.find("meta") != std::string::npos);
}

TEST_CASE("detect exit codes distinguish io from integrity failures") {
    TempDir dir("cli");
    auto scores = dir / "s.jsonl";
    CHECK(run_tool(dir, "detect -i " + (dir / "missing.jsonl").string() + " -o " +
                            scores.string()).exit_code == 2);
    auto bad = dir / "bad.csv";
    std::ofstream(bad) << "r1,p1,4,1\nr1,p2,3,1\n";  // duplicate seq
    CHECK(run_tool(dir, "detect -i " + bad.string() + " -o " + scores.string()).exit_code == 3);
}

TEST_CASE("detect output does not depend on the dispatched kernel") {
    TempDir dir("cli");
    auto data = dir / "d.jsonl";
    REQUIRE(run_tool(dir, "simulate --preset scenario3-promote --seed 2 -o " + data.string())
                .exit_code == 0);
    auto a = dir / "a.jsonl";
    auto b = dir / "b.jsonl";
    CHECK(run_tool(dir, "detect -i " + data.string() + " -o " + a.string()).exit_code == 0);
    CHECK(run_tool(dir, "detect -i " + data.string() + " -o " + b.string(),
                   "ROSD_KERNEL=scalar").exit_code == 0);
    CHECK(read_file(a) == read_file(b));
}

TEST_CASE("inject adds the requested rows") {
    TempDir dir("cli");
    auto data = dir / "base.csv";
    {
        std::ofstream f(data);
        f << "reviewer_id,product_id,score\n";
        for (int r = 1; r <= 4; ++r)
            for (int p = 1; p <= 3; ++p)
                f << "r" << r << ",p" << p << "," << (p == 3 ? 4.0 : 2.0) << "\n";
    }
    auto out = dir / "out.csv";
    auto r = run_tool(dir, "inject -i " + data.string() + " -o " + out.string() +
                               " --kind over_product --targets p3 --score 0.5 -n 20 --seed 3");
    CHECK(r.exit_code == 0);
    rosd::Dataset d = rosd::load_dataset(out);
    CHECK(d.num_reviews() == 12 + 20);

    CHECK(run_tool(dir, "inject -i " + data.string() + " -o " + out.string() +
                            " --targets nosuch -n 20").exit_code == 3);

    // jsonl output here: csv cannot represent the review-less new reviewer
    auto out0 = dir / "out0.jsonl";
    CHECK(run_tool(dir, "inject -i " + data.string() + " -o " + out0.string() +
                            " --targets p3 -n 0").exit_code == 0);
    rosd::Dataset d0 = rosd::load_dataset(out0);
    CHECK(d0.num_reviews() == 12);
    CHECK(d0.num_reviewers() == 5);
}

TEST_CASE("evaluate writes the report and enforces labels") {
    TempDir dir("cli");
    auto data = dir / "d.jsonl";
    auto scores = dir / "s.jsonl";
    auto report = dir / "report.json";
    REQUIRE(run_tool(dir, "simulate --preset scenario1-slander --seed 7 -o " + data.string())
                .exit_code == 0);
    REQUIRE(run_tool(dir, "detect -i " + data.string() + " -o " + scores.string()).exit_code == 0);
    auto r = run_tool(dir, "evaluate -i " + data.string() + " -s " + scores.string() + " -o " +
                               report.string() + " --threshold 0.5");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("Deviation in product reliability") != std::string::npos);
    auto j = nlohmann::json::parse(read_file(report));
    CHECK(j["avg_trust_spammer"] == 0.0);
    CHECK(j["deviation"].get<double>() <= 0.02);
    CHECK(j["detection"]["review_recall"] == 1.0);

    auto unlabeled = dir / "plain.csv";
    std::ofstream(unlabeled) << "r1,p1,4\nr2,p1,3\n";
    auto s2 = dir / "s2.jsonl";
    REQUIRE(run_tool(dir, "detect -i " + unlabeled.string() + " -o " + s2.string()).exit_code == 0);
    auto bad = run_tool(dir, "evaluate -i " + unlabeled.string() + " -s " + s2.string());
    CHECK(bad.exit_code == 1);
    CHECK(bad.err.find("label") != std::string::npos);
}
