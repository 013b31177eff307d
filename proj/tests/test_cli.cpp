// Copyright 2026-present the cbvrp project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <sstream>

#include "cbvrp/retrieval.hpp"
#include "cbvrp/trainer.hpp"
#include "cli_driver.hpp"
#include "test_util.hpp"

using namespace cbvrp;
using testing::run_cli;

namespace {

const std::vector<std::string> kSmall{"--n-items", "100", "--n-clusters", "5", "--raw-dim", "12",
                                      "--latent-dim", "6", "--truth-len", "10"};

std::string
config_block(const std::string& err) {
    const auto begin = err.find(cli::kConfigBegin);
    const auto end = err.find(cli::kConfigEnd);
    REQUIRE(begin != std::string::npos);
    REQUIRE(end != std::string::npos);
    const auto first = err.find('\n', begin) + 1;
    return err.substr(first, end - first);
}

void
synth_small(const testing::TempDir& dir) {
    std::vector<std::string> args{"synth", "--out", dir.path().string()};
    args.insert(args.end(), kSmall.begin(), kSmall.end());
    REQUIRE(run_cli(args).code == 0);
}

}  // namespace

TEST_CASE("usage errors exit with 2, help with 0") {
    CHECK(run_cli({}).code == cli::kExitUsage);
    CHECK(run_cli({"bogus"}).code == cli::kExitUsage);
    CHECK(run_cli({"--help"}).code == cli::kExitOk);
    CHECK(run_cli({"train", "--help"}).code == cli::kExitOk);
    CHECK(run_cli({"train", "--features", "x.cbvf"}).code == cli::kExitUsage);
    CHECK(run_cli({"predict", "--features", "x", "--out", "y", "--k", "abc"}).code ==
          cli::kExitUsage);
}

TEST_CASE("synth refuses a list length that needs more items than exist") {
    testing::TempDir dir;
    const auto r = run_cli({"synth", "--out", dir.path().string(), "--n-items", "10", "--n-clusters",
                            "2", "--truth-len", "30"});
    CHECK(r.code == cli::kExitUsage);
    CHECK(r.err.find("M ≥ n_items") != std::string::npos);
}

TEST_CASE("missing input files are runtime errors") {
    testing::TempDir dir;
    const auto r = run_cli({"train", "--features", (dir / "none.cbvf").string(), "--truth",
                            (dir / "none.rel").string(), "--out", (dir / "m.cbvm").string()});
    CHECK(r.code == cli::kExitRuntime);
    CHECK(r.err.find("error:") != std::string::npos);
}

TEST_CASE("the resolved config is echoed and can be replayed") {
    testing::TempDir dir;
    synth_small(dir);
    const auto first = run_cli({"train", "--features", (dir / "channel0.cbvf").string(), "--truth",
                                (dir / "train.rel").string(), "--out", (dir / "a.cbvm").string(),
                                "--dim", "8", "--epochs", "2", "--seed", "3"});
    REQUIRE(first.code == 0);
    const auto block = config_block(first.err);
    CHECK(block.find("dim=8\n") != std::string::npos);
    CHECK(block.find("margin=1") != std::string::npos);
    CHECK(block.find("batch-size=128\n") != std::string::npos);

    std::string replay = "# replayed\n" + block;
    const auto at = replay.find("a.cbvm");
    REQUIRE(at != std::string::npos);
    replay.replace(at, 6, "b.cbvm");
    write_file(dir / "train.conf", replay);
    const auto second = run_cli({"train", "--config", (dir / "train.conf").string()});
    REQUIRE(second.code == 0);
    CHECK(read_file(dir / "a.cbvm") == read_file(dir / "b.cbvm"));

    // Command-line flags win over the file.
    const auto third = run_cli({"train", "--config", (dir / "train.conf").string(), "--seed", "4",
                                "--out", (dir / "c.cbvm").string()});
    REQUIRE(third.code == 0);
    CHECK(config_block(third.err).find("seed=4\n") != std::string::npos);
    CHECK(read_file(dir / "a.cbvm") != read_file(dir / "c.cbvm"));
}

TEST_CASE("unknown config keys are usage errors") {
    testing::TempDir dir;
    write_file(dir / "bad.conf", "no-such-option=1\n");
    CHECK(run_cli({"synth", "--out", dir.path().string(), "--config", (dir / "bad.conf").string()})
              .code == cli::kExitUsage);
    write_file(dir / "worse.conf", "just words\n");
    CHECK(run_cli({"synth", "--out", dir.path().string(), "--config", (dir / "worse.conf").string()})
              .code == cli::kExitUsage);
}

TEST_CASE("the pipeline is byte-identical across runs") {
    testing::TempDir a;
    testing::TempDir b;
    const auto ra = testing::run_pipeline(a.path(), kSmall);
    const auto rb = testing::run_pipeline(b.path(), kSmall);
    REQUIRE(ra.code == 0);
    REQUIRE(rb.code == 0);
    CHECK(ra.out == rb.out);
    const auto sa = testing::checksums(a.path());
    CHECK(sa.size() == 20);
    CHECK(sa == testing::checksums(b.path()));
    CHECK(ra.out.find("recall@50=") != std::string::npos);
    CHECK(read_file(a / "report.txt").rfind("hit@5=", 0) == 0);
}

TEST_CASE("predict writes ranked lists and optional similarities") {
    testing::TempDir dir;
    synth_small(dir);
    const auto r = run_cli({"predict", "--features", (dir / "channel0.cbvf").string(), "--queries",
                            (dir / "val.cand").string(), "--metric", "neg-euclidean", "--k", "7",
                            "--out", (dir / "p.pred").string(), "--sim-out",
                            (dir / "s.cbvs").string()});
    REQUIRE(r.code == 0);
    const auto pred = load_predictions(dir / "p.pred");
    const auto queries = load_candidates(dir / "val.cand");
    REQUIRE(pred.lists.size() == queries.size());
    const auto sim = load_similarity(dir / "s.cbvs");
    CHECK(sim.query_ids() == queries);
    CHECK(top_k(sim, 7).lists == pred.lists);
    for (const auto& [q, list] : pred.lists.entries()) {
        CHECK(list.size() == 7);
    }
    CHECK(run_cli({"predict", "--features", (dir / "channel0.cbvf").string(), "--metric", "dot",
                   "--out", (dir / "p.pred").string()})
              .code == cli::kExitUsage);
}

TEST_CASE("fuse checks inputs and honours weights") {
    testing::TempDir dir;
    synth_small(dir);
    for (const std::string c : {"0", "1"}) {
        REQUIRE(run_cli({"predict", "--features", (dir / ("channel" + c + ".cbvf")).string(),
                         "--queries", (dir / "test.cand").string(), "--out",
                         (dir / ("p" + c + ".pred")).string(), "--sim-out",
                         (dir / ("s" + c + ".cbvs")).string()})
                    .code == 0);
    }
    const auto s0 = (dir / "s0.cbvs").string();
    const auto s1 = (dir / "s1.cbvs").string();
    const auto r = run_cli({"fuse", "--sim", s0 + "," + s1, "--weights", "1,0", "--out",
                            (dir / "f.pred").string(), "--sim-out", (dir / "f.cbvs").string()});
    REQUIRE(r.code == 0);
    CHECK(read_file(dir / "f.cbvs") == read_file(s0));
    CHECK(read_file(dir / "f.pred") == read_file(dir / "p0.pred"));

    CHECK(run_cli({"fuse", "--sim", s0, "--out", (dir / "x.pred").string()}).code ==
          cli::kExitUsage);
    CHECK(run_cli({"fuse", "--sim", s0 + "," + s1}).code == cli::kExitUsage);

    REQUIRE(run_cli({"predict", "--features", (dir / "channel0.cbvf").string(), "--queries",
                     (dir / "val.cand").string(), "--out", (dir / "v.pred").string(), "--sim-out",
                     (dir / "v.cbvs").string()})
                .code == 0);
    const auto bad = run_cli({"fuse", "--sim", s0 + "," + (dir / "v.cbvs").string(), "--out",
                              (dir / "x.pred").string()});
    CHECK(bad.code == cli::kExitRuntime);
    CHECK(bad.err.find("registry mismatch") != std::string::npos);
}

TEST_CASE("eval prints the table and key=value lines for custom grids") {
    testing::TempDir dir;
    write_file(dir / "t.rel", "q1\ta,b\nq2\tc\nq3\t\n");
    write_file(dir / "p.pred", "q1\tx,a\nq2\tc\n");
    const auto r = run_cli({"eval", "--truth", (dir / "t.rel").string(), "--pred",
                            (dir / "p.pred").string(), "--k-hit", "1,2", "--k-recall", "2",
                            "--out", (dir / "r.txt").string()});
    REQUIRE(r.code == 0);
    const std::string kv = "hit@1=0.500000\nhit@2=1.000000\nrecall@2=0.750000\n"
                           "evaluated_queries=2\nskipped_queries=1\n";
    CHECK(read_file(dir / "r.txt") == kv);
    CHECK(r.out.find("k=1     k=2     | k=2") != std::string::npos);
    CHECK(r.out.size() > kv.size());
    CHECK(r.out.substr(r.out.size() - kv.size()) == kv);

    write_file(dir / "short.pred", "q1\ta\n");
    const auto missing = run_cli({"eval", "--truth", (dir / "t.rel").string(), "--pred",
                                  (dir / "short.pred").string()});
    CHECK(missing.code == cli::kExitRuntime);
    CHECK(missing.err.find("q2") != std::string::npos);
    CHECK(run_cli({"eval", "--truth", (dir / "t.rel").string(), "--pred",
                   (dir / "p.pred").string(), "--k-hit", "0"})
              .code == cli::kExitUsage);
}

TEST_CASE("sweep emits one row per grid point") {
    testing::TempDir dir;
    synth_small(dir);
    const auto r = run_cli({"sweep", "--features", (dir / "channel0.cbvf").string(), "--truth",
                            (dir / "train.rel").string(), "--train-candidates",
                            (dir / "train.cand").string(), "--eval-truth",
                            (dir / "val.rel").string(), "--eval-candidates",
                            (dir / "all.cand").string(), "--dims", "4", "--epochs", "1,2",
                            "--out", (dir / "sweep.txt").string()});
    REQUIRE(r.code == 0);
    CHECK(read_file(dir / "sweep.txt") == r.out);
    std::istringstream lines(r.out);
    std::string line;
    std::vector<std::string> all;
    while (std::getline(lines, line)) {
        all.push_back(line);
    }
    REQUIRE(all.size() == 5);
    CHECK(all[1].rfind("#dim    #epoch  k=5", 0) == 0);
    CHECK(all[3].rfind("4       1       ", 0) == 0);
    CHECK(all[4].rfind("4       2       ", 0) == 0);

    const auto missing = run_cli({"sweep", "--features", (dir / "channel0.cbvf").string(),
                                  "--truth", (dir / "nope.rel").string(), "--eval-truth",
                                  (dir / "val.rel").string()});
    CHECK(missing.code == cli::kExitRuntime);
    CHECK(missing.err.find("nope.rel") != std::string::npos);
}
