/*
 * Copyright 2026 The coalex Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "coalex/dataset.hpp"
#include "coalex/io.hpp"

namespace coalex {
namespace {

namespace fs = std::filesystem;

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("coalex_cli_" +
            std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  RunResult run(const std::string& args, const std::string& env = "") const {
    const fs::path err = dir_ / "stderr.txt";
    const std::string cmd =
        env + " " + std::string(COALEX_CLI) + " " + args + " 2>" + err.string();
    RunResult r;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    const int status = ::pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = slurp(err);
    return r;
  }
  std::string p(const std::string& name) const { return (dir_ / name).string(); }
  void write(const std::string& name, const std::string& text) const {
    std::ofstream(p(name)) << text;
  }

  fs::path dir_;
};

TEST_F(Cli, GenerateAndClusterMicTest) {
  auto g = run("generate --family mictest --samples 10000 --seed 3 --out " + p("gen"));
  ASSERT_EQ(g.code, 0) << g.err;
  const Dataset d = read_csv(p("gen/data.csv"));
  EXPECT_EQ(d.rows(), 10000u);
  EXPECT_EQ(d.cols(), 7u);
  auto c = run("cluster --data " + p("gen/data.csv") + " --workers 4 --out " + p("cl"));
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_EQ(c.out, "[[0,1,2,3],[4],[5,6]]\n");
  for (const char* f : {"dissimilarity.csv", "tree.json", "tree.nwk", "tree.dot",
                        "partition.json", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(dir_ / "cl" / f)) << f;
  }
  const Json tree = read_json_file(p("cl/tree.json"));
  EXPECT_EQ(tree["merges"].size(), 6u);
  EXPECT_EQ(tree["feature_names"][0], d.names()[0]);
  const Json manifest = read_json_file(p("cl/manifest.json"));
  EXPECT_EQ(manifest["command"], "cluster");
  EXPECT_EQ(manifest["config"]["workers"], "4");
  EXPECT_EQ(manifest["config_hash"].get<std::string>().size(), 16u);
}

TEST_F(Cli, MissingInputFileIsExitTwo) {
  auto r = run("cluster --data " + p("nope.csv") + " --out " + p("o"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("nope.csv"), std::string::npos);
  EXPECT_EQ(run("cluster --out " + p("o")).code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
}

TEST_F(Cli, ExplainFixtureAndProtocolErrors) {
  write("x.csv", "a,b\n5,6\n");
  write("bg.csv", "a,b\n1,2\n3,4\n");
  auto r = run("explain --data " + p("x.csv") + " --background " + p("bg.csv") +
               " --model poly:x1*x2 --out " + p("e"));
  ASSERT_EQ(r.code, 0) << r.err;
  const Dataset e = read_csv(p("e/explanations.csv"));
  EXPECT_EQ(e(0, 0), 30.0);
  EXPECT_EQ(e(0, 1), 7.0);
  EXPECT_EQ(e(0, 2), 13.0);
  EXPECT_EQ(e(0, 3), 10.0);
  EXPECT_NE(r.err.find("efficiency"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "e" / "explanations.meta.json"));

  const std::string scorer = std::string("'cmd:") + COALEX_FAKE_SCORER;
  r = run("explain --data " + p("x.csv") + " --background " + p("bg.csv") + " --model " +
          scorer + " product 1 2' --out " + p("s"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_csv(p("s/explanations.csv"))(0, 2), 13.0);

  r = run("explain --data " + p("x.csv") + " --background " + p("bg.csv") + " --model " +
          scorer + " garbage-at 2' --out " + p("g"));
  EXPECT_EQ(r.code, 3) << r.err;
  EXPECT_NE(r.err.find("protocol"), std::string::npos);

  r = run("explain --data " + p("x.csv") + " --model poly:x7 --out " + p("bad"));
  EXPECT_EQ(r.code, 2);
}

TEST_F(Cli, PartitionAndAlphaSweep) {
  write("x.csv", "a,b,c\n1,2,3\n0,1,-1\n2,2,2\n");
  write("p.json", "[[0,2],[1]]");
  auto r = run("explain --data " + p("x.csv") + " --model 'poly:x1*x2+x3' --value owen" +
               " --partition " + p("p.json") + " --out " + p("op"));
  ASSERT_EQ(r.code, 0) << r.err;
  const Dataset e = read_csv(p("op/explanations.csv"));
  EXPECT_EQ(e.names()[5], "group:a+c");
  EXPECT_EQ(e.names()[7], "quotient:a+c");
  write("t.json",
        R"({"nodes":[{"id":0,"height":0,"parent":3,"leaf_player":0,"children":[]},)"
        R"({"id":1,"height":0,"parent":4,"leaf_player":1,"children":[]},)"
        R"({"id":2,"height":0,"parent":3,"leaf_player":2,"children":[]},)"
        R"({"id":3,"height":0.4,"parent":4,"children":[0,2]},)"
        R"({"id":4,"height":1,"parent":null,"children":[3,1]}]})");
  r = run("explain --data " + p("x.csv") + " --model 'poly:x1*x2+x3' --value owen --tree " +
          p("t.json") + " --alpha 0 --alpha 0.5 --out " + p("sw"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "sw" / "explanations_alpha_0.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "sw" / "explanations_alpha_0.5.csv"));
  EXPECT_EQ(read_json_file(p("sw/explanations_alpha_0.5.meta.json"))["alpha"], 0.5);
  r = run("explain --data " + p("x.csv") + " --model 'poly:x1' --alpha 0.5 --out " + p("na"));
  EXPECT_EQ(r.code, 2);
}

TEST_F(Cli, DiagnoseSameModelGivesZeros) {
  auto g = run("generate --family near-duplicates:0.05 --samples 200 --seed 1 --out " +
               p("gen"));
  ASSERT_EQ(g.code, 0) << g.err;
  write("p.json", "[[0,1],[2]]");
  auto r = run("diagnose --data " + p("gen/data.csv") + " --model-a 'poly:x1+x2+x3'" +
               " --model-b 'poly:x1+x2+x3' --partition " + p("p.json") + " --out " + p("d"));
  ASSERT_EQ(r.code, 0) << r.err;
  const Json s = read_json_file(p("d/stability.json"));
  EXPECT_EQ(s["model_difference_norm"], 0.0);
  for (const auto& x : s["individual_difference"]) EXPECT_EQ(x.get<double>(), 0.0);

  r = run("diagnose --data " + p("gen/data.csv") + " --model-a 'poly:x1+x2+x3'" +
          " --model-b 'poly:2*x1+x3' --partition " + p("p.json") + " --out " + p("d2"));
  ASSERT_EQ(r.code, 0) << r.err;
  const Json s2 = read_json_file(p("d2/stability.json"));
  EXPECT_GT(s2["individual_difference"][0].get<double>(),
            5 * s2["model_difference_norm"].get<double>());
  r = run("diagnose --explanations-a " + p("d/explanations_a.json") + " --explanations-b " +
          p("d2/explanations_b.json") + " --out " + p("d3"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_json_file(p("d3/stability.json"))["model_difference_norm"],
            s2["model_difference_norm"]);
}

TEST_F(Cli, ConfigFileFillsMissingOptionsOnly) {
  write("x.csv", "a,b\n5,6\n");
  write("bg.csv", "a,b\n1,2\n3,4\n");
  write("cfg.json", "{\"model\": \"poly:x1*x2\", \"background\": \"" + p("bg.csv") +
                        "\", \"value\": \"banzhaf\", \"out\": \"" + p("fromcfg") + "\"}");
  auto r = run("explain --data " + p("x.csv") + " --value shapley --config " + p("cfg.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  const Json m = read_json_file(p("fromcfg/manifest.json"));
  EXPECT_EQ(m["config"]["value"], "shapley");
  EXPECT_EQ(m["config"]["model"], "poly:x1*x2");
  EXPECT_EQ(read_csv(p("fromcfg/explanations.csv"))(0, 2), 13.0);
  write("bad.json", "{\"colour\": 1}");
  EXPECT_EQ(run("explain --data " + p("x.csv") + " --config " + p("bad.json")).code, 2);
}

TEST_F(Cli, WorkersFromEnvironment) {
  write("x.csv", "a,b\n5,6\n1,1\n");
  auto r = run("explain --data " + p("x.csv") + " --model poly:x1*x2 --out " + p("w"),
               "GROUP_EXPLAIN_WORKERS=3");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_json_file(p("w/manifest.json"))["config"]["workers"], "3");
  EXPECT_EQ(run("explain --data " + p("x.csv") + " --model poly:x1 --out " + p("w2"),
                "GROUP_EXPLAIN_WORKERS=zero")
                .code,
            2);
}

TEST_F(Cli, Gamecheck) {
  auto r = run("gamecheck --value owen --trials 200 --out " + p("gc"));
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_NE(r.out.find("QP"), std::string::npos);
  const Json j = read_json_file(p("gc/gamecheck.json"));
  EXPECT_TRUE(j["all_expected"].get<bool>());
  r = run("gamecheck --value banzhaf-owen --trials 300");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("witness"), std::string::npos);
  r = run("gamecheck --value banzhaf --trials 200");
  EXPECT_EQ(r.code, 0) << r.out;
  write("w.json", R"({"name": "half", "weights": [[1], [0.7, 0.7], [0.3, 0.3, 0.3]]})");
  r = run("gamecheck --weights " + p("w.json") + " --trials 50");
  EXPECT_EQ(r.code, 0) << r.out;
  write("c.json", R"({"name": "mine", "outer": "banzhaf", "inner": "shapley"})");
  r = run("gamecheck --weights " + p("c.json") + " --trials 50");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(run("gamecheck --value nope").code, 2);
  EXPECT_EQ(run("gamecheck").code, 2);
}

}  // namespace
}  // namespace coalex
