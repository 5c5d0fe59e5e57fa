/*
 * Copyright 2026 The SVB Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "svb/cli.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "svb/container.h"
#include "svb/digest.h"
#include "svb/session_io.h"

namespace svb {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result Svb(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string ReadFile(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("svb_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

const std::string kData = SVB_SOURCE_DIR "/data/";

TEST_F(CliTest, GenerateIsDeterministic) {
  for (const char* name : {"a.raw", "b.raw"}) {
    ASSERT_EQ(Svb({"generate", "--seed", "1", "--width", "384", "--height", "192", "--frames",
                   "30", "--out", Path(name)})
                  .code,
              kExitOk);
  }
  const std::string a = ReadFile(Path("a.raw"));
  EXPECT_EQ(a.size(), 384u * 192 * 30);
  EXPECT_EQ(a, ReadFile(Path("b.raw")));
  EXPECT_NE(a, (Svb({"generate", "--seed", "2", "--width", "384", "--height", "192", "--frames",
                     "30", "--out", Path("c.raw")}),
                ReadFile(Path("c.raw"))));
}

TEST_F(CliTest, EncodeFromRawMatchesEncodeFromSeed) {
  ASSERT_EQ(Svb({"generate", "--seed", "3", "--width", "192", "--height", "96", "--frames", "4",
                 "--out", Path("a.raw")})
                .code,
            kExitOk);
  ASSERT_EQ(Svb({"encode", "--input", Path("a.raw"), "--width", "192", "--height", "96", "--out",
                 Path("a.svb")})
                .code,
            kExitOk);
  ASSERT_EQ(Svb({"encode", "--seed", "3", "--width", "192", "--height", "96", "--frames", "4",
                 "--out", Path("b.svb")})
                .code,
            kExitOk);
  EXPECT_EQ(ReadFile(Path("a.svb")), ReadFile(Path("b.svb")));
  // A full decode reproduces the raw frame.
  ASSERT_EQ(Svb({"decode", "--input", Path("a.svb"), "--frame", "2", "--tiles", "all", "--out",
                 Path("f2.raw")})
                .code,
            kExitOk);
  const std::string raw = ReadFile(Path("a.raw"));
  EXPECT_EQ(ReadFile(Path("f2.raw")), raw.substr(2 * 192 * 96, 192 * 96));
}

TEST_F(CliTest, SeamRewriteValidates) {
  ASSERT_EQ(Svb({"encode", "--seed", "1", "--frames", "3", "--out", Path("s.svb")}).code, kExitOk);
  const Result r = Svb({"rewrite", "--input", Path("s.svb"), "--viewport=180,0,90,90", "--out",
                        Path("r.svb")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Result v = Svb({"validate", "--input", Path("r.svb")});
  EXPECT_EQ(v.code, kExitOk) << v.out;
  const std::string bytes = ReadFile(Path("r.svb"));
  const Bitstream b = Parse(std::vector<std::uint8_t>(bytes.begin(), bytes.end()));
  EXPECT_TRUE(ValidateStructure(b).Ok());
  EXPECT_LT(bytes.size(), ReadFile(Path("s.svb")).size());
}

TEST_F(CliTest, ValidateExitCodeTracksTheReport) {
  ASSERT_EQ(Svb({"encode", "--seed", "1", "--frames", "2", "--width", "96", "--height", "48",
                 "--tile-cols", "3", "--tile-rows", "3", "--out", Path("s.svb")})
                .code,
            kExitOk);
  EXPECT_EQ(Svb({"validate", "--input", Path("s.svb")}).code, kExitOk);
  std::string bytes = ReadFile(Path("s.svb"));
  Bitstream b = Parse(std::vector<std::uint8_t>(bytes.begin(), bytes.end()));
  std::get<FrameHeader>(b.units[1]).frame_type = FrameType::kInter;
  const auto broken = SerializeUnvalidated(b);
  std::ofstream(Path("bad.svb"), std::ios::binary)
      .write(reinterpret_cast<const char*>(broken.data()), broken.size());
  const Result r = Svb({"validate", "--input", Path("bad.svb")});
  EXPECT_EQ(r.code, kExitData);
  EXPECT_NE(r.out.find("R_BASE_TYPE"), std::string::npos) << r.out;
  bytes.resize(bytes.size() - 3);
  std::ofstream(Path("short.svb"), std::ios::binary).write(bytes.data(), bytes.size());
  EXPECT_EQ(Svb({"validate", "--input", Path("short.svb")}).code, kExitData);
}

TEST_F(CliTest, UsageAndDataErrors) {
  EXPECT_EQ(Svb({}).code, kExitUsage);
  EXPECT_EQ(Svb({"frobnicate"}).code, kExitUsage);
  const Result bad_flag = Svb({"generate", "--bogus"});
  EXPECT_EQ(bad_flag.code, kExitUsage);
  EXPECT_NE(bad_flag.err.find("--bogus"), std::string::npos);
  EXPECT_NE(bad_flag.err.find("generate"), std::string::npos);
  EXPECT_EQ(Svb({"select-tiles", "--viewport=1,2"}).code, kExitUsage);
  EXPECT_EQ(Svb({"select-tiles", "--viewport=0,0,90,90", "--step-deg", "0"}).code, kExitUsage);
  EXPECT_EQ(Svb({"validate", "--input", Path("missing.svb")}).code, kExitData);
  EXPECT_EQ(Svb({"simulate", "--scheme", "svc", "--trace", Path("missing.jsonl")}).code, kExitData);
  EXPECT_EQ(Svb({"--version"}).code, kExitOk);
}

TEST_F(CliTest, SelectTilesPrintsTheSeamSet) {
  const Result r = Svb({"select-tiles", "--viewport=180,0,90,90", "--oracle"});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("tiles: 6,11,12,17"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("oracle: 6,11,12,17"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("non-contiguous"), std::string::npos);
}

TEST_F(CliTest, DemoSimulationShowsOneFrameSwitching) {
  const Result r = Svb({"simulate", "--trace", kData + "demo_trace.jsonl", "--net",
                        kData + "demo_net.conf", "--scheme", "svc", "--out", Path("demo")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto json = nlohmann::json::parse(ReadFile(Path("demo.json")));
  const auto& latency = json["sessions"][0]["latency"];
  EXPECT_NEAR(latency["mean_mthq_ms"].get<double>(), 33.3, 0.05);
  std::ifstream csv(Path("demo.csv"));
  const auto summary = SummarizeCsv(ReadReportCsv(csv));
  ASSERT_EQ(summary.size(), 1u);
  EXPECT_NEAR(summary[0].latency.mean_mthq_ms, 100.0 / 3, 1e-6);
}

TEST_F(CliTest, ResultsDoNotDependOnJobs) {
  for (const char* jobs : {"1", "3"}) {
    const Result r = Svb({"simulate", "--trace", kData + "demo_trace.jsonl", "--width", "384",
                          "--height", "192", "--scheme", "svc", "--scheme", "multitrack:30:5",
                          "--scheme", "multitrack:10:0", "--jobs", jobs, "--out",
                          Path(std::string("j") + jobs)});
    ASSERT_EQ(r.code, kExitOk) << r.err;
  }
  EXPECT_EQ(ReadFile(Path("j1.json")), ReadFile(Path("j3.json")));
  EXPECT_EQ(ReadFile(Path("j1.csv")), ReadFile(Path("j3.csv")));

  const Result merged = Svb({"report", Path("j1.csv"), "--out", Path("summary")});
  ASSERT_EQ(merged.code, kExitOk) << merged.err;
  const auto summary = nlohmann::json::parse(ReadFile(Path("summary.json")));
  ASSERT_TRUE(summary.contains("schemes"));
  EXPECT_EQ(summary["schemes"].size(), 3u);
}

TEST_F(CliTest, ManifestRecordsDigests) {
  ASSERT_EQ(Svb({"generate", "--seed", "4", "--width", "96", "--height", "48", "--frames", "2",
                 "--out", Path("g.raw")})
                .code,
            kExitOk);
  const auto manifest = nlohmann::json::parse(ReadFile(Path("g.raw.manifest.json")));
  EXPECT_EQ(manifest["tool"], "svb");
  EXPECT_EQ(manifest["version"], kToolVersion);
  EXPECT_EQ(manifest["command"], "generate");
  ASSERT_EQ(manifest["outputs"].size(), 1u);
  EXPECT_EQ(manifest["outputs"][0]["sha256"], Sha256File(Path("g.raw")));
  EXPECT_EQ(manifest["outputs"][0]["bytes"], 96 * 48 * 2);
  // Replaying the recorded argv reproduces the output.
  std::vector<std::string> argv = manifest["argv"];
  for (auto& a : argv) {
    if (a == Path("g.raw")) a = Path("replay.raw");
  }
  ASSERT_EQ(Svb(argv).code, kExitOk);
  EXPECT_EQ(Sha256File(Path("replay.raw")), Sha256File(Path("g.raw")));
}

}  // namespace
}  // namespace svb
