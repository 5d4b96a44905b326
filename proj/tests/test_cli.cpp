// Runs the svp executable end to end.
#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() /
            ("svp_cli_" + std::to_string(::getpid()) + "_" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  std::string Path(const std::string& name) const { return (root_ / name).string(); }

  Result Run(const std::string& args, const std::string& env = "") const {
    const std::string out = Path("stdout.txt");
    const std::string err = Path("stderr.txt");
    const std::string cmd = (env.empty() ? "" : env + " ") + SVP_CLI_PATH + std::string(" ") + args +
                            " >" + out + " 2>" + err;
    const int status = std::system(cmd.c_str());
    Result r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = Slurp(out);
    r.err = Slurp(err);
    return r;
  }

  // Relative path -> bytes for every file below dir.
  static std::map<std::string, std::string> Snapshot(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
      if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = Slurp(e.path());
    }
    return files;
  }

  fs::path root_;
};

constexpr const char* kSmallGrid = "--grid-n 576";

TEST_F(Cli, SynthWritesScenesAndIsDeterministic) {
  const Result a = Run("synth --n 8 --scenes 5 --seed 1 -o " + Path("a"));
  ASSERT_EQ(a.code, 0) << a.err;
  const auto first = Snapshot(Path("a"));
  for (int k = 0; k < 5; ++k) {
    char name[32];
    std::snprintf(name, sizeof(name), "scene_%03d.json", k);
    EXPECT_TRUE(first.count(name)) << name;
  }
  EXPECT_TRUE(first.count("manifest.json"));
  EXPECT_TRUE(first.count("run_config.json"));
  EXPECT_NE(first.at("manifest.json").find("scene_004"), std::string::npos);

  ASSERT_EQ(Run("synth --n 8 --scenes 5 --seed 1 -o " + Path("a")).code, 0);
  EXPECT_EQ(Snapshot(Path("a")), first);
  ASSERT_EQ(Run("synth --n 8 --scenes 5 --seed 1 -j 4 -o " + Path("b")).code, 0);
  auto second = Snapshot(Path("b"));
  // run_config.json records the output path; everything else must match.
  EXPECT_NE(second.at("run_config.json"), first.at("run_config.json"));
  second.erase("run_config.json");
  auto first_scenes = first;
  first_scenes.erase("run_config.json");
  EXPECT_EQ(second, first_scenes);
}

TEST_F(Cli, UnwritableOutputExitsTwo) {
  std::ofstream(Path("blocker")) << "x";
  const Result r = Run("synth --n 3 --scenes 1 -o " + Path("blocker/sub"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("\"exit_code\":2"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("\"error\""), std::string::npos);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(Run("").code, 1);
  EXPECT_EQ(Run("synth").code, 1);
  EXPECT_EQ(Run("synth --n two -o " + Path("x")).code, 1);
  EXPECT_EQ(Run("solve --scenes " + Path("missing") + " -o " + Path("p")).code, 2);
  const Result help = Run("--help");
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("synth"), std::string::npos);
}

TEST_F(Cli, CorruptTableExitsThree) {
  ASSERT_EQ(Run(std::string("synth --n 4 --scenes 2 --tables ") + kSmallGrid + " -o " + Path("s")).code, 0);
  ASSERT_TRUE(fs::exists(Path("s/scene_001.rpet")));
  ASSERT_EQ(Run("solve --scenes " + Path("s") + " --tables " + Path("s") + " -o " + Path("p")).code, 0);
  fs::resize_file(Path("s/scene_001.rpet"), fs::file_size(Path("s/scene_001.rpet")) - 10);
  const Result r = Run("solve --scenes " + Path("s") + " --tables " + Path("s") + " -o " + Path("q"));
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("corrupt-table"), std::string::npos) << r.err;
}

TEST_F(Cli, TableGridMismatchExitsFour) {
  ASSERT_EQ(Run(std::string("synth --n 3 --scenes 1 --tables ") + kSmallGrid + " -o " + Path("s")).code, 0);
  const Result r = Run("solve --scenes " + Path("s") + " --tables " + Path("s") + " --grid-n 72 -o " + Path("p"));
  EXPECT_EQ(r.code, 4) << r.err;
}

TEST_F(Cli, ConstantTranslationsAndEval) {
  ASSERT_EQ(Run("synth --n 6 --scenes 3 --seed 4 --radius-min 0.7 --radius-max 1.3 -o " + Path("s")).code, 0);
  ASSERT_EQ(Run(std::string("solve --scenes ") + Path("s") + " " + kSmallGrid +
                " --translation constant-z -o " + Path("pz")).code, 0);
  const std::string pred = Slurp(Path("pz/scene_000.json"));
  size_t count = 0;
  for (size_t pos = pred.find("\"t\""); pos != std::string::npos; pos = pred.find("\"t\"", pos + 1)) {
    const size_t open = pred.find('[', pos);
    std::string body = pred.substr(open, pred.find(']', open) - open + 1);
    body.erase(std::remove_if(body.begin(), body.end(), ::isspace), body.end());
    EXPECT_EQ(body, "[0.0,0.0,1.0]");
    ++count;
  }
  EXPECT_EQ(count, 6u);
  EXPECT_NE(pred.find("\"translation_source\": \"constant-z\""), std::string::npos);

  // pred = gt scores 1.0 everywhere.
  ASSERT_EQ(Run("eval --pred " + Path("s") + " --gt " + Path("s") + " -o " + Path("e")).code, 0);
  std::stringstream csv(Slurp(Path("e/report.csv")));
  std::string line;
  std::getline(csv, line);
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    std::stringstream cells(line);
    std::string cell;
    for (int c = 0; std::getline(cells, cell, ','); ++c) {
      if (c >= 3) {
        EXPECT_EQ(cell, "1") << line;
      }
    }
  }
  EXPECT_EQ(rows, 4);  // three scenes + mean
  EXPECT_TRUE(fs::exists(Path("e/report.json")));
  EXPECT_TRUE(fs::exists(Path("e/sweep.csv")));

  // Exact translations beat the constant baseline.
  ASSERT_EQ(Run(std::string("solve --scenes ") + Path("s") + " " + kSmallGrid + " -o " + Path("pg")).code, 0);
  ASSERT_EQ(Run("eval --pred " + Path("pz") + " --gt " + Path("s") + " -o " + Path("ez")).code, 0);
  ASSERT_EQ(Run("eval --pred " + Path("pg") + " --gt " + Path("s") + " -o " + Path("eg")).code, 0);
  auto mean_translation = [&](const std::string& file) {
    std::stringstream in(Slurp(file));
    std::string l;
    std::string last;
    while (std::getline(in, l)) last = l;
    std::stringstream cells(last);
    std::string cell;
    for (int c = 0; c <= 10; ++c) std::getline(cells, cell, ',');
    return std::stod(cell);
  };
  EXPECT_EQ(mean_translation(Path("eg/report.csv")), 1.0);
  EXPECT_LT(mean_translation(Path("ez/report.csv")), 1.0);
}

TEST_F(Cli, IdMismatchExitsFour) {
  ASSERT_EQ(Run("synth --n 3 --scenes 3 -o " + Path("s")).code, 0);
  ASSERT_EQ(Run("synth --n 3 --scenes 2 -o " + Path("p")).code, 0);
  const Result r = Run("eval --pred " + Path("p") + " --gt " + Path("s") + " -o " + Path("e"));
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.err.find("scene_002"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("consistency"), std::string::npos) << r.err;
}

TEST_F(Cli, JobsDoNotChangeOutputs) {
  ASSERT_EQ(Run("synth --n 5 --scenes 4 --seed 9 -o " + Path("s")).code, 0);
  const std::string solve = std::string("solve --scenes ") + Path("s") + " " + kSmallGrid +
                            " --noise 0.05 --symmetry 0,1,2 -o " + Path("p");
  ASSERT_EQ(Run(solve + " -j 1").code, 0);
  const auto serial = Snapshot(Path("p"));
  ASSERT_EQ(Run(solve + " -j 3").code, 0);
  EXPECT_EQ(Snapshot(Path("p")), serial);
  const std::string eval = "eval --pred " + Path("p") + " --gt " + Path("s") + " -o " + Path("e");
  ASSERT_EQ(Run(eval + " -j 1").code, 0);
  const auto serial_eval = Snapshot(Path("e"));
  ASSERT_EQ(Run(eval + " -j 0").code, 0);
  EXPECT_EQ(Snapshot(Path("e")), serial_eval);
}

TEST_F(Cli, SeedEnvironmentOverride) {
  ASSERT_EQ(Run("synth --n 4 --scenes 2 --seed 2 -o " + Path("a")).code, 0);
  ASSERT_EQ(Run("synth --n 4 --scenes 2 --seed 1 -o " + Path("b"), "SVP_SEED=2").code, 0);
  ASSERT_EQ(Run("synth --n 4 --scenes 2 --seed 1 -o " + Path("c")).code, 0);
  EXPECT_EQ(Slurp(Path("a/scene_001.json")), Slurp(Path("b/scene_001.json")));
  EXPECT_NE(Slurp(Path("a/scene_001.json")), Slurp(Path("c/scene_001.json")));
  EXPECT_NE(Slurp(Path("b/run_config.json")).find("\"seed\": 2"), std::string::npos);
  EXPECT_EQ(Run("synth --n 4 --scenes 1 -o " + Path("d"), "SVP_SEED=abc").code, 1);
}

TEST_F(Cli, ConfigReplayReproducesRun) {
  ASSERT_EQ(Run("synth --n 4 --scenes 2 --seed 3 -o " + Path("s")).code, 0);
  ASSERT_EQ(Run(std::string("solve --scenes ") + Path("s") + " " + kSmallGrid +
                " --max-sweeps 20 --noise 0.1 -o " + Path("p")).code, 0);
  const auto original = Snapshot(Path("p"));
  fs::copy_file(Path("p/run_config.json"), Path("solve.json"));
  fs::remove_all(Path("p"));
  const Result r = Run("solve --config " + Path("solve.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Snapshot(Path("p")), original);

  std::ofstream(Path("bad.json")) << R"({"no-such-flag": 1})";
  EXPECT_NE(Run("solve --config " + Path("bad.json")).code, 0);
}

TEST_F(Cli, GridAndReport) {
  const Result g = Run("grid --n 72 -o " + Path("g.so3g"));
  ASSERT_EQ(g.code, 0) << g.err;
  EXPECT_NE(g.out.find("\"covering_radius\""), std::string::npos);
  EXPECT_EQ(fs::file_size(Path("g.so3g")), 21u + 72 * 32);

  ASSERT_EQ(Run("synth --n 4 --scenes 2 -o " + Path("s")).code, 0);
  ASSERT_EQ(Run("eval --pred " + Path("s") + " --gt " + Path("s") + " -o " + Path("e1")).code, 0);
  ASSERT_EQ(Run("eval --pred " + Path("s") + " --gt " + Path("s") + " --no-sweep -o " + Path("e2")).code, 0);
  EXPECT_FALSE(fs::exists(Path("e2/sweep.csv")));
  const Result r = Run("report " + Path("e1/report.csv") + " " + Path("e2/report.csv") + " -o " +
                       Path("summary.csv") + " --json " + Path("summary.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string summary = Slurp(Path("summary.csv"));
  EXPECT_NE(summary.find("e1/report,4,"), std::string::npos) << summary;
  EXPECT_NE(summary.find("\nmean,"), std::string::npos);
  EXPECT_TRUE(fs::exists(Path("summary.json")));

  std::ofstream(Path("junk.csv")) << "a,b\n1,2\n";
  EXPECT_EQ(Run("report " + Path("junk.csv") + " -o " + Path("x.csv")).code, 3);
}

}  // namespace
