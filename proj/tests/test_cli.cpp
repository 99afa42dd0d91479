#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace {

struct Outcome {
  int code;
  std::string out;
};

Outcome run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + LPSANTALO_CLI + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string body(const char* name) { return std::string("--body ") + LPSANTALO_DATA + "/" + name; }

std::vector<nlohmann::json> lines(const std::string& text) {
  std::vector<nlohmann::json> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(nlohmann::json::parse(line));
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

}  // namespace

TEST(Cli, ComputeSquareCsv) {
  const Outcome r = run("compute " + body("square.json") + " --p inf --format csv");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto rows = split(r.out, '\n');
  ASSERT_EQ(rows.size(), 2u);
  const auto header = split(rows[0], ',');
  const auto cells = split(rows[1], ',');
  ASSERT_EQ(header.size(), cells.size());
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "mahler_volume") EXPECT_NEAR(std::stod(cells[i]), 16.0, 1e-8);
    if (header[i] == "spec_hash") EXPECT_EQ(cells[i].size(), 16u);
    if (header[i] == "p") EXPECT_EQ(cells[i], "inf");
  }
  EXPECT_EQ(header.back(), "spec_hash");
}

TEST(Cli, ComputeBallJson) {
  const Outcome r = run("compute " + body("disk.json") + " --p inf,1");
  ASSERT_EQ(r.code, 0);
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 2u);
  const double pi = std::numbers::pi;
  EXPECT_NEAR(rows[0]["mahler_volume"].get<double>(), 2 * pi * pi, 1e-8);
  EXPECT_EQ(rows[1]["p"], "1");
  for (const auto& row : rows) {
    EXPECT_TRUE(row.contains("spec_hash"));
    EXPECT_TRUE(row.contains("seed"));
  }
}

TEST(Cli, ParseErrorsExitTwo) {
  EXPECT_EQ(run("compute " + body("malformed.json")).code, 2);
  EXPECT_EQ(run("compute " + body("missing.json")).code, 2);
  EXPECT_EQ(run("sweep " + body("square.json") + " --p ''").code, 2);
  EXPECT_EQ(run("sweep " + body("square.json") + " --p 1,abc").code, 2);
  EXPECT_EQ(run("compute --format xml " + body("square.json")).code, 2);
  EXPECT_EQ(run("").code, 2);
}

TEST(Cli, NumericFailureExitThree) {
  // p so large that the averaged exponential underflows in double precision.
  const Outcome r = run("compute " + body("square.json") + " --p 1e300");
  EXPECT_EQ(r.code, 3);
}

TEST(Cli, ReplayIsByteIdentical) {
  const std::string args = "verify " + body("triangle.json") + " " + body("kite.json") + " --p 1,inf --seed 5";
  const Outcome a = run(args);
  const Outcome b = run(args, "LP_POLAR_THREADS=1");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  const Outcome c = run(args);
  EXPECT_EQ(a.out, c.out);
}

TEST(Cli, VerifyRowsAndSymmetricBody) {
  const Outcome r = run("verify " + body("square.json") + " --p 2");
  ASSERT_EQ(r.code, 0);
  bool saw_symmetric = false;
  for (const auto& row : lines(r.out)) {
    EXPECT_NE(row["verdict"], "fail") << row.dump();
    EXPECT_EQ(row["seed"], 1);
    if (row["lemma"] == "santalo_gradient") {
      saw_symmetric = row["details"].value("symmetric", false);
      EXPECT_LE(row["details"]["santalo_norm"].get<double>(), 1e-7);
    }
  }
  EXPECT_TRUE(saw_symmetric);
}

TEST(Cli, OriginOutsideIsFlaggedNotFailed) {
  const Outcome r = run("verify " + body("shifted_square.json") + " --p inf");
  ASSERT_EQ(r.code, 0);
  const auto rows = lines(r.out);
  ASSERT_FALSE(rows.empty());
  EXPECT_EQ(rows[0]["lemma"], "finiteness");
  EXPECT_EQ(rows[0]["lhs"], "inf");
  EXPECT_EQ(rows[0]["verdict"], "pass");
}

TEST(Cli, SweepMonotoneAndBallColumn) {
  const Outcome r = run("sweep " + body("square.json") + " --p 0.5,1,2,4,16,inf --y0 1,0 --format csv");
  ASSERT_EQ(r.code, 0);
  const auto rows = split(r.out, '\n');
  const auto header = split(rows[0], ',');
  const auto col = std::find(header.begin(), header.end(), "h_p") - header.begin();
  double prev = -1e300;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double h = std::stod(split(rows[i], ',')[static_cast<std::size_t>(col)]);
    EXPECT_GE(h, prev);
    prev = h;
  }
  EXPECT_NEAR(prev, 1.0, 1e-15);

  const Outcome b = run("sweep " + body("disk.json") + " --p 1,inf");
  ASSERT_EQ(b.code, 0);
  const auto brows = lines(b.out);
  const double pi = std::numbers::pi;
  EXPECT_NEAR(brows[1]["mahler_volume"].get<double>(), 2 * pi * pi, 1e-5 * 2 * pi * pi);
}

TEST(Cli, DefaultCorpusAndOutputFile) {
  const std::string path = testing::TempDir() + "verify_out.csv";
  const Outcome r = run("verify --corpus 2 --p 1 --format csv --out " + path);
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  FILE* f = std::fopen(path.c_str(), "r");
  ASSERT_NE(f, nullptr);
  char buf[256] = {};
  ASSERT_NE(std::fgets(buf, sizeof buf, f), nullptr);
  std::fclose(f);
  EXPECT_EQ(std::string(buf), "body,p,lemma,lhs,rhs,slack,error_bound,verdict,seed,spec_hash\n");
}
