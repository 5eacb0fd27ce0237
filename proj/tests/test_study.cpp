#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "ncfem/registry.hpp"
#include "ncfem/study.hpp"

using namespace ncfem;

namespace {

StudyConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_study_config(in);
}

ErrorCode parse_error(const std::string& text) {
  try {
    parse(text);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

std::string strip_wall(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + '\n';
  return out;
}

}  // namespace

TEST(Study, ParseConfig) {
  StudyConfig c = parse(
      "[study]\nproblem = P3\nscheme = IPG\ntheta = 0\neta = auto\ndegree = 2\nlevels = 3\nn0 = 2\nseed = 9\n"
      "[checks]\nrate_l2 = 2.8 3.2 2\nrate_energy = 1.8 inf\naudit = true\nmax_wall_ms = 1000\n");
  EXPECT_EQ(c.problem, "P3");
  EXPECT_EQ(c.method.scheme, Scheme::IPG);
  EXPECT_EQ(c.method.theta, 0);
  EXPECT_EQ(c.method.degree, 2);
  EXPECT_TRUE(c.auto_eta);
  EXPECT_EQ(c.levels, 3);
  EXPECT_EQ(c.seed, 9u);
  ASSERT_EQ(c.checks.rates.size(), 2u);
  EXPECT_EQ(c.checks.rates[0].pairs, 2);
  EXPECT_TRUE(std::isinf(c.checks.rates[1].hi));
  EXPECT_TRUE(c.checks.audit);
  EXPECT_EQ(*c.checks.max_wall_ms, 1000.0);

  StudyConfig d = parse("[study]\nscheme = IPG\neta = 2.5\n");
  EXPECT_FALSE(d.auto_eta);
  EXPECT_EQ(d.method.eta, 2.5);
  EXPECT_EQ(d.method.theta, -1);
}

TEST(Study, ConfigErrors) {
  for (const char* bad : {"[study]\nlevels = 1\n", "[study]\nproblem = P9\n", "[study]\nscheme = FEM\n",
                          "[study]\nscheme = IPG\ntheta = 2\n", "[study]\nscheme = IPG\neta = -1\n",
                          "[study]\nlevel = 3\n", "[other]\nx = 1\n", "[study]\nlevels = three\n",
                          "[checks]\nrate_energy = 1 2\n", "[checks]\nrate_l2 = 2 1\n", "[checks]\nrate_l2 = 1 2 9\n",
                          "[study]\ntheta = 1\n", "[study]\nstrang = false\n[checks]\nstrang_dominance = true\n",
                          "not an ini [\n"}) {
    EXPECT_EQ(parse_error(bad), ErrorCode::ConfigError) << bad;
  }
  EXPECT_THROW(load_study_config("/nonexistent/config.ini"), Error);
}

TEST(Study, CrStudyWritesReports) {
  auto dir = std::filesystem::temp_directory_path() / "ncfem_study_test";
  std::filesystem::remove_all(dir);
  StudyConfig cfg = parse("[study]\nproblem = P1\nscheme = CR1\nlevels = 4\nn0 = 4\n[checks]\nrate_l2 = 1.85 2.15\n"
                          "strang_dominance = true\naudit = true\n");
  cfg.output = dir.string();
  ConvergenceReport rep = run_study(cfg);
  ASSERT_EQ(rep.rows.size(), 4u);
  for (size_t i = 1; i < rep.rows.size(); ++i) EXPECT_NEAR(rep.rows[i].h, rep.rows[i - 1].h / 2, 1e-15);
  auto l2 = rep.rates("l2");
  EXPECT_GE(*l2.back(), 1.85);
  EXPECT_LE(*l2.back(), 2.15);
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(rep.checks.size(), 3u);

  std::ifstream csv(dir / "report.csv");
  std::stringstream text;
  text << csv.rdbuf();
  std::string first;
  std::getline(text, first);
  EXPECT_EQ(first, "level,h,ndof,err_l2,err_h1b,err_energy,cons_dual,alpha_h,strang_bound,wall_ms");
  EXPECT_NE(text.str().find(",nan,"), std::string::npos);  // no energy norm for CR1
  EXPECT_TRUE(std::filesystem::exists(dir / "report.md"));

  // identical reruns up to the timing column
  ConvergenceReport again = run_study(cfg);
  std::ostringstream a, b;
  rep.write_csv(a);
  again.write_csv(b);
  EXPECT_EQ(strip_wall(a.str()), strip_wall(b.str()));
  std::filesystem::remove_all(dir);
}

TEST(Study, FailingCheckReported) {
  StudyConfig cfg = parse("[study]\nproblem = P1\nscheme = IPG\ntheta = 1\neta = 1\nlevels = 2\nn0 = 2\n"
                          "strang = false\n[checks]\nrate_energy = 5 6\n");
  ConvergenceReport rep = run_study(cfg);
  EXPECT_FALSE(rep.passed());
  std::ostringstream md;
  rep.write_markdown(md);
  EXPECT_NE(md.str().find("FAIL rate_energy"), std::string::npos);
}

TEST(Study, ListProblems) {
  std::ostringstream out;
  list_problems(out);
  for (const auto& n : problem_names()) EXPECT_NE(out.str().find(n + "  "), std::string::npos) << n;
  std::string p2 = describe_problem(make_problem("P2"));
  EXPECT_NE(p2.find("ReactionLowerBound"), std::string::npos);
  EXPECT_NE(p2.find("CR1 audit: pass"), std::string::npos);

  ProblemSpec broken = make_problem("P1");
  broken.name = "broken";
  broken.r = constant_field(-1.0);
  std::string d = describe_problem(broken);
  EXPECT_NE(d.find("FAIL"), std::string::npos);
  EXPECT_NE(d.find("violated: r + div(c)/2 >= 0"), std::string::npos);
}

TEST(Study, MeshInfo) {
  std::ostringstream out;
  mesh_info(out, generate_unit_square(2, uniform_layout(BoundaryTag::Gamma3)));
  EXPECT_NE(out.str().find("triangles  8"), std::string::npos);
  EXPECT_NE(out.str().find("consistency ok"), std::string::npos);
}

TEST(Study, ExitCodes) {
  EXPECT_EQ(exit_code(ErrorCode::ConfigError), 2);
  EXPECT_EQ(exit_code(ErrorCode::ParseError), 2);
  EXPECT_EQ(exit_code(ErrorCode::SingularSystem), 3);
  EXPECT_EQ(exit_code(ErrorCode::RankDeficient), 3);
}
