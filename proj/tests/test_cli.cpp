#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "commands.hpp"
#include "imbessel/series.hpp"

namespace {

using namespace imbessel;
using namespace imbessel::cli;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, sep);) out.push_back(item);
  return out;
}

struct Invocation {
  int code = 0;
  std::string out, err;
};

Invocation invoke(std::vector<const char*> args) {
  args.insert(args.begin(), "imbessel");
  std::ostringstream out, err;
  const int code = run(static_cast<int>(args.size()), args.data(), out, err);
  return {code, out.str(), err.str()};
}

// The installed binary, for exit statuses as a shell sees them.
Invocation shell(const std::string& args) {
  const std::string cmd = std::string(IMBESSEL_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  Invocation r;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

TEST(Format, ShortestRoundTrip) {
  for (double v : {0.1, 1.0 / 3, -2.5e-300, 6.02214076e23, 0.7651976865579666, 5e-324}) {
    const std::string s = format_double(v);
    EXPECT_EQ(std::strtod(s.c_str(), nullptr), v) << s;
  }
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(0.0), "0");
}

TEST(Grid, Points) {
  GridSpec g;
  g.x_min = 1;
  g.x_max = 3;
  g.x_steps = 3;
  EXPECT_EQ(grid_points(g), (std::vector<double>{1, 2, 3}));
  g.scale = Scale::Log;
  g.x_min = 0.01;
  g.x_max = 100;
  g.x_steps = 5;
  const auto p = grid_points(g);
  ASSERT_EQ(p.size(), 5u);
  EXPECT_DOUBLE_EQ(p[2], 1.0);
  EXPECT_EQ(p.back(), 100.0);
  g.x_steps = 1;
  EXPECT_EQ(grid_points(g), std::vector<double>{0.01});
  g.x_steps = 0;
  EXPECT_THROW(grid_points(g), UsageError);
  g.x_steps = 3;
  g.x_min = 500;
  EXPECT_THROW(grid_points(g), UsageError);
  g.x_min = 0;
  EXPECT_THROW(grid_points(g), DomainError);
  g.x_list = {0.5, -1};
  EXPECT_THROW(grid_points(g), DomainError);
}

TEST(Eval, ZeroOrderAtOne) {
  const auto r = invoke({"eval", "--kind", "osc", "--nu", "0", "--x", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = split(r.out, '\n');
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0], "x,nu,cos_part,sin_part,d_cos,d_sin,terms,bound");
  const auto f = split(lines[1], ',');
  ASSERT_EQ(f.size(), 8u);
  EXPECT_EQ(f[2], "0.7651976865579666");
  EXPECT_EQ(f[3], "0");
}

TEST(Eval, PrintsLibraryValuesExactly) {
  const auto r = invoke({"eval", "--kind", "mod", "--nu", "1.3", "--x", "0.7"});
  ASSERT_EQ(r.code, 0);
  const auto f = split(split(r.out, '\n')[1], ',');
  const auto lib = eval_pair(Kind::Modified, 1.3, 0.7, 1e-12);
  EXPECT_EQ(std::strtod(f[2].c_str(), nullptr), lib.cos_part);
  EXPECT_EQ(std::strtod(f[3].c_str(), nullptr), lib.sin_part);
  EXPECT_EQ(std::strtod(f[4].c_str(), nullptr), lib.d_cos);
  EXPECT_EQ(std::strtod(f[5].c_str(), nullptr), lib.d_sin);
  EXPECT_EQ(std::stoi(f[6]), lib.terms_used);
  EXPECT_EQ(std::strtod(f[7].c_str(), nullptr), lib.tail_bound);
}

TEST(Eval, SmallArgument) {
  const auto r = invoke({"eval", "--kind", "osc", "--nu", "1", "--x", "1e-6"});
  ASSERT_EQ(r.code, 0);
  const auto f = split(split(r.out, '\n')[1], ',');
  EXPECT_NEAR(std::strtod(f[3].c_str(), nullptr), std::sin(std::log(1e-6)), 1e-11);
}

TEST(Eval, FixedTermsAndJson) {
  const auto r = invoke({"eval", "--nu", "1", "--x", "2", "--terms", "8", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_TRUE(j.is_object());
  EXPECT_EQ(j["terms"], 8);
  EXPECT_EQ(j["cos_part"].get<double>(), eval_pair_terms(Kind::Oscillatory, 1, 2, 8).cos_part);
}

TEST(Eval, ExitCodes) {
  const auto neg = shell("eval --x -1");
  EXPECT_EQ(neg.code, 2);
  EXPECT_NE(neg.out.find("x must be > 0"), std::string::npos) << neg.out;
  EXPECT_EQ(shell("eval --kind sideways").code, 2);
  EXPECT_EQ(shell("frobnicate").code, 2);
  EXPECT_EQ(shell("").code, 2);
  EXPECT_EQ(shell("eval --nu 0 --x 1 --tol 1e-25").code, 3);
  EXPECT_EQ(shell("eval --nu 0 --x 1").code, 0);
  EXPECT_EQ(shell("eval --terms 0").code, 2);
  EXPECT_EQ(shell("--help").code, 0);
}

TEST(Table, Cardinality) {
  TableOptions o;
  o.grid.x_min = 0.5;
  o.grid.x_max = 1.5;
  o.grid.x_steps = 3;
  o.grid.nu_list = {0, 1};
  std::ostringstream out;
  ASSERT_EQ(cmd_table(o, out), 0);
  const auto lines = split(out.str(), '\n');
  ASSERT_EQ(lines.size(), 7u);
  // ν-major, then x.
  const std::vector<std::pair<double, double>> order{{0.5, 0}, {1, 0}, {1.5, 0},
                                                     {0.5, 1}, {1, 1}, {1.5, 1}};
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto f = split(lines[i + 1], ',');
    EXPECT_EQ(std::strtod(f[0].c_str(), nullptr), order[i].first);
    EXPECT_EQ(std::strtod(f[1].c_str(), nullptr), order[i].second);
  }
}

TEST(Table, CsvRoundTripAndZeroOrder) {
  TableOptions o;
  o.grid.nu_list = {0, 0.5, 2};
  o.grid.x_steps = 7;
  std::ostringstream out;
  ASSERT_EQ(cmd_table(o, out), 0);
  const auto lines = split(out.str(), '\n');
  ASSERT_EQ(lines.size(), 22u);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split(lines[i], ',');
    ASSERT_EQ(f.size(), 8u);
    const double x = std::strtod(f[0].c_str(), nullptr);
    const double nu = std::strtod(f[1].c_str(), nullptr);
    const auto lib = eval_pair(Kind::Oscillatory, nu, x, 1e-12);
    EXPECT_EQ(std::strtod(f[2].c_str(), nullptr), lib.cos_part);
    EXPECT_EQ(std::strtod(f[3].c_str(), nullptr), lib.sin_part);
    EXPECT_EQ(std::strtod(f[5].c_str(), nullptr), lib.d_sin);
    if (nu == 0) {
      EXPECT_EQ(f[3], "0");
      EXPECT_EQ(f[5], "0");
    }
  }
}

TEST(Table, JsonMatchesCsv) {
  TableOptions o;
  o.kind = Kind::Modified;
  o.grid.x_list = {0.25, 1.75};
  o.grid.nu_list = {0.5, 1.5};
  std::ostringstream csv, json;
  ASSERT_EQ(cmd_table(o, csv), 0);
  o.format = Format::Json;
  ASSERT_EQ(cmd_table(o, json), 0);
  const auto j = nlohmann::json::parse(json.str());
  const auto lines = split(csv.str(), '\n');
  ASSERT_EQ(j.size(), lines.size() - 1);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto f = split(lines[i + 1], ',');
    EXPECT_EQ(j[i]["x"].get<double>(), std::strtod(f[0].c_str(), nullptr));
    EXPECT_EQ(j[i]["cos_part"].get<double>(), std::strtod(f[2].c_str(), nullptr));
    EXPECT_EQ(j[i]["bound"].get<double>(), std::strtod(f[7].c_str(), nullptr));
  }
}

TEST(Table, DeterministicAcrossThreads) {
  TableOptions o;
  o.grid.x_steps = 40;
  o.grid.nu_list = {-1, 0, 0.5, 1, 1.5, 2, 3};
  std::string first;
  for (int threads : {1, 8, 3, 8, 1}) {
    o.threads = threads;
    std::ostringstream out;
    ASSERT_EQ(cmd_table(o, out), 0);
    if (first.empty()) first = out.str();
    EXPECT_EQ(out.str(), first) << threads;
  }
  setenv("IMBESSEL_THREADS", "2", 1);
  EXPECT_EQ(worker_count(8), 2);
  o.threads = 8;
  std::ostringstream capped;
  cmd_table(o, capped);
  EXPECT_EQ(capped.str(), first);
  unsetenv("IMBESSEL_THREADS");
  EXPECT_EQ(worker_count(5), 5);
  EXPECT_GE(worker_count(0), 1);
}

TEST(Table, ErrorsPropagate) {
  EXPECT_EQ(shell("table --x-steps 0").code, 2);
  EXPECT_EQ(shell("table --x-min 2 --x-max 1").code, 2);
  EXPECT_EQ(shell("table --x-min 0.5 --x-max 20 --x-steps 3 --nu 0").code, 3);
  EXPECT_EQ(shell("table --x-scale cubic").code, 2);
}

std::string summary_field(const std::string& report, const std::string& key) {
  const auto lines = split(report, '\n');
  for (const auto& part : split(lines.back(), ','))
    if (part.rfind(key + "=", 0) == 0) return part.substr(key.size() + 1);
  return {};
}

TEST(Compare, DefaultGridPasses) {
  CompareOptions o;
  std::ostringstream out;
  EXPECT_EQ(cmd_compare(o, out), 0);
  EXPECT_EQ(summary_field(out.str(), "result"), "PASS");
  EXPECT_EQ(summary_field(out.str(), "points"), "100");
  EXPECT_EQ(summary_field(out.str(), "enclosed"), "100/100");
  EXPECT_LE(std::strtod(summary_field(out.str(), "max_error").c_str(), nullptr), 1e-12);
}

TEST(Compare, TruncatedFailsHonestly) {
  CompareOptions o;
  o.terms = 1;
  std::ostringstream out;
  EXPECT_EQ(cmd_compare(o, out), kExitTolerance);
  const std::string report = out.str();
  EXPECT_EQ(summary_field(report, "result"), "FAIL");
  // The bound still holds; the accuracy target does not.
  EXPECT_EQ(summary_field(report, "enclosed"), "100/100");
  EXPECT_GT(std::strtod(summary_field(report, "max_error").c_str(), nullptr), 1e-12);
  EXPECT_EQ(shell("compare --terms 1").code, 3);
}

TEST(Compare, PerPointColumns) {
  const auto r = invoke({"compare", "--kind", "mod", "--nu", "0.5,2", "--x", "0.5,1.5",
                         "--oracle-digits", "100"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = split(r.out, '\n');
  ASSERT_EQ(lines.size(), 6u);
  EXPECT_EQ(lines[0],
            "x,nu,terms,cos_err,sin_err,d_cos_err,d_sin_err,bound,d_bound,enclosed,within_tol");
  for (int i = 1; i <= 4; ++i) {
    const auto f = split(lines[i], ',');
    ASSERT_EQ(f.size(), 11u);
    EXPECT_LE(std::strtod(f[3].c_str(), nullptr), std::strtod(f[7].c_str(), nullptr));
    EXPECT_EQ(f[9], "1");
    EXPECT_EQ(f[10], "1");
  }
  EXPECT_EQ(summary_field(r.out, "kind"), "mod");
}

TEST(Compare, EmptyGridIsUsageError) {
  EXPECT_EQ(shell("compare --x-steps 0").code, 2);
  CompareOptions o;
  o.grid.nu_list.clear();
  std::ostringstream out;
  EXPECT_THROW(cmd_compare(o, out), UsageError);
  EXPECT_EQ(shell("compare --oracle-digits 20").code, 2);
}

TEST(Bounds, Examples) {
  BoundsOptions o;
  o.nu = 1;
  o.x = 2;
  o.terms = {2, 4, 8, 16};
  std::ostringstream out;
  ASSERT_EQ(cmd_bounds(o, out), 0);
  const auto lines = split(out.str(), '\n');
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[0], "nu,x,N,F,m_nu,tail_bound,enclosure,empirical_error");
  double prev = INFINITY;
  for (int i = 1; i <= 4; ++i) {
    const auto f = split(lines[i], ',');
    const double bound = std::strtod(f[5].c_str(), nullptr);
    EXPECT_LT(bound, prev);
    EXPECT_LE(std::strtod(f[7].c_str(), nullptr), std::strtod(f[6].c_str(), nullptr));
    EXPECT_GE(std::strtod(f[6].c_str(), nullptr), bound);
    prev = bound;
    if (f[2] == "8") EXPECT_LE(bound, 1.48e-8);
  }

  o.x = 1;
  o.terms = {8};
  std::ostringstream at_one;
  ASSERT_EQ(cmd_bounds(o, at_one), 0);
  const auto f = split(split(at_one.str(), '\n')[1], ',');
  EXPECT_LE(std::strtod(f[7].c_str(), nullptr), 1e-13);
}

TEST(Bounds, JsonAndErrors) {
  const auto r = invoke({"bounds", "--nu", "4", "--x", "0.5", "--terms", "3,6", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j.size(), 2u);
  EXPECT_DOUBLE_EQ(j[0]["F"].get<double>(), 36.0);
  EXPECT_LE(j[1]["empirical_error"].get<double>(), j[1]["enclosure"].get<double>());
  EXPECT_EQ(shell("bounds --terms 0").code, 2);
  EXPECT_EQ(shell("bounds --x 0").code, 2);
}

TEST(Classify, Examples) {
  const auto r = invoke({"classify", "--a", "2", "--b", "1", "--c", "4", "--beta", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = split(r.out, '\n');
  EXPECT_EQ(lines[0], "a,b,c,beta,order,nu,gamma,prefactor_exponent");
  const auto f = split(lines[1], ',');
  EXPECT_EQ(f[4], "imaginary");
  EXPECT_NEAR(std::strtod(f[5].c_str(), nullptr), 0.8660254037844386, 1e-16);
  EXPECT_EQ(f[6], "2");
  EXPECT_EQ(f[7], "-0.5");

  const auto real = invoke({"classify", "--a", "1", "--b", "-4", "--c", "1", "--beta", "1",
                            "--format", "json"});
  const auto j = nlohmann::json::parse(real.out);
  EXPECT_EQ(j["order"], "real");
  EXPECT_EQ(j["nu"].get<double>(), 2.0);

  const auto plain = invoke({"classify", "--a", "1", "--b", "0.25", "--c", "1", "--beta", "1"});
  EXPECT_EQ(split(split(plain.out, '\n')[1], ',')[4], "imaginary");
  EXPECT_EQ(split(split(plain.out, '\n')[1], ',')[5], "0.5");

  EXPECT_EQ(shell("classify --a 1 --b 1 --c 1 --beta 0").code, 2);
  EXPECT_EQ(shell("classify --a 1 --b 1 --c -1 --beta 1").code, 2);
  EXPECT_EQ(shell("classify --a 1 --b 1").code, 2);
}

}  // namespace
