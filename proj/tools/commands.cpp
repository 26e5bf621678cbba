#include "commands.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "imbessel/bounds.hpp"
#include "imbessel/errors.hpp"
#include "imbessel/oracle.hpp"
#include "imbessel/series.hpp"

namespace imbessel::cli {
namespace {

using Json = nlohmann::ordered_json;

// Rows are computed independently and stored by index; output order never
// depends on which worker finished first.  The first failing row (by index)
// is rethrown.
template <typename T, typename F>
std::vector<T> parallel_map(std::size_t count, int workers, const F& fn) {
  if (count == 0) return {};
  std::vector<std::optional<T>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        slots[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const std::size_t extra = std::min<std::size_t>(count, static_cast<std::size_t>(workers)) - 1;
    for (std::size_t w = 0; w + 1 <= extra; ++w) pool.emplace_back(work);
    work();
  }
  std::vector<T> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

struct GridPoint {
  double nu;
  double x;
};

// ν-major, then x.
std::vector<GridPoint> expand(const GridSpec& grid) {
  const std::vector<double> xs = grid_points(grid);
  if (grid.nu_list.empty()) throw UsageError("grid is empty: no nu values");
  std::vector<GridPoint> points;
  for (double nu : grid.nu_list) {
    if (!std::isfinite(nu)) throw UsageError("nu values must be finite");
    for (double x : xs) points.push_back({nu, x});
  }
  return points;
}

PairResult evaluate(Kind kind, double nu, double x, double tol, std::optional<int> terms) {
  return terms ? eval_pair_terms(kind, nu, x, *terms) : eval_pair(kind, nu, x, tol);
}

const char* const kPairColumns[] = {"x",     "nu",    "cos_part", "sin_part",
                                    "d_cos", "d_sin", "terms",    "bound"};

std::string pair_csv_header() {
  std::string line;
  for (const char* c : kPairColumns) {
    if (!line.empty()) line += ',';
    line += c;
  }
  return line;
}

std::string pair_csv_row(double x, double nu, const PairResult& r) {
  return format_double(x) + ',' + format_double(nu) + ',' + format_double(r.cos_part) + ',' +
         format_double(r.sin_part) + ',' + format_double(r.d_cos) + ',' +
         format_double(r.d_sin) + ',' + std::to_string(r.terms_used) + ',' +
         format_double(r.tail_bound);
}

Json pair_json(double x, double nu, const PairResult& r) {
  Json j;
  j["x"] = x;
  j["nu"] = nu;
  j["cos_part"] = r.cos_part;
  j["sin_part"] = r.sin_part;
  j["d_cos"] = r.d_cos;
  j["d_sin"] = r.d_sin;
  j["terms"] = r.terms_used;
  j["bound"] = r.tail_bound;
  return j;
}

struct PointErrors {
  double cos_err, sin_err, d_cos_err, d_sin_err;
};

template <typename Real>
PointErrors errors_against_oracle(Kind kind, double nu, double x, const PairResult& r) {
  using boost::multiprecision::abs;
  const auto exact = oracle::normalized_pair<Real>(kind, nu, x);
  const auto err = [](double got, const Real& want) {
    return Real(abs(Real(got) - want)).template convert_to<double>();
  };
  return {err(r.cos_part, exact.value.re), err(r.sin_part, exact.value.im),
          err(r.d_cos, exact.derivative.re), err(r.d_sin, exact.derivative.im)};
}

PointErrors oracle_errors(int digits, Kind kind, double nu, double x, const PairResult& r) {
  if (digits <= 50) return errors_against_oracle<oracle::Real50>(kind, nu, x, r);
  return errors_against_oracle<oracle::Real100>(kind, nu, x, r);
}

void check_oracle_digits(int digits) {
  // The oracle never works below 50 digits; above that it switches to 100.
  if (digits < 50 || digits > 100) throw UsageError("--oracle-digits must be in [50, 100]");
}

void check_terms(std::optional<int> terms) {
  if (terms && (*terms < 1 || *terms > kMaxTerms))
    throw UsageError("--terms must be in [1, " + std::to_string(kMaxTerms) + "]");
}

void check_tol(double tol) {
  if (!(tol > 0) || !std::isfinite(tol)) throw UsageError("--tol must be > 0");
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::vector<double> grid_points(const GridSpec& grid) {
  if (!grid.x_list.empty()) {
    std::vector<double> xs = grid.x_list;
    for (double x : xs)
      if (!std::isfinite(x) || !(x > 0)) throw DomainError("x must be > 0");
    return xs;
  }
  if (grid.x_steps < 1) throw UsageError("grid is empty: --x-steps must be >= 1");
  if (!std::isfinite(grid.x_min) || !std::isfinite(grid.x_max))
    throw UsageError("grid bounds must be finite");
  if (!(grid.x_min > 0)) throw DomainError("x must be > 0");
  if (grid.x_min > grid.x_max) throw UsageError("--x-min must be <= --x-max");

  std::vector<double> xs(static_cast<std::size_t>(grid.x_steps));
  if (grid.x_steps == 1) {
    xs[0] = grid.x_min;
    return xs;
  }
  const double last = grid.x_steps - 1;
  for (int i = 0; i < grid.x_steps; ++i) {
    const double t = i / last;
    xs[static_cast<std::size_t>(i)] =
        grid.scale == Scale::Linear
            ? grid.x_min + t * (grid.x_max - grid.x_min)
            : std::exp(std::log(grid.x_min) + t * (std::log(grid.x_max) - std::log(grid.x_min)));
  }
  xs.front() = grid.x_min;
  xs.back() = grid.x_max;
  return xs;
}

int worker_count(int requested) {
  int workers = requested > 0 ? requested
                              : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* cap = std::getenv("IMBESSEL_THREADS")) {
    int limit = 0;
    const std::string_view text(cap);
    const auto res = std::from_chars(text.data(), text.data() + text.size(), limit);
    if (res.ec == std::errc() && limit >= 1) workers = std::min(workers, limit);
  }
  return std::max(workers, 1);
}

int cmd_eval(const EvalOptions& o, std::ostream& out) {
  check_terms(o.terms);
  check_tol(o.tol);
  const PairResult r = evaluate(o.kind, o.nu, o.x, o.tol, o.terms);
  if (o.format == Format::Json) {
    out << pair_json(o.x, o.nu, r).dump(2) << '\n';
  } else {
    out << pair_csv_header() << '\n' << pair_csv_row(o.x, o.nu, r) << '\n';
  }
  return kExitOk;
}

int cmd_table(const TableOptions& o, std::ostream& out) {
  check_terms(o.terms);
  check_tol(o.tol);
  const std::vector<GridPoint> points = expand(o.grid);
  const auto rows = parallel_map<PairResult>(points.size(), worker_count(o.threads),
                                             [&](std::size_t i) {
                                               return evaluate(o.kind, points[i].nu, points[i].x,
                                                               o.tol, o.terms);
                                             });
  if (o.format == Format::Json) {
    Json arr = Json::array();
    for (std::size_t i = 0; i < rows.size(); ++i)
      arr.push_back(pair_json(points[i].x, points[i].nu, rows[i]));
    out << arr.dump(2) << '\n';
    return kExitOk;
  }
  out << pair_csv_header() << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i)
    out << pair_csv_row(points[i].x, points[i].nu, rows[i]) << '\n';
  return kExitOk;
}

int cmd_compare(const CompareOptions& o, std::ostream& out) {
  check_terms(o.terms);
  check_tol(o.tol);
  check_oracle_digits(o.oracle_digits);
  const std::vector<GridPoint> points = expand(o.grid);

  struct Row {
    PairResult result;
    PointErrors errors;
  };
  const auto rows = parallel_map<Row>(
      points.size(), worker_count(o.threads), [&](std::size_t i) {
        const auto& p = points[i];
        const PairResult r = evaluate(o.kind, p.nu, p.x, o.tol, o.terms);
        return Row{r, oracle_errors(o.oracle_digits, o.kind, p.nu, p.x, r)};
      });

  double max_error = 0, max_d_error = 0, max_bound = 0;
  std::size_t enclosed_count = 0, within_count = 0;
  Json records = Json::array();
  std::vector<std::string> lines;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& [r, e] = rows[i];
    const double value_err = std::max(e.cos_err, e.sin_err);
    const double deriv_err = std::max(e.d_cos_err, e.d_sin_err);
    const bool enclosed = value_err <= r.tail_bound && deriv_err <= r.d_tail_bound;
    const bool within = value_err <= o.tol;
    enclosed_count += enclosed;
    within_count += within;
    max_error = std::max(max_error, value_err);
    max_d_error = std::max(max_d_error, deriv_err);
    max_bound = std::max(max_bound, r.tail_bound);
    if (o.format == Format::Json) {
      Json j;
      j["x"] = points[i].x;
      j["nu"] = points[i].nu;
      j["terms"] = r.terms_used;
      j["cos_err"] = e.cos_err;
      j["sin_err"] = e.sin_err;
      j["d_cos_err"] = e.d_cos_err;
      j["d_sin_err"] = e.d_sin_err;
      j["bound"] = r.tail_bound;
      j["d_bound"] = r.d_tail_bound;
      j["enclosed"] = enclosed;
      j["within_tol"] = within;
      records.push_back(std::move(j));
    } else {
      lines.push_back(format_double(points[i].x) + ',' + format_double(points[i].nu) + ',' +
                      std::to_string(r.terms_used) + ',' + format_double(e.cos_err) + ',' +
                      format_double(e.sin_err) + ',' + format_double(e.d_cos_err) + ',' +
                      format_double(e.d_sin_err) + ',' + format_double(r.tail_bound) + ',' +
                      format_double(r.d_tail_bound) + ',' + (enclosed ? "1" : "0") + ',' +
                      (within ? "1" : "0"));
    }
  }
  const bool pass = enclosed_count == rows.size() && within_count == rows.size();

  if (o.format == Format::Json) {
    Json doc;
    doc["points"] = std::move(records);
    Json& s = doc["summary"];
    s["kind"] = std::string(to_string(o.kind));
    s["points"] = rows.size();
    s["max_error"] = max_error;
    s["max_d_error"] = max_d_error;
    s["max_bound"] = max_bound;
    s["enclosed"] = enclosed_count;
    s["within_tol"] = within_count;
    s["result"] = pass ? "PASS" : "FAIL";
    out << doc.dump(2) << '\n';
  } else {
    out << "x,nu,terms,cos_err,sin_err,d_cos_err,d_sin_err,bound,d_bound,enclosed,within_tol\n";
    for (const auto& line : lines) out << line << '\n';
    out << "summary,kind=" << to_string(o.kind) << ",points=" << rows.size()
        << ",max_error=" << format_double(max_error)
        << ",max_d_error=" << format_double(max_d_error)
        << ",max_bound=" << format_double(max_bound) << ",enclosed=" << enclosed_count << '/'
        << rows.size() << ",within_tol=" << within_count << '/' << rows.size()
        << ",result=" << (pass ? "PASS" : "FAIL") << '\n';
  }
  return pass ? kExitOk : kExitTolerance;
}

int cmd_bounds(const BoundsOptions& o, std::ostream& out) {
  check_oracle_digits(o.oracle_digits);
  if (o.terms.empty()) throw UsageError("--terms needs at least one value");
  for (int n : o.terms) check_terms(n);

  Json arr = Json::array();
  if (o.format == Format::Csv) out << "nu,x,N,F,m_nu,tail_bound,enclosure,empirical_error\n";
  for (int n : o.terms) {
    const BoundReport b = bound_report(o.nu, o.x, n);
    const PairResult r = eval_pair_terms(o.kind, o.nu, o.x, n);
    const PointErrors e = oracle_errors(o.oracle_digits, o.kind, o.nu, o.x, r);
    const double empirical = std::max(e.cos_err, e.sin_err);
    if (o.format == Format::Json) {
      Json j;
      j["nu"] = o.nu;
      j["x"] = o.x;
      j["N"] = n;
      j["F"] = b.F;
      j["m_nu"] = b.m_nu;
      j["tail_bound"] = b.tail;
      j["enclosure"] = r.tail_bound;
      j["empirical_error"] = empirical;
      arr.push_back(std::move(j));
    } else {
      out << format_double(o.nu) << ',' << format_double(o.x) << ',' << n << ','
          << format_double(b.F) << ',' << format_double(b.m_nu) << ',' << format_double(b.tail)
          << ',' << format_double(r.tail_bound) << ',' << format_double(empirical) << '\n';
    }
  }
  if (o.format == Format::Json) out << arr.dump(2) << '\n';
  return kExitOk;
}

int cmd_classify(const ClassifyOptions& o, std::ostream& out) {
  const LommelSolution s = classify(o.input);
  const char* order = s.imaginary() ? "imaginary" : "real";
  if (o.format == Format::Json) {
    Json j;
    j["a"] = o.input.a;
    j["b"] = o.input.b;
    j["c"] = o.input.c;
    j["beta"] = o.input.beta;
    j["order"] = order;
    j["nu"] = s.nu();
    j["gamma"] = s.gamma;
    j["prefactor_exponent"] = s.prefactor_exponent;
    out << j.dump(2) << '\n';
  } else {
    out << "a,b,c,beta,order,nu,gamma,prefactor_exponent\n"
        << format_double(o.input.a) << ',' << format_double(o.input.b) << ','
        << format_double(o.input.c) << ',' << format_double(o.input.beta) << ',' << order << ','
        << format_double(s.nu()) << ',' << format_double(s.gamma) << ','
        << format_double(s.prefactor_exponent) << '\n';
  }
  return kExitOk;
}

namespace {

struct CommonFlags {
  std::string kind = "osc";
  std::string format = "csv";
  std::optional<int> terms;
  double tol = 1e-12;
  int oracle_digits = 50;
};

Kind to_kind(const std::string& text) {
  if (auto k = parse_kind(text)) return *k;
  throw UsageError("--kind must be osc or mod");
}

Format to_format(const std::string& text) {
  if (text == "csv") return Format::Csv;
  if (text == "json") return Format::Json;
  throw UsageError("--format must be csv or json");
}

void add_grid_flags(CLI::App* cmd, GridSpec& grid, std::string& scale) {
  cmd->add_option("--x", grid.x_list, "Explicit x values (comma list)")->delimiter(',');
  cmd->add_option("--x-min", grid.x_min, "Smallest x of the grid");
  cmd->add_option("--x-max", grid.x_max, "Largest x of the grid");
  cmd->add_option("--x-steps", grid.x_steps, "Number of x points");
  cmd->add_option("--x-scale", scale, "Grid spacing: linear or log");
  cmd->add_option("--nu", grid.nu_list, "Orders nu (comma list)")->delimiter(',');
}

Scale to_scale(const std::string& text) {
  if (text == "linear") return Scale::Linear;
  if (text == "log") return Scale::Log;
  throw UsageError("--x-scale must be linear or log");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bessel-type functions of pure imaginary order", "imbessel"};
  app.require_subcommand(1);

  CommonFlags eval_flags, table_flags, compare_flags, bounds_flags;
  EvalOptions eval_opts;
  TableOptions table_opts;
  CompareOptions compare_opts;
  BoundsOptions bounds_opts;
  ClassifyOptions classify_opts;
  std::string table_scale = "linear", compare_scale = "linear", classify_format = "csv";

  auto* eval = app.add_subcommand("eval", "Evaluate one (cos, sin) pair with derivatives");
  eval->add_option("--kind", eval_flags.kind, "osc or mod");
  eval->add_option("--nu", eval_opts.nu, "Order nu");
  eval->add_option("--x", eval_opts.x, "Argument x > 0");
  eval->add_option("--tol", eval_flags.tol, "Absolute tolerance");
  eval->add_option("--terms", eval_flags.terms, "Fix the number of summed terms");
  eval->add_option("--format", eval_flags.format, "csv or json");

  auto* table = app.add_subcommand("table", "Tabulate over an (x, nu) grid");
  table->add_option("--kind", table_flags.kind, "osc or mod");
  add_grid_flags(table, table_opts.grid, table_scale);
  table->add_option("--tol", table_flags.tol, "Absolute tolerance");
  table->add_option("--terms", table_flags.terms, "Fix the number of summed terms");
  table->add_option("--format", table_flags.format, "csv or json");

  auto* compare = app.add_subcommand("compare", "Compare against the extended-precision oracle");
  compare->add_option("--kind", compare_flags.kind, "osc or mod");
  add_grid_flags(compare, compare_opts.grid, compare_scale);
  compare->add_option("--tol", compare_flags.tol, "Absolute tolerance");
  compare->add_option("--terms", compare_flags.terms, "Fix the number of summed terms");
  compare->add_option("--oracle-digits", compare_flags.oracle_digits, "Oracle working digits");
  compare->add_option("--format", compare_flags.format, "csv or json");

  auto* bounds = app.add_subcommand("bounds", "Truncation bounds next to empirical errors");
  bounds->add_option("--kind", bounds_flags.kind, "osc or mod");
  bounds->add_option("--nu", bounds_opts.nu, "Order nu");
  bounds->add_option("--x", bounds_opts.x, "Argument x > 0");
  bounds->add_option("--terms", bounds_opts.terms, "Term counts N (comma list)")->delimiter(',');
  bounds->add_option("--oracle-digits", bounds_flags.oracle_digits, "Oracle working digits");
  bounds->add_option("--format", bounds_flags.format, "csv or json");

  auto* cls = app.add_subcommand("classify", "Classify x^2 y'' + a x y' + (b + c x^(2 beta)) y = 0");
  cls->add_option("--a", classify_opts.input.a)->required();
  cls->add_option("--b", classify_opts.input.b)->required();
  cls->add_option("--c", classify_opts.input.c)->required();
  cls->add_option("--beta", classify_opts.input.beta)->required();
  cls->add_option("--format", classify_format, "csv or json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (eval->parsed()) {
      eval_opts.kind = to_kind(eval_flags.kind);
      eval_opts.format = to_format(eval_flags.format);
      eval_opts.tol = eval_flags.tol;
      eval_opts.terms = eval_flags.terms;
      return cmd_eval(eval_opts, out);
    }
    if (table->parsed()) {
      table_opts.kind = to_kind(table_flags.kind);
      table_opts.format = to_format(table_flags.format);
      table_opts.tol = table_flags.tol;
      table_opts.terms = table_flags.terms;
      table_opts.grid.scale = to_scale(table_scale);
      return cmd_table(table_opts, out);
    }
    if (compare->parsed()) {
      compare_opts.kind = to_kind(compare_flags.kind);
      compare_opts.format = to_format(compare_flags.format);
      compare_opts.tol = compare_flags.tol;
      compare_opts.terms = compare_flags.terms;
      compare_opts.oracle_digits = compare_flags.oracle_digits;
      compare_opts.grid.scale = to_scale(compare_scale);
      return cmd_compare(compare_opts, out);
    }
    if (bounds->parsed()) {
      bounds_opts.kind = to_kind(bounds_flags.kind);
      bounds_opts.format = to_format(bounds_flags.format);
      bounds_opts.oracle_digits = bounds_flags.oracle_digits;
      return cmd_bounds(bounds_opts, out);
    }
    classify_opts.format = to_format(classify_format);
    return cmd_classify(classify_opts, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ToleranceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitTolerance;
  }
}

}  // namespace imbessel::cli
