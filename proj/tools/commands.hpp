#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "imbessel/kind.hpp"
#include "imbessel/lommel.hpp"

namespace imbessel::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitTolerance = 3;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Format { Csv, Json };
enum class Scale { Linear, Log };

struct GridSpec {
  double x_min = 0.1;
  double x_max = 2.0;
  int x_steps = 20;
  Scale scale = Scale::Linear;
  std::vector<double> x_list;  // used instead of the range when non-empty
  std::vector<double> nu_list{0.0, 0.5, 1.0, 1.5, 2.0};
};

// Validated x abscissae in increasing order.  Throws UsageError.
std::vector<double> grid_points(const GridSpec& grid);

// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

struct EvalOptions {
  Kind kind = Kind::Oscillatory;
  double nu = 0;
  double x = 1;
  double tol = 1e-12;
  std::optional<int> terms;
  Format format = Format::Csv;
};

struct TableOptions {
  Kind kind = Kind::Oscillatory;
  GridSpec grid;
  double tol = 1e-12;
  std::optional<int> terms;
  Format format = Format::Csv;
  int threads = 0;  // 0: hardware concurrency, capped by IMBESSEL_THREADS
};

struct CompareOptions {
  Kind kind = Kind::Oscillatory;
  GridSpec grid;
  double tol = 1e-12;
  std::optional<int> terms;
  int oracle_digits = 50;
  Format format = Format::Csv;
  int threads = 0;
};

struct BoundsOptions {
  Kind kind = Kind::Oscillatory;
  double nu = 1;
  double x = 1;
  std::vector<int> terms{2, 4, 8, 16};
  int oracle_digits = 50;
  Format format = Format::Csv;
};

struct ClassifyOptions {
  LommelInput input;
  Format format = Format::Csv;
};

// Each command writes its report to `out` and returns the process exit code.
// Domain violations surface as DomainError, unattainable accuracy as
// ToleranceError; run() maps both to exit codes.
int cmd_eval(const EvalOptions& options, std::ostream& out);
int cmd_table(const TableOptions& options, std::ostream& out);
int cmd_compare(const CompareOptions& options, std::ostream& out);
int cmd_bounds(const BoundsOptions& options, std::ostream& out);
int cmd_classify(const ClassifyOptions& options, std::ostream& out);

// Worker count after applying the IMBESSEL_THREADS cap.
int worker_count(int requested);

// Full command line: parsing, dispatch and exit-code mapping.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace imbessel::cli
