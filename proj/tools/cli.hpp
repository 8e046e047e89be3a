#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gridshape/labeled_grid.hpp"
#include "gridshape/matcher.hpp"

namespace gridshape::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitData = 1;
inline constexpr int kExitUsage = 2;

/// Everything that shapes a run's output; echoed as the first line of every
/// file or report the tool writes.
struct RunConfig {
  int grid_size = 21;
  double interior_threshold = 0.75;
  int cdf_bins = 128;
  WeightVector weights;
  std::size_t top_k = 20;
  double threshold = 0.5;
  bool invert = false;
  bool exclude_center = false;
  bool exclude_self = false;

  std::string header_line() const;
};

/// Entry point shared by main() and the tests. `args` excludes the program
/// name. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gridshape::cli
