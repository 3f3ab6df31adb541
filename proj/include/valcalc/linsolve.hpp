#pragma once

#include <map>
#include <utility>
#include <vector>

#include "valcalc/scalar.hpp"

namespace valcalc {

/// Incremental exact elimination for sparse systems A x = b with rational A
/// and right-hand sides in Q[pi, 1/pi] (each power of pi is its own column).
class ExactSolver {
public:
  using Row = std::vector<std::pair<int, Rational>>;

  explicit ExactSolver(int ncols) : ncols_(ncols) {}

  /// Adds one equation. Returns false if the system became inconsistent.
  bool add_row(const Row& entries, const Scalar& rhs);
  bool consistent() const { return consistent_; }
  int rank() const { return int(pivots_.size()); }
  int cols() const { return ncols_; }

  /// A solution with every free variable set to zero.
  std::vector<Scalar> solution() const;

private:
  struct Pivot {
    Row entries;  // sorted, leading entry is 1
    Scalar rhs;
  };
  int ncols_;
  bool consistent_ = true;
  std::map<int, Pivot> pivots_;
};

}  // namespace valcalc
