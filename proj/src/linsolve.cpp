#include "valcalc/linsolve.hpp"

namespace valcalc {

bool ExactSolver::add_row(const Row& entries, const Scalar& rhs) {
  std::map<int, Rational> row;
  for (const auto& [c, q] : entries)
    if (q != 0) row[c] += q;
  Scalar b = rhs;
  auto it = row.begin();
  while (it != row.end()) {
    if (it->second == 0) {
      it = row.erase(it);
      continue;
    }
    auto p = pivots_.find(it->first);
    if (p == pivots_.end()) break;
    const Rational f = it->second;
    for (const auto& [c, q] : p->second.entries) row[c] -= f * q;
    b -= p->second.rhs * Scalar(f);
    it = row.erase(it);  // leading entry cancels exactly
  }
  while (it != row.end() && it->second == 0) it = row.erase(it);
  if (row.empty()) {
    if (!b.is_zero()) consistent_ = false;
    return consistent_;
  }
  Pivot piv;
  const Rational lead = row.begin()->second;
  const Scalar inv(Rational(1) / lead);
  for (const auto& [c, q] : row)
    if (q != 0) piv.entries.emplace_back(c, q / lead);
  piv.rhs = b * inv;
  pivots_.emplace(row.begin()->first, std::move(piv));
  return consistent_;
}

std::vector<Scalar> ExactSolver::solution() const {
  std::vector<Scalar> x(ncols_);
  for (auto p = pivots_.rbegin(); p != pivots_.rend(); ++p) {
    Scalar v = p->second.rhs;
    for (size_t i = 1; i < p->second.entries.size(); ++i) {
      const auto& [c, q] = p->second.entries[i];
      if (!x[c].is_zero()) v -= x[c] * Scalar(q);
    }
    x[p->first] = v;
  }
  return x;
}

}  // namespace valcalc
