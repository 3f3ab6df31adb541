#pragma once

#include <stdexcept>

#include "valcalc/exterior.hpp"

namespace valcalc {

/// Contact form alpha = sum v_i dx_i and its Reeb field T = sum v_i d/dx_i.
struct ContactData {
  int dim;
  InvariantForm alpha;
  VectorField reeb;

  static ContactData of(int dim);
};

struct RuminResult {
  InvariantForm D_omega;
  InvariantForm xi;
  int ansatz_degree = 0;
};

class NoRuminSolution : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

constexpr int kRuminDegreeCap = 12;

/// Rumin differential D omega = d(omega + alpha ^ xi) for an (n-1)-form.
///
/// xi is found by an exact linear solve over polynomial coefficients of
/// bounded degree; the bound starts at deg(d omega) + 2 and grows by 2.
/// Throws NoRuminSolution if nothing solves below the cap.
RuminResult rumin(const InvariantForm& omega, int degree_cap = kRuminDegreeCap);

/// True iff (omega, phi) represents the zero valuation:
/// D omega + pi^* phi = 0 and pi_* omega = 0.
bool verify_zero_valuation(const InvariantForm& omega, const BaseForm& phi);

}  // namespace valcalc
