#pragma once

#include "gfm/calibration.hpp"

namespace gfm {

// Two-point function tables constructed from a calibration by the four-step
// normalization, together with the extra constants and the complete data
// matrices (rows and columns ordered 0, B, 1..n, 0', B').
class TauStructure {
 public:
  const Calibration* cal = nullptr;
  int window = 0;
  std::map<int, Rat> a01, a11;

  static TauStructure build(const Calibration& cal, int window);

  // Symmetric lookup; throws WindowTooSmall outside the guaranteed range.
  Expr omega(const IndexIB& I, const IndexIB& J) const;
  // tau-normalized scalar densities (theta re-fixed by the odd-level
  // pairing convention; differs from the calibration table by constants).
  Expr theta_tau(const IndexIB& I) const;

  size_t matrix_dim() const { return cal->M->dim() + 4; }
  size_t label_index(const IndexIB& I) const;  // 0,B,Greek labels
  RatMatrix eta_tilde() const;
  RatMatrix mu_tilde() const;
  RatMatrix R_tilde(int s) const;
  std::vector<int> R_levels() const;  // s with nonzero R_tilde(s)
  RatMatrix A_block(int s) const;     // [[a00,a01],[a10,a11]]

  StructureReport check_matrix_relations() const;
  // grad Omega = xi_i . xi_j, unit- and Euler-field recursions, symmetry,
  // and the theta identification, all on the window.
  StructureReport check_properties() const;

 private:
  std::map<std::pair<IndexIB, IndexIB>, Expr> omega_;
  std::map<int, Expr> theta0_fix_, omegaB0_;
  Expr build_entry(const IndexIB& I, const IndexIB& J) const;
};

// Relabeling correspondence between the tau structures of a Legendre pair:
// sigma fixes Greek labels and swaps the unity label with the Legendre one.
IndexIB sigma_relabel(const IndexIB& I);

}  // namespace gfm
