#pragma once

#include "gfm/hierarchy.hpp"
#include "gfm/tau.hpp"

namespace gfm {

struct WindowBoundaryContamination : KernelError {
  using KernelError::KernelError;
};

// Quadratic differential operator in the time variables over a finite index
// window: a^{IJ} d_I d_J + b_I^J t^I d_J + c_{IJ} t^I t^J + constant.
// a and c are stored with I <= J (symmetrized).
struct VirasoroOperator {
  int m = 0;
  int window = 0;
  std::map<std::pair<IndexIB, IndexIB>, Rat> a, c;
  std::map<std::pair<IndexIB, IndexIB>, Rat> b;  // (I, J) : t^I d/dt^J
  Rat constant;

  Rat a_at(const IndexIB& I, const IndexIB& J) const;
  Rat b_at(const IndexIB& I, const IndexIB& J) const;
  Rat c_at(const IndexIB& I, const IndexIB& J) const;
  void add_a(const IndexIB& I, const IndexIB& J, const Rat& v);
  void add_b(const IndexIB& I, const IndexIB& J, const Rat& v);
  void add_c(const IndexIB& I, const IndexIB& J, const Rat& v);
  bool same_tables(const VirasoroOperator& o, std::string* why) const;
  // restriction to a smaller window
  VirasoroOperator restricted(int w) const;
};

// Matrix-grading helpers over a diagonal exponent matrix.
RatMatrix grade_project(const RatMatrix& R, const RatMatrix& mu_diag, int s);
// P_m(mu, R) = e^{R d_x} prod_{j=0..m} (x + mu + j - 1/2) |_{x=0}; identity
// for m = -1. Left-multiplied powers of R.
RatMatrix pm_matrix(int m, const RatMatrix& mu_diag, const RatMatrix& R);

class VirasoroFamily {
 public:
  explicit VirasoroFamily(const TauStructure& tau);

  // Extended operators from the complete data; tables are exact for all
  // cells with both levels within the window.
  VirasoroOperator build_Lm(int m, int window) const;
  // Operators of the underlying manifold: the same construction on the
  // complete data with the B and B' rows/columns deleted.
  VirasoroOperator build_Lm_plain(int m, int window) const;

  // The printed general closed forms for m = -1..2.
  VirasoroOperator explicit_Lm(int m, int window) const;

  // [A, B] with normal-ordering corrections, exact on the interior of the
  // common window (cells the widened construction fully determines).
  static VirasoroOperator commutator(const VirasoroOperator& A,
                                     const VirasoroOperator& B);

  StructureReport check_heisenberg(int window) const;
  // [L_m, L_k] = (m - k) L_{m+k} on the interior of the window.
  StructureReport check_commutation(int m, int k, int window) const;
  // generic vs printed tables
  StructureReport explicit_compare(int m, int window) const;
  // coefficient vanishing patterns of the extended family
  StructureReport check_coefficient_patterns(int m, int window) const;

  // L_{E^{m+1}} Omega_{IJ} = 2 a^{KL} Omega_{IK} Omega_{LJ}
  //   + b^K_I Omega_{KJ} + b^K_J Omega_{IK} + 2 c_{IJ}.
  StructureReport virasoro_symmetry_identity(int m, int window) const;

  const TauStructure& tau() const { return *tau_; }

 private:
  const TauStructure* tau_;
  RatMatrix eta_t_, mu_t_, etaB_upper_;
  std::vector<int> r_levels_;
  int grade_min_ = 0, grade_max_ = 0;  // achievable mu-difference range
  size_t n_ = 0;

  struct Slot {  // one Heisenberg component as sum coeff * (t or d)_index
    struct Piece {
      bool is_t;
      IndexIB idx;
      Rat coeff;
    };
    std::vector<Piece> pieces;
  };
  Slot slot(size_t label_row, int p) const;
  RatMatrix R_total() const;
  VirasoroOperator build_impl(int m, int window, bool extended) const;
};

// sigma-relabeled operator (Greek fixed, 0 <-> B) for the correspondence.
VirasoroOperator relabel_correspondence(const VirasoroOperator& op);

// The section-five printed extended family of the KdV pair for m >= 1.
VirasoroOperator kdv_printed_Lm(int m, int window);

}  // namespace gfm
