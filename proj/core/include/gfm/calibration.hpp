#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <tuple>

#include "gfm/legendre.hpp"
#include "gfm/manifold.hpp"

namespace gfm {

struct WindowTooSmall : KernelError {
  using KernelError::KernelError;
};
struct RecursionMismatch : KernelError {
  using KernelError::KernelError;
};
struct NotIntegrableCalib : KernelError {
  using KernelError::KernelError;
};

// Index set of the extended hierarchy: Greek labels with nonnegative levels,
// the unity (0) and Legendre (B) labels with integer levels.
struct IndexIB {
  enum class Tag : int8_t { Zero = 0, B = 1, Greek = 2 };
  Tag tag = Tag::Zero;
  int greek = 0;  // 0-based Greek index, valid when tag == Greek
  int level = 0;

  static IndexIB zero(int p) { return {Tag::Zero, 0, p}; }
  static IndexIB bee(int p) { return {Tag::B, 0, p}; }
  static IndexIB gk(int alpha, int p) { return {Tag::Greek, alpha, p}; }

  bool operator<(const IndexIB& o) const {
    if (tag != o.tag) return tag < o.tag;
    if (greek != o.greek) return greek < o.greek;
    return level < o.level;
  }
  bool operator==(const IndexIB& o) const {
    return tag == o.tag && greek == o.greek && level == o.level;
  }
  IndexIB shifted(int dp) const { return {tag, greek, level + dp}; }
  std::string str() const;
};

struct BasicData {
  std::vector<Rat> mu;  // Greek exponents
  Rat mu0, muB;
  std::map<int, RatMatrix> R;               // (R_s)^eps_alpha, s >= 1
  std::map<int, std::vector<Rat>> r;        // r_s^alpha
  std::map<int, std::vector<Rat>> rB;       // r_{B;s}^alpha
  std::map<int, Rat> a00, a10;              // constants by level
  Rat mu_of(const IndexIB& i) const {
    switch (i.tag) {
      case IndexIB::Tag::Zero:
        return mu0;
      case IndexIB::Tag::B:
        return muB;
      default:
        return mu[i.greek];
    }
  }
  // (R~_{B;s})_i^alpha: the Greek-column block acting in the recursion tails.
  Rat Rtail(int s, const IndexIB& i, int alpha) const;
};

struct CalibrationOptions {
  int greek_max = 10;
  int zero_min = -5, zero_max = 10;
  int b_min = -5, b_max = 10;
};

// Tables theta_{i,p} (jet-free) with xi_{i,p} = grad theta, generated by the
// Hessian recursion with quasi-homogeneity fixing the affine ambiguity;
// negative unity/Legendre levels descend through nabla_e or registered
// closed forms.
class Calibration {
 public:
  const GFManifold* M = nullptr;
  VectorField B;
  Rat d;  // charge of M
  BasicData data;
  CalibrationOptions opt;
  std::vector<std::string> notes;  // resonance reports and similar

  using Registrar = std::function<void(Calibration&)>;

  static Calibration build(const GFManifold& m, const VectorField& B,
                           const CalibrationOptions& opt,
                           const Registrar& registrar = nullptr);

  bool has_theta(const IndexIB& i) const { return theta_.count(i) != 0; }
  const Expr& theta(const IndexIB& i) const;
  const VectorField& xi(const IndexIB& i) const;
  // eta-pairing <xi_{i,p}, xi_{j,q}>; zero levels below range for Greek.
  Expr pair_xi(const IndexIB& i, const IndexIB& j) const;

  // Registers a closed form; the gradient recursion against available
  // neighbours is verified (RecursionMismatch otherwise).
  void register_closed_form(const IndexIB& i, Expr theta_expr);

  StructureReport check_normalization(int pmax) const;
  // Verifies the Hessian recursion between two adjacent stored levels.
  StructureReport check_recursion(const IndexIB& lower) const;

 private:
  std::map<IndexIB, Expr> theta_;
  mutable std::map<IndexIB, VectorField> xi_cache_;
  struct Marks {
    std::set<std::tuple<int, int, int>> R;  // (s, eps, alpha)
    std::set<std::pair<int, int>> r, rB;    // (s, eps)
    std::set<int> a00, a10;
  } marks_;

  void compute_family(IndexIB::Tag tag, int greek, int lo, int hi);
  Expr hessian_integrate(const IndexIB& below) const;
  void fix_quasi_homogeneity(const IndexIB& idx, Expr& theta_part);
  void descend_negative(IndexIB::Tag tag, int greek, int lo);
  void extract_level_constants(const IndexIB& idx);
  friend class TauStructure;
};

}  // namespace gfm
