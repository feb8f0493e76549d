#include "gfm/psido.hpp"

namespace gfm {

const AtomId kEpsAtomSentinel = -1;

PsiDO PsiDO::term(int k, Expr coeff) {
  PsiDO p;
  if (!coeff.is_zero()) p.c_[k] = std::move(coeff);
  return p;
}

Expr PsiDO::at(int k) const {
  if (k < floor_)
    throw TruncationExhausted("coefficient below the validity floor");
  auto it = c_.find(k);
  return it == c_.end() ? Expr() : it->second;
}

void PsiDO::set_floor(int f) {
  floor_ = f;
  trim();
}

void PsiDO::trim() {
  for (auto it = c_.begin(); it != c_.end();) {
    if (it->first < floor_ || it->second.is_zero())
      it = c_.erase(it);
    else
      ++it;
  }
}

PsiDO operator+(const PsiDO& a, const PsiDO& b) {
  PsiDO r = a;
  r.floor_ = std::max(a.floor_, b.floor_);
  for (auto& [k, e] : b.c_) {
    auto [it, fresh] = r.c_.emplace(k, e);
    if (!fresh) it->second += e;
  }
  r.trim();
  return r;
}

PsiDO operator-(const PsiDO& a, const PsiDO& b) { return a + (-b); }

PsiDO PsiDO::operator-() const {
  PsiDO r = *this;
  for (auto& [k, e] : r.c_) e = -e;
  return r;
}

PsiDO PsiDO::mul_expr(const Expr& e) const {
  PsiDO r = *this;
  for (auto& [k, c] : r.c_) c = e * c;
  r.trim();
  return r;
}

namespace {

// eps is identified per expression: the unique Param atom named "eps" that
// the corpus uses; callers own the convention.
AtomId eps_atom() { return AtomTable::instance().param("eps"); }

Rat binom_gen(int m, int j) {
  Rat r(1);
  for (int i = 0; i < j; ++i) r *= Rat(m - i, i + 1);
  return r;
}

}  // namespace

namespace {

PsiDO mul_with_floor(const PsiDO& a, const PsiDO& b, int hard_floor) {
  PsiDO r;
  r.set_floor(hard_floor);
  Expr epsE = Expr::atom(eps_atom());
  for (auto& [m, am] : a.coef()) {
    for (auto& [k, bk] : b.coef()) {
      // a_m D^m  b_k D^k = a_m sum_j C(m,j) eps^j b_k^(j) D^(m-j+k)
      Expr deriv = bk;
      for (int j = 0;; ++j) {
        int out = m - j + k;
        if (out < hard_floor) break;
        if (j > 0) deriv = total_x_derivative(deriv);
        if (deriv.is_zero()) break;
        Rat cj = binom_gen(m, j);
        if (cj.is_zero()) break;  // finite expansion for m >= 0
        Expr add = am * cj * epsE.pow(j) * deriv;
        r.add_at(out, add);
        if (j > 400) throw TruncationExhausted("runaway symbol expansion");
      }
    }
  }
  return r;
}

}  // namespace

void PsiDO::add_at(int k, const Expr& e) {
  if (k < floor_ || e.is_zero()) return;
  auto [it, fresh] = c_.emplace(k, e);
  if (!fresh) {
    it->second += e;
    if (it->second.is_zero()) c_.erase(it);
  }
}

PsiDO operator*(const PsiDO& a, const PsiDO& b) {
  // validity floor: unknown low coefficients of either factor contaminate
  // everything below floor_a + top_b and a_top + floor_b.
  long fa = a.floor_ == PsiDO::kNegInf || b.c_.empty()
                ? PsiDO::kNegInf
                : (long)a.floor_ + b.c_.rbegin()->first;
  long fb = b.floor_ == PsiDO::kNegInf || a.c_.empty()
                ? PsiDO::kNegInf
                : (long)b.floor_ + a.c_.rbegin()->first;
  long fl = std::max(fa, fb);
  int floor = fl <= PsiDO::kNegInf ? PsiDO::kNegInf : (int)fl;
  if (floor == PsiDO::kNegInf) {
    bool a_neg = !a.c_.empty() && a.c_.begin()->first < 0;
    bool b_neg = !b.c_.empty() && b.c_.begin()->first < 0;
    if (a_neg || b_neg)
      throw TruncationExhausted(
          "composition of untruncated negative-order operators");
  }
  return mul_with_floor(a, b, floor);
}

PsiDO PsiDO::bracket(const PsiDO& a, const PsiDO& b) { return a * b - b * a; }

PsiDO PsiDO::plus_part() const {
  PsiDO r;
  r.floor_ = kNegInf;
  for (auto& [k, e] : c_)
    if (k >= 0) r.c_.emplace(k, e);
  if (floor_ > 0)
    throw TruncationExhausted("plus part requires coefficients down to order 0");
  return r;
}

PsiDO PsiDO::minus_part() const {
  PsiDO r;
  r.floor_ = floor_;
  for (auto& [k, e] : c_)
    if (k < 0) r.c_.emplace(k, e);
  return r;
}

PsiDO PsiDO::sqrt(const PsiDO& L, int floor) {
  if (L.is_zero()) return zero();
  int top = L.top();
  if (top % 2 != 0) throw NotASquare("odd leading symbol order");
  int h = top / 2;
  Expr lead = L.at(top);
  Expr r_lead = root_of(lead, 2);
  PsiDO R = term(h, r_lead);
  Expr inv2r = (Rat(2) * r_lead).inv();
  for (int k = h - 1; k >= floor; --k) {
    PsiDO sq = mul_with_floor(R, R, k + h);
    Expr defect = L.at(k + h) - sq.at(k + h);
    if (defect.is_zero()) continue;
    R = R + term(k, defect * inv2r);
  }
  // defining property to the trusted depth
  {
    PsiDO sq = mul_with_floor(R, R, floor + h);
    for (int k = floor + h; k <= std::max(sq.top(), L.top()); ++k)
      if (!(sq.at(k) - L.at(k)).is_zero())
        throw NotASquare("square root verification failed at order " +
                         std::to_string(k));
  }
  R.set_floor(floor);
  return R;
}

PsiDO PsiDO::pow(int n) const {
  PsiDO r = *this;
  for (int i = 1; i < n; ++i) r = r * *this;
  return r;
}

PsiDO KdVLax::L() const {
  auto& t = AtomTable::instance();
  (void)t;
  PsiDO L = PsiDO::term(2, Expr(Rat(1, 2))) + PsiDO::term(0, Expr::atom(u));
  return L;
}

Expr KdVLax::flow(int p) const {
  PsiDO Lop = L();
  int floor = -(2 * p + 3);
  PsiDO half = PsiDO::sqrt(Lop, floor);
  PsiDO Lp_half = half;
  for (int i = 0; i < p; ++i) Lp_half = Lp_half * Lop;
  PsiDO A = Lp_half.plus_part();
  // 2^(p+1/2)/(2p+1)!! = 2^p sqrt(2) / (2p+1)!!
  Expr pref = Rat(2).pow(p) / rat_double_factorial(2 * p + 1) *
              root_of(Expr(Rat(2)), 2);
  A = A.mul_expr(pref);
  PsiDO B = PsiDO::bracket(A, Lop);
  // the bracket must collapse to a multiplication operator
  for (auto& [k, e] : B.coef())
    if (k != 0 && !e.is_zero())
      throw KernelError("KdV bracket failed to collapse at order " +
                        std::to_string(k));
  Expr eps = Expr::atom(AtomTable::instance().param("eps"));
  return B.at(0) / eps;
}

}  // namespace gfm
