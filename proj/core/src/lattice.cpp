#include "gfm/lattice.hpp"

#include "gfm/subst.hpp"

namespace gfm {

namespace {

std::string mangled(const std::string& name, int shift) {
  return name + "[" + std::to_string(shift) + "]";
}

}  // namespace

std::string LatticeRing::base_of(const std::string& full, int* shift) {
  size_t br = full.find('[');
  if (br == std::string::npos) return "";
  *shift = std::stoi(full.substr(br + 1, full.size() - br - 2));
  return full.substr(0, br);
}

AtomId LatticeRing::sym(const std::string& name, int shift) {
  return AtomTable::instance().coord(mangled(name, shift));
}

Expr LatticeRing::aux_for(const Expr& g) {
  std::string key = g.str();
  auto it = aux_by_key_.find(key);
  if (it != aux_by_key_.end()) return Expr::atom(sym(it->second.name, 0));
  std::string nkey = (-g).str();
  it = aux_by_key_.find(nkey);
  if (it != aux_by_key_.end()) return -Expr::atom(sym(it->second.name, 0));
  std::string name = "aux" + std::to_string(aux_counter_++);
  aux_by_key_.emplace(key, AuxInfo{name, g});
  aux_g_by_name_.emplace(name, g);
  return Expr::atom(sym(name, 0));
}

Expr LatticeRing::eliminate(const Expr& e) {
  Expr cur = e;
  for (int guard = 0; guard < 4096; ++guard) {
    std::vector<AtomId> atoms;
    cur.collect_atoms(atoms);
    AtomId worst = -1;
    int worst_shift = 0;
    std::string worst_base;
    for (AtomId a : atoms) {
      const AtomInfo& info = atom_info(a);
      if (info.kind != AtomKind::Coord) continue;
      int s = 0;
      std::string base = base_of(info.name, &s);
      if (base.empty() || s == 0) continue;
      if (!aux_g_by_name_.count(base)) continue;
      if (std::abs(s) > std::abs(worst_shift)) {
        worst = a;
        worst_shift = s;
        worst_base = base;
      }
    }
    if (worst < 0) return cur;
    const Expr& g = aux_g_by_name_.at(worst_base);
    Expr repl;
    if (worst_shift > 0) {
      // A[j] = -A[j-1] + g[j-1]
      repl = -Expr::atom(sym(worst_base, worst_shift - 1)) +
             shift(g, worst_shift - 1);
    } else {
      // A[j] = -A[j+1] + g[j]
      repl = -Expr::atom(sym(worst_base, worst_shift + 1)) +
             shift(g, worst_shift);
    }
    std::map<AtomId, Expr> m{{worst, repl}};
    cur = substitute(cur, m);
  }
  throw KernelError("auxiliary elimination failed to terminate");
}

Expr LatticeRing::shift(const Expr& e, int by) {
  if (by == 0) return eliminate(e);
  std::vector<AtomId> atoms;
  e.collect_atoms(atoms);
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  std::map<AtomId, Expr> m;
  for (AtomId a : atoms) {
    const AtomInfo& info = atom_info(a);
    if (info.kind != AtomKind::Coord) continue;
    int s = 0;
    std::string base = base_of(info.name, &s);
    if (base.empty()) continue;
    m[a] = Expr::atom(sym(base, s + by));
  }
  return eliminate(substitute(e, m));
}

// --- ShiftOp -----------------------------------------------------------------

ShiftOp ShiftOp::term(LatticeRing& ring, int k, Expr coeff) {
  (void)ring;
  ShiftOp s;
  if (!coeff.is_zero()) s.c_[k] = std::move(coeff);
  return s;
}

Expr ShiftOp::at(int k) const {
  if (k < floor_ || k > ceil_)
    throw BandExhausted("coefficient outside the trusted band");
  auto it = c_.find(k);
  return it == c_.end() ? Expr() : it->second;
}

void ShiftOp::set_floor(int f) {
  floor_ = f;
  trim();
}
void ShiftOp::set_ceil(int c) {
  ceil_ = c;
  trim();
}

void ShiftOp::trim() {
  for (auto it = c_.begin(); it != c_.end();) {
    if (it->first < floor_ || it->first > ceil_ || it->second.is_zero())
      it = c_.erase(it);
    else
      ++it;
  }
}

ShiftOp ShiftOp::add(const ShiftOp& b) const {
  ShiftOp r = *this;
  r.floor_ = std::max(floor_, b.floor_);
  r.ceil_ = std::min(ceil_, b.ceil_);
  for (auto& [k, e] : b.c_) {
    auto [it, fresh] = r.c_.emplace(k, e);
    if (!fresh) it->second += e;
  }
  r.trim();
  return r;
}

ShiftOp ShiftOp::sub(const ShiftOp& b) const { return add(b.neg()); }

ShiftOp ShiftOp::neg() const {
  ShiftOp r = *this;
  for (auto& [k, e] : r.c_) e = -e;
  return r;
}

ShiftOp ShiftOp::mul_expr(const Expr& e) const {
  ShiftOp r = *this;
  for (auto& [k, c] : r.c_) c = e * c;
  r.trim();
  return r;
}

ShiftOp ShiftOp::compose(LatticeRing& ring, const ShiftOp& b) const {
  ShiftOp r;
  long fa = floor_ == kNegInf || b.c_.empty() ? (long)kNegInf
                                              : (long)floor_ + b.top();
  long fb = b.floor_ == kNegInf || c_.empty() ? (long)kNegInf
                                              : (long)b.floor_ + top();
  long fl = std::max(fa, fb);
  r.floor_ = fl <= kNegInf ? kNegInf : (int)fl;
  long ca = ceil_ == kPosInf || b.c_.empty() ? (long)kPosInf
                                             : (long)ceil_ + b.bottom();
  long cb = b.ceil_ == kPosInf || c_.empty() ? (long)kPosInf
                                             : (long)b.ceil_ + bottom();
  long cl = std::min(ca, cb);
  r.ceil_ = cl >= kPosInf ? kPosInf : (int)cl;
  for (auto& [i, ai] : c_)
    for (auto& [j, bj] : b.c_) {
      int k = i + j;
      if (k < r.floor_ || k > r.ceil_) continue;
      Expr add = ai * ring.shift(bj, i);
      auto [it, fresh] = r.c_.emplace(k, add);
      if (!fresh) it->second += add;
    }
  r.trim();
  return r;
}

ShiftOp ShiftOp::bracket(LatticeRing& ring, const ShiftOp& a, const ShiftOp& b) {
  return a.compose(ring, b).sub(b.compose(ring, a));
}

ShiftOp ShiftOp::plus_part() const {
  if (floor_ > 0)
    throw BandExhausted("plus part requires the band to reach order 0");
  ShiftOp r;
  r.floor_ = kNegInf;
  r.ceil_ = ceil_;
  for (auto& [k, e] : c_)
    if (k >= 0) r.c_.emplace(k, e);
  return r;
}

ShiftOp ShiftOp::minus_part() const {
  ShiftOp r;
  r.floor_ = floor_;
  r.ceil_ = kPosInf;
  for (auto& [k, e] : c_)
    if (k < 0) r.c_.emplace(k, e);
  return r;
}

ShiftOp ShiftOp::inverse_from_top(LatticeRing& ring, int floor) const {
  if (c_.empty()) throw NonInvertible("inverse of zero");
  int t = top();
  Expr lead = c_.rbegin()->second;
  // T^{-1} = Lambda^{-t} lead^{-1} = (lead^{-1})^{(-t)} Lambda^{-t}
  ShiftOp Tinv = term(ring, -t, ring.shift(lead.inv(), -t));
  // N = T^{-1} (this - T): strictly negative orders
  ShiftOp rest = *this;
  rest.c_.erase(t);
  ShiftOp N = Tinv.compose(ring, rest);
  ShiftOp acc = Tinv;
  ShiftOp powN = Tinv;
  // (1 + N)^{-1} T^{-1} = sum (-N)^j T^{-1}
  int steps = t - floor + 2;
  ShiftOp Nj = N.neg();
  for (int j = 1; j <= steps; ++j) {
    powN = Nj.compose(ring, powN);
    powN.set_floor(floor);
    if (powN.coef().empty()) break;
    acc = acc.add(powN);
  }
  acc.set_floor(floor);
  return acc;
}

ShiftOp ShiftOp::inverse_from_bottom(LatticeRing& ring, int ceil) const {
  if (c_.empty()) throw NonInvertible("inverse of zero");
  int bkey = bottom();
  Expr lead = c_.begin()->second;
  ShiftOp Binv = term(ring, -bkey, ring.shift(lead.inv(), -bkey));
  ShiftOp rest = *this;
  rest.c_.erase(bkey);
  ShiftOp M = Binv.compose(ring, rest);  // strictly positive orders
  ShiftOp acc = Binv;
  ShiftOp powM = Binv;
  int steps = ceil - (-bkey) + 2;
  ShiftOp Mj = M.neg();
  for (int j = 1; j <= steps; ++j) {
    powM = Mj.compose(ring, powM);
    powM.set_ceil(ceil);
    if (powM.coef().empty()) break;
    acc = acc.add(powM);
  }
  acc.set_ceil(ceil);
  return acc;
}

ShiftOp ShiftOp::sqrt_quadratic(LatticeRing& ring, const ShiftOp& L, int floor) {
  if (!(L.at(2) == Expr(Rat(1))))
    throw NotASquare("expected a monic order-2 shift operator");
  ShiftOp R = term(ring, 1, Expr(Rat(1)));
  for (int k = 0; k >= floor; --k) {
    ShiftOp sq = R.compose(ring, R);
    Expr defect = L.at(k + 1) - sq.at(k + 1);
    if (defect.is_zero()) continue;
    // (Lambda + 1) a_k = defect shifted down by one:
    // the square contributes a_k^{(+1)} + a_k at order k+1.
    Expr g = ring.shift(defect, -1);
    // a_k with a_k^+ + a_k = defect requires (Lambda+1) acting after the
    // up-shift; solve via the interned auxiliary of g at shift +1.
    Expr ak = ring.shift(ring.aux_for(g), 1);
    R = R.add(term(ring, k, ak));
  }
  R.set_floor(floor);
  ShiftOp sq = R.compose(ring, R);
  for (int k = sq.floor_order(); k <= 2; ++k)
    if (!(sq.at(k) - L.at(k)).is_zero())
      throw NotASquare("shift square root verification failed at order " +
                       std::to_string(k));
  return R;
}

// --- Toda --------------------------------------------------------------------

ShiftOp TodaLattice::lax() {
  ShiftOp L = ShiftOp::term(ring, 1, Expr(Rat(1)))
                  .add(ShiftOp::term(ring, 0, V()))
                  .add(ShiftOp::term(ring, -1, EU()));
  return L;
}

namespace {

// eps * d/dt of a lattice expression given the flows of the base symbols:
// flows maps zero-shift symbol name -> eps * d(symbol)/dt.
Expr lattice_time_derivative(LatticeRing& ring, const Expr& e,
                             const std::map<std::string, Expr>& flows) {
  std::vector<AtomId> atoms;
  e.collect_atoms(atoms);
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  Expr acc;
  for (AtomId a : atoms) {
    const AtomInfo& info = atom_info(a);
    if (info.kind != AtomKind::Coord) continue;
    int s = 0;
    std::string base;
    {
      size_t br = info.name.find('[');
      if (br == std::string::npos) continue;
      base = info.name.substr(0, br);
      s = std::stoi(info.name.substr(br + 1, info.name.size() - br - 2));
    }
    auto it = flows.find(base);
    if (it == flows.end()) continue;
    Expr d = partial_derivative(e, a);
    if (d.is_zero()) continue;
    acc += d * ring.shift(it->second, s);
  }
  return acc;
}

}  // namespace

StructureReport TodaLattice::check_first_flow() {
  StructureReport rep;
  ShiftOp L = lax();
  ShiftOp A = L.plus_part();  // A_{2,0} = (L)_+ / 1!
  ShiftOp B = ShiftOp::bracket(ring, A, L);
  // eps dV/dt = coeff_0, eps d(e^U)/dt = coeff_{-1}
  Expr flowV = EU(1) - EU();
  Expr flowEU = EU() * (V() - V(-1));
  rep.require_zero("toda_first_flow_V", B.at(0) - flowV);
  rep.require_zero("toda_first_flow_EU", B.at(-1) - flowEU);
  rep.require_zero("toda_first_flow_top", B.at(1));
  return rep;
}

StructureReport TodaLattice::two_point_checks() {
  StructureReport rep;
  ShiftOp L = lax();
  std::map<std::string, Expr> flows{{"tdV", EU(1) - EU()},
                                    {"tdEU", EU() * (V() - V(-1))}};
  // eps (Lambda - 1) d2 log tau / dt^{2,0} dt^{2,0} = eps d res A_{2,0} / dt
  {
    Expr lhs_candidate = EU();  // printed two-point function e^U
    Expr rhs = lattice_time_derivative(ring, L.plus_part().residue(), flows);
    rep.require_zero("toda_2pt_1",
                     (ring.shift(lhs_candidate, 1) - lhs_candidate) - rhs);
  }
  // second: candidate (V + V^-) e^U / 2 against res A_{2,1} = res(L^2)/2
  {
    ShiftOp L2 = L.compose(ring, L);
    Expr resA21 = L2.residue() / Expr(Rat(2));
    Expr lhs_candidate = Rat(1, 2) * ((V() + V(-1)) * EU());
    Expr rhs = lattice_time_derivative(ring, resA21, flows);
    rep.require_zero("toda_2pt_2",
                     (ring.shift(lhs_candidate, 1) - lhs_candidate) - rhs);
  }
  return rep;
}

// --- Ablowitz-Ladik ----------------------------------------------------------

ShiftOp ALLattice::lax(int floor) {
  // (1 - Q Lambda^{-1})^{-1} (Lambda - P)
  ShiftOp one_minus = ShiftOp::term(ring, 0, Expr(Rat(1)))
                          .add(ShiftOp::term(ring, -1, -Q()));
  ShiftOp inv = one_minus.inverse_from_top(ring, floor - 1);
  ShiftOp lin = ShiftOp::term(ring, 1, Expr(Rat(1)))
                    .add(ShiftOp::term(ring, 0, -P()));
  ShiftOp L = inv.compose(ring, lin);
  L.set_floor(floor);
  return L;
}

StructureReport ALLattice::check_inverse(int band) {
  StructureReport rep;
  // both factors expanded in the same (downward) completion
  ShiftOp L = lax(-3 * band - 2);
  ShiftOp Linv =
      ShiftOp::term(ring, 1, Expr(Rat(1)))
          .add(ShiftOp::term(ring, 0, -P()))
          .inverse_from_top(ring, -3 * band - 2)
          .compose(ring, ShiftOp::term(ring, 0, Expr(Rat(1)))
                             .add(ShiftOp::term(ring, -1, -Q())));
  ShiftOp prod = L.compose(ring, Linv);
  for (int k = -band; k <= 1; ++k)
    rep.require_zero("al_LLinv[" + std::to_string(k) + "]",
                     prod.at(k) - (k == 0 ? Expr(Rat(1)) : Expr()));
  return rep;
}

StructureReport ALLattice::check_lax_flow(int floor) {
  StructureReport rep;
  ShiftOp L = lax(floor);
  ShiftOp A = L.plus_part();  // (L)_+ / 1!
  ShiftOp B = ShiftOp::bracket(ring, A, L);
  std::map<std::string, Expr> flows{{"alP", flowP()}, {"alQ", flowQ()}};
  for (int k = floor + 2; k <= 1; ++k) {
    Expr lhs = lattice_time_derivative(ring, L.at(k), flows);
    rep.require_zero("al_lax_flow[" + std::to_string(k) + "]", lhs - B.at(k));
  }
  return rep;
}

Expr ALLattice::P_oplus(int power) {
  if (power == 1) return P() * (Q(2) - P(1)) / (Q(1) - P());
  return P() * (Q(-1) - P(-1)) / (Q() - P());
}

Expr ALLattice::Q_oplus(int power) {
  if (power == 1) return Q(1) * (Q(2) - P(1)) / (Q(1) - P());
  return Q(-1) * (Q(-2) - P(-2)) / (Q(-1) - P(-1));
}

namespace {

// Applies the AL discrete symmetry (power +1/-1) to a lattice expression of
// the P/Q symbols.
Expr apply_oplus(ALLattice& al, const Expr& e, int power) {
  std::vector<AtomId> atoms;
  e.collect_atoms(atoms);
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  std::map<AtomId, Expr> m;
  for (AtomId a : atoms) {
    const AtomInfo& info = atom_info(a);
    if (info.kind != AtomKind::Coord) continue;
    size_t br = info.name.find('[');
    if (br == std::string::npos) continue;
    std::string base = info.name.substr(0, br);
    int s = std::stoi(info.name.substr(br + 1, info.name.size() - br - 2));
    if (base == "alP")
      m[a] = al.ring.shift(al.P_oplus(power), s);
    else if (base == "alQ")
      m[a] = al.ring.shift(al.Q_oplus(power), s);
  }
  return substitute(e, m);
}

}  // namespace

StructureReport ALLattice::check_discrete_symmetry() {
  StructureReport rep;
  // oplus then ominus is the identity
  rep.require_zero("al_oplus_roundtrip_P",
                   apply_oplus(*this, P_oplus(1), -1) - P());
  rep.require_zero("al_oplus_roundtrip_Q",
                   apply_oplus(*this, Q_oplus(1), -1) - Q());
  // printed V/U forms: V^+ + e^{U++} - e^{U+} and e^{U-} V^{--}/V^-
  Expr Vop = apply_oplus(*this, V(), 1);
  rep.require_zero("al_V_oplus", Vop - (V(1) + EU(2) - EU(1)));
  Expr EUom = apply_oplus(*this, EU(), -1);
  rep.require_zero("al_EU_ominus", EUom - EU(-1) * V(-2) / V(-1));
  Expr Vom = apply_oplus(*this, V(), -1);
  rep.require_zero("al_V_ominus",
                   Vom - (V(-1) + EU(-1) * V(-2) / V(-1) - EU() * V(-1) / V()));
  return rep;
}

StructureReport ALLattice::two_point_checks() {
  StructureReport rep;
  std::map<std::string, Expr> flows{{"alP", flowP()}, {"alQ", flowQ()}};
  ShiftOp L = lax(-3);
  // eps (Lambda - 1) d2 log tau/(dt^{2,0})^2 = d res L / dt
  {
    Expr candidate = V(-1) * EU();  // printed: (Q^- - P^-) Q
    Expr rhs = lattice_time_derivative(ring, L.residue(), flows);
    rep.require_zero("al_2pt_1",
                     (ring.shift(candidate, 1) - candidate) - rhs);
  }
  // eps (Lambda - 1) d2 log tau/dt^{2,0} dt^{2,1} = d res(L^2)/2 / dt
  {
    ShiftOp L2 = L.compose(ring, L);
    Expr res2 = L2.residue() / Expr(Rat(2));
    Expr candidate = Rat(1, 2) * (EU() * EU(1) * V(-1) + EU(-1) * EU() * V(-2) +
                                  (V(-1) + V()) * (V(-1) * EU()));
    Expr rhs = lattice_time_derivative(ring, res2, flows);
    rep.require_zero("al_2pt_2",
                     (ring.shift(candidate, 1) - candidate) - rhs);
  }
  return rep;
}

StructureReport ALLattice::check_al_to_toda() {
  StructureReport rep;
  // hat V = V + e^{U+}, e^{hat U} = V^- e^U; oplus plays the Toda shift.
  Expr hatV = V() + EU(1);
  Expr hatEU = V(-1) * EU();
  // the two-point comparison: hatV + hatV^{ominus} reduces to the printed sum
  Expr lhs = hatV + apply_oplus(*this, hatV, -1);
  Expr expect = EU(1) + EU(-1) * V(-2) / V(-1) + V(-1) + V();
  rep.require_zero("al_toda_Vsum", lhs - expect);
  // Toda first flow under the AL t^{2,0} flow:
  // eps d hatV/dt = e^{hatU oplus} - e^{hatU}
  std::map<std::string, Expr> flows{{"alP", flowP()}, {"alQ", flowQ()}};
  {
    Expr dt = lattice_time_derivative(ring, hatV, flows);
    Expr rhs = apply_oplus(*this, hatEU, 1) - hatEU;
    rep.require_zero("al_toda_flow_V", dt - rhs);
  }
  // eps d hatU/dt = hatV - hatV^{ominus}: via d(e^hatU)/dt = e^hatU (...)
  {
    Expr dt = lattice_time_derivative(ring, hatEU, flows);
    Expr rhs = hatEU * (hatV - apply_oplus(*this, hatV, -1));
    rep.require_zero("al_toda_flow_U", dt - rhs);
  }
  return rep;
}

// --- q-deformed KdV ----------------------------------------------------------

ShiftOp QKdVLattice::lax() {
  return ShiftOp::term(ring, 2, Expr(Rat(1))).add(ShiftOp::term(ring, 1, U()));
}

StructureReport QKdVLattice::check_flows(int depth) {
  StructureReport rep;
  ShiftOp L = lax();
  ShiftOp half = ShiftOp::sqrt_quadratic(ring, L, -depth);
  // The square root's own nonlocal coefficients fix the representatives:
  // a_0 = (Lambda+1)^{-1} U  (named W below) and Y := -a_{-1} satisfies
  // (Lambda+1) Y = W^2. Printed forms are compared through these; where a
  // printed form carries a further (Lambda-1)/(Lambda+1), the identity is
  // checked after applying (Lambda+1) so both sides stay local.
  Expr W = half.at(0);
  rep.require_zero("qkdv_W_relation", (ring.shift(W, 1) + W) - U());
  Expr Y = -half.at(-1);
  rep.require_zero("qkdv_Y_relation", (ring.shift(Y, 1) + Y) - W * W);

  // t^{1,0}: sqrt(2) i eps dU/dt = -4 [(L^{1/2})_+, L] = 4 U (W^+ - W)
  {
    ShiftOp A = half.plus_part();
    ShiftOp B = ShiftOp::bracket(ring, A, L).mul_expr(Expr(Rat(-4)));
    rep.require_zero("qkdv_t10_top", B.at(2));
    Expr printed = Rat(4) * (U() * (ring.shift(W, 1) - W));
    rep.require_zero("qkdv_t10", B.at(1) - printed);
  }
  // t^{1,1}: (32/3) (U o (Lambda-1)/(Lambda+1) o U o Lambda/(Lambda+1))[W^2]
  //        = (32/3) U (Lambda-1)(Lambda+1)^{-1} [U Y^+]:
  // check (Lambda+1)[(3/32) B_1/U] = (Lambda-1)[U Y^+].
  {
    ShiftOp l32 = L.compose(ring, half);
    ShiftOp A = l32.plus_part().mul_expr(Expr(Rat(32, 3)));
    ShiftOp B = ShiftOp::bracket(ring, A, L);
    rep.require_zero("qkdv_t11_top", B.at(2));
    Expr core = Rat(3, 32) * (B.at(1) / U());
    Expr T = U() * ring.shift(Y, 1);
    Expr lhs = ring.shift(core, 1) + core;
    Expr rhs = ring.shift(T, 1) - T;
    rep.require_zero("qkdv_t11", lhs - rhs);
  }
  // t^{0,-1}: -0!/2^2 [(L^{-1})_-, L] ; printed (1/4)(1/U^+ - 1/U^-)
  {
    ShiftOp Linv = L.inverse_from_bottom(ring, depth);
    ShiftOp A = Linv.minus_part().mul_expr(Expr(Rat(-1, 4)));
    ShiftOp B = ShiftOp::bracket(ring, A, L);
    rep.require_zero("qkdv_t0m1_top", B.at(2));
    Expr printed = Rat(1, 4) * (U(1).inv() - U(-1).inv());
    rep.require_zero("qkdv_t0m1", B.at(1) - printed);
    rep.require_zero("qkdv_t0m1_order0", B.at(0));
  }
  return rep;
}

StructureReport QKdVLattice::check_residue_identity() {
  StructureReport rep;
  ShiftOp L = lax();
  ShiftOp half = ShiftOp::sqrt_quadratic(ring, L, -3);
  ShiftOp lam_half = ShiftOp::term(ring, 1, Expr(Rat(1))).compose(ring, half);
  Expr res = lam_half.residue();
  // -8 Res(Lambda L^{1/2}) = 8 Lambda (Lambda+1)^{-1} [W^2] = 8 Y^+
  Expr Y = -half.at(-1);
  rep.require_zero("qkdv_Y_relation",
                   (ring.shift(Y, 1) + Y) - half.at(0) * half.at(0));
  rep.require_zero("qkdv_residue",
                   Expr(Rat(-8)) * res - Rat(8) * ring.shift(Y, 1));
  return rep;
}

}  // namespace gfm
