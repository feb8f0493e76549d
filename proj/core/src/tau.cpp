#include "gfm/tau.hpp"

namespace gfm {

IndexIB sigma_relabel(const IndexIB& I) {
  switch (I.tag) {
    case IndexIB::Tag::Zero:
      return IndexIB::bee(I.level);
    case IndexIB::Tag::B:
      return IndexIB::zero(I.level);
    default:
      return I;
  }
}

size_t TauStructure::label_index(const IndexIB& I) const {
  switch (I.tag) {
    case IndexIB::Tag::Zero:
      return 0;
    case IndexIB::Tag::B:
      return 1;
    default:
      return 2 + (size_t)I.greek;
  }
}

Expr TauStructure::theta_tau(const IndexIB& I) const {
  if (I.tag == IndexIB::Tag::Zero) {
    auto it = theta0_fix_.find(I.level);
    if (it != theta0_fix_.end()) return it->second;
  }
  if (I.tag == IndexIB::Tag::Greek && I.level < 0) return Expr();
  return cal->theta(I);
}

namespace {

// sum_{k=0}^{K} (-1)^k <xi_{i, a+dir_a*k}, xi_{j, b+dir_b*k}>
Expr alternating_pairs(const Calibration& cal, IndexIB::Tag ti, int gi, int a,
                       int da, IndexIB::Tag tj, int gj, int b, int db, int K) {
  Expr acc;
  for (int k = 0; k <= K; ++k) {
    IndexIB I{ti, gi, a + da * k};
    IndexIB J{tj, gj, b + db * k};
    Expr t = cal.pair_xi(I, J);
    acc += (k % 2) ? -t : t;
  }
  return acc;
}

}  // namespace

Expr TauStructure::build_entry(const IndexIB& I, const IndexIB& J) const {
  const Calibration& c = *cal;
  int p = I.level, q = J.level;
  // Greek labels live on nonnegative levels only; the zero extension keeps
  // the recursion relations uniform.
  if ((I.tag == IndexIB::Tag::Greek && p < 0) ||
      (J.tag == IndexIB::Tag::Greek && q < 0))
    return Expr();
  // Step 1: Greek second slot.
  if (J.tag == IndexIB::Tag::Greek) {
    if (q < 0) return Expr();
    return alternating_pairs(c, I.tag, I.greek, p + 1, +1, J.tag, J.greek, q,
                             -1, q);
  }
  if (I.tag == IndexIB::Tag::Greek) return build_entry(J, I);
  // Step 2 and Step 3: first slot 0.
  if (I.tag == IndexIB::Tag::Zero) {
    Expr tail;
    if (J.tag == IndexIB::Tag::B)
      tail = c.theta(IndexIB::bee(p + q));
    else
      tail = theta_tau(IndexIB::zero(p + q));
    if (p % 2) tail = -tail;
    Expr sum;
    if (p >= 0)
      sum = alternating_pairs(c, IndexIB::Tag::Zero, 0, p, -1, J.tag, J.greek,
                              q + 1, +1, p - 1);
    else
      sum = alternating_pairs(c, IndexIB::Tag::Zero, 0, p + 1, +1, J.tag,
                              J.greek, q, -1, -p - 1);
    return sum + tail;
  }
  if (J.tag == IndexIB::Tag::Zero) return build_entry(J, I);
  // Step 4: both slots B.
  Expr tail = omegaB0_.at(p + q);
  if (p % 2) tail = -tail;
  Expr sum;
  if (p >= 0)
    sum = alternating_pairs(c, IndexIB::Tag::B, 0, p, -1, IndexIB::Tag::B, 0,
                            q + 1, +1, p - 1);
  else
    sum = alternating_pairs(c, IndexIB::Tag::B, 0, p + 1, +1, IndexIB::Tag::B,
                            0, q, -1, -p - 1);
  return sum + tail;
}

TauStructure TauStructure::build(const Calibration& cal, int window) {
  TauStructure tau;
  tau.cal = &cal;
  tau.window = window;
  const GFManifold& m = *cal.M;
  size_t n = m.dim();
  Rat d = cal.d;

  // Step 3 convention: odd-level unity densities from the pairing formula.
  for (int p = -2 * window; p <= 2 * window; ++p) {
    if (p % 2 == 0) continue;
    bool have = true;
    int K = p > 0 ? p - 1 : -p - 1;
    for (int k = 0; k <= K; ++k) {
      int l1 = p > 0 ? p - k : p + 1 + k;
      int l2 = p > 0 ? k + 1 : -k;
      have &= cal.has_theta(IndexIB::zero(l1)) && cal.has_theta(IndexIB::zero(l2));
    }
    if (!have) continue;
    Expr v;
    if (p > 0)
      v = Rat(1, 2) *
          alternating_pairs(cal, IndexIB::Tag::Zero, 0, p, -1,
                            IndexIB::Tag::Zero, 0, 1, +1, p - 1);
    else
      v = Rat(1, 2) *
          alternating_pairs(cal, IndexIB::Tag::Zero, 0, p + 1, +1,
                            IndexIB::Tag::Zero, 0, 0, -1, -p - 1);
    // consistency: must differ from the stored density by a constant
    if (cal.has_theta(IndexIB::zero(p))) {
      Expr diff = v - cal.theta(IndexIB::zero(p));
      if (!diff.is_constant())
        throw KernelError("odd unity density re-fix is not a constant shift");
    }
    tau.theta0_fix_[p] = v;
  }

  // Step 4 table Omega_{B,0;B,p} with the a11 vanishing enforcement.
  for (int p = -2 * window; p <= 2 * window; ++p) {
    bool have = true;
    if (p % 2 != 0) {
      int K = p > 0 ? p - 1 : -p - 1;
      for (int k = 0; k <= K; ++k) {
        int l1 = p > 0 ? p - k : p + 1 + k;
        int l2 = p > 0 ? k + 1 : -k;
        have &= cal.has_theta(IndexIB::bee(l1)) && cal.has_theta(IndexIB::bee(l2));
      }
      if (!have) continue;
      Expr v;
      if (p > 0)
        v = Rat(1, 2) *
            alternating_pairs(cal, IndexIB::Tag::B, 0, p, -1, IndexIB::Tag::B,
                              0, 1, +1, p - 1);
      else
        v = Rat(1, 2) *
            alternating_pairs(cal, IndexIB::Tag::B, 0, p + 1, +1,
                              IndexIB::Tag::B, 0, 0, -1, -p - 1);
      tau.omegaB0_[p] = v;
    } else {
      // integrate grad = xi_{B,0} . xi_{B,p}
      if (!cal.has_theta(IndexIB::bee(p))) continue;
      VectorField prod = m.multiply(cal.xi(IndexIB::bee(0)), cal.xi(IndexIB::bee(p)));
      std::vector<Expr> omega_form(n);
      for (size_t a = 0; a < n; ++a) {
        Expr acc;
        for (size_t b = 0; b < n; ++b) {
          const Rat& w2 = m.eta(a, b);
          if (w2.is_zero()) continue;
          acc += w2 * prod.comp[b];
        }
        omega_form[a] = acc;
      }
      Expr f;
      bool ok = true;
      try {
        for (size_t i = 0; i < n; ++i) {
          Expr rem = omega_form[i] - partial_derivative(f, m.coords[i]);
          if (rem.is_zero()) continue;
          f += antiderivative(rem, m.coords[i]);
        }
        for (size_t i = 0; i < n; ++i)
          if (!(partial_derivative(f, m.coords[i]) - omega_form[i]).is_zero())
            ok = false;
      } catch (const KernelError&) {
        ok = false;
      }
      if (!ok)
        throw NotIntegrableCalib("Omega_{B,0;B," + std::to_string(p) +
                                 "} failed to integrate");
      tau.omegaB0_[p] = f;
    }
  }
  // a11 extraction / enforcement on the Step-4 table.
  for (auto& [p, v] : tau.omegaB0_) {
    Rat wgt = Rat(p) + Rat(2) * cal.data.muB + Rat(1);
    Expr resid = m.dir_derivative(m.euler, v) - wgt * v;
    for (int s = 1; s <= p; ++s) {
      auto it = cal.data.rB.find(s);
      if (it == cal.data.rB.end()) continue;
      for (size_t eps = 0; eps < n; ++eps) {
        if (it->second[eps].is_zero()) continue;
        resid -= it->second[eps] *
                 tau.build_entry(IndexIB::gk((int)eps, p - s), IndexIB::bee(0));
      }
    }
    if (!resid.is_constant())
      throw KernelError("extra-data extraction failed at Omega_{B,0;B," +
                        std::to_string(p) + "}");
    Rat a = resid.is_zero() ? Rat(0) : resid.rat_value();
    bool allowed = (Rat(p + 1) + Rat(2) * cal.data.muB == Rat(0)) &&
                   ((p + 1) % 2 != 0);
    if (!a.is_zero() && !allowed) {
      if (wgt.is_zero())
        throw KernelError("cannot remove forbidden extra constant at level " +
                          std::to_string(p));
      v += Expr(a / wgt);
      a = Rat(0);
    }
    if (!a.is_zero()) tau.a11[p + 1] = a;
  }
  // a01 from the Legendre-density constants.
  for (auto& [q, a] : cal.data.a10) {
    if (a.is_zero()) continue;
    Rat sign = q % 2 ? Rat(1) : Rat(-1);  // (-1)^(q+1)
    tau.a01[q] = sign * a;
  }

  // Materialize the window.
  auto levels = [&](IndexIB::Tag t, int g) {
    std::vector<IndexIB> out;
    for (int p = -window; p <= window; ++p) {
      if (t == IndexIB::Tag::Greek && p < 0) continue;
      out.push_back({t, g, p});
    }
    return out;
  };
  std::vector<IndexIB> all;
  for (size_t g = 0; g < n; ++g)
    for (auto& i : levels(IndexIB::Tag::Greek, (int)g)) all.push_back(i);
  for (auto& i : levels(IndexIB::Tag::Zero, 0)) all.push_back(i);
  for (auto& i : levels(IndexIB::Tag::B, 0)) all.push_back(i);
  for (auto& I : all)
    for (auto& J : all) {
      auto key = std::make_pair(std::min(I, J), std::max(I, J));
      if (tau.omega_.count(key)) continue;
      tau.omega_[key] = tau.build_entry(key.first, key.second);
    }
  // symmetry consistency: building in the transposed order must agree
  for (auto& I : all)
    for (auto& J : all) {
      if (J < I) continue;
      Expr a = tau.build_entry(I, J);
      Expr b = tau.build_entry(J, I);
      if (!(a == b))
        throw KernelError("two-point table is not symmetric at " + I.str() +
                          J.str());
    }
  return tau;
}

Expr TauStructure::omega(const IndexIB& I, const IndexIB& J) const {
  auto key = std::make_pair(std::min(I, J), std::max(I, J));
  auto it = omega_.find(key);
  if (it != omega_.end()) return it->second;
  return build_entry(I, J);
}

RatMatrix TauStructure::eta_tilde() const {
  size_t n = cal->M->dim();
  RatMatrix E(n + 4, n + 4);
  E(0, n + 2) = E(n + 2, 0) = Rat(1);
  E(1, n + 3) = E(n + 3, 1) = Rat(1);
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b) E(2 + a, 2 + b) = cal->M->eta(a, b);
  return E;
}

RatMatrix TauStructure::mu_tilde() const {
  size_t n = cal->M->dim();
  std::vector<Rat> diag(n + 4);
  diag[0] = cal->data.mu0;
  diag[1] = cal->data.muB;
  for (size_t a = 0; a < n; ++a) diag[2 + a] = cal->data.mu[a];
  diag[n + 2] = -cal->data.mu0;
  diag[n + 3] = -cal->data.muB;
  return RatMatrix::diagonal(diag);
}

RatMatrix TauStructure::A_block(int s) const {
  RatMatrix A(2, 2);
  auto get = [](const std::map<int, Rat>& m, int k) {
    auto it = m.find(k);
    return it == m.end() ? Rat(0) : it->second;
  };
  A(0, 0) = get(cal->data.a00, s);
  A(0, 1) = get(a01, s);
  A(1, 0) = get(cal->data.a10, s);
  A(1, 1) = get(a11, s);
  return A;
}

RatMatrix TauStructure::R_tilde(int s) const {
  size_t n = cal->M->dim();
  RatMatrix R(n + 4, n + 4);
  if (s >= 1) {
    auto rit = cal->data.r.find(s);
    auto rbit = cal->data.rB.find(s);
    auto Rit = cal->data.R.find(s);
    for (size_t a = 0; a < n; ++a) {
      if (rit != cal->data.r.end()) R(2 + a, 0) = rit->second[a];
      if (rbit != cal->data.rB.end()) R(2 + a, 1) = rbit->second[a];
      if (Rit != cal->data.R.end())
        for (size_t b = 0; b < n; ++b) R(2 + a, 2 + b) = Rit->second(a, b);
    }
    // T_s^dag = (-1)^(s+1) T_s^T eta  (2 x n block at rows 0',B')
    Rat sign = s % 2 ? Rat(1) : Rat(-1);
    for (size_t b = 0; b < n; ++b) {
      Rat t0, t1;
      for (size_t a = 0; a < n; ++a) {
        Rat r0 = rit != cal->data.r.end() ? rit->second[a] : Rat(0);
        Rat r1 = rbit != cal->data.rB.end() ? rbit->second[a] : Rat(0);
        t0 += r0 * cal->M->eta(a, b);
        t1 += r1 * cal->M->eta(a, b);
      }
      R(n + 2, 2 + b) = sign * t0;
      R(n + 3, 2 + b) = sign * t1;
    }
  }
  RatMatrix A = A_block(s);
  R(n + 2, 0) = A(0, 0);
  R(n + 2, 1) = A(0, 1);
  R(n + 3, 0) = A(1, 0);
  R(n + 3, 1) = A(1, 1);
  return R;
}

std::vector<int> TauStructure::R_levels() const {
  std::set<int> s;
  for (auto& [k, v] : cal->data.R) s.insert(k);
  for (auto& [k, v] : cal->data.r) s.insert(k);
  for (auto& [k, v] : cal->data.rB) s.insert(k);
  for (auto& [k, v] : cal->data.a00) s.insert(k);
  for (auto& [k, v] : cal->data.a10) s.insert(k);
  for (auto& [k, v] : a01) s.insert(k);
  for (auto& [k, v] : a11) s.insert(k);
  std::vector<int> out;
  for (int k : s)
    if (!R_tilde(k).is_zero()) out.push_back(k);
  return out;
}

StructureReport TauStructure::check_matrix_relations() const {
  StructureReport rep;
  RatMatrix eta = eta_tilde(), mu = mu_tilde();
  if (!(eta * mu + mu * eta).is_zero())
    rep.failures.push_back({"eta_mu_anticommute", "nonzero"});
  for (int s : R_levels()) {
    RatMatrix R = R_tilde(s);
    Rat sign = s % 2 ? Rat(1) : Rat(-1);
    if (!(R.transpose() * eta - (eta * R).mul_rat(sign)).is_zero())
      rep.failures.push_back(
          {"R_eta_symmetry[s=" + std::to_string(s) + "]", "nonzero"});
    if (!(RatMatrix::commutator(mu, R) - R.mul_rat(Rat(s))).is_zero())
      rep.failures.push_back(
          {"mu_R_grading[s=" + std::to_string(s) + "]", "nonzero"});
  }
  return rep;
}

StructureReport TauStructure::check_properties() const {
  StructureReport rep;
  const GFManifold& m = *cal->M;
  size_t n = m.dim();
  std::vector<IndexIB> all;
  for (int p = -window; p <= window; ++p) {
    for (size_t g = 0; g < n; ++g)
      if (p >= 0) all.push_back(IndexIB::gk((int)g, p));
    all.push_back(IndexIB::zero(p));
    all.push_back(IndexIB::bee(p));
  }
  RatMatrix eta = eta_tilde();
  for (auto& I : all) {
    // theta identification
    rep.require_zero("omega00_theta" + I.str(),
                     omega(IndexIB::zero(0), I) - theta_tau(I));
    for (auto& J : all) {
      if (J < I) continue;
      Expr O = omega(I, J);
      // gradient property
      VectorField lhs = m.grad_eta(O);
      VectorField rhs = m.multiply(cal->xi(I), cal->xi(J));
      for (size_t a = 0; a < n; ++a)
        rep.require_zero("grad" + I.str() + J.str() + std::to_string(a),
                         lhs.comp[a] - rhs.comp[a]);
      // unit-field recursion (interior)
      if (I.level > -window && J.level > -window) {
        Expr lie = m.dir_derivative(m.unity, O);
        Expr expect = omega(I.shifted(-1), J) + omega(I, J.shifted(-1));
        if (I.level == 0 && J.level == 0)
          expect += Expr(eta(label_index(I), label_index(J)));
        rep.require_zero("unit" + I.str() + J.str(), lie - expect);
      }
      // Euler recursion
      {
        Expr lie = m.dir_derivative(m.euler, O);
        Rat wgt = Rat(I.level + J.level) + cal->data.mu_of(I) +
                  cal->data.mu_of(J) + Rat(1);
        Expr expect = wgt * O;
        for (int s = 1; s <= std::max(I.level, J.level); ++s) {
          for (size_t eps = 0; eps < n; ++eps) {
            if (s <= I.level) {
              Rat c1 = cal->data.Rtail(s, I, (int)eps);
              if (!c1.is_zero())
                expect += c1 * omega(IndexIB::gk((int)eps, I.level - s), J);
            }
            if (s <= J.level) {
              Rat c2 = cal->data.Rtail(s, J, (int)eps);
              if (!c2.is_zero())
                expect += c2 * omega(I, IndexIB::gk((int)eps, J.level - s));
            }
          }
        }
        RatMatrix Rt = R_tilde(I.level + J.level + 1);
        Rat tail = (eta * Rt)(label_index(I), label_index(J));
        if (I.level % 2 != 0) tail = -tail;
        expect += Expr(tail);
        rep.require_zero("euler" + I.str() + J.str(), lie - expect);
      }
    }
  }
  return rep;
}

}  // namespace gfm
