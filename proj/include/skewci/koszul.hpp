// The Koszul DG algebra E, the diagonal resolution E^e<Y>, and the diagonal expansion of y^(H).
#pragma once

#include <map>
#include <set>
#include <tuple>
#include <vector>

#include "linalg.hpp"
#include "validate.hpp"

namespace skewci {

// E = Q<e_1..e_c | d e_i = f_i>; variables x_1..x_n then e_1..e_c.
inline Algebra koszul_algebra(const RingSpec& R) {
  std::vector<VarInfo> v;
  for (int i = 0; i < R.n; ++i) v.push_back({"x" + std::to_string(i + 1), VarKind::Poly, 0, R.d[i], unit_exp(R.n, i), R.d[i]});
  for (int i = 0; i < R.c(); ++i) v.push_back({"e" + std::to_string(i + 1), VarKind::Exterior, 1, R.df[i], R.cf[i], R.df[i]});
  Algebra E(R, v);
  E.dvar.assign(E.size(), Elem{});
  for (int i = 0; i < R.c(); ++i) {
    Elem f;
    for (const auto& [mo, c] : R.f[i]) {
      Mono full = E.one_mono();
      for (int j = 0; j < R.n; ++j) full[j] = mo[j];
      f.emplace(full, c);
    }
    E.dvar[R.n + i] = f;
  }
  return E;
}

inline Elem koszul_mul(const Algebra& E, const Elem& u, const Elem& v) { return E.mul(u, v); }
inline Elem koszul_diff(const Algebra& E, const Elem& u) { return E.diff(u); }

// E^e<Y> modelled on x_1..x_n, e_1..e_c, e'_1..e'_c, y_1..y_c with d y_i = e'_i - e_i.
// With drop_y the y-differential is set to zero (a deliberately broken complex).
inline Algebra diagonal_algebra(const RingSpec& R, bool drop_y = false) {
  int n = R.n, c = R.c();
  std::vector<VarInfo> v;
  for (int i = 0; i < n; ++i) v.push_back({"x" + std::to_string(i + 1), VarKind::Poly, 0, R.d[i], unit_exp(n, i), R.d[i]});
  for (int i = 0; i < c; ++i) v.push_back({"e" + std::to_string(i + 1), VarKind::Exterior, 1, R.df[i], R.cf[i], R.df[i]});
  for (int i = 0; i < c; ++i) v.push_back({"e" + std::to_string(i + 1) + "'", VarKind::Exterior, 1, R.df[i], R.cf[i], R.df[i]});
  for (int i = 0; i < c; ++i) v.push_back({"y" + std::to_string(i + 1), VarKind::Divided, 2, R.df[i], R.cf[i], R.df[i]});
  Algebra A(R, v);
  A.dvar.assign(A.size(), Elem{});
  for (int i = 0; i < c; ++i) {
    Elem f;
    for (const auto& [mo, co] : R.f[i]) {
      Mono full = A.one_mono();
      for (int j = 0; j < n; ++j) full[j] = mo[j];
      f.emplace(full, co);
    }
    A.dvar[n + i] = f;
    A.dvar[n + c + i] = f;
    if (!drop_y) A.dvar[n + 2 * c + i] = elem_sub(A.var(n + c + i), A.var(n + i), R.m);
  }
  return A;
}

struct PhiTerm {
  Exp h1, h2;
  Cyc scalar;
};

// Phi(y^(H)) = sum over H'+H''=H of prod_{i<j} c(y_i,y_j)^{h'_j h''_i} y^(H') (x) y^(H'').
inline std::vector<PhiTerm> phi_expand(const RingSpec& R, const Exp& H) {
  int c = int(H.size());
  std::vector<PhiTerm> out;
  Exp h1(c, 0);
  std::function<void(int)> rec = [&](int i) {
    if (i == c) {
      Exp h2 = exp_sub(H, h1);
      long e = 0;
      for (int a = 0; a < c; ++a)
        for (int b = a + 1; b < c; ++b) e += long(R.chi_exp(R.cf[a], R.cf[b])) * h1[b] * h2[a];
      out.push_back({h1, h2, R.unit(Unit(int(mod_floor(e, R.m)), false))});
      return;
    }
    for (int k = 0; k <= H[i]; ++k) {
      h1[i] = k;
      rec(i + 1);
    }
    h1[i] = 0;
  };
  rec(0);
  return out;
}

struct PhiReport {
  bool ok = true;
  long checks = 0;
  std::string failure;
  nlohmann::json to_json() const { return {{"ok", ok}, {"checks", checks}, {"failure", failure}}; }
};

// Coassociativity (Phi (x) 1)Phi = (1 (x) Phi)Phi and counitality on all y^(H) with |H| <= bound.
inline PhiReport verify_phi(const RingSpec& R, int bound) {
  PhiReport rep;
  int c = R.c();
  std::vector<Exp> Hs;
  Exp cur(c, 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == c) {
      Hs.push_back(cur);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      cur[i] = k;
      rec(i + 1, left - k);
    }
    cur[i] = 0;
  };
  rec(0, bound);
  Exp zero(c, 0);
  for (const auto& H : Hs) {
    std::map<std::tuple<Exp, Exp, Exp>, Cyc> left, right;
    auto terms = phi_expand(R, H);
    for (const auto& t : terms) {
      for (const auto& s : phi_expand(R, t.h1)) left[{s.h1, s.h2, t.h2}] = t.scalar * s.scalar;
      for (const auto& s : phi_expand(R, t.h2)) right[{t.h1, s.h1, s.h2}] = t.scalar * s.scalar;
    }
    ++rep.checks;
    if (left != right && rep.ok) {
      rep.ok = false;
      rep.failure = "coassociativity fails on y^(" + exp_str(H) + ")";
    }
    for (const auto& t : terms)
      if ((t.h1 == zero || t.h2 == zero) && !t.scalar.is_one() && rep.ok) {
        rep.ok = false;
        rep.failure = "counit fails on y^(" + exp_str(H) + ")";
      }
  }
  return rep;
}

// All monomials of A with internal degree <= Dmax, grouped by (homological degree, color).
using SliceKey = std::pair<int, Exp>;

inline std::map<SliceKey, std::vector<Mono>> monomial_slices(const Algebra& A, long Dmax) {
  std::map<SliceKey, std::vector<Mono>> out;
  Mono cur = A.one_mono();
  int N = A.size();
  std::function<void(int, long)> rec = [&](int u, long deg) {
    if (u == N) {
      if (A.killed(cur)) return;
      out[{A.hdeg(cur), A.color(cur)}].push_back(cur);
      return;
    }
    int maxe = A.vars[u].kind == VarKind::Exterior ? 1 : 1 << 20;
    for (int e = 0; e <= maxe && deg + e * A.vars[u].ideg <= Dmax; ++e) {
      cur[u] = e;
      rec(u + 1, deg + e * A.vars[u].ideg);
    }
    cur[u] = 0;
  };
  rec(0, 0);
  return out;
}

// Matrix of the derivation between two monomial slices.
inline Mat diff_matrix(const Algebra& A, const std::vector<Mono>& src, const std::vector<Mono>& dst) {
  Mat M(A.m, int(dst.size()), int(src.size()));
  std::map<Mono, int> idx;
  for (size_t i = 0; i < dst.size(); ++i) idx[dst[i]] = int(i);
  for (size_t j = 0; j < src.size(); ++j) {
    Elem d = A.diff_mono(src[j]);
    for (const auto& [mo, c] : d) {
      auto it = idx.find(mo);
      if (it == idx.end()) throw std::logic_error("differential leaves its slice");
      M.at(it->second, int(j)) = c;
    }
  }
  return M;
}

struct DiagonalReport {
  bool ok = true;
  long Dmax = 0;
  int fail_hdeg = -1;
  Exp fail_color;
  std::string message;
  std::map<int, long> total_homology;  // homological degree -> summed dimension
  std::set<int> failing_hdegs;
  nlohmann::json to_json() const {
    nlohmann::json th = nlohmann::json::object();
    for (auto [h, d] : total_homology) th[std::to_string(h)] = d;
    return {{"ok", ok}, {"Dmax", Dmax}, {"fail_hdeg", fail_hdeg}, {"fail_color", fail_color}, {"message", message}, {"homology", th},
            {"failing_hdegs", failing_hdegs}};
  }
};

// Homology of E^e<Y> in internal degrees <= Dmax must be R in homological degree 0.
inline DiagonalReport verify_diagonal_resolution(const RingSpec& R, long Dmax, bool drop_y = false) {
  DiagonalReport rep;
  rep.Dmax = Dmax;
  Algebra A = diagonal_algebra(R, drop_y);
  Algebra Rq = quotient_ring(R);
  auto slices = monomial_slices(A, Dmax);
  std::map<SliceKey, int> rank_out;  // rank of d leaving (h, color)
  for (const auto& [key, mons] : slices) {
    if (key.first == 0) continue;
    auto it = slices.find({key.first - 1, key.second});
    if (it == slices.end()) {
      rank_out[key] = 0;
      continue;
    }
    rank_out[key] = rank(diff_matrix(A, mons, it->second));
  }
  for (const auto& [key, mons] : slices) {
    int h = key.first;
    int dim = int(mons.size());
    int out = h == 0 ? 0 : rank_out[key];
    auto in = rank_out.find({h + 1, key.second});
    int inr = in == rank_out.end() ? 0 : in->second;
    int hom = dim - out - inr;
    rep.total_homology[h] += hom;
    int expect = 0;
    if (h == 0) expect = Rq.killed(key.second) ? 0 : 1;
    if (hom != expect) rep.failing_hdegs.insert(h);
    if (hom != expect && rep.ok) {
      rep.ok = false;
      rep.fail_hdeg = h;
      rep.fail_color = key.second;
      rep.message = "homology of dimension " + std::to_string(hom) + " in homological degree " + std::to_string(h) +
                    " and color " + exp_str(key.second) + ", expected " + std::to_string(expect);
    }
  }
  if (rep.ok) rep.message = "homology is R in degree 0 up to internal degree " + std::to_string(Dmax);
  return rep;
}

}  // namespace skewci
