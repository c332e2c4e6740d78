// Strict DG E-module resolutions: E-semifree resolutions, finite Koszul resolutions over Q, and
// minimal free resolutions over R (the Betti number oracle).
#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "freemod.hpp"
#include "koszul.hpp"

namespace skewci {

// A bounded complex of finite free Q-modules with a strict action of E = Q<e_1..e_c | d e_i = f_i>,
// together with an augmentation onto a presented R-module.
struct DGEModuleData {
  std::vector<GenShape> gens;
  ColMap diff;               // color 0, homological degree -1
  std::vector<ColMap> eact;  // e_i: color cf_i, homological degree +1
  ModulePresentation target;
  ColMap aug;                // degree 0 generators -> target generators, color 0

  int size() const { return int(gens.size()); }
  int length() const {
    int l = 0;
    for (const auto& g : gens) l = std::max(l, g.hdeg);
    return l;
  }
  std::vector<int> in_degree(int h) const {
    std::vector<int> r;
    for (int j = 0; j < size(); ++j)
      if (gens[j].hdeg == h) r.push_back(j);
    return r;
  }
  std::vector<int> ranks() const {
    std::vector<int> r(length() + 1, 0);
    for (const auto& g : gens) ++r[g.hdeg];
    return r;
  }
};

inline ColMap relation_map(const RingSpec& R, int nsrc, int i) {
  ColMap f = zero_map(nsrc, R.cf[i]);
  for (int j = 0; j < nsrc; ++j) f.cols[j][j] = R.fcoef[i];
  return f;
}

// Checks d^2 = 0, d e_i + e_i d = f_i, e_i e_i = 0, e_i e_j = -chi(f_i,f_j) e_j e_i, homogeneity,
// and that the augmentation kills boundaries. Returns an empty string when all hold.
inline std::string check_dge(const RingSpec& R, const DGEModuleData& P) {
  const auto& G = P.gens;
  int N = P.size();
  auto homog = [&](const ColMap& phi, int dh, const char* name) -> std::string {
    for (int j = 0; j < N; ++j)
      for (const auto& [k, s] : phi.cols[j]) {
        if (G[k].hdeg != G[j].hdeg + dh) return std::string(name) + " changes homological degree wrongly";
        if (!exp_nonneg(exp_sub(exp_add(G[j].color, phi.color), G[k].color)))
          return std::string(name) + " is not homogeneous";
      }
    return "";
  };
  if (auto e = homog(P.diff, -1, "d"); !e.empty()) return e;
  for (int i = 0; i < R.c(); ++i)
    if (auto e = homog(P.eact[i], 1, "e"); !e.empty()) return e;
  if (!map_is_zero(compose(R, P.diff, P.diff, G, G, G, false))) return "d^2 != 0";
  for (int i = 0; i < R.c(); ++i) {
    ColMap t = compose(R, P.diff, P.eact[i], G, G, G, false);
    map_axpy(t, R.one(), compose(R, P.eact[i], P.diff, G, G, G, false));
    map_axpy(t, Cyc(R.m, Rat(-1)), relation_map(R, N, i));
    if (!map_is_zero(t)) return "d e" + std::to_string(i + 1) + " + e" + std::to_string(i + 1) + " d != f" + std::to_string(i + 1);
    if (!map_is_zero(compose(R, P.eact[i], P.eact[i], G, G, G, false))) return "e" + std::to_string(i + 1) + "^2 != 0";
    for (int j = i + 1; j < R.c(); ++j) {
      ColMap a = compose(R, P.eact[i], P.eact[j], G, G, G, false);
      map_axpy(a, chi(R, R.cf[i], R.cf[j]), compose(R, P.eact[j], P.eact[i], G, G, G, false));
      if (!map_is_zero(a)) return "e" + std::to_string(i + 1) + " and e" + std::to_string(j + 1) + " do not skew-commute";
    }
  }
  ModuleSlices Ns(R, P.target);
  auto tg = P.target.shape(R);
  for (int j = 0; j < N; ++j) {
    if (G[j].hdeg != 1) continue;
    Vec acc = zero_vec(R.m, Ns.dim(G[j].color));
    for (const auto& [k, s] : P.diff.cols[j]) {
      Exp be = exp_sub(G[j].color, G[k].color);
      for (const auto& [t, a] : P.aug.cols[k]) {
        Exp ga = exp_sub(G[k].color, tg[t].color);
        if (!mono_valid(R, exp_add(be, ga), true)) continue;
        Vec v = Ns.gen_image(G[j].color, t, s * a * R.unit(R.cpair_u(be, ga)));
        for (size_t r = 0; r < v.size(); ++r) acc[r] += v[r];
      }
    }
    if (!is_zero_vec(acc)) return "augmentation does not vanish on boundaries";
  }
  return "";
}

// An E-semifree resolution F = sum E u_k, truncated at homological degree hmax and internal degree Dmax,
// written over Q on the symbols e_S u_k.
struct SemifreeResolution {
  struct Sym {
    int k;
    unsigned S;
  };
  std::vector<GenShape> ugens;
  std::vector<std::map<int, Elem>> bound;  // d(u_k) = sum_l bound[k][l] u_l
  std::vector<Sym> syms;
  std::vector<GenShape> shape;
  std::map<std::pair<int, unsigned>, int> index;
  ColMap diff;
  std::vector<ColMap> eact;
  int hmax = 0;
  long Dmax = 0;
  bool closed = true;
  std::string diagnostic;

  std::vector<int> generator_counts() const {
    std::vector<int> r(hmax + 1, 0);
    for (const auto& g : ugens) ++r[g.hdeg];
    return r;
  }
  std::vector<int> q_ranks() const {
    std::vector<int> r(hmax + 1, 0);
    for (const auto& g : shape) ++r[g.hdeg];
    return r;
  }
};

namespace detail {

inline int popcount(unsigned S) { return __builtin_popcount(S); }

inline Mono e_mono(const RingSpec& R, const Exp& x, unsigned S) {
  Mono mo(R.n + R.c(), 0);
  for (int i = 0; i < R.n; ++i) mo[i] = x[i];
  for (int i = 0; i < R.c(); ++i)
    if (S >> i & 1) mo[R.n + i] = 1;
  return mo;
}

class SemifreeBuilder {
 public:
  SemifreeBuilder(const RingSpec& R, const ModulePresentation& M, int hmax, long Dmax)
      : R_(R), M_(M), E_(koszul_algebra(R)), Ns_(R, M) {
    F_.hmax = hmax;
    F_.Dmax = Dmax;
    F_.diff.color = Exp(R.n, 0);
    for (int i = 0; i < R.c(); ++i) F_.eact.push_back(ColMap{R.cf[i], {}});
  }

  SemifreeResolution run() {
    for (const auto& g : M_.gens) add_generator(0, g, {});
    std::vector<Exp> colors;
    for (const auto& g : M_.gens)
      for (const auto& a : monomials_upto(R_, F_.Dmax - R_.ideg(g))) colors.push_back(exp_add(g, a));
    sort_colors(R_, colors);
    int band = 0;
    for (int x : R_.d) band = std::max(band, x);
    for (int x : R_.df) band = std::max(band, x);
    for (int h = 1; h <= F_.hmax; ++h)
      for (const auto& s : colors) kill_homology(h, s);
    for (const auto& g : F_.ugens)
      if (g.hdeg > 0 && g.ideg > F_.Dmax - band) {
        F_.closed = false;
        F_.diagnostic = "generators adjoined at internal degree " + std::to_string(g.ideg) +
                        " near the window edge " + std::to_string(F_.Dmax) + "; Dmax may be too small to close homology";
        break;
      }
    return std::move(F_);
  }

 private:
  const RingSpec& R_;
  const ModulePresentation& M_;
  Algebra E_;
  ModuleSlices Ns_;
  SemifreeResolution F_;

  Col to_col(const std::map<int, Elem>& fe) const {
    Col c;
    for (const auto& [l, e] : fe)
      for (const auto& [mo, s] : e) {
        unsigned S = 0;
        for (int i = 0; i < R_.c(); ++i)
          if (mo[R_.n + i]) S |= 1u << i;
        auto it = F_.index.find({l, S});
        if (it == F_.index.end()) throw std::logic_error("boundary leaves the truncation");
        col_add(c, it->second, s);
      }
    return c;
  }

  void add_symbol(int k, unsigned S) {
    int h = F_.ugens[k].hdeg + popcount(S);
    Exp col = F_.ugens[k].color;
    for (int i = 0; i < R_.c(); ++i)
      if (S >> i & 1) col = exp_add(col, R_.cf[i]);
    F_.index[{k, S}] = int(F_.syms.size());
    F_.syms.push_back({k, S});
    F_.shape.push_back({h, R_.ideg(col), col});
    // d(e_S u_k) = d(e_S) u_k + (-1)^|S| e_S d(u_k)
    Elem eS{{e_mono(R_, Exp(R_.n, 0), S), R_.one()}};
    std::map<int, Elem> fe;
    Elem de = E_.diff(eS);
    if (!de.empty()) fe[k] = de;
    Cyc sg = Cyc(R_.m, Rat(popcount(S) % 2 ? -1 : 1));
    for (const auto& [l, b] : F_.bound[k]) {
      Elem p = elem_scale(E_.mul(eS, b), sg);
      if (!p.empty()) fe[l] = E_.add(fe[l], p);
    }
    F_.diff.cols.push_back(to_col(fe));
    for (auto& ea : F_.eact) ea.cols.emplace_back();
  }

  void add_generator(int h, const Exp& color, std::map<int, Elem> b) {
    int k = int(F_.ugens.size());
    F_.ugens.push_back({h, R_.ideg(color), color});
    F_.bound.push_back(std::move(b));
    std::vector<unsigned> subsets;
    for (unsigned S = 0; S < (1u << R_.c()); ++S)
      if (h + popcount(S) <= F_.hmax) subsets.push_back(S);
    std::stable_sort(subsets.begin(), subsets.end(), [](unsigned a, unsigned b) { return popcount(a) < popcount(b); });
    for (unsigned S : subsets) add_symbol(k, S);
    for (unsigned S : subsets)
      for (int i = 0; i < R_.c(); ++i) {
        if (S >> i & 1) continue;
        auto it = F_.index.find({k, S | (1u << i)});
        if (it == F_.index.end()) continue;
        Elem p = E_.mul(E_.var(R_.n + i), Elem{{e_mono(R_, Exp(R_.n, 0), S), R_.one()}});
        F_.eact[i].cols[F_.index.at({k, S})][it->second] = p.begin()->second;
      }
  }

  void kill_homology(int h, const Exp& s) {
    Slice lo = make_slice(R_, F_.shape, h - 1, s, false);
    if (lo.size() == 0) return;
    Mat zmap;
    if (h == 1) {
      zmap = Mat(R_.m, Ns_.dim(s), lo.size());
      for (int p = 0; p < lo.size(); ++p) {
        int sym = lo.gens[p];
        Vec v = Ns_.gen_image(s, F_.syms[sym].k, R_.one());
        for (size_t r = 0; r < v.size(); ++r) zmap.at(int(r), p) = v[r];
      }
    } else {
      Slice lo2 = make_slice(R_, F_.shape, h - 2, s, false);
      zmap = slice_matrix(R_, F_.diff, F_.shape, F_.shape, lo, lo2, s);
    }
    std::vector<Vec> Z = kernel(zmap);
    if (Z.empty()) return;
    Slice hi = make_slice(R_, F_.shape, h, s, false);
    Mat B = slice_matrix(R_, F_.diff, F_.shape, F_.shape, hi, lo, s);
    Span sp(R_.m, lo.size());
    for (int j = 0; j < B.cols; ++j) sp.add(B.col(j));
    for (const auto& z : Z) {
      if (!sp.add(z)) continue;
      std::map<int, Elem> fe;
      for (int p = 0; p < lo.size(); ++p) {
        if (z[p].is_zero()) continue;
        int sym = lo.gens[p];
        const auto& sy = F_.syms[sym];
        Mono mo = e_mono(R_, exp_sub(s, F_.shape[sym].color), sy.S);
        elem_add(fe[sy.k], mo, z[p]);
      }
      add_generator(h, s, fe);
    }
  }
};

}  // namespace detail

// Adjoins free E-generators degreewise, killing homology in internal degrees <= Dmax.
inline SemifreeResolution semifree_E_resolution(const RingSpec& R, const ModulePresentation& M, int hmax, long Dmax) {
  if (hmax < 0) throw std::invalid_argument("hmax must be nonnegative");
  return detail::SemifreeBuilder(R, M, hmax, Dmax).run();
}

struct KoszulOptions {
  long Dmax = -1;  // automatic when negative
  bool minimize = true;
  int attempts = 4;
  int hmax = -1;  // largest homological degree searched for a Q-free image; n when negative
};

struct KoszulResolution {
  DGEModuleData P;
  int truncation = 0;  // the degree n' at which the image became Q-free
  long Dmax = 0;
  bool minimized = false;
  std::string note;
};

namespace detail {

// Columns of d from degree h to degree h-1 as module vectors over Q in the local indexing of degree h-1.
inline std::vector<MVec> diff_columns(const std::vector<GenShape>& G, const ColMap& d, const std::vector<int>& src,
                                      const std::vector<int>& tgt) {
  std::map<int, int> local;
  for (size_t i = 0; i < tgt.size(); ++i) local[tgt[i]] = int(i);
  std::vector<MVec> out;
  for (int j : src) out.push_back(col_to_mvec(d.cols[j], G[j].color, G, local));
  return out;
}

inline GroebnerEngine q_engine(const Algebra& Q, const std::vector<GenShape>& G, const std::vector<int>& comps) {
  std::vector<long> sh;
  for (int j : comps) sh.push_back(G[j].ideg);
  return GroebnerEngine(Q, MonoOrder{}, sh);
}

inline Exp mvec_color(const MVec& v, const std::vector<GenShape>& G, const std::vector<int>& comps) {
  const auto& [k, c] = *v.begin();
  return exp_add(G[comps[k.first]].color, k.second);
}

}  // namespace detail

// Exactness of a finite free complex over Q with H_0 = target, certified with Groebner bases.
inline std::string certify_exact(const RingSpec& R, const DGEModuleData& P) {
  Algebra Q = skew_poly_ring(R);
  int L = P.length();
  std::vector<int> p0 = P.in_degree(0);
  if (int(p0.size()) != P.target.rank()) return "degree 0 does not match the module generators";
  std::vector<std::optional<GroebnerBasis>> gbs(L + 2);
  std::vector<std::vector<MVec>> cols(L + 2);
  for (int j = 1; j <= L; ++j) {
    cols[j] = detail::diff_columns(P.gens, P.diff, P.in_degree(j), P.in_degree(j - 1));
    gbs[j] = buchberger(detail::q_engine(Q, P.gens, P.in_degree(j - 1)), cols[j]);
  }
  auto in_image = [&](int j, const MVec& v) { return j <= L ? gbs[j]->is_zero(v) : v.empty(); };
  const auto& M = P.target;
  for (size_t r = 0; r < M.rels.size(); ++r) {
    MVec v;
    for (const auto& [j, s] : M.rels[r]) v[{j, exp_sub(M.rel_color[r], M.gens[j])}] = s;
    if (!in_image(1, v)) return "a relation of the module is not a boundary";
  }
  for (int j = 0; j < M.rank(); ++j)
    for (int i = 0; i < R.c(); ++i)
      if (!in_image(1, MVec{{{j, R.cf[i]}, R.fcoef[i]}})) return "f" + std::to_string(i + 1) + " does not act by a boundary";
  for (int j = 1; j <= L; ++j)
    for (const auto& z : generator_syzygies(*gbs[j], cols[j]))
      if (!in_image(j + 1, z)) return "homology in degree " + std::to_string(j);
  return "";
}

namespace detail {

// Cancels a unit entry of d between generators b (degree h) and b2 (degree h-1), transferring the E-action.
inline DGEModuleData cancel_pair(const RingSpec& R, const DGEModuleData& P, int b, int b2) {
  const auto& G = P.gens;
  Cyc uinv = P.diff.cols[b].at(b2).inverse();
  std::vector<int> keep;
  std::map<int, int> nw;
  for (int j = 0; j < P.size(); ++j)
    if (j != b && j != b2) {
      nw[j] = int(keep.size());
      keep.push_back(j);
    }
  std::vector<GenShape> G2;
  for (int j : keep) G2.push_back(G[j]);
  Exp zero(R.n, 0);
  ColMap io = zero_map(int(keep.size()), zero);  // P' -> P
  for (size_t a = 0; a < keep.size(); ++a) {
    int y = keep[a];
    io.cols[a][y] = R.one();
    auto it = P.diff.cols[y].find(b2);
    if (it != P.diff.cols[y].end()) io.cols[a][b] = -(uinv * it->second);
  }
  ColMap pr = zero_map(P.size(), zero);  // P -> P'
  for (int z = 0; z < P.size(); ++z) {
    if (z == b) continue;
    if (z == b2) {
      for (const auto& [B, g] : P.diff.cols[b])
        if (B != b2) pr.cols[z][nw.at(B)] = -(uinv * g);
      continue;
    }
    pr.cols[z][nw.at(z)] = R.one();
  }
  auto conj = [&](const ColMap& f) { return compose(R, pr, compose(R, f, io, G2, G, G, false), G2, G, G2, false); };
  DGEModuleData Q;
  Q.gens = G2;
  Q.target = P.target;
  Q.diff = conj(P.diff);
  for (const auto& e : P.eact) Q.eact.push_back(conj(e));
  auto tg = P.target.shape(R);
  Q.aug = compose(R, P.aug, io, G2, G, tg, true);
  return Q;
}

inline DGEModuleData minimize(const RingSpec& R, DGEModuleData P) {
  for (;;) {
    int bb = -1, bt = -1;
    for (int h = 1; h <= P.length() && bb < 0; ++h)
      for (int j : P.in_degree(h)) {
        for (const auto& [k, s] : P.diff.cols[j])
          if (P.gens[k].color == P.gens[j].color) {
            bb = j;
            bt = k;
            break;
          }
        if (bb >= 0) break;
      }
    if (bb < 0) return P;
    P = cancel_pair(R, P, bb, bt);
  }
}

// P_j = F_j for j < np, P_np = im d_np with the basis mins.
inline DGEModuleData truncate(const RingSpec& R, const SemifreeResolution& F, int np, const std::vector<MVec>& mins,
                              const GroebnerBasis& gb, const ModulePresentation& M) {
  DGEModuleData P;
  P.target = M;
  std::map<int, int> nw;
  std::vector<int> lower;
  for (int s = 0; s < int(F.shape.size()); ++s)
    if (F.shape[s].hdeg < np) {
      nw[s] = int(P.gens.size());
      P.gens.push_back(F.shape[s]);
      if (F.shape[s].hdeg == np - 1) lower.push_back(s);
    }
  int base = P.size();
  for (const auto& v : mins) {
    Exp col = mvec_color(v, F.shape, lower);
    P.gens.push_back({np, R.ideg(col), col});
  }
  int N = P.size();
  P.diff = zero_map(N, Exp(R.n, 0));
  for (int i = 0; i < R.c(); ++i) P.eact.push_back(zero_map(N, R.cf[i]));
  for (const auto& [s, j] : nw) {
    for (const auto& [k, c] : F.diff.cols[s]) P.diff.cols[j][nw.at(k)] = c;
    if (F.shape[s].hdeg + 1 < np)
      for (int i = 0; i < R.c(); ++i)
        for (const auto& [k, c] : F.eact[i].cols[s]) P.eact[i].cols[j][nw.at(k)] = c;
  }
  for (size_t l = 0; l < mins.size(); ++l)
    for (const auto& [key, c] : mins[l]) P.diff.cols[base + l][nw.at(lower[key.first])] = c;
  // e_i on degree np-1 lands in F_np / im d_{np+1} = im d_np: x -> d(e_i x)
  for (int s : lower)
    for (int i = 0; i < R.c(); ++i) {
      Col de;
      for (const auto& [k, c] : F.eact[i].cols[s]) {
        Exp be = exp_sub(exp_add(F.shape[s].color, R.cf[i]), F.shape[k].color);
        for (const auto& [l, d] : F.diff.cols[k])
          col_add(de, l, c * d * R.unit(R.cpair_u(be, exp_sub(F.shape[k].color, F.shape[l].color))));
      }
      if (de.empty()) continue;
      std::map<int, int> local;
      for (size_t a = 0; a < lower.size(); ++a) local[lower[a]] = int(a);
      Exp col = exp_add(F.shape[s].color, R.cf[i]);
      MVec v = col_to_mvec(de, col, F.shape, local);
      MVec q;
      if (!gb.reduce(v, &q).empty()) throw std::logic_error("e-action leaves the truncated image");
      MVec rep = gb.rep_of(q);
      for (const auto& [key, c] : rep) {
        if (exp_add(P.gens[base + key.first].color, key.second) != col) throw std::logic_error("inhomogeneous e-action");
        col_add(P.eact[i].cols[nw.at(s)], base + key.first, c);
      }
    }
  P.aug = zero_map(N, Exp(R.n, 0));
  for (const auto& [s, j] : nw)
    if (F.shape[s].hdeg == 0) P.aug.cols[j][F.syms[s].k] = R.one();
  return P;
}

}  // namespace detail

// Truncates an E-semifree resolution at the first degree n' >= 1 where im d_{n'} is Q-free; the result is
// a finite free Q-complex with strict E-action, certified exact, optionally minimized.
inline KoszulResolution finite_koszul_resolution(const RingSpec& R, const ModulePresentation& M, KoszulOptions opt = {}) {
  Algebra Q = skew_poly_ring(R);
  long D = opt.Dmax;
  if (D < 0) {
    D = M.max_ideg(R);
    for (int x : R.df) D += x;
    for (int x : R.d) D += x;
  }
  std::string last;
  for (int attempt = 0; attempt < opt.attempts; ++attempt, D *= 2) {
    int H = opt.hmax < 0 ? R.n : opt.hmax;
    SemifreeResolution F = semifree_E_resolution(R, M, H, D);
    for (int np = 1; np <= H; ++np) {
      std::vector<int> src, tgt;
      for (int s = 0; s < int(F.shape.size()); ++s) {
        if (F.shape[s].hdeg == np) src.push_back(s);
        if (F.shape[s].hdeg == np - 1) tgt.push_back(s);
      }
      auto cols = detail::diff_columns(F.shape, F.diff, src, tgt);
      GroebnerEngine eng = detail::q_engine(Q, F.shape, tgt);
      std::vector<MVec> mins = minimal_generators(eng, cols);
      GroebnerBasis gb = buchberger(eng, mins);
      if (!generator_syzygies(gb, mins).empty()) continue;
      KoszulResolution K;
      K.P = detail::truncate(R, F, np, mins, gb, M);
      K.truncation = np;
      K.Dmax = D;
      if (auto e = check_dge(R, K.P); !e.empty()) throw std::logic_error("truncated resolution is not strict: " + e);
      if (auto e = certify_exact(R, K.P); !e.empty()) {
        last = e;
        break;
      }
      if (opt.minimize) {
        DGEModuleData Pm = detail::minimize(R, K.P);
        if (check_dge(R, Pm).empty()) {
          K.P = std::move(Pm);
          K.minimized = true;
        } else {
          K.note = "minimized complex lost strictness; kept the unminimized truncation";
        }
      }
      return K;
    }
    if (last.empty()) last = "no Q-free image up to degree " + std::to_string(H);
  }
  throw std::runtime_error("finite Koszul resolution not certified (" + last + "); Dmax too small");
}

// Graded Betti numbers over R.
struct BettiTable {
  int imax = 0;
  long Dmax = 0;
  std::map<int, std::map<Exp, int>> by_color;
  std::map<int, std::map<long, int>> table;  // i -> internal degree -> b_{i,j}

  std::vector<long> totals() const {
    std::vector<long> t(imax + 1, 0);
    for (const auto& [i, row] : table)
      for (const auto& [d, b] : row) t[i] += b;
    return t;
  }
  int at(int i, long j) const {
    auto it = table.find(i);
    if (it == table.end()) return 0;
    auto jt = it->second.find(j);
    return jt == it->second.end() ? 0 : jt->second;
  }
  nlohmann::json to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& [i, row] : table)
      for (const auto& [d, b] : row) rows.push_back({i, d, b});
    return {{"imax", imax}, {"Dmax", Dmax}, {"betti", rows}, {"totals", totals()}};
  }
};

// Minimal free resolution over R computed color by color: at each level new generators span a complement
// of the submodule generated so far inside the kernel of the previous map.
inline BettiTable minimal_R_resolution(const RingSpec& R, const ModulePresentation& M, int imax, long Dmax) {
  BettiTable bt;
  bt.imax = imax;
  bt.Dmax = Dmax;
  ModuleSlices Ns(R, M);
  std::vector<Exp> colors;
  for (const auto& g : M.gens)
    for (const auto& a : monomials_upto(R, Dmax - R.ideg(g))) colors.push_back(exp_add(g, a));
  sort_colors(R, colors);
  auto mgens = M.shape(R);
  // level 0: minimal generators of M
  std::vector<GenShape> prev;
  ColMap prev_map = zero_map(0, Exp(R.n, 0));  // level-0 generators -> ambient of M
  for (const auto& s : colors) {
    int dN = Ns.dim(s);
    if (dN == 0) continue;
    Slice a = make_slice(R, prev, INT32_MIN, s, true);
    const auto& data = Ns.at(s);
    Span sp(R.m, dN);
    if (a.size()) {
      Mat img = slice_matrix(R, prev_map, prev, mgens, a, data.v, s);
      for (int j = 0; j < img.cols; ++j) sp.add(Ns.project(s, img.col(j)));
    }
    for (int b = 0; b < dN; ++b) {
      Vec e = zero_vec(R.m, dN);
      e[b] = R.one();
      if (!sp.add(e)) continue;
      prev.push_back({0, R.ideg(s), s});
      prev_map.cols.push_back(Col{{data.v.gens[data.basis[b]], R.one()}});
      bt.by_color[0][s]++;
      bt.table[0][R.ideg(s)]++;
    }
  }
  std::vector<GenShape> prev2;  // level i-2
  ColMap prev2_map;
  for (int i = 1; i <= imax; ++i) {
    std::vector<GenShape> cur;
    ColMap cur_map = zero_map(0, Exp(R.n, 0));
    for (const auto& s : colors) {
      Slice lo = make_slice(R, prev, INT32_MIN, s, true);
      if (lo.size() == 0) continue;
      Mat zm;
      if (i == 1) {
        const auto& data = Ns.at(s);
        Mat img = slice_matrix(R, prev_map, prev, mgens, lo, data.v, s);
        zm = Mat(R.m, Ns.dim(s), lo.size());
        for (int j = 0; j < img.cols; ++j) {
          Vec p = Ns.project(s, img.col(j));
          for (size_t r = 0; r < p.size(); ++r) zm.at(int(r), j) = p[r];
        }
      } else {
        Slice lo2 = make_slice(R, prev2, INT32_MIN, s, true);
        zm = slice_matrix(R, prev_map, prev, prev2, lo, lo2, s);
      }
      std::vector<Vec> Z = kernel(zm);
      if (Z.empty()) continue;
      Span sp(R.m, lo.size());
      Slice a = make_slice(R, cur, INT32_MIN, s, true);
      if (a.size()) {
        Mat img = slice_matrix(R, cur_map, cur, prev, a, lo, s);
        for (int j = 0; j < img.cols; ++j) sp.add(img.col(j));
      }
      for (const auto& z : Z) {
        if (!sp.add(z)) continue;
        Col c;
        for (int p = 0; p < lo.size(); ++p) col_add(c, lo.gens[p], z[p]);
        cur.push_back({i, R.ideg(s), s});
        cur_map.cols.push_back(c);
        bt.by_color[i][s]++;
        bt.table[i][R.ideg(s)]++;
      }
    }
    prev2 = std::move(prev);
    prev2_map = std::move(prev_map);
    prev = std::move(cur);
    prev_map = std::move(cur_map);
    if (prev.empty()) break;
  }
  return bt;
}

// Serialization with entries written as terms in the polynomial grammar.
inline nlohmann::json colmap_to_json(const RingSpec& R, const ColMap& f, const std::vector<GenShape>& src,
                                     const std::vector<GenShape>& tgt) {
  Algebra Q = skew_poly_ring(R);
  nlohmann::json out = nlohmann::json::array();
  for (size_t j = 0; j < f.cols.size(); ++j)
    for (const auto& [k, s] : f.cols[j])
      out.push_back({j, k, Q.str(Elem{{exp_sub(exp_add(src[j].color, f.color), tgt[k].color), s}})});
  return out;
}

inline ColMap colmap_from_json(const RingSpec& R, const nlohmann::json& j, int nsrc, Exp color) {
  Algebra Q = skew_poly_ring(R);
  ColMap f = zero_map(nsrc, std::move(color));
  for (const auto& e : j) {
    Elem p = parse_poly(Q, e.at(2).get<std::string>());
    if (p.size() != 1) throw std::invalid_argument("map entry must be a single term");
    f.cols.at(e.at(0).get<int>())[e.at(1).get<int>()] = p.begin()->second;
  }
  return f;
}

inline nlohmann::json dge_to_json(const RingSpec& R, const DGEModuleData& P) {
  nlohmann::json gens = nlohmann::json::array();
  for (const auto& g : P.gens) gens.push_back({{"hdeg", g.hdeg}, {"color", g.color}});
  nlohmann::json ea = nlohmann::json::array();
  for (const auto& e : P.eact) ea.push_back(colmap_to_json(R, e, P.gens, P.gens));
  return {{"generators", gens},
          {"diff", colmap_to_json(R, P.diff, P.gens, P.gens)},
          {"eact", ea},
          {"module", module_to_json(R, P.target)},
          {"aug", colmap_to_json(R, P.aug, P.gens, P.target.shape(R))}};
}

inline DGEModuleData dge_from_json(const RingSpec& R, const nlohmann::json& j) {
  DGEModuleData P;
  for (const auto& g : j.at("generators")) {
    Exp c = g.at("color").get<Exp>();
    P.gens.push_back({g.at("hdeg").get<int>(), R.ideg(c), c});
  }
  int N = P.size();
  P.diff = colmap_from_json(R, j.at("diff"), N, Exp(R.n, 0));
  if (int(j.at("eact").size()) != R.c()) throw std::invalid_argument("wrong number of e-actions");
  for (int i = 0; i < R.c(); ++i) P.eact.push_back(colmap_from_json(R, j.at("eact")[i], N, R.cf[i]));
  P.target = module_from_json(R, j.at("module"));
  P.aug = colmap_from_json(R, j.at("aug"), N, Exp(R.n, 0));
  return P;
}

}  // namespace skewci
