// Left Groebner bases for modules over q-commuting polynomial rings.
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "colorcore.hpp"

namespace skewci {

using MKey = std::pair<int, Mono>;     // (component, monomial)
using MVec = std::map<MKey, Cyc>;      // element of a free module

struct GenShape {
  int hdeg = 0;
  long ideg = 0;
  Exp color;
};

struct FreeModuleShape {
  std::vector<GenShape> gens;
  int rank() const { return int(gens.size()); }
};

struct MonoOrder {
  enum Kind { DegRevLex, Lex } kind = DegRevLex;
  bool pot = true;  // position over term
};

inline void mvec_add(MVec& v, const MKey& k, const Cyc& c) {
  if (c.is_zero()) return;
  auto it = v.find(k);
  if (it == v.end()) {
    v.emplace(k, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) v.erase(it);
}
inline void mvec_axpy(MVec& y, const Cyc& s, const MVec& x) {
  for (const auto& [k, c] : x) mvec_add(y, k, s * c);
}

class GroebnerEngine {
 public:
  const Algebra* A;
  MonoOrder ord;
  std::vector<long> shift;  // per component degree shift, used in orders and Hilbert series

  GroebnerEngine(const Algebra& alg, MonoOrder o = {}, std::vector<long> sh = {}) : A(&alg), ord(o), shift(std::move(sh)) {}

  long wdeg(const Mono& a) const {
    long s = 0;
    for (size_t u = 0; u < a.size(); ++u) s += long(A->vars[u].weight) * a[u];
    return s;
  }
  long kdeg(const MKey& k) const { return wdeg(k.second) + (k.first < int(shift.size()) ? shift[k.first] : 0); }

  // > 0 if a > b
  int cmp_mono(const Mono& a, const Mono& b) const {
    if (ord.kind == MonoOrder::DegRevLex) {
      long da = wdeg(a), db = wdeg(b);
      if (da != db) return da > db ? 1 : -1;
      for (int u = int(a.size()) - 1; u >= 0; --u)
        if (a[u] != b[u]) return a[u] < b[u] ? 1 : -1;
      return 0;
    }
    for (size_t u = 0; u < a.size(); ++u)
      if (a[u] != b[u]) return a[u] > b[u] ? 1 : -1;
    return 0;
  }
  int cmp(const MKey& a, const MKey& b) const {
    if (ord.pot) {
      if (a.first != b.first) return a.first < b.first ? 1 : -1;
      return cmp_mono(a.second, b.second);
    }
    int c = cmp_mono(a.second, b.second);
    if (c) return c;
    if (a.first != b.first) return a.first < b.first ? 1 : -1;
    return 0;
  }
  const MKey* lead(const MVec& v) const {
    const MKey* best = nullptr;
    for (const auto& [k, c] : v)
      if (!best || cmp(k, *best) > 0) best = &k;
    return best;
  }

  // x^g * v (left multiplication by a monomial)
  MVec mono_mul(const Mono& g, const MVec& v) const {
    MVec r;
    Mono out;
    Unit u;
    Int k;
    for (const auto& [key, c] : v)
      if (A->mul_mono(g, key.second, out, u, k)) mvec_add(r, {key.first, out}, c * A->scalar(u, k));
    return r;
  }
  Cyc mono_coef(const Mono& g, const Mono& b) const {
    Mono out;
    Unit u;
    Int k;
    if (!A->mul_mono(g, b, out, u, k)) return Cyc(A->m);
    return A->scalar(u, k);
  }
  MVec elem_mul(const Elem& p, const MVec& v) const {
    MVec r;
    for (const auto& [mo, c] : p) mvec_axpy(r, c, mono_mul(mo, v));
    return r;
  }
};

class GroebnerBasis {
 public:
  GroebnerEngine eng;
  std::vector<MVec> elems;
  std::vector<MKey> leads;
  std::vector<MVec> reps;  // elems[k] = sum_l reps[k][(l, mono)] x^mono gens[l]
  int ngens = 0;

  explicit GroebnerBasis(GroebnerEngine e) : eng(std::move(e)) {}

  // Division: returns remainder, accumulates quotient in terms of basis elements.
  MVec reduce(MVec v, MVec* quot = nullptr, bool full = true) const {
    MVec rem;
    while (!v.empty()) {
      const MKey* ld = eng.lead(v);
      MKey k = *ld;
      Cyc a = v.at(k);
      int hit = -1;
      for (size_t g = 0; g < elems.size(); ++g)
        if (leads[g].first == k.first && exp_divides(leads[g].second, k.second)) {
          hit = int(g);
          break;
        }
      if (hit < 0) {
        if (!full) {
          for (const auto& kv : v) mvec_add(rem, kv.first, kv.second);
          return rem;
        }
        mvec_add(rem, k, a);
        v.erase(k);
        continue;
      }
      Mono gam = exp_sub(k.second, leads[hit].second);
      Cyc lc = elems[hit].at(leads[hit]) * eng.mono_coef(gam, leads[hit].second);
      Cyc s = a * lc.inverse();
      mvec_axpy(v, -s, eng.mono_mul(gam, elems[hit]));
      if (quot) mvec_add(*quot, {hit, gam}, s);
    }
    return rem;
  }

  void add_elem(MVec v, MVec rep) {
    const MKey* ld = eng.lead(v);
    Cyc inv = v.at(*ld).inverse();
    MKey k = *ld;
    for (auto& kv : v) kv.second *= inv;
    for (auto& kv : rep) kv.second *= inv;
    elems.push_back(std::move(v));
    leads.push_back(k);
    reps.push_back(std::move(rep));
  }

  // S-vector of basis elements i, j with equal lead component; also its representation over the basis.
  std::pair<MVec, MVec> spair(int i, int j) const {
    Mono L(leads[i].second.size());
    for (size_t u = 0; u < L.size(); ++u) L[u] = std::max(leads[i].second[u], leads[j].second[u]);
    Mono gi = exp_sub(L, leads[i].second), gj = exp_sub(L, leads[j].second);
    Cyc ci = (elems[i].at(leads[i]) * eng.mono_coef(gi, leads[i].second)).inverse();
    Cyc cj = (elems[j].at(leads[j]) * eng.mono_coef(gj, leads[j].second)).inverse();
    MVec s;
    mvec_axpy(s, ci, eng.mono_mul(gi, elems[i]));
    mvec_axpy(s, -cj, eng.mono_mul(gj, elems[j]));
    MVec over;
    mvec_add(over, {i, gi}, ci);
    mvec_add(over, {j, gj}, -cj);
    return {s, over};
  }

  MVec rep_of(const MVec& over) const {
    MVec r;
    for (const auto& [k, c] : over) mvec_axpy(r, c, eng.mono_mul(k.second, reps[k.first]));
    return r;
  }

  bool is_zero(const MVec& v) const { return reduce(v).empty(); }
};

inline GroebnerBasis buchberger(const GroebnerEngine& eng, const std::vector<MVec>& gens) {
  GroebnerBasis gb(eng);
  gb.ngens = int(gens.size());
  std::vector<std::pair<int, int>> pairs;
  auto push_pairs = [&](int k) {
    for (int i = 0; i < k; ++i)
      if (gb.leads[i].first == gb.leads[k].first) pairs.push_back({i, k});
  };
  for (size_t l = 0; l < gens.size(); ++l) {
    MVec q;
    MVec r = gb.reduce(gens[l], &q);
    if (r.empty()) continue;
    MVec rep;
    mvec_add(rep, {int(l), Mono(eng.A->size(), 0)}, Cyc(eng.A->m, Rat(1)));
    mvec_axpy(rep, Cyc(eng.A->m, Rat(-1)), gb.rep_of(q));
    gb.add_elem(r, rep);
    push_pairs(int(gb.elems.size()) - 1);
  }
  while (!pairs.empty()) {
    auto [i, j] = pairs.front();
    pairs.erase(pairs.begin());
    auto [s, over] = gb.spair(i, j);
    MVec q;
    MVec r = gb.reduce(s, &q);
    if (r.empty()) continue;
    MVec rep = gb.rep_of(over);
    mvec_axpy(rep, Cyc(eng.A->m, Rat(-1)), gb.rep_of(q));
    gb.add_elem(r, rep);
    push_pairs(int(gb.elems.size()) - 1);
  }
  return gb;
}

inline MVec normal_form(const MVec& v, const GroebnerBasis& gb) { return gb.reduce(v); }

// Schreyer syzygies among the basis elements (vectors over components = basis indices).
inline std::vector<MVec> syzygies(const GroebnerBasis& gb) {
  std::vector<MVec> out;
  int N = int(gb.elems.size());
  for (int j = 0; j < N; ++j)
    for (int i = 0; i < j; ++i) {
      if (gb.leads[i].first != gb.leads[j].first) continue;
      auto [s, over] = gb.spair(i, j);
      MVec q;
      MVec r = gb.reduce(s, &q);
      if (!r.empty()) throw std::logic_error("input is not a Groebner basis");
      MVec syz = over;
      mvec_axpy(syz, Cyc(gb.eng.A->m, Rat(-1)), q);
      if (!syz.empty()) out.push_back(std::move(syz));
    }
  return out;
}

// Syzygies of the original generators of gb.
inline std::vector<MVec> generator_syzygies(const GroebnerBasis& gb, const std::vector<MVec>& gens) {
  std::vector<MVec> out;
  const int m = gb.eng.A->m;
  for (const auto& s : syzygies(gb)) {
    MVec t = gb.rep_of(s);
    if (!t.empty()) out.push_back(t);
  }
  for (size_t l = 0; l < gens.size(); ++l) {
    MVec q;
    MVec r = gb.reduce(gens[l], &q);
    if (!r.empty()) throw std::logic_error("generator not in its own submodule");
    MVec t;
    mvec_add(t, {int(l), Mono(gb.eng.A->size(), 0)}, Cyc(m, Rat(1)));
    mvec_axpy(t, Cyc(m, Rat(-1)), gb.rep_of(q));
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

inline long mvec_degree(const GroebnerEngine& eng, const MVec& v) {
  return v.empty() ? 0 : eng.kdeg(v.begin()->first);
}

// Greedy minimal generating subset of a homogeneous submodule.
inline std::vector<MVec> minimal_generators(const GroebnerEngine& eng, std::vector<MVec> gens) {
  std::vector<MVec> nz;
  for (auto& g : gens)
    if (!g.empty()) nz.push_back(std::move(g));
  std::stable_sort(nz.begin(), nz.end(), [&](const MVec& a, const MVec& b) { return mvec_degree(eng, a) < mvec_degree(eng, b); });
  std::vector<MVec> kept;
  for (auto& g : nz) {
    GroebnerBasis gb = buchberger(eng, kept);
    if (!gb.is_zero(g)) kept.push_back(g);
  }
  return kept;
}

// Standard monomials of the quotient counted by degree, for each degree <= Dmax.
inline std::vector<long> hilbert_series(const GroebnerBasis& gb, int rank, long Dmax) {
  const auto& eng = gb.eng;
  int N = eng.A->size();
  std::vector<long> h(Dmax + 1, 0);
  for (int comp = 0; comp < rank; ++comp) {
    long sh = comp < int(eng.shift.size()) ? eng.shift[comp] : 0;
    std::vector<Mono> lds;
    for (const auto& k : gb.leads)
      if (k.first == comp) lds.push_back(k.second);
    Mono cur(N, 0);
    std::function<void(int, long)> rec = [&](int u, long deg) {
      if (u == N) {
        if (eng.A->killed(cur)) return;
        for (const auto& l : lds)
          if (exp_divides(l, cur)) return;
        if (deg + sh >= 0 && deg + sh <= Dmax) ++h[deg + sh];
        return;
      }
      long w = eng.A->vars[u].weight;
      int maxe = eng.A->vars[u].kind == VarKind::Exterior ? 1 : 1 << 20;
      for (int e = 0; e <= maxe && deg + sh + e * w <= Dmax; ++e) {
        cur[u] = e;
        rec(u + 1, deg + e * w);
        if (w == 0) break;
      }
      cur[u] = 0;
    };
    rec(0, 0);
  }
  return h;
}

// Numerator N(t) of the Hilbert series of S/(monomials), HS = N(t)/prod(1 - t^w_u).
using IntPoly = std::map<long, Int>;

inline void ipoly_add(IntPoly& p, long e, const Int& c) {
  if (c == 0) return;
  Int& x = p[e];
  x += c;
  if (x == 0) p.erase(e);
}
inline IntPoly ipoly_mul(const IntPoly& a, const IntPoly& b) {
  IntPoly r;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) ipoly_add(r, ea + eb, ca * cb);
  return r;
}

inline IntPoly hilbert_numerator(std::vector<Mono> gens, const std::vector<long>& w) {
  auto deg = [&](const Mono& a) {
    long s = 0;
    for (size_t u = 0; u < a.size(); ++u) s += w[u] * a[u];
    return s;
  };
  // minimize
  std::sort(gens.begin(), gens.end(), [&](const Mono& a, const Mono& b) { return deg(a) < deg(b); });
  std::vector<Mono> mins;
  for (const auto& g : gens) {
    bool red = false;
    for (const auto& h : mins)
      if (exp_divides(h, g)) {
        red = true;
        break;
      }
    if (!red) mins.push_back(g);
  }
  IntPoly one{{0, Int(1)}};
  if (mins.empty()) return one;
  for (const auto& g : mins)
    if (exp_total(g) == 0) return {};
  bool coprime = true;
  for (size_t i = 0; i < mins.size() && coprime; ++i)
    for (size_t j = i + 1; j < mins.size() && coprime; ++j)
      for (size_t u = 0; u < mins[i].size(); ++u)
        if (mins[i][u] && mins[j][u]) {
          coprime = false;
          break;
        }
  if (coprime) {
    IntPoly r = one;
    for (const auto& g : mins) {
      IntPoly f{{0, Int(1)}};
      ipoly_add(f, deg(g), Int(-1));
      r = ipoly_mul(r, f);
    }
    return r;
  }
  Mono last = mins.back();
  mins.pop_back();
  IntPoly a = hilbert_numerator(mins, w);
  std::vector<Mono> colon;
  for (const auto& g : mins) {
    Mono q(g.size());
    for (size_t u = 0; u < g.size(); ++u) q[u] = std::max(0, g[u] - last[u]);
    colon.push_back(q);
  }
  IntPoly b = hilbert_numerator(colon, w);
  long dl = deg(last);
  for (const auto& [e, c] : b) ipoly_add(a, e + dl, -c);
  return a;
}

struct FreeResolution {
  std::vector<FreeModuleShape> shapes;     // F_0, F_1, ...
  std::vector<std::vector<MVec>> maps;     // maps[i]: columns of F_{i+1} -> F_i
};

// Minimal graded free resolution of coker(pres) over the polynomial-type ring of eng.
inline FreeResolution minimal_free_resolution(const GroebnerEngine& eng0, const FreeModuleShape& F0,
                                              const std::vector<MVec>& pres, int length) {
  FreeResolution res;
  res.shapes.push_back(F0);
  GroebnerEngine eng = eng0;
  eng.shift.clear();
  for (const auto& g : F0.gens) eng.shift.push_back(g.ideg);
  std::vector<MVec> cur = minimal_generators(eng, pres);
  for (int lvl = 0; lvl < length && !cur.empty(); ++lvl) {
    FreeModuleShape sh;
    for (const auto& v : cur) {
      const MKey* ld = eng.lead(v);
      const auto& src = res.shapes.back().gens[ld->first];
      GenShape g;
      g.hdeg = lvl + 1;
      g.ideg = eng.kdeg(*ld);
      g.color = src.color;
      if (!g.color.empty() && eng.A->ncolors() == int(g.color.size()))
        g.color = exp_add(src.color, eng.A->color(ld->second));
      sh.gens.push_back(g);
    }
    res.shapes.push_back(sh);
    res.maps.push_back(cur);
    GroebnerBasis gb = buchberger(eng, cur);
    std::vector<MVec> syz = generator_syzygies(gb, cur);
    GroebnerEngine next = eng;
    next.shift.clear();
    for (const auto& g : sh.gens) next.shift.push_back(g.ideg);
    eng = next;
    cur = minimal_generators(eng, syz);
  }
  return res;
}

// A commutative polynomial ring k[t_1..t_r] over Q(zeta_m) with the given weights.
inline Algebra commutative_ring(int m, int r, const std::string& prefix, std::vector<int> weights = {}) {
  std::vector<VarInfo> v;
  for (int i = 0; i < r; ++i) {
    int w = weights.empty() ? 1 : weights[i];
    v.push_back({prefix + std::to_string(i + 1), VarKind::Poly, 0, w, Exp{}, w});
  }
  return Algebra(m, v, std::vector<std::vector<Unit>>(r, std::vector<Unit>(r)));
}

inline nlohmann::json gb_to_json(const GroebnerBasis& gb) {
  nlohmann::json j;
  j["order"] = {{"kind", gb.eng.ord.kind == MonoOrder::DegRevLex ? "degrevlex" : "lex"}, {"pot", gb.eng.ord.pot}};
  nlohmann::json els = nlohmann::json::array();
  for (const auto& v : gb.elems) {
    std::map<int, Elem> comps;
    for (const auto& [k, c] : v) comps[k.first][k.second] = c;
    nlohmann::json row = nlohmann::json::object();
    for (const auto& [comp, e] : comps) row[std::to_string(comp)] = gb.eng.A->str(e);
    els.push_back(row);
  }
  j["elements"] = els;
  return j;
}

}  // namespace skewci
