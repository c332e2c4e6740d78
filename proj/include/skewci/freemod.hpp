// Finely graded free modules over Q and R, homogeneous maps between them, and presented R-modules.
//
// Everything is graded by colors in Z^n, so a homogeneous element of a free module in color s is
// a scalar vector over the generators g with x^(s - col g) a valid monomial; the monomial is implicit.
#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "linalg.hpp"
#include "qgrobner.hpp"

namespace skewci {

using Col = std::map<int, Cyc>;  // target generator -> scalar

inline void col_add(Col& c, int k, const Cyc& s) {
  if (s.is_zero()) return;
  auto it = c.find(k);
  if (it == c.end()) {
    c.emplace(k, s);
    return;
  }
  it->second += s;
  if (it->second.is_zero()) c.erase(it);
}

// A homogeneous map of color `color` between free modules. Column j is phi(g_j) = sum_k s_k x^(col g_j +
// color - col g_k) g_k, and phi(x^a g) = chi(color, a) x^a phi(g).
struct ColMap {
  Exp color;
  std::vector<Col> cols;
};

inline bool mono_valid(const RingSpec& R, const Exp& a, bool quotient) {
  if (!exp_nonneg(a)) return false;
  if (quotient)
    for (const auto& f : R.cf)
      if (exp_divides(f, a)) return false;
  return true;
}

// chi(d, a) * C(a, b): the scalar of phi(x^a g) against x^b in phi(g), for a map of color d.
inline Cyc twist(const RingSpec& R, const Exp& d, const Exp& a, const Exp& b) {
  return R.unit(R.chi_u(d, a).mul(R.cpair_u(a, b), R.m));
}

inline ColMap zero_map(int nsrc, Exp color) { return ColMap{std::move(color), std::vector<Col>(nsrc)}; }

// phi o psi
inline ColMap compose(const RingSpec& R, const ColMap& phi, const ColMap& psi, const std::vector<GenShape>& src,
                      const std::vector<GenShape>& mid, const std::vector<GenShape>& tgt, bool quotient) {
  ColMap out = zero_map(int(src.size()), exp_add(phi.color, psi.color));
  for (size_t j = 0; j < src.size(); ++j)
    for (const auto& [k, t] : psi.cols[j]) {
      Exp be = exp_sub(exp_add(src[j].color, psi.color), mid[k].color);
      for (const auto& [l, s] : phi.cols[k]) {
        Exp ga = exp_sub(exp_add(mid[k].color, phi.color), tgt[l].color);
        if (quotient && !mono_valid(R, exp_add(be, ga), true)) continue;
        col_add(out.cols[j], l, t * s * twist(R, phi.color, be, ga));
      }
    }
  return out;
}

inline void map_axpy(ColMap& y, const Cyc& a, const ColMap& x) {
  for (size_t j = 0; j < x.cols.size(); ++j)
    for (const auto& [k, s] : x.cols[j]) col_add(y.cols[j], k, a * s);
}

inline bool map_is_zero(const ColMap& x) {
  for (const auto& c : x.cols)
    if (!c.empty()) return false;
  return true;
}

// Generators of a given homological degree whose monomial in color s is valid.
struct Slice {
  std::vector<int> gens;
  std::map<int, int> pos;
  int size() const { return int(gens.size()); }
};

inline Slice make_slice(const RingSpec& R, const std::vector<GenShape>& G, int hdeg, const Exp& s, bool quotient) {
  Slice sl;
  for (size_t j = 0; j < G.size(); ++j) {
    if (hdeg != INT32_MIN && G[j].hdeg != hdeg) continue;
    if (!mono_valid(R, exp_sub(s, G[j].color), quotient)) continue;
    sl.pos[int(j)] = sl.size();
    sl.gens.push_back(int(j));
  }
  return sl;
}

// Matrix of phi from the slice in color s to the slice in color s + phi.color.
inline Mat slice_matrix(const RingSpec& R, const ColMap& phi, const std::vector<GenShape>& src,
                        const std::vector<GenShape>& tgt, const Slice& a, const Slice& b, const Exp& s) {
  Mat M(R.m, b.size(), a.size());
  for (int p = 0; p < a.size(); ++p) {
    int j = a.gens[p];
    Exp al = exp_sub(s, src[j].color);
    for (const auto& [k, c] : phi.cols[j]) {
      auto it = b.pos.find(k);
      if (it == b.pos.end()) continue;
      Exp be = exp_sub(exp_add(src[j].color, phi.color), tgt[k].color);
      M.at(it->second, p) += c * twist(R, phi.color, al, be);
    }
  }
  return M;
}

// Left multiplication by x^b on a free-module slice: color s -> s + b.
inline Mat mono_mult_matrix(const RingSpec& R, const std::vector<GenShape>& G, const Slice& a, const Slice& b,
                            const Exp& s, const Exp& be) {
  Mat M(R.m, b.size(), a.size());
  for (int p = 0; p < a.size(); ++p) {
    int j = a.gens[p];
    auto it = b.pos.find(j);
    if (it == b.pos.end()) continue;
    M.at(it->second, p) = R.unit(R.cpair_u(be, exp_sub(s, G[j].color)));
  }
  return M;
}

// A Col as a module vector for the Groebner engine over Q.
inline MVec col_to_mvec(const Col& c, const Exp& color, const std::vector<GenShape>& tgt, const std::map<int, int>& local) {
  MVec v;
  for (const auto& [k, s] : c) v[{local.at(k), exp_sub(color, tgt[k].color)}] = s;
  return v;
}

// All exponent vectors a >= 0 with sum d_i a_i <= D, in a deterministic order.
inline std::vector<Exp> monomials_upto(const RingSpec& R, long D) {
  std::vector<Exp> out;
  if (D < 0) return out;
  Exp cur(R.n, 0);
  std::function<void(int, long)> rec = [&](int i, long deg) {
    if (i == R.n) {
      out.push_back(cur);
      return;
    }
    for (int e = 0; deg + long(e) * R.d[i] <= D; ++e) {
      cur[i] = e;
      rec(i + 1, deg + long(e) * R.d[i]);
    }
    cur[i] = 0;
  };
  rec(0, 0);
  return out;
}

// Sorted by internal degree, then lexicographically.
inline void sort_colors(const RingSpec& R, std::vector<Exp>& cs) {
  std::sort(cs.begin(), cs.end(), [&](const Exp& a, const Exp& b) {
    long da = R.ideg(a), db = R.ideg(b);
    if (da != db) return da < db;
    return a < b;
  });
  cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
}

// A finitely presented color R-module: coker(R^rels -> R^gens).
struct ModulePresentation {
  std::string name;
  std::vector<Exp> gens;       // generator colors
  std::vector<Exp> rel_color;  // color of each relation
  std::vector<Col> rels;       // entries with monomial x^(rel_color - gens[j])

  int rank() const { return int(gens.size()); }
  std::vector<GenShape> shape(const RingSpec& R) const {
    std::vector<GenShape> s;
    for (const auto& g : gens) s.push_back({0, R.ideg(g), g});
    return s;
  }
  long max_ideg(const RingSpec& R) const {
    long d = 0;
    for (const auto& g : gens) d = std::max(d, R.ideg(g));
    for (const auto& g : rel_color) d = std::max(d, R.ideg(g));
    return d;
  }
};

// Adds a relation given as a sparse map (generator -> element of Q), reducing modulo R.
inline void add_relation(const RingSpec& R, ModulePresentation& M, const std::map<int, Elem>& entries) {
  Col c;
  std::optional<Exp> color;
  for (const auto& [j, e] : entries)
    for (const auto& [mo, s] : e) {
      Exp col = exp_add(M.gens[j], mo);
      if (color && *color != col) throw std::invalid_argument("relation is not color-homogeneous");
      color = col;
      if (!mono_valid(R, mo, true)) continue;
      col_add(c, j, s);
    }
  if (!color || c.empty()) return;
  M.rel_color.push_back(*color);
  M.rels.push_back(c);
}

inline ModulePresentation free_module(const RingSpec& R, std::vector<Exp> colors, std::string name = "R") {
  ModulePresentation M;
  M.name = std::move(name);
  M.gens = std::move(colors);
  return M;
}
inline ModulePresentation ring_module(const RingSpec& R) { return free_module(R, {Exp(R.n, 0)}, "R"); }

// R/(p_1, ..., p_s) for homogeneous elements p_i of Q.
inline ModulePresentation cyclic_module(const RingSpec& R, const std::vector<Elem>& ps, std::string name = "") {
  ModulePresentation M = free_module(R, {Exp(R.n, 0)}, std::move(name));
  for (const auto& p : ps) {
    for (const auto& [mo, s] : p)
      if (mo != p.begin()->first) throw std::invalid_argument("cyclic module generator must be a single term");
    add_relation(R, M, {{0, p}});
  }
  return M;
}

inline ModulePresentation residue_field(const RingSpec& R) {
  Algebra Q = skew_poly_ring(R);
  std::vector<Elem> xs;
  for (int i = 0; i < R.n; ++i) xs.push_back(Q.var(i));
  return cyclic_module(R, xs, "k");
}

inline ModulePresentation direct_sum(const ModulePresentation& A, const ModulePresentation& B) {
  ModulePresentation M = A;
  M.name = A.name + "+" + B.name;
  int off = A.rank();
  for (const auto& g : B.gens) M.gens.push_back(g);
  for (size_t r = 0; r < B.rels.size(); ++r) {
    Col c;
    for (const auto& [j, s] : B.rels[r]) c[j + off] = s;
    M.rels.push_back(c);
    M.rel_color.push_back(B.rel_color[r]);
  }
  return M;
}

inline ModulePresentation shifted(const ModulePresentation& A, const Exp& s) {
  ModulePresentation M = A;
  for (auto& g : M.gens) g = exp_add(g, s);
  for (auto& g : M.rel_color) g = exp_add(g, s);
  return M;
}

// Module documents: "k", "R", {"quotient": [...]}, {"sum": [doc, doc, ...]},
// {"generators": [colors] | count, "relations": [[entry per generator], ...]}, optional "shift": color.
inline ModulePresentation module_from_json(const RingSpec& R, const nlohmann::json& j, const std::string& name = "") {
  Algebra Q = skew_poly_ring(R);
  ModulePresentation M;
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "k")
      M = residue_field(R);
    else if (s == "R")
      M = ring_module(R);
    else
      throw std::invalid_argument("unknown module shorthand '" + s + "'");
  } else if (j.contains("quotient")) {
    std::vector<Elem> ps;
    for (const auto& s : j.at("quotient")) ps.push_back(parse_poly(Q, s.get<std::string>()));
    M = cyclic_module(R, ps);
  } else if (j.contains("sum")) {
    bool first = true;
    for (const auto& part : j.at("sum")) {
      ModulePresentation P = module_from_json(R, part);
      M = first ? P : direct_sum(M, P);
      first = false;
    }
    if (first) throw std::invalid_argument("empty direct sum");
  } else {
    const auto& g = j.at("generators");
    if (g.is_number_integer()) {
      M.gens.assign(g.get<int>(), Exp(R.n, 0));
    } else {
      for (const auto& c : g) {
        Exp e = c.get<Exp>();
        if (int(e.size()) != R.n) throw std::invalid_argument("generator color must have length n");
        M.gens.push_back(e);
      }
    }
    if (j.contains("relations"))
      for (const auto& rel : j.at("relations")) {
        if (int(rel.size()) != M.rank()) throw std::invalid_argument("relation must have one entry per generator");
        std::map<int, Elem> ent;
        for (int k = 0; k < M.rank(); ++k) {
          Elem e = parse_poly(Q, rel[k].get<std::string>());
          if (!e.empty()) ent[k] = e;
        }
        add_relation(R, M, ent);
      }
  }
  if (j.is_object() && j.contains("shift")) M = shifted(M, j.at("shift").get<Exp>());
  if (!name.empty()) M.name = name;
  return M;
}

inline nlohmann::json module_to_json(const RingSpec& R, const ModulePresentation& M) {
  Algebra Q = skew_poly_ring(R);
  nlohmann::json rels = nlohmann::json::array();
  for (size_t r = 0; r < M.rels.size(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < M.rank(); ++k) {
      auto it = M.rels[r].find(k);
      row.push_back(it == M.rels[r].end() ? "0" : Q.str(Elem{{exp_sub(M.rel_color[r], M.gens[k]), it->second}}));
    }
    rels.push_back(row);
  }
  return {{"generators", M.gens}, {"relations", rels}};
}

// Graded pieces N_s = (sum_j R_{s - col g_j}) / (relations) of a presented module, computed on demand.
class ModuleSlices {
 public:
  struct Data {
    Slice v;                 // ambient free slice over R
    std::unique_ptr<Span> U;  // relations in this color
    std::vector<int> basis;  // non-pivot positions of U: a basis of N_s
    std::map<int, int> bpos;
  };

  ModuleSlices(const RingSpec& R, const ModulePresentation& M) : R_(R), M_(M), shape_(M.shape(R)) {}

  const RingSpec& ring() const { return R_; }
  const ModulePresentation& module() const { return M_; }
  const std::vector<GenShape>& shape() const { return shape_; }

  const Data& at(const Exp& s) {
    auto it = cache_.find(s);
    if (it != cache_.end()) return it->second;
    Data d;
    d.v = make_slice(R_, shape_, INT32_MIN, s, true);
    d.U = std::make_unique<Span>(R_.m, d.v.size());
    for (size_t r = 0; r < M_.rels.size(); ++r) {
      Exp be = exp_sub(s, M_.rel_color[r]);
      if (!exp_nonneg(be)) continue;
      Vec v = zero_vec(R_.m, d.v.size());
      for (const auto& [j, c] : M_.rels[r]) {
        auto p = d.v.pos.find(j);
        if (p == d.v.pos.end()) continue;
        v[p->second] += c * R_.unit(R_.cpair_u(be, exp_sub(M_.rel_color[r], M_.gens[j])));
      }
      d.U->add(v);
    }
    std::vector<bool> piv(d.v.size(), false);
    for (int p : d.U->pivots()) piv[p] = true;
    for (int p = 0; p < d.v.size(); ++p)
      if (!piv[p]) {
        d.bpos[p] = int(d.basis.size());
        d.basis.push_back(p);
      }
    return cache_.emplace(s, std::move(d)).first->second;
  }

  int dim(const Exp& s) { return int(at(s).basis.size()); }

  // Coordinates in N_s of an ambient vector.
  Vec project(const Exp& s, const Vec& v) {
    const Data& d = at(s);
    Vec r = d.U->reduce(v);
    Vec out = zero_vec(R_.m, int(d.basis.size()));
    for (size_t b = 0; b < d.basis.size(); ++b) out[b] = r[d.basis[b]];
    return out;
  }

  // Matrix of x^b: N_s -> N_{s+b}.
  const Mat& mult(const Exp& s, const Exp& be) {
    auto key = std::make_pair(s, be);
    auto it = mult_.find(key);
    if (it != mult_.end()) return it->second;
    const Data& a = at(s);
    Exp t = exp_add(s, be);
    const Data& b = at(t);
    Mat M(R_.m, int(b.basis.size()), int(a.basis.size()));
    for (size_t q = 0; q < a.basis.size(); ++q) {
      int j = a.v.gens[a.basis[q]];
      Vec v = zero_vec(R_.m, b.v.size());
      auto p = b.v.pos.find(j);
      if (p != b.v.pos.end()) v[p->second] = R_.unit(R_.cpair_u(be, exp_sub(s, M_.gens[j])));
      Vec w = project(t, v);
      for (size_t r = 0; r < w.size(); ++r) M.at(int(r), int(q)) = w[r];
    }
    return mult_.emplace(key, std::move(M)).first->second;
  }

  // Image of generator j (times its monomial) in N_s.
  Vec gen_image(const Exp& s, int j, const Cyc& c) {
    const Data& d = at(s);
    Vec v = zero_vec(R_.m, d.v.size());
    auto p = d.v.pos.find(j);
    if (p != d.v.pos.end()) v[p->second] = c;
    return project(s, v);
  }

  // Finite length test through the leading terms of a Groebner basis of the lifted relations over Q.
  bool finite_length() {
    if (finite_) return *finite_;
    Algebra Q = skew_poly_ring(R_);
    GroebnerEngine eng(Q);
    std::vector<MVec> gens;
    for (size_t r = 0; r < M_.rels.size(); ++r) {
      MVec v;
      for (const auto& [j, c] : M_.rels[r]) v[{j, exp_sub(M_.rel_color[r], M_.gens[j])}] = c;
      gens.push_back(v);
    }
    for (int j = 0; j < M_.rank(); ++j)
      for (int i = 0; i < R_.c(); ++i) gens.push_back(MVec{{{j, R_.cf[i]}, R_.fcoef[i]}});
    GroebnerBasis gb = buchberger(eng, gens);
    bool fin = true;
    top_ = 0;
    for (int j = 0; j < M_.rank() && fin; ++j) {
      long deg = R_.ideg(M_.gens[j]);
      bool dead = false;
      for (const auto& ld : gb.leads)
        if (ld.first == j && exp_total(ld.second) == 0) dead = true;
      if (dead) continue;
      for (int i = 0; i < R_.n; ++i) {
        int best = -1;
        for (const auto& ld : gb.leads) {
          if (ld.first != j) continue;
          bool pure = true;
          for (int u = 0; u < R_.n; ++u)
            if (u != i && ld.second[u]) pure = false;
          if (pure && (best < 0 || ld.second[i] < best)) best = ld.second[i];
        }
        if (best < 0) {
          fin = false;
          break;
        }
        deg += long(best - 1) * R_.d[i];
      }
      top_ = std::max(top_, deg);
    }
    finite_ = fin;
    return fin;
  }
  // For finite length modules, an upper bound on the internal degrees of nonzero pieces.
  long top_degree() {
    finite_length();
    return top_;
  }

  // Colors with N_s != 0 and internal degree <= D.
  std::vector<Exp> colors_upto(long D) {
    std::vector<Exp> out;
    for (const auto& g : M_.gens)
      for (const auto& a : monomials_upto(R_, D - R_.ideg(g))) {
        Exp s = exp_add(g, a);
        if (dim(s) > 0) out.push_back(s);
      }
    sort_colors(R_, out);
    return out;
  }

 private:
  const RingSpec& R_;
  ModulePresentation M_;
  std::vector<GenShape> shape_;
  std::map<Exp, Data> cache_;
  std::map<std::pair<Exp, Exp>, Mat> mult_;
  std::optional<bool> finite_;
  long top_ = 0;
};

}  // namespace skewci
