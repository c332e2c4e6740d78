// Cohomology operator complexes S (x) X over S = Q[chi_1..chi_c], their bigraded homology with the
// chi-action, derived braided Hochschild cohomology, and Ext as a module over k[theta_i = chi_i^t].
#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "resolve.hpp"

namespace skewci {

inline Cyc zeta(const RingSpec& R, long e) { return Cyc::zeta_pow(R.m, e); }
inline Cyc sign_of(const RingSpec& R, long k) { return Cyc(R.m, Rat((k % 2 + 2) % 2 ? -1 : 1)); }

inline void add_block(Mat& A, int r0, int c0, const Mat& B, const Cyc& s) {
  for (int i = 0; i < B.rows; ++i)
    for (int j = 0; j < B.cols; ++j)
      if (!B.at(i, j).is_zero()) A.at(r0 + i, c0 + j) += s * B.at(i, j);
}

inline bool mat_is_zero(const Mat& A) {
  for (const auto& x : A.a)
    if (!x.is_zero()) return false;
  return true;
}

// A complex X of finite-dimensional color slices X_{j,g} with the operator pair lambda_i, lambda'_i.
class XModule {
 public:
  explicit XModule(const RingSpec& R) : R(R) {}
  virtual ~XModule() = default;
  const RingSpec& R;

  virtual int jmin() const = 0;
  virtual int jmax() const = 0;
  virtual int dim(int j, const Exp& g) = 0;
  virtual Mat d(int j, const Exp& g) = 0;                // X_{j,g} -> X_{j-1,g}
  virtual Mat lam(int i, int j, const Exp& g) = 0;       // lambda_i - lambda'_i: X_{j,g} -> X_{j+1,g+cf_i}
  virtual Mat xmul(int v, int j, const Exp& g) = 0;      // x_v: X_{j,g} -> X_{j,g+e_v}
  virtual std::vector<Exp> colors(long D) = 0;           // colors g with ideg(g) <= D and X_g != 0
  virtual std::optional<std::vector<Exp>> all_colors() { return std::nullopt; }
};

namespace detail {

using Adj = std::vector<std::vector<std::pair<int, Cyc>>>;

inline Adj reverse_adj(const ColMap& f, int n) {
  Adj r(n);
  for (int j = 0; j < int(f.cols.size()); ++j)
    for (const auto& [k, s] : f.cols[j]) r[k].push_back({j, s});
  return r;
}

inline std::vector<Exp> dedup_colors(const RingSpec& R, std::set<Exp> s) {
  std::vector<Exp> v(s.begin(), s.end());
  sort_colors(R, v);
  return v;
}

}  // namespace detail

// X = Hom_Q(F, N) for a finite Koszul resolution F and a presented R-module N.
// A map of color g and degree -p is stored by its values on the generators of F_p.
class HomModuleX : public XModule {
 public:
  HomModuleX(const RingSpec& R, const DGEModuleData& F, const ModulePresentation& N)
      : XModule(R), F_(F), Ns_(R, N) {}

  int jmin() const override { return -F_.length(); }
  int jmax() const override { return 0; }
  ModuleSlices& slices() { return Ns_; }

  int dim(int j, const Exp& g) override { return basis(j, g).total; }

  Mat d(int j, const Exp& g) override {
    const Basis& a = basis(j, g);
    const Basis& b = basis(j - 1, g);
    Mat M(R.m, b.total, a.total);
    Cyc sg = sign_of(R, -j + 1);
    for (const auto& [bb, ob] : b.off)
      for (const auto& [k, s] : F_.diff.cols[bb]) {
        auto it = a.off.find(k);
        if (it == a.off.end()) continue;
        Exp be = exp_sub(F_.gens[bb].color, F_.gens[k].color);
        add_block(M, ob, it->second, Ns_.mult(exp_add(F_.gens[k].color, g), be), sg * s * chi(R, g, be));
      }
    return M;
  }

  Mat lam(int i, int j, const Exp& g) override {
    const Basis& a = basis(j, g);
    const Basis& b = basis(j + 1, exp_add(g, R.cf[i]));
    Mat M(R.m, b.total, a.total);
    Cyc sg = sign_of(R, -j) * chi(R, R.cf[i], g);
    for (const auto& [bb, ob] : b.off)
      for (const auto& [k, s] : F_.eact[i].cols[bb]) {
        auto it = a.off.find(k);
        if (it == a.off.end()) continue;
        Exp be = exp_sub(exp_add(F_.gens[bb].color, R.cf[i]), F_.gens[k].color);
        add_block(M, ob, it->second, Ns_.mult(exp_add(F_.gens[k].color, g), be), sg * s * chi(R, g, be));
      }
    return M;
  }

  Mat xmul(int v, int j, const Exp& g) override {
    const Basis& a = basis(j, g);
    Exp ev = unit_exp(R.n, v);
    const Basis& b = basis(j, exp_add(g, ev));
    Mat M(R.m, b.total, a.total);
    for (const auto& [k, oa] : a.off) {
      auto it = b.off.find(k);
      if (it == b.off.end()) continue;
      add_block(M, it->second, oa, Ns_.mult(exp_add(F_.gens[k].color, g), ev), R.one());
    }
    return M;
  }

  std::vector<Exp> colors(long D) override {
    long maxb = 0;
    for (const auto& b : F_.gens) maxb = std::max(maxb, b.ideg);
    std::set<Exp> out;
    for (const auto& s : Ns_.colors_upto(D + maxb))
      for (const auto& b : F_.gens) {
        Exp g = exp_sub(s, b.color);
        if (R.ideg(g) <= D) out.insert(g);
      }
    return detail::dedup_colors(R, out);
  }

  std::optional<std::vector<Exp>> all_colors() override {
    if (!Ns_.finite_length()) return std::nullopt;
    return colors(Ns_.top_degree());
  }

 private:
  struct Basis {
    std::map<int, int> off;  // generator of F -> offset
    int total = 0;
  };
  const DGEModuleData& F_;
  ModuleSlices Ns_;
  std::map<std::pair<int, Exp>, Basis> cache_;

  const Basis& basis(int j, const Exp& g) {
    auto key = std::make_pair(j, g);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    Basis b;
    for (int k : F_.in_degree(-j)) {
      Exp s = exp_add(F_.gens[k].color, g);
      if (!exp_nonneg(s)) continue;
      int dm = Ns_.dim(s);
      if (!dm) continue;
      b.off[k] = b.total;
      b.total += dm;
    }
    return cache_.emplace(key, std::move(b)).first->second;
  }
};

// X = Hom_Q(P, G) for two finite Koszul resolutions; the second operator is the E-action on G.
class HomResX : public XModule {
 public:
  HomResX(const RingSpec& R, const DGEModuleData& P, const DGEModuleData& G) : XModule(R), P_(P), G_(G) {
    rdiff_ = detail::reverse_adj(P.diff, P.size());
    for (const auto& e : P.eact) react_.push_back(detail::reverse_adj(e, P.size()));
  }

  int jmin() const override { return -P_.length(); }
  int jmax() const override { return G_.length(); }
  int dim(int j, const Exp& g) override { return int(basis(j, g).items.size()); }

  Mat d(int j, const Exp& g) override {
    const Basis& a = basis(j, g);
    const Basis& t = basis(j - 1, g);
    Mat M(R.m, int(t.items.size()), int(a.items.size()));
    Cyc sg = -sign_of(R, j);
    for (int c = 0; c < int(a.items.size()); ++c) {
      const auto& [b, h, mu] = a.items[c];
      for (const auto& [h2, s] : G_.diff.cols[h]) {
        Exp nu = exp_sub(G_.gens[h].color, G_.gens[h2].color);
        M.at(t.index.at({b, h2}), c) += s * c_pair(R, mu, nu);
      }
      for (const auto& [b2, s] : rdiff_[b]) {
        Exp be = exp_sub(P_.gens[b2].color, P_.gens[b].color);
        M.at(t.index.at({b2, h}), c) += sg * s * chi(R, g, be) * c_pair(R, be, mu);
      }
    }
    return M;
  }

  Mat lam(int i, int j, const Exp& g) override {
    const Basis& a = basis(j, g);
    const Basis& t = basis(j + 1, exp_add(g, R.cf[i]));
    Mat M(R.m, int(t.items.size()), int(a.items.size()));
    Cyc sg = sign_of(R, j) * chi(R, R.cf[i], g);
    for (int c = 0; c < int(a.items.size()); ++c) {
      const auto& [b, h, mu] = a.items[c];
      for (const auto& [b2, s] : react_[i][b]) {
        Exp be = exp_sub(exp_add(P_.gens[b2].color, R.cf[i]), P_.gens[b].color);
        M.at(t.index.at({b2, h}), c) += sg * s * chi(R, g, be) * c_pair(R, be, mu);
      }
      for (const auto& [h2, s] : G_.eact[i].cols[h]) {
        Exp nu = exp_sub(exp_add(G_.gens[h].color, R.cf[i]), G_.gens[h2].color);
        M.at(t.index.at({b, h2}), c) -= chi(R, R.cf[i], mu) * s * c_pair(R, mu, nu);
      }
    }
    return M;
  }

  Mat xmul(int v, int j, const Exp& g) override {
    Exp ev = unit_exp(R.n, v);
    const Basis& a = basis(j, g);
    const Basis& t = basis(j, exp_add(g, ev));
    Mat M(R.m, int(t.items.size()), int(a.items.size()));
    for (int c = 0; c < int(a.items.size()); ++c) {
      const auto& [b, h, mu] = a.items[c];
      M.at(t.index.at({b, h}), c) = c_pair(R, ev, mu);
    }
    return M;
  }

  std::vector<Exp> colors(long D) override {
    long maxb = 0;
    for (const auto& b : P_.gens) maxb = std::max(maxb, b.ideg);
    std::set<Exp> out;
    for (const auto& h : G_.gens)
      for (const auto& mu : monomials_upto(R, D + maxb - h.ideg))
        for (const auto& b : P_.gens) {
          Exp g = exp_sub(exp_add(h.color, mu), b.color);
          if (R.ideg(g) <= D) out.insert(g);
        }
    return detail::dedup_colors(R, out);
  }

 private:
  struct Basis {
    std::vector<std::tuple<int, int, Exp>> items;  // (generator of P, generator of G, monomial)
    std::map<std::pair<int, int>, int> index;
  };
  const DGEModuleData& P_;
  const DGEModuleData& G_;
  detail::Adj rdiff_;
  std::vector<detail::Adj> react_;
  std::map<std::pair<int, Exp>, Basis> cache_;

  const Basis& basis(int j, const Exp& g) {
    auto key = std::make_pair(j, g);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    Basis B;
    for (int b = 0; b < P_.size(); ++b)
      for (int h = 0; h < G_.size(); ++h) {
        if (G_.gens[h].hdeg - P_.gens[b].hdeg != j) continue;
        Exp mu = exp_sub(exp_add(P_.gens[b].color, g), G_.gens[h].color);
        if (!exp_nonneg(mu)) continue;
        B.index[{b, h}] = int(B.items.size());
        B.items.push_back({b, h, mu});
      }
    return cache_.emplace(key, std::move(B)).first->second;
  }
};

// X = E with lambda_i x = (-1)^|x| chi(f_i, x) x e_i and lambda'_i x = e_i x.
class SelfEX : public XModule {
 public:
  explicit SelfEX(const RingSpec& R) : XModule(R), E_(koszul_algebra(R)) {}

  int jmin() const override { return 0; }
  int jmax() const override { return R.c(); }
  int dim(int j, const Exp& g) override { return int(basis(j, g).mons.size()); }

  Mat d(int j, const Exp& g) override {
    const Basis& a = basis(j, g);
    return to_mat(a, basis(j - 1, g), [&](const Mono& mo) { return E_.diff_mono(mo); });
  }

  Mat lam(int i, int j, const Exp& g) override {
    const Basis& a = basis(j, g);
    Elem ei = E_.var(R.n + i);
    Cyc sg = sign_of(R, j) * chi(R, R.cf[i], g);
    return to_mat(a, basis(j + 1, exp_add(g, R.cf[i])), [&](const Mono& mo) {
      Elem x{{mo, R.one()}};
      Elem r = elem_scale(E_.mul(x, ei), sg);
      elem_axpy(r, Cyc(R.m, Rat(-1)), E_.mul(ei, x));
      return r;
    });
  }

  Mat xmul(int v, int j, const Exp& g) override {
    const Basis& a = basis(j, g);
    Elem xv = E_.var(v);
    return to_mat(a, basis(j, exp_add(g, unit_exp(R.n, v))), [&](const Mono& mo) { return E_.mul(xv, Elem{{mo, R.one()}}); });
  }

  std::vector<Exp> colors(long D) override {
    std::set<Exp> out;
    for (const auto& a : monomials_upto(R, D))
      for (unsigned S = 0; S < (1u << R.c()); ++S) {
        Exp g = a;
        for (int i = 0; i < R.c(); ++i)
          if (S >> i & 1) g = exp_add(g, R.cf[i]);
        if (R.ideg(g) <= D) out.insert(g);
      }
    return detail::dedup_colors(R, out);
  }

 private:
  struct Basis {
    std::vector<Mono> mons;
    std::map<Mono, int> index;
  };
  Algebra E_;
  std::map<std::pair<int, Exp>, Basis> cache_;

  const Basis& basis(int j, const Exp& g) {
    auto key = std::make_pair(j, g);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    Basis B;
    for (unsigned S = 0; S < (1u << R.c()); ++S) {
      if (__builtin_popcount(S) != j) continue;
      Exp a = g;
      for (int i = 0; i < R.c(); ++i)
        if (S >> i & 1) a = exp_sub(a, R.cf[i]);
      if (!exp_nonneg(a)) continue;
      Mono mo = detail::e_mono(R, a, S);
      B.index[mo] = int(B.mons.size());
      B.mons.push_back(mo);
    }
    return cache_.emplace(key, std::move(B)).first->second;
  }

  Mat to_mat(const Basis& a, const Basis& t, const std::function<Elem(const Mono&)>& f) {
    Mat M(R.m, int(t.mons.size()), int(a.mons.size()));
    for (int c = 0; c < int(a.mons.size()); ++c)
      for (const auto& [mo, s] : f(a.mons[c])) M.at(t.index.at(mo), c) += s;
    return M;
  }
};

// S (x) X with differential 1 (x) d + sum_i chi_i (x) (lambda_i - lambda'_i). The element chi^H (x) x with
// x in X_{j,g} has cohomological degree 2|H| - j and color g - sum_i h_i f_i.
class OperatorComplex {
 public:
  struct Block {
    Exp H;
    int j;
    Exp g;
    int off;
    int dim;
  };

  explicit OperatorComplex(XModule& X) : X_(X), R_(X.R) {
    for (const auto& f : R_.cf) chicol_.push_back(exp_scale(f, -1));
  }

  XModule& x_module() { return X_; }
  const std::vector<Exp>& chi_colors() const { return chicol_; }

  const std::vector<Block>& blocks(int i, const Exp& tau) {
    auto key = std::make_pair(i, tau);
    auto it = blocks_.find(key);
    if (it != blocks_.end()) return it->second;
    std::vector<Block> out;
    int off = 0;
    int c = R_.c();
    int hlo = std::max(0, ceil_half(i + X_.jmin())), hhi = floor_half(i + X_.jmax());
    for (int h = hlo; h <= hhi; ++h) {
      int j = 2 * h - i;
      for (const auto& H : compositions(h, c)) {
        Exp g = tau;
        for (int k = 0; k < c; ++k) g = exp_sub(g, exp_scale(chicol_[k], H[k]));
        int dm = X_.dim(j, g);
        if (!dm) continue;
        out.push_back({H, j, g, off, dm});
        off += dm;
      }
    }
    return blocks_.emplace(key, std::move(out)).first->second;
  }

  int dim(int i, const Exp& tau) {
    const auto& b = blocks(i, tau);
    return b.empty() ? 0 : b.back().off + b.back().dim;
  }

  // chi_k chi^H = (scalar) chi^{H+e_k}
  Cyc chi_left(int k, const Exp& H) const {
    long e = 0;
    for (int l = 0; l < k; ++l) e += long(R_.chi_exp(chicol_[k], chicol_[l])) * H[l];
    return zeta(R_, e);
  }
  Exp chi_color(const Exp& H) const {
    Exp s(R_.n, 0);
    for (int k = 0; k < R_.c(); ++k) s = exp_add(s, exp_scale(chicol_[k], H[k]));
    return s;
  }

  // C_{i,tau} -> C_{i+1,tau}
  Mat diff(int i, const Exp& tau) {
    const auto& src = blocks(i, tau);
    const auto& tgt = blocks(i + 1, tau);
    Mat M(R_.m, dim(i + 1, tau), dim(i, tau));
    auto where = index(tgt);
    for (const auto& b : src) {
      auto it = where.find(b.H);
      if (it != where.end()) add_block(M, tgt[it->second].off, b.off, X_.d(b.j, b.g), R_.one());
      Exp ch = chi_color(b.H);
      for (int k = 0; k < R_.c(); ++k) {
        Exp H2 = b.H;
        ++H2[k];
        auto jt = where.find(H2);
        if (jt == where.end()) continue;
        add_block(M, tgt[jt->second].off, b.off, X_.lam(k, b.j, b.g), chi(R_, R_.cf[k], ch) * chi_left(k, b.H));
      }
    }
    return M;
  }

  // left multiplication by chi_k: C_{i,tau} -> C_{i+2,tau+chicol_k}
  Mat chi_mult(int k, int i, const Exp& tau) {
    Exp t2 = exp_add(tau, chicol_[k]);
    const auto& src = blocks(i, tau);
    const auto& tgt = blocks(i + 2, t2);
    Mat M(R_.m, dim(i + 2, t2), dim(i, tau));
    auto where = index(tgt);
    for (const auto& b : src) {
      Exp H2 = b.H;
      ++H2[k];
      auto it = where.find(H2);
      if (it == where.end()) continue;
      Cyc s = chi_left(k, b.H);
      for (int r = 0; r < b.dim; ++r) M.at(tgt[it->second].off + r, b.off + r) = s;
    }
    return M;
  }

  // x_v acting through X: C_{i,tau} -> C_{i,tau+e_v}
  Mat xmul(int v, int i, const Exp& tau) {
    Exp t2 = exp_add(tau, unit_exp(R_.n, v));
    const auto& src = blocks(i, tau);
    const auto& tgt = blocks(i, t2);
    Mat M(R_.m, dim(i, t2), dim(i, tau));
    auto where = index(tgt);
    for (const auto& b : src) {
      auto it = where.find(b.H);
      if (it == where.end()) continue;
      add_block(M, tgt[it->second].off, b.off, X_.xmul(v, b.j, b.g), chi(R_, unit_exp(R_.n, v), chi_color(b.H)));
    }
    return M;
  }

  // Every color tau with ideg(tau) <= D carrying a nonzero slice in cohomological degrees [cmin, cmax].
  std::vector<Exp> window(int cmin, int cmax, long D) {
    std::set<Exp> out;
    int hmax = std::max(0, floor_half(cmax + X_.jmax()));
    for (const auto& g : X_.colors(D))
      for (int h = 0; h <= hmax; ++h)
        for (const auto& H : compositions(h, R_.c())) {
          Exp tau = exp_add(g, chi_color(H));
          if (R_.ideg(tau) > D) continue;
          for (int i = cmin; i <= cmax; ++i)
            if (dim(i, tau)) {
              out.insert(tau);
              break;
            }
        }
    return detail::dedup_colors(R_, out);
  }

  static std::vector<Exp> compositions(int h, int c) {
    std::vector<Exp> out;
    Exp cur(c, 0);
    std::function<void(int, int)> rec = [&](int k, int left) {
      if (k == c - 1 || c == 0) {
        if (c == 0) {
          if (left == 0) out.push_back(cur);
          return;
        }
        cur[k] = left;
        out.push_back(cur);
        cur[k] = 0;
        return;
      }
      for (int a = left; a >= 0; --a) {
        cur[k] = a;
        rec(k + 1, left - a);
      }
      cur[k] = 0;
    };
    rec(0, h);
    return out;
  }

 private:
  XModule& X_;
  const RingSpec& R_;
  std::vector<Exp> chicol_;
  std::map<std::pair<int, Exp>, std::vector<Block>> blocks_;

  static int floor_half(int a) { return a >= 0 ? a / 2 : -((-a + 1) / 2); }
  static int ceil_half(int a) { return -floor_half(-a); }
  static std::map<Exp, int> index(const std::vector<Block>& bs) {
    std::map<Exp, int> w;
    for (size_t i = 0; i < bs.size(); ++i) w[bs[i].H] = int(i);
    return w;
  }
};

// d^2 = 0, and chi_k, x_v commute with d, on every slice of the window.
inline std::string check_operator_complex(OperatorComplex& C, int cmin, int cmax, long D) {
  const RingSpec& R = C.x_module().R;
  for (const auto& tau : C.window(cmin, cmax, D))
    for (int i = cmin - 1; i <= cmax; ++i) {
      if (!C.dim(i, tau)) continue;
      Mat d0 = C.diff(i, tau);
      if (!mat_is_zero(mat_mul(C.diff(i + 1, tau), d0)))
        return "d^2 != 0 in degree " + std::to_string(i) + " color " + exp_str(tau);
      for (int k = 0; k < R.c(); ++k) {
        Exp t2 = exp_add(tau, C.chi_colors()[k]);
        Mat a = mat_mul(C.diff(i + 2, t2), C.chi_mult(k, i, tau));
        Mat b = mat_mul(C.chi_mult(k, i + 1, tau), d0);
        for (size_t q = 0; q < a.a.size(); ++q)
          if (a.a[q] != b.a[q]) return "chi" + std::to_string(k + 1) + " is not a chain map";
      }
      for (int v = 0; v < R.n; ++v) {
        Exp t2 = exp_add(tau, unit_exp(R.n, v));
        Mat a = mat_mul(C.diff(i, t2), C.xmul(v, i, tau));
        Mat b = mat_mul(C.xmul(v, i + 1, tau), d0);
        for (size_t q = 0; q < a.a.size(); ++q)
          if (a.a[q] != b.a[q]) return "x" + std::to_string(v + 1) + " is not a chain map";
      }
    }
  return "";
}

// Homology of one slice with representatives chosen in column-pivot order.
struct HomologySlice {
  int dim = 0;
  Mat frame;  // boundary basis followed by representatives
  int nb = 0;
  std::vector<Vec> reps;

  Vec coords(const Vec& cycle) const {
    Vec out = zero_vec(frame.m, dim);
    if (!dim) return out;
    auto x = solve(frame, cycle);
    if (!x) throw std::logic_error("vector is not a cycle");
    for (int r = 0; r < dim; ++r) out[r] = (*x)[nb + r];
    return out;
  }
};

inline HomologySlice homology_slice(OperatorComplex& C, int i, const Exp& tau) {
  HomologySlice h;
  int N = C.dim(i, tau);
  int m = C.x_module().R.m;
  h.frame = Mat(m, N, 0);
  if (!N) return h;
  Span sp(m, N);
  std::vector<Vec> bvecs;
  Mat d0 = C.diff(i - 1, tau);
  for (int j = 0; j < d0.cols; ++j) {
    Vec v = d0.col(j);
    if (sp.add(v)) bvecs.push_back(v);
  }
  h.nb = int(bvecs.size());
  for (auto& z : kernel(C.diff(i, tau)))
    if (sp.add(z)) h.reps.push_back(std::move(z));
  h.dim = int(h.reps.size());
  h.frame = Mat(m, N, h.nb + h.dim);
  for (int j = 0; j < h.nb; ++j)
    for (int r = 0; r < N; ++r) h.frame.at(r, j) = bvecs[j][r];
  for (int j = 0; j < h.dim; ++j)
    for (int r = 0; r < N; ++r) h.frame.at(r, h.nb + j) = h.reps[j][r];
  return h;
}

struct ExtTable {
  int cmin = 0, cmax = 0;
  long Dmax = 0;
  std::map<std::pair<int, Exp>, int> by_color;
  std::map<std::pair<int, long>, long> dims;       // (cohomological, internal) -> dim
  std::map<std::tuple<int, int, Exp>, Mat> actions;  // (k, i, tau): H_{i,tau} -> H_{i+2,tau+chicol_k}

  int at(int i, const Exp& tau) const {
    auto it = by_color.find({i, tau});
    return it == by_color.end() ? 0 : it->second;
  }
  long total(int i) const {
    long s = 0;
    for (const auto& [k, d] : dims)
      if (k.first == i) s += d;
    return s;
  }
  bool vanishes_in(int lo, int hi) const {
    for (const auto& [k, d] : dims)
      if (k.first >= lo && k.first <= hi && d) return false;
    return true;
  }
  nlohmann::json to_json() const {
    nlohmann::json d = nlohmann::json::array();
    for (const auto& [k, v] : dims)
      if (v) d.push_back({k.first, k.second, v});
    nlohmann::json bc = nlohmann::json::array();
    for (const auto& [k, v] : by_color)
      if (v) bc.push_back({k.first, k.second, v});
    nlohmann::json acts = nlohmann::json::array();
    for (const auto& [k, M] : actions) {
      if (!M.rows || !M.cols) continue;
      nlohmann::json rows = nlohmann::json::array();
      for (int r = 0; r < M.rows; ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < M.cols; ++c) row.push_back(M.at(r, c).str());
        rows.push_back(row);
      }
      acts.push_back({{"op", "chi" + std::to_string(std::get<0>(k) + 1)},
                      {"degree", std::get<1>(k)},
                      {"color", std::get<2>(k)},
                      {"matrix", rows}});
    }
    return {{"window", {{"cmin", cmin}, {"cmax", cmax}, {"Dmax", Dmax}}}, {"dims", d}, {"by_color", bc}, {"actions", acts}};
  }
};

// Bigraded homology over the window, with the chi-action on chosen homology bases.
inline ExtTable homology_bigraded(OperatorComplex& C, int cmin, int cmax, long D, bool with_actions = true) {
  const RingSpec& R = C.x_module().R;
  ExtTable T;
  T.cmin = cmin;
  T.cmax = cmax;
  T.Dmax = D;
  std::map<std::pair<int, Exp>, HomologySlice> hs;
  for (const auto& tau : C.window(cmin, cmax, D))
    for (int i = cmin; i <= cmax; ++i) {
      if (!C.dim(i, tau)) continue;
      HomologySlice h = homology_slice(C, i, tau);
      if (!h.dim) continue;
      T.by_color[{i, tau}] = h.dim;
      T.dims[{i, R.ideg(tau)}] += h.dim;
      if (with_actions) hs.emplace(std::make_pair(i, tau), std::move(h));
    }
  if (!with_actions) return T;
  for (const auto& [key, h] : hs) {
    auto [i, tau] = key;
    for (int k = 0; k < R.c(); ++k) {
      if (i + 2 > cmax) continue;
      Exp t2 = exp_add(tau, C.chi_colors()[k]);
      auto it = hs.find({i + 2, t2});
      int d2 = it == hs.end() ? 0 : it->second.dim;
      Mat A(R.m, d2, h.dim);
      if (d2) {
        Mat chim = C.chi_mult(k, i, tau);
        for (int c = 0; c < h.dim; ++c) {
          Vec v = it->second.coords(chim.apply(h.reps[c]));
          for (int r = 0; r < d2; ++r) A.at(r, c) = v[r];
        }
      }
      T.actions.emplace(std::make_tuple(k, i, tau), std::move(A));
    }
  }
  return T;
}

// dim of (H / sum_v x_v H) in each slice: Ext tensored down to k over R.
inline std::map<std::pair<int, Exp>, int> homology_mod_max(OperatorComplex& C, int cmin, int cmax, long D) {
  const RingSpec& R = C.x_module().R;
  std::map<std::pair<int, Exp>, int> out;
  for (const auto& tau : C.window(cmin, cmax, D))
    for (int i = cmin; i <= cmax; ++i) {
      int N = C.dim(i, tau);
      if (!N) continue;
      auto Z = kernel(C.diff(i, tau));
      if (Z.empty()) continue;
      Span sp(R.m, N);
      Mat d0 = C.diff(i - 1, tau);
      for (int j = 0; j < d0.cols; ++j) sp.add(d0.col(j));
      for (int v = 0; v < R.n; ++v) {
        Exp prev = exp_sub(tau, unit_exp(R.n, v));
        if (!C.dim(i, prev)) continue;
        Mat xm = C.xmul(v, i, prev);
        for (const auto& z : kernel(C.diff(i, prev))) sp.add(xm.apply(z));
      }
      int before = sp.dim();
      int extra = 0;
      for (const auto& z : Z)
        if (sp.add(z)) ++extra;
      (void)before;
      if (extra) out[{i, tau}] = extra;
    }
  return out;
}

// Derived braided Hochschild cohomology H(S (x) E) against the free module R[chi_1..chi_c].
struct HHReport {
  ExtTable table;
  bool match = true;
  bool corrupted_model = false;
  int first_degree = 0;
  Exp first_color;
  int got = 0, expected = 0;
  std::map<std::pair<int, long>, long> model;
  nlohmann::json to_json() const {
    nlohmann::json md = nlohmann::json::array();
    for (const auto& [k, v] : model)
      if (v) md.push_back({k.first, k.second, v});
    nlohmann::json j{{"match", match}, {"corrupted_model", corrupted_model}, {"homology", table.to_json()}, {"model", md}};
    if (!match) j["first_mismatch"] = {{"degree", first_degree}, {"color", first_color}, {"got", got}, {"expected", expected}};
    return j;
  }
};

inline HHReport braided_hh(const RingSpec& R, int cmax, long D, bool corrupt = false) {
  SelfEX X(R);
  OperatorComplex C(X);
  HHReport rep;
  rep.corrupted_model = corrupt;
  int cmin = -R.c();
  rep.table = homology_bigraded(C, cmin, cmax, D, false);
  Algebra Rq = quotient_ring(R);
  std::vector<Exp> mcol;
  for (const auto& f : R.cf) mcol.push_back(corrupt ? f : exp_scale(f, -1));
  auto model_dim = [&](int i, const Exp& tau) {
    if (i < 0 || i % 2) return 0;
    int n = 0;
    for (const auto& H : OperatorComplex::compositions(i / 2, R.c())) {
      Exp g = tau;
      for (int k = 0; k < R.c(); ++k) g = exp_sub(g, exp_scale(mcol[k], H[k]));
      if (exp_nonneg(g) && !Rq.killed(g)) ++n;
    }
    return n;
  };
  std::set<Exp> taus;
  for (const auto& t : C.window(cmin, cmax, D)) taus.insert(t);
  for (const auto& a : monomials_upto(R, D))
    for (int h = 0; 2 * h <= cmax; ++h)
      for (const auto& H : OperatorComplex::compositions(h, R.c())) {
        Exp t = a;
        for (int k = 0; k < R.c(); ++k) t = exp_add(t, exp_scale(mcol[k], H[k]));
        if (R.ideg(t) <= D) taus.insert(t);
      }
  auto ordered = detail::dedup_colors(R, taus);
  for (int i = cmin; i <= cmax; ++i)
    for (const auto& tau : ordered) {
      int e = model_dim(i, tau);
      if (e) rep.model[{i, R.ideg(tau)}] += e;
      int g = rep.table.at(i, tau);
      if (g != e && rep.match) {
        rep.match = false;
        rep.first_degree = i;
        rep.first_color = tau;
        rep.got = g;
        rep.expected = e;
      }
    }
  return rep;
}

// A finitely presented graded module over the commutative ring k[theta_1..theta_c], deg theta = 2t.
struct ThetaModule {
  int m = 1, c = 0, t = 1;
  std::vector<long> shifts;  // cohomological degree of each generator
  std::vector<Exp> colors;
  std::vector<MVec> relations;

  int rank() const { return int(shifts.size()); }
  Algebra ring() const { return commutative_ring(m, c, "θ", std::vector<int>(c, 2 * t)); }

  // Is the point with theta_l = 1 for l in T and 0 otherwise in the support?
  bool in_support(unsigned T) const {
    int g = rank();
    if (!g) return false;
    Mat A(m, g, int(relations.size()));
    for (size_t q = 0; q < relations.size(); ++q)
      for (const auto& [k, s] : relations[q]) {
        bool ok = true;
        for (int l = 0; l < c; ++l)
          if (k.second[l] && !(T >> l & 1)) ok = false;
        if (ok) A.at(k.first, int(q)) += s;
      }
    return skewci::rank(A) < g;
  }

  // Hilbert series numerator N(t) in cohomological degree: HS = N(t) / (1 - t^{2t})^c.
  IntPoly hilbert_numerator_coh() const {
    Algebra T = ring();
    GroebnerEngine eng(T, MonoOrder{}, shifts);
    GroebnerBasis gb = buchberger(eng, relations);
    IntPoly out;
    for (int l = 0; l < rank(); ++l) {
      std::vector<Mono> lds;
      for (const auto& k : gb.leads)
        if (k.first == l) lds.push_back(k.second);
      IntPoly p = hilbert_numerator(lds, std::vector<long>(c, 2 * t));
      for (const auto& [e, v] : p) ipoly_add(out, e + shifts[l], v);
    }
    return out;
  }

  nlohmann::json to_json() const {
    Algebra T = ring();
    nlohmann::json rels = nlohmann::json::array();
    for (const auto& v : relations) {
      std::map<int, Elem> comps;
      for (const auto& [k, s] : v) comps[k.first][k.second] = s;
      nlohmann::json row = nlohmann::json::object();
      for (const auto& [l, e] : comps) row[std::to_string(l)] = T.str(e);
      rels.push_back(row);
    }
    return {{"t", t}, {"generator_degrees", shifts}, {"generator_colors", colors}, {"relations", rels}};
  }
};

// Total homology of S (x) X as a module over k[theta_i = chi_i^t], for finite-dimensional X. Since the
// left k[theta]-action commutes with the differential, the complex is finite free on chi^B (x) x, B in [0,t)^c.
inline ThetaModule ext_over_theta(XModule& X, int t) {
  const RingSpec& R = X.R;
  auto cols_opt = X.all_colors();
  if (!cols_opt) throw std::invalid_argument("ext_over_theta needs a finite-dimensional complex");
  int c = R.c();
  OperatorComplex C(X);
  const auto& chicol = C.chi_colors();
  // components chi^B (x) x
  struct Comp {
    Exp B;
    int j;
    Exp g;
  };
  std::vector<Comp> comps;
  std::map<std::tuple<Exp, int, Exp>, int> off;
  std::vector<Exp> Bs;
  {
    Exp B(c, 0);
    std::function<void(int)> rec = [&](int k) {
      if (k == c) {
        Bs.push_back(B);
        return;
      }
      for (int b = 0; b < t; ++b) {
        B[k] = b;
        rec(k + 1);
      }
      B[k] = 0;
    };
    rec(0);
  }
  std::vector<long> coh;
  std::vector<Exp> ccol;
  for (const auto& B : Bs)
    for (int j = X.jmin(); j <= X.jmax(); ++j)
      for (const auto& g : *cols_opt) {
        int dm = X.dim(j, g);
        if (!dm) continue;
        off[{B, j, g}] = int(comps.size());
        Exp col = exp_add(g, C.chi_color(B));
        for (int r = 0; r < dm; ++r) {
          comps.push_back({B, j, g});
          coh.push_back(2L * exp_total(B) - j);
          ccol.push_back(col);
        }
      }
  int N = int(comps.size());
  Mono one(c, 0);
  std::vector<MVec> cols(N);
  std::set<std::tuple<Exp, int, Exp>> done;
  for (int p = 0; p < N; ++p) {
    const auto& [B, j, g] = comps[p];
    if (!done.insert({B, j, g}).second) continue;
    int base = off.at({B, j, g});
    int dm = X.dim(j, g);
    auto place = [&](const Exp& B2, int j2, const Exp& g2, const Mat& M, const Cyc& s, const Mono& mo) {
      auto it = off.find({B2, j2, g2});
      if (it == off.end()) return;
      for (int r = 0; r < M.rows; ++r)
        for (int q = 0; q < M.cols; ++q)
          if (!M.at(r, q).is_zero()) mvec_add(cols[base + q], {it->second + r, mo}, s * M.at(r, q));
    };
    place(B, j - 1, g, X.d(j, g), R.one(), one);
    Exp chc = C.chi_color(B);
    for (int k = 0; k < c; ++k) {
      Exp g2 = exp_add(g, R.cf[k]);
      if (!X.dim(j + 1, g2)) continue;
      Cyc s = chi(R, R.cf[k], chc) * C.chi_left(k, B);
      Exp B2 = B;
      Mono mo = one;
      if (B[k] + 1 < t) {
        ++B2[k];
      } else {
        B2[k] = 0;
        mo[k] = 1;
        long e = 0;
        for (int l = 0; l < k; ++l) e += long(R.chi_exp(chicol[l], chicol[k])) * B[l] * t;
        s = s * zeta(R, e);
      }
      place(B2, j + 1, g2, X.lam(k, j, g), s, mo);
    }
    (void)dm;
  }
  Algebra T = commutative_ring(R.m, c, "θ", std::vector<int>(c, 2 * t));
  GroebnerEngine engC(T, MonoOrder{}, coh);
  std::vector<MVec> nz;
  std::vector<long> nz_deg;
  // kernel: syzygies of the columns, read as vectors over the components
  GroebnerEngine engD(T, MonoOrder{}, coh);
  GroebnerBasis gbD = buchberger(engD, cols);
  std::vector<MVec> Z = generator_syzygies(gbD, cols);
  Z = minimal_generators(engC, Z);
  std::vector<MVec> Bim;
  for (const auto& v : cols)
    if (!v.empty()) Bim.push_back(v);
  std::vector<MVec> kept;
  {
    std::vector<MVec> acc = Bim;
    for (const auto& z : Z) {
      GroebnerBasis gb = buchberger(engC, acc);
      if (gb.is_zero(z)) continue;
      kept.push_back(z);
      acc.push_back(z);
    }
  }
  ThetaModule H;
  H.m = R.m;
  H.c = c;
  H.t = t;
  for (const auto& z : kept) {
    const auto& [k, s] = *z.begin();
    H.shifts.push_back(engC.kdeg(k));
    Exp col = ccol[k.first];
    for (int l = 0; l < c; ++l) col = exp_add(col, exp_scale(chicol[l], t * k.second[l]));
    H.colors.push_back(col);
  }
  std::vector<MVec> all = kept;
  all.insert(all.end(), Bim.begin(), Bim.end());
  GroebnerBasis gbA = buchberger(engC, all);
  std::vector<MVec> rels;
  for (const auto& s : generator_syzygies(gbA, all)) {
    MVec r;
    for (const auto& [k, v] : s)
      if (k.first < int(kept.size())) r.emplace(k, v);
    if (!r.empty()) rels.push_back(r);
  }
  GroebnerEngine engH(T, MonoOrder{}, H.shifts);
  H.relations = minimal_generators(engH, rels);
  return H;
}

}  // namespace skewci
