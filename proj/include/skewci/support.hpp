// Support varieties over k[theta_1..theta_c], complexity, Poincare series, perfection, and the vanishing
// checkers (Auslander-Reiten type bound, hypersurface dichotomy).
#pragma once

#include <memory>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "operators.hpp"

namespace skewci {

// Minimal t with e | t^2, where e is the order of the group generated by the commutation scalars.
inline int compute_t(const RingSpec& R) {
  int g = R.m;
  for (const auto& row : R.a)
    for (int x : row) g = std::gcd(g, int(mod_floor(x, R.m)));
  int e = R.m / g;
  for (int t = 1;; ++t)
    if ((long(t) * t) % e == 0) return t;
}

inline std::string ipoly_str(const IntPoly& p, const std::string& var = "t") {
  if (p.empty()) return "0";
  std::string s;
  for (const auto& [e, c] : p) {
    Int a = c;
    bool neg = a < 0;
    if (neg) a = -a;
    if (s.empty())
      s += neg ? "-" : "";
    else
      s += neg ? " - " : " + ";
    bool unit = a == 1;
    if (!unit || e == 0) s += a.get_str();
    if (e > 0) {
      if (!unit) s += "*";
      s += var;
      if (e > 1) s += "^" + std::to_string(e);
    }
  }
  return s;
}

inline IntPoly ipoly_from(std::initializer_list<std::pair<long, long>> terms) {
  IntPoly p;
  for (const auto& [e, c] : terms) ipoly_add(p, e, Int(c));
  return p;
}

inline IntPoly ipoly_pow(const IntPoly& a, int k) {
  IntPoly r{{0, Int(1)}};
  for (int i = 0; i < k; ++i) r = ipoly_mul(r, a);
  return r;
}

// Exact division by a monic divisor with constant term 1 (low-degree first); nullopt if not exact.
inline std::optional<IntPoly> ipoly_divide(IntPoly a, const IntPoly& b) {
  if (b.empty() || b.begin()->first != 0 || b.begin()->second != 1) throw std::invalid_argument("divisor must have constant term 1");
  IntPoly q;
  long db = b.rbegin()->first;
  while (!a.empty()) {
    auto [e, c] = *a.begin();
    if (a.rbegin()->first - e < db) return std::nullopt;
    ipoly_add(q, e, c);
    for (const auto& [eb, cb] : b) ipoly_add(a, e + eb, -c * cb);
  }
  return q;
}

inline Int ipoly_at_one(const IntPoly& p) {
  Int s = 0;
  for (const auto& [e, c] : p) s += c;
  return s;
}

// p(t)/(1-t^2)^c' with p(1) != 0, expanded up to degree W.
inline std::vector<Int> rational_expand(const IntPoly& p, int cprime, int W) {
  std::vector<Int> a(W + 1, Int(0));
  for (const auto& [e, c] : p)
    if (e <= W) a[e] += c;
  for (int k = 0; k < cprime; ++k)
    for (int i = 2; i <= W; ++i) a[i] += a[i - 2];
  return a;
}

struct RationalFit {
  bool ok = false;
  IntPoly p;
  int cprime = 0;
  int window = 0;      // last coefficient used
  int validation = 0;  // trailing coefficients that had to vanish
  std::string message;
  nlohmann::json to_json() const {
    return {{"ok", ok}, {"numerator", ipoly_str(p)}, {"pole_order", cprime}, {"window", window}, {"validation", validation},
            {"message", message}};
  }
};

// Smallest c' <= cmax_pole with (1-t^2)^c' A(t) a polynomial of degree <= W - validation and p(1) != 0.
inline RationalFit rational_fit(const std::vector<long>& a, int cmax_pole, int validation) {
  RationalFit f;
  int W = int(a.size()) - 1;
  f.window = W;
  f.validation = validation;
  std::vector<Int> q(a.begin(), a.end());
  for (int cp = 0; cp <= cmax_pole; ++cp) {
    if (cp > 0)
      for (int i = W; i >= 2; --i) q[i] -= q[i - 2];
    int L = -1;
    for (int i = 0; i <= W; ++i)
      if (q[i] != 0) L = i;
    if (W - L < validation) continue;
    IntPoly p;
    for (int i = 0; i <= L; ++i) ipoly_add(p, i, q[i]);
    if (!p.empty() && ipoly_at_one(p) == 0) {
      f.message = "numerator vanishes at t=1";
      return f;
    }
    f.ok = true;
    f.p = p;
    f.cprime = cp;
    return f;
  }
  f.message = "no rational form with pole order <= " + std::to_string(cmax_pole) + " fits " + std::to_string(W + 1) +
              " coefficients with " + std::to_string(validation) + " validation terms; enlarge the window";
  return f;
}

struct SupportReport {
  int c = 0, t = 1, m = 1;
  std::set<unsigned> points;  // T such that the point theta_l = [l in T] lies in the support
  std::vector<std::string> ideal;
  int dimension = 0;
  bool empty = true;
  std::string semantics = "fiber";
  nlohmann::json certificate = nlohmann::json::object();

  nlohmann::json to_json() const {
    return {{"ideal", ideal}, {"dimension", dimension}, {"empty", empty}, {"t", t}, {"semantics", semantics},
            {"certificate", certificate}};
  }
  std::string text() const {
    std::string s = "(";
    for (size_t i = 0; i < ideal.size(); ++i) s += (i ? ", " : "") + ideal[i];
    if (ideal.empty()) s += "0";
    return s + ")";
  }
};

// Radical monomial ideal of a union of coordinate subspaces.
inline SupportReport support_from_points(int m, int c, int t, std::set<unsigned> V) {
  SupportReport S;
  S.m = m;
  S.c = c;
  S.t = t;
  // the set of coordinate subspaces contained in the support is closed under subsets
  std::set<unsigned> down;
  for (unsigned T : V)
    for (unsigned U = T;; U = (U - 1) & T) {
      down.insert(U);
      if (!U) break;
    }
  S.points = down;
  S.dimension = 0;
  for (unsigned T : down) S.dimension = std::max(S.dimension, __builtin_popcount(T));
  S.empty = S.dimension == 0;
  if (S.empty) {
    S.ideal = {"1"};
    return S;
  }
  Algebra A = commutative_ring(m, c, "θ", std::vector<int>(c, 2 * t));
  std::vector<unsigned> gens;
  std::vector<unsigned> order;
  for (unsigned U = 1; U < (1u << c); ++U) order.push_back(U);
  std::stable_sort(order.begin(), order.end(), [](unsigned a, unsigned b) { return __builtin_popcount(a) < __builtin_popcount(b); });
  for (unsigned U : order) {
    bool covered = false;
    for (unsigned T : down)
      if ((U & T) == U) covered = true;
    if (covered) continue;
    bool redundant = false;
    for (unsigned G : gens)
      if ((G & U) == G) redundant = true;
    if (redundant) continue;
    gens.push_back(U);
    Mono mo(c, 0);
    for (int l = 0; l < c; ++l)
      if (U >> l & 1) mo[l] = 1;
    S.ideal.push_back(A.str(Elem{{mo, Cyc(m, Rat(1))}}));
  }
  return S;
}

inline std::set<unsigned> theta_support_points(const ThetaModule& H) {
  std::set<unsigned> V;
  for (unsigned T = 0; T < (1u << H.c); ++T)
    if (H.in_support(T)) V.insert(T);
  return V;
}

struct ComplexityReport {
  bool ok = false;
  int cx = -1;
  std::string method;
  nlohmann::json certificate = nlohmann::json::object();
  nlohmann::json to_json() const { return {{"ok", ok}, {"complexity", cx}, {"method", method}, {"certificate", certificate}}; }
};

struct PoincareReport {
  bool ok = false;
  IntPoly p;
  int cprime = 0;
  std::string method;
  nlohmann::json certificate = nlohmann::json::object();
  std::string text() const {
    std::string num = "(" + ipoly_str(p) + ")";
    if (cprime == 0) return num;
    return num + "/(1 - t^2)" + (cprime > 1 ? "^" + std::to_string(cprime) : "");
  }
  nlohmann::json to_json() const {
    return {{"ok", ok}, {"numerator", ipoly_str(p)}, {"pole_order", cprime}, {"series", text()}, {"method", method},
            {"certificate", certificate}};
  }
};

struct PerfectReport {
  bool perfect = false;
  bool betti_agrees = false;
  std::vector<long> betti;
  nlohmann::json to_json() const { return {{"perfect", perfect}, {"betti_agrees", betti_agrees}, {"betti_totals", betti}}; }
};

struct ArcReport {
  std::string verdict;  // "pass", "hypothesis not satisfied", "disagreement"
  int r = 0, window = 0;
  int pd_betti = -1;    // -1: no finite value within the window
  int pd_ext = -1;
  std::vector<int> nonvanishing;  // degrees i in (r, window] with Ext^i(M, M+R) != 0
  nlohmann::json to_json() const {
    return {{"verdict", verdict}, {"r", r}, {"window", window}, {"pd_betti", pd_betti}, {"pd_ext", pd_ext},
            {"nonvanishing_degrees", nonvanishing}};
  }
};

struct DichotomyReport {
  bool vanishes = false;
  bool perfect_M = false, perfect_N = false;
  bool ok = true;
  int from = 0, to = 0;
  nlohmann::json to_json() const {
    return {{"tail_vanishes", vanishes}, {"perfect_M", perfect_M}, {"perfect_N", perfect_N}, {"ok", ok}, {"window", {from, to}}};
  }
};

struct Window {
  int cmax = 10;
  long Dmax = 8;
};

inline bool is_residue_field(const RingSpec& R, const ModulePresentation& M) {
  ModuleSlices S(R, M);
  if (!S.finite_length()) return false;
  long total = 0;
  for (const auto& s : S.colors_upto(S.top_degree())) total += S.dim(s);
  return total == 1 && S.dim(Exp(R.n, 0)) == 1;
}

// Queries about pairs of modules over one ring, sharing finite Koszul resolutions.
class SupportEngine {
 public:
  SupportEngine(const RingSpec& R, Window w = {}) : R_(R), w_(w), t_(compute_t(R)) {}

  std::function<KoszulResolution(const ModulePresentation&)> resolver;

  const RingSpec& ring() const { return R_; }
  int t() const { return t_; }
  const Window& window() const { return w_; }

  const DGEModuleData& resolution(const ModulePresentation& M) {
    std::string key = module_to_json(R_, M).dump();
    auto it = res_.find(key);
    if (it != res_.end()) return it->second->P;
    auto K = std::make_unique<KoszulResolution>(resolver ? resolver(M) : finite_koszul_resolution(R_, M));
    if (auto e = check_dge(R_, K->P); !e.empty()) throw std::runtime_error("resolution is not strict: " + e);
    return res_.emplace(key, std::move(K)).first->second->P;
  }

  bool finite(const ModulePresentation& M) { return ModuleSlices(R_, M).finite_length(); }

  ExtTable ext(const ModulePresentation& M, const ModulePresentation& N, int cmin, int cmax, long D, bool actions = false) {
    HomModuleX X(R_, resolution(M), N);
    OperatorComplex C(X);
    return homology_bigraded(C, cmin, cmax, D, actions);
  }

  // total dims of Ext^i(M,N) (x)_R k for i = 0..cmax, colors of internal degree <= D
  std::vector<long> ext_mod_max(const ModulePresentation& M, const ModulePresentation& N, int cmax, long D) {
    HomModuleX X(R_, resolution(M), N);
    OperatorComplex C(X);
    std::vector<long> a(cmax + 1, 0);
    for (const auto& [k, d] : homology_mod_max(C, 0, cmax, D)) a[k.first] += d;
    return a;
  }

  ThetaModule theta_module(const ModulePresentation& M, const ModulePresentation& N) {
    HomModuleX X(R_, resolution(M), N);
    return ext_over_theta(X, t_);
  }

  SupportReport support_k(const ModulePresentation& M) {
    auto key = module_to_json(R_, M).dump();
    auto it = supp_k_.find(key);
    if (it != supp_k_.end()) return it->second;
    ThetaModule H = theta_module(M, residue_field(R_));
    SupportReport S = support_from_points(R_.m, R_.c(), t_, theta_support_points(H));
    S.certificate = {{"method", "fitting-ideal radical of Ext(M,k) over k[theta]"}, {"presentation", H.to_json()}};
    supp_k_.emplace(key, S);
    return S;
  }

  // semantics: "fiber" computes V(M,k) n V(N,k); "full" computes the support of Ext(M,N) itself, exactly when
  // one side has finite length and otherwise as a windowed annihilator estimate.
  SupportReport support(const ModulePresentation& M, const ModulePresentation& N, const std::string& semantics = "fiber") {
    if (semantics != "fiber" && semantics != "full") throw std::invalid_argument("semantics must be fiber or full");
    if (semantics == "fiber" || is_residue_field(R_, N) || is_residue_field(R_, M)) {
      if (is_residue_field(R_, N)) return support_k(M);
      if (is_residue_field(R_, M)) return support_k(N);
      SupportReport a = support_k(M), b = support_k(N);
      std::set<unsigned> V;
      for (unsigned T : a.points)
        if (b.points.count(T)) V.insert(T);
      SupportReport S = support_from_points(R_.m, R_.c(), t_, V);
      S.certificate = {{"method", "intersection of V(M,k) and V(N,k)"}, {"V(M,k)", a.ideal}, {"V(N,k)", b.ideal}};
      return S;
    }
    SupportReport S;
    if (finite(N) || finite(M)) {
      ThetaModule H = finite(N) ? theta_module(M, N) : theta_module(N, M);
      S = support_from_points(R_.m, R_.c(), t_, theta_support_points(H));
      S.certificate = {{"method", finite(N) ? "direct support of Ext(M,N)" : "direct support of Ext(N,M)"},
                       {"presentation", H.to_json()}};
    } else {
      S = annihilator_estimate(M, N);
    }
    S.semantics = "truncated-full";
    return S;
  }

  ComplexityReport complexity(const ModulePresentation& M, const ModulePresentation& N) {
    ComplexityReport r;
    if (is_residue_field(R_, N) || is_residue_field(R_, M)) {
      const ModulePresentation& X = is_residue_field(R_, N) ? M : N;
      SupportReport S = support_k(X);
      r.ok = true;
      r.cx = S.dimension;
      r.method = "support-dimension";
      r.certificate = {{"support", S.ideal}, {"t", t_}};
      return r;
    }
    auto a = ext_mod_max(M, N, w_.cmax, w_.Dmax);
    RationalFit f = rational_fit(a, R_.c(), 2 * R_.c());
    r.method = "rational-fit";
    r.certificate = {{"fit", f.to_json()}, {"coefficients", a}, {"Dmax", w_.Dmax},
                     {"fiber_dimension", support(M, N, "fiber").dimension}};
    r.ok = f.ok;
    if (!f.ok) return r;
    r.cx = f.cprime;
    return r;
  }

  PoincareReport poincare(const ModulePresentation& M, const ModulePresentation& N) {
    PoincareReport P;
    int c = R_.c();
    if (is_residue_field(R_, N)) {
      ThetaModule H = theta_module(M, N);
      IntPoly num = H.hilbert_numerator_coh();
      IntPoly phi;
      for (int a = 0; a < t_; ++a) ipoly_add(phi, 2 * a, Int(1));
      auto q = ipoly_divide(num, ipoly_pow(phi, c));
      if (!q) {
        P.method = "theta-hilbert";
        P.certificate = {{"error", "numerator not divisible by the cyclotomic factor"}};
        return P;
      }
      IntPoly p = *q;
      int cp = c;
      IntPoly omt2 = ipoly_from({{0, 1}, {2, -1}});
      while (cp > 0 && !p.empty()) {
        auto d = ipoly_divide(p, omt2);
        if (!d) break;
        p = *d;
        --cp;
      }
      P.p = p;
      P.cprime = cp;
      P.method = "theta-hilbert";
      P.ok = !p.empty() && ipoly_at_one(p) != 0;
      // expansion against directly computed Ext dimensions
      int W = w_.cmax;
      auto exp = rational_expand(p, cp, W);
      ExtTable T = ext(M, N, 0, W, std::max(w_.Dmax, long(0)), false);
      bool agree = true;
      std::vector<long> direct;
      for (int i = 0; i <= W; ++i) {
        direct.push_back(T.total(i));
        if (Int(T.total(i)) != exp[i]) agree = false;
      }
      P.certificate = {{"validated_through", W}, {"direct", direct}, {"agrees", agree}, {"t", t_}};
      P.ok = P.ok && agree;
      return P;
    }
    auto a = ext_mod_max(M, N, w_.cmax, w_.Dmax);
    RationalFit f = rational_fit(a, c, 2 * c);
    P.method = "rational-fit";
    P.ok = f.ok;
    P.p = f.p;
    P.cprime = f.cprime;
    P.certificate = {{"fit", f.to_json()}, {"coefficients", a}, {"Dmax", w_.Dmax}};
    return P;
  }

  std::vector<long> betti_totals(const ModulePresentation& M, int imax) {
    int band = 1;
    for (int x : R_.d) band = std::max(band, x);
    for (int x : R_.df) band = std::max(band, x);
    return minimal_R_resolution(R_, M, imax, M.max_ideg(R_) + long(imax + 1) * band).totals();
  }

  PerfectReport is_perfect(const ModulePresentation& M) {
    PerfectReport P;
    P.perfect = support_k(M).empty;
    int lo = R_.n - R_.c() + 1, hi = R_.n + 2;
    P.betti = betti_totals(M, hi);
    bool tail_zero = true;
    for (int i = lo; i <= hi; ++i)
      if (i < int(P.betti.size()) && P.betti[i]) tail_zero = false;
    P.betti_agrees = tail_zero == P.perfect;
    return P;
  }

  ArcReport arc_check(const ModulePresentation& M, int r, int window) {
    if (window <= r) throw std::invalid_argument("window must exceed r");
    ArcReport A;
    A.r = r;
    A.window = window;
    ModulePresentation Rm = ring_module(R_);
    ExtTable em = ext(M, M, 0, window, w_.Dmax);
    ExtTable er = ext(M, Rm, 0, window, w_.Dmax);
    for (int i = r + 1; i <= window; ++i)
      if (em.total(i) || er.total(i)) A.nonvanishing.push_back(i);
    for (int i = 0; i <= window; ++i)
      if (er.total(i)) A.pd_ext = i;
    auto b = betti_totals(M, window + 1);
    bool finite_pd = b.size() <= size_t(window + 1) || b[window + 1] == 0;
    for (int i = 0; i < int(b.size()); ++i)
      if (b[i]) A.pd_betti = i;
    if (!finite_pd) A.pd_betti = -1;
    if (!A.nonvanishing.empty()) {
      A.verdict = "hypothesis not satisfied";
      return A;
    }
    A.verdict = (A.pd_betti >= 0 && A.pd_betti <= r && A.pd_betti == A.pd_ext) ? "pass" : "disagreement";
    return A;
  }

  DichotomyReport dichotomy(const ModulePresentation& M, const ModulePresentation& N) {
    DichotomyReport D;
    D.from = R_.n + 1;
    D.to = w_.cmax;
    D.vanishes = ext(M, N, D.from, D.to, w_.Dmax).vanishes_in(D.from, D.to);
    D.perfect_M = is_perfect(M).perfect;
    D.perfect_N = is_perfect(N).perfect;
    D.ok = !D.vanishes || D.perfect_M || D.perfect_N;
    return D;
  }

 private:
  const RingSpec& R_;
  Window w_;
  int t_;
  std::map<std::string, std::unique_ptr<KoszulResolution>> res_;
  std::map<std::string, SupportReport> supp_k_;

  // Monomials theta_U^p annihilating every Ext class whose image stays inside the cohomological window.
  SupportReport annihilator_estimate(const ModulePresentation& M, const ModulePresentation& N) {
    int c = R_.c();
    HomModuleX X(R_, resolution(M), N);
    OperatorComplex C(X);
    ExtTable T = homology_bigraded(C, 0, w_.cmax, w_.Dmax, true);
    std::vector<std::pair<unsigned, int>> ann;
    for (unsigned U = 1; U < (1u << c); ++U) {
      int sz = __builtin_popcount(U);
      for (int p = 1; 2 * t_ * p * sz <= w_.cmax; ++p) {
        bool kills = true;
        for (const auto& [key, dm] : T.by_color) {
          auto [i, tau] = key;
          if (!dm || i + 2 * t_ * p * sz > w_.cmax) continue;
          Mat cur(R_.m, dm, dm);
          for (int q = 0; q < dm; ++q) cur.at(q, q) = R_.one();
          int ii = i;
          Exp tt = tau;
          for (int k = 0; k < c && kills; ++k) {
            if (!(U >> k & 1)) continue;
            for (int s = 0; s < t_ * p; ++s) {
              auto it = T.actions.find({k, ii, tt});
              if (it == T.actions.end() || it->second.rows == 0) {
                cur = Mat(R_.m, 0, dm);
                break;
              }
              cur = mat_mul(it->second, cur);
              ii += 2;
              tt = exp_add(tt, C.chi_colors()[k]);
            }
            if (cur.rows == 0) break;
          }
          if (!mat_is_zero(cur)) kills = false;
          if (!kills) break;
        }
        if (kills) {
          ann.push_back({U, p});
          break;
        }
      }
    }
    std::set<unsigned> V;
    for (unsigned Tm = 0; Tm < (1u << c); ++Tm) {
      bool in = true;
      for (const auto& [U, p] : ann)
        if ((U & Tm) == U) in = false;
      if (in) V.insert(Tm);
    }
    SupportReport S = support_from_points(R_.m, c, t_, V);
    nlohmann::json an = nlohmann::json::array();
    for (const auto& [U, p] : ann) an.push_back({{"support_mask", U}, {"power", p}});
    S.certificate = {{"method", "annihilator estimate"}, {"cmax", w_.cmax}, {"Dmax", w_.Dmax}, {"annihilating", an}};
    return S;
  }
};

}  // namespace skewci
