// Colors, the bicharacter, reordering scalars, and graded color-commutative monomial algebras.
#pragma once

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "scalars.hpp"

namespace skewci {

using Exp = std::vector<int>;  // exponent vectors and colors in Z^n
using Mono = std::vector<int>;
using Elem = std::map<Mono, Cyc>;

inline Exp exp_add(const Exp& a, const Exp& b) {
  Exp r(a);
  for (size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}
inline Exp exp_sub(const Exp& a, const Exp& b) {
  Exp r(a);
  for (size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}
inline Exp exp_scale(const Exp& a, int k) {
  Exp r(a);
  for (auto& x : r) x *= k;
  return r;
}
inline bool exp_nonneg(const Exp& a) {
  for (int x : a)
    if (x < 0) return false;
  return true;
}
inline bool exp_divides(const Exp& a, const Exp& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}
inline int exp_total(const Exp& a) { return std::accumulate(a.begin(), a.end(), 0); }
inline Exp unit_exp(int n, int i) {
  Exp e(n, 0);
  e[i] = 1;
  return e;
}

inline std::string exp_str(const Exp& a) {
  std::string s = "(";
  for (size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + std::to_string(a[i]);
  return s + ")";
}

struct ParseError : std::runtime_error {
  int line, col;
  ParseError(const std::string& msg, int l, int c)
      : std::runtime_error(msg + " at line " + std::to_string(l) + ", column " + std::to_string(c)),
        line(l), col(c) {}
};

struct RingSpec {
  int n = 0;
  int m = 1;
  std::vector<std::vector<int>> a;  // q_ij = zeta^a_ij
  std::vector<int> d;               // internal degrees of x_i
  std::vector<std::string> relation_src;
  std::vector<Elem> f;
  // filled by finalize() once every f_i is a single term
  std::vector<Exp> cf;
  std::vector<int> df;
  std::vector<Cyc> fcoef;

  int c() const { return int(f.size()); }

  int chi_exp(const Exp& al, const Exp& be) const {
    if (int(al.size()) != n || int(be.size()) != n) throw std::invalid_argument("color length mismatch");
    long s = 0;
    for (int i = 0; i < n; ++i) {
      if (!al[i]) continue;
      for (int j = 0; j < n; ++j)
        if (be[j]) s += long(a[i][j]) * al[i] * be[j];
    }
    return int(mod_floor(s, m));
  }
  // c_pair: x^al x^be = C(al,be) x^(al+be)
  int cpair_exp(const Exp& al, const Exp& be) const {
    if (int(al.size()) != n || int(be.size()) != n) throw std::invalid_argument("exponent length mismatch");
    long s = 0;
    for (int i = 0; i < n; ++i) {
      if (!be[i]) continue;
      for (int j = i + 1; j < n; ++j)
        if (al[j]) s += long(a[j][i]) * al[j] * be[i];
    }
    return int(mod_floor(s, m));
  }
  Unit chi_u(const Exp& al, const Exp& be) const { return Unit(chi_exp(al, be), false); }
  Unit cpair_u(const Exp& al, const Exp& be) const { return Unit(cpair_exp(al, be), false); }
  Cyc one() const { return Cyc(m, Rat(1)); }
  Cyc zero() const { return Cyc(m); }
  Cyc unit(const Unit& u) const { return Cyc(m, u); }
  long ideg(const Exp& al) const {
    long s = 0;
    for (int i = 0; i < n; ++i) s += long(d[i]) * al[i];
    return s;
  }
};

inline Cyc chi(const RingSpec& R, const Exp& al, const Exp& be) { return R.unit(R.chi_u(al, be)); }
inline Cyc c_pair(const RingSpec& R, const Exp& al, const Exp& be) { return R.unit(R.cpair_u(al, be)); }

enum class VarKind { Poly, Exterior, Divided };

struct VarInfo {
  std::string name;
  VarKind kind = VarKind::Poly;
  int hdeg = 0;
  long ideg = 1;
  Exp color;
  int weight = 1;  // for monomial orders
};

inline void elem_add(Elem& e, const Mono& mono, const Cyc& c) {
  if (c.is_zero()) return;
  auto it = e.find(mono);
  if (it == e.end()) {
    e.emplace(mono, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) e.erase(it);
}
inline void elem_axpy(Elem& y, const Cyc& s, const Elem& x) {
  for (const auto& [mo, c] : x) elem_add(y, mo, s * c);
}
inline Elem elem_scale(const Elem& x, const Cyc& s) {
  Elem y;
  if (s.is_zero()) return y;
  for (const auto& [mo, c] : x) y.emplace(mo, c * s);
  return y;
}
inline Elem elem_sub(Elem x, const Elem& y, int m) {
  elem_axpy(x, Cyc(m, Rat(-1)), y);
  return x;
}

// Graded color-commutative algebra on polynomial, exterior and divided-power variables,
// optionally modulo a monomial ideal. u v = eps(u,v) v u with eps = (-1)^{|u||v|} chi(col u, col v).
class Algebra {
 public:
  const RingSpec* R = nullptr;
  int m = 1;
  std::vector<VarInfo> vars;
  std::vector<Mono> killers;
  std::vector<Elem> dvar;  // differential of each variable, empty if none

  Algebra() = default;
  Algebra(const RingSpec& ring, std::vector<VarInfo> v) : R(&ring), m(ring.m), vars(std::move(v)) { setup(); }
  // colors given directly as chi exponents through an explicit matrix (commutative rings etc.)
  Algebra(int m_, std::vector<VarInfo> v, std::vector<std::vector<Unit>> eps)
      : m(m_), vars(std::move(v)), eps_(std::move(eps)) {}

  int size() const { return int(vars.size()); }
  const Unit& eps(int u, int v) const { return eps_[u][v]; }

  Mono one_mono() const { return Mono(vars.size(), 0); }
  Mono var_mono(int u) const {
    Mono r = one_mono();
    r[u] = 1;
    return r;
  }
  Elem one() const { return Elem{{one_mono(), Cyc(m, Rat(1))}}; }
  Elem var(int u) const { return Elem{{var_mono(u), Cyc(m, Rat(1))}}; }

  int hdeg(const Mono& a) const {
    int s = 0;
    for (size_t u = 0; u < vars.size(); ++u) s += vars[u].hdeg * a[u];
    return s;
  }
  long ideg(const Mono& a) const {
    long s = 0;
    for (size_t u = 0; u < vars.size(); ++u) s += vars[u].ideg * a[u];
    return s;
  }
  Exp color(const Mono& a) const {
    Exp r(ncolors(), 0);
    for (size_t u = 0; u < vars.size(); ++u)
      if (a[u])
        for (size_t i = 0; i < r.size(); ++i) r[i] += vars[u].color[i] * a[u];
    return r;
  }
  int ncolors() const { return vars.empty() ? 0 : int(vars[0].color.size()); }

  bool killed(const Mono& a) const {
    for (const auto& k : killers)
      if (exp_divides(k, a)) return true;
    return false;
  }

  // x^a x^b = (unit * k) x^(a+b); returns false when the product vanishes.
  bool mul_mono(const Mono& a, const Mono& b, Mono& out, Unit& u, Int& k) const {
    int N = size();
    out.assign(N, 0);
    k = 1;
    long e = 0;
    int sg = 0;
    for (int i = 0; i < N; ++i) {
      out[i] = a[i] + b[i];
      if (a[i] && b[i]) {
        if (vars[i].kind == VarKind::Exterior) return false;
        if (vars[i].kind == VarKind::Divided) k *= binomial(out[i], a[i]);
      }
    }
    for (int x = 1; x < N; ++x) {
      if (!a[x]) continue;
      for (int y = 0; y < x; ++y) {
        if (!b[y]) continue;
        long p = long(a[x]) * b[y];
        e += p * eps_[x][y].e;
        if (eps_[x][y].neg) sg ^= int(p & 1);
      }
    }
    if (!killers.empty() && killed(out)) return false;
    u = Unit(int(mod_floor(e, m)), sg != 0);
    return true;
  }

  Cyc scalar(const Unit& u, const Int& k) const {
    Cyc c(m, u);
    if (k != 1) c = c.scaled(Rat(k));
    return c;
  }

  Elem mul(const Elem& p, const Elem& q) const {
    Elem r;
    Mono out;
    Unit u;
    Int k;
    for (const auto& [a, ca] : p)
      for (const auto& [b, cb] : q)
        if (mul_mono(a, b, out, u, k)) elem_add(r, out, (ca * cb) * scalar(u, k));
    return r;
  }

  Elem pow(const Elem& p, int k) const {
    Elem r = one();
    for (int i = 0; i < k; ++i) r = mul(r, p);
    return r;
  }

  Elem reduce(const Elem& p) const {
    if (killers.empty()) return p;
    Elem r;
    for (const auto& [a, c] : p)
      if (!killed(a)) r.emplace(a, c);
    return r;
  }

  // Derivation determined by dvar, extended by the Leibniz rule
  // d(ab) = d(a) b + (-1)^{|a|} a d(b); d(y^(a)) = d(y) y^(a-1) for divided powers,
  // d(x^a) = sum of a copies for even polynomial variables.
  Elem diff_mono(const Mono& a) const {
    Elem r;
    int N = size();
    int prior = 0;
    for (int u = 0; u < N; ++u) {
      if (!a[u]) continue;
      if (!dvar.empty() && !dvar[u].empty()) {
        Mono left = one_mono(), right = one_mono();
        for (int v = 0; v < u; ++v) left[v] = a[v];
        for (int v = u + 1; v < N; ++v) right[v] = a[v];
        Mono rest = one_mono();
        rest[u] = a[u] - 1;
        Elem piece;
        if (vars[u].kind == VarKind::Poly) {
          // d(x^k) = sum_j x^j d(x) x^(k-1-j); x is even here
          if (vars[u].hdeg % 2 != 0) throw std::logic_error("odd polynomial variable");
          for (int j = 0; j < a[u]; ++j) {
            Mono pj = one_mono(), qj = one_mono();
            pj[u] = j;
            qj[u] = a[u] - 1 - j;
            piece = add(piece, mul(mul(Elem{{pj, Cyc(m, Rat(1))}}, dvar[u]), Elem{{qj, Cyc(m, Rat(1))}}));
          }
        } else {
          piece = mul(dvar[u], Elem{{rest, Cyc(m, Rat(1))}});
        }
        Elem t = mul(mul(Elem{{left, Cyc(m, Rat(1))}}, piece), Elem{{right, Cyc(m, Rat(1))}});
        if (prior % 2) t = elem_scale(t, Cyc(m, Rat(-1)));
        r = add(r, t);
      }
      prior += vars[u].hdeg * a[u];
    }
    return r;
  }
  Elem diff(const Elem& p) const {
    Elem r;
    for (const auto& [a, c] : p) elem_axpy(r, c, diff_mono(a));
    return r;
  }

  Elem add(Elem p, const Elem& q) const {
    for (const auto& [a, c] : q) elem_add(p, a, c);
    return p;
  }

  std::string mono_str(const Mono& a) const {
    std::string s;
    for (size_t u = 0; u < vars.size(); ++u) {
      if (!a[u]) continue;
      if (!s.empty()) s += "*";
      s += vars[u].name;
      if (vars[u].kind == VarKind::Divided) {
        s += "^(" + std::to_string(a[u]) + ")";
      } else if (a[u] > 1) {
        s += "^" + std::to_string(a[u]);
      }
    }
    return s.empty() ? "1" : s;
  }

  std::string str(const Elem& p) const {
    if (p.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [a, c] : p) {
      std::string cs = c.str();
      bool simple = c.is_rational();
      std::string ms = mono_str(a);
      std::string term;
      if (ms == "1") {
        term = simple ? cs : "(" + cs + ")";
      } else if (c.is_one()) {
        term = ms;
      } else if (simple && cs == "-1") {
        term = "-" + ms;
      } else {
        term = (simple ? cs : "(" + cs + ")") + "*" + ms;
      }
      if (!first) {
        if (term[0] == '-')
          s += " - " + term.substr(1);
        else
          s += " + " + term;
      } else {
        s += term;
      }
      first = false;
    }
    return s;
  }

  void setup() {
    int N = size();
    eps_.assign(N, std::vector<Unit>(N));
    for (int u = 0; u < N; ++u)
      for (int v = 0; v < N; ++v) {
        int e = R ? R->chi_exp(vars[u].color, vars[v].color) : 0;
        bool neg = (vars[u].hdeg * vars[v].hdeg) % 2 != 0;
        eps_[u][v] = Unit(e, neg);
      }
  }

 private:
  std::vector<std::vector<Unit>> eps_;
};

// The skew polynomial ring Q = k_q[x_1..x_n].
inline Algebra skew_poly_ring(const RingSpec& R) {
  std::vector<VarInfo> v;
  for (int i = 0; i < R.n; ++i) v.push_back({"x" + std::to_string(i + 1), VarKind::Poly, 0, R.d[i], unit_exp(R.n, i), R.d[i]});
  return Algebra(R, v);
}

// The quotient R = Q/(f) when every f_i is a monomial.
inline Algebra quotient_ring(const RingSpec& R) {
  Algebra A = skew_poly_ring(R);
  for (const auto& c : R.cf) A.killers.push_back(c);
  return A;
}

inline Elem poly_mul(const Algebra& A, const Elem& p, const Elem& q) { return A.mul(p, q); }

// Parser for the ASCII polynomial grammar:
//   expr := term (('+'|'-') term)* ; term := ['+'|'-'] factor ('*' factor)*
//   factor := atom ['^' int] ; atom := int ['/' int] | 'z' | name | '(' expr ')'
class PolyParser {
 public:
  PolyParser(const Algebra& A, std::string src) : A_(A), s_(std::move(src)) {
    for (int u = 0; u < A_.size(); ++u) names_[A_.vars[u].name] = u;
  }
  Elem parse() {
    Elem e = expr();
    skip();
    if (i_ < s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
    return e;
  }

 private:
  const Algebra& A_;
  std::string s_;
  size_t i_ = 0;
  std::map<std::string, int> names_;

  [[noreturn]] void fail(const std::string& msg) const {
    int line = 1, col = 1;
    for (size_t k = 0; k < i_ && k < s_.size(); ++k) {
      if (s_[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(msg, line, col);
  }
  void skip() {
    while (i_ < s_.size() && std::isspace((unsigned char)s_[i_])) ++i_;
  }
  bool eat(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }
  Elem constant(const Cyc& c) const { return c.is_zero() ? Elem{} : Elem{{A_.one_mono(), c}}; }
  Elem expr() {
    Elem r = term();
    for (;;) {
      if (eat('+'))
        r = A_.add(r, term());
      else if (eat('-'))
        r = elem_sub(r, term(), A_.m);
      else
        return r;
    }
  }
  Elem term() {
    bool neg = false;
    for (;;) {
      if (eat('-'))
        neg = !neg;
      else if (eat('+'))
        ;
      else
        break;
    }
    Elem r = factor();
    while (eat('*')) r = A_.mul(r, factor());
    return neg ? elem_scale(r, Cyc(A_.m, Rat(-1))) : r;
  }
  long integer() {
    skip();
    size_t st = i_;
    while (i_ < s_.size() && std::isdigit((unsigned char)s_[i_])) ++i_;
    if (st == i_) fail("expected integer");
    return std::stol(s_.substr(st, i_ - st));
  }
  Elem factor() {
    Elem base = atom();
    if (eat('^')) {
      long k = integer();
      if (k > 64) fail("exponent too large");
      return A_.pow(base, int(k));
    }
    return base;
  }
  Elem atom() {
    skip();
    if (i_ >= s_.size()) fail("unexpected end of input");
    char ch = s_[i_];
    if (ch == '(') {
      ++i_;
      Elem e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit((unsigned char)ch)) {
      size_t st = i_;
      while (i_ < s_.size() && std::isdigit((unsigned char)s_[i_])) ++i_;
      Rat v(Int(s_.substr(st, i_ - st)));
      skip();
      if (i_ < s_.size() && s_[i_] == '/') {
        ++i_;
        long den = integer();
        if (den == 0) fail("zero denominator");
        v /= Rat(den);
      }
      return constant(Cyc(A_.m, v));
    }
    if (std::isalpha((unsigned char)ch) || ch == '_') {
      size_t st = i_;
      while (i_ < s_.size() && (std::isalnum((unsigned char)s_[i_]) || s_[i_] == '_' || s_[i_] == '\'')) ++i_;
      std::string nm = s_.substr(st, i_ - st);
      if (nm == "z") return constant(Cyc::zeta_pow(A_.m, 1));
      auto it = names_.find(nm);
      if (it == names_.end()) {
        i_ = st;
        fail("unknown variable '" + nm + "'");
      }
      return A_.var(it->second);
    }
    fail("unexpected '" + std::string(1, ch) + "'");
  }
};

inline Elem parse_poly(const Algebra& A, const std::string& s) { return PolyParser(A, s).parse(); }

inline Cyc parse_scalar(int m, const std::string& s) {
  Algebra A(m, {}, {});
  Elem e = parse_poly(A, s);
  if (e.empty()) return Cyc(m);
  return e.begin()->second;
}

// Sets cf, df and the coefficient of each relation; requires single-term relations.
inline void finalize_ring(RingSpec& R) {
  R.cf.clear();
  R.df.clear();
  R.fcoef.clear();
  for (const auto& f : R.f) {
    if (f.size() != 1) throw std::invalid_argument("relation is not a single term");
    R.cf.push_back(f.begin()->first);
    R.df.push_back(int(R.ideg(f.begin()->first)));
    R.fcoef.push_back(f.begin()->second);
  }
}

// Reads {"n","m","qexp","degrees","relations"}; relations are parsed but not validated.
inline RingSpec ring_from_json(const nlohmann::json& j) {
  RingSpec R;
  R.n = j.at("n").get<int>();
  R.m = j.value("m", 1);
  if (R.n < 1) throw std::invalid_argument("n must be positive");
  if (R.m < 1) throw std::invalid_argument("m must be positive");
  if (j.contains("qexp")) {
    R.a = j.at("qexp").get<std::vector<std::vector<int>>>();
  } else {
    R.a.assign(R.n, std::vector<int>(R.n, 0));
  }
  if (int(R.a.size()) != R.n) throw std::invalid_argument("qexp must be n x n");
  for (auto& row : R.a) {
    if (int(row.size()) != R.n) throw std::invalid_argument("qexp must be n x n");
    for (auto& x : row) x = int(mod_floor(x, R.m));
  }
  for (int i = 0; i < R.n; ++i) {
    if (R.a[i][i] != 0) throw std::invalid_argument("qexp diagonal must vanish");
    for (int k = 0; k < R.n; ++k)
      if (mod_floor(R.a[i][k] + R.a[k][i], R.m) != 0) throw std::invalid_argument("qexp must be antisymmetric mod m");
  }
  R.d = j.contains("degrees") ? j.at("degrees").get<std::vector<int>>() : std::vector<int>(R.n, 1);
  if (int(R.d.size()) != R.n) throw std::invalid_argument("degrees must have length n");
  for (int x : R.d)
    if (x < 1) throw std::invalid_argument("degrees must be positive");
  Algebra Q = skew_poly_ring(R);
  for (const auto& s : j.at("relations")) {
    R.relation_src.push_back(s.get<std::string>());
    R.f.push_back(parse_poly(Q, R.relation_src.back()));
  }
  return R;
}

inline nlohmann::json ring_to_json(const RingSpec& R) {
  nlohmann::json j;
  j["n"] = R.n;
  j["m"] = R.m;
  j["qexp"] = R.a;
  j["degrees"] = R.d;
  Algebra Q = skew_poly_ring(R);
  std::vector<std::string> rel;
  for (const auto& f : R.f) rel.push_back(Q.str(f));
  j["relations"] = rel;
  return j;
}

}  // namespace skewci
