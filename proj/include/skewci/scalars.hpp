// Exact arithmetic in the cyclotomic field Q(zeta_m) = Q[t]/Phi_m(t).
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace skewci {

using Rat = mpq_class;
using Int = mpz_class;

inline int euler_phi(int m) {
  int r = m;
  for (int p = 2; p * p <= m; ++p) {
    if (m % p == 0) {
      while (m % p == 0) m /= p;
      r -= r / p;
    }
  }
  if (m > 1) r -= r / m;
  return r;
}

inline long mod_floor(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

namespace detail {

// Per-conductor tables: Phi_m and the reduced powers t^k for 0 <= k < 2*phi(m) and zeta^k for k < m.
struct CycloTable {
  int m = 1;
  int phi = 1;
  std::vector<Int> Phi;                  // monic, low to high, size phi+1
  std::vector<std::vector<Rat>> tpow;    // t^k mod Phi, k < 2*phi-1
  std::vector<std::vector<Rat>> zpow;    // zeta^k, k < m
};

inline std::vector<Int> poly_divexact(std::vector<Int> a, const std::vector<Int>& b) {
  // b monic
  int da = int(a.size()) - 1, db = int(b.size()) - 1;
  std::vector<Int> q(std::max(0, da - db + 1));
  for (int i = da; i >= db; --i) {
    Int c = a[i];
    q[i - db] = c;
    if (c == 0) continue;
    for (int j = 0; j <= db; ++j) a[i - db + j] -= c * b[j];
  }
  return q;
}

inline std::vector<Int> cyclotomic_int(int m) {
  static std::map<int, std::vector<Int>> memo;
  auto it = memo.find(m);
  if (it != memo.end()) return it->second;
  std::vector<Int> p(m + 1, 0);
  p[0] = -1;
  p[m] = 1;
  for (int d = 1; d < m; ++d)
    if (m % d == 0) p = poly_divexact(p, cyclotomic_int(d));
  memo[m] = p;
  return p;
}

inline std::vector<Rat> reduce_poly(std::vector<Rat> a, const std::vector<Int>& Phi) {
  int phi = int(Phi.size()) - 1;
  for (int i = int(a.size()) - 1; i >= phi; --i) {
    if (a[i] == 0) continue;
    Rat c = a[i];
    for (int j = 0; j <= phi; ++j) a[i - phi + j] -= c * Phi[j];
  }
  a.resize(phi);
  return a;
}

inline const CycloTable& cyclo(int m) {
  if (m < 1) throw std::invalid_argument("conductor must be positive");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<CycloTable>> tables;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = tables[m];
  if (!slot) {
    auto t = std::make_unique<CycloTable>();
    t->m = m;
    t->Phi = cyclotomic_int(m);
    t->phi = int(t->Phi.size()) - 1;
    int top = std::max(2 * t->phi - 1, 1);
    for (int k = 0; k < std::max(top, m); ++k) {
      std::vector<Rat> v(k + 1, 0);
      v[k] = 1;
      auto r = reduce_poly(v, t->Phi);
      if (k < top) t->tpow.push_back(r);
      if (k < m) t->zpow.push_back(r);
    }
    slot = std::move(t);
  }
  return *slot;
}

}  // namespace detail

inline const std::vector<Int>& cyclotomic_poly(int m) { return detail::cyclo(m).Phi; }

// A root of unity times a sign: (-1)^neg * zeta^e, e mod m.
struct Unit {
  int e = 0;
  bool neg = false;
  Unit() = default;
  Unit(int e_, bool n) : e(e_), neg(n) {}
  static Unit one() { return {}; }
  static Unit minus() { return {0, true}; }
  Unit mul(const Unit& o, int m) const { return {int(mod_floor(long(e) + o.e, m)), neg != o.neg}; }
  Unit inv(int m) const { return {int(mod_floor(-long(e), m)), neg}; }
  Unit pow(long k, int m) const {
    return {int(mod_floor(long(e) * mod_floor(k, m), m)), neg && (k % 2 != 0)};
  }
  bool operator==(const Unit& o) const { return e == o.e && neg == o.neg; }
};

class Cyc {
 public:
  Cyc() : m_(1), c_(1, Rat(0)) {}
  explicit Cyc(int m) : m_(m), c_(detail::cyclo(m).phi, Rat(0)) {}
  Cyc(int m, const Rat& r) : Cyc(m) {
    c_[0] = r;
    c_[0].canonicalize();
  }
  Cyc(int m, std::vector<Rat> coeffs) : m_(m) {
    const auto& T = detail::cyclo(m);
    for (auto& x : coeffs) x.canonicalize();
    if (int(coeffs.size()) > T.phi)
      c_ = detail::reduce_poly(std::move(coeffs), T.Phi);
    else {
      coeffs.resize(T.phi, Rat(0));
      c_ = std::move(coeffs);
    }
  }
  Cyc(int m, const Unit& u) : m_(m), c_(detail::cyclo(m).zpow[mod_floor(u.e, m)]) {
    if (u.neg)
      for (auto& x : c_) x = -x;
  }
  static Cyc zeta_pow(int m, long k) { return Cyc(m, Unit(int(mod_floor(k, m)), false)); }

  int conductor() const { return m_; }
  int degree() const { return int(c_.size()); }
  const std::vector<Rat>& coeffs() const { return c_; }

  bool is_zero() const {
    for (const auto& x : c_)
      if (x != 0) return false;
    return true;
  }
  bool is_rational() const {
    for (size_t i = 1; i < c_.size(); ++i)
      if (c_[i] != 0) return false;
    return true;
  }
  bool is_one() const { return is_rational() && c_[0] == 1; }

  Cyc& operator+=(const Cyc& o) {
    check(o);
    for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  Cyc& operator-=(const Cyc& o) {
    check(o);
    for (size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Cyc operator-() const {
    Cyc r(*this);
    for (auto& x : r.c_) x = -x;
    return r;
  }
  friend Cyc operator+(Cyc a, const Cyc& b) { return a += b; }
  friend Cyc operator-(Cyc a, const Cyc& b) { return a -= b; }

  friend Cyc operator*(const Cyc& a, const Cyc& b) {
    a.check(b);
    int phi = int(a.c_.size());
    if (phi == 1) return Cyc(a.m_, Rat(a.c_[0] * b.c_[0]));
    const auto& T = detail::cyclo(a.m_);
    std::vector<Rat> prod(2 * phi - 1, Rat(0));
    for (int i = 0; i < phi; ++i) {
      if (a.c_[i] == 0) continue;
      for (int j = 0; j < phi; ++j)
        if (b.c_[j] != 0) prod[i + j] += a.c_[i] * b.c_[j];
    }
    Cyc r(a.m_);
    for (int k = 0; k < 2 * phi - 1; ++k) {
      if (prod[k] == 0) continue;
      if (k < phi) {
        r.c_[k] += prod[k];
        continue;
      }
      const auto& tk = T.tpow[k];
      for (int i = 0; i < phi; ++i)
        if (tk[i] != 0) r.c_[i] += prod[k] * tk[i];
    }
    return r;
  }
  Cyc& operator*=(const Cyc& o) { return *this = *this * o; }

  Cyc scaled(const Rat& r) const {
    Cyc out(*this);
    for (auto& x : out.c_) x *= r;
    return out;
  }
  Cyc times(const Unit& u) const {
    if (u.e == 0) return u.neg ? -*this : *this;
    return *this * Cyc(m_, u);
  }

  // Inverse by solving the multiplication-matrix system M_a * v = e_0.
  Cyc inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero");
    int phi = int(c_.size());
    if (phi == 1) return Cyc(m_, Rat(1 / c_[0]));
    const auto& T = detail::cyclo(m_);
    // column j = a * t^j
    std::vector<std::vector<Rat>> A(phi, std::vector<Rat>(phi + 1, Rat(0)));
    for (int j = 0; j < phi; ++j) {
      std::vector<Rat> col(2 * phi - 1, Rat(0));
      for (int i = 0; i < phi; ++i) col[i + j] = c_[i];
      auto red = detail::reduce_poly(col, T.Phi);
      for (int i = 0; i < phi; ++i) A[i][j] = red[i];
    }
    A[0][phi] = 1;
    for (int col = 0, row = 0; col < phi; ++col, ++row) {
      int p = row;
      while (p < phi && A[p][col] == 0) ++p;
      if (p == phi) throw std::domain_error("singular multiplication matrix");
      std::swap(A[p], A[row]);
      Rat inv = 1 / A[row][col];
      for (int j = col; j <= phi; ++j) A[row][j] *= inv;
      for (int r = 0; r < phi; ++r) {
        if (r == row || A[r][col] == 0) continue;
        Rat f = A[r][col];
        for (int j = col; j <= phi; ++j) A[r][j] -= f * A[row][j];
      }
    }
    Cyc r(m_);
    for (int i = 0; i < phi; ++i) r.c_[i] = A[i][phi];
    return r;
  }

  Cyc pow(long k) const {
    if (k < 0) return inverse().pow(-k);
    Cyc r(m_, Rat(1)), b(*this);
    while (k) {
      if (k & 1) r *= b;
      b *= b;
      k >>= 1;
    }
    return r;
  }

  bool operator==(const Cyc& o) const { return m_ == o.m_ && c_ == o.c_; }
  bool operator!=(const Cyc& o) const { return !(*this == o); }
  bool operator<(const Cyc& o) const {
    if (m_ != o.m_) return m_ < o.m_;
    for (size_t i = 0; i < c_.size(); ++i)
      if (c_[i] != o.c_[i]) return c_[i] < o.c_[i];
    return false;
  }

  // "-1 + 2*z^2" style; z is the chosen primitive root.
  std::string str() const {
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < c_.size(); ++i) {
      const Rat& x = c_[i];
      if (x == 0) continue;
      Rat a = abs(x);
      if (first) {
        if (x < 0) os << "-";
      } else {
        os << (x < 0 ? " - " : " + ");
      }
      first = false;
      if (i == 0) {
        os << a.get_str();
      } else {
        if (a != 1) os << a.get_str() << "*";
        os << "z";
        if (i > 1) os << "^" << i;
      }
    }
    if (first) os << "0";
    return os.str();
  }

 private:
  void check(const Cyc& o) const {
    if (m_ != o.m_) throw std::invalid_argument("conductor mismatch");
  }
  int m_;
  std::vector<Rat> c_;
};

enum class ArithOp { Add, Sub, Mul, Div };

inline Cyc arith(const Cyc& a, const Cyc& b, ArithOp op) {
  if (a.conductor() != b.conductor()) throw std::invalid_argument("conductor mismatch");
  switch (op) {
    case ArithOp::Add: return a + b;
    case ArithOp::Sub: return a - b;
    case ArithOp::Mul: return a * b;
    case ArithOp::Div:
      if (b.is_zero()) throw std::domain_error("division by zero");
      return a * b.inverse();
  }
  return a;
}

inline Cyc inverse(const Cyc& a) { return a.inverse(); }

// Order of a as an element of the multiplicative group, if it is a root of unity.
inline std::optional<int> unit_order(const Cyc& a) {
  if (a.is_zero()) throw std::domain_error("unit order of zero");
  int m = a.conductor();
  int bound = 2 * m;
  Cyc p = a;
  for (int k = 1; k <= bound; ++k) {
    if (p.is_one()) return k;
    p *= a;
  }
  return std::nullopt;
}

// As a Unit, if a = +-zeta^e.
inline std::optional<Unit> as_unit(const Cyc& a) {
  int m = a.conductor();
  const auto& T = detail::cyclo(m);
  for (int e = 0; e < m; ++e) {
    if (T.zpow[e] == a.coeffs()) return Unit(e, false);
    bool neg = true;
    for (size_t i = 0; i < a.coeffs().size(); ++i)
      if (a.coeffs()[i] != -T.zpow[e][i]) {
        neg = false;
        break;
      }
    if (neg) return Unit(e, true);
  }
  return std::nullopt;
}

inline Int binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  Int r;
  mpz_bin_uiui(r.get_mpz_t(), (unsigned long)n, (unsigned long)k);
  return r;
}

inline std::ostream& operator<<(std::ostream& os, const Cyc& c) { return os << c.str(); }

}  // namespace skewci
