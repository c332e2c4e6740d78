// Graded dual of a color polynomial algebra: convolution product and divided powers.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "colorcore.hpp"

namespace skewci {

using DualElement = std::map<Exp, Cyc>;  // sum of scalar * xi^alpha, xi^alpha = (x^alpha)^*

inline Int multi_binomial(const Exp& a, const Exp& b) {
  Int r = 1;
  for (size_t i = 0; i < a.size(); ++i) r *= binomial(a[i], b[i]);
  return r;
}

// Normalizing constant of (xi^a)^(k) = (xi^a)^k / k!: prod_i (k a_i)! / (a_i!)^k, divided by k!.
// For a supported on one variable this is (hk)! / (k! (h!)^k).
inline Rat bracket(const Exp& a, long k) {
  Int num = 1;
  for (int h : a) {
    Int f, hf, den;
    mpz_fac_ui(f.get_mpz_t(), (unsigned long)(h * k));
    mpz_fac_ui(hf.get_mpz_t(), (unsigned long)h);
    mpz_pow_ui(den.get_mpz_t(), hf.get_mpz_t(), (unsigned long)k);
    num *= f / den;
  }
  Int kf;
  mpz_fac_ui(kf.get_mpz_t(), (unsigned long)k);
  Rat r(num, kf);
  r.canonicalize();
  return r;
}

struct XiTerm {
  Cyc scalar;
  Exp exponent;
};

// xi^b xi^g = C(x^g, x^b)^{-1} binom(b+g, b) xi^(b+g)
inline XiTerm xi_mul(const RingSpec& R, const Exp& b, const Exp& g) {
  Exp s = exp_add(b, g);
  Cyc c = R.unit(R.cpair_u(g, b).inv(R.m)).scaled(Rat(multi_binomial(s, b)));
  return {c, s};
}

// (xi^a)^(k) = C(x^a, x^a)^{-binom(k,2)} <a over k> xi^(k a); flip inverts the C exponent.
inline XiTerm xi_divided_power(const RingSpec& R, const Exp& a, long k, bool flip = false) {
  long e = long(R.cpair_exp(a, a)) * (k * (k - 1) / 2);
  if (!flip) e = -e;
  Cyc c = R.unit(Unit(int(mod_floor(e, R.m)), false)).scaled(bracket(a, k));
  return {c, exp_scale(a, int(k))};
}

inline void dual_add(DualElement& d, const Exp& a, const Cyc& c) {
  if (c.is_zero()) return;
  auto it = d.find(a);
  if (it == d.end()) {
    d.emplace(a, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) d.erase(it);
}

// (phi psi)(a) = sum c(psi, a_(1)) phi(a_(1)) psi(a_(2)) with the coproduct
// Delta(x^a) = sum_{b+g=a} C(x^b,x^g)^{-1} binom(a,b) x^b (x) x^g.
inline DualElement convolution_mul(const RingSpec& R, const DualElement& phi, const DualElement& psi) {
  DualElement out;
  for (const auto& [b, cb] : phi)
    for (const auto& [g, cg] : psi) {
      Exp a = exp_add(b, g);
      // color of xi^g is -g
      long e = -long(R.chi_exp(g, b)) - R.cpair_exp(b, g);
      Cyc s = R.unit(Unit(int(mod_floor(e, R.m)), false)).scaled(Rat(multi_binomial(a, b)));
      dual_add(out, a, (cb * cg) * s);
    }
  return out;
}

inline DualElement xi(const RingSpec& R, const Exp& a, const Cyc& c) { return DualElement{{a, c}}; }

struct AppendixReport {
  bool ok = true;
  int bound = 0;
  long checks = 0;
  std::string failure;
  nlohmann::json witness;
  nlohmann::json to_json() const {
    return {{"ok", ok}, {"bound", bound}, {"checks", checks}, {"failure", failure}, {"witness", witness}};
  }
};

namespace detail {

inline void exps_up_to(int n, int bound, std::vector<Exp>& out) {
  Exp cur(n, 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == n) {
      out.push_back(cur);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      cur[i] = k;
      rec(i + 1, left - k);
    }
    cur[i] = 0;
  };
  rec(0, bound);
}

// Coproduct on A^*: Delta(xi_i) = xi_i (x) 1 + 1 (x) xi_i, multiplicative for the braided product.
struct DualCoproduct {
  const RingSpec& R;
  std::map<Exp, std::map<std::pair<Exp, Exp>, Cyc>> memo;
  explicit DualCoproduct(const RingSpec& r) : R(r) {}

  using Tensor = std::map<std::pair<Exp, Exp>, Cyc>;

  static void tadd(Tensor& t, const Exp& a, const Exp& b, const Cyc& c) {
    if (c.is_zero()) return;
    auto key = std::make_pair(a, b);
    auto it = t.find(key);
    if (it == t.end()) {
      t.emplace(key, c);
      return;
    }
    it->second += c;
    if (it->second.is_zero()) t.erase(it);
  }

  const Tensor& delta(const Exp& a) {
    auto it = memo.find(a);
    if (it != memo.end()) return it->second;
    Tensor t;
    int j = -1;
    for (int i = int(a.size()) - 1; i >= 0; --i)
      if (a[i]) {
        j = i;
        break;
      }
    if (j < 0) {
      tadd(t, a, a, R.one());
      return memo[a] = t;
    }
    // xi^(a-e_j) xi_j = C(e_j, a-e_j)^{-1} a_j xi^a
    Exp ej = unit_exp(R.n, j), rest = exp_sub(a, ej);
    XiTerm pr = xi_mul(R, rest, ej);
    Cyc inv = pr.scalar.inverse();
    Tensor base = delta(rest);
    for (const auto& [k, c] : base) {
      const auto& [b, g] = k;
      // (xi^b (x) xi^g)(xi_j (x) 1) = c(xi^g, xi_j) xi^b xi_j (x) xi^g
      XiTerm l = xi_mul(R, b, ej);
      tadd(t, l.exponent, g, c * R.unit(R.chi_u(g, ej)) * l.scalar * inv);
      XiTerm r = xi_mul(R, g, ej);
      tadd(t, b, r.exponent, c * r.scalar * inv);
    }
    return memo[a] = t;
  }
};

}  // namespace detail

// Checks the divided-power product identity, the divided-power axioms, associativity of the
// convolution product, and that x_i -> (xi_i)^* extends to a multiplicative bijection A -> A^**.
inline AppendixReport verify_appendix(const RingSpec& R, int bound, bool flip = false) {
  AppendixReport rep;
  rep.bound = bound;
  if (bound <= 0) return rep;
  std::vector<Exp> ex;
  detail::exps_up_to(R.n, bound, ex);
  auto fail = [&](const std::string& what, nlohmann::json w) {
    if (!rep.ok) return;
    rep.ok = false;
    rep.failure = what;
    rep.witness = std::move(w);
  };
  auto power = [&](const DualElement& x, long k) {
    DualElement r = xi(R, Exp(R.n, 0), R.one());
    for (long i = 0; i < k; ++i) r = convolution_mul(R, r, x);
    return r;
  };
  auto dpow = [&](const DualElement& x, long k) {
    // x is a single term
    const auto& [a, c] = *x.begin();
    XiTerm t = xi_divided_power(R, a, k, flip);
    return xi(R, t.exponent, c.pow(k) * t.scalar);
  };
  // (xy)^(k) = c(y,x)^binom(k,2) x^k y^(k)
  for (const auto& b : ex)
    for (const auto& g : ex)
      for (long k = 0; k <= bound && rep.ok; ++k) {
        ++rep.checks;
        DualElement x = xi(R, b, R.one()), y = xi(R, g, R.one());
        DualElement xy = convolution_mul(R, x, y);
        DualElement lhs = dpow(xy, k);
        long e = long(R.chi_exp(g, b)) * (k * (k - 1) / 2);
        DualElement rhs = convolution_mul(R, power(x, k), dpow(y, k));
        for (auto& kv : rhs) kv.second *= R.unit(Unit(int(mod_floor(e, R.m)), false));
        if (lhs != rhs) {
          auto s = [](const DualElement& d) { return d.empty() ? std::string("0") : d.begin()->second.str(); };
          fail("divided power of a product", {{"beta", b}, {"gamma", g}, {"k", k}, {"lhs", s(lhs)}, {"rhs", s(rhs)}});
        }
      }
  // x^(j) x^(k) = binom(j+k, j) x^(j+k)
  for (const auto& a : ex)
    for (long j = 0; j <= bound && rep.ok; ++j)
      for (long k = 0; j + k <= bound && rep.ok; ++k) {
        ++rep.checks;
        DualElement x = xi(R, a, R.one());
        DualElement lhs = convolution_mul(R, dpow(x, j), dpow(x, k));
        DualElement rhs = dpow(x, j + k);
        for (auto& kv : rhs) kv.second = kv.second.scaled(Rat(binomial(j + k, j)));
        if (lhs != rhs) fail("divided power axiom", {{"alpha", a}, {"j", j}, {"k", k}});
      }
  // convolution agrees with the closed formula, and is associative and color commutative
  for (const auto& b : ex)
    for (const auto& g : ex) {
      if (!rep.ok) break;
      ++rep.checks;
      DualElement p = convolution_mul(R, xi(R, b, R.one()), xi(R, g, R.one()));
      XiTerm t = xi_mul(R, b, g);
      if (p != xi(R, t.exponent, t.scalar)) fail("convolution vs closed formula", {{"beta", b}, {"gamma", g}});
      DualElement q = convolution_mul(R, xi(R, g, R.one()), xi(R, b, R.one()));
      for (auto& kv : q) kv.second *= R.unit(R.chi_u(b, g));
      if (p != q) fail("color commutativity", {{"beta", b}, {"gamma", g}});
    }
  for (size_t i = 0; i < ex.size() && rep.ok; i += 3)
    for (size_t j = 0; j < ex.size() && rep.ok; j += 2)
      for (size_t k = 0; k < ex.size() && rep.ok; k += 5) {
        ++rep.checks;
        DualElement a = xi(R, ex[i], R.one()), b = xi(R, ex[j], R.one()), c = xi(R, ex[k], R.one());
        if (convolution_mul(R, convolution_mul(R, a, b), c) != convolution_mul(R, a, convolution_mul(R, b, c)))
          fail("associativity", {{"a", ex[i]}, {"b", ex[j]}, {"c", ex[k]}});
      }
  // A^** via the coproduct of A^*: ((xi^b)^* (xi^g)^*)(xi^a) = c((xi^g)^*, xi^b) D(b,g)
  detail::DualCoproduct cop(R);
  auto dd_mul = [&](const DualElement& u, const DualElement& v) {
    DualElement out;
    for (const auto& [b, cb] : u)
      for (const auto& [g, cg] : v) {
        Exp a = exp_add(b, g);
        const auto& D = cop.delta(a);
        auto it = D.find({b, g});
        if (it == D.end()) continue;
        // color of (xi^g)^* is g, color of xi^b is -b
        Cyc s = R.unit(R.chi_u(g, b).inv(R.m));
        dual_add(out, a, cb * cg * s * it->second);
      }
    return out;
  };
  std::map<Exp, DualElement> theta;
  for (const auto& a : ex) {
    DualElement t = xi(R, Exp(R.n, 0), R.one());
    for (int i = 0; i < R.n; ++i)
      for (int k = 0; k < a[i]; ++k) t = dd_mul(t, xi(R, unit_exp(R.n, i), R.one()));
    ++rep.checks;
    if (t.size() != 1 || t.begin()->first != a) fail("double dual map not bijective", {{"alpha", a}});
    theta[a] = t;
  }
  for (const auto& b : ex)
    for (const auto& g : ex) {
      if (!rep.ok || exp_total(b) + exp_total(g) > bound) continue;
      ++rep.checks;
      DualElement lhs = dd_mul(theta[b], theta[g]);
      DualElement rhs = theta[exp_add(b, g)];
      for (auto& kv : rhs) kv.second *= R.unit(R.cpair_u(b, g));
      if (lhs != rhs) fail("double dual map not multiplicative", {{"beta", b}, {"gamma", g}});
    }
  return rep;
}

}  // namespace skewci
