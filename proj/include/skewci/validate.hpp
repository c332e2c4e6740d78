// Structural and regularity checks for a ring specification.
#pragma once

#include <string>
#include <vector>

#include "qgrobner.hpp"

namespace skewci {

struct ValidationReport {
  bool ok = false;
  std::string error;
  long cutoff = 0;
  long mismatch_degree = -1;
  std::vector<long> hilbert;   // dim R_j, j <= cutoff
  std::vector<long> expected;  // coefficients of prod(1-t^df)/prod(1-t^d)
  nlohmann::json to_json() const {
    return {{"ok", ok}, {"error", error}, {"cutoff", cutoff}, {"mismatch_degree", mismatch_degree},
            {"hilbert", hilbert}, {"expected", expected}};
  }
};

// Power series coefficients of prod(1 - t^a_i) / prod(1 - t^b_j) up to D.
inline std::vector<long> ci_hilbert(const std::vector<int>& num, const std::vector<int>& den, long D) {
  std::vector<long> h(D + 1, 0);
  h[0] = 1;
  for (int a : num)
    for (long j = D; j >= a; --j) h[j] -= h[j - a];
  for (int b : den)
    for (long j = b; j <= D; ++j) h[j] += h[j - b];
  return h;
}

inline ValidationReport validate_ring(RingSpec& R, long cutoff = -1) {
  ValidationReport rep;
  Algebra Q = skew_poly_ring(R);
  if (R.f.empty()) {
    rep.error = "no relations";
    return rep;
  }
  for (int i = 0; i < R.c(); ++i) {
    const Elem& f = R.f[i];
    std::string tag = "relation f" + std::to_string(i + 1);
    if (f.empty()) {
      rep.error = tag + " is zero";
      return rep;
    }
    Exp col = Q.color(f.begin()->first);
    long deg = Q.ideg(f.begin()->first);
    for (const auto& [mo, c] : f) {
      if (Q.ideg(mo) != deg) {
        rep.error = tag + " is not homogeneous in the internal degree";
        return rep;
      }
      if (Q.color(mo) != col) {
        rep.error = tag + " is not color-homogeneous";
        return rep;
      }
    }
    for (const auto& [mo, c] : f)
      if (exp_total(mo) < 2) {
        rep.error = tag + " is not in the square of the maximal ideal";
        return rep;
      }
  }
  finalize_ring(R);
  long sdf = 0;
  for (int x : R.df) sdf += x;
  rep.cutoff = cutoff >= 0 ? cutoff : 2 * sdf;
  GroebnerEngine eng(Q);
  std::vector<MVec> gens;
  for (const auto& f : R.f) {
    MVec v;
    for (const auto& [mo, c] : f) v[{0, mo}] = c;
    gens.push_back(v);
  }
  GroebnerBasis gb = buchberger(eng, gens);
  rep.hilbert = hilbert_series(gb, 1, rep.cutoff);
  rep.expected = ci_hilbert(R.df, R.d, rep.cutoff);
  for (long j = 0; j <= rep.cutoff; ++j)
    if (rep.hilbert[j] != rep.expected[j]) {
      rep.mismatch_degree = j;
      rep.error = "Hilbert function mismatch in degree " + std::to_string(j) + " (relations not regular)";
      return rep;
    }
  rep.ok = true;
  return rep;
}

}  // namespace skewci
