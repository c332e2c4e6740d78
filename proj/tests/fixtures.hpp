// Shared ring fixtures for the test suites.
#pragma once

#include <random>
#include <string>

#include "skewci/freemod.hpp"
#include "skewci/validate.hpp"

namespace fixtures {

// k[x]/(x^2)
inline const char* kHyper = R"({"n":1,"m":1,"qexp":[[0]],"relations":["x1^2"]})";
// C_i[x,y]/(x^2,y^2) with x1 x2 = i x2 x1
inline const char* kExample = R"({"n":2,"m":4,"qexp":[[0,1],[3,0]],"relations":["x1^2","x2^2"]})";
// k_q[x,y,z]/(x^2,y^2), q_12 = -1, q_13 = i, q_23 = -i
inline const char* kThree = R"({"n":3,"m":4,"qexp":[[0,2,1],[2,0,3],[3,1,0]],"relations":["x1^2","x2^2"]})";
// k_q[x,y]/(x^2), q = i (a hypersurface with a nontrivial bicharacter)
inline const char* kSkewHyper = R"({"n":2,"m":4,"qexp":[[0,1],[3,0]],"relations":["x1^2"]})";
// cube-root parameters, relations x^3 and y^2
inline const char* kCube = R"({"n":2,"m":3,"qexp":[[0,1],[2,0]],"relations":["x1^3","x2^2"]})";

inline skewci::RingSpec ring(const std::string& js) {
  skewci::RingSpec R = skewci::ring_from_json(nlohmann::json::parse(js));
  auto rep = skewci::validate_ring(R);
  if (!rep.ok) throw std::runtime_error("fixture invalid: " + rep.error);
  return R;
}

// Random valid ring: n variables, c <= n relations x_{i}^{a_i} on distinct variables.
inline skewci::RingSpec random_ring(std::mt19937& g, int n, int c, int m) {
  skewci::RingSpec R;
  R.n = n;
  R.m = m;
  R.a.assign(n, std::vector<int>(n, 0));
  std::uniform_int_distribution<int> d(0, m - 1), pw(2, 3);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      R.a[i][j] = d(g);
      R.a[j][i] = int(skewci::mod_floor(-R.a[i][j], m));
    }
  R.d.assign(n, 1);
  skewci::Algebra Q = skewci::skew_poly_ring(R);
  for (int i = 0; i < c; ++i) {
    std::string s = "x" + std::to_string(i + 1) + "^" + std::to_string(pw(g));
    R.relation_src.push_back(s);
    R.f.push_back(skewci::parse_poly(Q, s));
  }
  auto rep = skewci::validate_ring(R);
  if (!rep.ok) throw std::runtime_error("random ring invalid");
  return R;
}


// Random cyclic or two-generator module: k, R, R/(x_j^a), R/(x_i, x_j^a), or a sum of two of these.
inline skewci::ModulePresentation random_module(std::mt19937& g, const skewci::RingSpec& R, bool allow_sum = true) {
  using namespace skewci;
  Algebra Q = skew_poly_ring(R);
  std::uniform_int_distribution<int> kind(0, allow_sum ? 5 : 4), var(1, R.n), pw(1, 2);
  auto mono = [&](int v, int a) { return parse_poly(Q, "x" + std::to_string(v) + (a > 1 ? "^" + std::to_string(a) : "")); };
  switch (kind(g)) {
    case 0:
      return residue_field(R);
    case 1:
      return ring_module(R);
    case 2:
    case 3: {
      int v = var(g);
      return cyclic_module(R, {mono(v, pw(g))});
    }
    case 4: {
      int a = var(g), b = var(g);
      return cyclic_module(R, {mono(a, 1), mono(b, pw(g))});
    }
    default: {
      auto A = random_module(g, R, false);
      auto B = random_module(g, R, false);
      return direct_sum(A, shifted(B, unit_exp(R.n, var(g) - 1)));
    }
  }
}

}  // namespace fixtures
