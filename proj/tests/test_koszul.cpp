#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "skewci/dualpowers.hpp"
#include "skewci/koszul.hpp"

using namespace skewci;

TEST(Koszul, ProductExamples) {
  RingSpec R = fixtures::ring(fixtures::kExample);
  Algebra E = koszul_algebra(R);
  Elem e1 = E.var(2), e2 = E.var(3);
  EXPECT_TRUE(koszul_mul(E, e1, e1).empty());
  Elem e12 = koszul_mul(E, e1, e2);
  EXPECT_EQ(koszul_mul(E, e2, e1), elem_scale(e12, -chi(R, R.cf[1], R.cf[0])));
  // (x e1)(y e2) = chi(f1, y) (xy) e1 e2
  Elem xe1 = koszul_mul(E, E.var(0), e1), ye2 = koszul_mul(E, E.var(1), e2);
  Elem xy = koszul_mul(E, E.var(0), E.var(1));
  Elem expect = elem_scale(koszul_mul(E, xy, e12), chi(R, R.cf[0], {0, 1}));
  EXPECT_EQ(koszul_mul(E, xe1, ye2), expect);
}

TEST(Koszul, DifferentialExamples) {
  RingSpec R = fixtures::ring(fixtures::kExample);
  Algebra E = koszul_algebra(R);
  Elem e1 = E.var(2), e2 = E.var(3);
  EXPECT_EQ(koszul_diff(E, e1), parse_poly(E, "x1^2"));
  EXPECT_EQ(koszul_diff(E, koszul_mul(E, E.var(0), e1)), parse_poly(E, "x1^3"));
  // d(e1 e2) = f1 e2 - e1 f2
  Elem lhs = koszul_diff(E, koszul_mul(E, e1, e2));
  Elem rhs = elem_sub(koszul_mul(E, parse_poly(E, "x1^2"), e2), koszul_mul(E, e1, parse_poly(E, "x2^2")), R.m);
  EXPECT_EQ(lhs, rhs);
}

static Elem random_elem(std::mt19937& g, const Algebra& A, int terms = 3) {
  std::uniform_int_distribution<int> ex(0, 2), bit(0, 1), co(-2, 2);
  Elem p;
  for (int t = 0; t < terms; ++t) {
    Mono mo = A.one_mono();
    for (int u = 0; u < A.size(); ++u) mo[u] = A.vars[u].kind == VarKind::Exterior ? bit(g) : ex(g);
    elem_add(p, mo, Cyc(A.m, Rat(co(g))) + Cyc::zeta_pow(A.m, co(g)));
  }
  return p;
}

// split a random element into homogeneous pieces by homological degree
static std::map<int, Elem> by_hdeg(const Algebra& A, const Elem& p) {
  std::map<int, Elem> r;
  for (const auto& [mo, c] : p) r[A.hdeg(mo)].emplace(mo, c);
  return r;
}

TEST(Koszul, LeibnizAndSquareZero) {
  std::mt19937 g(17);
  for (const char* js : {fixtures::kExample, fixtures::kThree, fixtures::kCube}) {
    RingSpec R = fixtures::ring(js);
    for (const Algebra& A : {koszul_algebra(R), diagonal_algebra(R)}) {
      for (int it = 0; it < 15; ++it) {
        Elem u = random_elem(g, A), v = random_elem(g, A);
        EXPECT_TRUE(A.diff(A.diff(u)).empty());
        for (const auto& [h, uh] : by_hdeg(A, u)) {
          Elem lhs = A.diff(A.mul(uh, v));
          Elem rhs = A.mul(A.diff(uh), v);
          Elem t = A.mul(uh, A.diff(v));
          rhs = A.add(rhs, h % 2 ? elem_scale(t, Cyc(R.m, Rat(-1))) : t);
          EXPECT_EQ(lhs, rhs);
        }
      }
    }
  }
}

TEST(Koszul, DiagonalDifferential) {
  RingSpec R = fixtures::ring(fixtures::kExample);
  Algebra A = diagonal_algebra(R);
  int n = R.n, c = R.c();
  for (int i = 0; i < c; ++i) {
    EXPECT_EQ(A.diff(A.var(n + 2 * c + i)), elem_sub(A.var(n + c + i), A.var(n + i), R.m));
    Mono y2 = A.one_mono();
    y2[n + 2 * c + i] = 2;
    Elem dy2 = A.diff(Elem{{y2, R.one()}});
    EXPECT_EQ(dy2, A.mul(A.diff(A.var(n + 2 * c + i)), A.var(n + 2 * c + i)));
  }
}

TEST(Koszul, PhiExpandExamples) {
  RingSpec R = fixtures::ring(fixtures::kExample);
  auto t = phi_expand(R, {2, 0});
  ASSERT_EQ(t.size(), 3u);
  for (const auto& p : t) EXPECT_TRUE(p.scalar.is_one());
  auto t11 = phi_expand(R, {1, 1});
  ASSERT_EQ(t11.size(), 4u);
  for (const auto& p : t11) {
    if (p.h1 == Exp{0, 1} && p.h2 == Exp{1, 0})
      EXPECT_EQ(p.scalar, chi(R, R.cf[0], R.cf[1]));
    else
      EXPECT_TRUE(p.scalar.is_one());
  }
  auto t0 = phi_expand(R, {0, 0});
  ASSERT_EQ(t0.size(), 1u);
  EXPECT_TRUE(t0[0].scalar.is_one());
}

TEST(Koszul, PhiCoassociativeAndCounital) {
  RingSpec R = fixtures::ring(fixtures::kThree);
  RingSpec R2 = fixtures::ring(R"({"n":3,"m":4,"qexp":[[0,1,2],[3,0,1],[2,3,0]],"relations":["x1^2","x2^2","x3^2"]})");
  for (const RingSpec* rp : {&R, &R2}) {
    auto rep = verify_phi(*rp, 4);
    EXPECT_TRUE(rep.ok) << rep.failure;
    EXPECT_GT(rep.checks, 10);
  }
}

TEST(Koszul, DiagonalResolution) {
  RingSpec R = fixtures::ring(fixtures::kExample);
  auto rep = verify_diagonal_resolution(R, 6);
  EXPECT_TRUE(rep.ok) << rep.message;
  RingSpec H = fixtures::ring(fixtures::kHyper);
  EXPECT_TRUE(verify_diagonal_resolution(H, 8).ok);
  auto bad = verify_diagonal_resolution(R, 6, true);
  EXPECT_FALSE(bad.ok);
  // e'_i - e_i stops being a boundary (degree 1) and y_i becomes a new class (degree 2)
  EXPECT_EQ(bad.fail_hdeg, 1);
  EXPECT_TRUE(bad.failing_hdegs.count(2));
  RingSpec T = fixtures::ring(fixtures::kThree);
  EXPECT_TRUE(verify_diagonal_resolution(T, 5).ok);
}

TEST(DualPowers, XiMulExamples) {
  RingSpec R = fixtures::ring(R"({"n":2,"m":4,"qexp":[[0,3],[1,0]],"relations":["x1^2"]})");
  auto a = xi_mul(R, {1, 0}, {1, 0});
  EXPECT_EQ(a.scalar, Cyc(4, Rat(2)));
  EXPECT_EQ(a.exponent, (Exp{2, 0}));
  auto b = xi_mul(R, {1, 0}, {0, 1});
  EXPECT_EQ(b.scalar, Cyc::zeta_pow(4, -1));
  EXPECT_EQ(b.exponent, (Exp{1, 1}));
  auto c = xi_mul(R, {0, 0}, {2, 1});
  EXPECT_TRUE(c.scalar.is_one());
  EXPECT_EQ(c.exponent, (Exp{2, 1}));
}

TEST(DualPowers, DividedPowerExamples) {
  RingSpec R = fixtures::ring(fixtures::kExample);
  auto a = xi_divided_power(R, {1, 0}, 3);
  EXPECT_TRUE(a.scalar.is_one());
  EXPECT_EQ(a.exponent, (Exp{3, 0}));
  auto b = xi_divided_power(R, {1, 1}, 0);
  EXPECT_TRUE(b.scalar.is_one());
  EXPECT_EQ(b.exponent, (Exp{0, 0}));
  auto c = xi_divided_power(R, {2, 0}, 2);
  EXPECT_EQ(c.scalar, Cyc(4, Rat(3)));
  EXPECT_EQ(c.exponent, (Exp{4, 0}));
}

TEST(DualPowers, Convolution) {
  RingSpec R = fixtures::ring(fixtures::kExample);
  auto p = convolution_mul(R, xi(R, {1, 0}, R.one()), xi(R, {1, 0}, R.one()));
  EXPECT_EQ(p, xi(R, {2, 0}, Cyc(4, Rat(2))));
  DualElement phi{{Exp{1, 2}, Cyc::zeta_pow(4, 1)}, {Exp{0, 1}, Cyc(4, Rat(3))}};
  EXPECT_EQ(convolution_mul(R, xi(R, {0, 0}, R.one()), phi), phi);
  auto q = convolution_mul(R, xi(R, {1, 0}, R.one()), xi(R, {0, 1}, R.one()));
  auto t = xi_mul(R, {1, 0}, {0, 1});
  EXPECT_EQ(q, xi(R, t.exponent, t.scalar));
}

TEST(DualPowers, DualBasisPairing) {
  // xi^b xi^g evaluated on x^a through the coproduct is the Kronecker delta times the scalar
  RingSpec R = fixtures::ring(fixtures::kExample);
  for (int b0 = 0; b0 < 3; ++b0)
    for (int g1 = 0; g1 < 3; ++g1) {
      Exp b{b0, 1}, g{1, g1};
      auto t = xi_mul(R, b, g);
      Exp a = exp_add(b, g);
      // direct: (xi^b xi^g)(x^a) = c(xi^g, x^b) C(x^b,x^g)^{-1} binom(a,b)
      Cyc direct = chi(R, g, b).inverse() * c_pair(R, b, g).inverse() * Cyc(4, Rat(multi_binomial(a, b)));
      EXPECT_EQ(t.scalar, direct);
    }
}

TEST(DualPowers, VerifyAppendix) {
  for (int order : {1, 2, 4}) {
    int m = order;
    std::string js = R"({"n":2,"m":)" + std::to_string(m) + R"(,"qexp":[[0,1],[)" + std::to_string(m - 1) +
                     R"(,0]],"relations":["x1^2"]})";
    if (m == 1) js = R"({"n":2,"m":1,"relations":["x1^2"]})";
    RingSpec R = fixtures::ring(js);
    auto rep = verify_appendix(R, 4);
    EXPECT_TRUE(rep.ok) << order << " " << rep.failure << " " << rep.witness.dump();
  }
  RingSpec R = fixtures::ring(fixtures::kExample);
  EXPECT_TRUE(verify_appendix(R, 0).ok);
  auto bad = verify_appendix(R, 4, true);
  EXPECT_FALSE(bad.ok);
  EXPECT_EQ(bad.witness.at("k").get<int>(), 2);
}
