#include <gtest/gtest.h>

#include <random>

#include "skewci/validate.hpp"

using namespace skewci;

static RingSpec ring(const std::string& js) {
  return ring_from_json(nlohmann::json::parse(js));
}

// C_i[x,y]/(x^2,y^2): x1 x2 = i x2 x1
static const char* kExample = R"({"n":2,"m":4,"qexp":[[0,1],[3,0]],"relations":["x1^2","x2^2"]})";

TEST(Colorcore, ChiExamples) {
  RingSpec R = ring(kExample);
  EXPECT_EQ(chi(R, {1, 0}, {0, 1}), Cyc::zeta_pow(4, 1));
  EXPECT_EQ(chi(R, {0, 1}, {1, 0}), Cyc::zeta_pow(4, 3));
  EXPECT_EQ(chi(R, {1, 1}, {1, 0}), Cyc::zeta_pow(4, 3));
  EXPECT_THROW(chi(R, {1}, {1, 0}), std::invalid_argument);
}

TEST(Colorcore, CPairExamples) {
  RingSpec R = ring(R"({"n":2,"m":4,"qexp":[[0,3],[1,0]],"relations":["x1^2"]})");
  EXPECT_TRUE(c_pair(R, {1, 0}, {0, 1}).is_one());
  EXPECT_EQ(c_pair(R, {0, 1}, {1, 0}), Cyc::zeta_pow(4, 1));
  EXPECT_EQ(c_pair(R, {0, 3}, {2, 0}), Cyc(4, Rat(-1)));
}

TEST(Colorcore, PolyMulExamples) {
  RingSpec R = ring(R"({"n":2,"m":2,"qexp":[[0,1],[1,0]],"relations":["x1^2"]})");
  Algebra Q = skew_poly_ring(R);
  EXPECT_EQ(poly_mul(Q, parse_poly(Q, "x2"), parse_poly(Q, "x1")), parse_poly(Q, "-x1*x2"));
  Elem s = parse_poly(Q, "x1 + x2");
  EXPECT_EQ(poly_mul(Q, s, s), parse_poly(Q, "x1^2 + x2^2"));
  EXPECT_EQ(poly_mul(Q, Q.one(), s), s);
}

static RingSpec random_ring(std::mt19937& g, int n, int m) {
  RingSpec R;
  R.n = n;
  R.m = m;
  R.a.assign(n, std::vector<int>(n, 0));
  std::uniform_int_distribution<int> d(0, m - 1);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      R.a[i][j] = d(g);
      R.a[j][i] = int(mod_floor(-R.a[i][j], m));
    }
  R.d.assign(n, 1);
  return R;
}

static Exp random_exp(std::mt19937& g, int n, int hi = 3) {
  std::uniform_int_distribution<int> d(0, hi);
  Exp e(n);
  for (auto& x : e) x = d(g);
  return e;
}

TEST(Colorcore, BicharacterProperties) {
  std::mt19937 g(11);
  for (int it = 0; it < 40; ++it) {
    RingSpec R = random_ring(g, 3, it % 2 ? 4 : 6);
    Exp a = random_exp(g, 3), a2 = random_exp(g, 3), b = random_exp(g, 3);
    EXPECT_TRUE(chi(R, a, a).is_one());
    EXPECT_EQ(chi(R, a, b), c_pair(R, a, b) * c_pair(R, b, a).inverse());
    EXPECT_EQ(c_pair(R, exp_add(a, a2), b), c_pair(R, a, b) * c_pair(R, a2, b));
    EXPECT_EQ(chi(R, exp_add(a, a2), b), chi(R, a, b) * chi(R, a2, b));
  }
}

static Elem random_poly(std::mt19937& g, const Algebra& Q) {
  std::uniform_int_distribution<int> c(-3, 3);
  Elem p;
  for (int t = 0; t < 3; ++t) elem_add(p, random_exp(g, Q.size(), 2), Cyc(Q.m, Rat(c(g))) + Cyc::zeta_pow(Q.m, c(g)));
  return p;
}

TEST(Colorcore, PolyMulAssociativeAndNormal) {
  std::mt19937 g(5);
  for (int it = 0; it < 25; ++it) {
    RingSpec R = random_ring(g, 3, 4);
    Algebra Q = skew_poly_ring(R);
    Elem p = random_poly(g, Q), q = random_poly(g, Q), r = random_poly(g, Q);
    EXPECT_EQ(Q.mul(Q.mul(p, q), r), Q.mul(p, Q.mul(q, r)));
    Exp f = random_exp(g, 3);
    Elem fm{{f, Cyc(4, Rat(1))}};
    for (int j = 0; j < 3; ++j) {
      Elem lhs = Q.mul(fm, Q.var(j));
      Elem rhs = elem_scale(Q.mul(Q.var(j), fm), chi(R, f, unit_exp(3, j)));
      EXPECT_EQ(lhs, rhs);
    }
    Exp a = random_exp(g, 3), b = random_exp(g, 3);
    Elem prod = Q.mul(Elem{{a, Cyc(4, Rat(1))}}, Elem{{b, Cyc(4, Rat(1))}});
    ASSERT_EQ(prod.size(), 1u);
    EXPECT_EQ(Q.color(prod.begin()->first), exp_add(a, b));
  }
}

TEST(Colorcore, ValidateRing) {
  RingSpec R = ring(kExample);
  auto rep = validate_ring(R);
  EXPECT_TRUE(rep.ok) << rep.error;
  EXPECT_EQ(rep.cutoff, 8);
  EXPECT_EQ(rep.hilbert, (std::vector<long>{1, 2, 1, 0, 0, 0, 0, 0, 0}));
  RingSpec bad = ring(R"({"n":2,"m":4,"qexp":[[0,1],[3,0]],"relations":["x1^2","x1^2"]})");
  rep = validate_ring(bad);
  EXPECT_FALSE(rep.ok);
  EXPECT_EQ(rep.mismatch_degree, 2);
  RingSpec lin = ring(R"({"n":2,"m":2,"qexp":[[0,1],[1,0]],"relations":["x1+x2"]})");
  rep = validate_ring(lin);
  EXPECT_FALSE(rep.ok);
  EXPECT_NE(rep.error.find("color"), std::string::npos);
}

TEST(Colorcore, ParserErrors) {
  RingSpec R = ring(kExample);
  Algebra Q = skew_poly_ring(R);
  try {
    parse_poly(Q, "x1 +\n  x7");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line, 2);
    EXPECT_EQ(e.col, 3);
  }
  EXPECT_THROW(parse_poly(Q, "x1 * (x2"), ParseError);
  EXPECT_EQ(parse_poly(Q, "z^2*x1 + x1"), Elem{});
  EXPECT_EQ(Q.str(parse_poly(Q, "3/2*x2*x1")), "(-3/2*z)*x1*x2");
}

TEST(Colorcore, JsonRoundTrip) {
  RingSpec R = ring(kExample);
  RingSpec R2 = ring_from_json(ring_to_json(R));
  EXPECT_EQ(R2.a, R.a);
  EXPECT_EQ(R2.f, R.f);
  EXPECT_THROW(ring(R"({"n":2,"m":4,"qexp":[[0,1],[1,0]],"relations":["x1^2"]})"), std::invalid_argument);
}
