#include <algorithm>

#include "doctest.h"
#include "quarticlab/binary_forms.hpp"
#include "quarticlab/linalg.hpp"
#include "quarticlab/projective.hpp"
#include "quarticlab/rng.hpp"
#include "test_support.hpp"

using namespace qlab;
using namespace qlab::testing;

namespace {

SparseForm<Fp> random_form(const PrimeField& f, int num_vars, int degree, SplitMix64& rng) {
  std::vector<Term<Fp>> terms;
  for (const auto& m : monomials_of_degree(num_vars, degree)) terms.push_back({m, f.element(rng.below(f.size()))});
  return SparseForm<Fp>(f, num_vars, degree, std::move(terms));
}

}  // namespace

TEST_CASE("field basics") {
  const PrimeField f7(7);
  CHECK((f7.from_int(3) * f7.from_int(5)).value() == 1);
  CHECK(f7.from_int(-1).value() == 6);
  CHECK((f7.from_int(3) / f7.from_int(3)).is_one());
  CHECK_THROWS_AS(f7.zero().inverse(), Error);
  CHECK_THROWS_AS(PrimeField(3), Error);
  CHECK_THROWS_AS(PrimeField(9), Error);
  CHECK_THROWS_AS(f7.one() + PrimeField(11).one(), Error);

  const QuadraticExtField ext(101);
  CHECK(ext.non_residue() == 2);
  const Fp2 i = ext.generator_i();
  CHECK(i * i == ext.from_int(2));
  const Fp2 z = ext.parse("3+5i");
  CHECK(z * z.inverse() == ext.one());
  CHECK(ext.parse(z.to_string()) == z);
  CHECK(ext.parse("-i") == -i);

  for (std::uint32_t x = 0; x < 101; ++x) {
    const Fp v(x, 101);
    const Fp2 r = sqrt_in_extension(v, ext);
    CHECK(r * r == ext.embed(v));
    if (auto s = v.sqrt()) CHECK(*s * *s == v);
  }

  const RationalField q;
  CHECK(q.parse("6/14") == Rational(3, 7));
  CHECK(Rational(3, 7).to_string() == "3/7");
  CHECK_THROWS_AS(q.parse("1/0"), Error);
}

TEST_CASE("rank_and_kernel") {
  const PrimeField f7(7);
  SUBCASE("identity") {
    const auto rk = rank_and_kernel(Matrix<Fp>::identity(f7, 2));
    CHECK(rk.rank == 2);
    CHECK(rk.kernel_basis.empty());
  }
  SUBCASE("single relation") {
    const Matrix<Fp> m(f7, {{f7.one(), f7.one()}});
    const auto rk = rank_and_kernel(m);
    CHECK(rk.rank == 1);
    REQUIRE(rk.kernel_basis.size() == 1);
    CHECK(rk.kernel_basis[0] == std::vector<Fp>{f7.from_int(-1), f7.one()});
  }
  SUBCASE("cube octad Veronese rank against elimination oracle") {
    const PrimeField f(101);
    std::vector<std::vector<std::int64_t>> ints;
    std::vector<std::vector<Fp>> rows;
    for (const auto& p : cube_points()) {
      ints.push_back(veronese_row(p));
      std::vector<Fp> row;
      for (auto x : ints.back()) row.push_back(f.from_int(x));
      rows.push_back(row);
    }
    const int oracle = rank_mod_p(ints, 101);
    CHECK(oracle == 7);
    const auto rk = rank_and_kernel(Matrix<Fp>(f, rows));
    CHECK(rk.rank == 7);
    CHECK(rk.kernel_basis.size() == 3);
  }
  SUBCASE("kernel vectors are annihilated and output is deterministic") {
    const PrimeField f(101);
    SplitMix64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t r = 1 + rng.below(6), c = 1 + rng.below(7);
      Matrix<Fp> m(f, r, c);
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = f.element(rng.below(3));  // low entropy: rank deficits
      const auto a = rank_and_kernel(m);
      const auto b = rank_and_kernel(m);
      CHECK(a.rank + a.kernel_basis.size() == c);
      CHECK(a.kernel_basis == b.kernel_basis);
      for (const auto& v : a.kernel_basis)
        for (const auto& x : m.apply(v)) CHECK(x.is_zero());
    }
  }
  SUBCASE("mixed fields") {
    CHECK_THROWS_AS(Matrix<Fp>(f7, {{f7.one(), PrimeField(11).one()}}), Error);
  }
}

TEST_CASE("det_linear_symmetric") {
  const RationalField q;
  auto diag = [&](std::vector<long> d) {
    Matrix<Rational> m(q, d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = Rational(d[i]);
    return m;
  };
  auto [x, y, z] = variables<Rational, 3>(q);

  SUBCASE("zero net") {
    const auto zero = diag({0, 0, 0, 0});
    CHECK(det_linear_symmetric(zero, zero, zero).is_zero());
  }
  SUBCASE("diagonal net, hand expansion") {
    const auto det = det_linear_symmetric(diag({1, 0, 0, -1}), diag({0, 1, 0, -1}), diag({0, 0, 1, -1}));
    CHECK(det == -(x * y * z * (x + y + z)));
  }
  SUBCASE("1x1") {
    const auto det = det_linear_symmetric(diag({2}), diag({-3}), diag({5}));
    CHECK(det == Rational(2) * x + Rational(-3) * y + Rational(5) * z);
  }
  SUBCASE("agrees with pointwise determinants") {
    const PrimeField f(101);
    SplitMix64 rng(11);
    std::array<Matrix<Fp>, 3> ms{Matrix<Fp>(f, 4, 4), Matrix<Fp>(f, 4, 4), Matrix<Fp>(f, 4, 4)};
    for (auto& m : ms)
      for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) m(i, j) = m(j, i) = f.element(rng.below(101));
    const auto det = det_linear_symmetric(ms[0], ms[1], ms[2]);
    CHECK(det.degree() == 4);
    for (int t = 0; t < 20; ++t) {
      const std::vector<Fp> pt{f.element(rng.below(101)), f.element(rng.below(101)), f.element(rng.below(101))};
      const auto m = pt[0] * ms[0] + pt[1] * ms[1] + pt[2] * ms[2];
      CHECK(det(pt) == determinant(m));
    }
  }
  SUBCASE("errors") {
    Matrix<Rational> ns = diag({1, 1});
    ns(0, 1) = Rational(1);
    CHECK_THROWS_AS(det_linear_symmetric(ns, ns, ns), Error);
  }
}

TEST_CASE("gradient") {
  const PrimeField f(101);
  auto [x, y, z, w] = variables<Fp, 4>(f);
  SUBCASE("Fermat") {
    const auto g = gradient(x.pow(4) + y.pow(4) + z.pow(4) + w.pow(4));
    const Fp four = f.from_int(4);
    CHECK(g[0] == four * x.pow(3));
    CHECK(g[3] == four * w.pow(3));
  }
  SUBCASE("constant") {
    for (const auto& d : gradient(SparseForm<Fp>::constant(f.from_int(9), 3))) CHECK(d.is_zero());
  }
  SUBCASE("xyz(x+y+z) against finite differences") {
    auto [a, b, c] = variables<Fp, 3>(f);
    const auto form = a * b * c * (a + b + c);
    const auto grad = gradient(form);
    const std::int64_t p = 101;
    auto direct = [&](std::array<std::int64_t, 3> v) { return mod(v[0] * v[1] % p * v[2] % p * (v[0] + v[1] + v[2]), p); };
    SplitMix64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
      std::array<std::int64_t, 3> pt{(std::int64_t)rng.below(p), (std::int64_t)rng.below(p), (std::int64_t)rng.below(p)};
      for (int i = 0; i < 3; ++i) {
        // g(h) = F(pt + h e_i) has degree <= 4; its h^1 coefficient is the partial.
        // Lagrange: g'(0) = sum_k g(h_k) * L_k'(0) over nodes h = 0..4.
        std::int64_t deriv = 0;
        for (int k = 0; k <= 4; ++k) {
          auto shifted = pt;
          shifted[i] += k;
          // L_k'(0) = sum_{m != k} prod_{l != k, m} (0 - l) / prod_{l != k} (k - l)
          std::int64_t denom = 1;
          for (int l = 0; l <= 4; ++l)
            if (l != k) denom = mod(denom * (k - l), p);
          std::int64_t numer = 0;
          for (int m = 0; m <= 4; ++m) {
            if (m == k) continue;
            std::int64_t prod = 1;
            for (int l = 0; l <= 4; ++l)
              if (l != k && l != m) prod = mod(prod * (-l), p);
            numer = mod(numer + prod, p);
          }
          deriv = mod(deriv + direct(shifted) * numer % p * powmod(denom, p - 2, p), p);
        }
        const std::vector<Fp> at{f.from_int(pt[0]), f.from_int(pt[1]), f.from_int(pt[2])};
        CHECK(grad[i](at).value() == deriv);
      }
    }
  }
  SUBCASE("Euler identity on random forms") {
    SplitMix64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
      const int n = 2 + static_cast<int>(rng.below(3));
      const int d = 1 + static_cast<int>(rng.below(6));
      const auto form = random_form(f, n, d, rng);
      const auto grad = gradient(form);
      std::vector<Fp> pt;
      for (int i = 0; i < n; ++i) pt.push_back(f.element(rng.below(101)));
      Fp lhs = f.zero();
      for (int i = 0; i < n; ++i) lhs += pt[i] * grad[i](pt);
      CHECK(lhs == f.from_int(d) * form(pt));
    }
  }
}

TEST_CASE("binary_square_root") {
  SUBCASE("(s^2 + t^2)^2 over Q") {
    const RationalField q;
    auto [s, t] = variables<Rational, 2>(q);
    const auto g = s * s + t * t;
    const auto r = binary_square_root(g * g);
    REQUIRE(r);
    CHECK(r->scale == Rational(1));
    CHECK(r->root == g);
  }
  SUBCASE("s^4 + s^3 t is not a square") {
    const RationalField q;
    auto [s, t] = variables<Rational, 2>(q);
    CHECK_FALSE(binary_square_root(s.pow(4) + s.pow(3) * t));
  }
  SUBCASE("3 (s^2 + st + t^2)^2 over F_101") {
    const PrimeField f(101);
    auto [s, t] = variables<Fp, 2>(f);
    const auto g = s * s + s * t + t * t;
    const auto r = binary_square_root(f.from_int(3) * (g * g));
    REQUIRE(r);
    CHECK(r->scale == f.from_int(3));
    CHECK(r->root == g);
  }
  SUBCASE("root with t-power factor") {
    const PrimeField f(101);
    auto [s, t] = variables<Fp, 2>(f);
    const auto g = t * (s + f.from_int(4) * t);
    const auto r = binary_square_root(f.from_int(7) * (g * g));
    REQUIRE(r);
    CHECK(r->root == g);
    CHECK_FALSE(binary_square_root(t * s.pow(3)));
  }
  SUBCASE("odd degree is an error") {
    const PrimeField f(101);
    auto [s, t] = variables<Fp, 2>(f);
    CHECK_THROWS_AS(binary_square_root(s.pow(3)), Error);
  }
  SUBCASE("reconstruction property") {
    const PrimeField f(101);
    SplitMix64 rng(9);
    for (int trial = 0; trial < 50; ++trial) {
      const int d = 1 + static_cast<int>(rng.below(8));
      auto g = random_form(f, 2, d, rng);
      if (g.is_zero()) continue;
      const Fp c = f.element(1 + rng.below(100));
      const auto sq = c * (g * g);
      const auto r = binary_square_root(sq);
      REQUIRE(r);
      CHECK(r->root.leading_term().coefficient.is_one());
      CHECK(r->scale * (r->root * r->root) == sq);
      // perturbing one coefficient almost always destroys squareness
      auto bumped = sq + SparseForm<Fp>(f, 2, 2 * d, {{sq.leading_term().exponents, f.one()}});
      if (auto r2 = binary_square_root(bumped)) CHECK(r2->scale * (r2->root * r2->root) == bumped);
    }
  }
}

TEST_CASE("resultant_eliminate") {
  const PrimeField f(101);
  auto [x, y, z] = variables<Fp, 3>(f);
  SUBCASE("forms independent of the eliminated variable are rejected") {
    CHECK_THROWS_AS(resultant_eliminate(x, y, 2), Error);
  }
  SUBCASE("Res_z(z^2 - xy, z) = -xy") {
    const auto r = resultant_eliminate(z * z - x * y, z, 2);
    auto [s, t] = variables<Fp, 2>(f);
    CHECK(r == -(s * t));
  }
  SUBCASE("field too small") {
    const PrimeField f5(5);
    auto [a, b, c] = variables<Fp, 3>(f5);
    CHECK_THROWS_AS(resultant_eliminate(c.pow(4) + a.pow(4), c.pow(4) + a * b.pow(3), 2), Error);
  }
  SUBCASE("double-conic pencil gives a perfect square") {
    SplitMix64 rng(21);
    auto quartic = random_form(f, 3, 4, rng) + z.pow(4);
    auto conic = random_form(f, 3, 2, rng);
    const auto r = resultant_eliminate(quartic, quartic + conic * conic, 2);
    CHECK(r.degree() == 16);
    CHECK(binary_square_root(r));
  }
  SUBCASE("vanishing iff common root, brute force over F_{p^2}") {
    const PrimeField small(31);
    const QuadraticExtField ext(31);
    SplitMix64 rng(33);
    auto [a, b, c] = variables<Fp, 3>(small);
    int positives = 0;
    for (int instance = 0; instance < 50; ++instance) {
      const auto pf = random_form(small, 3, 2, rng) + c * c;
      const auto pg = random_form(small, 3, 2, rng) + small.from_int(1 + rng.below(30)) * c * c;
      if (pf.coefficient(Monomial{0, 0, 2}).is_zero() || pg.coefficient(Monomial{0, 0, 2}).is_zero()) continue;
      const auto res = resultant_eliminate(pf, pg, 2);
      const auto ef = extend(pf, ext), eg = extend(pg, ext);
      for (std::uint32_t line = 0; line < 31; ++line) {
        const std::vector<Fp> at{small.one(), Fp(line, 31)};
        const bool vanishes = res(at).is_zero();
        bool common = false;
        for (std::uint64_t k = 0; k < ext.size() && !common; ++k) {
          const std::vector<Fp2> pt{ext.one(), ext.from_int(line), ext.element(k)};
          common = ef(pt).is_zero() && eg(pt).is_zero();
        }
        CHECK(vanishes == common);
        positives += common;
      }
    }
    CHECK(positives > 0);
  }
}

TEST_CASE("root_multiplicity and quadratic roots") {
  const PrimeField f(101);
  const QuadraticExtField ext(101);
  auto [s, t] = variables<Fp, 2>(f);
  const auto form = (s - f.from_int(3) * t).pow(3) * t * t;
  CHECK(root_multiplicity(form, ProjPoint<Fp>::from_ints(f, {3, 1})) == 3);
  CHECK(root_multiplicity(form, ProjPoint<Fp>::from_ints(f, {1, 0})) == 2);
  CHECK(root_multiplicity(form, ProjPoint<Fp>::from_ints(f, {0, 1})) == 0);

  // s^2 - 2 t^2 has no rational root (2 is a non-residue mod 101)
  const auto roots = binary_quadratic_roots(s * s - f.from_int(2) * t * t, ext);
  for (const auto& r : roots) {
    CHECK_FALSE(r[1].in_base_field());
    CHECK((r[0] * r[0] - ext.from_int(2) * r[1] * r[1]).is_zero());
  }
  const auto split = binary_quadratic_roots(t * (s + t), ext);
  CHECK(split[0] == ProjPoint<Fp2>({ext.one(), ext.zero()}));
  CHECK(split[1] == ProjPoint<Fp2>({ext.one(), ext.from_int(-1)}));
}

TEST_CASE("span_dimension") {
  const PrimeField f(101);
  CHECK(span_dimension(std::vector{ProjPoint<Fp>::from_ints(f, {1, 0, 0, 0})}) == 0);
  CHECK(span_dimension(std::vector{point_of(f, {1, 1, 1, 1}), point_of(f, {1, 1, -1, 1}), point_of(f, {1, -1, 1, 1}),
                                   point_of(f, {1, -1, -1, 1})}) == 2);
  CHECK(span_dimension(std::vector{ProjPoint<Fp>::from_ints(f, {1, 0, 0, 0}), ProjPoint<Fp>::from_ints(f, {0, 1, 0, 0}),
                                   ProjPoint<Fp>::from_ints(f, {0, 0, 1, 0}), ProjPoint<Fp>::from_ints(f, {1, 2, 3, 4})}) == 3);
  CHECK_THROWS_AS(span_dimension(std::vector<ProjPoint<Fp>>{}), Error);
}

TEST_CASE("projective points and enumeration") {
  const PrimeField f(7);
  CHECK(ProjPoint<Fp>::from_ints(f, {0, 3, 6}) == ProjPoint<Fp>::from_ints(f, {0, 1, 2}));
  CHECK_THROWS_AS(ProjPoint<Fp>::from_ints(f, {0, 0, 0}), Error);
  std::uint64_t count = 0;
  std::vector<ProjPoint<Fp>> seen;
  for_each_point<Fp>(f, 2, [&](std::span<const Fp> c) {
    ++count;
    seen.emplace_back(std::vector<Fp>(c.begin(), c.end()));
  });
  CHECK(count == 57);
  CHECK(count == projective_space_size<Fp>(f, 2));
  CHECK(seen.front() == ProjPoint<Fp>::from_ints(f, {1, 0, 0}));
  CHECK(seen.back() == ProjPoint<Fp>::from_ints(f, {0, 0, 1}));
  std::sort(seen.begin(), seen.end());
  CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
}
