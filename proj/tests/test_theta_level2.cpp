#include <algorithm>
#include <map>
#include <set>

#include "doctest.h"
#include "quarticlab/errors.hpp"
#include "quarticlab/perm_group.hpp"
#include "quarticlab/theta_level2.hpp"

using namespace qlab;

namespace {

F2Vector bits(unsigned x) { return {static_cast<std::uint8_t>(x)}; }

AronholdSet image(const SpImage& g, const AronholdSet& s) {
  const QuadFormF2 q0 = parity_form();
  AronholdSet out;
  for (int i = 0; i < 7; ++i) out[i] = shift_of(transform(g, q0.shifted(s[i])));
  std::sort(out.begin(), out.end());
  return out;
}

SpImage compose(const SpImage& a, const SpImage& b) {
  SpImage r;
  for (int c = 0; c < 6; ++c) r[c] = apply(a, b[c]);
  return r;
}

}  // namespace

TEST_CASE("symplectic space and quadratic forms") {
  CHECK(symplectic(F2Vector::unit(1), F2Vector::unit(2)) == 1);
  CHECK(symplectic(F2Vector::unit(2), F2Vector::unit(1)) == 1);
  CHECK(symplectic(F2Vector::unit(1), F2Vector::unit(3)) == 0);
  for (unsigned u = 0; u < 64; ++u) CHECK(symplectic(bits(u), bits(u)) == 0);

  // all 64 refinements: 36 even, 28 odd, each polarizing
  int odd = 0, even = 0;
  for (unsigned b = 0; b < 64; ++b) {
    const QuadFormF2 q(static_cast<std::uint8_t>(b));
    CHECK(q.polarizes());
    (q.is_odd() ? odd : even)++;
  }
  CHECK(odd == 28);
  CHECK(even == 36);

  // the indicator of one nonzero vector is not quadratic
  std::array<std::uint8_t, 64> bad{};
  bad[5] = 1;
  CHECK_THROWS_AS(QuadFormF2::from_table(bad), Error);
}

TEST_CASE("restriction from the lattice") {
  const auto& frame = symplectic_frame();
  for (int c = 1; c <= 6; ++c) CHECK(res(frame.lifts[c - 1]) == F2Vector::unit(c));
  CHECK(res(frame.radical) == F2Vector{});
  CHECK(dot(frame.radical, canonical_class()) == 0);

  const auto pos = enumerate(LatticeKind::PositiveRoots);
  std::set<std::uint8_t> images;
  for (const auto& a : pos) {
    const F2Vector r = res(a);
    CHECK(r.bits != 0);
    images.insert(r.bits);
    CHECK(res(-a) == r);
    CHECK(res(a + frame.radical) == r);
    CHECK(res(a + 2 * alpha(1, 3)) == r);
  }
  CHECK(images.size() == 63);
  CHECK(res(alpha(1, 2) + 2 * alpha(1, 3)) == res(alpha(1, 2)));

  const auto roots = all_roots();
  int mismatches = 0;
  for (const auto& u : roots)
    for (const auto& v : roots) mismatches += symplectic(res(u), res(v)) != (dot(u, v) & 1);
  CHECK(mismatches == 0);

  CHECK_THROWS_AS(res(line(1, 2)), Error);
  CHECK_THROWS_AS(res(basis_vector(0)), Error);
}

TEST_CASE("parity form and theta characteristics") {
  const QuadFormF2 q0 = parity_form();
  CHECK(q0(res(alpha(1, 2))) == 1);
  CHECK(q0(res(alpha(1, 2, 3))) == 0);
  CHECK(q0(F2Vector{}) == 0);
  CHECK(q0.polarizes());
  CHECK(q0.arf() == 0);
  int ones = 0;
  for (unsigned x = 0; x < 64; ++x) ones += q0(bits(x));
  CHECK(ones == 28);
  for (int i = 1; i <= 8; ++i)
    for (int j = i + 1; j <= 8; ++j) CHECK(q0(res(alpha(i, j))) == 1);
  for (int i = 1; i <= 7; ++i)
    for (int j = i + 1; j <= 7; ++j)
      for (int k = j + 1; k <= 7; ++k) CHECK(q0(res(alpha(i, j, k))) == 0);

  const auto t = theta_chars();
  CHECK(t.odd.size() == 28);
  CHECK(t.even.size() == 36);
  CHECK(std::find(t.even.begin(), t.even.end(), F2Vector{}) != t.even.end());
  for (std::size_t i = 0; i < t.odd.size(); ++i) {
    CHECK(t.odd_forms[i].zeros() == 28);
    CHECK(shift_of(t.odd_forms[i]) == t.odd[i]);
  }
  for (std::size_t i = 0; i < t.even.size(); ++i) CHECK(shift_of(t.even_forms[i]) == t.even[i]);

  // lines: two-to-one onto the odd characteristics
  std::map<std::uint8_t, int> hits;
  for (const auto& l : enumerate(LatticeKind::Lines)) {
    const F2Vector v = line_theta(l);
    CHECK(q0(v) == 1);
    hits[v.bits]++;
  }
  CHECK(hits.size() == 28);
  for (const auto& [v, n] : hits) CHECK(n == 2);
  CHECK_THROWS_AS(line_theta(alpha(1, 2)), Error);
}

TEST_CASE("Weyl group modulo 2") {
  const auto gens = weyl_generators();
  std::vector<Perm> full, sym8;
  for (std::size_t g = 0; g < gens.size(); ++g) {
    const SpImage m = reduce_mod2(gens[g]);
    for (unsigned u = 0; u < 64; ++u)
      for (unsigned v = 0; v < 64; ++v) CHECK(symplectic(apply(m, bits(u)), apply(m, bits(v))) == symplectic(bits(u), bits(v)));
    Perm p(64);
    for (unsigned x = 0; x < 64; ++x) p[x] = apply(m, bits(x)).bits;
    full.push_back(p);
    if (g < 28) sym8.push_back(p);
  }
  // surjective onto Sp(6,2) with kernel of order 2; Sigma_8 embeds
  CHECK(PermGroup(64, full).order() == 1451520);
  CHECK(PermGroup(64, sym8).order() == 40320);

  const QuadFormF2 q0 = parity_form();
  for (int g = 0; g < 28; ++g) CHECK(transform(reduce_mod2(gens[g]), q0) == q0);
  int moved = 0;
  for (int g = 28; g < 63; ++g) moved += !(transform(reduce_mod2(gens[g]), q0) == q0);
  CHECK(moved == 35);

  const auto w0 = center_elements()[1];
  const SpImage w0bar = reduce_mod2(w0);
  for (int c = 1; c <= 6; ++c) CHECK(w0bar[c - 1] == F2Vector::unit(c));

  // the line map intertwines the two actions
  for (const auto& g : gens) {
    const SpImage m = reduce_mod2(g);
    for (const auto& l : enumerate(LatticeKind::Lines))
      CHECK(line_theta(g.apply(l)) == shift_of(transform(m, q0.shifted(line_theta(l)))));
  }
}

TEST_CASE("Aronhold sets") {
  const auto sets = aronhold_enumerate();
  CHECK(sets.size() == 288);
  std::set<AronholdSet> unique(sets.begin(), sets.end());
  CHECK(unique.size() == 288);
  for (const auto& s : sets) CHECK(is_aronhold(s));

  // full scan over C(28,7) with a plain parity table
  const QuadFormF2 q0 = parity_form();
  std::array<int, 64> parity{};
  for (unsigned x = 0; x < 64; ++x) parity[x] = q0(bits(x));
  std::vector<unsigned> odd;
  for (unsigned x = 0; x < 64; ++x)
    if (parity[x]) odd.push_back(x);
  REQUIRE(odd.size() == 28);
  std::set<AronholdSet> brute;
  std::array<int, 7> idx{0, 1, 2, 3, 4, 5, 6};
  while (true) {
    bool ok = true;
    for (int i = 0; i < 7 && ok; ++i)
      for (int j = i + 1; j < 7 && ok; ++j)
        for (int k = j + 1; k < 7 && ok; ++k) ok = parity[odd[idx[i]] ^ odd[idx[j]] ^ odd[idx[k]]] == 0;
    if (ok) {
      AronholdSet s;
      for (int i = 0; i < 7; ++i) s[i] = bits(odd[idx[i]]);
      brute.insert(s);
    }
    int i = 6;
    while (i >= 0 && idx[i] == 21 + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < 7; ++j) idx[j] = idx[j - 1] + 1;
  }
  CHECK(brute == unique);

  AronholdSet dup = sets[0];
  dup[1] = dup[0];
  CHECK_FALSE(is_aronhold(dup));

  // random Weyl elements permute the Aronhold sets
  const auto gens = weyl_generators();
  SplitMix64 rng(99);
  for (int t = 0; t < 5; ++t) {
    SpImage g = reduce_mod2(WeylElement::identity());
    for (int n = 0; n < 30; ++n) g = compose(reduce_mod2(gens[rng.below(gens.size())]), g);
    std::set<AronholdSet> mapped;
    for (const auto& s : sets) mapped.insert(image(g, s));
    CHECK(mapped == unique);
  }
}
