#pragma once

// Binary forms f(s, t): perfect-square extraction, roots, root multiplicities,
// and the resultant of two ternary forms as a binary form.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "quarticlab/errors.hpp"
#include "quarticlab/field.hpp"
#include "quarticlab/form.hpp"
#include "quarticlab/linalg.hpp"
#include "quarticlab/projective.hpp"

namespace qlab {

// f = scale * root^2 with root monic (leading graded-lex coefficient 1).
template <FieldElement K>
struct BinarySquareRoot {
  K scale;
  SparseForm<K> root;
};

namespace detail {

// Coefficient list of a binary form of degree d: c[i] multiplies s^(d-i) t^i.
template <FieldElement K>
std::vector<K> binary_coefficients(const SparseForm<K>& f) {
  std::vector<K> c(f.degree() + 1, f.field().zero());
  for (const auto& t : f.terms()) c[t.exponents[1]] = t.coefficient;
  return c;
}

template <FieldElement K>
SparseForm<K> binary_from_coefficients(const FieldOf<K>& field, const std::vector<K>& c) {
  const int d = static_cast<int>(c.size()) - 1;
  std::vector<Term<K>> terms;
  for (int i = 0; i <= d; ++i) {
    Monomial m{};
    m[0] = static_cast<std::uint8_t>(d - i);
    m[1] = static_cast<std::uint8_t>(i);
    terms.push_back({m, c[i]});
  }
  return SparseForm<K>(field, 2, d, std::move(terms));
}

}  // namespace detail

// Returns nullopt when f is not a constant times a square. Characteristic 2 is
// rejected, as is an odd degree.
template <FieldElement K>
std::optional<BinarySquareRoot<K>> binary_square_root(const SparseForm<K>& f) {
  require(f.num_vars() == 2, "binary_square_root expects a binary form");
  require(!f.is_zero(), "binary_square_root of the zero form");
  require(f.degree() % 2 == 0, "binary_square_root needs an even degree, got " + std::to_string(f.degree()));
  const auto field = f.field();
  require(field.characteristic() != 2, "characteristic 2 is not supported");

  const auto a = detail::binary_coefficients(f);
  const int deg = f.degree();
  int k = 0;
  while (a[k].is_zero()) ++k;  // f = t^k * h, h(1, 0) != 0
  if (k % 2 != 0) return std::nullopt;

  const K scale = a[k];
  const K inv_scale = scale.inverse();
  const int hdeg = deg - k;
  const int m = hdeg / 2;
  // h/scale = s^hdeg + h[1] s^(hdeg-1) + ... in the dehomogenized variable s.
  std::vector<K> h(hdeg + 1, field.zero());
  for (int j = 0; j <= hdeg; ++j) h[j] = a[k + j] * inv_scale;

  const K inv_two = field.from_int(2).inverse();
  std::vector<K> g(m + 1, field.zero());
  g[0] = field.one();
  for (int j = 1; j <= m; ++j) {
    K acc = h[j];
    for (int l = 1; l < j; ++l) acc -= g[l] * g[j - l];
    g[j] = acc * inv_two;
  }
  // Verify every coefficient of g^2 against h, including the ones not used above.
  for (int j = 0; j <= hdeg; ++j) {
    K sq = field.zero();
    for (int l = std::max(0, j - m); l <= std::min(j, m); ++l) sq += g[l] * g[j - l];
    if (!(sq == h[j])) return std::nullopt;
  }

  std::vector<K> root(deg / 2 + 1, field.zero());
  for (int j = 0; j <= m; ++j) root[j + k / 2] = g[j];
  BinarySquareRoot<K> out{scale, detail::binary_from_coefficients(field, root)};
  if (!((out.root * out.root).scaled(scale) == f)) {
    raise(ErrorKind::InvariantViolation, "square root reconstruction failed");
  }
  return out;
}

// Square root of x in F_{p^2}; exists for every x in F_p.
inline Fp2 sqrt_in_extension(const Fp& x, const QuadraticExtField& ext) {
  if (auto r = x.sqrt()) return ext.embed(*r);
  // x / n is a square because n is the smallest non-residue.
  const Fp n = x.field().from_int(ext.non_residue());
  const auto r = (x / n).sqrt();
  if (!r) raise(ErrorKind::InvariantViolation, "non-residue quotient is not a square");
  return ext.embed(*r) * ext.generator_i();
}

// The two roots (s:t) of a nonzero binary quadratic over F_p, in F_{p^2};
// a double root is returned twice.
inline std::array<ProjPoint<Fp2>, 2> binary_quadratic_roots(const SparseForm<Fp>& g, const QuadraticExtField& ext) {
  require(g.num_vars() == 2 && g.degree() == 2 && !g.is_zero(), "expected a nonzero binary quadratic");
  const auto c = detail::binary_coefficients(g);
  const auto mk = [&](Fp2 s, Fp2 t) { return ProjPoint<Fp2>({s, t}); };
  if (c[0].is_zero()) {
    // g = t * (c1 s + c2 t)
    const auto other = c[1].is_zero() ? mk(ext.one(), ext.zero()) : mk(ext.embed(-c[2]), ext.embed(c[1]));
    return {mk(ext.one(), ext.zero()), other};
  }
  const Fp disc = c[1] * c[1] - c[0] * c[2] * g.field().from_int(4);
  const Fp2 root_disc = sqrt_in_extension(disc, ext);
  const Fp2 denom = ext.embed(c[0] * g.field().from_int(2)).inverse();
  const Fp2 x1 = (ext.embed(-c[1]) + root_disc) * denom;
  const Fp2 x2 = (ext.embed(-c[1]) - root_disc) * denom;
  return {mk(x1, ext.one()), mk(x2, ext.one())};
}

// Multiplicity of the point (a:b) as a root of the binary form f.
template <FieldElement K>
int root_multiplicity(const SparseForm<K>& f, const ProjPoint<K>& root) {
  require(f.num_vars() == 2 && root.size() == 2, "root_multiplicity needs a binary form and a point of P^1");
  require(!f.is_zero(), "root_multiplicity of the zero form");
  const auto field = f.field();
  // s -> a u + c v, t -> b u + d v with det != 0 sends (a:b) to v = 0, so the
  // multiplicity is the lowest power of v.
  const K a = root[0], b = root[1];
  const K c = a.is_zero() ? field.one() : field.zero();
  const K d = a.is_zero() ? field.zero() : field.one();
  const auto g = f.linear_substitute({{a, c}, {b, d}});
  int mult = f.degree();
  for (const auto& t : g.terms()) mult = std::min(mult, static_cast<int>(t.exponents[1]));
  return mult;
}

// Res_{x_var}(F, G) of two ternary forms, returned as a binary form in the
// two remaining variables (kept in their original order). The sign convention
// is the Sylvester determinant with F's rows above G's, so Res(z^2 - xy, z) = -xy.
// Both forms must contain the pure power x_var^deg with nonzero coefficient,
// which a generic linear change of coordinates achieves.
template <FieldElement K>
SparseForm<K> resultant_eliminate(const SparseForm<K>& f, const SparseForm<K>& g, int var) {
  require(f.num_vars() == 3 && g.num_vars() == 3, "resultant_eliminate expects ternary forms");
  require(var >= 0 && var < 3, "eliminated variable out of range");
  if (f.field() != g.field()) raise(ErrorKind::FieldMismatch, "resultant of forms over different fields");
  const auto field = f.field();
  const int m = f.degree(), n = g.degree();
  auto pure_power = [&](int d) {
    Monomial mono{};
    mono[var] = static_cast<std::uint8_t>(d);
    return mono;
  };
  require(m >= 1 && n >= 1 && !f.coefficient(pure_power(m)).is_zero() && !g.coefficient(pure_power(n)).is_zero(),
          "both forms need a nonzero pure power of the eliminated variable (apply a generic coordinate change)");

  const int total = m * n;
  const int samples = total + 1;
  std::vector<K> nodes;
  if constexpr (FiniteFieldElement<K>) {
    if (field.size() < static_cast<std::uint64_t>(samples)) {
      raise(ErrorKind::FieldTooSmall, "interpolating a degree-" + std::to_string(total) + " resultant needs at least " +
                                          std::to_string(samples) + " field elements; use a larger prime");
    }
    for (int j = 0; j < samples; ++j) nodes.push_back(field.element(j));
  } else {
    for (int j = 0; j < samples; ++j) nodes.push_back(field.from_int(j));
  }

  int other[2], w = 0;
  for (int v = 0; v < 3; ++v)
    if (v != var) other[w++] = v;

  // Coefficients of F(1, a, z) as a polynomial in z, highest first.
  auto univariate = [&](const SparseForm<K>& h, const K& node) {
    std::vector<K> coeffs(h.degree() + 1, field.zero());
    for (const auto& t : h.terms()) {
      K c = t.coefficient;
      for (int e = 0; e < t.exponents[other[1]]; ++e) c *= node;
      coeffs[h.degree() - t.exponents[var]] += c;
    }
    return coeffs;
  };

  std::vector<K> values;
  for (const auto& node : nodes) {
    const auto fc = univariate(f, node);
    const auto gc = univariate(g, node);
    Matrix<K> syl(field, m + n, m + n);
    for (int r = 0; r < n; ++r)
      for (int i = 0; i <= m; ++i) syl(r, r + i) = fc[i];
    for (int r = 0; r < m; ++r)
      for (int i = 0; i <= n; ++i) syl(n + r, r + i) = gc[i];
    values.push_back(determinant(syl));
  }

  Matrix<K> vander(field, samples, samples);
  for (int r = 0; r < samples; ++r) {
    K pw = field.one();
    for (int c = 0; c < samples; ++c) {
      vander(r, c) = pw;
      pw *= nodes[r];
    }
  }
  const auto coeffs = solve(vander, std::span<const K>(values));
  if (!coeffs) raise(ErrorKind::InvariantViolation, "Vandermonde system is singular");

  std::vector<Term<K>> terms;
  for (int j = 0; j <= total; ++j) {
    Monomial mono{};
    mono[0] = static_cast<std::uint8_t>(total - j);
    mono[1] = static_cast<std::uint8_t>(j);
    terms.push_back({mono, (*coeffs)[j]});
  }
  return SparseForm<K>(field, 2, total, std::move(terms));
}

}  // namespace qlab
