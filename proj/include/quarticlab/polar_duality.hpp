#pragma once

// Polar maps of hypersurfaces, singular loci and multiplicities, dual
// hypersurfaces by interpolation, scans of quartic families for nodal members,
// and everywhere-tangency certificates for pairs of plane curves.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "quarticlab/binary_forms.hpp"
#include "quarticlab/errors.hpp"
#include "quarticlab/field.hpp"
#include "quarticlab/form.hpp"
#include "quarticlab/linalg.hpp"
#include "quarticlab/projective.hpp"

namespace qlab {

template <FieldElement K>
ProjPoint<K> polar_map(const std::vector<SparseForm<K>>& grad, const ProjPoint<K>& pt) {
  require(grad.size() == pt.size(), "point arity differs from the form");
  std::vector<K> img;
  img.reserve(grad.size());
  for (const auto& g : grad) img.push_back(g(pt.span()));
  auto out = ProjPoint<K>::try_make(std::move(img));
  if (!out) raise(ErrorKind::SingularPoint, "gradient vanishes at " + pt.to_string());
  return *out;
}

template <FieldElement K>
ProjPoint<K> polar_map(const SparseForm<K>& f, const ProjPoint<K>& pt) {
  return polar_map(gradient(f), pt);
}

template <FieldElement K>
bool gradient_vanishes(const std::vector<SparseForm<K>>& grad, std::span<const K> pt) {
  for (const auto& g : grad)
    if (!g(pt).is_zero()) return false;
  return true;
}

// Points of P^n(F_q) on {F = 0}, in canonical order.
template <FiniteFieldElement K>
std::vector<ProjPoint<K>> rational_points(const SparseForm<K>& f) {
  std::vector<ProjPoint<K>> out;
  for_each_point<K>(f.field(), f.num_vars() - 1, [&](std::span<const K> c) {
    if (f(c).is_zero()) out.emplace_back(std::vector<K>(c.begin(), c.end()));
  });
  return out;
}

// Common zeros of F and all its partials, in canonical order.
template <FiniteFieldElement K>
std::vector<ProjPoint<K>> singular_points(const SparseForm<K>& f) {
  require(!f.is_zero(), "singular_points of the zero form");
  const auto grad = gradient(f);
  std::vector<ProjPoint<K>> out;
  for_each_point<K>(f.field(), f.num_vars() - 1, [&](std::span<const K> c) {
    if (gradient_vanishes(grad, c) && f(c).is_zero()) out.emplace_back(std::vector<K>(c.begin(), c.end()));
  });
  return out;
}

struct LocalExpansion {
  int multiplicity;            // lowest degree present in the Taylor expansion
  std::size_t quadratic_rank;  // rank of the degree-2 part (as a symmetric matrix)
};

// Taylor expansion of F at pt in the affine chart of pt's leading coordinate.
template <FieldElement K>
LocalExpansion local_expansion(const SparseForm<K>& f, const ProjPoint<K>& pt) {
  const int nv = f.num_vars();
  require(static_cast<int>(pt.size()) == nv, "point arity differs from the form");
  require(!f.is_zero(), "local expansion of the zero form");
  if (!f(pt.span()).is_zero()) raise(ErrorKind::InvalidArgument, pt.to_string() + " is not on the hypersurface");
  const auto field = f.field();
  int lead = 0;
  while (pt[lead].is_zero()) ++lead;
  // x_lead -> u, x_i -> pt_i u + y_i; pt becomes (u = 1, y = 0).
  std::vector<std::vector<K>> subst(nv, std::vector<K>(nv, field.zero()));
  for (int i = 0; i < nv; ++i) {
    subst[i][lead] = pt[i];
    if (i != lead) subst[i][i] = field.one();
  }
  const auto g = f.linear_substitute(subst);
  const int d = f.degree();
  int mult = d;
  for (const auto& t : g.terms()) mult = std::min(mult, d - t.exponents[lead]);

  // degree-2 part in the y variables
  std::vector<int> ys;
  for (int i = 0; i < nv; ++i)
    if (i != lead) ys.push_back(i);
  Matrix<K> quad(field, ys.size(), ys.size());
  const K half = field.from_int(2).inverse();
  for (const auto& t : g.terms()) {
    if (d - t.exponents[lead] != 2) continue;
    std::vector<std::size_t> idx;
    for (std::size_t a = 0; a < ys.size(); ++a)
      for (int e = 0; e < t.exponents[ys[a]]; ++e) idx.push_back(a);
    if (idx[0] == idx[1]) quad(idx[0], idx[0]) += t.coefficient;
    else {
      quad(idx[0], idx[1]) += t.coefficient * half;
      quad(idx[1], idx[0]) += t.coefficient * half;
    }
  }
  return {mult, rank(quad)};
}

template <FieldElement K>
int multiplicity_at(const SparseForm<K>& f, const ProjPoint<K>& pt) {
  return local_expansion(f, pt).multiplicity;
}

// Multiplicity 2 with a nondegenerate quadratic part.
template <FieldElement K>
bool is_node(const SparseForm<K>& f, const ProjPoint<K>& pt) {
  const auto e = local_expansion(f, pt);
  return e.multiplicity == 2 && e.quadratic_rank == pt.size() - 1;
}

struct FitWitness {
  int degree;
  std::size_t monomials;
  std::size_t rank;  // == monomials means no form of this degree fits
};

template <FieldElement K>
struct DualFitReport {
  int degree;
  SparseForm<K> dual_form;  // monic in graded-lex order
  std::size_t sample_count;
  std::vector<FitWitness> witness;  // one entry per degree tried
};

namespace detail {

template <FiniteFieldElement K, class Rng>
void shuffle(std::vector<ProjPoint<K>>& pts, Rng& rng) {
  for (std::size_t i = pts.size(); i > 1; --i) std::swap(pts[i - 1], pts[rng.below(i)]);
}

template <FieldElement K>
std::vector<K> monomial_values(const std::vector<Monomial>& monos, std::span<const K> pt) {
  std::vector<K> row;
  row.reserve(monos.size());
  for (const auto& m : monos) {
    K v = pt[0].field().one();
    for (std::size_t i = 0; i < pt.size(); ++i)
      for (int e = 0; e < m[i]; ++e) v *= pt[i];
    row.push_back(v);
  }
  return row;
}

inline std::size_t monomial_count(int num_vars, int degree) {
  std::size_t c = 1;  // C(degree + n - 1, n - 1)
  for (int i = 1; i < num_vars; ++i) c = c * (degree + i) / i;
  return c;
}

}  // namespace detail

// Smallest-degree form vanishing on the polar image of H, from sampled smooth
// points. The kernel must be one-dimensional at the first degree where it is
// nonzero.
template <FiniteFieldElement K, class Rng>
DualFitReport<K> dual_interpolate(const SparseForm<K>& f, int degree_bound, Rng& rng) {
  require(degree_bound >= 1, "degree bound must be positive");
  const int nv = f.num_vars();
  const auto field = f.field();
  const auto grad = gradient(f);
  auto pts = rational_points(f);
  detail::shuffle(pts, rng);

  const std::size_t wanted = 2 * detail::monomial_count(nv, degree_bound);
  std::vector<ProjPoint<K>> samples;
  std::set<ProjPoint<K>> seen;
  for (const auto& p : pts) {
    if (samples.size() >= wanted) break;
    if (gradient_vanishes(grad, p.span())) continue;
    auto img = polar_map(grad, p);
    if (seen.insert(img).second) samples.push_back(std::move(img));
  }

  DualFitReport<K> report{0, SparseForm<K>(field, nv, 0), samples.size(), {}};
  for (int d = 1; d <= degree_bound; ++d) {
    const auto monos = monomials_of_degree(nv, d);
    if (samples.size() < 2 * monos.size()) {
      raise(ErrorKind::FieldTooSmall, "only " + std::to_string(samples.size()) + " distinct polar images; degree " +
                                          std::to_string(d) + " needs " + std::to_string(2 * monos.size()));
    }
    std::vector<std::vector<K>> rows;
    for (const auto& s : samples) rows.push_back(detail::monomial_values(monos, s.span()));
    const auto rk = rank_and_kernel(Matrix<K>(field, rows));
    report.witness.push_back({d, monos.size(), rk.rank});
    if (rk.kernel_basis.empty()) continue;
    if (rk.kernel_basis.size() > 1) {
      raise(ErrorKind::AmbiguousFit, std::to_string(rk.kernel_basis.size()) + " independent degree-" + std::to_string(d) +
                                         " forms fit the samples");
    }
    if (field.characteristic() <= static_cast<std::uint64_t>(2 * d)) {
      raise(ErrorKind::FieldTooSmall, "characteristic must exceed twice the dual degree " + std::to_string(d));
    }
    std::vector<Term<K>> terms;
    for (std::size_t i = 0; i < monos.size(); ++i) terms.push_back({monos[i], rk.kernel_basis[0][i]});
    SparseForm<K> dual(field, nv, d, std::move(terms));
    dual = dual.scaled(dual.leading_term().coefficient.inverse());
    report.degree = d;
    report.dual_form = std::move(dual);
    return report;
  }
  raise(ErrorKind::NoFit, "no form of degree <= " + std::to_string(degree_bound) + " vanishes on the polar image");
}

// Polar map of the dual sends the polar image of v back to v, for
// sample_count random smooth points v whose image is smooth on the dual.
template <FiniteFieldElement K, class Rng>
bool biduality_check(const SparseForm<K>& f, const SparseForm<K>& dual, int sample_count, Rng& rng,
                     int* checked = nullptr) {
  require(sample_count >= 1, "sample count must be positive");
  require(f.num_vars() == dual.num_vars(), "dual form lives in a different space");
  const auto grad = gradient(f);
  const auto dual_grad = gradient(dual);
  auto pts = rational_points(f);
  detail::shuffle(pts, rng);
  int done = 0;
  bool ok = true;
  for (const auto& v : pts) {
    if (done >= sample_count) break;
    if (gradient_vanishes(grad, v.span())) continue;
    const auto w = polar_map(grad, v);
    if (!dual(w.span()).is_zero()) {
      ok = false;  // not even on the dual
      ++done;
      continue;
    }
    if (gradient_vanishes(dual_grad, w.span())) continue;
    ok = ok && polar_map(dual_grad, w) == v;
    ++done;
  }
  if (checked) *checked = done;
  if (done < sample_count) {
    raise(ErrorKind::FieldTooSmall,
          "only " + std::to_string(done) + " usable points for " + std::to_string(sample_count) + " biduality samples");
  }
  return ok;
}

// F(t) = base + sum_i t_i * params[i]
template <FieldElement K>
struct FamilySpec {
  SparseForm<K> base;
  std::vector<SparseForm<K>> params;

  SparseForm<K> member(std::span<const K> t) const {
    require(t.size() == params.size(), "wrong number of family parameters");
    SparseForm<K> out = base;
    for (std::size_t i = 0; i < params.size(); ++i)
      if (!t[i].is_zero()) out += params[i].scaled(t[i]);
    return out;
  }
};

// x^4+y^4+z^4+w^4 plus the four other quartics invariant under sign changes
// and double transpositions of the coordinates.
template <FieldElement K>
FamilySpec<K> heisenberg_family(const FieldOf<K>& field) {
  auto v = [&](int i) { return SparseForm<K>::variable(field, 4, i); };
  const auto x = v(0), y = v(1), z = v(2), w = v(3);
  auto sq = [](const SparseForm<K>& a) { return a * a; };
  return {sq(sq(x)) + sq(sq(y)) + sq(sq(z)) + sq(sq(w)),
          {sq(x) * sq(y) + sq(z) * sq(w), sq(x) * sq(z) + sq(y) * sq(w), sq(x) * sq(w) + sq(y) * sq(z), x * y * z * w}};
}

// Member of a family singular at pt: solves grad(F(t))(pt) = 0 for the
// coefficients (c_0 : t_1 : ... : t_k) of base and params. Returns nullopt
// unless the solution is unique with c_0 != 0; the result has c_0 = 1.
template <FieldElement K>
std::optional<std::vector<K>> member_singular_at(const FamilySpec<K>& spec, const ProjPoint<K>& pt) {
  const auto field = spec.base.field();
  const std::size_t k = spec.params.size();
  std::vector<std::vector<SparseForm<K>>> grads{gradient(spec.base)};
  for (const auto& p : spec.params) grads.push_back(gradient(p));
  Matrix<K> m(field, pt.size(), k + 1);
  for (std::size_t c = 0; c <= k; ++c)
    for (std::size_t r = 0; r < pt.size(); ++r) m(r, c) = grads[c][r](pt.span());
  const auto rk = rank_and_kernel(m);
  if (rk.kernel_basis.size() != 1) return std::nullopt;
  const auto& v = rk.kernel_basis[0];
  if (v[0].is_zero()) return std::nullopt;
  const K inv = v[0].inverse();
  std::vector<K> t;
  for (std::size_t i = 1; i <= k; ++i) t.push_back(v[i] * inv);
  return t;
}

// Lifts a node found over F_p to the integer point with coordinates in
// (-p/2, p/2] and returns the rational member singular there. Its reduction
// mod p is the member singular at the original node.
inline std::optional<std::vector<Rational>> lift_nodal_member(const FamilySpec<Rational>& spec, const ProjPoint<Fp>& node) {
  const std::int64_t p = node.field().characteristic();
  std::vector<Rational> c;
  for (const auto& x : node.coords()) {
    std::int64_t v = x.value();
    if (v > p / 2) v -= p;
    c.push_back(Rational(v));
  }
  return member_singular_at(spec, ProjPoint<Rational>(std::move(c)));
}

inline std::optional<std::vector<Fp>> reduce(const std::vector<Rational>& values, const PrimeField& f) {
  std::vector<Fp> out;
  for (const auto& v : values) {
    auto r = reduce(v, f);
    if (!r) return std::nullopt;
    out.push_back(*r);
  }
  return out;
}

// All parameter tuples in F_q^k (lexicographic in the element order) whose
// member has exactly `target` singular points, each a node.
template <FiniteFieldElement K>
std::vector<std::vector<K>> nodal_family_search(const FamilySpec<K>& spec, int target) {
  const auto field = spec.base.field();
  const std::size_t k = spec.params.size();
  require(k >= 1 && k <= 4, "nodal_family_search scans at most 4 parameters");
  require(target >= 0, "target must be nonnegative");
  const int nv = spec.base.num_vars();
  for (const auto& p : spec.params)
    require(p.num_vars() == nv && p.degree() == spec.base.degree() && p.field() == field,
            "family forms must share degree, variables and field");

  // values[form][j][point]: j < nv are partials, j == nv is the form itself
  std::vector<std::vector<K>> points;
  for_each_point<K>(field, nv - 1, [&](std::span<const K> c) { points.emplace_back(c.begin(), c.end()); });
  const std::size_t np = points.size();
  std::vector<std::vector<std::vector<K>>> values(k + 1, std::vector<std::vector<K>>(nv + 1));
  for (std::size_t fi = 0; fi <= k; ++fi) {
    const auto& form = fi == 0 ? spec.base : spec.params[fi - 1];
    auto grad = gradient(form);
    grad.push_back(form);
    for (int j = 0; j <= nv; ++j) {
      values[fi][j].reserve(np);
      for (const auto& pt : points) values[fi][j].push_back(grad[j](std::span<const K>(pt)));
    }
  }

  std::vector<std::vector<K>> found;
  std::vector<std::uint64_t> idx(k, 0);
  std::vector<K> t(k, field.zero());
  std::vector<std::size_t> singular;
  while (true) {
    for (std::size_t i = 0; i < k; ++i) t[i] = field.element(idx[i]);
    singular.clear();
    for (std::size_t pi = 0; pi < np && static_cast<int>(singular.size()) <= target; ++pi) {
      bool all_zero = true;
      for (int j = 0; j <= nv && all_zero; ++j) {
        K v = values[0][j][pi];
        for (std::size_t i = 0; i < k; ++i) v += t[i] * values[i + 1][j][pi];
        all_zero = v.is_zero();
      }
      if (all_zero) singular.push_back(pi);
    }
    if (static_cast<int>(singular.size()) == target) {
      const auto member = spec.member(t);
      bool nodes = true;
      for (auto pi : singular) nodes = nodes && is_node(member, ProjPoint<K>(points[pi]));
      if (nodes) found.push_back(t);
    }
    std::size_t pos = k;
    while (pos > 0 && ++idx[pos - 1] == field.size()) idx[--pos] = 0;
    if (pos == 0) break;
  }
  return found;
}

struct ContactPoint {
  ProjPoint<Fp> point;
  int intersection;  // local intersection number of F and G, always even when tangent
};

struct TangencyReport {
  Matrix<Fp> chart;                 // columns: new coordinates in terms of old; center (0:0:1) is column 2
  SparseForm<Fp> resultant;         // Res_z of the transformed forms, binary in the new (x, y)
  BinarySquareRoot<Fp> root;        // resultant = scale * root^2
  int delta_degree;                 // degree of root: total multiplicity of Delta
  std::vector<ContactPoint> contacts;  // rational common zeros, in canonical order
  int rational_delta_degree;        // sum of intersection / 2 over rational contacts
};

namespace detail {

inline SparseForm<Fp> change_coordinates(const SparseForm<Fp>& f, const Matrix<Fp>& t) {
  std::vector<std::vector<Fp>> rows;
  for (std::size_t r = 0; r < t.rows(); ++r) rows.push_back(t.row(r));
  return f.linear_substitute(rows);
}

}  // namespace detail

// Certifies that F and G meet in 2 * Delta: in a random chart Res_z(F, G) is
// scale * g^2, and each rational common zero has even intersection number.
template <class Rng>
TangencyReport tangency_divisor(const SparseForm<Fp>& f, const SparseForm<Fp>& g, Rng& rng) {
  require(f.num_vars() == 3 && g.num_vars() == 3, "tangency_divisor needs plane curves");
  require(!f.is_zero() && !g.is_zero(), "tangency_divisor of the zero form");
  if (f.field() != g.field()) raise(ErrorKind::FieldMismatch, "curves over different fields");
  const auto field = f.field();
  std::vector<ProjPoint<Fp>> common;
  for_each_point<Fp>(field, 2, [&](std::span<const Fp> c) {
    if (f(c).is_zero() && g(c).is_zero()) common.emplace_back(std::vector<Fp>(c.begin(), c.end()));
  });

  int zero_resultants = 0;
  for (int attempt = 0; attempt < 64; ++attempt) {
    Matrix<Fp> t(field, 3, 3);
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t c = 0; c < 3; ++c) t(r, c) = field.element(rng.below(field.size()));
    if (determinant(t).is_zero()) continue;
    const std::vector<Fp> center{t(0, 2), t(1, 2), t(2, 2)};
    if (f(center).is_zero() || g(center).is_zero()) continue;

    const auto res = resultant_eliminate(detail::change_coordinates(f, t), detail::change_coordinates(g, t), 2);
    if (res.is_zero()) {
      // confirm with a second chart before declaring a common component
      if (++zero_resultants >= 2) raise(ErrorKind::CommonComponent, "the curves share a component");
      continue;
    }

    // old = T new; rational common zeros must have distinct images in P^1
    Matrix<Fp> tinv(field, 3, 3);
    for (std::size_t c = 0; c < 3; ++c) {
      std::vector<Fp> e(3, field.zero());
      e[c] = field.one();
      const auto col = solve(t, std::span<const Fp>(e));
      for (std::size_t r = 0; r < 3; ++r) tinv(r, c) = (*col)[r];
    }
    std::vector<ProjPoint<Fp>> images;
    for (const auto& p : common) {
      const auto n = tinv.apply(p.span());
      images.push_back(ProjPoint<Fp>({n[0], n[1]}));
    }
    auto sorted = images;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;

    auto root = binary_square_root(res);
    if (!root) raise(ErrorKind::NotEverywhereTangent, "the resultant is not a square");
    TangencyReport out{t, res, *root, root->root.degree(), {}, 0};
    for (std::size_t i = 0; i < common.size(); ++i) {
      const int mult = root_multiplicity(res, images[i]);
      if (mult % 2 != 0) raise(ErrorKind::NotEverywhereTangent, "odd contact at " + common[i].to_string());
      out.contacts.push_back({common[i], mult});
      out.rational_delta_degree += mult / 2;
    }
    return out;
  }
  raise(ErrorKind::InvariantViolation, "no admissible chart found");
}

}  // namespace qlab
