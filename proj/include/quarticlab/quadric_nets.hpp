#pragma once

// Nets of quadrics in P^3, their eight base points, the Hessian quartic of the
// net, its bitangents and the Steinerian map. Everything is exact and works
// over F_p or F_{p^2}; base points are found by enumeration.

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "quarticlab/binary_forms.hpp"
#include "quarticlab/errors.hpp"
#include "quarticlab/field.hpp"
#include "quarticlab/form.hpp"
#include "quarticlab/linalg.hpp"
#include "quarticlab/projective.hpp"

namespace qlab {

// Q_(x:y:z) = x A + y B + z C with A, B, C symmetric 4x4 and independent.
template <FieldElement K>
class QuadricNet {
 public:
  QuadricNet(Matrix<K> a, Matrix<K> b, Matrix<K> c) : m_{std::move(a), std::move(b), std::move(c)} {
    for (const auto& m : m_) {
      require(m.rows() == 4 && m.cols() == 4, "net matrices must be 4x4");
      require(m.is_symmetric(), "net matrices must be symmetric");
      if (m.field() != m_[0].field()) raise(ErrorKind::FieldMismatch, "net matrices over different fields");
    }
    require(m_[0].field().characteristic() != 2, "characteristic 2 is not supported");
    if (rank(flattened()) != 3) raise(ErrorKind::DegenerateNet, "net matrices are linearly dependent");
  }

  const std::array<Matrix<K>, 3>& matrices() const { return m_; }
  const Matrix<K>& operator[](std::size_t i) const { return m_[i]; }
  FieldOf<K> field() const { return m_[0].field(); }

  Matrix<K> quadric_at(std::span<const K> pt) const {
    require(pt.size() == 3, "a point of the net plane has three coordinates");
    return pt[0] * m_[0] + pt[1] * m_[1] + pt[2] * m_[2];
  }

  // 3 x 16 matrix of the flattened A, B, C.
  Matrix<K> flattened() const {
    Matrix<K> out(field(), 3, 16);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) out(i, 4 * r + c) = m_[i](r, c);
    return out;
  }

 private:
  std::array<Matrix<K>, 3> m_;
};

// True when both nets are the same 3-dimensional space of quadrics.
template <FieldElement K>
bool same_net(const QuadricNet<K>& a, const QuadricNet<K>& b) {
  auto fa = a.flattened(), fb = b.flattened();
  Matrix<K> both(a.field(), 6, 16);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 16; ++c) {
      both(r, c) = fa(r, c);
      both(r + 3, c) = fb(r, c);
    }
  return rank(both) == 3;
}

inline QuadricNet<Fp2> extend(const QuadricNet<Fp>& net, const QuadraticExtField& ext) {
  return QuadricNet<Fp2>(extend(net[0], ext), extend(net[1], ext), extend(net[2], ext));
}

// Eight distinct points of P^3, kept in order.
template <FieldElement K>
class Octad {
 public:
  explicit Octad(std::vector<ProjPoint<K>> points) : points_(std::move(points)) {
    require(points_.size() == 8, "an octad has 8 points, got " + std::to_string(points_.size()));
    for (const auto& p : points_) {
      require(p.dimension() == 3, "octad points live in P^3");
      if (p.field() != points_[0].field()) raise(ErrorKind::FieldMismatch, "octad points over different fields");
    }
    auto sorted = points_;
    std::sort(sorted.begin(), sorted.end());
    require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), "octad points must be distinct");
  }

  const std::vector<ProjPoint<K>>& points() const { return points_; }
  const ProjPoint<K>& operator[](std::size_t i) const { return points_.at(i); }
  std::size_t size() const { return points_.size(); }

  bool same_set(const Octad& o) const {
    auto a = points_, b = o.points_;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
  }

  friend bool operator==(const Octad& a, const Octad& b) { return a.points_ == b.points_; }

 private:
  std::vector<ProjPoint<K>> points_;
};

// Raised by base_locus when fewer than 8 base points are rational; carries the
// ones that were found.
template <FieldElement K>
class PartialLocusError : public Error {
 public:
  PartialLocusError(std::vector<ProjPoint<K>> found)
      : Error(ErrorKind::PartialLocus, std::to_string(found.size()) +
                                           " rational base points; the rest live in an extension (retry over F_{p^2})"),
        points_(std::move(found)) {}
  const std::vector<ProjPoint<K>>& points() const { return points_; }

 private:
  std::vector<ProjPoint<K>> points_;
};

// Row of the 10 quadratic monomials x_i x_j (i <= j, graded-lex order).
template <FieldElement K>
std::vector<K> veronese_row(const ProjPoint<K>& p) {
  require(p.dimension() == 3, "Veronese row needs a point of P^3");
  std::vector<K> row;
  row.reserve(10);
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) row.push_back(p[i] * p[j]);
  return row;
}

template <FieldElement K>
Matrix<K> veronese_matrix(std::span<const ProjPoint<K>> points) {
  require(!points.empty(), "empty point list");
  std::vector<std::vector<K>> rows;
  for (const auto& p : points) rows.push_back(veronese_row(p));
  return Matrix<K>(points[0].field(), rows);
}

template <FieldElement K>
QuadricNet<K> net_through(std::span<const ProjPoint<K>> points7) {
  require(points7.size() == 7, "net_through needs 7 points, got " + std::to_string(points7.size()));
  const auto field = points7[0].field();
  const auto rk = rank_and_kernel(veronese_matrix(points7));
  if (rk.rank != 7) {
    raise(ErrorKind::DegenerateConfiguration,
          "the 7 points impose only " + std::to_string(rk.rank) + " conditions on quadrics");
  }
  const K half = field.from_int(2).inverse();
  std::vector<Matrix<K>> mats;
  for (const auto& v : rk.kernel_basis) {
    Matrix<K> m(field, 4, 4);
    std::size_t idx = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j, ++idx) {
        if (i == j) m(i, i) = v[idx];
        else m(i, j) = m(j, i) = v[idx] * half;
      }
    mats.push_back(std::move(m));
  }
  return QuadricNet<K>(mats[0], mats[1], mats[2]);
}

template <FieldElement K>
QuadricNet<K> net_through(const std::vector<ProjPoint<K>>& points7) {
  return net_through(std::span<const ProjPoint<K>>(points7));
}

namespace detail {

// Univariate polynomials as coefficient vectors, lowest degree first.
template <FieldElement K>
void trim(std::vector<K>& a) {
  while (!a.empty() && a.back().is_zero()) a.pop_back();
}

template <FieldElement K>
std::vector<K> poly_mod(std::vector<K> a, const std::vector<K>& b) {
  const K inv = b.back().inverse();
  while (a.size() >= b.size()) {
    const K f = a.back() * inv;
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
    a.pop_back();
    trim(a);
  }
  return a;
}

template <FieldElement K>
std::vector<K> poly_gcd(std::vector<K> a, std::vector<K> b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    auto r = poly_mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// Rank of the Jacobian of the three quadrics at v (rows M v).
template <FieldElement K>
std::size_t jacobian_rank(const QuadricNet<K>& net, const ProjPoint<K>& v) {
  std::vector<std::vector<K>> rows;
  for (const auto& m : net.matrices()) rows.push_back(m.apply(v.span()));
  return rank(Matrix<K>(net.field(), rows));
}

}  // namespace detail

// All points of P^3 over the (finite) field of the net lying on every quadric.
// For each (a:b:c) the quadrics restricted to (a:b:c:w) are quadratics in w,
// so only P^2 is scanned.
template <FiniteFieldElement K>
Octad<K> base_locus(const QuadricNet<K>& net) {
  const auto field = net.field();
  std::vector<ProjPoint<K>> found;
  auto add = [&](std::vector<K> coords) {
    found.emplace_back(std::move(coords));
    if (found.size() > 8) raise(ErrorKind::DegenerateNet, "the net has more than 8 base points");
  };

  std::vector<K> w_roots;
  for_each_point<K>(field, 2, [&](std::span<const K> u) {
    std::array<std::vector<K>, 3> polys;
    for (int k = 0; k < 3; ++k) {
      const auto& m = net[k];
      K q0 = field.zero(), q1 = field.zero();
      for (int i = 0; i < 3; ++i) {
        if (u[i].is_zero()) continue;
        K s = field.zero();
        for (int j = 0; j < 3; ++j) s += m(i, j) * u[j];
        q0 += u[i] * s;
        q1 += m(3, i) * u[i];
      }
      polys[k] = {q0, q1 + q1, m(3, 3)};
    }
    auto g = detail::poly_gcd(detail::poly_gcd(polys[0], polys[1]), polys[2]);
    w_roots.clear();
    if (g.empty()) raise(ErrorKind::DegenerateNet, "the net contains a whole line in its base locus");
    if (g.size() == 2) {
      w_roots.push_back(-g[0] / g[1]);
    } else if (g.size() == 3) {
      for (std::uint64_t i = 0; i < field.size(); ++i) {
        const K w = field.element(i);
        if ((g[0] + w * (g[1] + w * g[2])).is_zero()) w_roots.push_back(w);
      }
    }
    for (const auto& w : w_roots) add({u[0], u[1], u[2], w});
  });
  if (net[0](3, 3).is_zero() && net[1](3, 3).is_zero() && net[2](3, 3).is_zero()) {
    add({field.zero(), field.zero(), field.zero(), field.one()});
  }

  std::sort(found.begin(), found.end());
  for (const auto& p : found) {
    if (detail::jacobian_rank(net, p) != 3) raise(ErrorKind::DegenerateNet, "base point " + p.to_string() + " is not simple");
  }
  if (found.size() < 8) throw PartialLocusError<K>(std::move(found));
  return Octad<K>(std::move(found));
}

template <FiniteFieldElement K>
ProjPoint<K> eighth_point(std::span<const ProjPoint<K>> points7) {
  const auto octad = base_locus(net_through(points7));
  std::optional<ProjPoint<K>> extra;
  for (const auto& p : octad.points()) {
    if (std::find(points7.begin(), points7.end(), p) != points7.end()) continue;
    if (extra) raise(ErrorKind::InvariantViolation, "more than one base point besides the inputs");
    extra = p;
  }
  if (!extra) raise(ErrorKind::InvariantViolation, "inputs are not all distinct base points");
  return *extra;
}

template <FiniteFieldElement K>
ProjPoint<K> eighth_point(const std::vector<ProjPoint<K>>& points7) {
  return eighth_point(std::span<const ProjPoint<K>>(points7));
}

template <FieldElement K>
int self_association_rank(std::span<const ProjPoint<K>> points8) {
  require(points8.size() == 8, "self_association_rank needs 8 points");
  return static_cast<int>(rank(veronese_matrix(points8)));
}

template <FieldElement K>
int self_association_rank(const Octad<K>& octad) {
  return self_association_rank(std::span<const ProjPoint<K>>(octad.points()));
}

template <FieldElement K>
SparseForm<K> hessian_quartic(const QuadricNet<K>& net) {
  auto h = det_linear_symmetric(net[0], net[1], net[2]);
  if (h.is_zero()) raise(ErrorKind::DegenerateNet, "every quadric of the net is singular");
  return h;
}

// Every 4 of the 8 points span P^3.
template <FieldElement K>
bool smoothness_certificate(const Octad<K>& octad) {
  const auto& pts = octad.points();
  for (int a = 0; a < 8; ++a)
    for (int b = a + 1; b < 8; ++b)
      for (int c = b + 1; c < 8; ++c)
        for (int d = c + 1; d < 8; ++d)
          if (span_dimension(std::vector{pts[a], pts[b], pts[c], pts[d]}) != 3) return false;
  return true;
}

struct TangencyCertificate {
  SparseForm<Fp> restricted;                   // Hessian on the line, in parameters (s:t)
  BinarySquareRoot<Fp> root;                   // restricted = scale * root^2
  std::array<ProjPoint<Fp2>, 2> parameters;    // roots (s:t) of root
  std::array<ProjPoint<Fp2>, 2> contacts;      // the same points in the net plane
};

struct Bitangent {
  ProjPoint<Fp> line;  // (a:b:c) for ax + by + cz = 0
  std::array<ProjPoint<Fp>, 2> basis;  // line points P, Q; parameter (s:t) maps to sP + tQ
  TangencyCertificate certificate;
};

// Line {B_(x:y:z)(x_i, x_j) = 0} of the quadrics containing the line x_i x_j.
template <FieldElement K>
ProjPoint<K> pencil_line(const QuadricNet<K>& net, const ProjPoint<K>& xi, const ProjPoint<K>& xj) {
  std::vector<K> coeffs;
  for (const auto& m : net.matrices()) coeffs.push_back(m.bilinear(xi.span(), xj.span()));
  auto line = ProjPoint<K>::try_make(coeffs);
  if (!line) raise(ErrorKind::DegenerateNet, "every quadric of the net contains the line " + xi.to_string() + xj.to_string());
  return *line;
}

// Two points spanning the line ax + by + cz = 0, from the echelon kernel.
template <FieldElement K>
std::array<ProjPoint<K>, 2> line_basis(const ProjPoint<K>& line) {
  const auto rk = rank_and_kernel(Matrix<K>(line.field(), {line.coords()}));
  return {ProjPoint<K>(rk.kernel_basis[0]), ProjPoint<K>(rk.kernel_basis[1])};
}

// i, j are 0-based octad indices.
inline Bitangent bitangent_line(const QuadricNet<Fp>& net, const Octad<Fp>& octad, int i, int j,
                                const SparseForm<Fp>& hessian) {
  require(i != j, "bitangent_line needs two different octad indices");
  require(i >= 0 && i < 8 && j >= 0 && j < 8, "octad index out of range");
  const auto line = pencil_line(net, octad[i], octad[j]);
  const auto basis = line_basis(line);
  std::vector<std::vector<Fp>> subst;
  for (int k = 0; k < 3; ++k) subst.push_back({basis[0][k], basis[1][k]});
  const auto restricted = hessian.linear_substitute(subst);
  if (restricted.is_zero()) {
    raise(ErrorKind::ComponentLine, "the line " + line.to_string() + " is a component of the Hessian");
  }
  auto root = binary_square_root(restricted);
  if (!root) raise(ErrorKind::InvariantViolation, "Hessian restricted to " + line.to_string() + " is not a square");
  const QuadraticExtField ext(net.field().characteristic());
  const auto params = binary_quadratic_roots(root->root, ext);
  std::array<ProjPoint<Fp2>, 2> contacts{extend(basis[0], ext), extend(basis[1], ext)};
  for (int k = 0; k < 2; ++k) {
    std::vector<Fp2> c;
    for (int r = 0; r < 3; ++r) c.push_back(params[k][0] * ext.embed(basis[0][r]) + params[k][1] * ext.embed(basis[1][r]));
    contacts[k] = ProjPoint<Fp2>(std::move(c));
  }
  return {line, basis, {restricted, *root, params, contacts}};
}

inline Bitangent bitangent_line(const QuadricNet<Fp>& net, const Octad<Fp>& octad, int i, int j) {
  return bitangent_line(net, octad, i, j, hessian_quartic(net));
}

// The singular point of the rank-3 quadric Q_pt.
template <FieldElement K>
ProjPoint<K> steinerian_point(const QuadricNet<K>& net, const ProjPoint<K>& pt) {
  require(pt.dimension() == 2, "steinerian_point needs a point of the net plane");
  const auto rk = rank_and_kernel(net.quadric_at(pt.span()));
  if (rk.rank == 4) raise(ErrorKind::InvalidArgument, pt.to_string() + " is not on the Hessian");
  if (rk.rank <= 2) raise(ErrorKind::CorankTwo, "Q at " + pt.to_string() + " has rank " + std::to_string(rk.rank));
  return ProjPoint<K>(rk.kernel_basis[0]);
}

// St(u), St(v) for the contact points of the bitangent attached to (i, j).
inline std::array<ProjPoint<Fp2>, 2> steinerian_secant_points(const QuadricNet<Fp>& net, const Octad<Fp>& octad, int i,
                                                               int j) {
  const auto bt = bitangent_line(net, octad, i, j);
  const QuadraticExtField ext(net.field().characteristic());
  const auto big = extend(net, ext);
  return {steinerian_point(big, bt.certificate.contacts[0]), steinerian_point(big, bt.certificate.contacts[1])};
}

inline bool steinerian_secant_check(const QuadricNet<Fp>& net, const Octad<Fp>& octad, int i, int j) {
  const auto st = steinerian_secant_points(net, octad, i, j);
  const QuadraticExtField ext(net.field().characteristic());
  return span_dimension(std::vector{extend(octad[i], ext), extend(octad[j], ext), st[0], st[1]}) == 1;
}

// Linear forms vanishing at x_k: the echelon kernel of the row x_k.
template <FieldElement K>
Matrix<K> projection_from(const ProjPoint<K>& center) {
  const auto rk = rank_and_kernel(Matrix<K>(center.field(), {center.coords()}));
  return Matrix<K>(center.field(), rk.kernel_basis);
}

// Images of the 7 other points under projection from x_k (0-based k).
template <FieldElement K>
std::vector<ProjPoint<K>> project_octad(const Octad<K>& octad, int k) {
  require(k >= 0 && k < 8, "projection center index out of range");
  const auto proj = projection_from(octad[k]);
  std::vector<ProjPoint<K>> out;
  for (int i = 0; i < 8; ++i) {
    if (i == k) continue;
    auto img = ProjPoint<K>::try_make(proj.apply(octad[i].span()));
    if (!img) raise(ErrorKind::DegenerateConfiguration, "octad point coincides with the projection center");
    out.push_back(*img);
  }
  return out;
}

template <FieldElement K>
bool has_three_collinear(std::span<const ProjPoint<K>> pts) {
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = a + 1; b < pts.size(); ++b)
      for (std::size_t c = b + 1; c < pts.size(); ++c)
        if (span_dimension(std::vector{pts[a], pts[b], pts[c]}) < 2) return true;
  return false;
}

// Gale association of 7 plane points to 7 points of P^3 (rows of the echelon
// kernel basis of the 3x7 coordinate matrix), completed by the eighth base point.
template <FiniteFieldElement K>
Octad<K> octad_from_plane(std::span<const ProjPoint<K>> points7) {
  require(points7.size() == 7, "octad_from_plane needs 7 points");
  for (const auto& p : points7) require(p.dimension() == 2, "octad_from_plane needs points of P^2");
  if (has_three_collinear(points7)) raise(ErrorKind::DegenerateConfiguration, "three of the plane points are collinear");
  const auto kernel = rank_and_kernel(rows_matrix(points7).transpose()).kernel_basis;
  if (kernel.size() != 4) raise(ErrorKind::DegenerateConfiguration, "plane points do not span P^2");
  std::vector<ProjPoint<K>> assoc;
  for (int i = 0; i < 7; ++i) {
    std::vector<K> c;
    for (const auto& v : kernel) c.push_back(v[i]);
    auto p = ProjPoint<K>::try_make(std::move(c));
    if (!p) raise(ErrorKind::DegenerateConfiguration, "associated point vanishes");
    assoc.push_back(*p);
  }
  auto pts = assoc;
  try {
    pts.push_back(eighth_point(std::span<const ProjPoint<K>>(assoc)));
  } catch (const Error& e) {
    // typically the eighth base point falls onto one of the seven
    raise(ErrorKind::DegenerateConfiguration, std::string("associated points are special: ") + e.what());
  }
  return Octad<K>(std::move(pts));
}

template <FiniteFieldElement K>
Octad<K> octad_from_plane(const std::vector<ProjPoint<K>>& points7) {
  return octad_from_plane(std::span<const ProjPoint<K>>(points7));
}

template <FiniteFieldElement K>
struct NetOctad {
  QuadricNet<K> net;
  Octad<K> octad;  // the 7 sampled points, then the eighth
};

// Samples 7 points until they impose independent conditions, have a rational
// eighth point and (optionally) pass the smoothness certificate.
template <FiniteFieldElement K, class Rng>
NetOctad<K> random_general_octad(const FieldOf<K>& field, Rng& rng, bool require_smooth = true, int max_tries = 200) {
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    std::vector<ProjPoint<K>> pts;
    for (int i = 0; i < 7; ++i) pts.push_back(random_point<K>(field, 3, rng));
    try {
      auto net = net_through(pts);
      pts.push_back(eighth_point(pts));
      Octad<K> octad(std::move(pts));
      if (require_smooth && !smoothness_certificate(octad)) continue;
      return {std::move(net), std::move(octad)};
    } catch (const Error&) {
      continue;
    }
  }
  raise(ErrorKind::DegenerateConfiguration, "no general octad found in " + std::to_string(max_tries) + " attempts");
}

template <FieldElement K>
Octad<K> cube_octad(const FieldOf<K>& field) {
  std::vector<ProjPoint<K>> pts;
  for (int a : {1, -1})
    for (int b : {1, -1})
      for (int c : {1, -1}) pts.push_back(ProjPoint<K>::from_ints(field, {a, b, c, 1}));
  return Octad<K>(std::move(pts));
}

// x^2 - w^2, y^2 - w^2, z^2 - w^2
template <FieldElement K>
QuadricNet<K> cube_net(const FieldOf<K>& field) {
  std::array<Matrix<K>, 3> m{Matrix<K>(field, 4, 4), Matrix<K>(field, 4, 4), Matrix<K>(field, 4, 4)};
  for (int i = 0; i < 3; ++i) {
    m[i](i, i) = field.one();
    m[i](3, 3) = -field.one();
  }
  return QuadricNet<K>(m[0], m[1], m[2]);
}

}  // namespace qlab
