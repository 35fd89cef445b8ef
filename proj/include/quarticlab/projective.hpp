#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "quarticlab/errors.hpp"
#include "quarticlab/field.hpp"
#include "quarticlab/linalg.hpp"

namespace qlab {

// A point of P^n, normalized so that its first nonzero coordinate is 1.
template <FieldElement K>
class ProjPoint {
 public:
  using Field = FieldOf<K>;

  explicit ProjPoint(std::vector<K> coords) : coords_(std::move(coords)) {
    require(coords_.size() >= 2, "a projective point needs at least two coordinates");
    std::size_t lead = 0;
    while (lead < coords_.size() && coords_[lead].is_zero()) ++lead;
    require(lead < coords_.size(), "all-zero coordinates do not define a projective point");
    for (std::size_t i = 1; i < coords_.size(); ++i) {
      if (coords_[i].field() != coords_[0].field()) raise(ErrorKind::FieldMismatch, "mixed-field coordinates");
    }
    if (!coords_[lead].is_one()) {
      const K inv = coords_[lead].inverse();
      for (std::size_t i = lead; i < coords_.size(); ++i) coords_[i] *= inv;
    }
  }

  static ProjPoint from_ints(Field field, std::initializer_list<std::int64_t> values) {
    std::vector<K> c;
    for (auto v : values) c.push_back(field.from_int(v));
    return ProjPoint(std::move(c));
  }

  // Nullopt for the zero vector.
  static std::optional<ProjPoint> try_make(std::vector<K> coords) {
    for (const auto& x : coords)
      if (!x.is_zero()) return ProjPoint(std::move(coords));
    return std::nullopt;
  }

  int dimension() const { return static_cast<int>(coords_.size()) - 1; }
  std::size_t size() const { return coords_.size(); }
  const std::vector<K>& coords() const { return coords_; }
  std::span<const K> span() const { return coords_; }
  const K& operator[](std::size_t i) const { return coords_[i]; }
  Field field() const { return coords_[0].field(); }

  friend bool operator==(const ProjPoint& a, const ProjPoint& b) { return a.coords_ == b.coords_; }
  friend bool operator<(const ProjPoint& a, const ProjPoint& b) { return a.coords_ < b.coords_; }

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < coords_.size(); ++i) s += (i ? ":" : "") + coords_[i].to_string();
    return s + ")";
  }

 private:
  std::vector<K> coords_;
};

template <FieldElement K>
Matrix<K> rows_matrix(std::span<const ProjPoint<K>> points) {
  require(!points.empty(), "empty point list");
  std::vector<std::vector<K>> rows;
  for (const auto& p : points) {
    require(p.size() == points[0].size(), "points live in different projective spaces");
    rows.push_back(p.coords());
  }
  return Matrix<K>(points[0].field(), rows);
}

// Projective dimension of the linear span.
template <FieldElement K>
int span_dimension(std::span<const ProjPoint<K>> points) {
  require(!points.empty(), "span_dimension of an empty list");
  return static_cast<int>(rank(rows_matrix(points))) - 1;
}

template <FieldElement K>
int span_dimension(const std::vector<ProjPoint<K>>& points) {
  return span_dimension(std::span<const ProjPoint<K>>(points));
}

// Visits every point of P^n(F_q) once, normalized, in increasing canonical
// order: (1:*:...:*) first, then (0:1:*:...), ..., (0:...:0:1).
template <FiniteFieldElement K, class Visitor>
void for_each_point(const FieldOf<K>& field, int n, Visitor&& visit) {
  const std::uint64_t q = field.size();
  std::vector<K> coords(n + 1, field.zero());
  std::vector<std::uint64_t> idx(n + 1, 0);
  for (int lead = 0; lead <= n; ++lead) {
    for (int i = 0; i <= n; ++i) coords[i] = field.zero();
    coords[lead] = field.one();
    const int free = n - lead;
    std::fill(idx.begin(), idx.end(), 0);
    while (true) {
      for (int i = 0; i < free; ++i) coords[lead + 1 + i] = field.element(idx[i]);
      visit(std::span<const K>(coords));
      int pos = free - 1;
      while (pos >= 0 && ++idx[pos] == q) idx[pos--] = 0;
      if (pos < 0) break;
    }
  }
}

template <FiniteFieldElement K>
std::uint64_t projective_space_size(const FieldOf<K>& field, int n) {
  std::uint64_t total = 0, pw = 1;
  for (int i = 0; i <= n; ++i) {
    total += pw;
    pw *= field.size();
  }
  return total;
}

// Uniformly random point of P^n(F_q).
template <FiniteFieldElement K, class Rng>
ProjPoint<K> random_point(const FieldOf<K>& field, int n, Rng& rng) {
  while (true) {
    std::vector<K> c;
    for (int i = 0; i <= n; ++i) c.push_back(field.element(rng.below(field.size())));
    if (auto p = ProjPoint<K>::try_make(std::move(c))) return *p;
  }
}

// Embeds points over F_p into F_{p^2}.
inline ProjPoint<Fp2> extend(const ProjPoint<Fp>& p, const QuadraticExtField& ext) {
  std::vector<Fp2> c;
  for (const auto& x : p.coords()) c.push_back(ext.embed(x));
  return ProjPoint<Fp2>(std::move(c));
}

inline Matrix<Fp2> extend(const Matrix<Fp>& m, const QuadraticExtField& ext) {
  Matrix<Fp2> out(ext, m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = ext.embed(m(r, c));
  return out;
}

inline SparseForm<Fp2> extend(const SparseForm<Fp>& f, const QuadraticExtField& ext) {
  std::vector<Term<Fp2>> terms;
  for (const auto& t : f.terms()) terms.push_back({t.exponents, ext.embed(t.coefficient)});
  return SparseForm<Fp2>(ext, f.num_vars(), f.degree(), std::move(terms));
}

// Finds an invertible 3x3 (generally (n+1)x(n+1)) matrix M with M*a_i ~ b_i for
// all i, or nullopt. Used to compare ordered configurations up to projective
// equivalence.
template <FieldElement K>
std::optional<Matrix<K>> projective_equivalence(std::span<const ProjPoint<K>> from, std::span<const ProjPoint<K>> to) {
  require(from.size() == to.size() && !from.empty(), "configurations differ in size");
  const std::size_t d = from[0].size();
  const auto field = from[0].field();
  // Unknowns: entries of M (d*d). Conditions: (M a)_r b_s - (M a)_s b_r = 0.
  std::vector<std::vector<K>> rows;
  for (std::size_t i = 0; i < from.size(); ++i) {
    const auto& a = from[i];
    const auto& b = to[i];
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t s = r + 1; s < d; ++s) {
        std::vector<K> row(d * d, field.zero());
        for (std::size_t c = 0; c < d; ++c) {
          row[r * d + c] += a[c] * b[s];
          row[s * d + c] -= a[c] * b[r];
        }
        rows.push_back(std::move(row));
      }
  }
  const auto rk = rank_and_kernel(Matrix<K>(field, rows));
  for (const auto& v : rk.kernel_basis) {
    Matrix<K> m(field, d, d);
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) m(r, c) = v[r * d + c];
    if (determinant(m).is_zero()) continue;
    bool ok = true;
    for (std::size_t i = 0; i < from.size() && ok; ++i) {
      auto img = ProjPoint<K>::try_make(m.apply(from[i].span()));
      ok = img && *img == to[i];
    }
    if (ok) return m;
  }
  return std::nullopt;
}

}  // namespace qlab
