#pragma once

// Sparse homogeneous polynomials ("forms") over an exact field.
//
// Terms are kept sorted in descending graded-lex order with x_0 > x_1 > ...,
// so the first stored term is the leading term and equality is term-by-term.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "quarticlab/errors.hpp"
#include "quarticlab/field.hpp"

namespace qlab {

inline constexpr int kMaxVars = 8;

using Monomial = std::array<std::uint8_t, kMaxVars>;

inline int monomial_degree(const Monomial& m) { return std::accumulate(m.begin(), m.end(), 0); }

// Descending graded-lex for same-degree monomials is descending lex.
inline bool grlex_greater(const Monomial& a, const Monomial& b) {
  const int da = monomial_degree(a), db = monomial_degree(b);
  if (da != db) return da > db;
  return a > b;
}

// All monomials of total degree `degree` in `num_vars` variables, leading first.
inline std::vector<Monomial> monomials_of_degree(int num_vars, int degree) {
  std::vector<Monomial> out;
  Monomial m{};
  auto rec = [&](auto&& self, int var, int remaining) -> void {
    if (var == num_vars - 1) {
      m[var] = static_cast<std::uint8_t>(remaining);
      out.push_back(m);
      m[var] = 0;
      return;
    }
    for (int e = remaining; e >= 0; --e) {
      m[var] = static_cast<std::uint8_t>(e);
      self(self, var + 1, remaining - e);
    }
    m[var] = 0;
  };
  if (num_vars == 0) {
    if (degree == 0) out.push_back(m);
    return out;
  }
  rec(rec, 0, degree);
  return out;
}

template <FieldElement K>
struct Term {
  Monomial exponents;
  K coefficient;
};

template <FieldElement K>
class SparseForm {
 public:
  using Field = FieldOf<K>;

  // Zero form of the given shape.
  SparseForm(Field field, int num_vars, int degree) : field_(field), num_vars_(num_vars), degree_(degree) {
    require(num_vars >= 1 && num_vars <= kMaxVars, "form needs 1..8 variables");
    require(degree >= 0 && degree <= 255, "form degree out of range");
  }

  SparseForm(Field field, int num_vars, int degree, std::vector<Term<K>> terms)
      : SparseForm(field, num_vars, degree) {
    std::map<Monomial, K, std::greater<>> acc;
    for (auto& t : terms) {
      require(monomial_degree(t.exponents) == degree, "term degree differs from form degree");
      for (int i = num_vars; i < kMaxVars; ++i) require(t.exponents[i] == 0, "exponent on a missing variable");
      if (t.coefficient.field() != field) raise(ErrorKind::FieldMismatch, "term coefficient from another field");
      auto [it, fresh] = acc.try_emplace(t.exponents, t.coefficient);
      if (!fresh) it->second += t.coefficient;
    }
    for (auto& [m, c] : acc) {
      if (!c.is_zero()) terms_.push_back({m, c});
    }
  }

  static SparseForm constant(const K& c, int num_vars) {
    return SparseForm(c.field(), num_vars, 0, {{Monomial{}, c}});
  }

  static SparseForm variable(Field field, int num_vars, int index) {
    require(index >= 0 && index < num_vars, "variable index out of range");
    Monomial m{};
    m[index] = 1;
    return SparseForm(field, num_vars, 1, {{m, field.one()}});
  }

  // sum_i coeffs[i] * x_i
  static SparseForm linear(Field field, std::span<const K> coeffs) {
    std::vector<Term<K>> terms;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      Monomial m{};
      m[i] = 1;
      terms.push_back({m, coeffs[i]});
    }
    return SparseForm(field, static_cast<int>(coeffs.size()), 1, std::move(terms));
  }

  const Field& field() const { return field_; }
  int num_vars() const { return num_vars_; }
  int degree() const { return degree_; }
  const std::vector<Term<K>>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  const Term<K>& leading_term() const {
    require(!terms_.empty(), "zero form has no leading term");
    return terms_.front();
  }

  K coefficient(const Monomial& m) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const Term<K>& t, const Monomial& x) { return t.exponents > x; });
    if (it != terms_.end() && it->exponents == m) return it->coefficient;
    return field_.zero();
  }

  K operator()(std::span<const K> point) const { return evaluate(point); }

  K evaluate(std::span<const K> point) const {
    require(static_cast<int>(point.size()) == num_vars_, "point arity differs from form");
    K acc = field_.zero();
    for (const auto& t : terms_) {
      K prod = t.coefficient;
      for (int v = 0; v < num_vars_; ++v)
        for (int e = 0; e < t.exponents[v]; ++e) prod *= point[v];
      acc += prod;
    }
    return acc;
  }

  SparseForm derivative(int var) const {
    require(var >= 0 && var < num_vars_, "derivative variable out of range");
    if (degree_ == 0) return SparseForm(field_, num_vars_, 0);
    std::vector<Term<K>> out;
    for (const auto& t : terms_) {
      if (t.exponents[var] == 0) continue;
      Monomial m = t.exponents;
      const int e = m[var]--;
      out.push_back({m, t.coefficient * field_.from_int(e)});
    }
    return SparseForm(field_, num_vars_, degree_ - 1, std::move(out));
  }

  SparseForm& operator+=(const SparseForm& o) { return *this = combine(o, false); }
  SparseForm& operator-=(const SparseForm& o) { return *this = combine(o, true); }
  friend SparseForm operator+(const SparseForm& a, const SparseForm& b) { return a.combine(b, false); }
  friend SparseForm operator-(const SparseForm& a, const SparseForm& b) { return a.combine(b, true); }
  SparseForm operator-() const { return scaled(-field_.one()); }

  SparseForm scaled(const K& c) const {
    std::vector<Term<K>> out;
    if (!c.is_zero()) {
      out.reserve(terms_.size());
      for (const auto& t : terms_) out.push_back({t.exponents, t.coefficient * c});
    }
    SparseForm r(field_, num_vars_, degree_);
    r.terms_ = std::move(out);
    return r;
  }

  friend SparseForm operator*(const K& c, const SparseForm& f) { return f.scaled(c); }

  friend SparseForm operator*(const SparseForm& a, const SparseForm& b) {
    require(a.num_vars_ == b.num_vars_, "product of forms in different variable sets");
    if (a.field_ != b.field_) raise(ErrorKind::FieldMismatch, "product of forms over different fields");
    std::map<Monomial, K, std::greater<>> acc;
    for (const auto& s : a.terms_) {
      for (const auto& t : b.terms_) {
        Monomial m;
        for (int i = 0; i < kMaxVars; ++i) m[i] = static_cast<std::uint8_t>(s.exponents[i] + t.exponents[i]);
        auto [it, fresh] = acc.try_emplace(m, s.coefficient * t.coefficient);
        if (!fresh) it->second += s.coefficient * t.coefficient;
      }
    }
    SparseForm r(a.field_, a.num_vars_, a.degree_ + b.degree_);
    for (auto& [m, c] : acc) {
      if (!c.is_zero()) r.terms_.push_back({m, c});
    }
    return r;
  }

  SparseForm pow(int e) const {
    require(e >= 0, "negative power");
    SparseForm acc = constant(field_.one(), num_vars_);
    for (int i = 0; i < e; ++i) acc = acc * *this;
    return acc;
  }

  // Replaces x_i by images[i]; all images share arity and degree.
  SparseForm substitute(std::span<const SparseForm> images) const {
    require(static_cast<int>(images.size()) == num_vars_, "substitution needs one image per variable");
    const int arity = images.front().num_vars();
    const int image_degree = images.front().degree();
    for (const auto& g : images) {
      require(g.num_vars() == arity && g.degree() == image_degree, "substitution images must share shape");
    }
    std::vector<std::vector<SparseForm>> powers(num_vars_);
    for (int v = 0; v < num_vars_; ++v) {
      powers[v].push_back(constant(field_.one(), arity));
      for (int e = 1; e <= degree_; ++e) powers[v].push_back(powers[v].back() * images[v]);
    }
    SparseForm acc(field_, arity, degree_ * image_degree);
    for (const auto& t : terms_) {
      SparseForm prod = constant(t.coefficient, arity);
      for (int v = 0; v < num_vars_; ++v) {
        if (t.exponents[v] != 0) prod = prod * powers[v][t.exponents[v]];
      }
      acc += prod;
    }
    return acc;
  }

  // Linear change of variables x_i -> sum_j matrix[i][j] y_j.
  SparseForm linear_substitute(const std::vector<std::vector<K>>& matrix) const {
    std::vector<SparseForm> images;
    for (const auto& row : matrix) images.push_back(linear(field_, std::span<const K>(row)));
    return substitute(images);
  }

  friend bool operator==(const SparseForm& a, const SparseForm& b) {
    if (a.num_vars_ != b.num_vars_ || a.terms_.size() != b.terms_.size()) return false;
    if (a.is_zero()) return true;
    if (a.degree_ != b.degree_) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
      if (a.terms_[i].exponents != b.terms_[i].exponents || !(a.terms_[i].coefficient == b.terms_[i].coefficient)) {
        return false;
      }
    }
    return true;
  }

  // Human-readable, e.g. "3*x0^2*x1 - x2^3"; used in logs and test messages.
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& t : terms_) {
      if (!out.empty()) out += " + ";
      out += t.coefficient.to_string();
      for (int v = 0; v < num_vars_; ++v) {
        if (t.exponents[v] == 0) continue;
        out += "*x" + std::to_string(v);
        if (t.exponents[v] > 1) out += "^" + std::to_string(t.exponents[v]);
      }
    }
    return out;
  }

 private:
  SparseForm combine(const SparseForm& o, bool subtract) const {
    require(num_vars_ == o.num_vars_, "sum of forms in different variable sets");
    if (field_ != o.field_) raise(ErrorKind::FieldMismatch, "sum of forms over different fields");
    if (o.is_zero()) return *this;
    if (is_zero()) return subtract ? o.scaled(-field_.one()) : o;
    require(degree_ == o.degree_, "sum of forms of different degrees");
    SparseForm r(field_, num_vars_, degree_);
    auto i = terms_.begin();
    auto j = o.terms_.begin();
    while (i != terms_.end() || j != o.terms_.end()) {
      if (j == o.terms_.end() || (i != terms_.end() && i->exponents > j->exponents)) {
        r.terms_.push_back(*i++);
      } else if (i == terms_.end() || j->exponents > i->exponents) {
        r.terms_.push_back({j->exponents, subtract ? -j->coefficient : j->coefficient});
        ++j;
      } else {
        K c = subtract ? i->coefficient - j->coefficient : i->coefficient + j->coefficient;
        if (!c.is_zero()) r.terms_.push_back({i->exponents, c});
        ++i;
        ++j;
      }
    }
    return r;
  }

  Field field_;
  int num_vars_;
  int degree_;
  std::vector<Term<K>> terms_;
};

// All first partial derivatives.
template <FieldElement K>
std::vector<SparseForm<K>> gradient(const SparseForm<K>& f) {
  std::vector<SparseForm<K>> out;
  out.reserve(f.num_vars());
  for (int v = 0; v < f.num_vars(); ++v) out.push_back(f.derivative(v));
  return out;
}

}  // namespace qlab
