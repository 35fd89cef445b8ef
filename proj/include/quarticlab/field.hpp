#pragma once

// Exact scalar fields: the rationals, prime fields F_p and their quadratic
// extensions F_{p^2} = F_p[i]/(i^2 - n) with n the smallest non-residue.
// Elements carry their field so mixing fields is detected at run time.

#include <gmpxx.h>

#include <compare>
#include <concepts>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "quarticlab/errors.hpp"

namespace qlab {

bool is_prime(std::uint64_t n);

class Fp;
class Fp2;
class Rational;

class PrimeField {
 public:
  // p must be a prime with 5 <= p < 2^31 (characteristics 2 and 3 are excluded).
  explicit PrimeField(std::uint32_t p);

  std::uint32_t characteristic() const { return p_; }
  std::uint64_t size() const { return p_; }

  Fp zero() const;
  Fp one() const;
  Fp from_int(std::int64_t value) const;
  // Elements in enumeration order 0, 1, ..., p-1.
  Fp element(std::uint64_t index) const;
  Fp parse(std::string_view text) const;

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  friend class Fp;
  struct Unchecked {};
  PrimeField(std::uint32_t p, Unchecked) : p_(p) {}

  std::uint32_t p_;
};

class Fp {
 public:
  using FieldType = PrimeField;

  Fp(std::uint32_t value, std::uint32_t p) : v_(value % p), p_(p) {}

  PrimeField field() const { return PrimeField(p_, PrimeField::Unchecked{}); }
  std::uint32_t value() const { return v_; }
  std::uint32_t modulus() const { return p_; }
  bool is_zero() const { return v_ == 0; }
  bool is_one() const { return v_ == 1; }

  Fp& operator+=(const Fp& o) {
    check(o);
    v_ += o.v_;
    if (v_ >= p_) v_ -= p_;
    return *this;
  }
  Fp& operator-=(const Fp& o) {
    check(o);
    v_ = v_ >= o.v_ ? v_ - o.v_ : v_ + p_ - o.v_;
    return *this;
  }
  Fp& operator*=(const Fp& o) {
    check(o);
    v_ = static_cast<std::uint32_t>(static_cast<std::uint64_t>(v_) * o.v_ % p_);
    return *this;
  }
  Fp& operator/=(const Fp& o) { return *this *= o.inverse(); }

  friend Fp operator+(Fp a, const Fp& b) { return a += b; }
  friend Fp operator-(Fp a, const Fp& b) { return a -= b; }
  friend Fp operator*(Fp a, const Fp& b) { return a *= b; }
  friend Fp operator/(Fp a, const Fp& b) { return a /= b; }
  Fp operator-() const { return Fp(v_ == 0 ? 0 : p_ - v_, p_); }

  Fp inverse() const;
  Fp pow(std::uint64_t e) const;
  bool is_square() const { return v_ == 0 || pow((p_ - 1) / 2).is_one(); }
  std::optional<Fp> sqrt() const;

  friend bool operator==(const Fp& a, const Fp& b) { return a.v_ == b.v_ && a.p_ == b.p_; }
  friend std::strong_ordering operator<=>(const Fp& a, const Fp& b) {
    if (auto c = a.p_ <=> b.p_; c != 0) return c;
    return a.v_ <=> b.v_;
  }

  std::string to_string() const { return std::to_string(v_); }

 private:
  void check(const Fp& o) const {
    if (o.p_ != p_) raise(ErrorKind::FieldMismatch, "F_" + std::to_string(p_) + " vs F_" + std::to_string(o.p_));
  }

  std::uint32_t v_;
  std::uint32_t p_;
};

class QuadraticExtField {
 public:
  explicit QuadraticExtField(std::uint32_t p);
  explicit QuadraticExtField(const PrimeField& base) : QuadraticExtField(base.characteristic()) {}

  std::uint32_t characteristic() const { return p_; }
  std::uint32_t non_residue() const { return n_; }
  std::uint64_t size() const { return static_cast<std::uint64_t>(p_) * p_; }
  PrimeField base() const { return PrimeField(p_); }

  Fp2 zero() const;
  Fp2 one() const;
  Fp2 from_int(std::int64_t value) const;
  Fp2 element(std::uint64_t index) const;
  Fp2 embed(const Fp& x) const;
  Fp2 make(const Fp& re, const Fp& im) const;
  Fp2 generator_i() const;
  Fp2 parse(std::string_view text) const;

  friend bool operator==(const QuadraticExtField&, const QuadraticExtField&) = default;

 private:
  friend class Fp2;
  QuadraticExtField(std::uint32_t p, std::uint32_t n) : p_(p), n_(n) {}

  std::uint32_t p_;
  std::uint32_t n_;
};

class Fp2 {
 public:
  using FieldType = QuadraticExtField;

  Fp2(std::uint32_t re, std::uint32_t im, std::uint32_t p, std::uint32_t n) : a_(re % p), b_(im % p), p_(p), n_(n) {}

  QuadraticExtField field() const { return QuadraticExtField(p_, n_); }
  Fp re() const { return Fp(a_, p_); }
  Fp im() const { return Fp(b_, p_); }
  bool is_zero() const { return a_ == 0 && b_ == 0; }
  bool is_one() const { return a_ == 1 && b_ == 0; }
  bool in_base_field() const { return b_ == 0; }

  Fp2& operator+=(const Fp2& o);
  Fp2& operator-=(const Fp2& o);
  Fp2& operator*=(const Fp2& o);
  Fp2& operator/=(const Fp2& o) { return *this *= o.inverse(); }

  friend Fp2 operator+(Fp2 a, const Fp2& b) { return a += b; }
  friend Fp2 operator-(Fp2 a, const Fp2& b) { return a -= b; }
  friend Fp2 operator*(Fp2 a, const Fp2& b) { return a *= b; }
  friend Fp2 operator/(Fp2 a, const Fp2& b) { return a /= b; }
  Fp2 operator-() const { return Fp2(a_ == 0 ? 0 : p_ - a_, b_ == 0 ? 0 : p_ - b_, p_, n_); }

  Fp2 inverse() const;
  Fp2 pow(std::uint64_t e) const;

  friend bool operator==(const Fp2& x, const Fp2& y) { return x.a_ == y.a_ && x.b_ == y.b_ && x.p_ == y.p_; }
  friend std::strong_ordering operator<=>(const Fp2& x, const Fp2& y) {
    if (auto c = x.p_ <=> y.p_; c != 0) return c;
    if (auto c = x.a_ <=> y.a_; c != 0) return c;
    return x.b_ <=> y.b_;
  }

  // "a+bi" with 0 <= a, b < p.
  std::string to_string() const;

 private:
  void check(const Fp2& o) const {
    if (o.p_ != p_) raise(ErrorKind::FieldMismatch, "F_" + std::to_string(p_) + "^2 vs F_" + std::to_string(o.p_) + "^2");
  }

  std::uint32_t a_;
  std::uint32_t b_;
  std::uint32_t p_;
  std::uint32_t n_;
};

class RationalField {
 public:
  std::uint32_t characteristic() const { return 0; }
  Rational zero() const;
  Rational one() const;
  Rational from_int(std::int64_t value) const;
  Rational parse(std::string_view text) const;
  friend bool operator==(const RationalField&, const RationalField&) = default;
};

class Rational {
 public:
  using FieldType = RationalField;

  Rational() = default;
  explicit Rational(mpq_class value) : v_(std::move(value)) { v_.canonicalize(); }
  Rational(long num, long den = 1) : v_(num, den) { v_.canonicalize(); }

  RationalField field() const { return {}; }
  const mpq_class& value() const { return v_; }
  bool is_zero() const { return sgn(v_) == 0; }
  bool is_one() const { return v_ == 1; }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) raise(ErrorKind::InvalidArgument, "division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  Rational operator-() const { return Rational(mpq_class(-v_)); }

  Rational inverse() const { return Rational(1) / *this; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }

  // "3/7", or "3" for integers.
  std::string to_string() const { return v_.get_str(); }

 private:
  mpq_class v_;
};

// Image of a rational number in F_p; nullopt when p divides the denominator.
inline std::optional<Fp> reduce(const Rational& x, const PrimeField& f) {
  const mpz_class p = f.characteristic();
  mpz_class num = x.value().get_num() % p, den = x.value().get_den() % p;
  if (den == 0) return std::nullopt;
  if (num < 0) num += p;
  return Fp(static_cast<std::uint32_t>(num.get_ui()), f.characteristic()) /
         Fp(static_cast<std::uint32_t>(den.get_ui()), f.characteristic());
}

template <class K>
concept FieldElement = requires(const K a, const K b) {
  typename K::FieldType;
  { a + b } -> std::same_as<K>;
  { a - b } -> std::same_as<K>;
  { a * b } -> std::same_as<K>;
  { a / b } -> std::same_as<K>;
  { -a } -> std::same_as<K>;
  { a == b } -> std::convertible_to<bool>;
  { a < b } -> std::convertible_to<bool>;
  { a.is_zero() } -> std::convertible_to<bool>;
  { a.inverse() } -> std::same_as<K>;
  { a.field() } -> std::same_as<typename K::FieldType>;
  { a.to_string() } -> std::same_as<std::string>;
};

// Fields whose elements can be enumerated (F_p and F_{p^2}).
template <class K>
concept FiniteFieldElement = FieldElement<K> && requires(const typename K::FieldType f, std::uint64_t i) {
  { f.size() } -> std::convertible_to<std::uint64_t>;
  { f.element(i) } -> std::same_as<K>;
};

template <FieldElement K>
using FieldOf = typename K::FieldType;

}  // namespace qlab
