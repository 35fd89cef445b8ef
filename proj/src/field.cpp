#include "quarticlab/field.hpp"

#include <charconv>
#include <cstdlib>

namespace qlab {

namespace {

std::uint32_t mulmod(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
  return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % p);
}

std::uint32_t smallest_non_residue(std::uint32_t p) {
  const PrimeField f(p);
  for (std::uint32_t n = 2; n < p; ++n) {
    if (!f.from_int(n).is_square()) return n;
  }
  raise(ErrorKind::InvalidArgument, "no quadratic non-residue mod " + std::to_string(p));
}

std::int64_t parse_integer(std::string_view text) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    raise(ErrorKind::InvalidArgument, "malformed integer '" + std::string(text) + "'");
  }
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

// ---------------------------------------------------------------- F_p

PrimeField::PrimeField(std::uint32_t p) : p_(p) {
  if (p < 5 || p >= (1u << 31) || !is_prime(p)) {
    raise(ErrorKind::InvalidArgument, "prime field needs a prime 5 <= p < 2^31, got " + std::to_string(p));
  }
}

Fp PrimeField::zero() const { return Fp(0, p_); }
Fp PrimeField::one() const { return Fp(1, p_); }
Fp PrimeField::element(std::uint64_t index) const { return Fp(static_cast<std::uint32_t>(index % p_), p_); }

Fp PrimeField::from_int(std::int64_t value) const {
  std::int64_t r = value % static_cast<std::int64_t>(p_);
  if (r < 0) r += p_;
  return Fp(static_cast<std::uint32_t>(r), p_);
}

Fp PrimeField::parse(std::string_view text) const { return from_int(parse_integer(trim(text))); }

Fp Fp::pow(std::uint64_t e) const {
  std::uint32_t base = v_, acc = 1 % p_;
  while (e > 0) {
    if (e & 1) acc = mulmod(acc, base, p_);
    base = mulmod(base, base, p_);
    e >>= 1;
  }
  return Fp(acc, p_);
}

Fp Fp::inverse() const {
  if (v_ == 0) raise(ErrorKind::InvalidArgument, "inverse of zero in F_" + std::to_string(p_));
  return pow(p_ - 2);
}

// Tonelli-Shanks.
std::optional<Fp> Fp::sqrt() const {
  if (v_ == 0) return *this;
  if (!is_square()) return std::nullopt;
  std::uint32_t q = p_ - 1, s = 0;
  while ((q & 1) == 0) {
    q >>= 1;
    ++s;
  }
  Fp z(2, p_);
  while (z.is_square()) z += Fp(1, p_);
  Fp c = z.pow(q), t = pow(q), r = pow((q + 1) / 2);
  std::uint32_t m = s;
  while (!t.is_one()) {
    std::uint32_t i = 0;
    Fp t2 = t;
    while (!t2.is_one()) {
      t2 *= t2;
      ++i;
    }
    Fp b = c;
    for (std::uint32_t j = 0; j + i + 1 < m; ++j) b *= b;
    m = i;
    c = b * b;
    t *= c;
    r *= b;
  }
  return r;
}

// ---------------------------------------------------------------- F_{p^2}

QuadraticExtField::QuadraticExtField(std::uint32_t p) : p_(PrimeField(p).characteristic()), n_(smallest_non_residue(p)) {}

Fp2 QuadraticExtField::zero() const { return Fp2(0, 0, p_, n_); }
Fp2 QuadraticExtField::one() const { return Fp2(1, 0, p_, n_); }
Fp2 QuadraticExtField::generator_i() const { return Fp2(0, 1, p_, n_); }
Fp2 QuadraticExtField::from_int(std::int64_t value) const { return embed(PrimeField(p_).from_int(value)); }

Fp2 QuadraticExtField::element(std::uint64_t index) const {
  index %= size();
  return Fp2(static_cast<std::uint32_t>(index / p_), static_cast<std::uint32_t>(index % p_), p_, n_);
}

Fp2 QuadraticExtField::embed(const Fp& x) const {
  if (x.modulus() != p_) raise(ErrorKind::FieldMismatch, "embedding F_" + std::to_string(x.modulus()));
  return Fp2(x.value(), 0, p_, n_);
}

Fp2 QuadraticExtField::make(const Fp& re, const Fp& im) const { return embed(re) + embed(im) * generator_i(); }

Fp2 QuadraticExtField::parse(std::string_view text) const {
  text = trim(text);
  const PrimeField base(p_);
  if (text.empty()) raise(ErrorKind::InvalidArgument, "empty F_p^2 literal");
  if (text.back() != 'i') return embed(base.parse(text));
  text.remove_suffix(1);
  // find the separating sign of "a+b" / "a-b" (not a leading sign)
  std::size_t split = std::string_view::npos;
  for (std::size_t k = text.size(); k-- > 1;) {
    if (text[k] == '+' || text[k] == '-') {
      split = k;
      break;
    }
  }
  Fp re = base.zero();
  std::string_view im_text = text;
  if (split != std::string_view::npos) {
    re = base.parse(text.substr(0, split));
    im_text = text.substr(text[split] == '+' ? split + 1 : split);
  }
  im_text = trim(im_text);
  Fp im = (im_text.empty() || im_text == "+") ? base.one() : im_text == "-" ? -base.one() : base.parse(im_text);
  return make(re, im);
}

Fp2& Fp2::operator+=(const Fp2& o) {
  check(o);
  a_ = (a_ + o.a_) % p_;
  b_ = (b_ + o.b_) % p_;
  return *this;
}

Fp2& Fp2::operator-=(const Fp2& o) {
  check(o);
  a_ = (a_ + p_ - o.a_) % p_;
  b_ = (b_ + p_ - o.b_) % p_;
  return *this;
}

Fp2& Fp2::operator*=(const Fp2& o) {
  check(o);
  const std::uint64_t p = p_;
  const std::uint64_t ac = static_cast<std::uint64_t>(a_) * o.a_ % p;
  const std::uint64_t bd = static_cast<std::uint64_t>(b_) * o.b_ % p;
  const std::uint64_t ad = static_cast<std::uint64_t>(a_) * o.b_ % p;
  const std::uint64_t bc = static_cast<std::uint64_t>(b_) * o.a_ % p;
  a_ = static_cast<std::uint32_t>((ac + bd * n_) % p);
  b_ = static_cast<std::uint32_t>((ad + bc) % p);
  return *this;
}

Fp2 Fp2::inverse() const {
  if (is_zero()) raise(ErrorKind::InvalidArgument, "inverse of zero in F_p^2");
  // (a + bi)^-1 = (a - bi) / (a^2 - n b^2)
  const Fp a = re(), b = im();
  const Fp norm = a * a - Fp(n_, p_) * b * b;
  const Fp inv = norm.inverse();
  const Fp ra = a * inv, rb = -b * inv;
  return Fp2(ra.value(), rb.value(), p_, n_);
}

Fp2 Fp2::pow(std::uint64_t e) const {
  Fp2 base = *this, acc(1, 0, p_, n_);
  while (e > 0) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

std::string Fp2::to_string() const { return std::to_string(a_) + "+" + std::to_string(b_) + "i"; }

// ---------------------------------------------------------------- Q

Rational RationalField::zero() const { return Rational(0); }
Rational RationalField::one() const { return Rational(1); }
Rational RationalField::from_int(std::int64_t value) const { return Rational(mpq_class(mpz_class(std::to_string(value)))); }

Rational RationalField::parse(std::string_view text) const {
  text = trim(text);
  mpq_class q;
  if (text.empty() || q.set_str(std::string(text), 10) != 0) {
    raise(ErrorKind::InvalidArgument, "malformed rational '" + std::string(text) + "'");
  }
  if (q.get_den() == 0) raise(ErrorKind::InvalidArgument, "zero denominator in '" + std::string(text) + "'");
  return Rational(q);
}

}  // namespace qlab
