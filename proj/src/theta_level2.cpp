#include "quarticlab/theta_level2.hpp"

#include <algorithm>
#include <bit>

#include "quarticlab/errors.hpp"

namespace qlab {

F2Vector F2Vector::unit(int c) {
  require(c >= 1 && c <= 6, "F2^6 coordinate must be 1..6");
  return {static_cast<std::uint8_t>(1u << (c - 1))};
}

int symplectic(F2Vector u, F2Vector v) {
  const unsigned swapped = ((u.bits & 0x15u) << 1) | ((u.bits & 0x2Au) >> 1);
  return std::popcount(swapped & v.bits) & 1;
}

int QuadFormF2::operator()(F2Vector x) const {
  int q = std::popcount(static_cast<unsigned>(x.bits & basis_)) & 1;
  for (int j = 0; j < 3; ++j) q ^= ((x.bits >> (2 * j)) & (x.bits >> (2 * j + 1))) & 1;
  return q;
}

QuadFormF2 QuadFormF2::from_table(const std::array<std::uint8_t, 64>& values) {
  for (unsigned u = 0; u < 64; ++u)
    for (unsigned v = 0; v < 64; ++v)
      if ((values[u ^ v] & 1) != ((values[u] ^ values[v] ^ symplectic({std::uint8_t(u)}, {std::uint8_t(v)})) & 1))
        raise(ErrorKind::InvariantViolation, "table is not a quadratic refinement of the symplectic form");
  std::uint8_t b = 0;
  for (int c = 1; c <= 6; ++c)
    if (values[F2Vector::unit(c).bits] & 1) b |= F2Vector::unit(c).bits;
  return QuadFormF2(b);
}

int QuadFormF2::zeros() const {
  int n = 0;
  for (unsigned x = 0; x < 64; ++x) n += (*this)({std::uint8_t(x)}) == 0;
  return n;
}

QuadFormF2 QuadFormF2::shifted(F2Vector v) const {
  std::uint8_t b = basis_;
  for (int c = 1; c <= 6; ++c)
    if (symplectic(v, F2Vector::unit(c))) b ^= F2Vector::unit(c).bits;
  return QuadFormF2(b);
}

bool QuadFormF2::polarizes() const {
  for (unsigned u = 0; u < 64; ++u)
    for (unsigned v = 0; v < 64; ++v) {
      const F2Vector a{std::uint8_t(u)}, b{std::uint8_t(v)};
      if ((*this)(a + b) != ((*this)(a) ^ (*this)(b) ^ symplectic(a, b))) return false;
    }
  return true;
}

namespace {

int mod2(int x) { return x & 1; }

SymplecticFrame build_frame() {
  std::vector<LatticeVector> pool{alpha(1, 2), alpha(2, 3), alpha(3, 4), alpha(4, 5),
                                  alpha(5, 6), alpha(6, 7), alpha(1, 2, 3)};
  SymplecticFrame frame;
  for (int j = 0; j < 3; ++j) {
    std::size_t ai = pool.size(), bi = pool.size();
    for (std::size_t x = 0; x < pool.size() && ai == pool.size(); ++x)
      for (std::size_t y = x + 1; y < pool.size(); ++y)
        if (mod2(dot(pool[x], pool[y]))) {
          ai = x;
          bi = y;
          break;
        }
    if (ai == pool.size()) raise(ErrorKind::InvariantViolation, "mod-2 form degenerates too early");
    const LatticeVector a = pool[ai], b = pool[bi];
    frame.lifts[2 * j] = a;
    frame.lifts[2 * j + 1] = b;
    pool.erase(pool.begin() + bi);
    pool.erase(pool.begin() + ai);
    for (auto& x : pool) {
      const int xb = mod2(dot(x, b)), xa = mod2(dot(x, a));
      x = x + xb * a + xa * b;
    }
  }
  if (pool.size() != 1) raise(ErrorKind::InvariantViolation, "expected a one-dimensional radical");
  frame.radical = pool[0];
  for (const auto& r : all_roots())
    if (mod2(dot(frame.radical, r))) raise(ErrorKind::InvariantViolation, "radical pairs oddly with a root");
  return frame;
}

}  // namespace

const SymplecticFrame& symplectic_frame() {
  static const SymplecticFrame frame = build_frame();
  return frame;
}

F2Vector res(const LatticeVector& v) {
  require(dot(v, canonical_class()) == 0, "res needs a vector orthogonal to k");
  const auto& f = symplectic_frame();
  // coordinate 2j-1 pairs against b_j, coordinate 2j against a_j
  std::uint8_t bits = 0;
  for (int j = 0; j < 3; ++j) {
    if (mod2(dot(v, f.lifts[2 * j + 1]))) bits |= 1u << (2 * j);
    if (mod2(dot(v, f.lifts[2 * j]))) bits |= 1u << (2 * j + 1);
  }
  return {bits};
}

QuadFormF2 parity_form() {
  std::array<std::uint8_t, 64> table{};
  std::array<bool, 64> assigned{};
  assigned[0] = true;
  const auto roots = enumerate(LatticeKind::PositiveRoots);
  for (std::size_t n = 0; n < roots.size(); ++n) {
    const F2Vector r = res(roots[n]);
    if (assigned[r.bits]) raise(ErrorKind::InvariantViolation, "two positive roots share a residue");
    assigned[r.bits] = true;
    table[r.bits] = n < 28 ? 1 : 0;  // the alpha_ij come first
  }
  return QuadFormF2::from_table(table);
}

ThetaChars theta_chars() {
  const QuadFormF2 q0 = parity_form();
  ThetaChars t;
  for (unsigned x = 0; x < 64; ++x) {
    const F2Vector v{std::uint8_t(x)};
    const QuadFormF2 q = q0.shifted(v);
    if (q.is_odd() != (q0(v) == 1)) raise(ErrorKind::InvariantViolation, "parity of q_v disagrees with q0(v)");
    if (q.is_odd()) {
      t.odd.push_back(v);
      t.odd_forms.push_back(q);
    } else {
      t.even.push_back(v);
      t.even_forms.push_back(q);
    }
  }
  return t;
}

F2Vector line_theta(const LatticeVector& l) {
  for (int i = 1; i <= 8; ++i)
    for (int j = i + 1; j <= 8; ++j)
      if (l == line(i, j) || l == line_prime(i, j)) return res(alpha(i, j));
  raise(ErrorKind::InvalidArgument, "not an exceptional line: " + to_string(l));
}

F2Vector shift_of(const QuadFormF2& q) {
  const QuadFormF2 q0 = parity_form();
  // <v, e_{2j-1}> = v_{2j} and <v, e_{2j}> = v_{2j-1}
  std::uint8_t bits = 0;
  for (int j = 0; j < 3; ++j) {
    const F2Vector odd = F2Vector::unit(2 * j + 1), even = F2Vector::unit(2 * j + 2);
    if (q(odd) != q0(odd)) bits |= even.bits;
    if (q(even) != q0(even)) bits |= odd.bits;
  }
  return {bits};
}

SpImage reduce_mod2(const WeylElement& g) {
  SpImage m;
  for (int c = 0; c < 6; ++c) m[c] = res(g.apply(symplectic_frame().lifts[c]));
  return m;
}

F2Vector apply(const SpImage& g, F2Vector v) {
  F2Vector r;
  for (int c = 1; c <= 6; ++c)
    if (v[c]) r = r + g[c - 1];
  return r;
}

SpImage inverse(const SpImage& g) {
  SpImage inv{};
  std::array<bool, 6> found{};
  for (unsigned x = 0; x < 64; ++x) {
    const F2Vector v{std::uint8_t(x)}, w = apply(g, v);
    for (int c = 1; c <= 6; ++c)
      if (w == F2Vector::unit(c)) {
        inv[c - 1] = v;
        found[c - 1] = true;
      }
  }
  for (bool f : found)
    if (!f) raise(ErrorKind::InvalidArgument, "matrix is not invertible over F2");
  return inv;
}

QuadFormF2 transform(const SpImage& g, const QuadFormF2& q) {
  const SpImage inv = inverse(g);
  std::array<std::uint8_t, 64> table{};
  for (unsigned x = 0; x < 64; ++x) table[x] = static_cast<std::uint8_t>(q(apply(inv, {std::uint8_t(x)})));
  return QuadFormF2::from_table(table);
}

bool is_aronhold(const AronholdSet& s) {
  const QuadFormF2 q0 = parity_form();
  for (int i = 0; i < 7; ++i) {
    if (q0(s[i]) != 1) return false;
    for (int j = i + 1; j < 7; ++j) {
      if (s[i] == s[j]) return false;
      for (int k = j + 1; k < 7; ++k)
        if (q0(s[i] + s[j] + s[k]) != 0) return false;
    }
  }
  return true;
}

std::vector<AronholdSet> aronhold_enumerate() {
  const QuadFormF2 q0 = parity_form();
  const auto odd = theta_chars().odd;
  std::vector<AronholdSet> out;
  AronholdSet cur{};
  // extend in increasing index order; each new element must keep every
  // triple sum even
  auto extend = [&](auto&& self, std::size_t from, int depth) -> void {
    if (depth == 7) {
      out.push_back(cur);
      return;
    }
    for (std::size_t x = from; x < odd.size(); ++x) {
      bool ok = true;
      for (int i = 0; i < depth && ok; ++i)
        for (int j = i + 1; j < depth && ok; ++j) ok = q0(cur[i] + cur[j] + odd[x]) == 0;
      if (!ok) continue;
      cur[depth] = odd[x];
      self(self, x + 1, depth + 1);
    }
  };
  extend(extend, 0, 0);
  return out;
}

}  // namespace qlab
