#include "quarticlab/weyl_e7.hpp"

#include <algorithm>
#include <map>

#include "quarticlab/errors.hpp"
#include "quarticlab/field.hpp"
#include "quarticlab/linalg.hpp"

namespace qlab {

int dot(const LatticeVector& u, const LatticeVector& v) {
  int s = u[0] * v[0];
  for (int i = 1; i < 8; ++i) s -= u[i] * v[i];
  return s;
}

LatticeVector operator+(const LatticeVector& u, const LatticeVector& v) {
  LatticeVector r;
  for (int i = 0; i < 8; ++i) r[i] = u[i] + v[i];
  return r;
}

LatticeVector operator-(const LatticeVector& u, const LatticeVector& v) {
  LatticeVector r;
  for (int i = 0; i < 8; ++i) r[i] = u[i] - v[i];
  return r;
}

LatticeVector operator-(const LatticeVector& v) { return (-1) * v; }

LatticeVector operator*(int s, const LatticeVector& v) {
  LatticeVector r;
  for (int i = 0; i < 8; ++i) r[i] = s * v[i];
  return r;
}

LatticeVector basis_vector(int i) {
  require(i >= 0 && i <= 8, "basis index must be 0..8");
  if (i == 8) return {-2, 1, 1, 1, 1, 1, 1, 1};
  LatticeVector v{};
  v[i] = 1;
  return v;
}

LatticeVector canonical_class() { return {-3, 1, 1, 1, 1, 1, 1, 1}; }

LatticeVector alpha(int i, int j) {
  require(1 <= i && i < j && j <= 8, "alpha_ij needs 1 <= i < j <= 8");
  return basis_vector(i) - basis_vector(j);
}

LatticeVector alpha(int i, int j, int k) {
  require(1 <= i && i < j && j < k && k <= 7, "alpha_ijk needs 1 <= i < j < k <= 7");
  return basis_vector(0) - basis_vector(i) - basis_vector(j) - basis_vector(k);
}

LatticeVector line(int i, int j) {
  require(1 <= i && i < j && j <= 8, "l_ij needs 1 <= i < j <= 8");
  return basis_vector(i) + basis_vector(j) - basis_vector(8);
}

LatticeVector line_prime(int i, int j) {
  require(1 <= i && i < j && j <= 8, "l'_ij needs 1 <= i < j <= 8");
  return basis_vector(0) - basis_vector(i) - basis_vector(j);
}

std::vector<LatticeVector> enumerate(LatticeKind kind) {
  std::vector<LatticeVector> out;
  if (kind == LatticeKind::PositiveRoots) {
    for (int i = 1; i <= 8; ++i)
      for (int j = i + 1; j <= 8; ++j) out.push_back(alpha(i, j));
    for (int i = 1; i <= 7; ++i)
      for (int j = i + 1; j <= 7; ++j)
        for (int k = j + 1; k <= 7; ++k) out.push_back(alpha(i, j, k));
  } else {
    for (int i = 1; i <= 8; ++i)
      for (int j = i + 1; j <= 8; ++j) out.push_back(line(i, j));
    for (int i = 1; i <= 8; ++i)
      for (int j = i + 1; j <= 8; ++j) out.push_back(line_prime(i, j));
  }
  return out;
}

std::vector<LatticeVector> all_roots() {
  auto r = enumerate(LatticeKind::PositiveRoots);
  const std::size_t n = r.size();
  for (std::size_t i = 0; i < n; ++i) r.push_back(-r[i]);
  return r;
}

std::string to_string(const LatticeVector& v) {
  std::string s = "(";
  for (int i = 0; i < 8; ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

std::string root_label(const LatticeVector& v) {
  for (int i = 1; i <= 8; ++i)
    for (int j = i + 1; j <= 8; ++j) {
      const std::string name = "a" + std::to_string(i) + std::to_string(j);
      if (v == alpha(i, j)) return name;
      if (v == -alpha(i, j)) return "-" + name;
    }
  for (int i = 1; i <= 7; ++i)
    for (int j = i + 1; j <= 7; ++j)
      for (int k = j + 1; k <= 7; ++k) {
        const std::string name = "a" + std::to_string(i) + std::to_string(j) + std::to_string(k);
        if (v == alpha(i, j, k)) return name;
        if (v == -alpha(i, j, k)) return "-" + name;
      }
  raise(ErrorKind::InvalidArgument, "not a root: " + to_string(v));
}

std::string line_label(const LatticeVector& v) {
  for (int i = 1; i <= 8; ++i)
    for (int j = i + 1; j <= 8; ++j) {
      const std::string idx = std::to_string(i) + std::to_string(j);
      if (v == line(i, j)) return "l" + idx;
      if (v == line_prime(i, j)) return "l'" + idx;
    }
  raise(ErrorKind::InvalidArgument, "not an exceptional line: " + to_string(v));
}

bool is_root(const LatticeVector& v) { return dot(v, v) == -2 && dot(v, canonical_class()) == 0; }

LatticeVector reflect(const LatticeVector& a, const LatticeVector& v) {
  require(is_root(a), "reflection needs a root (norm -2, orthogonal to k)");
  return v + dot(v, a) * a;
}

WeylElement WeylElement::identity() {
  Columns c;
  for (int j = 0; j < 8; ++j) c[j] = basis_vector(j);
  return WeylElement(c);
}

WeylElement WeylElement::reflection(const LatticeVector& a) {
  Columns c;
  for (int j = 0; j < 8; ++j) c[j] = reflect(a, basis_vector(j));
  return WeylElement(c);
}

LatticeVector WeylElement::apply(const LatticeVector& v) const {
  LatticeVector r{};
  for (int j = 0; j < 8; ++j)
    if (v[j] != 0)
      for (int i = 0; i < 8; ++i) r[i] += v[j] * cols_[j][i];
  return r;
}

bool WeylElement::preserves_form() const {
  for (int i = 0; i < 8; ++i)
    for (int j = i; j < 8; ++j)
      if (dot(cols_[i], cols_[j]) != dot(basis_vector(i), basis_vector(j))) return false;
  return true;
}

bool WeylElement::fixes_k() const { return apply(canonical_class()) == canonical_class(); }

WeylElement operator*(const WeylElement& a, const WeylElement& b) {
  WeylElement::Columns c;
  for (int j = 0; j < 8; ++j) c[j] = a.apply(b.cols_[j]);
  return WeylElement(c);
}

std::vector<WeylElement> sym8_generators() {
  std::vector<WeylElement> g;
  for (int i = 1; i <= 8; ++i)
    for (int j = i + 1; j <= 8; ++j) g.push_back(WeylElement::reflection(alpha(i, j)));
  return g;
}

std::vector<WeylElement> weyl_generators() {
  auto g = sym8_generators();
  for (int i = 1; i <= 7; ++i)
    for (int j = i + 1; j <= 7; ++j)
      for (int k = j + 1; k <= 7; ++k) g.push_back(WeylElement::reflection(alpha(i, j, k)));
  return g;
}

Perm permutation_on(const WeylElement& g, std::span<const LatticeVector> points) {
  std::map<LatticeVector, std::size_t> index;
  for (std::size_t x = 0; x < points.size(); ++x) index.emplace(points[x], x);
  Perm p(points.size());
  for (std::size_t x = 0; x < points.size(); ++x) {
    auto it = index.find(g.apply(points[x]));
    if (it == index.end()) raise(ErrorKind::InvariantViolation, "element does not permute the point list");
    p[x] = static_cast<std::uint8_t>(it->second);
  }
  return p;
}

PermGroup root_action(std::span<const WeylElement> generators) {
  const auto roots = all_roots();
  std::vector<Perm> perms;
  for (const auto& g : generators) perms.push_back(permutation_on(g, roots));
  return PermGroup(roots.size(), perms);
}

std::uint64_t group_order(std::span<const WeylElement> generators) { return root_action(generators).order(); }

std::uint64_t sym8_index() {
  const std::uint64_t full = group_order(weyl_generators());
  const std::uint64_t sub = group_order(sym8_generators());
  if (full % sub != 0) raise(ErrorKind::InvariantViolation, "subgroup order does not divide group order");
  return full / sub;
}

namespace {

// The bullet rules for s_ijk on l_pq; for l'_pq the same rules composed with
// the swap l <-> l' (s_ijk commutes with w0, which exchanges the two types).
LatticeVector rule_image(int i, int j, int k, const LatticeVector& l, bool mutated) {
  int p = 0, q = 0;
  bool primed = false;
  for (int a = 1; a <= 8 && !p; ++a)
    for (int b = a + 1; b <= 8; ++b) {
      if (l == line(a, b)) { p = a; q = b; break; }
      if (l == line_prime(a, b)) { p = a; q = b; primed = true; break; }
    }
  require(p != 0, "not an exceptional line");
  const std::array<int, 4> quad{i, j, k, 8};
  auto in_quad = [&](int x) { return std::find(quad.begin(), quad.end(), x) != quad.end(); };
  const int meet = int(in_quad(p)) + int(in_quad(q));
  bool fixed = meet == 1;
  if (mutated) fixed = !fixed;
  if (fixed) return l;
  // {s,t}: the rest of whichever 4-set holds {p,q}
  std::vector<int> rest;
  for (int x = 1; x <= 8; ++x)
    if (x != p && x != q && in_quad(x) == in_quad(p)) rest.push_back(x);
  if (rest.size() != 2) {
    // only reachable in the mutated table; give a line that cannot match
    return primed ? line(p, q) : line_prime(p, q);
  }
  return primed ? line(rest[0], rest[1]) : line_prime(rest[0], rest[1]);
}

}  // namespace

RuleTableReport rule_table(bool mutated) {
  RuleTableReport r;
  const auto lines = enumerate(LatticeKind::Lines);
  for (int i = 1; i <= 7; ++i)
    for (int j = i + 1; j <= 7; ++j)
      for (int k = j + 1; k <= 7; ++k) {
        const LatticeVector a = alpha(i, j, k);
        for (const auto& l : lines) {
          ++r.cases;
          if (reflect(a, l) != rule_image(i, j, k, l, mutated)) ++r.mismatches;
        }
      }
  return r;
}

bool rule_table_crosscheck(bool mutated) { return rule_table(mutated).ok(); }

namespace {

const PermGroup& weyl_root_group() {
  static const PermGroup g = root_action(weyl_generators());
  return g;
}

}  // namespace

std::vector<WeylElement> center_elements() {
  // A central z satisfies z s_a z^-1 = s_{z a} = s_a, so z a = +-a for every
  // root. Scan the sign patterns on the simple roots (z k = k is forced) and
  // keep the integral, form-preserving candidates lying in W and commuting
  // with all generators.
  const std::array<LatticeVector, 8> frame{alpha(1, 2), alpha(2, 3), alpha(3, 4), alpha(4, 5),
                                           alpha(5, 6), alpha(6, 7), alpha(1, 2, 3), canonical_class()};
  const RationalField q;
  std::vector<std::vector<Rational>> rows(8, std::vector<Rational>(8));
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c) rows[r][c] = Rational(frame[c][r]);
  const Matrix<Rational> b(q, rows);
  // coordinates of each e_j in the frame
  std::array<std::vector<Rational>, 8> coords;
  for (int j = 0; j < 8; ++j) {
    std::vector<Rational> e(8, q.zero());
    e[j] = q.one();
    auto x = solve(b, std::span<const Rational>(e));
    if (!x) raise(ErrorKind::InvariantViolation, "simple roots and k do not span");
    coords[j] = *x;
  }

  const auto gens = weyl_generators();
  const auto roots = all_roots();
  std::vector<WeylElement> center;
  for (unsigned mask = 0; mask < 128; ++mask) {
    WeylElement::Columns cols;
    bool integral = true;
    for (int j = 0; j < 8 && integral; ++j) {
      std::array<Rational, 8> img{};
      for (int c = 0; c < 8; ++c) {
        const int sign = (c < 7 && (mask >> c) & 1) ? -1 : 1;
        for (int i = 0; i < 8; ++i) img[i] += coords[j][c] * Rational(sign * frame[c][i]);
      }
      for (int i = 0; i < 8 && integral; ++i) {
        if (img[i].value().get_den() != 1) integral = false;
        else cols[j][i] = static_cast<int>(img[i].value().get_num().get_si());
      }
    }
    if (!integral) continue;
    const WeylElement z(cols);
    if (!z.preserves_form() || !z.fixes_k()) continue;
    if (!weyl_root_group().contains(permutation_on(z, roots))) continue;
    bool central = true;
    for (const auto& g : gens) central = central && g * z == z * g;
    if (central) center.push_back(z);
  }
  return center;
}

LedgerMarking::LedgerMarking(const WeylElement& images) : phi_(images) {
  require(phi_.preserves_form(), "marking images must have Gram matrix diag(1,-1,...,-1)");
  require(phi_.fixes_k(), "marking must send k to k");
}

std::vector<LatticeVector> ledger_classes(const LedgerMarking& m) {
  std::vector<LatticeVector> out;
  for (int i = 1; i <= 8; ++i)
    for (int j = i + 1; j <= 8; ++j) out.push_back(m.apply(line(i, j)));
  return out;
}

std::vector<LatticeVector> canonical_class(const LedgerMarking& m) {
  auto c = ledger_classes(m);
  std::sort(c.begin(), c.end());
  return c;
}

LedgerMarking random_marking(SplitMix64& rng, int word_length) {
  require(word_length >= 0, "word length must be non-negative");
  static const auto gens = weyl_generators();
  WeylElement w = WeylElement::identity();
  for (int n = 0; n < word_length; ++n) w = gens[rng.below(gens.size())] * w;
  return LedgerMarking(w);
}

HessianFiber hessian_fiber(const LedgerMarking& m) {
  static const auto gens = weyl_generators();
  static const WeylElement w0 = center_elements().at(1);
  HessianFiber fiber;
  std::map<std::vector<LatticeVector>, std::size_t> seen;
  fiber.classes.push_back(canonical_class(m));
  seen.emplace(fiber.classes[0], 0);
  for (std::size_t n = 0; n < fiber.classes.size(); ++n)
    for (const auto& g : gens) {
      std::vector<LatticeVector> next;
      next.reserve(28);
      for (const auto& v : fiber.classes[n]) next.push_back(g.apply(v));
      std::sort(next.begin(), next.end());
      if (seen.emplace(next, fiber.classes.size()).second) fiber.classes.push_back(std::move(next));
    }
  auto it = seen.find(canonical_class(w0 * m));
  if (it == seen.end()) raise(ErrorKind::InvariantViolation, "w0 partner missing from the fiber");
  fiber.partner = it->second;
  return fiber;
}

}  // namespace qlab
