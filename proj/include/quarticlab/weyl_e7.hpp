#pragma once

// The odd unimodular lattice H7 = Z e0 + ... + Z e7 with (e0,e0) = 1,
// (ei,ei) = -1, its E7 roots and exceptional lines, and W(E7) acting on them.
// Index labels are 1-based to match the usual l_ij / alpha_ijk names.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "quarticlab/perm_group.hpp"
#include "quarticlab/rng.hpp"

namespace qlab {

using LatticeVector = std::array<int, 8>;

int dot(const LatticeVector& u, const LatticeVector& v);
LatticeVector operator+(const LatticeVector& u, const LatticeVector& v);
LatticeVector operator-(const LatticeVector& u, const LatticeVector& v);
LatticeVector operator-(const LatticeVector& v);
LatticeVector operator*(int s, const LatticeVector& v);

LatticeVector basis_vector(int i);  // e_i for 0 <= i <= 8 (e8 is derived)
LatticeVector canonical_class();    // k = -3e0 + e1 + ... + e7

LatticeVector alpha(int i, int j);         // e_i - e_j, 1 <= i < j <= 8
LatticeVector alpha(int i, int j, int k);  // e0 - e_i - e_j - e_k, 1 <= i < j < k <= 7
LatticeVector line(int i, int j);          // l_ij = e_i + e_j - e8
LatticeVector line_prime(int i, int j);    // l'_ij = e0 - e_i - e_j

enum class LatticeKind { PositiveRoots, Lines };

// PositiveRoots: the 28 alpha_ij (lex) then the 35 alpha_ijk (lex).
// Lines: the 28 l_ij (lex) then the 28 l'_ij (lex).
std::vector<LatticeVector> enumerate(LatticeKind kind);
// Positive roots followed by their negatives.
std::vector<LatticeVector> all_roots();

std::string root_label(const LatticeVector& v);  // "a12", "a123", "-a12"
std::string line_label(const LatticeVector& v);  // "l12", "l'12"
std::string to_string(const LatticeVector& v);

bool is_root(const LatticeVector& v);  // (v,v) = -2 and (v,k) = 0

// s_a(v) = v + (v,a) a
LatticeVector reflect(const LatticeVector& a, const LatticeVector& v);

class WeylElement {
 public:
  using Columns = std::array<LatticeVector, 8>;

  static WeylElement identity();
  static WeylElement reflection(const LatticeVector& a);
  // Column j is the image of e_j.
  explicit WeylElement(const Columns& images) : cols_(images) {}

  const Columns& images() const { return cols_; }
  LatticeVector apply(const LatticeVector& v) const;

  bool preserves_form() const;
  bool fixes_k() const;

  friend WeylElement operator*(const WeylElement& a, const WeylElement& b);
  friend bool operator==(const WeylElement&, const WeylElement&) = default;

 private:
  Columns cols_;
};

std::vector<WeylElement> sym8_generators();  // the 28 s_ij
std::vector<WeylElement> weyl_generators();  // 28 s_ij then 35 s_ijk

// Position of g(points[x]) inside points; throws InvariantViolation if g does
// not permute the list.
Perm permutation_on(const WeylElement& g, std::span<const LatticeVector> points);

// Order of the group generated by `generators`, acting on the 126 roots.
std::uint64_t group_order(std::span<const WeylElement> generators);
PermGroup root_action(std::span<const WeylElement> generators);
std::uint64_t sym8_index();

// Reflection formula versus the combinatorial rules for s_ijk on all 56
// lines. The mutated rule set exchanges the fixed and moved cases and is
// kept as a control.
struct RuleTableReport {
  int cases = 0;
  int mismatches = 0;
  bool ok() const { return cases == 35 * 56 && mismatches == 0; }
};
RuleTableReport rule_table(bool mutated = false);
bool rule_table_crosscheck(bool mutated = false);

// All elements of W(E7) commuting with every generator, identity first.
std::vector<WeylElement> center_elements();

class LedgerMarking {
 public:
  static LedgerMarking identity() { return LedgerMarking(WeylElement::identity()); }
  // Throws InvalidArgument unless the images have the standard Gram matrix
  // and send k to k.
  explicit LedgerMarking(const WeylElement& images);

  const WeylElement& map() const { return phi_; }
  LatticeVector apply(const LatticeVector& v) const { return phi_.apply(v); }

  friend LedgerMarking operator*(const WeylElement& w, const LedgerMarking& m) { return LedgerMarking(w * m.phi_); }
  // Relabelling by an index permutation acts on the right.
  friend LedgerMarking operator*(const LedgerMarking& m, const WeylElement& s) { return LedgerMarking(m.phi_ * s); }

 private:
  WeylElement phi_;
};

// phi(l_ij) for the 28 pairs in lex order.
std::vector<LatticeVector> ledger_classes(const LedgerMarking& m);
// Sorted ledger classes; constant on Sigma_8 relabellings of m.
std::vector<LatticeVector> canonical_class(const LedgerMarking& m);

LedgerMarking random_marking(SplitMix64& rng, int word_length = 64);

struct HessianFiber {
  std::vector<std::vector<LatticeVector>> classes;  // BFS order, class of m first
  std::size_t partner = 0;                          // index of the class of w0 * m
};
HessianFiber hessian_fiber(const LedgerMarking& m);

}  // namespace qlab
