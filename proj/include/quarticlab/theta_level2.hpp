#pragma once

// F2^6 with its symplectic form, the mod-2 reduction of the E7 lattice onto
// it, quadratic refinements (theta characteristics) and Aronhold sets.

#include <array>
#include <cstdint>
#include <vector>

#include "quarticlab/weyl_e7.hpp"

namespace qlab {

// Bit c-1 holds coordinate c; coordinates (1,2), (3,4), (5,6) are paired.
struct F2Vector {
  std::uint8_t bits = 0;

  static constexpr int size = 64;
  static F2Vector unit(int c);  // c in 1..6

  bool operator[](int c) const { return (bits >> (c - 1)) & 1; }
  friend F2Vector operator+(F2Vector u, F2Vector v) { return {static_cast<std::uint8_t>(u.bits ^ v.bits)}; }
  friend auto operator<=>(F2Vector, F2Vector) = default;
};

int symplectic(F2Vector u, F2Vector v);

// q(x) = sum x_c q(e_c) + sum_j x_{2j-1} x_{2j}; any such q polarizes to the
// symplectic form, so the six basis values determine it.
class QuadFormF2 {
 public:
  // Builds q from a full table of 64 values; throws InvariantViolation if
  // the table does not polarize to the symplectic form.
  static QuadFormF2 from_table(const std::array<std::uint8_t, 64>& values);
  explicit QuadFormF2(std::uint8_t basis_values = 0) : basis_(basis_values & 0x3F) {}

  int operator()(F2Vector x) const;
  std::uint8_t basis_values() const { return basis_; }
  int zeros() const;
  int arf() const { return zeros() == 28 ? 1 : 0; }
  bool is_odd() const { return arf() == 1; }
  // q + <v, .>
  QuadFormF2 shifted(F2Vector v) const;
  bool polarizes() const;  // checks all 4096 ordered pairs

  friend auto operator<=>(const QuadFormF2&, const QuadFormF2&) = default;

 private:
  std::uint8_t basis_;
};

// Lattice lifts of a symplectic basis of (k-perp / 2 k-perp) / radical, from
// symplectic Gram-Schmidt on the simple roots a12..a67, a123.
struct SymplecticFrame {
  std::array<LatticeVector, 6> lifts;  // lifts[c-1] reduces to unit(c)
  LatticeVector radical;
};
const SymplecticFrame& symplectic_frame();

// Throws InvalidArgument unless (v,k) = 0.
F2Vector res(const LatticeVector& v);

QuadFormF2 parity_form();

struct ThetaChars {
  std::vector<F2Vector> odd, even;  // shifts v with q_v = q0 + <v,.>
  std::vector<QuadFormF2> odd_forms, even_forms;
};
ThetaChars theta_chars();

// Odd theta characteristic of an exceptional line: l_ij and l'_ij both go to
// the shift res(a_ij).
F2Vector line_theta(const LatticeVector& l);

// The shift v with q = q0 + <v,.>.
F2Vector shift_of(const QuadFormF2& q);

// Image of g in Sp(6,F2): column c-1 is res(g(lift of unit(c))).
using SpImage = std::array<F2Vector, 6>;
SpImage reduce_mod2(const WeylElement& g);
F2Vector apply(const SpImage& g, F2Vector v);
SpImage inverse(const SpImage& g);
// (g.q)(x) = q(g^-1 x)
QuadFormF2 transform(const SpImage& g, const QuadFormF2& q);

// Each set is the sorted list of seven odd shifts.
using AronholdSet = std::array<F2Vector, 7>;
std::vector<AronholdSet> aronhold_enumerate();
bool is_aronhold(const AronholdSet& s);

}  // namespace qlab
