#pragma once

// Permutation groups of small degree (< 256) via a deterministic Schreier-Sims
// base and strong generating set.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace qlab {

// p[x] is the image of x.
using Perm = std::vector<std::uint8_t>;

Perm identity_perm(std::size_t degree);
// (a * b)(x) = a(b(x)): apply b first.
Perm compose(const Perm& a, const Perm& b);
Perm inverse(const Perm& p);
bool is_identity(const Perm& p);

class PermGroup {
 public:
  PermGroup(std::size_t degree, const std::vector<Perm>& generators);

  std::size_t degree() const { return degree_; }
  std::uint64_t order() const;
  bool contains(const Perm& p) const;
  std::vector<std::size_t> base() const;
  std::vector<std::size_t> basic_orbit_sizes() const;
  std::size_t strong_generator_count() const;

  // Orbit of a point under the group, in discovery order.
  std::vector<std::size_t> orbit(std::size_t point) const;

 private:
  struct Level {
    std::size_t point;
    std::vector<Perm> gens;
    std::vector<std::optional<Perm>> transversal;  // u[y](point) = y
    std::vector<std::size_t> orbit;
  };

  void rebuild(Level& level) const;
  // Sifts g through levels from `from` on; returns the residue and the level
  // where sifting stopped (levels_.size() when it passed every level).
  std::pair<Perm, std::size_t> strip(Perm g, std::size_t from) const;

  std::size_t degree_;
  std::vector<Perm> generators_;
  std::vector<Level> levels_;
};

}  // namespace qlab
