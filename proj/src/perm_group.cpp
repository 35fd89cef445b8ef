#include "quarticlab/perm_group.hpp"

#include <numeric>
#include <utility>

#include "quarticlab/errors.hpp"

namespace qlab {

Perm identity_perm(std::size_t degree) {
  Perm p(degree);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

Perm compose(const Perm& a, const Perm& b) {
  Perm out(b.size());
  for (std::size_t x = 0; x < b.size(); ++x) out[x] = a[b[x]];
  return out;
}

Perm inverse(const Perm& p) {
  Perm out(p.size());
  for (std::size_t x = 0; x < p.size(); ++x) out[p[x]] = static_cast<std::uint8_t>(x);
  return out;
}

bool is_identity(const Perm& p) {
  for (std::size_t x = 0; x < p.size(); ++x)
    if (p[x] != x) return false;
  return true;
}

namespace {

std::size_t first_moved(const Perm& p) {
  for (std::size_t x = 0; x < p.size(); ++x)
    if (p[x] != x) return x;
  return p.size();
}

}  // namespace

void PermGroup::rebuild(Level& level) const {
  level.transversal.assign(degree_, std::nullopt);
  level.transversal[level.point] = identity_perm(degree_);
  level.orbit = {level.point};
  for (std::size_t i = 0; i < level.orbit.size(); ++i) {
    const std::size_t y = level.orbit[i];
    for (const auto& s : level.gens) {
      const std::size_t z = s[y];
      if (level.transversal[z]) continue;
      level.transversal[z] = compose(s, *level.transversal[y]);
      level.orbit.push_back(z);
    }
  }
}

std::pair<Perm, std::size_t> PermGroup::strip(Perm g, std::size_t from) const {
  for (std::size_t i = from; i < levels_.size(); ++i) {
    const auto& u = levels_[i].transversal[g[levels_[i].point]];
    if (!u) return {std::move(g), i};
    g = compose(inverse(*u), g);
  }
  return {std::move(g), levels_.size()};
}

PermGroup::PermGroup(std::size_t degree, const std::vector<Perm>& generators) : degree_(degree) {
  require(degree >= 1 && degree <= 256, "permutation degree must be 1..256");
  for (const auto& g : generators) {
    require(g.size() == degree, "generator has the wrong degree");
    if (!is_identity(g)) generators_.push_back(g);
  }
  if (generators_.empty()) return;

  // initial base: first moved points, until no generator fixes the whole base
  for (const auto& g : generators_) {
    bool fixes_base = true;
    for (const auto& l : levels_) fixes_base = fixes_base && g[l.point] == l.point;
    if (fixes_base) levels_.push_back({first_moved(g), {}, {}, {}});
  }
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    for (const auto& g : generators_) {
      bool fixes_prefix = true;
      for (std::size_t j = 0; j < i; ++j) fixes_prefix = fixes_prefix && g[levels_[j].point] == levels_[j].point;
      if (fixes_prefix) levels_[i].gens.push_back(g);
    }
    rebuild(levels_[i]);
  }

  // Schreier-Sims: every Schreier generator at level i must sift through the
  // levels below it; otherwise its residue becomes a new strong generator.
  std::ptrdiff_t i = static_cast<std::ptrdiff_t>(levels_.size()) - 1;
  while (i >= 0) {
    auto& level = levels_[i];
    bool extended = false;
    for (std::size_t oi = 0; !extended && oi < level.orbit.size(); ++oi) {
      const std::size_t y = level.orbit[oi];
      for (std::size_t si = 0; !extended && si < level.gens.size(); ++si) {
        const Perm& s = level.gens[si];
        const Perm h = compose(inverse(*level.transversal[s[y]]), compose(s, *level.transversal[y]));
        if (is_identity(h)) continue;
        auto [residue, j] = strip(h, i + 1);
        if (j == levels_.size() && is_identity(residue)) continue;
        if (j == levels_.size()) levels_.push_back({first_moved(residue), {}, {}, {}});
        for (std::size_t l = i + 1; l <= j; ++l) {
          levels_[l].gens.push_back(residue);
          rebuild(levels_[l]);
        }
        i = static_cast<std::ptrdiff_t>(j);
        extended = true;
      }
    }
    if (!extended) --i;
  }
}

std::uint64_t PermGroup::order() const {
  std::uint64_t n = 1;
  for (const auto& l : levels_) n *= l.orbit.size();
  return n;
}

bool PermGroup::contains(const Perm& p) const {
  require(p.size() == degree_, "permutation has the wrong degree");
  auto [residue, j] = strip(p, 0);
  return j == levels_.size() && is_identity(residue);
}

std::vector<std::size_t> PermGroup::base() const {
  std::vector<std::size_t> b;
  for (const auto& l : levels_) b.push_back(l.point);
  return b;
}

std::vector<std::size_t> PermGroup::basic_orbit_sizes() const {
  std::vector<std::size_t> s;
  for (const auto& l : levels_) s.push_back(l.orbit.size());
  return s;
}

std::size_t PermGroup::strong_generator_count() const {
  std::size_t n = 0;
  for (const auto& l : levels_) n += l.gens.size();
  return n;
}

std::vector<std::size_t> PermGroup::orbit(std::size_t point) const {
  require(point < degree_, "point out of range");
  std::vector<bool> seen(degree_, false);
  std::vector<std::size_t> out{point};
  seen[point] = true;
  for (std::size_t i = 0; i < out.size(); ++i)
    for (const auto& g : generators_) {
      const std::size_t z = g[out[i]];
      if (!seen[z]) {
        seen[z] = true;
        out.push_back(z);
      }
    }
  return out;
}

}  // namespace qlab
