// Acceptance gate: one line per criterion, nonzero exit if any fails.
// Criteria 1-9 call the library directly; 10 runs the CLI binary.

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <string>

#include "quarticlab/polar_duality.hpp"
#include "quarticlab/quadric_nets.hpp"
#include "quarticlab/rng.hpp"
#include "quarticlab/theta_level2.hpp"
#include "quarticlab/weyl_e7.hpp"

#ifndef QLAB_CLI_PATH
#error "QLAB_CLI_PATH must point at the quarticlab binary"
#endif

using namespace qlab;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string frac(int ok, int n) { return std::to_string(ok) + "/" + std::to_string(n); }

Outcome weyl_counts() {
  const auto roots = enumerate(LatticeKind::PositiveRoots);
  const auto lines = enumerate(LatticeKind::Lines);
  const auto w = group_order(weyl_generators());
  const auto s = group_order(sym8_generators());
  const auto center = center_elements();
  bool w0 = center.size() == 2 && center[0] == WeylElement::identity();
  if (w0) {
    for (const auto& a : roots) w0 = w0 && center[1].apply(a) == -a;
    for (int i = 1; i <= 8; ++i)
      for (int j = i + 1; j <= 8; ++j) w0 = w0 && center[1].apply(line(i, j)) == line_prime(i, j);
  }
  const bool ok = roots.size() == 63 && lines.size() == 56 && w == 2903040 && s == 40320 && w == 72 * s && w0;
  return {ok, "roots " + std::to_string(roots.size()) + ", lines " + std::to_string(lines.size()) + ", |W| " +
                  std::to_string(w) + ", |S8| " + std::to_string(s) + ", center " + std::to_string(center.size())};
}

Outcome rule_table_check() {
  const auto t = rule_table();
  // the control must fail, otherwise the comparison is vacuous
  const bool control = !rule_table_crosscheck(true);
  return {t.ok() && control, std::to_string(t.cases) + " cases, " + std::to_string(t.mismatches) + " mismatches"};
}

Outcome theta_check() {
  std::set<std::uint8_t> images;
  for (const auto& a : enumerate(LatticeKind::PositiveRoots)) images.insert(res(a).bits);
  const bool bijective = images.size() == 63 && !images.count(0);
  const auto q0 = parity_form();
  const auto t = theta_chars();
  const auto sets = aronhold_enumerate();
  bool stable = true;
  for (const auto& g : sym8_generators()) stable = stable && transform(reduce_mod2(g), q0) == q0;
  const bool ok = bijective && q0.polarizes() && t.odd.size() == 28 && t.even.size() == 36 && sets.size() == 288 && stable;
  return {ok, "odd " + std::to_string(t.odd.size()) + ", even " + std::to_string(t.even.size()) + ", Aronhold " +
                  std::to_string(sets.size())};
}

Outcome fiber_check() {
  SplitMix64 rng(7001);
  int good = 0;
  const int markings = 6;
  for (int n = 0; n < markings; ++n) {
    const auto fiber = hessian_fiber(random_marking(rng));
    good += fiber.classes.size() == 72 && fiber.partner > 0 && fiber.partner < fiber.classes.size();
  }
  return {good == markings, frac(good, markings) + " markings with 72 classes"};
}

Outcome octad_pipeline() {
  const PrimeField f(101);
  SplitMix64 rng(7002);
  const int samples = 20;
  int ok = 0;
  std::string first_bad;
  for (int n = 0; n < samples; ++n) {
    const auto no = random_general_octad<Fp>(f, rng, true);
    bool good = base_locus(no.net).same_set(no.octad) && self_association_rank(no.octad) == 7;
    const auto h = hessian_quartic(no.net);
    good = good && h.degree() == 4 && !h.is_zero();
    if (smoothness_certificate(no.octad)) good = good && singular_points(h).empty();
    for (int i = 0; i < 8 && good; ++i)
      for (int j = i + 1; j < 8 && good; ++j) {
        const auto bt = bitangent_line(no.net, no.octad, i, j, h);
        const auto& c = bt.certificate;
        good = c.root.scale * (c.root.root * c.root.root) == c.restricted && c.root.root.degree() == 2 &&
               steinerian_secant_check(no.net, no.octad, i, j);
      }
    ok += good;
    if (!good && first_bad.empty()) first_bad = "; sample " + std::to_string(n) + " failed";
  }
  return {ok == samples, frac(ok, samples) + " octads" + first_bad};
}

Outcome round_trip() {
  const PrimeField f(101);
  SplitMix64 rng(7003);
  int ok = 0, tried = 0;
  while (tried < 20) {
    std::vector<ProjPoint<Fp>> plane;
    for (int i = 0; i < 7; ++i) plane.push_back(random_point<Fp>(f, 2, rng));
    if (has_three_collinear(std::span<const ProjPoint<Fp>>(plane))) continue;
    std::optional<Octad<Fp>> octad;
    try {
      octad = octad_from_plane(plane);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::DegenerateConfiguration) continue;
      throw;
    }
    ++tried;
    const auto back = project_octad(*octad, 7);
    ok += projective_equivalence<Fp>(std::span<const ProjPoint<Fp>>(back), std::span<const ProjPoint<Fp>>(plane))
              .has_value();
  }
  return {ok == tried, frac(ok, tried) + " heptads"};
}

bool prime(std::uint32_t n) {
  for (std::uint32_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return n > 1;
}

Outcome kummer() {
  const PrimeField f11(11);
  const auto found = nodal_family_search(heisenberg_family<Fp>(f11), 16);
  if (found.empty()) return {false, "no 16-nodal member over F_11"};
  const auto member11 = heisenberg_family<Fp>(f11).member(found[0]);
  const auto nodes11 = singular_points(member11);
  for (const auto& n : nodes11) {
    const auto e = local_expansion(member11, n);
    if (e.multiplicity != 2 || e.quadratic_rank != 3) return {false, "singular point over F_11 is not a node"};
  }
  const auto lifted = lift_nodal_member(heisenberg_family<Rational>(RationalField{}), nodes11[0]);
  if (!lifted) return {false, "no rational lift"};
  for (std::uint32_t p = 101; p < 400; ++p) {
    if (!prime(p)) continue;
    const PrimeField f(p);
    const auto t = reduce(*lifted, f);
    if (!t) continue;
    const auto member = heisenberg_family<Fp>(f).member(*t);
    const auto nodes = singular_points(member);
    if (nodes.size() != 16) continue;
    SplitMix64 rng(7004);
    const auto fit = dual_interpolate(member, 6, rng);
    if (fit.degree != 4) return {false, "dual degree " + std::to_string(fit.degree) + " at p = " + std::to_string(p)};
    int checked = 0;
    const bool bidual = biduality_check(member, fit.dual_form, 50, rng, &checked);
    const auto dual_sing = singular_points(fit.dual_form).size();
    return {bidual && checked >= 50 && dual_sing == 16,
            std::to_string(found.size()) + " members over F_11; p = " + std::to_string(p) + ", dual degree 4, " +
                std::to_string(checked) + " biduality samples, " + std::to_string(dual_sing) + " dual singular points"};
  }
  return {false, "lift never 16-nodal for p in [101, 400)"};
}

Outcome plane_dual() {
  const PrimeField f(499);
  SplitMix64 rng(7005);
  for (int attempt = 0; attempt < 50; ++attempt) {
    std::vector<Term<Fp>> terms;
    for (const auto& m : monomials_of_degree(3, 4)) terms.push_back({m, f.element(rng.below(499))});
    const SparseForm<Fp> g(f, 3, 4, std::move(terms));
    if (g.is_zero() || !singular_points(g).empty()) continue;
    const auto fit = dual_interpolate(g, 12, rng);
    bool minimal = fit.witness.back().degree == 12 && fit.witness.back().rank + 1 == fit.witness.back().monomials;
    for (std::size_t i = 0; i + 1 < fit.witness.size(); ++i) minimal = minimal && fit.witness[i].rank == fit.witness[i].monomials;
    return {fit.degree == 12 && minimal, "dual degree " + std::to_string(fit.degree)};
  }
  return {false, "no smooth quartic drawn"};
}

Outcome tangency() {
  const PrimeField f(101);
  SplitMix64 rng(7006);
  auto form = [&](int degree) {
    std::vector<Term<Fp>> terms;
    for (const auto& m : monomials_of_degree(3, degree)) terms.push_back({m, f.element(rng.below(101))});
    return SparseForm<Fp>(f, 3, degree, std::move(terms));
  };
  int certified = 0, rejected = 0;
  for (int n = 0; n < 20; ++n) {
    const auto gamma = form(4), q = form(2);
    const Fp lambda = f.element(1 + rng.below(100));
    try {
      const auto r = tangency_divisor(gamma, gamma + lambda * (q * q), rng);
      certified += r.delta_degree == 8 && r.root.scale * (r.root.root * r.root.root) == r.resultant;
    } catch (const Error&) {
    }
  }
  for (int n = 0; n < 20; ++n) {
    try {
      tangency_divisor(form(4), form(4), rng);
    } catch (const Error& e) {
      rejected += e.kind() == ErrorKind::NotEverywhereTangent;
    }
  }
  return {certified == 20 && rejected == 20, frac(certified, 20) + " pencils certified, " + frac(rejected, 20) + " random rejected"};
}

std::string capture(const std::string& cmd, int& status) {
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    status = -1;
    return out;
  }
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  status = pclose(pipe);
  return out;
}

Outcome determinism() {
  const std::string cmd = std::string("\"") + QLAB_CLI_PATH + "\" verify-all --seed 42 2>/dev/null";
  int s1 = 0, s2 = 0;
  const auto a = capture(cmd, s1);
  const auto b = capture(cmd, s2);
  const bool ok = !a.empty() && a == b && s1 != -1 && s2 != -1;
  return {ok, std::to_string(a.size()) + " bytes, exit statuses " + std::to_string(s1) + " and " + std::to_string(s2)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"Weyl counts", 10, weyl_counts},
      {"reflection rule table", 60, rule_table_check},
      {"theta characteristics and Aronhold sets", 30, theta_check},
      {"Hessian fiber of degree 72", 120, fiber_check},
      {"octad pipeline over F_101", 120, octad_pipeline},
      {"octad and plane heptad round trip", 120, round_trip},
      {"Kummer self-duality model", 300, kummer},
      {"plane quartic dual degree", 300, plane_dual},
      {"everywhere tangency", 300, tangency},
      {"verify-all determinism", 600, determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > criteria[i].limit_s) {
      o.pass = false;
      o.detail += "; over the time limit";
    }
    failures += !o.pass;
    std::printf("criterion %2zu %s: %s (%s; %.2f s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].name,
                o.detail.c_str(), secs);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
