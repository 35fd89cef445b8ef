#include "quarticlab/commands.hpp"

#include <chrono>
#include <iostream>
#include <set>

#include "CLI11.hpp"
#include "quarticlab/polar_duality.hpp"
#include "quarticlab/quadric_nets.hpp"
#include "quarticlab/rng.hpp"
#include "quarticlab/theta_level2.hpp"
#include "quarticlab/weyl_e7.hpp"

namespace qlab {

bool Report::passed() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

Check& Report::check(const std::string& name, bool pass, const std::string& detail) {
  checks.push_back({name, pass, detail});
  return checks.back();
}

Json Report::to_json(bool with_timings) const {
  Json cs = Json::array();
  for (const auto& c : checks) cs.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  Json j = {{"command", command}, {"config", config}, {"results", results}, {"checks", std::move(cs)},
            {"status", passed() ? "pass" : "fail"}};
  if (with_timings) {
    Json t = Json::object();
    for (const auto& [name, ms] : timings) t[name] = ms;
    j["timings_ms"] = std::move(t);
  }
  return j;
}

Report Report::from_json(const Json& doc) {
  Report r;
  try {
    r.command = doc.at("command").get<std::string>();
    r.config = doc.at("config");
    r.results = doc.at("results");
    for (const auto& c : doc.at("checks"))
      r.checks.push_back({c.at("name").get<std::string>(), c.at("pass").get<bool>(), c.at("detail").get<std::string>()});
    if (doc.contains("timings_ms"))
      for (const auto& [name, ms] : doc.at("timings_ms").items()) r.timings.emplace_back(name, ms.get<double>());
  } catch (const Json::exception& e) {
    throw DatasetError("report", e.what());
  }
  return r;
}

std::string command_name(const RunConfig& cfg) {
  std::string s;
  for (const auto& w : cfg.command) s += (s.empty() ? "" : " ") + w;
  return s;
}

namespace {

using Clock = std::chrono::steady_clock;

template <class F>
auto timed(Report& rep, const std::string& name, F&& f) {
  const auto start = Clock::now();
  if constexpr (std::is_void_v<decltype(f())>) {
    f();
    rep.timings.emplace_back(name, std::chrono::duration<double, std::milli>(Clock::now() - start).count());
  } else {
    auto out = f();
    rep.timings.emplace_back(name, std::chrono::duration<double, std::milli>(Clock::now() - start).count());
    return out;
  }
}

PrimeField field_for(const RunConfig& cfg, Report& rep, std::uint32_t fallback) {
  const std::uint32_t p = cfg.prime.value_or(fallback);
  try {
    PrimeField f(p);
    rep.config["prime"] = p;
    return f;
  } catch (const Error& e) {
    throw UsageError(std::string("--prime: ") + e.what());
  }
}

int positive(std::optional<int> v, int fallback, const char* flag) {
  const int x = v.value_or(fallback);
  if (x <= 0) throw UsageError(std::string(flag) + " must be positive");
  return x;
}

void echo_seed(const RunConfig& cfg, Report& rep) { rep.config["seed"] = cfg.seed; }

SparseForm<Fp> random_form(const PrimeField& f, int num_vars, int degree, SplitMix64& rng) {
  std::vector<Term<Fp>> terms;
  for (const auto& m : monomials_of_degree(num_vars, degree)) terms.push_back({m, f.element(rng.below(f.size()))});
  return SparseForm<Fp>(f, num_vars, degree, std::move(terms));
}

SparseForm<Fp> random_smooth_plane_quartic(const PrimeField& f, SplitMix64& rng) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    auto g = random_form(f, 3, 4, rng);
    if (!g.is_zero() && singular_points(g).empty()) return g;
  }
  raise(ErrorKind::DegenerateConfiguration, "no smooth plane quartic in 100 draws");
}

std::string pair_label(int i, int j) { return std::to_string(i + 1) + std::to_string(j + 1); }

std::string f2_label(F2Vector v) {
  std::string s;
  for (int c = 1; c <= 6; ++c) s += v[c] ? '1' : '0';
  return s;
}

// ---- octads and nets ------------------------------------------------------

struct Configuration {
  QuadricNet<Fp> net;
  std::optional<Octad<Fp>> octad;  // known base points, if any
  bool sampled = false;
};

// The net from --input (a net or an octad file) or a random general octad.
Configuration load_configuration(const RunConfig& cfg, Report& rep, SplitMix64& rng) {
  if (cfg.input) {
    const Json doc = load_json_file(*cfg.input);
    const std::string kind = dataset_kind(doc);
    const std::uint32_t p = dataset_prime(doc);
    if (cfg.prime && *cfg.prime != p) throw UsageError("--prime differs from the dataset prime " + std::to_string(p));
    rep.config["prime"] = p;
    rep.config["input"] = *cfg.input;
    if (kind == "net") return {net_from_json(doc), std::nullopt, false};
    if (kind == "octad") {
      auto octad = octad_from_json(doc);
      std::vector<ProjPoint<Fp>> seven(octad.points().begin(), octad.points().begin() + 7);
      try {
        return {net_through(seven), std::move(octad), false};
      } catch (const Error& e) {
        throw DatasetError("points", std::string("first seven points do not cut out a net: ") + e.what());
      }
    }
    throw DatasetError("kind", "expected \"net\" or \"octad\", got \"" + kind + "\"");
  }
  const PrimeField f = field_for(cfg, rep, 101);
  echo_seed(cfg, rep);
  auto no = random_general_octad<Fp>(f, rng, true);
  return {std::move(no.net), std::move(no.octad), true};
}

void octad_build(const RunConfig& cfg, Report& rep) {
  SplitMix64 rng(cfg.seed);
  auto conf = load_configuration(cfg, rep, rng);
  rep.results["net"] = net_to_json(conf.net);
  try {
    const auto locus = timed(rep, "base_locus", [&] { return base_locus(conf.net); });
    rep.results["base_locus"] = to_json(locus.points());
    const int r = self_association_rank(locus);
    rep.results["self_association_rank"] = r;
    rep.results["smoothness_certificate"] = smoothness_certificate(locus);
    rep.check("base locus is 8 rational simple points", true);
    rep.check("self-association rank is 7", r == 7, "rank " + std::to_string(r));
    if (conf.octad) rep.check("base locus matches the octad", locus.same_set(*conf.octad));
  } catch (const Error& e) {
    rep.check("base locus is 8 rational simple points", false, e.what());
  }
}

Octad<Fp> load_octad(const RunConfig& cfg, Report& rep, SplitMix64& rng) {
  auto conf = load_configuration(cfg, rep, rng);
  if (conf.octad) return *conf.octad;
  return base_locus(conf.net);
}

void octad_project(const RunConfig& cfg, Report& rep) {
  if (cfg.center < 1 || cfg.center > 8) throw UsageError("--center must be 1..8");
  SplitMix64 rng(cfg.seed);
  const auto octad = load_octad(cfg, rep, rng);
  rep.config["center"] = cfg.center;
  rep.results["octad"] = to_json(octad.points());
  try {
    const auto img = project_octad(octad, cfg.center - 1);
    rep.results["image"] = to_json(img);
    rep.results["three_collinear"] = has_three_collinear(std::span<const ProjPoint<Fp>>(img));
    rep.check("projection is defined", true);
    rep.check("image spans the plane", span_dimension(img) == 2);
  } catch (const Error& e) {
    rep.check("projection is defined", false, e.what());
  }
}

// 7 plane points with no three collinear whose association is not special.
struct Heptad {
  std::vector<ProjPoint<Fp>> plane;
  Octad<Fp> octad;
  int skipped;
};

Heptad random_heptad(const PrimeField& f, SplitMix64& rng) {
  int skipped = 0;
  for (int attempt = 0; attempt < 200; ++attempt) {
    std::vector<ProjPoint<Fp>> plane;
    for (int i = 0; i < 7; ++i) plane.push_back(random_point<Fp>(f, 2, rng));
    if (has_three_collinear(std::span<const ProjPoint<Fp>>(plane))) continue;
    try {
      auto octad = octad_from_plane(plane);
      return {std::move(plane), std::move(octad), skipped};
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DegenerateConfiguration) throw;
      ++skipped;
    }
  }
  raise(ErrorKind::DegenerateConfiguration, "no usable heptad in 200 draws");
}

bool round_trips(const std::vector<ProjPoint<Fp>>& plane, const Octad<Fp>& octad) {
  const auto back = project_octad(octad, 7);
  return projective_equivalence<Fp>(std::span<const ProjPoint<Fp>>(back), std::span<const ProjPoint<Fp>>(plane))
      .has_value();
}

void octad_from_plane_cmd(const RunConfig& cfg, Report& rep) {
  std::vector<ProjPoint<Fp>> plane;
  std::optional<Octad<Fp>> octad;
  if (cfg.input) {
    const Json doc = load_json_file(*cfg.input);
    plane = plane_points_from_json(doc);
    rep.config["prime"] = dataset_prime(doc);
    rep.config["input"] = *cfg.input;
    try {
      octad = octad_from_plane(plane);
    } catch (const Error& e) {
      rep.results["plane"] = to_json(plane);
      rep.check("association defined", false, e.what());
      return;
    }
  } else {
    const PrimeField f = field_for(cfg, rep, 101);
    echo_seed(cfg, rep);
    SplitMix64 rng(cfg.seed);
    auto h = random_heptad(f, rng);
    plane = h.plane;
    octad = h.octad;
    rep.results["special_heptads_skipped"] = h.skipped;
  }
  rep.results["plane"] = to_json(plane);
  rep.results["octad"] = to_json(octad->points());
  rep.check("association defined", true);
  rep.check("self-association rank is 7", self_association_rank(*octad) == 7);
  rep.check("projection from x8 returns the heptad up to projectivity", round_trips(plane, *octad));
}

void hessian_cmd(const RunConfig& cfg, Report& rep) {
  SplitMix64 rng(cfg.seed);
  auto conf = load_configuration(cfg, rep, rng);
  rep.results["net"] = net_to_json(conf.net);
  try {
    const auto h = hessian_quartic(conf.net);
    rep.results["hessian"] = to_json(h);
    rep.check("Hessian is a quartic", h.degree() == 4 && !h.is_zero());
    const auto sing = timed(rep, "singular_points", [&] { return singular_points(h); });
    rep.results["rational_singular_points"] = to_json(sing);
    if (conf.octad) {
      const bool cert = smoothness_certificate(*conf.octad);
      rep.results["smoothness_certificate"] = cert;
      if (cert) rep.check("no rational singular point", sing.empty(), std::to_string(sing.size()) + " found");
    }
  } catch (const Error& e) {
    rep.check("Hessian is a quartic", false, e.what());
  }
}

struct PairTally {
  int ok = 0;
  std::string first_failure;
};

void bitangents_cmd(const RunConfig& cfg, Report& rep) {
  SplitMix64 rng(cfg.seed);
  auto conf = load_configuration(cfg, rep, rng);
  const auto octad = conf.octad ? *conf.octad : base_locus(conf.net);
  const auto h = hessian_quartic(conf.net);
  rep.results["octad"] = to_json(octad.points());
  Json lines = Json::array();
  PairTally t;
  for (int i = 0; i < 8; ++i)
    for (int j = i + 1; j < 8; ++j) {
      try {
        const auto bt = bitangent_line(conf.net, octad, i, j, h);
        lines.push_back({{"pair", pair_label(i, j)},
                         {"line", to_json(bt.line)},
                         {"restricted", to_json(bt.certificate.restricted)},
                         {"contacts", {to_json(bt.certificate.contacts[0]), to_json(bt.certificate.contacts[1])}}});
        ++t.ok;
      } catch (const Error& e) {
        lines.push_back({{"pair", pair_label(i, j)}, {"error", e.what()}});
        if (t.first_failure.empty()) t.first_failure = pair_label(i, j) + ": " + e.what();
      }
    }
  rep.results["bitangents"] = std::move(lines);
  rep.check("28 bitangent certificates are perfect squares", t.ok == 28,
            std::to_string(t.ok) + "/28" + (t.first_failure.empty() ? "" : "; " + t.first_failure));
}

void steinerian_cmd(const RunConfig& cfg, Report& rep) {
  SplitMix64 rng(cfg.seed);
  auto conf = load_configuration(cfg, rep, rng);
  const auto octad = conf.octad ? *conf.octad : base_locus(conf.net);
  rep.results["octad"] = to_json(octad.points());
  Json secants = Json::array();
  PairTally t;
  for (int i = 0; i < 8; ++i)
    for (int j = i + 1; j < 8; ++j) {
      try {
        const auto st = steinerian_secant_points(conf.net, octad, i, j);
        const bool ok = steinerian_secant_check(conf.net, octad, i, j);
        secants.push_back({{"pair", pair_label(i, j)}, {"st_u", to_json(st[0])}, {"st_v", to_json(st[1])}, {"collinear", ok}});
        if (ok) ++t.ok;
        else if (t.first_failure.empty()) t.first_failure = pair_label(i, j) + ": not on the secant";
      } catch (const Error& e) {
        secants.push_back({{"pair", pair_label(i, j)}, {"error", e.what()}});
        if (t.first_failure.empty()) t.first_failure = pair_label(i, j) + ": " + e.what();
      }
    }
  rep.results["secants"] = std::move(secants);
  rep.check("St(u), St(v) lie on the line x_i x_j for all 28 pairs", t.ok == 28,
            std::to_string(t.ok) + "/28" + (t.first_failure.empty() ? "" : "; " + t.first_failure));
}

// ---- duality -----------------------------------------------------------

Json witness_json(const std::vector<FitWitness>& w) {
  Json a = Json::array();
  for (const auto& x : w) a.push_back({{"degree", x.degree}, {"monomials", x.monomials}, {"rank", x.rank}});
  return a;
}

bool minimal_witness(const DualFitReport<Fp>& r) {
  if (r.witness.empty() || r.witness.back().degree != r.degree) return false;
  for (std::size_t i = 0; i + 1 < r.witness.size(); ++i)
    if (r.witness[i].rank != r.witness[i].monomials) return false;
  return r.witness.back().rank + 1 == r.witness.back().monomials;
}

void dual_fit(const RunConfig& cfg, Report& rep) {
  SplitMix64 rng(cfg.seed);
  const int bound = positive(cfg.degree_bound, 12, "--degree-bound");
  rep.config["degree_bound"] = bound;
  std::optional<SparseForm<Fp>> f;
  bool smooth_plane_quartic = false;
  if (cfg.input) {
    const Json doc = load_json_file(*cfg.input);
    f = form_from_json(doc);
    rep.config["prime"] = dataset_prime(doc);
    rep.config["input"] = *cfg.input;
    smooth_plane_quartic = f->num_vars() == 3 && f->degree() == 4 && singular_points(*f).empty();
  } else {
    const PrimeField field = field_for(cfg, rep, 499);
    echo_seed(cfg, rep);
    f = random_smooth_plane_quartic(field, rng);
    smooth_plane_quartic = true;
  }
  rep.results["form"] = to_json(*f);
  try {
    const auto fit = timed(rep, "dual_interpolate", [&] { return dual_interpolate(*f, bound, rng); });
    rep.results["dual_degree"] = fit.degree;
    rep.results["sample_count"] = fit.sample_count;
    rep.results["witness"] = witness_json(fit.witness);
    rep.results["dual_form"] = to_json(fit.dual_form);
    rep.check("unique dual form found", true, "degree " + std::to_string(fit.degree));
    rep.check("lower degrees have no fit (minimality witness)", minimal_witness(fit));
    if (smooth_plane_quartic) rep.check("smooth plane quartic has a degree-12 dual", fit.degree == 12);
  } catch (const Error& e) {
    rep.check("unique dual form found", false, e.what());
  }
}

bool is_prime_u32(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint32_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

struct KummerModel {
  int hits11 = 0;
  std::vector<Fp> params11;
  ProjPoint<Fp> node11;
  std::vector<Rational> lifted;
  std::uint32_t prime = 0;
  std::vector<Fp> params;
  std::vector<ProjPoint<Fp>> nodes;
};

Json fp_list(const std::vector<Fp>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(x.to_string());
  return a;
}

// Scan the Heisenberg family over F_11 for 16-nodal members, lift the first
// one to Q through its first node, and reduce at the first prime >= start
// where the lift is again 16-nodal.
KummerModel kummer_model(std::uint32_t start) {
  const PrimeField f11(11);
  const auto fam11 = heisenberg_family<Fp>(f11);
  const auto found = nodal_family_search(fam11, 16);
  if (found.empty()) raise(ErrorKind::InvariantViolation, "no 16-nodal member over F_11");
  const auto nodes11 = singular_points(fam11.member(found[0]));
  auto lifted = lift_nodal_member(heisenberg_family<Rational>(RationalField{}), nodes11.at(0));
  if (!lifted) raise(ErrorKind::InvariantViolation, "node does not lift to a unique rational member");
  const auto back = reduce(*lifted, f11);
  if (!back || *back != found[0]) raise(ErrorKind::InvariantViolation, "rational lift does not reduce to the F_11 member");
  for (std::uint32_t p = start, tries = 0; tries < 200; ++p) {
    if (!is_prime_u32(p) || p < 5) continue;
    ++tries;
    const PrimeField f(p);
    const auto t = reduce(*lifted, f);
    if (!t) continue;
    const auto member = heisenberg_family<Fp>(f).member(*t);
    auto nodes = singular_points(member);
    if (nodes.size() != 16) continue;
    bool all_nodes = true;
    for (const auto& n : nodes) all_nodes = all_nodes && is_node(member, n);
    if (!all_nodes) continue;
    return {static_cast<int>(found.size()), found[0], nodes11[0], *lifted, p, *t, std::move(nodes)};
  }
  raise(ErrorKind::InvariantViolation, "no prime keeps the lifted member 16-nodal");
}

Json kummer_json(const KummerModel& k) {
  Json lifted = Json::array();
  for (const auto& x : k.lifted) lifted.push_back(x.to_string());
  return {{"hits_over_f11", k.hits11}, {"params_f11", fp_list(k.params11)}, {"node_f11", to_json(k.node11)},
          {"params_q", std::move(lifted)}, {"prime", k.prime}, {"params", fp_list(k.params)},
          {"nodes", to_json(k.nodes)}};
}

// Checks shared by `dual bidual` and the verify-all Kummer criterion.
void kummer_checks(const KummerModel& k, int samples, int bound, SplitMix64& rng, Report& rep, Json& out) {
  const PrimeField f(k.prime);
  const auto member = heisenberg_family<Fp>(f).member(k.params);
  rep.check("member has 16 nodes (multiplicity 2, rank-3 tangent cone)", k.nodes.size() == 16);
  try {
    const auto fit = timed(rep, "kummer_dual", [&] { return dual_interpolate(member, bound, rng); });
    out["dual_degree"] = fit.degree;
    out["witness"] = witness_json(fit.witness);
    out["dual_form"] = to_json(fit.dual_form);
    rep.check("dual has degree 4 with a unique form", fit.degree == 4 && minimal_witness(fit));
    int checked = 0;
    const bool bidual = biduality_check(member, fit.dual_form, samples, rng, &checked);
    out["biduality_samples"] = checked;
    rep.check("biduality on " + std::to_string(samples) + " samples", bidual && checked >= samples,
              std::to_string(checked) + " checked");
    const auto dual_sing = timed(rep, "kummer_dual_singular", [&] { return singular_points(fit.dual_form); });
    out["dual_singular_points"] = dual_sing.size();
    rep.check("dual has exactly 16 singular rational points", dual_sing.size() == 16);
  } catch (const Error& e) {
    rep.check("dual has degree 4 with a unique form", false, e.what());
  }
}

void dual_bidual(const RunConfig& cfg, Report& rep) {
  SplitMix64 rng(cfg.seed);
  const int samples = positive(cfg.samples, 50, "--samples");
  const int bound = positive(cfg.degree_bound, 6, "--degree-bound");
  rep.config["samples"] = samples;
  rep.config["degree_bound"] = bound;
  if (cfg.input) {
    const Json doc = load_json_file(*cfg.input);
    const auto f = form_from_json(doc);
    rep.config["prime"] = dataset_prime(doc);
    rep.config["input"] = *cfg.input;
    rep.results["form"] = to_json(f);
    try {
      const auto fit = dual_interpolate(f, bound, rng);
      rep.results["dual_degree"] = fit.degree;
      rep.results["dual_form"] = to_json(fit.dual_form);
      int checked = 0;
      const bool ok = biduality_check(f, fit.dual_form, samples, rng, &checked);
      rep.results["biduality_samples"] = checked;
      rep.check("biduality on " + std::to_string(samples) + " samples", ok && checked >= samples);
    } catch (const Error& e) {
      rep.check("dual form found", false, e.what());
    }
    return;
  }
  const PrimeField start = field_for(cfg, rep, 101);
  echo_seed(cfg, rep);
  const auto k = timed(rep, "kummer_model", [&] { return kummer_model(start.characteristic()); });
  rep.results["kummer"] = kummer_json(k);
  kummer_checks(k, samples, bound, rng, rep, rep.results["kummer"]);
}

void dual_nodal_search(const RunConfig& cfg, Report& rep) {
  const PrimeField f = field_for(cfg, rep, 11);
  if (cfg.nodes < 0) throw UsageError("--nodes must be non-negative");
  rep.config["nodes"] = cfg.nodes;
  rep.config["family"] = "x^4+y^4+z^4+w^4 + a(x^2y^2+z^2w^2) + b(x^2z^2+y^2w^2) + c(x^2w^2+y^2z^2) + d xyzw";
  const auto fam = heisenberg_family<Fp>(f);
  const auto found = timed(rep, "nodal_family_search", [&] { return nodal_family_search(fam, cfg.nodes); });
  rep.results["count"] = found.size();
  Json first = Json::array();
  for (std::size_t i = 0; i < found.size() && i < 10; ++i) first.push_back(fp_list(found[i]));
  rep.results["first"] = std::move(first);
  rep.check("at least one member found", !found.empty(), std::to_string(found.size()) + " members");
  if (found.empty()) return;
  const auto member = fam.member(found[0]);
  const auto nodes = singular_points(member);
  Json nj = Json::array();
  bool ok = static_cast<int>(nodes.size()) == cfg.nodes;
  for (const auto& n : nodes) {
    const auto e = local_expansion(member, n);
    nj.push_back({{"point", to_json(n)}, {"multiplicity", e.multiplicity}, {"quadratic_rank", e.quadratic_rank}});
    ok = ok && e.multiplicity == 2 && e.quadratic_rank == 3;
  }
  rep.results["first_nodes"] = std::move(nj);
  rep.check("first member's singular points are all nodes", ok);
}

// Pencil pairs (G, G + lambda Q^2) certified, random pairs rejected.
struct TangencyTally {
  int certified = 0, rejected = 0;
  Json example;
};

TangencyTally tangency_trials(const PrimeField& f, int samples, SplitMix64& rng) {
  TangencyTally t;
  for (int n = 0; n < samples; ++n) {
    const auto gamma = random_form(f, 3, 4, rng);
    const auto q = random_form(f, 3, 2, rng);
    const Fp lambda = f.element(1 + rng.below(f.size() - 1));
    try {
      const auto r = tangency_divisor(gamma, gamma + lambda * (q * q), rng);
      const bool square = r.root.scale * (r.root.root * r.root.root) == r.resultant;
      if (r.delta_degree == 8 && square) ++t.certified;
      if (n == 0) {
        Json contacts = Json::array();
        for (const auto& c : r.contacts) contacts.push_back({{"point", to_json(c.point)}, {"intersection", c.intersection}});
        t.example = {{"delta_degree", r.delta_degree}, {"rational_delta_degree", r.rational_delta_degree},
                     {"contacts", std::move(contacts)}};
      }
    } catch (const Error&) {
    }
  }
  for (int n = 0; n < samples; ++n) {
    try {
      tangency_divisor(random_form(f, 3, 4, rng), random_form(f, 3, 4, rng), rng);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::NotEverywhereTangent) ++t.rejected;
    }
  }
  return t;
}

void tangency_cmd(const RunConfig& cfg, Report& rep) {
  const PrimeField f = field_for(cfg, rep, 101);
  echo_seed(cfg, rep);
  const int samples = positive(cfg.samples, 20, "--samples");
  rep.config["samples"] = samples;
  SplitMix64 rng(cfg.seed);
  const auto t = timed(rep, "tangency", [&] { return tangency_trials(f, samples, rng); });
  rep.results["pencil_pairs_certified"] = t.certified;
  rep.results["random_pairs_rejected"] = t.rejected;
  rep.results["first_pencil"] = t.example;
  rep.check("pencil pairs certified with Delta of degree 8", t.certified == samples,
            std::to_string(t.certified) + "/" + std::to_string(samples));
  rep.check("random pairs rejected", t.rejected == samples, std::to_string(t.rejected) + "/" + std::to_string(samples));
}

// ---- Weyl group and theta characteristics ------------------------------

void weyl_counts_into(Report& rep, Json& out) {
  const auto roots = enumerate(LatticeKind::PositiveRoots);
  const auto lines = enumerate(LatticeKind::Lines);
  const auto gens = weyl_generators();
  const auto s8 = sym8_generators();
  const std::uint64_t w = group_order(gens), s = group_order(s8);
  const auto center = center_elements();
  out["positive_roots"] = roots.size();
  out["lines"] = lines.size();
  out["weyl_order"] = w;
  out["sym8_order"] = s;
  out["index"] = w / s;
  out["center_size"] = center.size();
  rep.check("63 positive roots", roots.size() == 63);
  rep.check("56 exceptional lines", lines.size() == 56);
  rep.check("|W(E7)| = 2903040", w == 2903040);
  rep.check("|<s_ij>| = 40320", s == 40320);
  rep.check("index 72", w == 72 * s);
  bool w0_ok = center.size() == 2 && center[0] == WeylElement::identity();
  if (w0_ok) {
    const auto& w0 = center[1];
    for (const auto& a : roots) w0_ok = w0_ok && w0.apply(a) == -a;
    w0_ok = w0_ok && w0.fixes_k();
    for (int i = 1; i <= 8; ++i)
      for (int j = i + 1; j <= 8; ++j) w0_ok = w0_ok && w0.apply(line(i, j)) == line_prime(i, j);
  }
  rep.check("center is {1, w0}, w0 = -1 on roots, w0(l_ij) = l'_ij", w0_ok);
}

void weyl_counts(const RunConfig&, Report& rep) {
  timed(rep, "weyl_counts", [&] { weyl_counts_into(rep, rep.results); });
  const auto group = root_action(weyl_generators());
  const auto lines = enumerate(LatticeKind::Lines);
  std::vector<Perm> on_lines;
  for (const auto& g : weyl_generators()) on_lines.push_back(permutation_on(g, lines));
  const auto root_orbit = group.orbit(0).size(), line_orbit = PermGroup(56, on_lines).orbit(0).size();
  rep.results["root_orbit"] = root_orbit;
  rep.results["line_orbit"] = line_orbit;
  rep.check("transitive on the 126 roots", root_orbit == 126);
  rep.check("transitive on the 56 lines", line_orbit == 56);
  const auto table = rule_table();
  rep.results["rule_table_cases"] = table.cases;
  rep.check("reflection rules agree on all 35 x 56 cases", table.ok(), std::to_string(table.mismatches) + " mismatches");
}

Json class_json(const std::vector<LatticeVector>& cls) {
  Json a = Json::array();
  for (const auto& v : cls) a.push_back(line_label(v));
  return a;
}

void fibers_into(int markings, SplitMix64& rng, Report& rep, Json& out) {
  Json fibers = Json::array();
  int good = 0;
  for (int n = 0; n < markings; ++n) {
    const auto m = n == 0 ? LedgerMarking::identity() : random_marking(rng);
    const auto fiber = hessian_fiber(m);
    const bool ok = fiber.classes.size() == 72 && fiber.partner != 0;
    good += ok;
    fibers.push_back({{"classes", fiber.classes.size()},
                      {"partner_index", fiber.partner},
                      {"marking_class", class_json(fiber.classes[0])}});
  }
  out["fibers"] = std::move(fibers);
  rep.check("72 classes containing the w0 partner for every marking", good == markings,
            std::to_string(good) + "/" + std::to_string(markings));
}

void weyl_fiber(const RunConfig& cfg, Report& rep) {
  echo_seed(cfg, rep);
  const int markings = positive(cfg.samples, 6, "--samples");
  rep.config["samples"] = markings;
  SplitMix64 rng(cfg.seed);
  timed(rep, "hessian_fiber", [&] { fibers_into(markings, rng, rep, rep.results); });
}

void theta_counts_into(Report& rep, Json& out) {
  std::set<std::uint8_t> images;
  for (const auto& a : enumerate(LatticeKind::PositiveRoots)) images.insert(res(a).bits);
  const bool bijective = images.size() == 63 && !images.count(0);
  out["root_residues"] = images.size();
  rep.check("res maps the 63 positive roots onto F2^6 \\ {0}", bijective);
  try {
    const auto q0 = parity_form();
    out["q0_basis_values"] = f2_label(F2Vector{q0.basis_values()});
    out["q0_arf"] = q0.arf();
    rep.check("q0 polarizes on all 4096 pairs", q0.polarizes());
    rep.check("q0 has Arf invariant 0", q0.arf() == 0);
    const auto t = theta_chars();
    out["odd"] = t.odd.size();
    out["even"] = t.even.size();
    rep.check("28 odd and 36 even characteristics", t.odd.size() == 28 && t.even.size() == 36);
    bool stable = true;
    for (const auto& s : sym8_generators()) stable = stable && transform(reduce_mod2(s), q0) == q0;
    rep.check("Sigma_8 image stabilizes q0", stable);
  } catch (const Error& e) {
    rep.check("q0 polarizes on all 4096 pairs", false, e.what());
  }
}

void theta_counts(const RunConfig&, Report& rep) {
  const auto& frame = symplectic_frame();
  Json lifts = Json::array();
  for (const auto& v : frame.lifts) lifts.push_back(to_string(v));
  rep.results["symplectic_lifts"] = std::move(lifts);
  rep.results["radical"] = to_string(frame.radical);
  theta_counts_into(rep, rep.results);
}

void theta_aronhold(const RunConfig&, Report& rep) {
  const auto sets = timed(rep, "aronhold_enumerate", [] { return aronhold_enumerate(); });
  rep.results["count"] = sets.size();
  Json first = Json::array();
  for (std::size_t i = 0; i < sets.size() && i < 5; ++i) {
    Json s = Json::array();
    for (const auto& v : sets[i]) s.push_back(f2_label(v));
    first.push_back(std::move(s));
  }
  rep.results["first"] = std::move(first);
  rep.check("288 Aronhold sets", sets.size() == 288);
}

// ---- verify-all -----------------------------------------------------------

// Runs `body` into a sub-report and folds it into one criterion check.
template <class F>
void criterion(Report& rep, int number, const std::string& title, F&& body) {
  Report sub;
  Json out = Json::object();
  const auto start = Clock::now();
  try {
    body(sub, out);
  } catch (const Error& e) {
    sub.check("no error", false, e.what());
  }
  rep.timings.emplace_back("criterion_" + std::to_string(number),
                           std::chrono::duration<double, std::milli>(Clock::now() - start).count());
  std::string failed;
  for (const auto& c : sub.checks)
    if (!c.pass) failed += (failed.empty() ? "" : "; ") + c.name + (c.detail.empty() ? "" : " (" + c.detail + ")");
  Json checks = Json::array();
  for (const auto& c : sub.checks) checks.push_back({{"name", c.name}, {"pass", c.pass}});
  out["checks"] = std::move(checks);
  rep.results["criterion_" + std::to_string(number)] = std::move(out);
  rep.check(std::to_string(number) + ". " + title, !sub.checks.empty() && sub.passed(), failed);
}

void octad_pipeline(const PrimeField& f, int samples, SplitMix64& rng, Report& sub, Json& out) {
  int locus = 0, rank7 = 0, hess = 0, bit = 0, stein = 0;
  for (int n = 0; n < samples; ++n) {
    const auto no = random_general_octad<Fp>(f, rng, true);
    try {
      const auto b = base_locus(no.net);
      locus += b.same_set(no.octad);
    } catch (const Error&) {
    }
    rank7 += self_association_rank(no.octad) == 7;
    const auto h = hessian_quartic(no.net);
    hess += h.degree() == 4 && smoothness_certificate(no.octad) && singular_points(h).empty();
    int b_ok = 0, s_ok = 0;
    for (int i = 0; i < 8; ++i)
      for (int j = i + 1; j < 8; ++j) {
        try {
          const auto bt = bitangent_line(no.net, no.octad, i, j, h);
          b_ok += bt.certificate.root.scale * (bt.certificate.root.root * bt.certificate.root.root) == bt.certificate.restricted;
          s_ok += steinerian_secant_check(no.net, no.octad, i, j);
        } catch (const Error&) {
        }
      }
    bit += b_ok == 28;
    stein += s_ok == 28;
  }
  out["octads"] = samples;
  out["base_locus_ok"] = locus;
  out["rank7"] = rank7;
  out["hessian_smooth"] = hess;
  out["bitangents_ok"] = bit;
  out["steinerian_ok"] = stein;
  const std::string of = "/" + std::to_string(samples);
  sub.check("base locus is 8 rational simple points", locus == samples, std::to_string(locus) + of);
  sub.check("self-association rank 7", rank7 == samples, std::to_string(rank7) + of);
  sub.check("Hessian quartic without rational singular points", hess == samples, std::to_string(hess) + of);
  sub.check("28 square bitangent certificates", bit == samples, std::to_string(bit) + of);
  sub.check("28 Steinerian secant checks", stein == samples, std::to_string(stein) + of);
}

void round_trip_trials(const PrimeField& f, int samples, SplitMix64& rng, Report& sub, Json& out) {
  int ok = 0, skipped = 0;
  for (int n = 0; n < samples; ++n) {
    const auto h = random_heptad(f, rng);
    skipped += h.skipped;
    ok += round_trips(h.plane, h.octad);
  }
  out["heptads"] = samples;
  out["round_trips"] = ok;
  out["special_heptads_skipped"] = skipped;
  sub.check("project_octad after octad_from_plane is the identity up to projectivity", ok == samples,
            std::to_string(ok) + "/" + std::to_string(samples));
}

Json replay_digest(std::uint64_t seed) {
  RunConfig c;
  c.seed = seed;
  Report a, b;
  c.command = {"octad", "build"};
  octad_build(c, a);
  c.command = {"dual", "fit"};
  c.prime = 101;
  dual_fit(c, b);
  return {a.to_json(false), b.to_json(false)};
}

void verify_all(const RunConfig& cfg, Report& rep) {
  echo_seed(cfg, rep);
  SplitMix64 master(cfg.seed);
  // one child stream per randomized criterion, drawn in a fixed order
  SplitMix64 rng4 = master.split(), rng5 = master.split(), rng6 = master.split(), rng7 = master.split(),
             rng8 = master.split(), rng9 = master.split();
  const PrimeField f101(101), f499(499);
  rep.config["primes"] = {{"geometry", 101}, {"plane_dual", 499}, {"nodal_scan", 11}};

  criterion(rep, 1, "Weyl counts", [&](Report& sub, Json& out) { weyl_counts_into(sub, out); });
  criterion(rep, 2, "reflection rule table", [&](Report& sub, Json& out) {
    const auto t = rule_table();
    out["cases"] = t.cases;
    out["mismatches"] = t.mismatches;
    sub.check("35 x 56 cases agree", t.ok());
    sub.check("mutated rules are caught", !rule_table_crosscheck(true));
  });
  criterion(rep, 3, "theta characteristics and Aronhold sets", [&](Report& sub, Json& out) {
    theta_counts_into(sub, out);
    const auto sets = aronhold_enumerate();
    out["aronhold_sets"] = sets.size();
    sub.check("288 Aronhold sets", sets.size() == 288);
  });
  criterion(rep, 4, "Hessian fiber of degree 72", [&](Report& sub, Json& out) { fibers_into(6, rng4, sub, out); });
  criterion(rep, 5, "octad pipeline over F_101", [&](Report& sub, Json& out) { octad_pipeline(f101, 20, rng5, sub, out); });
  criterion(rep, 6, "octad and plane heptad round trip", [&](Report& sub, Json& out) {
    round_trip_trials(f101, 20, rng6, sub, out);
  });
  criterion(rep, 7, "Kummer self-duality model", [&](Report& sub, Json& out) {
    const auto k = kummer_model(101);
    out["kummer"] = kummer_json(k);
    sub.check("16-nodal member over F_11", k.hits11 >= 1, std::to_string(k.hits11) + " members");
    kummer_checks(k, 50, 6, rng7, sub, out);
  });
  criterion(rep, 8, "plane quartic dual degree", [&](Report& sub, Json& out) {
    const auto g = random_smooth_plane_quartic(f499, rng8);
    const auto fit = dual_interpolate(g, 12, rng8);
    out["dual_degree"] = fit.degree;
    out["witness"] = witness_json(fit.witness);
    sub.check("degree 12", fit.degree == 12);
    sub.check("minimality witness", minimal_witness(fit));
  });
  criterion(rep, 9, "everywhere tangency", [&](Report& sub, Json& out) {
    const auto t = tangency_trials(f101, 20, rng9);
    out["pencil_pairs_certified"] = t.certified;
    out["random_pairs_rejected"] = t.rejected;
    sub.check("20 pencil pairs certified", t.certified == 20, std::to_string(t.certified) + "/20");
    sub.check("20 random pairs rejected", t.rejected == 20, std::to_string(t.rejected) + "/20");
  });
  criterion(rep, 10, "determinism", [&](Report& sub, Json& out) {
    const Json a = replay_digest(cfg.seed), b = replay_digest(cfg.seed);
    out["replayed_bytes"] = dump(a).size();
    sub.check("seeded replay is byte-identical", dump(a) == dump(b));
  });
}

using Handler = void (*)(const RunConfig&, Report&);

const std::vector<std::pair<std::string, Handler>>& handlers() {
  static const std::vector<std::pair<std::string, Handler>> h{
      {"octad build", octad_build},       {"octad project", octad_project},   {"octad from-plane", octad_from_plane_cmd},
      {"hessian", hessian_cmd},           {"bitangents", bitangents_cmd},     {"steinerian", steinerian_cmd},
      {"dual fit", dual_fit},             {"dual bidual", dual_bidual},       {"dual nodal-search", dual_nodal_search},
      {"tangency", tangency_cmd},         {"weyl counts", weyl_counts},       {"weyl fiber", weyl_fiber},
      {"theta counts", theta_counts},     {"theta aronhold", theta_aronhold}, {"verify-all", verify_all},
  };
  return h;
}

}  // namespace

Report execute(const RunConfig& cfg) {
  const std::string name = command_name(cfg);
  for (const auto& [key, fn] : handlers()) {
    if (key != name) continue;
    Report rep;
    rep.command = name;
    rep.config["seed"] = cfg.seed;
    try {
      fn(cfg, rep);
    } catch (const Error& e) {
      rep.check("completed without error", false, e.what());
    }
    if (rep.checks.empty()) rep.check("completed without error", true);
    return rep;
  }
  throw UsageError("unknown command '" + name + "'");
}

int run(int argc, char** argv) {
  CLI::App app{"quarticlab: Cayley octads, plane quartics, duality and W(E7) checks"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  std::uint32_t prime = 0;
  int samples = 0, degree_bound = 0;
  std::string input;
  auto* o_prime = app.add_option("--prime", prime, "odd prime p > 3 (default depends on the command)");
  app.add_option("--seed", cfg.seed, "64-bit seed (default 42)");
  auto* o_samples = app.add_option("--samples", samples, "sample count");
  auto* o_bound = app.add_option("--degree-bound", degree_bound, "largest dual degree to try");
  app.add_option("--out", cfg.out, "write the JSON report here instead of stdout");
  auto* o_input = app.add_option("--input", input, "dataset file (net, octad, plane_points or form)");
  app.add_option("--center", cfg.center, "projection center, 1..8 (default 8)");
  app.add_option("--nodes", cfg.nodes, "node count for nodal-search (default 16)");
  app.add_flag("--timings", cfg.timings, "include timings in the report (they go to stderr otherwise)");

  auto group = [&](const std::string& name, const std::string& help, std::vector<std::pair<std::string, std::string>> subs) {
    auto* c = app.add_subcommand(name, help);
    c->fallthrough();
    if (!subs.empty()) c->require_subcommand(1);
    for (const auto& [s, h] : subs) c->add_subcommand(s, h)->fallthrough();
  };
  group("octad", "Cayley octads", {{"build", "net and base locus"}, {"project", "project from a base point"},
                                   {"from-plane", "octad from 7 plane points"}});
  group("hessian", "Hessian quartic of a net", {});
  group("bitangents", "the 28 bitangents with tangency certificates", {});
  group("steinerian", "Steinerian secant checks", {});
  group("dual", "dual hypersurfaces", {{"fit", "interpolate the dual"}, {"bidual", "Kummer model and biduality"},
                                       {"nodal-search", "scan a quartic family for nodal members"}});
  group("tangency", "everywhere-tangency certificates", {});
  group("weyl", "W(E7)", {{"counts", "roots, lines, orders, center"}, {"fiber", "degree-72 Hessian fiber"}});
  group("theta", "level-2 theta characteristics", {{"counts", "res, q0, odd and even"}, {"aronhold", "Aronhold sets"}});
  group("verify-all", "run every acceptance check", {});

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (auto* sub = app.get_subcommands().front(); sub;) {
    cfg.command.push_back(sub->get_name());
    const auto next = sub->get_subcommands();
    sub = next.empty() ? nullptr : next.front();
  }
  if (o_prime->count()) cfg.prime = prime;
  if (o_samples->count()) cfg.samples = samples;
  if (o_bound->count()) cfg.degree_bound = degree_bound;
  if (o_input->count()) cfg.input = input;

  Report rep;
  try {
    rep = execute(cfg);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const DatasetError& e) {
    std::cerr << "dataset error: " << e.what() << "\n";
    return 2;
  }

  if (!cfg.timings)
    for (const auto& [name, ms] : rep.timings) std::cerr << "timing " << name << ": " << ms << " ms\n";
  const std::string text = dump(rep.to_json(cfg.timings));
  if (cfg.out.empty()) {
    std::cout << text;
  } else {
    try {
      store_json_file(cfg.out, rep.to_json(cfg.timings));
    } catch (const DatasetError& e) {
      std::cerr << "output error: " << e.what() << "\n";
      return 2;
    }
  }
  for (const auto& c : rep.checks)
    if (!c.pass) std::cerr << "FAILED: " << c.name << (c.detail.empty() ? "" : " (" + c.detail + ")") << "\n";
  return rep.passed() ? 0 : 1;
}

}  // namespace qlab
