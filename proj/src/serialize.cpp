#include "quarticlab/serialize.hpp"

#include <fstream>
#include <sstream>

namespace qlab {

namespace {

std::string index_path(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

const Json& member(const Json& doc, const std::string& key) {
  if (!doc.is_object()) throw DatasetError("(root)", "expected a JSON object");
  auto it = doc.find(key);
  if (it == doc.end()) throw DatasetError(key, "missing field");
  return *it;
}

Fp element(const Json& j, const PrimeField& f, const std::string& where) {
  try {
    if (j.is_string()) return f.parse(j.get<std::string>());
    if (j.is_number_integer()) return f.from_int(j.get<std::int64_t>());
  } catch (const Error& e) {
    throw DatasetError(where, e.what());
  }
  throw DatasetError(where, "expected a field element (string or integer)");
}

std::vector<Fp> element_row(const Json& j, const PrimeField& f, std::size_t len, const std::string& where) {
  if (!j.is_array()) throw DatasetError(where, "expected an array");
  if (j.size() != len) throw DatasetError(where, "expected " + std::to_string(len) + " entries, got " + std::to_string(j.size()));
  std::vector<Fp> out;
  for (std::size_t i = 0; i < len; ++i) out.push_back(element(j[i], f, index_path(where, i)));
  return out;
}

std::vector<ProjPoint<Fp>> point_list(const Json& doc, const PrimeField& f, std::size_t count, std::size_t dim) {
  const Json& pts = member(doc, "points");
  if (!pts.is_array()) throw DatasetError("points", "expected an array");
  if (pts.size() != count)
    throw DatasetError("points", "expected " + std::to_string(count) + " points, got " + std::to_string(pts.size()));
  std::vector<ProjPoint<Fp>> out;
  for (std::size_t i = 0; i < count; ++i) {
    const std::string where = index_path("points", i);
    auto p = ProjPoint<Fp>::try_make(element_row(pts[i], f, dim + 1, where));
    if (!p) throw DatasetError(where, "the zero vector is not a projective point");
    out.push_back(*p);
  }
  return out;
}

void expect_kind(const Json& doc, const std::string& kind) {
  const std::string k = dataset_kind(doc);
  if (k != kind) throw DatasetError("kind", "expected \"" + kind + "\", got \"" + k + "\"");
}

}  // namespace

Json net_to_json(const QuadricNet<Fp>& net) {
  Json m = Json::array();
  for (const auto& q : net.matrices()) m.push_back(to_json(q));
  return {{"kind", "net"}, {"prime", net.field().characteristic()}, {"matrices", std::move(m)}};
}

Json octad_to_json(const Octad<Fp>& octad) {
  return {{"kind", "octad"}, {"prime", octad[0].field().characteristic()}, {"points", to_json(octad.points())}};
}

Json plane_points_to_json(const std::vector<ProjPoint<Fp>>& pts) {
  require(!pts.empty(), "no points to serialize");
  return {{"kind", "plane_points"}, {"prime", pts[0].field().characteristic()}, {"points", to_json(pts)}};
}

Json form_to_json(const SparseForm<Fp>& f) {
  Json j = {{"kind", "form"}, {"prime", f.field().characteristic()}};
  const Json body = to_json(f);
  for (const auto& [k, v] : body.items()) j[k] = v;
  return j;
}

std::uint32_t dataset_prime(const Json& doc) {
  const Json& p = member(doc, "prime");
  if (!p.is_number_unsigned()) throw DatasetError("prime", "expected a positive integer");
  const auto value = p.get<std::uint64_t>();
  try {
    if (value > UINT32_MAX) throw DatasetError("prime", "too large");
    PrimeField check(static_cast<std::uint32_t>(value));
  } catch (const Error& e) {
    throw DatasetError("prime", e.what());
  }
  return static_cast<std::uint32_t>(value);
}

std::string dataset_kind(const Json& doc) {
  const Json& k = member(doc, "kind");
  if (!k.is_string()) throw DatasetError("kind", "expected a string");
  return k.get<std::string>();
}

QuadricNet<Fp> net_from_json(const Json& doc) {
  expect_kind(doc, "net");
  const PrimeField f(dataset_prime(doc));
  const Json& ms = member(doc, "matrices");
  if (!ms.is_array() || ms.size() != 3) throw DatasetError("matrices", "expected an array of 3 matrices");
  std::vector<Matrix<Fp>> mats;
  for (std::size_t k = 0; k < 3; ++k) {
    const std::string where = index_path("matrices", k);
    if (!ms[k].is_array() || ms[k].size() != 4) throw DatasetError(where, "expected 4 rows");
    std::vector<std::vector<Fp>> rows;
    for (std::size_t r = 0; r < 4; ++r) rows.push_back(element_row(ms[k][r], f, 4, index_path(where, r)));
    mats.emplace_back(f, rows);
  }
  try {
    return QuadricNet<Fp>(mats[0], mats[1], mats[2]);
  } catch (const Error& e) {
    throw DatasetError("matrices", e.what());
  }
}

Octad<Fp> octad_from_json(const Json& doc) {
  expect_kind(doc, "octad");
  const PrimeField f(dataset_prime(doc));
  auto pts = point_list(doc, f, 8, 3);
  try {
    return Octad<Fp>(std::move(pts));
  } catch (const Error& e) {
    throw DatasetError("points", e.what());
  }
}

std::vector<ProjPoint<Fp>> plane_points_from_json(const Json& doc) {
  expect_kind(doc, "plane_points");
  const PrimeField f(dataset_prime(doc));
  return point_list(doc, f, 7, 2);
}

SparseForm<Fp> form_from_json(const Json& doc) {
  expect_kind(doc, "form");
  const PrimeField f(dataset_prime(doc));
  const Json& nv = member(doc, "num_vars");
  const Json& deg = member(doc, "degree");
  if (!nv.is_number_unsigned() || nv.get<int>() < 1 || nv.get<int>() > kMaxVars)
    throw DatasetError("num_vars", "expected an integer 1.." + std::to_string(kMaxVars));
  if (!deg.is_number_unsigned() || deg.get<int>() > 64) throw DatasetError("degree", "expected an integer 0..64");
  const int n = nv.get<int>(), d = deg.get<int>();
  const Json& ts = member(doc, "terms");
  if (!ts.is_array()) throw DatasetError("terms", "expected an array");
  std::vector<Term<Fp>> terms;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const std::string where = index_path("terms", i);
    if (!ts[i].is_object()) throw DatasetError(where, "expected an object");
    auto e = ts[i].find("exponents");
    auto c = ts[i].find("coefficient");
    if (e == ts[i].end()) throw DatasetError(where + ".exponents", "missing field");
    if (c == ts[i].end()) throw DatasetError(where + ".coefficient", "missing field");
    if (!e->is_array() || e->size() != static_cast<std::size_t>(n))
      throw DatasetError(where + ".exponents", "expected " + std::to_string(n) + " exponents");
    Monomial m{};
    int total = 0;
    for (int v = 0; v < n; ++v) {
      const Json& x = (*e)[v];
      if (!x.is_number_unsigned() || x.get<int>() > d) throw DatasetError(index_path(where + ".exponents", v), "bad exponent");
      m[v] = static_cast<std::uint8_t>(x.get<int>());
      total += x.get<int>();
    }
    if (total != d) throw DatasetError(where + ".exponents", "exponents do not sum to the degree");
    terms.push_back({m, element(*c, f, where + ".coefficient")});
  }
  return SparseForm<Fp>(f, n, d, std::move(terms));
}

Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw DatasetError("line " + std::to_string(line) + ", column " + std::to_string(col), "JSON syntax error");
  }
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError(path, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_json_text(ss.str());
  } catch (const DatasetError& e) {
    throw DatasetError(path + ": " + e.where(), "JSON syntax error");
  }
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

void store_json_file(const std::string& path, const Json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DatasetError(path, "cannot write file");
  out << dump(doc);
}

}  // namespace qlab
