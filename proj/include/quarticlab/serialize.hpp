#pragma once

// JSON encoding of field elements, points, matrices, forms and the dataset
// files read by the CLI. Field elements are strings: "12" in F_p, "a+bi" in
// F_p^2, "3/7" in Q. Matrices are row-major arrays of rows.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "quarticlab/form.hpp"
#include "quarticlab/linalg.hpp"
#include "quarticlab/projective.hpp"
#include "quarticlab/quadric_nets.hpp"

namespace qlab {

using Json = nlohmann::ordered_json;

// Malformed dataset: `where` is a JSON path like "points[3][1]" or a
// "line L, column C" position for syntax errors.
class DatasetError : public std::runtime_error {
 public:
  DatasetError(const std::string& where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(where) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

template <FieldElement K>
Json to_json(const K& x) {
  return x.to_string();
}

template <FieldElement K>
Json to_json(const ProjPoint<K>& p) {
  Json a = Json::array();
  for (const auto& x : p.coords()) a.push_back(x.to_string());
  return a;
}

template <FieldElement K>
Json to_json(const std::vector<ProjPoint<K>>& pts) {
  Json a = Json::array();
  for (const auto& p : pts) a.push_back(to_json(p));
  return a;
}

template <FieldElement K>
Json to_json(const Matrix<K>& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c).to_string());
    rows.push_back(std::move(row));
  }
  return rows;
}

template <FieldElement K>
Json to_json(const SparseForm<K>& f) {
  Json terms = Json::array();
  for (const auto& t : f.terms()) {
    Json e = Json::array();
    for (int v = 0; v < f.num_vars(); ++v) e.push_back(int(t.exponents[v]));
    terms.push_back({{"exponents", std::move(e)}, {"coefficient", t.coefficient.to_string()}});
  }
  return {{"num_vars", f.num_vars()}, {"degree", f.degree()}, {"terms", std::move(terms)}};
}

Json net_to_json(const QuadricNet<Fp>& net);
Json octad_to_json(const Octad<Fp>& octad);
Json plane_points_to_json(const std::vector<ProjPoint<Fp>>& pts);
Json form_to_json(const SparseForm<Fp>& f);  // with "kind" and "prime"

// Dataset readers; every structural problem throws DatasetError. The prime
// comes from the document's "prime" field.
std::uint32_t dataset_prime(const Json& doc);
std::string dataset_kind(const Json& doc);
QuadricNet<Fp> net_from_json(const Json& doc);
Octad<Fp> octad_from_json(const Json& doc);
std::vector<ProjPoint<Fp>> plane_points_from_json(const Json& doc);
SparseForm<Fp> form_from_json(const Json& doc);

// Parses a file; syntax errors report line and column.
Json load_json_file(const std::string& path);
Json parse_json_text(const std::string& text);
void store_json_file(const std::string& path, const Json& doc);
std::string dump(const Json& doc);  // 2-space indent, trailing newline

}  // namespace qlab
