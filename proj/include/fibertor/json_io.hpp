#pragma once

// JSON encodings of complexes, presentations, knots, representations and
// torsion reports. A complex scalar is a bare number when real, otherwise
// [re, im]; matrices are row-major nested arrays.

#include "json.hpp"  // vendored nlohmann/json

#include <fstream>
#include <sstream>
#include <string>

#include "fibertor/fibered.hpp"

namespace fibertor {

using json = nlohmann::json;

namespace detail {

[[noreturn]] inline void bad_json(const std::string& what) { fail(ErrorCode::ParseError, what); }

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad_json(std::string("missing field '") + key + "'");
  return j.at(key);
}

inline std::string string_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_string()) bad_json(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

inline std::vector<std::string> string_list(const json& j, const char* what) {
  if (!j.is_array()) bad_json(std::string(what) + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& s : j) {
    if (!s.is_string()) bad_json(std::string(what) + " must be an array of strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

}  // namespace detail

inline json to_json(cplx z) {
  if (z.imag() == 0.0) return z.real();
  return json::array({z.real(), z.imag()});
}

inline cplx scalar_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  detail::bad_json("expected a number or a [re, im] pair");
}

inline json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

// `rows`/`cols` fix the shape when the array is empty or shape-ambiguous.
inline Matrix matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows)
    detail::bad_json("matrix has " + std::to_string(j.is_array() ? j.size() : 0) + " rows, expected " +
                     std::to_string(rows));
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      detail::bad_json("matrix row " + std::to_string(r) + " does not have " + std::to_string(cols) + " entries");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = scalar_from_json(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

// {dims, boundaries, homology_bases?}: chain convention, boundaries[k] is
// d_{k+1} : C_{k+1} -> C_k, homology_bases[i] has dim C_i rows (or null).
inline json chain_complex_to_json(const BasedChainComplex& c) {
  json j;
  j["dims"] = c.dims();
  j["boundaries"] = json::array();
  for (int i = 1; i <= c.top(); ++i) j["boundaries"].push_back(matrix_to_json(c.boundary(i)));
  json hb = json::array();
  bool any = false;
  for (int i = 0; i <= c.top(); ++i) {
    const auto& h = c.homology_basis(i);
    hb.push_back(h ? matrix_to_json(*h) : json(nullptr));
    any = any || h.has_value();
  }
  if (any) j["homology_bases"] = std::move(hb);
  return j;
}

inline BasedChainComplex chain_complex_from_json(const json& j, const Tolerance& tol = {}) {
  const json& jd = detail::field(j, "dims");
  if (!jd.is_array()) detail::bad_json("dims must be an array");
  std::vector<Eigen::Index> dims;
  for (const auto& d : jd) {
    if (!d.is_number_integer() || d.get<long long>() < 0) detail::bad_json("dims must be non-negative integers");
    dims.push_back(d.get<Eigen::Index>());
  }
  const json& jb = detail::field(j, "boundaries");
  if (!jb.is_array() || (dims.empty() ? !jb.empty() : jb.size() + 1 != dims.size()))
    detail::bad_json("expected one boundary matrix per adjacent pair of degrees");
  std::vector<Matrix> bds;
  for (std::size_t k = 0; k < jb.size(); ++k) bds.push_back(matrix_from_json(jb[k], dims[k], dims[k + 1]));
  BasedChainComplex c(dims, std::move(bds), tol);
  if (j.contains("homology_bases")) {
    const json& hb = j.at("homology_bases");
    if (!hb.is_array() || hb.size() != dims.size()) detail::bad_json("homology_bases needs one entry per degree");
    for (std::size_t i = 0; i < dims.size(); ++i) {
      if (hb[i].is_null()) continue;
      const Eigen::Index cols = hb[i].empty() ? 0 : static_cast<Eigen::Index>(hb[i][0].size());
      c.set_homology_basis(static_cast<int>(i), matrix_from_json(hb[i], dims[i], cols));
    }
  }
  return c;
}

inline json presentation_to_json(const GroupPresentation& p) {
  json j;
  j["generators"] = p.generators;
  j["relators"] = json::array();
  for (const auto& r : p.relators) j["relators"].push_back(format_word(r, p.generators));
  return j;
}

inline GroupPresentation presentation_from_json(const json& j) {
  GroupPresentation p{detail::string_list(detail::field(j, "generators"), "generators"), {}};
  for (const auto& r : detail::string_list(detail::field(j, "relators"), "relators"))
    p.relators.push_back(parse_word(r, p.generators));
  return p;
}

inline json knot_to_json(const FiberedKnot& k) {
  json j;
  j["name"] = k.name;
  j["genus"] = k.genus;
  j["fiber_generators"] = k.fiber_generators;
  j["monodromy"] = json::object();
  for (int i = 0; i < k.fiber_rank(); ++i)
    j["monodromy"][k.fiber_generators[static_cast<std::size_t>(i)]] =
        format_word(k.monodromy[static_cast<std::size_t>(i)], k.fiber_generators);
  if (k.trace_map)
    j["trace_map"] = {(*k.trace_map)[0].to_string(), (*k.trace_map)[1].to_string(), (*k.trace_map)[2].to_string()};
  return j;
}

inline FiberedKnot knot_from_json(const json& j) {
  const std::string name = detail::string_field(j, "name");
  auto gens = detail::string_list(detail::field(j, "fiber_generators"), "fiber_generators");
  const json& mono = detail::field(j, "monodromy");
  if (!mono.is_object()) detail::bad_json("monodromy must map each fiber generator to a word");
  if (mono.size() != gens.size()) detail::bad_json("monodromy must have exactly one word per fiber generator");
  std::vector<std::string> words;
  for (const auto& g : gens) {
    if (!mono.contains(g) || !mono.at(g).is_string()) detail::bad_json("monodromy has no word for '" + g + "'");
    words.push_back(mono.at(g).get<std::string>());
  }
  std::optional<std::array<std::string, 3>> tm;
  if (j.contains("trace_map") && !j.at("trace_map").is_null()) {
    const auto polys = detail::string_list(j.at("trace_map"), "trace_map");
    if (polys.size() != 3) detail::bad_json("trace_map must list three polynomials");
    tm = std::array<std::string, 3>{polys[0], polys[1], polys[2]};
  }
  FiberedKnot k = FiberedKnot::from_strings(name, std::move(gens), words, tm);
  if (j.contains("genus")) {
    const json& g = j.at("genus");
    if (!g.is_number_integer() || g.get<int>() != k.genus)
      detail::bad_json("genus does not match the number of fiber generators");
  }
  return k;
}

// {flavor: "SU2" | "SL2C", images: {generator: 2x2 matrix}}; generators are
// resolved against `k` (fiber generators, then the meridian).
inline json representation_to_json(const FiberedKnot& k, const Representation& rep) {
  json j;
  j["flavor"] = to_string(rep.flavor());
  j["images"] = json::object();
  const auto names = k.generator_names();
  for (int g = 0; g < rep.generator_count(); ++g)
    j["images"][names[static_cast<std::size_t>(g)]] = matrix_to_json(rep.image(g).matrix());
  return j;
}

inline Representation representation_from_json(const FiberedKnot& k, const json& j) {
  const Flavor flavor = j.contains("flavor") ? parse_flavor(detail::string_field(j, "flavor")) : Flavor::SL2C;
  const json& imgs = detail::field(j, "images");
  if (!imgs.is_object()) detail::bad_json("images must map generator names to matrices");
  std::vector<Sl2Matrix> images;
  for (const auto& name : k.generator_names()) {
    if (!imgs.contains(name)) detail::bad_json("no image for generator '" + name + "'");
    images.push_back(Sl2Matrix::checked(matrix_from_json(imgs.at(name), 2, 2)));
  }
  if (imgs.size() != images.size()) detail::bad_json("images name generators the knot does not have");
  return Representation(flavor, std::move(images));
}

inline json report_to_json(const TorsionReport& r) {
  json j;
  j["torsion_re"] = r.torsion.real();
  j["torsion_im"] = r.torsion.imag();
  j["epsilon0"] = r.epsilon0;
  j["eigenvalues"] = json::array();
  for (const auto& l : r.eigenvalues) j["eigenvalues"].push_back({{"re", l.real()}, {"im", l.imag()}});
  j["method"] = to_string(r.method);
  j["unit_eigenvalue_gap"] = r.unit_eigenvalue_gap;
  if (r.jacobian_eigenvalues) {
    j["jacobian_eigenvalues"] = json::array();
    for (const auto& l : *r.jacobian_eigenvalues) j["jacobian_eigenvalues"].push_back({{"re", l.real()}, {"im", l.imag()}});
  }
  return j;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, "'" + path + "': " + e.what());
  }
}

}  // namespace fibertor
