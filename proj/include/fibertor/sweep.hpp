#pragma once

// Parameter sweeps along a knot's fixed locus: grid parsing, per-point
// evaluation and byte-stable CSV/JSON serialization.

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "fibertor/json_io.hpp"

namespace fibertor {

// Real or complex literal: "1.5", "-2i", "1.5+0.866i", "3-i".
inline cplx parse_complex(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  const auto bad = [&] { fail(ErrorCode::ParseError, "not a complex number: '" + text + "'"); };
  if (s.empty()) bad();
  const auto number = [&](const std::string& t, bool imaginary) -> double {
    if (imaginary && (t.empty() || t == "+")) return 1.0;
    if (imaginary && t == "-") return -1.0;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      bad();
    }
    if (used != t.size() || !std::isfinite(v)) bad();
    return v;
  };
  if (s.back() != 'i') return number(s, false);
  s.pop_back();
  // split at the last sign that is not part of an exponent and not leading
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E')
      return {number(s.substr(0, k), false), number(s.substr(k), true)};
  }
  return {0.0, number(s, true)};
}

inline Point3 parse_point(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
  if (parts.size() != 3) fail(ErrorCode::ParseError, "expected three comma-separated coordinates x1,x2,x3");
  return {parse_complex(parts[0]), parse_complex(parts[1]), parse_complex(parts[2])};
}

// One named range "name=start:stop:count"; count points spaced evenly with
// both endpoints included (a single point sits at start).
struct GridRange {
  std::string name;
  double start = 0.0;
  double stop = 0.0;
  int count = 0;

  double at(int i) const { return count == 1 ? start : start + (stop - start) * i / (count - 1); }
};

// Grid over the pinned coordinate x1 = x1_re + i x1_im; ranges are
// separated by ';'. An absent x1_im range means a real sweep.
struct Grid {
  std::vector<GridRange> ranges;

  std::size_t size() const {
    std::size_t n = ranges.empty() ? 0 : 1;
    for (const auto& r : ranges) n *= static_cast<std::size_t>(r.count);
    return n;
  }
};

inline Grid parse_grid(const std::string& text) {
  Grid g;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ';');) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) fail(ErrorCode::ParseError, "grid range '" + item + "' needs name=start:stop:count");
    GridRange r;
    r.name = item.substr(0, eq);
    if (r.name == "x1") r.name = "x1_re";
    if (r.name != "x1_re" && r.name != "x1_im")
      fail(ErrorCode::ParseError, "unknown grid coordinate '" + r.name + "' (use x1 or x1_re, x1_im)");
    for (const auto& other : g.ranges)
      if (other.name == r.name) fail(ErrorCode::ParseError, "grid coordinate '" + r.name + "' given twice");
    std::stringstream fields(item.substr(eq + 1));
    std::vector<std::string> f;
    for (std::string x; std::getline(fields, x, ':');) f.push_back(x);
    if (f.size() != 3) fail(ErrorCode::ParseError, "grid range '" + item + "' needs start:stop:count");
    try {
      std::size_t used = 0;
      r.start = std::stod(f[0], &used);
      if (used != f[0].size()) throw std::invalid_argument("start");
      r.stop = std::stod(f[1], &used);
      if (used != f[1].size()) throw std::invalid_argument("stop");
      r.count = std::stoi(f[2], &used);
      if (used != f[2].size()) throw std::invalid_argument("count");
    } catch (const std::exception&) {
      fail(ErrorCode::ParseError, "grid range '" + item + "' has a malformed number");
    }
    if (!std::isfinite(r.start) || !std::isfinite(r.stop)) fail(ErrorCode::ParseError, "grid ranges must be finite");
    if (r.count < 1) fail(ErrorCode::EmptyGrid, "grid range '" + r.name + "' has no points");
    g.ranges.push_back(r);
  }
  if (g.ranges.empty()) fail(ErrorCode::EmptyGrid, "the grid has no ranges");
  return g;
}

// Points of the grid in row-major order (x1_re slowest).
inline std::vector<cplx> grid_points(const Grid& g) {
  const GridRange* re = nullptr;
  const GridRange* im = nullptr;
  for (const auto& r : g.ranges) (r.name == "x1_re" ? re : im) = &r;
  const int nre = re ? re->count : 1, nim = im ? im->count : 1;
  std::vector<cplx> out;
  for (int a = 0; a < nre; ++a)
    for (int b = 0; b < nim; ++b) out.emplace_back(re ? re->at(a) : 0.0, im ? im->at(b) : 0.0);
  return out;
}

// Fixed-locus point over x1: start from the symbolic identifications with
// the free coordinates set to x1, then Newton on the remaining relations.
inline Point3 locus_point(const FiberedKnot& k, cplx x1) {
  const TraceMap& p = require_trace_map(k);
  Point3 start{x1, x1, x1};
  const auto x = project_to_fixed_locus(p, start);
  if (!x) fail(ErrorCode::NotFixedPoint, "no fixed-locus point found over this x1");
  return *x;
}

struct SweepOptions {
  Tolerance tol;
  bool unitary = false;  // conjugate each lift into SU(2) first
  LiftBranch branch = LiftBranch::Principal;
};

struct SweepRow {
  cplx x1;
  std::optional<Point3> point;
  std::optional<TorsionReport> report;
  std::string error;  // machine-readable code, empty on success
  std::string message;
};

struct RunReport {
  std::string knot;
  std::vector<SweepRow> rows;

  std::size_t failures() const {
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.report; }));
  }
};

inline RunReport run_sweep(const FiberedKnot& k, const Grid& g, const SweepOptions& opt = {}) {
  require_trace_map(k);
  if (g.size() == 0) fail(ErrorCode::EmptyGrid, "the grid has no points");
  RunReport rep{k.name, {}};
  LiftOptions lo;
  lo.tol = opt.tol;
  for (const cplx x1 : grid_points(g)) {
    SweepRow row{x1, std::nullopt, std::nullopt, "", ""};
    try {
      row.point = locus_point(k, x1);
      Representation rho = lift_character_to_rep(k, *row.point, opt.branch, lo);
      if (opt.unitary) rho = conjugate_into_su2(rho);
      row.report = main_theorem_torsion(k, rho, opt.tol);
    } catch (const Error& e) {
      row.error = std::string(to_string(e.code()));
      row.message = e.what();
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

// %.15g with negative zero folded to zero, so output does not depend on
// the sign of a vanishing rounding error.
inline std::string format_number(double v) {
  if (v == 0.0) v = 0.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

inline std::string format_complex_compact(cplx z) {
  std::string im = format_number(z.imag());
  if (im.front() != '-') im = "+" + im;
  return format_number(z.real()) + im + "i";
}

inline std::string sweep_csv(const RunReport& r) {
  std::string out = "x1_re,x1_im,x2_re,x2_im,x3_re,x3_im,torsion_re,torsion_im,epsilon0,eigenvalues,error\n";
  for (const auto& row : r.rows) {
    const Point3 p = row.point.value_or(Point3{row.x1, NAN, NAN});
    std::vector<std::string> cells;
    for (const auto& c : p) {
      cells.push_back(std::isnan(c.real()) ? "" : format_number(c.real()));
      cells.push_back(std::isnan(c.real()) ? "" : format_number(c.imag()));
    }
    if (row.report) {
      cells.push_back(format_number(row.report->torsion.real()));
      cells.push_back(format_number(row.report->torsion.imag()));
      cells.push_back(std::to_string(row.report->epsilon0));
      std::string eig;
      for (const auto& l : row.report->eigenvalues) eig += (eig.empty() ? "" : ";") + format_complex_compact(l);
      cells.push_back(eig);
      cells.push_back("");
    } else {
      cells.insert(cells.end(), {"", "", "", "", row.error});
    }
    for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cells[i];
    out += "\n";
  }
  return out;
}

// JSON numbers go through format_number as well so the two formats agree
// digit for digit.
inline std::string sweep_json(const RunReport& r) {
  const auto num = [](double v) { return json::parse(format_number(v)); };
  json rows = json::array();
  double tmin = std::numeric_limits<double>::infinity(), tmax = -tmin;
  for (const auto& row : r.rows) {
    json j;
    j["x1_re"] = num(row.x1.real());
    j["x1_im"] = num(row.x1.imag());
    if (row.point) {
      j["x2_re"] = num((*row.point)[1].real());
      j["x2_im"] = num((*row.point)[1].imag());
      j["x3_re"] = num((*row.point)[2].real());
      j["x3_im"] = num((*row.point)[2].imag());
    }
    if (row.report) {
      j["torsion_re"] = num(row.report->torsion.real());
      j["torsion_im"] = num(row.report->torsion.imag());
      j["epsilon0"] = row.report->epsilon0;
      j["eigenvalues"] = json::array();
      for (const auto& l : row.report->eigenvalues) j["eigenvalues"].push_back({{"re", num(l.real())}, {"im", num(l.imag())}});
      j["method"] = to_string(row.report->method);
      j["error"] = nullptr;
      tmin = std::min(tmin, row.report->torsion.real());
      tmax = std::max(tmax, row.report->torsion.real());
    } else {
      j["error"] = row.error;
      j["message"] = row.message;
    }
    rows.push_back(std::move(j));
  }
  json doc;
  doc["knot"] = r.knot;
  doc["rows"] = std::move(rows);
  doc["summary"] = {{"points", r.rows.size()}, {"failures", r.failures()}};
  if (r.failures() < r.rows.size()) {
    doc["summary"]["torsion_re_min"] = num(tmin);
    doc["summary"]["torsion_re_max"] = num(tmax);
  }
  return doc.dump(2) + "\n";
}

}  // namespace fibertor
