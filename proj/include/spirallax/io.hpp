#pragma once

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "laxspec.hpp"

namespace spirallax::io {

using json = nlohmann::json;

inline json to_json(const HVec& v) { return json::array({v.x(), v.y(), v.z()}); }

inline json to_json(const Mat3& m) {
  json a = json::array();
  for (int i = 0; i < 3; ++i) a.push_back(json::array({m(i, 0), m(i, 1), m(i, 2)}));
  return a;
}

inline double num(const json& j, const char* what) {
  if (!j.is_number()) throw InvalidInput(std::string(what) + " must be a number");
  return j.get<double>();
}

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InvalidInput(std::string("missing key \"") + key + "\"");
  return j.at(key);
}

inline HVec hvec_from(const json& j) {
  if (!j.is_array() || j.size() != 3) throw InvalidInput("a point must be an array of 3 numbers");
  return {num(j[0], "coordinate"), num(j[1], "coordinate"), num(j[2], "coordinate")};
}

inline Mat3 mat_from(const json& j) {
  if (!j.is_array() || j.size() != 3) throw InvalidInput("a matrix must be 3 rows");
  Mat3 m;
  for (int i = 0; i < 3; ++i) {
    HVec r = hvec_from(j[static_cast<std::size_t>(i)]);
    m.row(i) = r.transpose();
  }
  return m;
}

inline int int_from(const json& j, const char* what) {
  if (!j.is_number_integer()) throw InvalidInput(std::string(what) + " must be an integer");
  return j.get<int>();
}

inline json to_json(const Seed& s) {
  json pts = json::array();
  for (auto& p : s.points) pts.push_back(to_json(p));
  return {{"n", s.n}, {"points", pts}, {"side_point", to_json(s.side)}, {"monodromy", to_json(s.monodromy)}};
}

inline Seed seed_from(const json& j) {
  Seed s;
  s.n = int_from(field(j, "n"), "n");
  for (auto& p : field(j, "points")) s.points.push_back(hvec_from(p));
  s.side = hvec_from(field(j, "side_point"));
  s.monodromy = mat_from(field(j, "monodromy"));
  return s;
}

inline json to_json(const LiftedSpiral& ls) {
  json v = json::array();
  for (auto& [i, x] : ls.V.v) v.push_back(to_json(x));
  return {{"n", ls.n},
          {"window", {{"lo", ls.V.lo()}, {"hi", ls.V.hi()}}},
          {"vectors", v},
          {"monodromy", to_json(ls.M)}};
}

// A lifted window read back; its seed is p_k = V_k, side = V_{N+1}.
inline LiftedSpiral lifted_from(const json& j) {
  LiftedSpiral ls;
  ls.n = int_from(field(j, "n"), "n");
  const json& w = field(j, "window");
  int lo = int_from(field(w, "lo"), "window.lo"), hi = int_from(field(w, "hi"), "window.hi");
  const json& v = field(j, "vectors");
  if (!v.is_array() || static_cast<int>(v.size()) != hi - lo + 1) throw InvalidInput("vector count does not match window");
  if (lo > 0 || hi < ls.n + 3) throw InvalidInput("window must cover [0, N+3]");
  ls.V.canonical = true;
  for (int i = lo; i <= hi; ++i) ls.V.set(i, hvec_from(v[static_cast<std::size_t>(i - lo)]));
  ls.M = mat_from(field(j, "monodromy"));
  ls.seed.n = ls.n;
  for (int k = 1; k <= ls.n; ++k) ls.seed.points.push_back(ls.V.at(k));
  ls.seed.side = ls.V.at(ls.n + 1);
  ls.seed.monodromy = ls.M;
  return ls;
}

inline json to_json(const Coords& c, bool with_derived = true) {
  json j = {{"n", c.n}, {"a", c.a}, {"b", c.b}, {"c_n", c.cN}};
  if (with_derived) {
    auto D = derive(c);
    j["derived"] = {{"a_n", D.a_N}, {"b_n", D.b_N}, {"c_n1", D.c_N1}, {"a_m1", D.a_m1},
                    {"b_m1", D.b_m1}, {"c_m1", D.c_m1}, {"A", D.A}};
  }
  return j;
}

inline Coords coords_from(const json& j) {
  Coords c;
  c.n = int_from(field(j, "n"), "n");
  for (auto& x : field(j, "a")) c.a.push_back(num(x, "a"));
  for (auto& x : field(j, "b")) c.b.push_back(num(x, "b"));
  c.cN = num(field(j, "c_n"), "c_n");
  check_shape(c);
  return c;
}

inline json to_json(const SpectralTable& t) {
  json e = json::array();
  for (auto& [k, v] : t.entries) e.push_back({{"mu_pow", k.second}, {"r_pow", k.first}, {"coeff", v}});
  return {{"entries", e}};
}

inline SpectralTable spectral_from(const json& j) {
  SpectralTable t;
  for (auto& e : field(j, "entries"))
    t.entries[{int_from(field(e, "r_pow"), "r_pow"), int_from(field(e, "mu_pow"), "mu_pow")}] = num(field(e, "coeff"), "coeff");
  return t;
}

inline json to_json(const CheckReport& r) {
  json j = {{"check", r.check}, {"max_dev", r.max_dev}, {"pass", r.pass}};
  if (!r.detail.empty()) j["detail"] = r.detail;
  return j;
}

enum class DocKind { seed, lifted, coords, spectral, unknown };

inline DocKind kind_of(const json& j) {
  if (!j.is_object()) return DocKind::unknown;
  if (j.contains("side_point")) return DocKind::seed;
  if (j.contains("vectors")) return DocKind::lifted;
  if (j.contains("c_n")) return DocKind::coords;
  if (j.contains("entries")) return DocKind::spectral;
  return DocKind::unknown;
}

inline json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed JSON: ") + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InvalidInput("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Shortest round-trip decimal.
inline std::string fmt(double x) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

// Temp file in the same directory, then rename.
inline void write_atomic(const std::string& path, const std::string& data) {
  namespace fs = std::filesystem;
  fs::path p(path);
  fs::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw InvalidInput("cannot write " + tmp.string());
    f << data;
    if (!f.flush()) throw InvalidInput("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, p, ec);
  if (ec) throw InvalidInput("cannot rename onto " + path + ": " + ec.message());
}

inline std::string orbit_csv(const Coords& c0, int steps, const Tolerances& tol = {}) {
  const int N = c0.n;
  auto T0 = spectral_table(c0, tol);
  std::vector<std::pair<int, int>> cols;
  for (auto& k : T0.support())
    if (k.first != 3) cols.push_back(k);
  std::ostringstream out;
  out << "step";
  for (int i = 0; i < N; ++i) out << ",a" << i;
  for (int i = 0; i < N; ++i) out << ",b" << i;
  out << ",c_n,alpha,beta";
  for (auto [r, e] : cols) out << ",spec_r" << r << "_mu" << e;
  out << "\n";
  Coords c = c0;
  for (int s = 0; s <= steps; ++s) {
    if (s > 0) c = shift_coords(c);
    auto ab = alpha_beta(c);
    auto T = spectral_table(c, tol);
    out << s;
    for (double x : c.a) out << "," << fmt(x);
    for (double x : c.b) out << "," << fmt(x);
    out << "," << fmt(c.cN) << "," << fmt(ab.alpha) << "," << fmt(ab.beta);
    for (auto [r, e] : cols) out << "," << fmt(T.at(e, r));
    out << "\n";
  }
  return out.str();
}

// Affine chart z = 1; vertices joined in index order, seed points marked.
inline std::string render_svg(const VertexWindow& w, int n) {
  struct P {
    int i;
    double x, y;
  };
  std::vector<P> pts;
  for (auto& [i, v] : w.v) {
    if (std::abs(v.z()) < 1e-12 * v.norm()) continue;
    double x = v.x() / v.z(), y = v.y() / v.z();
    if (std::isfinite(x) && std::isfinite(y)) pts.push_back({i, x, y});
  }
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (auto& p : pts) {
    x0 = std::min(x0, p.x), x1 = std::max(x1, p.x), y0 = std::min(y0, p.y), y1 = std::max(y1, p.y);
  }
  if (pts.empty()) x0 = y0 = -1, x1 = y1 = 1;
  double span = std::max({x1 - x0, y1 - y0, 1e-9});
  const double size = 800, pad = 20;
  auto X = [&](double x) { return fmt(pad + (x - x0) / span * (size - 2 * pad)); };
  auto Y = [&](double y) { return fmt(size - pad - (y - y0) / span * (size - 2 * pad)); };
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" viewBox=\"0 0 800 800\">\n";
  out << "<rect width=\"800\" height=\"800\" fill=\"white\"/>\n<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\"";
  for (std::size_t k = 0; k < pts.size(); ++k) out << (k ? " " : "") << X(pts[k].x) << "," << Y(pts[k].y);
  out << "\"/>\n";
  for (auto& p : pts) {
    bool seed = p.i >= 1 && p.i <= n + 1;
    out << "<circle cx=\"" << X(p.x) << "\" cy=\"" << Y(p.y) << "\" r=\"" << (seed ? 4 : 2) << "\" fill=\""
        << (p.i == n + 1 ? "blue" : seed ? "red" : "gray") << "\"><title>" << p.i << "</title></circle>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace spirallax::io
