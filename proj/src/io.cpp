#include "hmtk/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "hmtk/summation.hpp"

namespace hmtk {

namespace {

void dump_number(std::string& out, double v) {
  if (!std::isfinite(v)) throw IoError("cannot serialize non-finite float");
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

void dump_string(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void dump_value(std::string& out, const json& j, int indent, int depth) {
  const std::string pad(static_cast<size_t>(indent) * (static_cast<size_t>(depth) + 1), ' ');
  const std::string closing(static_cast<size_t>(indent) * static_cast<size_t>(depth), ' ');
  switch (j.type()) {
    case json::value_t::null: out += "null"; break;
    case json::value_t::boolean: out += j.get<bool>() ? "true" : "false"; break;
    case json::value_t::number_integer: out += std::to_string(j.get<long long>()); break;
    case json::value_t::number_unsigned: out += std::to_string(j.get<unsigned long long>()); break;
    case json::value_t::number_float: dump_number(out, j.get<double>()); break;
    case json::value_t::string: dump_string(out, j.get<std::string>()); break;
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        break;
      }
      out += '[';
      bool first = true;
      for (const auto& item : j) {
        if (!first) out += ',';
        first = false;
        if (indent > 0) {
          out += '\n';
          out += pad;
        }
        dump_value(out, item, indent, depth + 1);
      }
      if (indent > 0) {
        out += '\n';
        out += closing;
      }
      out += ']';
      break;
    }
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        break;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        if (indent > 0) {
          out += '\n';
          out += pad;
        }
        dump_string(out, it.key());
        out += indent > 0 ? ": " : ":";
        dump_value(out, it.value(), indent, depth + 1);
      }
      if (indent > 0) {
        out += '\n';
        out += closing;
      }
      out += '}';
      break;
    }
    default: throw IoError("unsupported json value type");
  }
}

constexpr char kB64[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int b64_index(char c) {
  if (c >= 'A' && c <= 'Z') return c - 'A';
  if (c >= 'a' && c <= 'z') return c - 'a' + 26;
  if (c >= '0' && c <= '9') return c - '0' + 52;
  if (c == '+') return 62;
  if (c == '/') return 63;
  return -1;
}

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

bool parse_double(const std::string& s, double& out) {
  try {
    size_t pos = 0;
    out = std::stod(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    return pos == s.size();
  } catch (...) {
    return false;
  }
}

}  // namespace

std::string dump_json_17(const json& j, int indent) {
  std::string out;
  dump_value(out, j, indent, 0);
  out += '\n';
  return out;
}

std::string base64_encode(const unsigned char* data, size_t len) {
  std::string out;
  out.reserve((len + 2) / 3 * 4);
  for (size_t i = 0; i < len; i += 3) {
    unsigned int v = static_cast<unsigned int>(data[i]) << 16;
    if (i + 1 < len) v |= static_cast<unsigned int>(data[i + 1]) << 8;
    if (i + 2 < len) v |= data[i + 2];
    out += kB64[(v >> 18) & 63];
    out += kB64[(v >> 12) & 63];
    out += (i + 1 < len) ? kB64[(v >> 6) & 63] : '=';
    out += (i + 2 < len) ? kB64[v & 63] : '=';
  }
  return out;
}

std::vector<unsigned char> base64_decode(const std::string& text) {
  std::vector<unsigned char> out;
  out.reserve(text.size() / 4 * 3);
  unsigned int v = 0;
  int bits = 0;
  for (char c : text) {
    if (c == '=' || c == '\n' || c == ' ') continue;
    int idx = b64_index(c);
    if (idx < 0) throw IoError("invalid base64 payload");
    v = (v << 6) | static_cast<unsigned int>(idx);
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out.push_back(static_cast<unsigned char>((v >> bits) & 0xff));
    }
  }
  return out;
}

std::string doubles_to_base64(const std::vector<double>& xs) {
  std::vector<unsigned char> bytes(xs.size() * 8);
  for (size_t i = 0; i < xs.size(); ++i) {
    unsigned long long u;
    std::memcpy(&u, &xs[i], 8);
    for (int b = 0; b < 8; ++b)
      bytes[i * 8 + static_cast<size_t>(b)] = static_cast<unsigned char>((u >> (8 * b)) & 0xff);
  }
  return base64_encode(bytes.data(), bytes.size());
}

std::vector<double> base64_to_doubles(const std::string& text) {
  std::vector<unsigned char> bytes = base64_decode(text);
  if (bytes.size() % 8 != 0) throw IoError("base64 payload is not a multiple of 8 bytes");
  std::vector<double> out(bytes.size() / 8);
  for (size_t i = 0; i < out.size(); ++i) {
    unsigned long long u = 0;
    for (int b = 7; b >= 0; --b)
      u = (u << 8) | bytes[i * 8 + static_cast<size_t>(b)];
    std::memcpy(&out[i], &u, 8);
  }
  return out;
}

json space_to_json(const FiniteHomSpace& space) {
  json j;
  j["name"] = space.name();
  json points = json::array();
  for (int i = 0; i < space.size(); ++i) {
    json p;
    p["id"] = i;
    if (space.has_coords()) p["coord"] = space.coords()[static_cast<size_t>(i)];
    p["weight"] = space.weight(i);
    points.push_back(std::move(p));
  }
  j["points"] = std::move(points);
  json metric;
  metric["kind"] = space.metric().kind;
  if (space.metric().kind == "snowflake" || space.metric().kind == "power")
    metric["param"] = space.metric().param;
  if (space.metric().kind == "matrix") {
    json rows = json::array();
    for (int i = 0; i < space.size(); ++i) {
      json row = json::array();
      for (int k = 0; k < space.size(); ++k) row.push_back(space.dist(i, k));
      rows.push_back(std::move(row));
    }
    metric["matrix"] = std::move(rows);
  }
  j["metric"] = std::move(metric);
  return j;
}

FiniteHomSpace space_from_json(const json& j) {
  if (!j.contains("points") || !j.contains("metric"))
    throw IoError("space json needs 'points' and 'metric'");
  const auto& pts = j.at("points");
  const int n = static_cast<int>(pts.size());
  if (n == 0) throw IoError("space json has no points");
  std::vector<double> weights(static_cast<size_t>(n));
  std::vector<std::vector<double>> coords;
  std::vector<char> seen(static_cast<size_t>(n), 0);
  bool have_coords = pts.front().contains("coord");
  if (have_coords) coords.resize(static_cast<size_t>(n));
  for (const auto& p : pts) {
    int id = p.at("id").get<int>();
    if (id < 0 || id >= n) throw IoError("point id " + std::to_string(id) + " out of range");
    if (seen[static_cast<size_t>(id)]) throw IoError("duplicate point id " + std::to_string(id));
    seen[static_cast<size_t>(id)] = 1;
    weights[static_cast<size_t>(id)] = p.at("weight").get<double>();
    if (have_coords != p.contains("coord"))
      throw IoError("either all points carry coords or none");
    if (have_coords)
      coords[static_cast<size_t>(id)] = p.at("coord").get<std::vector<double>>();
  }
  const auto& metric = j.at("metric");
  MetricSpec ms;
  ms.kind = metric.at("kind").get<std::string>();
  const std::string name = j.value("name", std::string("space"));

  FiniteHomSpace space;
  if (ms.kind == "matrix") {
    if (!metric.contains("matrix")) throw IoError("matrix metric needs a 'matrix' field");
    std::vector<double> dist(static_cast<size_t>(n) * n);
    const auto& rows = metric.at("matrix");
    if (static_cast<int>(rows.size()) != n) throw IoError("distance matrix row count mismatch");
    for (int i = 0; i < n; ++i) {
      const auto& row = rows[static_cast<size_t>(i)];
      if (static_cast<int>(row.size()) != n)
        throw IoError("distance matrix column count mismatch");
      for (int k = 0; k < n; ++k)
        dist[static_cast<size_t>(i) * n + k] = row[static_cast<size_t>(k)].get<double>();
    }
    space = FiniteHomSpace::from_matrix(name, n, std::move(dist), std::move(weights),
                                        std::move(coords));
  } else {
    if (ms.kind == "snowflake" || ms.kind == "power") ms.param = metric.at("param").get<double>();
    if (!have_coords) throw IoError("metric kind '" + ms.kind + "' needs point coords");
    space = FiniteHomSpace::from_coords(name, std::move(coords), std::move(weights), ms);
  }
  validate_space(space);  // surfaces asymmetric / zero-distance / weight errors at load
  return space;
}

void save_space(const FiniteHomSpace& space, const std::string& path) {
  write_text_file(path, dump_json_17(space_to_json(space)));
}

FiniteHomSpace load_space(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw IoError("failed to parse " + path + ": " + e.what());
  }
  try {
    return space_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed space file " + path + ": " + e.what());
  }
}

FiniteHomSpace load_space_csv(const std::string& path, const MetricSpec& metric,
                              const std::string& name) {
  std::istringstream in(read_text_file(path));
  std::string line;
  std::vector<std::pair<int, std::pair<double, std::vector<double>>>> rows;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto cells = split_csv_row(line);
    if (cells.size() < 2) throw IoError("csv row " + std::to_string(lineno) + " too short");
    double idv;
    if (!parse_double(cells[0], idv)) {
      if (lineno == 1) continue;  // header row
      throw IoError("csv row " + std::to_string(lineno) + ": bad id");
    }
    double w;
    if (!parse_double(cells[1], w))
      throw IoError("csv row " + std::to_string(lineno) + ": bad weight");
    std::vector<double> coord;
    for (size_t c = 2; c < cells.size(); ++c) {
      double v;
      if (!parse_double(cells[c], v))
        throw IoError("csv row " + std::to_string(lineno) + ": bad coordinate");
      coord.push_back(v);
    }
    if (coord.empty()) throw IoError("csv row " + std::to_string(lineno) + ": missing coords");
    rows.push_back({static_cast<int>(idv), {w, std::move(coord)}});
  }
  const int n = static_cast<int>(rows.size());
  if (n == 0) throw IoError("csv file " + path + " has no data rows");
  std::vector<double> weights(static_cast<size_t>(n));
  std::vector<std::vector<double>> coords(static_cast<size_t>(n));
  std::vector<char> seen(static_cast<size_t>(n), 0);
  for (auto& [id, rest] : rows) {
    if (id < 0 || id >= n || seen[static_cast<size_t>(id)])
      throw IoError("csv ids must be a permutation of 0..n-1");
    seen[static_cast<size_t>(id)] = 1;
    weights[static_cast<size_t>(id)] = rest.first;
    coords[static_cast<size_t>(id)] = std::move(rest.second);
  }
  FiniteHomSpace space =
      FiniteHomSpace::from_coords(name, std::move(coords), std::move(weights), metric);
  validate_space(space);
  return space;
}

json tree_to_json(const DyadicTree& tree, const std::string& space_name) {
  json j;
  j["format"] = "hmtk-tree-1";
  j["space"] = space_name;
  j["delta"] = tree.delta;
  j["c0"] = tree.c0;
  j["C0"] = tree.C0;
  j["a0"] = tree.a0;
  j["c_sharp"] = tree.c_sharp;
  j["C_sharp"] = tree.C_sharp;
  j["k_min"] = tree.k_min;
  j["k_max"] = tree.k_max;
  json levels = json::array();
  for (int k = tree.k_min; k <= tree.k_max; ++k) {
    json jl;
    jl["k"] = k;
    json cubes = json::array();
    for (const Cube& Q : tree.cubes(k)) {
      json jq;
      jq["center"] = Q.center;
      jq["parent"] = Q.parent;
      jq["new_center"] = Q.new_center;
      jq["mass"] = Q.mass;
      jq["points"] = Q.points;
      cubes.push_back(std::move(jq));
    }
    jl["cubes"] = std::move(cubes);
    levels.push_back(std::move(jl));
  }
  j["levels"] = std::move(levels);
  return j;
}

DyadicTree tree_from_json(const json& j, const FiniteHomSpace& space) {
  if (j.value("format", "") != std::string("hmtk-tree-1"))
    throw IoError("not a tree file (missing format tag)");
  DyadicTree tree;
  tree.delta = j.at("delta").get<double>();
  tree.c0 = j.at("c0").get<double>();
  tree.C0 = j.at("C0").get<double>();
  tree.a0 = j.at("a0").get<double>();
  tree.c_sharp = j.at("c_sharp").get<double>();
  tree.C_sharp = j.at("C_sharp").get<double>();
  tree.k_min = j.at("k_min").get<int>();
  tree.k_max = j.at("k_max").get<int>();
  const int n = space.size();
  const auto& levels = j.at("levels");
  tree.levels.resize(levels.size());
  tree.point_cube.assign(levels.size(), std::vector<int>(static_cast<size_t>(n), -1));
  int expect_k = tree.k_min;
  for (size_t l = 0; l < levels.size(); ++l) {
    const auto& jl = levels[l];
    if (jl.at("k").get<int>() != expect_k) throw IoError("tree levels out of order");
    ++expect_k;
    auto& cubes = tree.levels[l];
    for (const auto& jq : jl.at("cubes")) {
      Cube Q;
      Q.center = jq.at("center").get<int>();
      Q.parent = jq.at("parent").get<int>();
      Q.new_center = jq.at("new_center").get<bool>();
      Q.points = jq.at("points").get<std::vector<int>>();
      KahanSum acc;
      for (int p : Q.points) {
        if (p < 0 || p >= n) throw IoError("tree refers to point outside the space");
        acc.add(space.weight(p));
      }
      Q.mass = acc.value();
      if (Q.mass != jq.at("mass").get<double>())
        throw IoError("tree/space mismatch: stored cube mass disagrees with weights");
      int idx = static_cast<int>(cubes.size());
      for (int p : Q.points) tree.point_cube[l][static_cast<size_t>(p)] = idx;
      cubes.push_back(std::move(Q));
    }
  }
  if (expect_k != tree.k_max + 1) throw IoError("tree level count mismatch");
  // Rebuild child lists from parent indices.
  for (size_t l = 1; l < tree.levels.size(); ++l) {
    for (size_t a = 0; a < tree.levels[l].size(); ++a) {
      int p = tree.levels[l][a].parent;
      if (p < 0 || p >= static_cast<int>(tree.levels[l - 1].size()))
        throw IoError("tree cube has an invalid parent");
      tree.levels[l - 1][static_cast<size_t>(p)].children.push_back(static_cast<int>(a));
    }
  }
  return tree;
}

void save_tree(const DyadicTree& tree, const FiniteHomSpace& space, const std::string& path) {
  write_text_file(path, dump_json_17(tree_to_json(tree, space.name())));
}

DyadicTree load_tree(const std::string& path, const FiniteHomSpace& space) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw IoError("failed to parse " + path + ": " + e.what());
  }
  return tree_from_json(j, space);
}

namespace {

// Sparse storage: a mother's support is its whole parent cube, including
// points where the cascade row is exactly zero, so the support list is stored
// explicitly instead of being inferred from nonzeros.
json function_to_json(const BasisFunction& b, int /*n*/, bool plain) {
  json j;
  j["level"] = b.level;
  j["cube"] = b.cube;
  j["center"] = b.center;
  j["support"] = b.support;
  if (plain)
    j["values"] = b.values;
  else
    j["values"] = doubles_to_base64(b.values);
  return j;
}

BasisFunction function_from_json(const json& j, int n, bool plain, bool is_father) {
  BasisFunction b;
  b.is_father = is_father;
  b.level = j.at("level").get<int>();
  b.cube = j.at("cube").get<int>();
  b.center = j.at("center").get<int>();
  b.support = j.at("support").get<std::vector<int>>();
  b.values = plain ? j.at("values").get<std::vector<double>>()
                   : base64_to_doubles(j.at("values").get<std::string>());
  if (b.values.size() != b.support.size())
    throw IoError("basis value array length mismatch");
  for (int p : b.support)
    if (p < 0 || p >= n) throw IoError("basis support point outside the space");
  return b;
}

}  // namespace

json basis_to_json(const WaveletBasis& basis, const DyadicTree& tree,
                   const std::string& space_name, bool plain_fallback) {
  json j;
  j["format"] = "hmtk-basis-1";
  j["space"] = space_name;
  j["encoding"] = plain_fallback ? "plain" : "base64";
  j["tree"] = tree_to_json(tree, space_name);
  json fathers = json::array();
  for (const auto& b : basis.fathers)
    fathers.push_back(function_to_json(b, basis.n, plain_fallback));
  j["fathers"] = std::move(fathers);
  json mothers = json::array();
  for (const auto& b : basis.mothers)
    mothers.push_back(function_to_json(b, basis.n, plain_fallback));
  j["mothers"] = std::move(mothers);
  return j;
}

LoadedBasis basis_from_json(const json& j, const FiniteHomSpace& space) {
  if (j.value("format", "") != std::string("hmtk-basis-1"))
    throw IoError("not a basis file (missing format tag)");
  LoadedBasis out;
  out.tree = tree_from_json(j.at("tree"), space);
  const bool plain = j.at("encoding").get<std::string>() == "plain";
  WaveletBasis& basis = out.basis;
  basis.n = space.size();
  basis.k_min = out.tree.k_min;
  basis.k_max = out.tree.k_max;
  basis.delta = out.tree.delta;
  basis.mother_of.resize(out.tree.levels.size());
  for (size_t l = 0; l < out.tree.levels.size(); ++l)
    basis.mother_of[l].assign(out.tree.levels[l].size(), -1);
  for (const auto& jf : j.at("fathers"))
    basis.fathers.push_back(function_from_json(jf, basis.n, plain, true));
  for (const auto& jm : j.at("mothers")) {
    BasisFunction b = function_from_json(jm, basis.n, plain, false);
    basis.mother_of[static_cast<size_t>(out.tree.li(b.level + 1))][static_cast<size_t>(b.cube)] =
        static_cast<int>(basis.mothers.size());
    basis.mothers.push_back(std::move(b));
  }
  return out;
}

void save_basis(const WaveletBasis& basis, const DyadicTree& tree, const FiniteHomSpace& space,
                const std::string& path, bool plain_fallback) {
  write_text_file(path, dump_json_17(basis_to_json(basis, tree, space.name(), plain_fallback)));
}

LoadedBasis load_basis(const std::string& path, const FiniteHomSpace& space) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw IoError("failed to parse " + path + ": " + e.what());
  }
  return basis_from_json(j, space);
}

std::vector<double> load_values_csv(const std::string& path, int n) {
  std::istringstream in(read_text_file(path));
  std::string line;
  std::vector<double> direct;
  std::vector<std::pair<int, double>> keyed;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto cells = split_csv_row(line);
    double a;
    if (!parse_double(cells[0], a)) {
      if (lineno == 1) continue;
      throw IoError("values csv row " + std::to_string(lineno) + ": not a number");
    }
    if (cells.size() == 1) {
      direct.push_back(a);
    } else {
      double v;
      if (!parse_double(cells[1], v))
        throw IoError("values csv row " + std::to_string(lineno) + ": bad value");
      keyed.push_back({static_cast<int>(a), v});
    }
  }
  if (!keyed.empty()) {
    if (!direct.empty()) throw IoError("values csv mixes keyed and plain rows");
    std::vector<double> out(static_cast<size_t>(n), 0.0);
    std::vector<char> seen(static_cast<size_t>(n), 0);
    for (auto [id, v] : keyed) {
      if (id < 0 || id >= n || seen[static_cast<size_t>(id)])
        throw IoError("values csv ids must be unique and in range");
      seen[static_cast<size_t>(id)] = 1;
      out[static_cast<size_t>(id)] = v;
    }
    for (char s : seen)
      if (!s) throw IoError("values csv misses some point ids");
    return out;
  }
  if (static_cast<int>(direct.size()) != n)
    throw IoError("values csv has " + std::to_string(direct.size()) + " rows, expected " +
                  std::to_string(n));
  return direct;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("failed while writing " + path);
}

}  // namespace hmtk
