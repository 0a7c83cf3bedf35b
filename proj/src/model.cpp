#include "peacock/model.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "peacock/error.hpp"

namespace peacock {
namespace {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

constexpr double kNotANumber = std::numeric_limits<double>::quiet_NaN();

// Bare NaN / Infinity tokens (as emitted by Python's json module) are not
// JSON. They are rewritten to null outside of strings so that the offending
// edge can be reported by validation instead of failing the whole parse.
std::string replace_non_finite_tokens(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool in_string = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_string) {
      out.push_back(c);
      if (c == '\\' && i + 1 < text.size()) {
        out.push_back(text[++i]);
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
      out.push_back(c);
      continue;
    }
    bool replaced = false;
    for (std::string_view token : {"-Infinity", "Infinity", "NaN"}) {
      if (text.substr(i, token.size()) == token) {
        out += "null";
        i += token.size() - 1;
        replaced = true;
        break;
      }
    }
    if (!replaced) out.push_back(c);
  }
  return out;
}

double read_coordinate(const json& value, const std::string& where) {
  if (value.is_null()) return kNotANumber;
  if (!value.is_number()) throw ParseError(where + ": coordinate is not a number");
  return value.get<double>();
}

Point2 read_pair(const json& value, const std::string& where) {
  if (!value.is_array() || value.size() != 2) {
    throw ParseError(where + ": expected [x, y]");
  }
  return {read_coordinate(value[0], where), read_coordinate(value[1], where)};
}

std::string edge_label(const json& edge, std::size_t position) {
  if (edge.is_object() && edge.contains("id") && edge["id"].is_number_integer()) {
    return "edge " + std::to_string(edge["id"].get<long long>());
  }
  return "edge at position " + std::to_string(position);
}

EdgeCurve read_edge(const json& edge, std::size_t position) {
  const std::string where = edge_label(edge, position);
  if (!edge.is_object()) throw ParseError(where + ": expected an object");
  for (const char* key : {"id", "v1", "v2", "controls"}) {
    if (!edge.contains(key)) {
      throw ParseError(where + ": missing field '" + key + "'");
    }
  }
  const json& id = edge["id"];
  if (!id.is_number_integer() || id.get<long long>() < 0) {
    throw ParseError(where + ": 'id' must be a non-negative integer");
  }
  EdgeCurve curve;
  curve.id = static_cast<std::size_t>(id.get<long long>());
  curve.v1 = read_pair(edge["v1"], where + " v1");
  curve.v2 = read_pair(edge["v2"], where + " v2");
  const json& controls = edge["controls"];
  if (!controls.is_array()) throw ParseError(where + ": 'controls' must be an array");
  curve.controls.reserve(controls.size());
  for (const json& c : controls) curve.controls.push_back(read_pair(c, where + " control"));
  return curve;
}

Node read_node(const json& node, std::size_t position) {
  const std::string where = "node at position " + std::to_string(position);
  if (!node.is_object() || !node.contains("id") || !node.contains("x") ||
      !node.contains("y")) {
    throw ParseError(where + ": expected {\"id\", \"x\", \"y\"}");
  }
  if (!node["id"].is_string()) throw ParseError(where + ": 'id' must be a string");
  Node out;
  out.id = node["id"].get<std::string>();
  out.pos = {read_coordinate(node["x"], where), read_coordinate(node["y"], where)};
  if (!is_finite(out.pos)) {
    throw ValidationError("node '" + out.id + "': non-finite coordinate");
  }
  return out;
}

ordered pair_json(const Point2& p) { return ordered::array({p.x, p.y}); }

}  // namespace

Extent compute_extent(const std::vector<EdgeCurve>& edges) {
  Extent box{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
             -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  auto grow = [&box](const Point2& p) {
    box.min_x = std::min(box.min_x, p.x);
    box.min_y = std::min(box.min_y, p.y);
    box.max_x = std::max(box.max_x, p.x);
    box.max_y = std::max(box.max_y, p.y);
  };
  for (const EdgeCurve& e : edges) {
    grow(e.v1);
    grow(e.v2);
    for (const Point2& c : e.controls) grow(c);
  }
  if (edges.empty()) return {};
  return box;
}

GraphLayout::GraphLayout(std::vector<EdgeCurve> edges, std::vector<Node> nodes)
    : nodes_(std::move(nodes)) {
  if (edges.empty()) throw ValidationError("layout has no edges");
  const std::size_t m = edges.size();
  std::vector<bool> seen(m, false);
  for (const EdgeCurve& e : edges) {
    const std::string name = "edge " + std::to_string(e.id);
    if (e.id >= m) {
      throw ValidationError(name + ": id out of range, ids must be 0.." + std::to_string(m - 1));
    }
    if (seen[e.id]) throw ValidationError(name + ": duplicate edge id");
    seen[e.id] = true;
    if (e.controls.empty()) throw ValidationError(name + ": empty control point list");
    if (!is_finite(e.v1) || !is_finite(e.v2)) {
      throw ValidationError(name + ": non-finite endpoint coordinate");
    }
    for (const Point2& c : e.controls) {
      if (!is_finite(c)) throw ValidationError(name + ": non-finite control point coordinate");
    }
  }
  std::sort(edges.begin(), edges.end(),
            [](const EdgeCurve& a, const EdgeCurve& b) { return a.id < b.id; });
  edges_ = std::move(edges);
  extent_ = compute_extent(edges_);
}

LayoutSize layout_extent(const GraphLayout& layout) {
  return {layout.extent().width(), layout.extent().height()};
}

GraphLayout parse_layout(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(replace_non_finite_tokens(json_text));
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed layout JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("layout document must be a JSON object");
  if (!doc.contains("edges") || !doc["edges"].is_array()) {
    throw ParseError("layout document needs an 'edges' array");
  }

  std::vector<Node> nodes;
  if (doc.contains("nodes")) {
    if (!doc["nodes"].is_array()) throw ParseError("'nodes' must be an array");
    std::size_t position = 0;
    for (const json& n : doc["nodes"]) nodes.push_back(read_node(n, position++));
  }

  std::vector<EdgeCurve> edges;
  edges.reserve(doc["edges"].size());
  std::size_t position = 0;
  for (const json& e : doc["edges"]) edges.push_back(read_edge(e, position++));
  return GraphLayout(std::move(edges), std::move(nodes));
}

GraphLayout load_layout(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open layout file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_layout(buffer.str());
}

std::string layout_to_json(const GraphLayout& layout) {
  ordered doc = ordered::object();
  if (!layout.nodes().empty()) {
    ordered nodes = ordered::array();
    for (const Node& n : layout.nodes()) {
      ordered node = ordered::object();
      node["id"] = n.id;
      node["x"] = n.pos.x;
      node["y"] = n.pos.y;
      nodes.push_back(std::move(node));
    }
    doc["nodes"] = std::move(nodes);
  }
  ordered edges = ordered::array();
  for (const EdgeCurve& e : layout.edges()) {
    ordered edge = ordered::object();
    edge["id"] = e.id;
    edge["v1"] = pair_json(e.v1);
    edge["v2"] = pair_json(e.v2);
    ordered controls = ordered::array();
    for (const Point2& c : e.controls) controls.push_back(pair_json(c));
    edge["controls"] = std::move(controls);
    edges.push_back(std::move(edge));
  }
  doc["edges"] = std::move(edges);
  return doc.dump(2) + "\n";
}

void save_layout(const GraphLayout& layout, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write layout file '" + path.string() + "'");
  out << layout_to_json(layout);
}

}  // namespace peacock
