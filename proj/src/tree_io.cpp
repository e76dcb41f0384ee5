#include "sdx/tree_io.hpp"

#include <json.hpp>

#include "sdx/errors.hpp"

namespace sdx {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

TreeNode node_from_json(const json& obj) {
  if (!obj.is_object()) throw FormatError("tree node must be a JSON object");
  for (const auto& item : obj.items()) {
    const std::string& key = item.key();
    if (key != "kind" && key != "label" && key != "span" && key != "children") {
      throw FormatError("unknown field '" + key + "' in tree node");
    }
  }
  if (!obj.contains("kind") || !obj["kind"].is_string()) {
    throw FormatError("tree node missing string 'kind'");
  }
  TreeNode node;
  node.kind = obj["kind"].get<std::string>();
  if (!valid_kind_token(node.kind)) {
    throw FormatError("invalid kind token '" + node.kind + "'");
  }
  if (obj.contains("label")) {
    if (!obj["label"].is_string()) {
      throw FormatError("'label' must be a string on " + node.kind);
    }
    node.label = obj["label"].get<std::string>();
  }
  if (!obj.contains("span") || !obj["span"].is_array() ||
      obj["span"].size() != 2 || !obj["span"][0].is_number_integer() ||
      !obj["span"][1].is_number_integer()) {
    throw FormatError("'span' must be [start, end] on " + node.kind);
  }
  node.start_line = obj["span"][0].get<int>();
  node.end_line = obj["span"][1].get<int>();
  if (node.start_line < 1 || node.start_line > node.end_line) {
    throw FormatError("bad span on " + node.kind);
  }
  if (obj.contains("children")) {
    if (!obj["children"].is_array()) {
      throw FormatError("'children' must be an array on " + node.kind);
    }
    int prev_start = 0;
    for (const auto& child_json : obj["children"]) {
      TreeNode child = node_from_json(child_json);
      if (child.start_line < node.start_line ||
          child.end_line > node.end_line) {
        throw FormatError("child " + child.kind + " span escapes parent " +
                          node.kind);
      }
      if (child.start_line < prev_start) {
        throw FormatError("children of " + node.kind +
                          " not ordered by start line");
      }
      prev_start = child.start_line;
      node.children.push_back(std::move(child));
    }
  }
  return node;
}

ordered_json node_to_json(const TreeNode& node) {
  ordered_json obj;
  obj["kind"] = node.kind;
  if (node.label) obj["label"] = *node.label;
  obj["span"] = {node.start_line, node.end_line};
  ordered_json children = ordered_json::array();
  for (const auto& child : node.children) children.push_back(node_to_json(child));
  obj["children"] = std::move(children);
  return obj;
}

}  // namespace

TreeNode parse_tree_document(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
  return node_from_json(doc);
}

std::string serialize_tree(const TreeNode& node) {
  return node_to_json(node).dump();
}

}  // namespace sdx
