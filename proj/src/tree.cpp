#include "sdx/tree.hpp"

namespace sdx {

std::size_t node_count(const TreeNode& node) {
  std::size_t n = 1;
  for (const auto& child : node.children) n += node_count(child);
  return n;
}

bool structure_equal(const TreeNode& a, const TreeNode& b) {
  if (a.kind != b.kind || a.label != b.label) return false;
  if (a.children.size() != b.children.size()) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!structure_equal(a.children[i], b.children[i])) return false;
  }
  return true;
}

bool valid_kind_token(const std::string& kind) {
  if (kind.empty()) return false;
  for (char c : kind) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '(' ||
        c == ')' || c == ':') {
      return false;
    }
  }
  return true;
}

std::optional<std::string> check_tree(const TreeNode& node) {
  if (!valid_kind_token(node.kind)) {
    return "invalid kind token '" + node.kind + "'";
  }
  if (node.start_line < 1 || node.start_line > node.end_line) {
    return "bad span [" + std::to_string(node.start_line) + ", " +
           std::to_string(node.end_line) + "] on " + node.kind;
  }
  int prev_start = 0;
  for (const auto& child : node.children) {
    if (child.start_line < node.start_line || child.end_line > node.end_line) {
      return "child " + child.kind + " span escapes parent " + node.kind;
    }
    if (child.start_line < prev_start) {
      return "children of " + node.kind + " out of order";
    }
    prev_start = child.start_line;
    if (auto err = check_tree(child)) return err;
  }
  return std::nullopt;
}

}  // namespace sdx
