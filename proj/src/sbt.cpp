#include "sdx/sbt.hpp"

#include <sstream>

#include "sdx/errors.hpp"

namespace sdx {

std::string escape_label(const std::string& label) {
  std::string out;
  out.reserve(label.size());
  for (char c : label) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case ' ': out += "\\s"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

std::string unescape_label(const std::string& token_part) {
  std::string out;
  out.reserve(token_part.size());
  for (std::size_t i = 0; i < token_part.size(); ++i) {
    char c = token_part[i];
    if (c != '\\') {
      out += c;
      continue;
    }
    if (i + 1 >= token_part.size()) {
      throw FormatError("dangling escape in label '" + token_part + "'");
    }
    switch (token_part[++i]) {
      case '\\': out += '\\'; break;
      case 's': out += ' '; break;
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      default:
        throw FormatError("unknown escape in label '" + token_part + "'");
    }
  }
  return out;
}

std::string node_token(const TreeNode& node) {
  if (!node.label) return node.kind;
  return node.kind + ":" + escape_label(*node.label);
}

namespace {

void sbt_into(const TreeNode& node, std::vector<std::string>& out) {
  std::string token = node_token(node);
  out.push_back("(");
  out.push_back(token);
  for (const auto& child : node.children) sbt_into(child, out);
  out.push_back(")");
  out.push_back(std::move(token));
}

TreeNode node_from_token(const std::string& token) {
  TreeNode node;
  auto colon = token.find(':');
  if (colon == std::string::npos) {
    node.kind = token;
  } else {
    node.kind = token.substr(0, colon);
    node.label = unescape_label(token.substr(colon + 1));
  }
  if (!valid_kind_token(node.kind)) {
    throw FormatError("invalid node token '" + token + "'");
  }
  return node;
}

TreeNode parse_one(const std::vector<std::string>& tokens, std::size_t& pos) {
  if (pos >= tokens.size() || tokens[pos] != "(") {
    throw FormatError("expected '(' at token " + std::to_string(pos));
  }
  ++pos;
  if (pos >= tokens.size()) throw FormatError("truncated sequence");
  TreeNode node = node_from_token(tokens[pos]);
  const std::string& open_token = tokens[pos];
  ++pos;
  while (pos < tokens.size() && tokens[pos] == "(") {
    node.children.push_back(parse_one(tokens, pos));
  }
  if (pos >= tokens.size() || tokens[pos] != ")") {
    throw FormatError("expected ')' at token " + std::to_string(pos));
  }
  ++pos;
  if (pos >= tokens.size() || tokens[pos] != open_token) {
    throw FormatError("closing token mismatch for '" + open_token + "'");
  }
  ++pos;
  return node;
}

}  // namespace

std::vector<std::string> sbt(const TreeNode& node) {
  std::vector<std::string> out;
  out.reserve(4 * node_count(node));
  sbt_into(node, out);
  return out;
}

std::vector<std::string> sbt(const std::vector<TreeNode>& nodes) {
  std::vector<std::string> out;
  for (const auto& node : nodes) sbt_into(node, out);
  return out;
}

std::vector<TreeNode> parse_sbt(const std::vector<std::string>& tokens) {
  std::vector<TreeNode> forest;
  std::size_t pos = 0;
  while (pos < tokens.size()) forest.push_back(parse_one(tokens, pos));
  return forest;
}

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

std::vector<std::string> split_tokens(const std::string& text) {
  std::vector<std::string> tokens;
  std::istringstream in(text);
  std::string token;
  while (in >> token) tokens.push_back(token);
  return tokens;
}

LineSet expand_context(const LineSet& changed, int radius, int file_length) {
  LineSet out;
  for (int line : changed) {
    int lo = std::max(1, line - radius);
    int hi = std::min(file_length, line + radius);
    for (int l = lo; l <= hi; ++l) out.insert(l);
  }
  return out;
}

const std::set<std::string>& default_expression_kinds() {
  static const std::set<std::string> kinds = {
      "Expr", "Call", "Attribute", "Subscript", "BinOp", "BoolOp", "Compare"};
  return kinds;
}

namespace {

void intersect_into(const TreeNode& node, const LineSet& lines,
                    const std::set<std::string>& expression_kinds,
                    std::vector<TreeNode>& out) {
  if (!lines.intersects_range(node.start_line, node.end_line)) return;
  if (lines.contains_range(node.start_line, node.end_line) ||
      expression_kinds.count(node.kind)) {
    out.push_back(node);
    return;
  }
  if (lines.contains(node.start_line)) {
    TreeNode kept = node;
    kept.children.clear();
    for (const auto& child : node.children) {
      intersect_into(child, lines, expression_kinds, kept.children);
    }
    out.push_back(std::move(kept));
    return;
  }
  for (const auto& child : node.children) {
    intersect_into(child, lines, expression_kinds, out);
  }
}

}  // namespace

std::vector<TreeNode> intersections(
    const TreeNode& root, const LineSet& lines,
    const std::set<std::string>& expression_kinds) {
  std::vector<TreeNode> out;
  intersect_into(root, lines, expression_kinds, out);
  return out;
}

}  // namespace sdx
