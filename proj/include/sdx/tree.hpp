#pragma once

#include <optional>
#include <string>
#include <vector>

namespace sdx {

/// Line-span-annotated syntax tree node. Spans are 1-based physical line
/// numbers and children are ordered by (start_line, source order).
///
/// `kind` is a category token (Module, Assign, Name, ...). Trees produced by
/// parse_source draw kinds from the vocabulary documented in the README;
/// trees ingested from tree documents may carry any kind token as long as it
/// contains no whitespace, parentheses or ':'. `label` holds a lexeme
/// (identifier text, literal text) and is present only on leaf-bearing kinds.
struct TreeNode {
  std::string kind;
  std::optional<std::string> label;
  int start_line = 1;
  int end_line = 1;
  std::vector<TreeNode> children;

  bool operator==(const TreeNode& other) const = default;
};

/// Number of nodes in the subtree rooted at `node`, including `node`.
std::size_t node_count(const TreeNode& node);

/// Equality on kind/label/shape only; line spans are ignored.
bool structure_equal(const TreeNode& a, const TreeNode& b);

/// True when `kind` is usable as a single token: non-empty and free of
/// whitespace, '(', ')' and ':'.
bool valid_kind_token(const std::string& kind);

/// Verifies the TreeNode invariants (span ordering, child containment,
/// non-decreasing sibling start lines, kind token validity) over the whole
/// subtree. Returns an explanation for the first violation, or nullopt.
std::optional<std::string> check_tree(const TreeNode& node);

}  // namespace sdx
