#pragma once

#include <set>
#include <string>
#include <vector>

#include "sdx/line_set.hpp"
#include "sdx/tree.hpp"

namespace sdx {

/// Structure-based traversal. Every node contributes an opening "(" plus its
/// token and a closing ")" plus the same token, with the children serialized
/// in between, so a subtree of n nodes always yields exactly 4n tokens and
/// the sequence parses back into the tree.
///
/// The node token is `kind` when no label is present and `kind:label`
/// otherwise, with whitespace and backslashes in the label escaped so every
/// token stays free of spaces.
std::vector<std::string> sbt(const TreeNode& node);

/// SBT over a forest: concatenation of sbt() per node.
std::vector<std::string> sbt(const std::vector<TreeNode>& nodes);

/// The token emitted for one node ("kind" or "kind:escaped-label").
std::string node_token(const TreeNode& node);

/// Inverse of sbt(): reconstructs the forest's kinds, labels and shape.
/// Line spans are not part of the sequence; reconstructed nodes carry the
/// placeholder span [1, 1]. Raises FormatError on unbalanced or mislabeled
/// sequences.
std::vector<TreeNode> parse_sbt(const std::vector<std::string>& tokens);

std::string escape_label(const std::string& label);
std::string unescape_label(const std::string& token_part);

/// Single-space token joining used by every serialized sequence.
std::string join_tokens(const std::vector<std::string>& tokens);
std::vector<std::string> split_tokens(const std::string& text);

/// Union over changed lines l of [l - radius, l + radius], clamped to
/// [1, file_length].
LineSet expand_context(const LineSet& changed, int radius, int file_length);

/// Node categories whose intersecting nodes are always kept whole, so a
/// multi-line expression touching a changed line survives in one piece.
const std::set<std::string>& default_expression_kinds();

/// Extracts the nodes intersecting `lines` from the subtree rooted at
/// `root`, in source order. A node fully inside `lines` (or an
/// expression-kind node touching them) is kept whole; a node that starts
/// inside keeps its own token but prunes children to the intersecting ones;
/// a node that merely overlaps is replaced by the extraction of its
/// children; everything else is dropped.
std::vector<TreeNode> intersections(
    const TreeNode& root, const LineSet& lines,
    const std::set<std::string>& expression_kinds = default_expression_kinds());

}  // namespace sdx
