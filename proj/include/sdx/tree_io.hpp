#pragma once

#include <string>

#include "sdx/tree.hpp"

namespace sdx {

/// Parses a portable tree document: UTF-8 JSON, one object per tree of the
/// form {kind: string, label?: string, span: [start, end], children: [...]}.
/// `children` may be omitted for leaves. Field order is irrelevant; unknown
/// fields, span violations and unordered children raise FormatError.
TreeNode parse_tree_document(const std::string& text);

/// Serializes a tree back to the document format. Deterministic: fixed field
/// order (kind, label, span, children), compact separators, so equal trees
/// yield byte-identical documents.
std::string serialize_tree(const TreeNode& node);

}  // namespace sdx
