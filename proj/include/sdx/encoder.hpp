#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sdx/record.hpp"

namespace sdx {

/// The token that separates the buggy-side and fixed-side encodings.
inline constexpr const char* kSeparatorToken = "</s>";

/// A diffSBT sequence: serialized tree tokens, optionally split by the
/// stage separator. Parentheses are balanced on each side of the separator
/// and the separator appears at most once.
struct DiffSbtSequence {
  std::vector<std::string> tokens;
  std::optional<std::size_t> separator_index;

  std::string to_string() const;
  std::vector<std::string> buggy_side() const;
  std::vector<std::string> fixed_side() const;

  bool operator==(const DiffSbtSequence& other) const = default;
};

struct EncodeOptions {
  int context_radius = 3;
  std::set<std::string> expression_kinds;  // empty means the default set

  const std::set<std::string>& effective_expression_kinds() const;
};

/// Two-sided encoding of a commit: parses both versions of the single
/// changed file, expands each side's changed lines by the context radius,
/// extracts the intersecting nodes and joins the per-node serializations
/// with the separator token in between.
///
/// Raises NoChangeError when the diff is empty, Error when the record does
/// not have exactly one changed file, and propagates SyntaxError from
/// parsing.
DiffSbtSequence diffsbt_full(const CommitRecord& record, const EncodeOptions& options = {});

/// Buggy-side-only encoding: exactly the pre-separator prefix of
/// diffsbt_full, with no separator. Raises EmptySideError when the commit
/// is a pure insertion and there is nothing on the buggy side.
DiffSbtSequence diffsbt_buggy(const CommitRecord& record, const EncodeOptions& options = {});

}  // namespace sdx
