#pragma once

#include <string>
#include <vector>

#include "sdx/line_set.hpp"

namespace sdx {

/// Line-level difference between two file versions. `removed` indexes into
/// the old file, `added` into the new one; `hunk_count` is the number of
/// maximal contiguous change regions (zero context lines between parts).
struct DiffResult {
  LineSet removed;
  LineSet added;
  int hunk_count = 0;

  bool empty() const { return removed.empty() && added.empty(); }
  bool operator==(const DiffResult& other) const = default;
};

/// Splits on '\n'; a missing final newline does not create a phantom line
/// and a trailing newline does not create an empty one.
std::vector<std::string> split_lines(const std::string& text);

/// Minimal line-based edit script with longest-common-subsequence
/// semantics. Ties are broken deterministically by matching old-file lines
/// as early as possible.
DiffResult compute_diff(const std::string& old_source, const std::string& new_source);

/// Reconstructs removed/added line sets from a single-file unified diff.
/// Accepts headers with or without explicit counts and with trailing
/// section text; context lines are permitted and advance both sides.
/// hunk_count equals the number of @@ hunks. Raises FormatError on
/// malformed headers or inconsistent line counts.
DiffResult parse_unified_diff(const std::string& text);

/// Renders the diff of two sources as zero-context unified-diff text with
/// explicit-count hunk headers ("@@ -a,b +c,d @@"), one hunk per change
/// region, so parse_unified_diff(render_unified_diff(a, b)) equals
/// compute_diff(a, b).
std::string render_unified_diff(const std::string& old_source, const std::string& new_source);

}  // namespace sdx
