#include "sdx/encoder.hpp"

#include "sdx/diff.hpp"
#include "sdx/errors.hpp"
#include "sdx/parser.hpp"
#include "sdx/sbt.hpp"

namespace sdx {

std::string DiffSbtSequence::to_string() const { return join_tokens(tokens); }

std::vector<std::string> DiffSbtSequence::buggy_side() const {
  std::size_t end = separator_index.value_or(tokens.size());
  return {tokens.begin(), tokens.begin() + static_cast<std::ptrdiff_t>(end)};
}

std::vector<std::string> DiffSbtSequence::fixed_side() const {
  if (!separator_index) return {};
  return {tokens.begin() + static_cast<std::ptrdiff_t>(*separator_index) + 1, tokens.end()};
}

const std::set<std::string>& EncodeOptions::effective_expression_kinds() const {
  return expression_kinds.empty() ? default_expression_kinds() : expression_kinds;
}

namespace {

// The single file with a non-empty diff; the corpus filter guarantees there
// is exactly one for records that reach the encoder.
const FileChange& changed_file(const CommitRecord& record) {
  const FileChange* changed = nullptr;
  for (const auto& f : record.files) {
    if (f.old_source == f.new_source) continue;
    if (changed) throw Error("record " + record.id() + " has more than one changed file");
    changed = &f;
  }
  if (!changed) throw NoChangeError("record " + record.id() + " has no changed file");
  return *changed;
}

std::vector<std::string> encode_side(const std::string& source, const LineSet& changed,
                                     const EncodeOptions& options) {
  if (changed.empty()) return {};
  TreeNode root = parse_source(source);
  LineSet lines = expand_context(changed, options.context_radius, count_lines(source));
  std::vector<TreeNode> nodes =
      intersections(root, lines, options.effective_expression_kinds());
  return sbt(nodes);
}

}  // namespace

DiffSbtSequence diffsbt_full(const CommitRecord& record, const EncodeOptions& options) {
  const FileChange& file = changed_file(record);
  DiffResult diff = compute_diff(file.old_source, file.new_source);
  if (diff.empty()) throw NoChangeError("record " + record.id() + " has an empty diff");

  DiffSbtSequence seq;
  seq.tokens = encode_side(file.old_source, diff.removed, options);
  seq.separator_index = seq.tokens.size();
  seq.tokens.push_back(kSeparatorToken);
  std::vector<std::string> fixed = encode_side(file.new_source, diff.added, options);
  seq.tokens.insert(seq.tokens.end(), fixed.begin(), fixed.end());
  return seq;
}

DiffSbtSequence diffsbt_buggy(const CommitRecord& record, const EncodeOptions& options) {
  DiffSbtSequence full = diffsbt_full(record, options);
  DiffSbtSequence buggy;
  buggy.tokens = full.buggy_side();
  if (buggy.tokens.empty()) {
    throw EmptySideError("record " + record.id() +
                         " is a pure insertion; no buggy-side nodes to encode");
  }
  return buggy;
}

}  // namespace sdx
