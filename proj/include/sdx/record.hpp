#pragma once

#include <string>
#include <vector>

namespace sdx {

/// Full old/new contents of one file touched by a commit. Sources are whole
/// file contents, not fragments; an added file has empty old_source and a
/// deleted one empty new_source.
struct FileChange {
  std::string path;
  std::string old_source;
  std::string new_source;

  bool operator==(const FileChange& other) const = default;
};

/// One bug-fix commit candidate: message plus per-file old/new sources.
struct CommitRecord {
  std::string repo;
  std::string sha;
  std::string message;
  std::vector<FileChange> files;

  std::string id() const { return repo + "@" + sha; }
  bool operator==(const CommitRecord& other) const = default;
};

/// One NDJSON row: {repo, sha, message, files:[{path, old_source,
/// new_source}]}. `line_no` is reported in FormatError messages.
CommitRecord record_from_json_line(const std::string& line, int line_no);
std::string record_to_json_line(const CommitRecord& record);

/// Concatenated per-file unified diffs with "--- a/<path>" / "+++ b/<path>"
/// headers, files in record order, unchanged files skipped. This is the
/// "commit diff" text used by the length filter and the retrieval baseline.
std::string render_commit_diff(const CommitRecord& record);

}  // namespace sdx
