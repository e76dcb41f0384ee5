#include "sdx/record.hpp"

#include <json.hpp>

#include "sdx/diff.hpp"
#include "sdx/errors.hpp"

namespace sdx {

namespace {
using nlohmann::json;
using nlohmann::ordered_json;

std::string require_string(const json& obj, const char* key, int line_no) {
  if (!obj.contains(key) || !obj[key].is_string()) {
    throw FormatError(line_no, std::string("missing string field '") + key + "'");
  }
  return obj[key].get<std::string>();
}
}  // namespace

CommitRecord record_from_json_line(const std::string& line, int line_no) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error& e) {
    throw FormatError(line_no, std::string("invalid JSON: ") + e.what());
  }
  if (!obj.is_object()) throw FormatError(line_no, "record must be a JSON object");

  CommitRecord record;
  record.repo = require_string(obj, "repo", line_no);
  record.sha = require_string(obj, "sha", line_no);
  record.message = require_string(obj, "message", line_no);
  if (record.sha.empty()) throw FormatError(line_no, "empty 'sha'");
  if (!obj.contains("files") || !obj["files"].is_array()) {
    throw FormatError(line_no, "missing array field 'files'");
  }
  for (const auto& f : obj["files"]) {
    if (!f.is_object()) throw FormatError(line_no, "file entry must be an object");
    FileChange change;
    change.path = require_string(f, "path", line_no);
    change.old_source = require_string(f, "old_source", line_no);
    change.new_source = require_string(f, "new_source", line_no);
    record.files.push_back(std::move(change));
  }
  return record;
}

std::string record_to_json_line(const CommitRecord& record) {
  ordered_json obj;
  obj["repo"] = record.repo;
  obj["sha"] = record.sha;
  obj["message"] = record.message;
  ordered_json files = ordered_json::array();
  for (const auto& f : record.files) {
    ordered_json fo;
    fo["path"] = f.path;
    fo["old_source"] = f.old_source;
    fo["new_source"] = f.new_source;
    files.push_back(std::move(fo));
  }
  obj["files"] = std::move(files);
  // Sources mined from real repositories are not always valid UTF-8.
  return obj.dump(-1, ' ', false, ordered_json::error_handler_t::replace);
}

std::string render_commit_diff(const CommitRecord& record) {
  std::string out;
  for (const auto& f : record.files) {
    if (f.old_source == f.new_source) continue;
    out += "--- a/" + f.path + "\n";
    out += "+++ b/" + f.path + "\n";
    out += render_unified_diff(f.old_source, f.new_source);
  }
  return out;
}

}  // namespace sdx
