#include "sdx/ingest.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "sdx/errors.hpp"
#include "sdx/subprocess.hpp"

namespace sdx {
namespace {

std::string git_base(const std::string& repo_path) {
  return "git -C " + shell_quote(repo_path);
}

std::vector<std::string> split_on_nul(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == '\0') {
      parts.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) parts.push_back(std::move(cur));
  return parts;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string basename_of(const std::string& path) {
  std::filesystem::path p(path);
  if (p.has_filename()) return p.filename().string();
  return p.parent_path().filename().string();
}

// `git show rev:path`; empty content for added/deleted sides is passed in
// by the caller, so a failure here is a real read error.
std::string show_file(const std::string& base, const std::string& rev,
                      const std::string& path) {
  CommandResult r = run_command(base + " show " + shell_quote(rev + ":" + path) +
                                " 2>/dev/null");
  if (r.exit_code != 0) throw IoError("cannot read " + rev + ":" + path);
  return std::move(r.output);
}

}  // namespace

void enumerate_commits(const std::string& repo_path,
                       const std::function<void(CommitRecord)>& sink,
                       const std::string& repo_name) {
  const std::string base = git_base(repo_path);
  if (run_command(base + " rev-parse --git-dir 2>/dev/null").exit_code != 0) {
    throw RepoError("not a git repository: " + repo_path);
  }
  const std::string repo = repo_name.empty() ? basename_of(repo_path) : repo_name;

  CommandResult log =
      run_command(base + " log --reverse --format=%H%x00%P%x00%B%x00 HEAD 2>/dev/null");
  if (log.exit_code != 0) return;  // no commits yet

  std::vector<std::string> fields = split_on_nul(log.output);
  for (std::size_t i = 0; i + 2 < fields.size(); i += 3) {
    std::string sha = trim(fields[i]);
    std::string parents = trim(fields[i + 1]);
    std::string message = fields[i + 2];
    if (sha.empty()) continue;

    std::istringstream pin(parents);
    std::vector<std::string> parent_list;
    std::string p;
    while (pin >> p) parent_list.push_back(p);
    if (parent_list.size() != 1) continue;  // root or merge commit
    const std::string& parent = parent_list.front();

    try {
      CommandResult st = run_command(base + " diff-tree --no-commit-id --no-renames -r -z --name-status " +
                                     shell_quote(parent) + " " + shell_quote(sha) +
                                     " 2>/dev/null");
      if (st.exit_code != 0) throw IoError("diff-tree failed for " + sha);

      CommitRecord record;
      record.repo = repo;
      record.sha = sha;
      record.message = message;

      std::vector<std::string> entries = split_on_nul(st.output);
      for (std::size_t k = 0; k + 1 < entries.size(); k += 2) {
        const std::string& status = entries[k];
        const std::string& path = entries[k + 1];
        if (status.empty()) continue;
        FileChange change;
        change.path = path;
        char s = status[0];
        if (s == 'A') {
          change.new_source = show_file(base, sha, path);
        } else if (s == 'D') {
          change.old_source = show_file(base, parent, path);
        } else if (s == 'M' || s == 'T') {
          change.old_source = show_file(base, parent, path);
          change.new_source = show_file(base, sha, path);
        } else {
          continue;  // copies/renames are disabled; unmerged entries skipped
        }
        if (change.old_source.find('\0') != std::string::npos ||
            change.new_source.find('\0') != std::string::npos) {
          continue;  // binary
        }
        if (change.old_source == change.new_source) continue;
        record.files.push_back(std::move(change));
      }
      if (record.files.empty()) continue;
      sink(std::move(record));
    } catch (const IoError& e) {
      std::cerr << "warning: skipping commit " << sha << ": " << e.what() << "\n";
    }
  }
}

std::vector<CommitRecord> enumerate_commits(const std::string& repo_path,
                                            const std::string& repo_name) {
  std::vector<CommitRecord> records;
  enumerate_commits(
      repo_path, [&](CommitRecord r) { records.push_back(std::move(r)); }, repo_name);
  return records;
}

std::vector<CommitRecord> load_dump_stream(std::istream& in) {
  std::vector<CommitRecord> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    records.push_back(record_from_json_line(line, line_no));
  }
  return records;
}

std::vector<CommitRecord> load_dump(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return load_dump_stream(in);
}

void write_dump(const std::vector<CommitRecord>& records, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  for (const auto& r : records) out << record_to_json_line(r) << "\n";
  if (!out) throw IoError("failed writing " + path);
}

std::string repo_to_json_line(const RepoDescriptor& repo) {
  nlohmann::ordered_json obj;
  obj["full_name"] = repo.full_name;
  obj["stars"] = repo.stars;
  obj["clone_url"] = repo.clone_url;
  return obj.dump();
}

}  // namespace sdx
