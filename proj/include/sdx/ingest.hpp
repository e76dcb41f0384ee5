#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "sdx/record.hpp"

namespace sdx {

/// Streams one CommitRecord per non-merge, single-parent commit reachable
/// from HEAD of the git clone at `repo_path`, oldest first, with full old
/// and new contents for every changed file. Commits whose contents cannot
/// be read are skipped with a warning on stderr; commits where no file body
/// actually changed are dropped. Deterministic for a fixed clone.
///
/// `repo_name` defaults to the basename of `repo_path`. Raises RepoError
/// when the path is not a git repository.
void enumerate_commits(const std::string& repo_path,
                       const std::function<void(CommitRecord)>& sink,
                       const std::string& repo_name = "");

std::vector<CommitRecord> enumerate_commits(const std::string& repo_path,
                                            const std::string& repo_name = "");

/// Reads a CommitRecord-per-line NDJSON dump, validating each row.
/// FormatError carries the offending line number.
std::vector<CommitRecord> load_dump(const std::string& path);
std::vector<CommitRecord> load_dump_stream(std::istream& in);

void write_dump(const std::vector<CommitRecord>& records, const std::string& path);

// --------------------------------------------------------------------------
// Repository enumeration against a GitHub-style search endpoint.
// --------------------------------------------------------------------------

struct RepoDescriptor {
  std::string full_name;  // "owner/name"
  long stars = 0;
  std::string clone_url;

  bool operator==(const RepoDescriptor& other) const = default;
};

struct FetchOptions {
  std::string base_url = "https://api.github.com";
  int per_page = 100;
  int result_cap = 1000;  // search endpoints return at most this many per query
};

/// Collects all repositories with at least `min_stars` stars by querying
/// the search endpoint in descending star buckets, splitting any bucket
/// whose reported total exceeds the result cap. Results are deduplicated by
/// full name. Raises AuthError before any request when `auth_token` is
/// empty, RateLimitError on 403/429 responses and NetworkError otherwise.
std::vector<RepoDescriptor> fetch_repositories(long min_stars, const std::string& auth_token,
                                               const FetchOptions& options = {});

std::string repo_to_json_line(const RepoDescriptor& repo);

}  // namespace sdx
