#include <cstdlib>
#include <iostream>
#include <set>
#include <string>

#include <httplib.h>
#include <json.hpp>

#include "sdx/errors.hpp"
#include "sdx/ingest.hpp"

namespace sdx {
namespace {

using nlohmann::json;

constexpr long kStarCeiling = 1000000000;  // stand-in for an unbounded bucket

struct SearchPage {
  long total_count = 0;
  std::vector<RepoDescriptor> items;
};

class SearchClient {
 public:
  SearchClient(const std::string& base_url, const std::string& token)
      : client_(base_url), token_(token) {
    client_.set_connection_timeout(30);
    client_.set_read_timeout(60);
    client_.set_follow_location(true);
  }

  SearchPage get(const std::string& query, int per_page, int page) {
    httplib::Headers headers = {
        {"Accept", "application/vnd.github+json"},
        {"Authorization", "Bearer " + token_},
        {"User-Agent", "sdx-toolkit"},
    };
    std::string path = "/search/repositories?q=" + httplib::detail::encode_query_param(query) +
                       "&sort=stars&order=desc&per_page=" + std::to_string(per_page) +
                       "&page=" + std::to_string(page);
    auto res = client_.Get(path, headers);
    if (!res) {
      throw NetworkError("request failed: " + httplib::to_string(res.error()));
    }
    if (res->status == 401) throw AuthError("authentication rejected (401)");
    if (res->status == 403 || res->status == 429) {
      int retry_after = 60;
      if (res->has_header("Retry-After")) {
        retry_after = std::atoi(res->get_header_value("Retry-After").c_str());
      }
      throw RateLimitError("rate limited (" + std::to_string(res->status) + ")", retry_after);
    }
    if (res->status != 200) {
      throw NetworkError("unexpected status " + std::to_string(res->status));
    }

    json body;
    try {
      body = json::parse(res->body);
    } catch (const json::parse_error& e) {
      throw NetworkError(std::string("unparseable response: ") + e.what());
    }
    SearchPage out;
    out.total_count = body.value("total_count", 0L);
    for (const auto& item : body["items"]) {
      RepoDescriptor repo;
      repo.full_name = item.value("full_name", "");
      repo.stars = item.value("stargazers_count", 0L);
      repo.clone_url = item.value("clone_url", "");
      out.items.push_back(std::move(repo));
    }
    return out;
  }

 private:
  httplib::Client client_;
  std::string token_;
};

std::string star_query(long lo, long hi) {
  if (hi >= kStarCeiling) return "stars:>=" + std::to_string(lo);
  return "stars:" + std::to_string(lo) + ".." + std::to_string(hi);
}

void collect(std::vector<RepoDescriptor>& out, const SearchPage& page) {
  for (const auto& r : page.items) out.push_back(r);
}

// Fetches the bucket [lo, hi], splitting it when the service reports more
// results than one query can return. Recurses into the upper half first so
// repositories arrive in descending star order.
void fetch_bucket(SearchClient& client, long lo, long hi, const FetchOptions& options,
                  std::vector<RepoDescriptor>& out) {
  std::string query = star_query(lo, hi);
  SearchPage first = client.get(query, options.per_page, 1);
  if (first.total_count == 0) return;
  if (first.total_count > options.result_cap && lo < hi) {
    long mid = lo + (hi - lo) / 2;
    fetch_bucket(client, mid + 1, hi, options, out);
    fetch_bucket(client, lo, mid, options, out);
    return;
  }
  if (first.total_count > options.result_cap) {
    std::cerr << "warning: bucket " << query << " holds " << first.total_count
              << " repositories; only the first " << options.result_cap
              << " are reachable\n";
  }
  collect(out, first);
  long reachable = std::min<long>(first.total_count, options.result_cap);
  int pages = static_cast<int>((reachable + options.per_page - 1) / options.per_page);
  for (int page = 2; page <= pages; ++page) {
    SearchPage next = client.get(query, options.per_page, page);
    collect(out, next);
  }
}

}  // namespace

std::vector<RepoDescriptor> fetch_repositories(long min_stars, const std::string& auth_token,
                                               const FetchOptions& options) {
  if (auth_token.empty()) {
    throw AuthError("no API token; set SDX_API_TOKEN");
  }
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (options.base_url.starts_with("https://")) {
    throw NetworkError("built without TLS support; https endpoints unavailable");
  }
#endif
  SearchClient client(options.base_url, auth_token);
  std::vector<RepoDescriptor> raw;
  fetch_bucket(client, min_stars, kStarCeiling, options, raw);

  std::vector<RepoDescriptor> out;
  std::set<std::string> seen;
  for (auto& repo : raw) {
    if (repo.full_name.empty() || repo.stars < min_stars) continue;
    if (seen.insert(repo.full_name).second) out.push_back(std::move(repo));
  }
  return out;
}

}  // namespace sdx
