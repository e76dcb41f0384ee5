#pragma once

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace sdx {

/// Bag-of-words index over training diffs. Vocabulary columns are assigned
/// in first-occurrence order across the stored diffs; vectors hold raw term
/// counts (sparse, sorted by column).
struct RetrievalIndex {
  std::vector<std::string> vocabulary;
  std::unordered_map<std::string, std::size_t> term_to_column;
  std::vector<std::vector<std::pair<std::size_t, double>>> vectors;
  std::vector<double> norms;
  std::vector<std::string> diffs;
  std::vector<std::string> messages;

  std::size_t size() const { return diffs.size(); }
};

struct Explanation {
  std::string message;
  std::size_t provenance = 0;  // row of the selected training example
  double cosine = 0.0;
  double bleu = 0.0;
};

/// Tokenization for the bag of words: whitespace split, case preserved.
std::vector<std::string> bow_tokens(const std::string& text);

RetrievalIndex build_index(const std::vector<std::pair<std::string, std::string>>& pairs);

/// Two-stage nearest-neighbour lookup: cosine similarity over term
/// frequencies picks the top-k candidates (ties to the lower row), then the
/// candidate whose stored diff scores the highest BLEU-4 against the query
/// wins (ties to the lower row again). k is clamped to the index size. A
/// query with no known terms falls back to BLEU reranking over the first k
/// rows, with a warning on stderr.
Explanation explain(const RetrievalIndex& index, const std::string& query_diff, int k);

/// NDJSON persistence: a vocabulary row followed by one row per example;
/// load_index(save_index(x)) reproduces x.
void save_index(const RetrievalIndex& index, const std::string& path);
RetrievalIndex load_index(const std::string& path);

}  // namespace sdx
