#include "sdx/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "sdx/errors.hpp"
#include "sdx/metrics.hpp"

namespace sdx {

std::vector<std::string> bow_tokens(const std::string& text) {
  std::vector<std::string> tokens;
  std::istringstream in(text);
  std::string token;
  while (in >> token) tokens.push_back(std::move(token));
  return tokens;
}

namespace {

double vector_norm(const std::vector<std::pair<std::size_t, double>>& v) {
  double n = 0.0;
  for (const auto& [col, count] : v) n += count * count;
  return std::sqrt(n);
}

}  // namespace

RetrievalIndex build_index(const std::vector<std::pair<std::string, std::string>>& pairs) {
  if (pairs.empty()) throw EmptyInputError("no pairs to index");

  RetrievalIndex index;
  for (const auto& [diff, message] : pairs) {
    std::vector<std::pair<std::size_t, double>> counts;
    for (const std::string& term : bow_tokens(diff)) {
      auto [it, inserted] = index.term_to_column.try_emplace(term, index.vocabulary.size());
      if (inserted) index.vocabulary.push_back(term);
      std::size_t col = it->second;
      auto found = std::find_if(counts.begin(), counts.end(),
                                [col](const auto& p) { return p.first == col; });
      if (found == counts.end()) {
        counts.emplace_back(col, 1.0);
      } else {
        found->second += 1.0;
      }
    }
    std::sort(counts.begin(), counts.end());
    index.norms.push_back(vector_norm(counts));
    index.vectors.push_back(std::move(counts));
    index.diffs.push_back(diff);
    index.messages.push_back(message);
  }
  return index;
}

Explanation explain(const RetrievalIndex& index, const std::string& query_diff, int k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (index.size() == 0) throw EmptyInputError("empty index");
  std::size_t kk = std::min<std::size_t>(static_cast<std::size_t>(k), index.size());

  // Query term frequencies over the known vocabulary; unknown terms
  // contribute nothing to the cosine.
  std::unordered_map<std::size_t, double> query;
  for (const std::string& term : bow_tokens(query_diff)) {
    auto it = index.term_to_column.find(term);
    if (it != index.term_to_column.end()) query[it->second] += 1.0;
  }
  double query_norm = 0.0;
  for (const auto& [col, count] : query) query_norm += count * count;
  query_norm = std::sqrt(query_norm);

  std::vector<std::size_t> shortlist;
  std::vector<double> sims(index.size(), 0.0);
  if (query.empty() || query_norm == 0.0) {
    std::cerr << "warning: query shares no terms with the index; "
                 "reranking the first " << kk << " stored entries\n";
    for (std::size_t i = 0; i < kk; ++i) shortlist.push_back(i);
  } else {
    for (std::size_t i = 0; i < index.size(); ++i) {
      double dot = 0.0;
      for (const auto& [col, count] : index.vectors[i]) {
        auto it = query.find(col);
        if (it != query.end()) dot += count * it->second;
      }
      double denom = index.norms[i] * query_norm;
      sims[i] = denom > 0.0 ? dot / denom : 0.0;
    }
    std::vector<std::size_t> order(index.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (sims[a] != sims[b]) return sims[a] > sims[b];
      return a < b;
    });
    shortlist.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(kk));
    std::sort(shortlist.begin(), shortlist.end());  // lower row wins BLEU ties
  }

  Explanation best;
  double best_bleu = -1.0;
  for (std::size_t row : shortlist) {
    double score = bleu4(index.diffs[row], query_diff);
    if (score > best_bleu) {
      best_bleu = score;
      best.provenance = row;
    }
  }
  best.message = index.messages[best.provenance];
  best.cosine = sims[best.provenance];
  best.bleu = best_bleu;
  return best;
}

void save_index(const RetrievalIndex& index, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  nlohmann::ordered_json vocab_row;
  vocab_row["vocabulary"] = index.vocabulary;
  out << vocab_row.dump() << "\n";
  for (std::size_t i = 0; i < index.size(); ++i) {
    nlohmann::ordered_json row;
    row["diff"] = index.diffs[i];
    row["message"] = index.messages[i];
    nlohmann::ordered_json counts = nlohmann::ordered_json::array();
    for (const auto& [col, count] : index.vectors[i]) {
      counts.push_back({col, static_cast<long>(count)});
    }
    row["counts"] = std::move(counts);
    out << row.dump() << "\n";
  }
  if (!out) throw IoError("failed writing " + path);
}

RetrievalIndex load_index(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  int line_no = 0;

  RetrievalIndex index;
  if (!std::getline(in, line)) throw FormatError("empty index file");
  ++line_no;
  try {
    nlohmann::json vocab_row = nlohmann::json::parse(line);
    if (!vocab_row.contains("vocabulary") || !vocab_row["vocabulary"].is_array()) {
      throw FormatError(line_no, "first row must hold the vocabulary");
    }
    for (const auto& term : vocab_row["vocabulary"]) {
      index.term_to_column.emplace(term.get<std::string>(), index.vocabulary.size());
      index.vocabulary.push_back(term.get<std::string>());
    }
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(line_no, std::string("invalid JSON: ") + e.what());
  }

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json row;
    try {
      row = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw FormatError(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!row.contains("diff") || !row.contains("message") || !row.contains("counts")) {
      throw FormatError(line_no, "index row needs diff, message and counts");
    }
    std::vector<std::pair<std::size_t, double>> counts;
    for (const auto& pair : row["counts"]) {
      if (!pair.is_array() || pair.size() != 2) {
        throw FormatError(line_no, "counts entries must be [column, count]");
      }
      std::size_t col = pair[0].get<std::size_t>();
      if (col >= index.vocabulary.size()) {
        throw FormatError(line_no, "count column outside the vocabulary");
      }
      counts.emplace_back(col, pair[1].get<double>());
    }
    std::sort(counts.begin(), counts.end());
    index.norms.push_back(vector_norm(counts));
    index.vectors.push_back(std::move(counts));
    index.diffs.push_back(row["diff"].get<std::string>());
    index.messages.push_back(row["message"].get<std::string>());
  }
  return index;
}

}  // namespace sdx
