#include "sdx/metrics.hpp"

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "sdx/errors.hpp"
#include "sdx/subprocess.hpp"

namespace sdx {
namespace {

std::vector<std::string> lower_tokens(const std::string& text) {
  std::vector<std::string> tokens;
  std::istringstream in(text);
  std::string token;
  while (in >> token) {
    for (char& c : token) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    tokens.push_back(std::move(token));
  }
  return tokens;
}

// n-gram multiset as joined strings; '\x1f' cannot appear inside word
// tokens, so joining is collision-free.
std::map<std::string, int> ngram_counts(const std::vector<std::string>& tokens, int n) {
  std::map<std::string, int> counts;
  if (static_cast<int>(tokens.size()) < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key;
    for (int j = 0; j < n; ++j) {
      if (j) key += '\x1f';
      key += tokens[i + j];
    }
    ++counts[key];
  }
  return counts;
}

}  // namespace

double bleu4(const std::string& candidate, const std::string& reference,
             const BleuConfig& cfg) {
  std::vector<std::string> cand = lower_tokens(candidate);
  std::vector<std::string> ref = lower_tokens(reference);
  const int orders = cfg.max_order;
  if (cand.empty()) return 0.0;

  double log_sum = 0.0;
  for (int n = 1; n <= orders; ++n) {
    std::map<std::string, int> cand_counts = ngram_counts(cand, n);
    std::map<std::string, int> ref_counts = ngram_counts(ref, n);
    long hits = 0, total = 0;
    for (const auto& [gram, count] : cand_counts) {
      total += count;
      auto it = ref_counts.find(gram);
      if (it != ref_counts.end()) hits += std::min(count, it->second);
    }
    double p;
    if (n == 1) {
      p = total > 0 ? static_cast<double>(hits) / static_cast<double>(total) : 0.0;
      if (p == 0.0) return 0.0;
    } else {
      p = static_cast<double>(hits + 1) / static_cast<double>(total + 1);
    }
    log_sum += std::log(p) / orders;
  }

  double c = static_cast<double>(cand.size());
  double r = static_cast<double>(ref.size());
  double bp = c > r ? 1.0 : std::exp(1.0 - r / c);
  return 100.0 * bp * std::exp(log_sum);
}

bool exact_match(const std::string& candidate, const std::string& reference) {
  return candidate == reference;
}

// ---------------------------------------------------------------------------
// Embedding providers
// ---------------------------------------------------------------------------

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

std::size_t HashBagProvider::bucket(const std::string& token) const {
  return static_cast<std::size_t>(fnv1a(token) % dimensions_);
}

std::vector<std::vector<double>> HashBagProvider::embed(const std::vector<std::string>& texts) {
  std::vector<std::vector<double>> out;
  out.reserve(texts.size());
  for (const auto& text : texts) {
    std::vector<double> v(dimensions_, 0.0);
    std::istringstream in(text);
    std::string token;
    bool any = false;
    while (in >> token) {
      v[bucket(token)] += 1.0;
      any = true;
    }
    if (any) {
      double norm = 0.0;
      for (double x : v) norm += x * x;
      norm = std::sqrt(norm);
      for (double& x : v) x /= norm;
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::string HashBagProvider::name() const {
  return "hash-bag-" + std::to_string(dimensions_);
}

std::vector<std::vector<double>> ProcessProvider::embed(const std::vector<std::string>& texts) {
  namespace fs = std::filesystem;
  static std::atomic<unsigned> counter{0};
  fs::path dir = fs::temp_directory_path();
  fs::path in_path = dir / ("sdx-provider-" + std::to_string(::getpid()) + "-" +
                            std::to_string(counter++) + ".txt");
  {
    std::ofstream in_file(in_path, std::ios::binary);
    if (!in_file) throw ProviderError("cannot stage provider input");
    for (const auto& text : texts) {
      std::string flat = text;
      for (char& c : flat) {
        if (c == '\n' || c == '\r') c = ' ';
      }
      in_file << flat << "\n";
    }
  }

  CommandResult result = run_command(command_ + " < " + shell_quote(in_path.string()));
  std::error_code ec;
  fs::remove(in_path, ec);
  if (result.exit_code != 0) {
    throw ProviderError("provider command failed with exit code " +
                        std::to_string(result.exit_code));
  }

  std::vector<std::vector<double>> out;
  std::istringstream lines(result.output);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    std::vector<double> v;
    std::istringstream nums(line);
    double x;
    while (nums >> x) v.push_back(x);
    if (!nums.eof()) throw ProviderError("unparseable vector line: '" + line + "'");
    out.push_back(std::move(v));
  }
  if (out.size() != texts.size()) {
    throw ProviderError("provider returned " + std::to_string(out.size()) + " vectors for " +
                        std::to_string(texts.size()) + " texts");
  }
  return out;
}

std::string ProcessProvider::name() const { return "process:" + command_; }

namespace {

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw DimensionMismatchError("embedding dimensions differ: " + std::to_string(a.size()) +
                                 " vs " + std::to_string(b.size()));
  }
  if (a == b) {
    // cos(v, v) is 1 by definition; also covers the all-zero warning below.
    bool zero = true;
    for (double x : a) {
      if (x != 0.0) {
        zero = false;
        break;
      }
    }
    if (!zero) return 1.0;
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) {
    std::cerr << "warning: zero embedding vector; semantic similarity reported as 0\n";
    return 0.0;
  }
  double cos = dot / (std::sqrt(na) * std::sqrt(nb));
  return std::min(1.0, std::max(-1.0, cos));
}

}  // namespace

double semantic_similarity(const std::string& candidate, const std::string& reference,
                           EmbeddingProvider& provider) {
  std::vector<std::vector<double>> vecs = provider.embed({candidate, reference});
  if (vecs.size() != 2) throw ProviderError("provider returned wrong vector count");
  return cosine(vecs[0], vecs[1]);
}

MetricReport evaluate_corpus(const std::vector<EvalRow>& rows, const BleuConfig& cfg,
                             EmbeddingProvider& provider) {
  if (rows.empty()) throw EmptyInputError("no rows to evaluate");

  // One provider call for all texts keeps external processes cheap:
  // candidates first, references after.
  std::vector<std::string> texts;
  texts.reserve(rows.size() * 2);
  for (const auto& r : rows) texts.push_back(r.candidate);
  for (const auto& r : rows) texts.push_back(r.reference);
  std::vector<std::vector<double>> vecs = provider.embed(texts);
  if (vecs.size() != texts.size()) throw ProviderError("provider returned wrong vector count");

  MetricReport report;
  report.bleu_description =
      "case-insensitive BLEU-" + std::to_string(cfg.max_order) +
      ", equal weights, add-one smoothing on orders 2.." + std::to_string(cfg.max_order);
  report.provider_name = provider.name();
  double bleu_sum = 0.0, sem_sum = 0.0;
  long exact_sum = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    MetricRow row;
    row.id = rows[i].id;
    row.bleu = bleu4(rows[i].candidate, rows[i].reference, cfg);
    row.exact = exact_match(rows[i].candidate, rows[i].reference) ? 1 : 0;
    row.semsim = cosine(vecs[i], vecs[rows.size() + i]);
    bleu_sum += row.bleu;
    sem_sum += row.semsim;
    exact_sum += row.exact;
    report.rows.push_back(std::move(row));
  }
  report.count = rows.size();
  report.mean_bleu = bleu_sum / static_cast<double>(rows.size());
  report.mean_semsim = sem_sum / static_cast<double>(rows.size());
  report.exact_match_rate = 100.0 * static_cast<double>(exact_sum) / static_cast<double>(rows.size());
  return report;
}

std::string report_to_json(const MetricReport& report) {
  nlohmann::ordered_json obj;
  obj["bleu"] = report.bleu_description;
  obj["provider"] = report.provider_name;
  obj["count"] = report.count;
  obj["mean_bleu"] = report.mean_bleu;
  obj["exact_match_rate"] = report.exact_match_rate;
  obj["mean_semsim"] = report.mean_semsim;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    nlohmann::ordered_json row;
    row["id"] = r.id;
    row["bleu"] = r.bleu;
    row["exact"] = r.exact;
    row["semsim"] = r.semsim;
    rows.push_back(std::move(row));
  }
  obj["rows"] = std::move(rows);
  return obj.dump(2);
}

MetricReport report_from_json(const std::string& text) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("invalid report JSON: ") + e.what());
  }
  MetricReport report;
  report.bleu_description = obj.value("bleu", "");
  report.provider_name = obj.value("provider", "");
  report.count = obj.value("count", 0UL);
  report.mean_bleu = obj.value("mean_bleu", 0.0);
  report.exact_match_rate = obj.value("exact_match_rate", 0.0);
  report.mean_semsim = obj.value("mean_semsim", 0.0);
  for (const auto& r : obj["rows"]) {
    MetricRow row;
    row.id = r.value("id", "");
    row.bleu = r.value("bleu", 0.0);
    row.exact = r.value("exact", 0);
    row.semsim = r.value("semsim", 0.0);
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace sdx
