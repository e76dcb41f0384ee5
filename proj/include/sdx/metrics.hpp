#pragma once

#include <memory>
#include <string>
#include <vector>

namespace sdx {

/// BLEU-n with per-order weights and add-one smoothing on orders >= 2.
/// With the defaults, identical sentences score exactly 100 and pairs with
/// no unigram overlap score exactly 0.
struct BleuConfig {
  int max_order = 4;
  // Equal weights 1/max_order; p_1 stays unsmoothed so zero-overlap pairs
  // score zero, higher orders get (hits+1)/(total+1).
};

/// Case-insensitive word-token BLEU in [0, 100]: modified n-gram precisions
/// with clipping, brevity penalty exp(1 - r/c) when the candidate is not
/// longer than the reference.
double bleu4(const std::string& candidate, const std::string& reference,
             const BleuConfig& cfg = {});

/// Byte-identical string equality (case- and space-sensitive).
bool exact_match(const std::string& candidate, const std::string& reference);

/// Turns texts into fixed-length numeric vectors. Implementations must be
/// deterministic and order-preserving.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) = 0;
  virtual std::string name() const = 0;
};

/// Default provider: 256-dimension feature-hashed term-frequency vectors,
/// L2-normalized. A fast stand-in that is NOT equivalent to a trained
/// sentence encoder; production-grade semantic scores need an external
/// provider process.
class HashBagProvider : public EmbeddingProvider {
 public:
  explicit HashBagProvider(std::size_t dimensions = 256) : dimensions_(dimensions) {}
  std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) override;
  std::string name() const override;

  /// Hash bucket of one token (exposed so tests can construct
  /// collision-free token sets).
  std::size_t bucket(const std::string& token) const;

 private:
  std::size_t dimensions_;
};

/// Bridges to an external embedding process: texts go in one per line on
/// stdin (embedded newlines are replaced by spaces), vectors come back one
/// per line as space-separated decimals, order-preserving.
class ProcessProvider : public EmbeddingProvider {
 public:
  explicit ProcessProvider(std::string command) : command_(std::move(command)) {}
  std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) override;
  std::string name() const override;

 private:
  std::string command_;
};

/// Cosine of the two texts' embeddings in [-1, 1]; exactly 1 for identical
/// vectors, 0 (with a warning) when either vector is all-zero. Raises
/// DimensionMismatchError when the provider returns unequal lengths.
double semantic_similarity(const std::string& candidate, const std::string& reference,
                           EmbeddingProvider& provider);

struct MetricRow {
  std::string id;
  double bleu = 0.0;
  int exact = 0;
  double semsim = 0.0;

  bool operator==(const MetricRow& other) const = default;
};

struct MetricReport {
  std::string bleu_description;
  std::string provider_name;
  std::vector<MetricRow> rows;
  double mean_bleu = 0.0;
  double exact_match_rate = 0.0;  // percentage
  double mean_semsim = 0.0;
  std::size_t count = 0;

  bool operator==(const MetricReport& other) const = default;
};

struct EvalRow {
  std::string id;
  std::string candidate;
  std::string reference;
};

/// Scores every row and aggregates arithmetic means (exact match as a
/// percentage). Row order is input order. Raises EmptyInputError on an
/// empty list.
MetricReport evaluate_corpus(const std::vector<EvalRow>& rows, const BleuConfig& cfg,
                             EmbeddingProvider& provider);

std::string report_to_json(const MetricReport& report);
MetricReport report_from_json(const std::string& text);

}  // namespace sdx
