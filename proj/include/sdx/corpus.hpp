#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sdx/encoder.hpp"
#include "sdx/record.hpp"

namespace sdx {

enum class Stage { kPretrain, kFinetune };

std::string stage_name(Stage stage);
std::optional<Stage> stage_from_name(const std::string& name);

/// One (input sequence, target message) training pair. Pretrain inputs
/// contain exactly one separator token, finetune inputs none.
struct DatasetExample {
  std::string id;  // "repo@sha"
  std::string repo;
  std::string sha;
  std::string input_sequence;
  std::string target_message;
  Stage stage = Stage::kPretrain;

  bool operator==(const DatasetExample& other) const = default;
};

enum class RejectReason {
  kNotBugfix,
  kMachineGenerated,
  kNoPythonFile,
  kOnlyTestFiles,
  kMsgTooLong,
  kDiffTooLong,
  kMsgTooShort,
  kMultiHunk,
  kParseFailure,
  kEmptyBuggySide,
};

std::string reject_reason_name(RejectReason reason);

struct FilterDecision {
  bool accepted = false;
  std::optional<RejectReason> reason;

  static FilterDecision accept() { return {true, std::nullopt}; }
  static FilterDecision reject(RejectReason r) { return {false, r}; }
  bool operator==(const FilterDecision& other) const = default;
};

struct FilterConfig {
  int min_msg_tokens = 5;
  int max_msg_tokens = 30;
  int max_diff_tokens = 170;
  int context_radius = 3;  // used by the buggy-side encodability check
};

/// True iff the lowercased message contains "fix" or "solve" as a
/// substring.
bool is_bugfix(const std::string& message);

/// The built-in machine-template patterns (one regex per line category:
/// merges, reverts, trailer lines, bot version bumps, cherry-pick
/// annotations, auto-format notices, CI skip tags).
const std::vector<std::string>& default_template_patterns();

/// Removes message lines matching any pattern and trims the result; an
/// empty return value means the whole commit is machine-generated and must
/// be discarded.
std::string strip_generated(const std::string& message,
                            const std::vector<std::string>& patterns = default_template_patterns());

/// Whitespace-delimited word-token count, the unit of every length
/// threshold.
int word_token_count(const std::string& text);

/// Path classifier for the "no test scripts" rule: true for files under a
/// test/tests directory segment or named test_*.py / *_test.py.
bool is_test_script(const std::string& path);

/// Applies the noise rules in order (bug-fix keyword, changed non-test
/// Python file, message length bounds, diff length bound, single hunk, both
/// versions parse, non-empty buggy side) to a record whose message is
/// already template-stripped. The first failing rule becomes the reason.
FilterDecision passes_filters(const CommitRecord& record, const FilterConfig& cfg);

/// strip_generated + passes_filters in one step; `stripped` (when non-null)
/// receives the message the caller should keep for accepted records.
FilterDecision filter_record(const CommitRecord& record, const FilterConfig& cfg,
                             const std::vector<std::string>& patterns = default_template_patterns(),
                             std::string* stripped = nullptr);

// --------------------------------------------------------------------------
// Splits
// --------------------------------------------------------------------------

struct SplitConfig {
  // Defaults mirror the 110K/10K/10K/10K/10K construction.
  double train = 110.0 / 150.0;
  double pretrain_val = 10.0 / 150.0;
  double pretrain_test = 10.0 / 150.0;
  double finetune_val = 10.0 / 150.0;
  double finetune_test = 10.0 / 150.0;
  // Cross-project splits may overshoot a partition budget by at most this
  // fraction of the total example count before the split is infeasible.
  double slack = 0.10;

  std::array<double, 5> fractions() const {
    return {train, pretrain_val, pretrain_test, finetune_val, finetune_test};
  }
};

inline constexpr std::array<const char*, 5> kPartitionNames = {
    "train", "pretrain_val", "pretrain_test", "finetune_val", "finetune_test"};

template <typename T>
struct SplitResult {
  std::vector<T> train;
  std::vector<T> pretrain_val;
  std::vector<T> pretrain_test;
  std::vector<T> finetune_val;
  std::vector<T> finetune_test;

  std::vector<T>& partition(std::size_t i) {
    switch (i) {
      case 0: return train;
      case 1: return pretrain_val;
      case 2: return pretrain_test;
      case 3: return finetune_val;
      default: return finetune_test;
    }
  }
};

/// Largest-remainder integer quotas for `total` items under `fractions`
/// (ties broken by partition order).
std::array<std::size_t, 5> partition_quotas(std::size_t total,
                                            const std::array<double, 5>& fractions);

/// Deterministic Fisher-Yates permutation of {0..n-1} under `seed`;
/// identical across platforms.
std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed);

/// Index-level split cores. `repos` maps each example index to its
/// repository key for the cross-project variant.
std::array<std::vector<std::size_t>, 5> split_random_indices(std::size_t n,
                                                             const SplitConfig& cfg,
                                                             std::uint64_t seed);
std::array<std::vector<std::size_t>, 5> split_cross_project_indices(
    const std::vector<std::string>& repos, const SplitConfig& cfg, std::uint64_t seed);

SplitResult<DatasetExample> split_random(const std::vector<DatasetExample>& examples,
                                         const SplitConfig& cfg, std::uint64_t seed);
SplitResult<DatasetExample> split_cross_project(const std::vector<DatasetExample>& examples,
                                                const SplitConfig& cfg, std::uint64_t seed);

// --------------------------------------------------------------------------
// Dataset files
// --------------------------------------------------------------------------

/// Builds the stage-tagged example for an accepted record (diffsbt_full for
/// pretrain, diffsbt_buggy for finetune).
DatasetExample encode_example(const CommitRecord& record, Stage stage,
                              const EncodeOptions& options = {});

/// Writes JSONL rows {id, repo, sha, input, target} in input order. Every
/// example must carry `stage` and satisfy the stage's separator invariant.
void emit_dataset(const std::vector<DatasetExample>& examples, Stage stage,
                  const std::string& out_path);

std::vector<DatasetExample> load_dataset(const std::string& path, Stage stage);

std::string example_to_json_line(const DatasetExample& example);
DatasetExample example_from_json_line(const std::string& line, Stage stage, int line_no);

}  // namespace sdx
