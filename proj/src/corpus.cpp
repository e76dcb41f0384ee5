#include "sdx/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <random>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "sdx/diff.hpp"
#include "sdx/errors.hpp"
#include "sdx/parser.hpp"

namespace sdx {

std::string stage_name(Stage stage) {
  return stage == Stage::kPretrain ? "pretrain" : "finetune";
}

std::optional<Stage> stage_from_name(const std::string& name) {
  if (name == "pretrain") return Stage::kPretrain;
  if (name == "finetune") return Stage::kFinetune;
  return std::nullopt;
}

std::string reject_reason_name(RejectReason reason) {
  switch (reason) {
    case RejectReason::kNotBugfix: return "NotBugfix";
    case RejectReason::kMachineGenerated: return "MachineGenerated";
    case RejectReason::kNoPythonFile: return "NoPythonFile";
    case RejectReason::kOnlyTestFiles: return "OnlyTestFiles";
    case RejectReason::kMsgTooLong: return "MsgTooLong";
    case RejectReason::kDiffTooLong: return "DiffTooLong";
    case RejectReason::kMsgTooShort: return "MsgTooShort";
    case RejectReason::kMultiHunk: return "MultiHunk";
    case RejectReason::kParseFailure: return "ParseFailure";
    case RejectReason::kEmptyBuggySide: return "EmptyBuggySide";
  }
  return "Unknown";
}

bool is_bugfix(const std::string& message) {
  std::string lower;
  lower.reserve(message.size());
  for (char c : message) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return lower.find("fix") != std::string::npos || lower.find("solve") != std::string::npos;
}

const std::vector<std::string>& default_template_patterns() {
  static const std::vector<std::string> patterns = {
      R"(^Merge (branch|pull request|remote-tracking branch|tag) .*$)",
      R"(^(Revert ".*"|This reverts commit [0-9a-fA-F]+\.?)$)",
      R"(^(Signed-off-by|Co-authored-by|Co-Authored-By|Reviewed-by|Acked-by|Tested-by): .*$)",
      R"(^Bump .+ from .+ to .+$)",
      R"(^\(cherry picked from commit [0-9a-fA-F]+\)$)",
      R"(^(Auto-?format(ted)?( .*)?|Formatted (code|with) .*)$)",
      R"(^\[(skip ci|ci skip|no ci)\]$)",
  };
  return patterns;
}

std::string strip_generated(const std::string& message,
                            const std::vector<std::string>& patterns) {
  std::vector<std::regex> res;
  res.reserve(patterns.size());
  for (const auto& p : patterns) res.emplace_back(p);

  std::string out;
  std::istringstream in(message);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    bool drop = false;
    for (const auto& re : res) {
      if (std::regex_match(line, re)) {
        drop = true;
        break;
      }
    }
    if (!drop) out += line + "\n";
  }
  std::size_t b = out.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = out.find_last_not_of(" \t\r\n");
  return out.substr(b, e - b + 1);
}

int word_token_count(const std::string& text) {
  std::istringstream in(text);
  std::string token;
  int n = 0;
  while (in >> token) ++n;
  return n;
}

bool is_test_script(const std::string& path) {
  std::string segment;
  std::vector<std::string> segments;
  for (char c : path) {
    if (c == '/') {
      segments.push_back(std::move(segment));
      segment.clear();
    } else {
      segment += c;
    }
  }
  segments.push_back(std::move(segment));
  for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
    if (segments[i] == "test" || segments[i] == "tests") return true;
  }
  const std::string& name = segments.back();
  if (name.starts_with("test_") && name.ends_with(".py")) return true;
  if (name.ends_with("_test.py")) return true;
  return false;
}

namespace {

bool is_python_file(const std::string& path) { return path.ends_with(".py"); }

const FileChange* single_changed_file(const CommitRecord& record) {
  const FileChange* changed = nullptr;
  for (const auto& f : record.files) {
    if (f.old_source == f.new_source) continue;
    if (changed) return nullptr;
    changed = &f;
  }
  return changed;
}

}  // namespace

FilterDecision passes_filters(const CommitRecord& record, const FilterConfig& cfg) {
  if (!is_bugfix(record.message)) {
    return FilterDecision::reject(RejectReason::kNotBugfix);
  }

  bool has_python = false, has_nontest_python = false;
  for (const auto& f : record.files) {
    if (f.old_source == f.new_source) continue;
    if (!is_python_file(f.path)) continue;
    has_python = true;
    if (!is_test_script(f.path)) has_nontest_python = true;
  }
  if (!has_python) return FilterDecision::reject(RejectReason::kNoPythonFile);
  if (!has_nontest_python) return FilterDecision::reject(RejectReason::kOnlyTestFiles);

  int msg_tokens = word_token_count(record.message);
  if (msg_tokens < cfg.min_msg_tokens) return FilterDecision::reject(RejectReason::kMsgTooShort);
  if (msg_tokens > cfg.max_msg_tokens) return FilterDecision::reject(RejectReason::kMsgTooLong);

  if (word_token_count(render_commit_diff(record)) > cfg.max_diff_tokens) {
    return FilterDecision::reject(RejectReason::kDiffTooLong);
  }

  int hunks = 0;
  for (const auto& f : record.files) {
    hunks += compute_diff(f.old_source, f.new_source).hunk_count;
  }
  if (hunks != 1) return FilterDecision::reject(RejectReason::kMultiHunk);

  // One hunk means one changed file; it is the Python file checked above.
  const FileChange* file = single_changed_file(record);
  if (!file) return FilterDecision::reject(RejectReason::kMultiHunk);
  try {
    parse_source(file->old_source);
    parse_source(file->new_source);
  } catch (const SyntaxError&) {
    return FilterDecision::reject(RejectReason::kParseFailure);
  }

  try {
    EncodeOptions options;
    options.context_radius = cfg.context_radius;
    diffsbt_buggy(record, options);
  } catch (const EmptySideError&) {
    return FilterDecision::reject(RejectReason::kEmptyBuggySide);
  }
  return FilterDecision::accept();
}

FilterDecision filter_record(const CommitRecord& record, const FilterConfig& cfg,
                             const std::vector<std::string>& patterns,
                             std::string* stripped_out) {
  std::string stripped = strip_generated(record.message, patterns);
  if (stripped_out) *stripped_out = stripped;
  if (stripped.empty()) return FilterDecision::reject(RejectReason::kMachineGenerated);
  CommitRecord cleaned = record;
  cleaned.message = stripped;
  return passes_filters(cleaned, cfg);
}

// ---------------------------------------------------------------------------
// Splits
// ---------------------------------------------------------------------------

std::array<std::size_t, 5> partition_quotas(std::size_t total,
                                            const std::array<double, 5>& fractions) {
  double sum = 0;
  for (double f : fractions) {
    if (f < 0) throw std::invalid_argument("negative split fraction");
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("split fractions must sum to 1");

  std::array<std::size_t, 5> quotas{};
  std::array<double, 5> remainders{};
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < 5; ++i) {
    double exact = fractions[i] * static_cast<double>(total);
    quotas[i] = static_cast<std::size_t>(exact);
    remainders[i] = exact - static_cast<double>(quotas[i]);
    assigned += quotas[i];
  }
  std::array<std::size_t, 5> order = {0, 1, 2, 3, 4};
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainders[a] > remainders[b]; });
  for (std::size_t k = 0; assigned < total; ++k) {
    ++quotas[order[k % 5]];
    ++assigned;
  }
  return quotas;
}

namespace {

// Unbiased bounded draw; mt19937_64 output is standardized, so permutations
// are reproducible across platforms and standard libraries.
std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

}  // namespace

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(bounded_draw(rng, i));
    std::swap(idx[i - 1], idx[j]);
  }
  return idx;
}

std::array<std::vector<std::size_t>, 5> split_random_indices(std::size_t n,
                                                             const SplitConfig& cfg,
                                                             std::uint64_t seed) {
  if (n == 0) throw EmptyInputError("no examples to split");
  std::array<std::size_t, 5> quotas = partition_quotas(n, cfg.fractions());
  std::vector<std::size_t> idx = shuffled_indices(n, seed);

  std::array<std::vector<std::size_t>, 5> parts;
  std::size_t pos = 0;
  for (std::size_t p = 0; p < 5; ++p) {
    for (std::size_t k = 0; k < quotas[p]; ++k) parts[p].push_back(idx[pos++]);
    std::sort(parts[p].begin(), parts[p].end());  // keep input order inside partitions
  }
  return parts;
}

std::array<std::vector<std::size_t>, 5> split_cross_project_indices(
    const std::vector<std::string>& repos, const SplitConfig& cfg, std::uint64_t seed) {
  if (repos.empty()) throw EmptyInputError("no examples to split");
  std::array<std::size_t, 5> quotas = partition_quotas(repos.size(), cfg.fractions());

  // Unique repositories in first-appearance order, then shuffled.
  std::vector<std::string> repo_order;
  std::map<std::string, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < repos.size(); ++i) {
    auto [it, inserted] = members.try_emplace(repos[i]);
    if (inserted) repo_order.push_back(repos[i]);
    it->second.push_back(i);
  }
  std::vector<std::size_t> perm = shuffled_indices(repo_order.size(), seed);

  std::array<std::vector<std::size_t>, 5> parts;
  std::array<std::size_t, 5> filled{};
  for (std::size_t r : perm) {
    const std::vector<std::size_t>& ex = members[repo_order[r]];
    // Most-deficient partition; ties go to the lower partition index.
    std::size_t best = 0;
    double best_deficit = -1e300;
    for (std::size_t p = 0; p < 5; ++p) {
      double deficit = static_cast<double>(quotas[p]) - static_cast<double>(filled[p]);
      if (deficit > best_deficit) {
        best_deficit = deficit;
        best = p;
      }
    }
    filled[best] += ex.size();
    for (std::size_t i : ex) parts[best].push_back(i);
  }

  double slack_budget = cfg.slack * static_cast<double>(repos.size());
  for (std::size_t p = 0; p < 5; ++p) {
    double overshoot = static_cast<double>(filled[p]) - static_cast<double>(quotas[p]);
    if (overshoot > slack_budget) {
      throw InfeasibleSplitError(std::string(kPartitionNames[p]) + " exceeds its budget by " +
                                 std::to_string(static_cast<long>(overshoot)) +
                                 " examples (slack " +
                                 std::to_string(static_cast<long>(slack_budget)) + ")");
    }
    std::sort(parts[p].begin(), parts[p].end());
  }
  return parts;
}

namespace {

SplitResult<DatasetExample> gather(const std::vector<DatasetExample>& examples,
                                   const std::array<std::vector<std::size_t>, 5>& parts) {
  SplitResult<DatasetExample> out;
  for (std::size_t p = 0; p < 5; ++p) {
    for (std::size_t i : parts[p]) out.partition(p).push_back(examples[i]);
  }
  return out;
}

}  // namespace

SplitResult<DatasetExample> split_random(const std::vector<DatasetExample>& examples,
                                         const SplitConfig& cfg, std::uint64_t seed) {
  return gather(examples, split_random_indices(examples.size(), cfg, seed));
}

SplitResult<DatasetExample> split_cross_project(const std::vector<DatasetExample>& examples,
                                                const SplitConfig& cfg, std::uint64_t seed) {
  std::vector<std::string> repos;
  repos.reserve(examples.size());
  for (const auto& e : examples) repos.push_back(e.repo);
  return gather(examples, split_cross_project_indices(repos, cfg, seed));
}

// ---------------------------------------------------------------------------
// Dataset files
// ---------------------------------------------------------------------------

DatasetExample encode_example(const CommitRecord& record, Stage stage,
                              const EncodeOptions& options) {
  DatasetExample example;
  example.id = record.id();
  example.repo = record.repo;
  example.sha = record.sha;
  example.target_message = record.message;
  example.stage = stage;
  example.input_sequence = stage == Stage::kPretrain
                               ? diffsbt_full(record, options).to_string()
                               : diffsbt_buggy(record, options).to_string();
  return example;
}

namespace {

int separator_count(const std::string& input) {
  int count = 0;
  std::istringstream in(input);
  std::string token;
  while (in >> token) {
    if (token == kSeparatorToken) ++count;
  }
  return count;
}

void check_stage_invariant(const DatasetExample& example, Stage stage) {
  if (example.stage != stage) {
    throw std::invalid_argument("example " + example.id + " is tagged " +
                                stage_name(example.stage) + ", expected " + stage_name(stage));
  }
  int separators = separator_count(example.input_sequence);
  if (stage == Stage::kPretrain && separators != 1) {
    throw FormatError("pretrain input of " + example.id + " must contain exactly one " +
                      std::string(kSeparatorToken));
  }
  if (stage == Stage::kFinetune && separators != 0) {
    throw FormatError("finetune input of " + example.id + " must not contain " +
                      std::string(kSeparatorToken));
  }
  if (example.target_message.empty()) {
    throw FormatError("example " + example.id + " has an empty target message");
  }
}

}  // namespace

std::string example_to_json_line(const DatasetExample& example) {
  nlohmann::ordered_json obj;
  obj["id"] = example.id;
  obj["repo"] = example.repo;
  obj["sha"] = example.sha;
  obj["input"] = example.input_sequence;
  obj["target"] = example.target_message;
  return obj.dump();
}

DatasetExample example_from_json_line(const std::string& line, Stage stage, int line_no) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(line_no, std::string("invalid JSON: ") + e.what());
  }
  DatasetExample example;
  for (const char* key : {"id", "repo", "sha", "input", "target"}) {
    if (!obj.contains(key) || !obj[key].is_string()) {
      throw FormatError(line_no, std::string("missing string field '") + key + "'");
    }
  }
  example.id = obj["id"].get<std::string>();
  example.repo = obj["repo"].get<std::string>();
  example.sha = obj["sha"].get<std::string>();
  example.input_sequence = obj["input"].get<std::string>();
  example.target_message = obj["target"].get<std::string>();
  example.stage = stage;
  return example;
}

void emit_dataset(const std::vector<DatasetExample>& examples, Stage stage,
                  const std::string& out_path) {
  for (const auto& e : examples) check_stage_invariant(e, stage);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw IoError("cannot open " + out_path + " for writing");
  for (const auto& e : examples) out << example_to_json_line(e) << "\n";
  if (!out) throw IoError("failed writing " + out_path);
}

std::vector<DatasetExample> load_dataset(const std::string& path, Stage stage) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<DatasetExample> examples;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    examples.push_back(example_from_json_line(line, stage, line_no));
  }
  return examples;
}

}  // namespace sdx
