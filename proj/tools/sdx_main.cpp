// sdx - structural diff explanation toolkit, command-line front end.
//
// Subcommands compose through NDJSON/JSONL files: ingest -> filter ->
// encode -> split -> index -> explain -> eval, plus fetch-repos for online
// repository enumeration. Every run prints a reproducibility header
// (version, config hash, seed) on stderr; identical inputs, config and seed
// produce byte-identical outputs.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sdx/config.hpp"
#include "sdx/corpus.hpp"
#include "sdx/diff.hpp"
#include "sdx/encoder.hpp"
#include "sdx/errors.hpp"
#include "sdx/ingest.hpp"
#include "sdx/metrics.hpp"
#include "sdx/retrieval.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

struct Flags {
  std::string input;
  std::string output;
  std::string config_path;
  std::string index_path;
  std::string decisions_path;
  std::string stage = "pretrain";
  std::string split_mode = "random";
  std::string repo_name;
  std::string base_url = "https://api.github.com";
  long min_stars = 300;
  bool seed_set = false;
  std::uint64_t seed = 0;
  bool radius_set = false;
  int context_radius = 3;
  bool k_set = false;
  int k = 5;
  std::string provider_cmd;
  std::string query_field;
  std::string templates_path;
};

sdx::RunConfig effective_config(const Flags& flags) {
  sdx::RunConfig cfg;
  if (!flags.config_path.empty()) cfg = sdx::load_config_file(flags.config_path, cfg);
  if (flags.seed_set) cfg.seed = flags.seed;
  if (flags.radius_set) cfg.context_radius = flags.context_radius;
  if (flags.k_set) cfg.k = flags.k;
  if (!flags.provider_cmd.empty()) cfg.provider_command = flags.provider_cmd;
  if (!flags.query_field.empty()) cfg.query_field = flags.query_field;
  if (!flags.templates_path.empty()) cfg.templates_path = flags.templates_path;
  cfg.filters.context_radius = cfg.context_radius;
  if (cfg.query_field != "diff" && cfg.query_field != "diffsbt") {
    throw sdx::FormatError("query_field must be 'diff' or 'diffsbt'");
  }
  return cfg;
}

void print_header(const std::string& subcommand, const sdx::RunConfig& cfg) {
  std::cerr << "sdx " << sdx::kSdxVersion << " " << subcommand
            << " config=" << sdx::config_hash(cfg) << " seed=" << cfg.seed << "\n";
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw sdx::IoError("cannot open " + path + " for writing");
  return out;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw sdx::IoError("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

sdx::EncodeOptions encode_options(const sdx::RunConfig& cfg) {
  sdx::EncodeOptions options;
  options.context_radius = cfg.context_radius;
  return options;
}

// record rows carry "files"; dataset rows carry "input".
bool looks_like_record(const json& obj) { return obj.contains("files"); }

std::string query_text_for_record(const sdx::CommitRecord& record, const sdx::RunConfig& cfg) {
  if (cfg.query_field == "diffsbt") {
    return sdx::diffsbt_full(record, encode_options(cfg)).to_string();
  }
  return sdx::render_commit_diff(record);
}

// ---------------------------------------------------------------------- ingest

int cmd_ingest(const Flags& flags, const sdx::RunConfig& cfg) {
  print_header("ingest", cfg);
  std::ofstream out = open_output(flags.output);
  std::vector<sdx::CommitRecord> records;
  if (fs::is_directory(flags.input)) {
    records = sdx::enumerate_commits(flags.input, flags.repo_name);
  } else {
    records = sdx::load_dump(flags.input);
  }
  for (const auto& r : records) out << sdx::record_to_json_line(r) << "\n";
  std::cerr << "ingest: " << records.size() << " records\n";
  return 0;
}

// ---------------------------------------------------------------------- filter

int cmd_filter(const Flags& flags, const sdx::RunConfig& cfg) {
  print_header("filter", cfg);
  std::vector<std::string> patterns = cfg.template_patterns();
  std::vector<sdx::CommitRecord> records = sdx::load_dump(flags.input);
  std::ofstream out = open_output(flags.output);
  std::unique_ptr<std::ofstream> decisions;
  if (!flags.decisions_path.empty()) {
    decisions = std::make_unique<std::ofstream>(open_output(flags.decisions_path));
  }

  std::size_t accepted = 0;
  for (const auto& record : records) {
    std::string stripped;
    sdx::FilterDecision decision = sdx::filter_record(record, cfg.filters, patterns, &stripped);
    if (decisions) {
      ordered_json row;
      row["id"] = record.id();
      row["accepted"] = decision.accepted;
      if (decision.reason) row["reason"] = sdx::reject_reason_name(*decision.reason);
      *decisions << row.dump() << "\n";
    }
    if (!decision.accepted) continue;
    sdx::CommitRecord cleaned = record;
    cleaned.message = stripped;
    out << sdx::record_to_json_line(cleaned) << "\n";
    ++accepted;
  }
  std::cerr << "filter: " << accepted << " of " << records.size() << " records accepted\n";
  return 0;
}

// ---------------------------------------------------------------------- encode

int cmd_encode(const Flags& flags, const sdx::RunConfig& cfg) {
  print_header("encode", cfg);
  auto stage = sdx::stage_from_name(flags.stage);
  if (!stage) throw sdx::FormatError("unknown stage '" + flags.stage + "'");
  std::vector<sdx::CommitRecord> records = sdx::load_dump(flags.input);
  std::ofstream out = open_output(flags.output);
  std::size_t emitted = 0;
  for (const auto& record : records) {
    try {
      sdx::DatasetExample example = sdx::encode_example(record, *stage, encode_options(cfg));
      out << sdx::example_to_json_line(example) << "\n";
      ++emitted;
    } catch (const sdx::Error& e) {
      std::cerr << "warning: skipping " << record.id() << ": " << e.what() << "\n";
    }
  }
  std::cerr << "encode: " << emitted << " examples (" << flags.stage << ")\n";
  return 0;
}

// ----------------------------------------------------------------------- split

int cmd_split(const Flags& flags, const sdx::RunConfig& cfg) {
  print_header("split", cfg);
  std::vector<std::string> lines = read_lines(flags.input);
  if (lines.empty()) throw sdx::EmptyInputError("no rows to split");

  std::array<std::vector<std::size_t>, 5> parts;
  if (flags.split_mode == "random") {
    parts = sdx::split_random_indices(lines.size(), cfg.split, cfg.seed);
  } else if (flags.split_mode == "cross-project") {
    std::vector<std::string> repos;
    repos.reserve(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
      json obj = json::parse(lines[i], nullptr, false);
      if (obj.is_discarded() || !obj.contains("repo") || !obj["repo"].is_string()) {
        throw sdx::FormatError(static_cast<int>(i + 1), "row has no 'repo' field");
      }
      repos.push_back(obj["repo"].get<std::string>());
    }
    parts = sdx::split_cross_project_indices(repos, cfg.split, cfg.seed);
  } else {
    throw sdx::FormatError("unknown split mode '" + flags.split_mode + "'");
  }

  fs::create_directories(flags.output);
  for (std::size_t p = 0; p < 5; ++p) {
    std::ofstream out =
        open_output((fs::path(flags.output) / (std::string(sdx::kPartitionNames[p]) + ".jsonl"))
                        .string());
    for (std::size_t i : parts[p]) out << lines[i] << "\n";
    std::cerr << "split: " << sdx::kPartitionNames[p] << " " << parts[p].size() << " rows\n";
  }
  return 0;
}

// ----------------------------------------------------------------------- index

int cmd_index(const Flags& flags, const sdx::RunConfig& cfg) {
  print_header("index", cfg);
  std::vector<std::string> lines = read_lines(flags.input);
  std::vector<std::pair<std::string, std::string>> pairs;
  int line_no = 0;
  for (const auto& line : lines) {
    ++line_no;
    json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded()) throw sdx::FormatError(line_no, "invalid JSON");
    if (looks_like_record(obj)) {
      sdx::CommitRecord record = sdx::record_from_json_line(line, line_no);
      try {
        pairs.emplace_back(query_text_for_record(record, cfg), record.message);
      } catch (const sdx::Error& e) {
        std::cerr << "warning: skipping " << record.id() << ": " << e.what() << "\n";
      }
    } else {
      sdx::DatasetExample example =
          sdx::example_from_json_line(line, sdx::Stage::kPretrain, line_no);
      pairs.emplace_back(example.input_sequence, example.target_message);
    }
  }
  sdx::RetrievalIndex index = sdx::build_index(pairs);
  sdx::save_index(index, flags.output);
  std::cerr << "index: " << index.size() << " entries, vocabulary " << index.vocabulary.size()
            << "\n";
  return 0;
}

// --------------------------------------------------------------------- explain

int cmd_explain(const Flags& flags, const sdx::RunConfig& cfg) {
  print_header("explain", cfg);
  sdx::RetrievalIndex index = sdx::load_index(flags.index_path);
  std::vector<std::string> lines = read_lines(flags.input);
  std::ofstream out = open_output(flags.output);
  int line_no = 0;
  for (const auto& line : lines) {
    ++line_no;
    json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded()) throw sdx::FormatError(line_no, "invalid JSON");
    std::string id, query, reference;
    if (looks_like_record(obj)) {
      sdx::CommitRecord record = sdx::record_from_json_line(line, line_no);
      id = record.id();
      query = query_text_for_record(record, cfg);
      reference = record.message;
    } else {
      sdx::DatasetExample example =
          sdx::example_from_json_line(line, sdx::Stage::kPretrain, line_no);
      id = example.id;
      query = example.input_sequence;
      reference = example.target_message;
    }
    sdx::Explanation result = sdx::explain(index, query, cfg.k);
    ordered_json row;
    row["id"] = id;
    row["candidate"] = result.message;
    row["reference"] = reference;
    row["provenance"] = result.provenance;
    out << row.dump() << "\n";
  }
  std::cerr << "explain: " << lines.size() << " queries answered (k=" << cfg.k << ")\n";
  return 0;
}

// ------------------------------------------------------------------------ eval

int cmd_eval(const Flags& flags, const sdx::RunConfig& cfg) {
  print_header("eval", cfg);
  std::vector<std::string> lines = read_lines(flags.input);
  std::vector<sdx::EvalRow> rows;
  int line_no = 0;
  for (const auto& line : lines) {
    ++line_no;
    json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded()) throw sdx::FormatError(line_no, "invalid JSON");
    sdx::EvalRow row;
    for (const char* key : {"id", "candidate", "reference"}) {
      if (!obj.contains(key) || !obj[key].is_string()) {
        throw sdx::FormatError(line_no, std::string("missing string field '") + key + "'");
      }
    }
    row.id = obj["id"].get<std::string>();
    row.candidate = obj["candidate"].get<std::string>();
    row.reference = obj["reference"].get<std::string>();
    rows.push_back(std::move(row));
  }

  std::unique_ptr<sdx::EmbeddingProvider> provider;
  if (cfg.provider_command.empty()) {
    provider = std::make_unique<sdx::HashBagProvider>();
  } else {
    provider = std::make_unique<sdx::ProcessProvider>(cfg.provider_command);
  }
  sdx::MetricReport report = sdx::evaluate_corpus(rows, sdx::BleuConfig{}, *provider);
  std::ofstream out = open_output(flags.output);
  out << sdx::report_to_json(report) << "\n";
  std::cerr << "eval: " << report.count << " rows, mean BLEU " << report.mean_bleu
            << ", exact " << report.exact_match_rate << "%, mean semsim " << report.mean_semsim
            << "\n";
  return 0;
}

// ----------------------------------------------------------------- fetch-repos

int cmd_fetch_repos(const Flags& flags, const sdx::RunConfig& cfg) {
  print_header("fetch-repos", cfg);
  const char* token = std::getenv("SDX_API_TOKEN");
  sdx::FetchOptions options;
  options.base_url = flags.base_url;
  std::vector<sdx::RepoDescriptor> repos =
      sdx::fetch_repositories(flags.min_stars, token ? token : "", options);
  std::ofstream out = open_output(flags.output);
  for (const auto& r : repos) out << sdx::repo_to_json_line(r) << "\n";
  std::cerr << "fetch-repos: " << repos.size() << " repositories\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"structural diff explanation toolkit"};
  app.require_subcommand(1);

  Flags flags;

  auto add_common = [&](CLI::App* sub, bool needs_input = true) {
    if (needs_input) sub->add_option("--input", flags.input, "input file")->required();
    sub->add_option("--output", flags.output, "output path")->required();
    sub->add_option("--config", flags.config_path, "key = value config file");
    sub->add_option("--seed", flags.seed, "random seed")->each([&](const std::string&) {
      flags.seed_set = true;
    });
  };

  CLI::App* ingest = app.add_subcommand("ingest", "read a git clone or NDJSON dump into records");
  add_common(ingest);
  ingest->add_option("--repo-name", flags.repo_name, "repository id for records (default: basename)");

  CLI::App* filter = app.add_subcommand("filter", "apply bug-fix and noise filters to records");
  add_common(filter);
  filter->add_option("--decisions", flags.decisions_path, "write per-record decisions here");
  filter->add_option("--templates", flags.templates_path, "machine-template pattern file");
  filter->add_option("--context-radius", flags.context_radius, "context lines around changes")
      ->each([&](const std::string&) { flags.radius_set = true; });

  CLI::App* encode = app.add_subcommand("encode", "encode records into a stage dataset");
  add_common(encode);
  encode->add_option("--stage", flags.stage, "pretrain | finetune")
      ->check(CLI::IsMember({"pretrain", "finetune"}));
  encode->add_option("--context-radius", flags.context_radius, "context lines around changes")
      ->each([&](const std::string&) { flags.radius_set = true; });

  CLI::App* split = app.add_subcommand("split", "partition rows into train/val/test files");
  add_common(split);
  split->add_option("--split", flags.split_mode, "random | cross-project")
      ->check(CLI::IsMember({"random", "cross-project"}));

  CLI::App* index = app.add_subcommand("index", "build the retrieval index from training rows");
  add_common(index);
  index->add_option("--query-field", flags.query_field, "diff | diffsbt")
      ->check(CLI::IsMember({"diff", "diffsbt"}));
  index->add_option("--context-radius", flags.context_radius, "context lines around changes")
      ->each([&](const std::string&) { flags.radius_set = true; });

  CLI::App* explain = app.add_subcommand("explain", "answer queries from the retrieval index");
  add_common(explain);
  explain->add_option("--index", flags.index_path, "index file")->required();
  explain->add_option("--k", flags.k, "shortlist size")->each([&](const std::string&) {
    flags.k_set = true;
  });
  explain->add_option("--query-field", flags.query_field, "diff | diffsbt")
      ->check(CLI::IsMember({"diff", "diffsbt"}));

  CLI::App* eval = app.add_subcommand("eval", "score candidate/reference rows");
  add_common(eval);
  eval->add_option("--provider-cmd", flags.provider_cmd, "external embedding provider command");

  CLI::App* fetch = app.add_subcommand("fetch-repos", "enumerate repositories by star count");
  add_common(fetch, /*needs_input=*/false);
  fetch->add_option("--min-stars", flags.min_stars, "minimum star count");
  fetch->add_option("--base-url", flags.base_url, "search service base URL");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    sdx::RunConfig cfg = effective_config(flags);
    if (ingest->parsed()) return cmd_ingest(flags, cfg);
    if (filter->parsed()) return cmd_filter(flags, cfg);
    if (encode->parsed()) return cmd_encode(flags, cfg);
    if (split->parsed()) return cmd_split(flags, cfg);
    if (index->parsed()) return cmd_index(flags, cfg);
    if (explain->parsed()) return cmd_explain(flags, cfg);
    if (eval->parsed()) return cmd_eval(flags, cfg);
    if (fetch->parsed()) return cmd_fetch_repos(flags, cfg);
    std::cerr << "no subcommand\n";
    return 1;
  } catch (const sdx::AuthError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const sdx::RateLimitError& e) {
    std::cerr << "error: " << e.what() << " (retry after " << e.retry_after_seconds() << "s)\n";
    return 3;
  } catch (const sdx::NetworkError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
