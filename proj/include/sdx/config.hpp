#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sdx/corpus.hpp"

namespace sdx {

inline constexpr const char* kSdxVersion = "0.1.0";

/// Effective run settings. Defaults are the pipeline's fixed constants:
/// context radius 3, k = 5, message length 5..30 word tokens, diff length
/// <= 170 word tokens, split 110/10/10/10/10 out of 150.
struct RunConfig {
  int context_radius = 3;
  int k = 5;
  std::uint64_t seed = 0;
  FilterConfig filters;
  SplitConfig split;
  std::string templates_path;    // empty means the built-in pattern list
  std::string provider_command;  // empty means the built-in hash-bag provider
  std::string query_field = "diff";  // diff | diffsbt

  std::vector<std::string> template_patterns() const;
};

/// Parses a "key = value" config file ('#' starts a comment). Unknown keys
/// raise FormatError with the line number. Keys: context_radius, k, seed,
/// min_msg_tokens, max_msg_tokens, max_diff_tokens, frac_train,
/// frac_pretrain_val, frac_pretrain_test, frac_finetune_val,
/// frac_finetune_test, split_slack, templates_path, provider_cmd,
/// query_field.
RunConfig load_config_file(const std::string& path, const RunConfig& base = {});
RunConfig parse_config_text(const std::string& text, const RunConfig& base = {});

/// Loads one regex pattern per line (blank lines and '#' comments skipped).
std::vector<std::string> load_template_file(const std::string& path);

/// FNV-1a hash of the canonical key=value rendering, hex-encoded; the same
/// effective configuration always prints the same hash in the
/// reproducibility header.
std::string config_hash(const RunConfig& cfg);
std::string render_config(const RunConfig& cfg);

}  // namespace sdx
