#include "sdx/config.hpp"

#include <fstream>
#include <sstream>

#include "sdx/errors.hpp"

namespace sdx {

std::vector<std::string> RunConfig::template_patterns() const {
  if (templates_path.empty()) return default_template_patterns();
  return load_template_file(templates_path);
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& value, int line_no) {
  try {
    std::size_t used = 0;
    double out = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return out;
  } catch (const std::exception&) {
    throw FormatError(line_no, "expected a number, got '" + value + "'");
  }
}

long parse_long(const std::string& value, int line_no) {
  try {
    std::size_t used = 0;
    long out = std::stol(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return out;
  } catch (const std::exception&) {
    throw FormatError(line_no, "expected an integer, got '" + value + "'");
  }
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const RunConfig& base) {
  RunConfig cfg = base;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw FormatError(line_no, "expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));

    if (key == "context_radius") cfg.context_radius = static_cast<int>(parse_long(value, line_no));
    else if (key == "k") cfg.k = static_cast<int>(parse_long(value, line_no));
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_long(value, line_no));
    else if (key == "min_msg_tokens") cfg.filters.min_msg_tokens = static_cast<int>(parse_long(value, line_no));
    else if (key == "max_msg_tokens") cfg.filters.max_msg_tokens = static_cast<int>(parse_long(value, line_no));
    else if (key == "max_diff_tokens") cfg.filters.max_diff_tokens = static_cast<int>(parse_long(value, line_no));
    else if (key == "frac_train") cfg.split.train = parse_double(value, line_no);
    else if (key == "frac_pretrain_val") cfg.split.pretrain_val = parse_double(value, line_no);
    else if (key == "frac_pretrain_test") cfg.split.pretrain_test = parse_double(value, line_no);
    else if (key == "frac_finetune_val") cfg.split.finetune_val = parse_double(value, line_no);
    else if (key == "frac_finetune_test") cfg.split.finetune_test = parse_double(value, line_no);
    else if (key == "split_slack") cfg.split.slack = parse_double(value, line_no);
    else if (key == "templates_path") cfg.templates_path = value;
    else if (key == "provider_cmd") cfg.provider_command = value;
    else if (key == "query_field") cfg.query_field = value;
    else throw FormatError(line_no, "unknown config key '" + key + "'");
  }
  if (cfg.context_radius < 0) throw FormatError("context_radius must be >= 0");
  if (cfg.k < 1) throw FormatError("k must be >= 1");
  if (cfg.filters.min_msg_tokens < 1 || cfg.filters.max_msg_tokens < cfg.filters.min_msg_tokens ||
      cfg.filters.max_diff_tokens < 1) {
    throw FormatError("filter thresholds must be positive and ordered");
  }
  if (cfg.query_field != "diff" && cfg.query_field != "diffsbt") {
    throw FormatError("query_field must be 'diff' or 'diffsbt'");
  }
  cfg.filters.context_radius = cfg.context_radius;
  return cfg;
}

RunConfig load_config_file(const std::string& path, const RunConfig& base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), base);
}

std::vector<std::string> load_template_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open template file " + path);
  std::vector<std::string> patterns;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    patterns.push_back(line);
  }
  return patterns;
}

std::string render_config(const RunConfig& cfg) {
  std::ostringstream out;
  out << "context_radius = " << cfg.context_radius << "\n";
  out << "k = " << cfg.k << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "min_msg_tokens = " << cfg.filters.min_msg_tokens << "\n";
  out << "max_msg_tokens = " << cfg.filters.max_msg_tokens << "\n";
  out << "max_diff_tokens = " << cfg.filters.max_diff_tokens << "\n";
  out << "frac_train = " << cfg.split.train << "\n";
  out << "frac_pretrain_val = " << cfg.split.pretrain_val << "\n";
  out << "frac_pretrain_test = " << cfg.split.pretrain_test << "\n";
  out << "frac_finetune_val = " << cfg.split.finetune_val << "\n";
  out << "frac_finetune_test = " << cfg.split.finetune_test << "\n";
  out << "split_slack = " << cfg.split.slack << "\n";
  out << "templates_path = " << cfg.templates_path << "\n";
  out << "provider_cmd = " << cfg.provider_command << "\n";
  out << "query_field = " << cfg.query_field << "\n";
  return out.str();
}

std::string config_hash(const RunConfig& cfg) {
  std::string text = render_config(cfg);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace sdx
