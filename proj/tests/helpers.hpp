#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sdx/tree.hpp"

namespace testutil {

// Deterministic RNG helpers shared by the property tests.
inline std::uint64_t draw(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

inline int draw_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(draw(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

// Random tree over synthetic kinds/labels with child spans tiling the
// parent span: every line of an internal node is covered by some child, and
// multi-line leaves only occur for expression kinds. `max_nodes` bounds the
// node count.
sdx::TreeNode random_tree(std::mt19937_64& rng, int max_nodes);

// Random syntactically valid source in the supported subset, paired with a
// mutated variant that changes at least one existing line.
std::pair<std::string, std::string> random_source_pair(std::mt19937_64& rng);

// Random source lines over a tiny alphabet for diff testing.
std::vector<std::string> random_lines(std::mt19937_64& rng, int max_lines, int alphabet);

inline std::string join_lines(const std::vector<std::string>& lines, bool trailing_newline = true) {
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    out += lines[i];
    if (i + 1 < lines.size() || trailing_newline) out += '\n';
  }
  return out;
}

// Scratch directory under the build tree, unique per tag, recreated fresh.
inline std::filesystem::path scratch_dir(const std::string& tag) {
  std::filesystem::path dir = std::filesystem::current_path() / ("scratch_" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace testutil
