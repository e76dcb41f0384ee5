#include "sdx/diff.hpp"

#include <cstdint>
#include <regex>
#include <string>

#include "sdx/errors.hpp"

namespace sdx {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) lines.push_back(std::move(cur));
  return lines;
}

namespace {

enum class Edit : std::uint8_t { kMatch, kDel, kAdd };

// Edit script between two line vectors, LCS-minimal, matching old lines as
// early as possible on ties. Common prefix/suffix are trimmed before the
// quadratic table is built.
std::vector<Edit> edit_script(const std::vector<std::string>& old_lines,
                              const std::vector<std::string>& new_lines) {
  std::size_t n = old_lines.size(), m = new_lines.size();
  std::size_t prefix = 0;
  while (prefix < n && prefix < m && old_lines[prefix] == new_lines[prefix]) ++prefix;
  std::size_t suffix = 0;
  while (suffix < n - prefix && suffix < m - prefix &&
         old_lines[n - 1 - suffix] == new_lines[m - 1 - suffix]) {
    ++suffix;
  }
  std::size_t nn = n - prefix - suffix, mm = m - prefix - suffix;

  // lcs[i][j] = LCS length of old[prefix+i..] vs new[prefix+j..] inside the
  // trimmed window.
  std::vector<std::uint32_t> lcs((nn + 1) * (mm + 1), 0);
  auto at = [&](std::size_t i, std::size_t j) -> std::uint32_t& {
    return lcs[i * (mm + 1) + j];
  };
  for (std::size_t i = nn; i-- > 0;) {
    for (std::size_t j = mm; j-- > 0;) {
      if (old_lines[prefix + i] == new_lines[prefix + j]) {
        at(i, j) = at(i + 1, j + 1) + 1;
      } else {
        at(i, j) = std::max(at(i + 1, j), at(i, j + 1));
      }
    }
  }

  std::vector<Edit> script;
  script.reserve(n + m);
  for (std::size_t k = 0; k < prefix; ++k) script.push_back(Edit::kMatch);
  std::size_t i = 0, j = 0;
  while (i < nn || j < mm) {
    if (i < nn && j < mm && old_lines[prefix + i] == new_lines[prefix + j] &&
        at(i, j) == at(i + 1, j + 1) + 1) {
      script.push_back(Edit::kMatch);
      ++i;
      ++j;
    } else if (j < mm && at(i, j) == at(i, j + 1)) {
      script.push_back(Edit::kAdd);
      ++j;
    } else {
      script.push_back(Edit::kDel);
      ++i;
    }
  }
  for (std::size_t k = 0; k < suffix; ++k) script.push_back(Edit::kMatch);
  return script;
}

}  // namespace

DiffResult compute_diff(const std::string& old_source, const std::string& new_source) {
  std::vector<std::string> old_lines = split_lines(old_source);
  std::vector<std::string> new_lines = split_lines(new_source);
  std::vector<Edit> script = edit_script(old_lines, new_lines);

  DiffResult result;
  int old_line = 0, new_line = 0;
  bool in_hunk = false;
  for (Edit e : script) {
    switch (e) {
      case Edit::kMatch:
        ++old_line;
        ++new_line;
        in_hunk = false;
        break;
      case Edit::kDel:
        if (!in_hunk) ++result.hunk_count;
        in_hunk = true;
        result.removed.insert(++old_line);
        break;
      case Edit::kAdd:
        if (!in_hunk) ++result.hunk_count;
        in_hunk = true;
        result.added.insert(++new_line);
        break;
    }
  }
  return result;
}

std::string render_unified_diff(const std::string& old_source, const std::string& new_source) {
  std::vector<std::string> old_lines = split_lines(old_source);
  std::vector<std::string> new_lines = split_lines(new_source);
  std::vector<Edit> script = edit_script(old_lines, new_lines);

  std::string out;
  std::size_t oi = 0, ni = 0, k = 0;
  while (k < script.size()) {
    if (script[k] == Edit::kMatch) {
      ++oi;
      ++ni;
      ++k;
      continue;
    }
    std::size_t old_start = oi, new_start = ni;
    std::string dels, adds;
    int del_count = 0, add_count = 0;
    while (k < script.size() && script[k] != Edit::kMatch) {
      if (script[k] == Edit::kDel) {
        dels += "-" + old_lines[oi++] + "\n";
        ++del_count;
      } else {
        adds += "+" + new_lines[ni++] + "\n";
        ++add_count;
      }
      ++k;
    }
    // Zero-length ranges name the line before the region, per the format.
    std::size_t a = del_count ? old_start + 1 : old_start;
    std::size_t c = add_count ? new_start + 1 : new_start;
    out += "@@ -" + std::to_string(a) + "," + std::to_string(del_count) + " +" +
           std::to_string(c) + "," + std::to_string(add_count) + " @@\n";
    out += dels;
    out += adds;
  }
  return out;
}

DiffResult parse_unified_diff(const std::string& text) {
  static const std::regex hunk_re(R"(^@@ -(\d+)(?:,(\d+))? \+(\d+)(?:,(\d+))? @@)");

  DiffResult result;
  int line_no = 0;
  long remaining_old = 0, remaining_new = 0;
  long old_line = 0, new_line = 0;
  bool seen_hunk = false;

  for (const std::string& line : split_lines(text)) {
    ++line_no;
    std::smatch m;
    if (std::regex_search(line, m, hunk_re)) {
      if (remaining_old > 0 || remaining_new > 0) {
        throw FormatError(line_no, "hunk shorter than its header counts");
      }
      long a = std::stol(m[1]);
      long b = m[2].matched ? std::stol(m[2]) : 1;
      long c = std::stol(m[3]);
      long d = m[4].matched ? std::stol(m[4]) : 1;
      if (a < 0 || b < 0 || c < 0 || d < 0 || (b > 0 && a < 1) || (d > 0 && c < 1)) {
        throw FormatError(line_no, "bad hunk header ranges");
      }
      old_line = a;
      new_line = c;
      remaining_old = b;
      remaining_new = d;
      ++result.hunk_count;
      seen_hunk = true;
      continue;
    }
    if (line.starts_with("\\")) continue;  // "\ No newline at end of file"
    bool in_hunk = remaining_old > 0 || remaining_new > 0;
    if (in_hunk) {
      if (line.starts_with("-")) {
        if (remaining_old <= 0) throw FormatError(line_no, "removed line exceeds hunk count");
        result.removed.insert(static_cast<int>(old_line++));
        --remaining_old;
      } else if (line.starts_with("+")) {
        if (remaining_new <= 0) throw FormatError(line_no, "added line exceeds hunk count");
        result.added.insert(static_cast<int>(new_line++));
        --remaining_new;
      } else if (line.starts_with(" ") || line.empty()) {
        if (remaining_old <= 0 || remaining_new <= 0) {
          throw FormatError(line_no, "context line exceeds hunk count");
        }
        ++old_line;
        ++new_line;
        --remaining_old;
        --remaining_new;
      } else {
        throw FormatError(line_no, "unexpected line inside hunk: '" + line + "'");
      }
      continue;
    }
    if (line.starts_with("--- ") || line.starts_with("+++ ")) {
      if (seen_hunk) throw FormatError(line_no, "multiple files in unified diff");
      continue;
    }
    if (line.starts_with("diff ") || line.starts_with("index ") ||
        line.starts_with("new file") || line.starts_with("deleted file") ||
        line.starts_with("old mode") || line.starts_with("new mode") ||
        line.starts_with("similarity") || line.starts_with("rename ") ||
        line.starts_with("Binary files")) {
      if (seen_hunk) throw FormatError(line_no, "multiple files in unified diff");
      continue;
    }
    if (line.starts_with("@@")) throw FormatError(line_no, "malformed hunk header");
    throw FormatError(line_no, "unexpected line outside hunk: '" + line + "'");
  }
  if (remaining_old > 0 || remaining_new > 0) {
    throw FormatError(line_no, "truncated final hunk");
  }
  return result;
}

}  // namespace sdx
