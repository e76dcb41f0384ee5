#include "helpers.hpp"

namespace testutil {
namespace {

const std::vector<std::string>& label_pool() {
  static const std::vector<std::string> labels = {
      "x",       "count",   "hello world", "a'b",       "tab\tchar",
      "(paren)", "col:on",  "back\\slash", "multi\nline", "1",
  };
  return labels;
}

const std::vector<std::string>& plain_kinds() {
  static const std::vector<std::string> kinds = {"Assign", "If", "For", "While",
                                                 "Return", "Module", "FunctionDef", "Tuple"};
  return kinds;
}

const std::vector<std::string>& expr_kinds() {
  static const std::vector<std::string> kinds = {"Expr", "Call", "Attribute", "BinOp"};
  return kinds;
}

const std::vector<std::string>& leaf_kinds() {
  static const std::vector<std::string> kinds = {"Name", "Constant", "Pass", "arg"};
  return kinds;
}

sdx::TreeNode gen_node(std::mt19937_64& rng, int start, int end, int budget, int& used) {
  sdx::TreeNode node;
  node.start_line = start;
  node.end_line = end;
  used = 1;

  bool must_be_leaf = budget <= 1;
  bool single_line = start == end;
  if (single_line && (must_be_leaf || draw(rng, 3) == 0)) {
    node.kind = leaf_kinds()[draw(rng, leaf_kinds().size())];
    if (node.kind == "Name" || node.kind == "Constant" || node.kind == "arg") {
      node.label = label_pool()[draw(rng, label_pool().size())];
    }
    return node;
  }
  if (!single_line && must_be_leaf) {
    // Multi-line leaves are only generated for expression kinds, mirroring
    // how multi-line tokens behave in parsed code.
    node.kind = expr_kinds()[draw(rng, expr_kinds().size())];
    return node;
  }

  bool expression = draw(rng, 4) == 0;
  node.kind = expression ? expr_kinds()[draw(rng, expr_kinds().size())]
                         : plain_kinds()[draw(rng, plain_kinds().size())];
  if (node.kind == "FunctionDef") node.label = "f" + std::to_string(draw(rng, 100));

  // Children tile [start, end]: pick cut points, recurse per segment.
  int lines = end - start + 1;
  int max_children = std::min(lines, std::min(budget - 1, 4));
  int n_children = 1 + draw_int(rng, 0, max_children - 1);
  std::vector<int> cuts;  // segment lengths summing to `lines`
  int remaining_lines = lines;
  for (int i = 0; i < n_children; ++i) {
    int segments_left = n_children - i;
    int max_len = remaining_lines - (segments_left - 1);
    int len = i + 1 == n_children ? remaining_lines : draw_int(rng, 1, max_len);
    cuts.push_back(len);
    remaining_lines -= len;
  }

  int child_budget = (budget - 1) / n_children;
  int child_start = start;
  for (int len : cuts) {
    int child_used = 0;
    node.children.push_back(
        gen_node(rng, child_start, child_start + len - 1, std::max(1, child_budget), child_used));
    used += child_used;
    child_start += len;
  }
  return node;
}

}  // namespace

sdx::TreeNode random_tree(std::mt19937_64& rng, int max_nodes) {
  int span = draw_int(rng, 1, std::max(1, max_nodes / 2));
  int used = 0;
  return gen_node(rng, 1, span, max_nodes, used);
}

std::vector<std::string> random_lines(std::mt19937_64& rng, int max_lines, int alphabet) {
  int n = draw_int(rng, 0, max_lines);
  std::vector<std::string> lines;
  lines.reserve(n);
  for (int i = 0; i < n; ++i) {
    lines.push_back("l" + std::to_string(draw(rng, static_cast<std::uint64_t>(alphabet))));
  }
  return lines;
}

namespace {

// One program = a list of (indent, statement) rows, built from constructs
// the subset parser accepts. Mutations only touch simple statement rows, so
// both versions stay parseable.
struct ProgramRow {
  int indent = 0;
  std::string text;
  bool simple = false;  // safe to rewrite/delete/insert after
};

std::string simple_stmt(std::mt19937_64& rng) {
  switch (draw(rng, 7)) {
    case 0: return "x = " + std::to_string(draw(rng, 90));
    case 1: return "y = x + " + std::to_string(draw(rng, 9));
    case 2: return "items.append(" + std::to_string(draw(rng, 50)) + ")";
    case 3: return "total = total + y * " + std::to_string(draw(rng, 9));
    case 4: return "name = sanitize(name)";
    case 5: return "flags[" + std::to_string(draw(rng, 5)) + "] = True";
    default: return "log(x, y)";
  }
}

std::vector<ProgramRow> random_program(std::mt19937_64& rng) {
  std::vector<ProgramRow> rows;
  int units = draw_int(rng, 2, 5);
  for (int u = 0; u < units; ++u) {
    switch (draw(rng, 4)) {
      case 0:
        rows.push_back({0, simple_stmt(rng), true});
        break;
      case 1: {
        rows.push_back({0, "def f" + std::to_string(u) + "(a, b):", false});
        int body = draw_int(rng, 1, 3);
        for (int i = 0; i < body; ++i) rows.push_back({1, simple_stmt(rng), true});
        rows.push_back({1, "return a", false});
        break;
      }
      case 2: {
        rows.push_back({0, "if x > " + std::to_string(draw(rng, 20)) + ":", false});
        int body = draw_int(rng, 1, 2);
        for (int i = 0; i < body; ++i) rows.push_back({1, simple_stmt(rng), true});
        break;
      }
      default: {
        rows.push_back({0, "for item in items:", false});
        int body = draw_int(rng, 1, 3);
        for (int i = 0; i < body; ++i) rows.push_back({1, simple_stmt(rng), true});
        break;
      }
    }
  }
  return rows;
}

std::string render_program(const std::vector<ProgramRow>& rows) {
  std::string out;
  for (const auto& row : rows) {
    for (int i = 0; i < row.indent; ++i) out += "    ";
    out += row.text;
    out += '\n';
  }
  return out;
}

}  // namespace

std::pair<std::string, std::string> random_source_pair(std::mt19937_64& rng) {
  std::vector<ProgramRow> rows = random_program(rng);
  std::vector<ProgramRow> mutated = rows;

  std::vector<std::size_t> simple_rows;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].simple) simple_rows.push_back(i);
  }
  // Always rewrite one existing simple line so the buggy side is never
  // empty; optionally delete or insert around another.
  std::size_t target = simple_rows[draw(rng, simple_rows.size())];
  std::string replacement;
  do {
    replacement = simple_stmt(rng);
  } while (replacement == mutated[target].text);
  mutated[target].text = replacement;

  if (simple_rows.size() > 1 && draw(rng, 2) == 0) {
    std::size_t extra = simple_rows[draw(rng, simple_rows.size())];
    if (extra != target) {
      if (draw(rng, 2) == 0) {
        mutated.erase(mutated.begin() + static_cast<std::ptrdiff_t>(extra));
      } else {
        ProgramRow inserted{mutated[extra].indent, simple_stmt(rng), true};
        mutated.insert(mutated.begin() + static_cast<std::ptrdiff_t>(extra) + 1, inserted);
      }
    }
  }
  return {render_program(rows), render_program(mutated)};
}

}  // namespace testutil
