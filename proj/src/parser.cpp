#include "sdx/parser.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <string>
#include <vector>

#include "sdx/errors.hpp"

namespace sdx {
namespace {

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

struct Tok {
  enum Type { kName, kKeyword, kNumber, kString, kOp, kNewline, kIndent, kDedent, kEnd };
  Type type;
  std::string text;
  int line = 1;      // first physical line of the token
  int end_line = 1;  // last physical line (differs for triple-quoted strings)
};

const std::set<std::string>& keywords() {
  static const std::set<std::string> kws = {
      "def",   "class", "if",     "elif", "else",   "for",  "while",
      "return", "import", "from",  "as",   "in",     "is",   "not",
      "and",   "or",    "pass",   "break", "continue", "True", "False",
      "None",  "lambda", "with",  "try",  "except", "finally", "raise",
      "yield", "global", "nonlocal", "del", "assert", "async", "await"};
  return kws;
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::vector<std::string> split_physical_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      if (!cur.empty() && cur.back() == '\r') cur.pop_back();
      lines.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) {
    if (cur.back() == '\r') cur.pop_back();
    lines.push_back(std::move(cur));
  }
  return lines;
}

class Lexer {
 public:
  explicit Lexer(const std::string& text) : lines_(split_physical_lines(text)) {}

  std::vector<Tok> run() {
    while (li_ < lines_.size()) {
      lex_logical_line();
    }
    int last = lines_.empty() ? 1 : static_cast<int>(lines_.size());
    while (indents_.size() > 1) {
      indents_.pop_back();
      push(Tok::kDedent, "", last);
    }
    push(Tok::kEnd, "", last);
    return std::move(out_);
  }

 private:
  void push(Tok::Type type, std::string text, int line, int end_line = 0) {
    out_.push_back(Tok{type, std::move(text), line, end_line ? end_line : line});
  }

  [[noreturn]] void fail(int line, const std::string& msg) { throw SyntaxError(line, msg); }

  // Leading whitespace of the current physical line.
  static std::string indent_of(const std::string& line) {
    std::size_t i = 0;
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    return line.substr(0, i);
  }

  static bool blank_or_comment(const std::string& line) {
    for (char c : line) {
      if (c == '#') return true;
      if (c != ' ' && c != '\t') return false;
    }
    return true;
  }

  void handle_indent(const std::string& ind, int line_no) {
    if (ind == indents_.back()) return;
    if (ind.size() > indents_.back().size() && ind.starts_with(indents_.back())) {
      indents_.push_back(ind);
      push(Tok::kIndent, "", line_no);
      return;
    }
    // A dedent must land exactly on an outer level; anything else is either
    // an unmatched unindent or a tab/space mix.
    while (indents_.size() > 1 && indents_.back() != ind) {
      indents_.pop_back();
      push(Tok::kDedent, "", line_no);
    }
    if (indents_.back() != ind) {
      fail(line_no, "unindent does not match any outer indentation level");
    }
  }

  // Lexes one logical line: physical lines joined by open brackets or a
  // trailing backslash. Emits INDENT/DEDENT for the first physical line and
  // a NEWLINE at the end.
  void lex_logical_line() {
    while (li_ < lines_.size() && blank_or_comment(lines_[li_])) ++li_;
    if (li_ >= lines_.size()) return;

    int first_line = static_cast<int>(li_) + 1;
    handle_indent(indent_of(lines_[li_]), first_line);

    int depth = 0;
    ci_ = indent_of(lines_[li_]).size();
    while (true) {
      const std::string& line = lines_[li_];
      bool continued = false;
      while (ci_ < line.size()) {
        char c = line[ci_];
        if (c == ' ' || c == '\t') {
          ++ci_;
          continue;
        }
        if (c == '#') {
          ci_ = line.size();
          break;
        }
        if (c == '\\' && ci_ + 1 == line.size()) {
          continued = true;
          ++ci_;
          break;
        }
        lex_token(depth);
      }
      int cur_line = static_cast<int>(li_) + 1;
      if (depth == 0 && !continued) {
        push(Tok::kNewline, "", cur_line);
        ++li_;
        return;
      }
      ++li_;
      ci_ = 0;
      if (li_ >= lines_.size()) {
        fail(cur_line, depth > 0 ? "unexpected end of file inside brackets"
                                 : "unexpected end of file after line continuation");
      }
    }
  }

  void lex_token(int& depth) {
    const std::string& line = lines_[li_];
    int line_no = static_cast<int>(li_) + 1;
    char c = line[ci_];

    if (is_ident_start(c)) {
      std::size_t start = ci_;
      while (ci_ < line.size() && is_ident_char(line[ci_])) ++ci_;
      std::string word = line.substr(start, ci_ - start);
      if (ci_ < line.size() && (line[ci_] == '\'' || line[ci_] == '"')) {
        std::string prefix = word;
        std::transform(prefix.begin(), prefix.end(), prefix.begin(),
                       [](unsigned char ch) { return std::tolower(ch); });
        if (prefix.find('f') != std::string::npos) {
          fail(line_no, "f-strings are not supported");
        }
        if (prefix.size() <= 2 && prefix.find_first_not_of("rbu") == std::string::npos) {
          lex_string(word, line_no);
          return;
        }
      }
      if (keywords().count(word)) {
        push(Tok::kKeyword, std::move(word), line_no);
      } else {
        push(Tok::kName, std::move(word), line_no);
      }
      return;
    }

    if (is_digit(c) || (c == '.' && ci_ + 1 < line.size() && is_digit(line[ci_ + 1]))) {
      lex_number(line_no);
      return;
    }

    if (c == '\'' || c == '"') {
      lex_string("", line_no);
      return;
    }

    static const char* three[] = {"**=", "//=", nullptr};
    static const char* two[] = {"**", "//", "==", "!=", "<=", ">=", "+=", "-=",
                                "*=", "/=", "%=", "->", "<<", ">>", nullptr};
    for (int i = 0; three[i]; ++i) {
      if (line.compare(ci_, 3, three[i]) == 0) {
        push(Tok::kOp, three[i], line_no);
        ci_ += 3;
        return;
      }
    }
    for (int i = 0; two[i]; ++i) {
      if (line.compare(ci_, 2, two[i]) == 0) {
        push(Tok::kOp, two[i], line_no);
        ci_ += 2;
        return;
      }
    }
    if (std::string("()[]{},:.;=<>+-*/%@&|^~").find(c) != std::string::npos) {
      if (c == '(' || c == '[' || c == '{') ++depth;
      if (c == ')' || c == ']' || c == '}') {
        if (depth == 0) fail(line_no, std::string("unmatched '") + c + "'");
        --depth;
      }
      push(Tok::kOp, std::string(1, c), line_no);
      ++ci_;
      return;
    }
    fail(line_no, std::string("unexpected character '") + c + "'");
  }

  void lex_number(int line_no) {
    const std::string& line = lines_[li_];
    std::size_t start = ci_;
    if (line[ci_] == '0' && ci_ + 1 < line.size() &&
        std::string("xXoObB").find(line[ci_ + 1]) != std::string::npos) {
      ci_ += 2;
      while (ci_ < line.size() && (std::isxdigit(static_cast<unsigned char>(line[ci_])) || line[ci_] == '_')) ++ci_;
    } else {
      while (ci_ < line.size() && (is_digit(line[ci_]) || line[ci_] == '_')) ++ci_;
      if (ci_ < line.size() && line[ci_] == '.') {
        ++ci_;
        while (ci_ < line.size() && (is_digit(line[ci_]) || line[ci_] == '_')) ++ci_;
      }
      if (ci_ < line.size() && (line[ci_] == 'e' || line[ci_] == 'E')) {
        std::size_t mark = ci_++;
        if (ci_ < line.size() && (line[ci_] == '+' || line[ci_] == '-')) ++ci_;
        if (ci_ < line.size() && is_digit(line[ci_])) {
          while (ci_ < line.size() && is_digit(line[ci_])) ++ci_;
        } else {
          ci_ = mark;  // bare 'e' belongs to a following identifier
        }
      }
    }
    push(Tok::kNumber, line.substr(start, ci_ - start), line_no);
  }

  // `prefix` is the already-consumed string prefix (r, b, ...). Handles
  // single- and triple-quoted strings; the latter may span physical lines.
  // The token text is the raw lexeme including quotes.
  void lex_string(const std::string& prefix, int start_line) {
    const char quote = lines_[li_][ci_];
    std::string text = prefix;
    bool triple = lines_[li_].compare(ci_, 3, std::string(3, quote)) == 0;
    if (triple) {
      text += std::string(3, quote);
      ci_ += 3;
      while (true) {
        const std::string& line = lines_[li_];
        if (ci_ >= line.size()) {
          if (li_ + 1 >= lines_.size()) fail(start_line, "unterminated triple-quoted string");
          text += '\n';
          ++li_;
          ci_ = 0;
          continue;
        }
        if (line[ci_] == '\\' && ci_ + 1 < line.size()) {
          text += line.substr(ci_, 2);
          ci_ += 2;
          continue;
        }
        if (line.compare(ci_, 3, std::string(3, quote)) == 0) {
          text += std::string(3, quote);
          ci_ += 3;
          break;
        }
        text += line[ci_++];
      }
    } else {
      text += quote;
      ++ci_;
      const std::string& line = lines_[li_];
      while (true) {
        if (ci_ >= line.size()) fail(start_line, "unterminated string literal");
        char c = line[ci_];
        if (c == '\\' && ci_ + 1 < line.size()) {
          text += line.substr(ci_, 2);
          ci_ += 2;
          continue;
        }
        text += c;
        ++ci_;
        if (c == quote) break;
      }
    }
    out_.push_back(Tok{Tok::kString, std::move(text), start_line, static_cast<int>(li_) + 1});
  }

  std::vector<std::string> lines_;
  std::size_t li_ = 0;
  std::size_t ci_ = 0;
  std::vector<std::string> indents_ = {""};
  std::vector<Tok> out_;
};

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

TreeNode make_node(std::string kind, int start, int end) {
  TreeNode n;
  n.kind = std::move(kind);
  n.start_line = start;
  n.end_line = end;
  return n;
}

TreeNode make_leaf(std::string kind, std::string label, int start, int end) {
  TreeNode n = make_node(std::move(kind), start, end);
  n.label = std::move(label);
  return n;
}

class Parser {
 public:
  explicit Parser(std::vector<Tok> toks) : toks_(std::move(toks)) {}

  TreeNode parse_module() {
    TreeNode mod = make_node("Module", 1, 1);
    mod.children = parse_stmts();
    if (cur().type != Tok::kEnd) fail("unexpected trailing input");
    if (!mod.children.empty()) mod.end_line = mod.children.back().end_line;
    return mod;
  }

 private:
  const Tok& cur() const { return toks_[pos_]; }
  const Tok& peek() const { return pos_ + 1 < toks_.size() ? toks_[pos_ + 1] : toks_.back(); }
  void advance() {
    if (pos_ + 1 < toks_.size()) ++pos_;
  }

  bool at_op(const char* s) const { return cur().type == Tok::kOp && cur().text == s; }
  bool at_kw(const char* s) const { return cur().type == Tok::kKeyword && cur().text == s; }

  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(cur().line, msg); }

  void expect_op(const char* s, const char* context) {
    if (!at_op(s)) fail(std::string("expected '") + s + "' " + context);
    advance();
  }

  void expect_newline() {
    if (cur().type != Tok::kNewline) fail("expected end of line");
    advance();
  }

  std::vector<TreeNode> parse_stmts() {
    std::vector<TreeNode> stmts;
    while (cur().type != Tok::kDedent && cur().type != Tok::kEnd) {
      if (cur().type == Tok::kIndent) fail("unexpected indent");
      stmts.push_back(parse_stmt());
    }
    return stmts;
  }

  TreeNode parse_stmt() {
    if (cur().type == Tok::kKeyword) {
      const std::string& kw = cur().text;
      if (kw == "if") return parse_if("if");
      if (kw == "while") return parse_while();
      if (kw == "for") return parse_for();
      if (kw == "def") return parse_def();
      if (kw == "class") return parse_class();
      if (kw == "elif" || kw == "else") fail("'" + kw + "' without matching statement");
    }
    TreeNode stmt = parse_simple_stmt();
    expect_newline();
    return stmt;
  }

  // Statements allowed after an inline ':' and on plain lines.
  TreeNode parse_simple_stmt() {
    if (cur().type == Tok::kKeyword) {
      const std::string& kw = cur().text;
      if (kw == "return") return parse_return();
      if (kw == "pass" || kw == "break" || kw == "continue") {
        std::string kind = kw == "pass" ? "Pass" : kw == "break" ? "Break" : "Continue";
        TreeNode n = make_node(kind, cur().line, cur().line);
        advance();
        return n;
      }
      if (kw == "import") return parse_import();
      if (kw == "from") return parse_import_from();
      if (kw != "not" && kw != "True" && kw != "False" && kw != "None") {
        fail("unsupported keyword '" + kw + "'");
      }
    }
    return parse_expr_stmt();
  }

  TreeNode parse_return() {
    int line = cur().line;
    advance();
    TreeNode n = make_node("Return", line, line);
    if (cur().type != Tok::kNewline) {
      TreeNode value = parse_testlist();
      n.end_line = value.end_line;
      n.children.push_back(std::move(value));
    }
    return n;
  }

  static bool assignable(const TreeNode& n) {
    return n.kind == "Name" || n.kind == "Attribute" || n.kind == "Subscript" ||
           n.kind == "Tuple" || n.kind == "List";
  }

  TreeNode parse_expr_stmt() {
    TreeNode first = parse_testlist();
    static const std::set<std::string> augops = {"+=", "-=", "*=", "/=", "//=", "%=", "**="};
    if (cur().type == Tok::kOp && augops.count(cur().text)) {
      if (first.kind == "Tuple" || !assignable(first)) {
        fail("illegal target for augmented assignment");
      }
      TreeNode op = aug_op_node(cur().text, cur().line);
      advance();
      TreeNode value = parse_testlist();
      TreeNode n = make_node("AugAssign", first.start_line, value.end_line);
      n.children.push_back(std::move(first));
      n.children.push_back(std::move(op));
      n.children.push_back(std::move(value));
      return n;
    }
    if (at_op("=")) {
      std::vector<TreeNode> parts = {std::move(first)};
      while (at_op("=")) {
        advance();
        parts.push_back(parse_testlist());
      }
      for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        if (!assignable(parts[i])) fail("cannot assign to this expression");
      }
      TreeNode n = make_node("Assign", parts.front().start_line, parts.back().end_line);
      n.children = std::move(parts);
      return n;
    }
    TreeNode n = make_node("Expr", first.start_line, first.end_line);
    n.children.push_back(std::move(first));
    return n;
  }

  static TreeNode aug_op_node(const std::string& augop, int line) {
    std::string kind;
    if (augop == "+=") kind = "Add";
    else if (augop == "-=") kind = "Sub";
    else if (augop == "*=") kind = "Mult";
    else if (augop == "/=") kind = "Div";
    else if (augop == "//=") kind = "FloorDiv";
    else if (augop == "%=") kind = "Mod";
    else kind = "Pow";
    return make_node(kind, line, line);
  }

  // import a.b as c, d
  TreeNode parse_import() {
    int line = cur().line;
    advance();
    TreeNode n = make_node("Import", line, line);
    while (true) {
      n.children.push_back(parse_alias(/*allow_star=*/false));
      n.end_line = n.children.back().end_line;
      if (!at_op(",")) break;
      advance();
    }
    return n;
  }

  // from .pkg.mod import x as y, z   |   from mod import (a, b)   |   from mod import *
  TreeNode parse_import_from() {
    int line = cur().line;
    advance();
    std::string module;
    int mod_end = line;
    while (at_op(".")) {
      module += '.';
      mod_end = cur().line;
      advance();
    }
    while (cur().type == Tok::kName) {
      module += cur().text;
      mod_end = cur().line;
      advance();
      if (at_op(".")) {
        module += '.';
        advance();
      } else {
        break;
      }
    }
    if (module.empty()) fail("expected module name after 'from'");
    if (!at_kw("import")) fail("expected 'import' in from-import");
    advance();
    TreeNode n = make_leaf("ImportFrom", module, line, mod_end);
    bool parens = at_op("(");
    if (parens) advance();
    while (true) {
      n.children.push_back(parse_alias(/*allow_star=*/true));
      n.end_line = std::max(n.end_line, n.children.back().end_line);
      if (!at_op(",")) break;
      advance();
      if (parens && at_op(")")) break;
    }
    if (parens) {
      if (!at_op(")")) fail("expected ')' in import list");
      n.end_line = std::max(n.end_line, cur().line);
      advance();
    }
    return n;
  }

  TreeNode parse_alias(bool allow_star) {
    int line = cur().line;
    std::string text;
    if (allow_star && at_op("*")) {
      text = "*";
      advance();
      return make_leaf("alias", text, line, line);
    }
    if (cur().type != Tok::kName) fail("expected name in import");
    text = cur().text;
    advance();
    while (at_op(".")) {
      advance();
      if (cur().type != Tok::kName) fail("expected name after '.' in import");
      text += '.' + cur().text;
      advance();
    }
    int end = toks_[pos_ - 1].end_line;
    if (at_kw("as")) {
      advance();
      if (cur().type != Tok::kName) fail("expected name after 'as'");
      text += " as " + cur().text;
      end = cur().line;
      advance();
    }
    return make_leaf("alias", text, line, end);
  }

  std::vector<TreeNode> parse_block() {
    expect_op(":", "before block");
    std::vector<TreeNode> body;
    if (cur().type == Tok::kNewline) {
      advance();
      if (cur().type != Tok::kIndent) fail("expected an indented block");
      advance();
      body = parse_stmts();
      if (cur().type != Tok::kDedent) fail("expected dedent");
      advance();
    } else {
      body.push_back(parse_simple_stmt());
      expect_newline();
    }
    return body;
  }

  TreeNode parse_if(const char* kw) {
    int line = cur().line;
    advance();
    TreeNode test = parse_test();
    std::vector<TreeNode> body = parse_block();
    TreeNode n = make_node("If", line, body.back().end_line);
    n.children.push_back(std::move(test));
    for (auto& s : body) n.children.push_back(std::move(s));
    if (at_kw("elif")) {
      TreeNode nested = parse_if("elif");
      n.end_line = nested.end_line;
      n.children.push_back(std::move(nested));
    } else if (at_kw("else")) {
      advance();
      std::vector<TreeNode> orelse = parse_block();
      n.end_line = orelse.back().end_line;
      for (auto& s : orelse) n.children.push_back(std::move(s));
    }
    (void)kw;
    return n;
  }

  TreeNode parse_while() {
    int line = cur().line;
    advance();
    TreeNode test = parse_test();
    std::vector<TreeNode> body = parse_block();
    TreeNode n = make_node("While", line, body.back().end_line);
    n.children.push_back(std::move(test));
    for (auto& s : body) n.children.push_back(std::move(s));
    if (at_kw("else")) {
      advance();
      std::vector<TreeNode> orelse = parse_block();
      n.end_line = orelse.back().end_line;
      for (auto& s : orelse) n.children.push_back(std::move(s));
    }
    return n;
  }

  // for-loop targets are plain (possibly dotted/subscripted) names or tuples
  // of them; 'in' must stay the loop keyword rather than a comparison.
  TreeNode parse_target_list() {
    std::vector<TreeNode> targets;
    while (true) {
      TreeNode t = parse_atom_trailer();
      if (!assignable(t)) fail("cannot assign to this expression");
      targets.push_back(std::move(t));
      if (!at_op(",")) break;
      advance();
      if (at_kw("in")) break;  // trailing comma
    }
    if (targets.size() == 1) return std::move(targets.front());
    TreeNode n = make_node("Tuple", targets.front().start_line, targets.back().end_line);
    n.children = std::move(targets);
    return n;
  }

  TreeNode parse_for() {
    int line = cur().line;
    advance();
    TreeNode target = parse_target_list();
    if (!at_kw("in")) fail("expected 'in' in for statement");
    advance();
    TreeNode iter = parse_testlist();
    std::vector<TreeNode> body = parse_block();
    TreeNode n = make_node("For", line, body.back().end_line);
    n.children.push_back(std::move(target));
    n.children.push_back(std::move(iter));
    for (auto& s : body) n.children.push_back(std::move(s));
    if (at_kw("else")) {
      advance();
      std::vector<TreeNode> orelse = parse_block();
      n.end_line = orelse.back().end_line;
      for (auto& s : orelse) n.children.push_back(std::move(s));
    }
    return n;
  }

  TreeNode parse_def() {
    int line = cur().line;
    advance();
    if (cur().type != Tok::kName) fail("expected function name after 'def'");
    std::string name = cur().text;
    advance();
    if (!at_op("(")) fail("expected '(' after function name");
    int lparen_line = cur().line;
    advance();
    TreeNode args = make_node("arguments", lparen_line, lparen_line);
    while (!at_op(")")) {
      if (at_op("*") || at_op("**")) fail("starred parameters are not supported");
      if (cur().type != Tok::kName) fail("expected parameter name");
      TreeNode arg = make_leaf("arg", cur().text, cur().line, cur().line);
      advance();
      if (at_op(":")) fail("parameter annotations are not supported");
      if (at_op("=")) {
        advance();
        TreeNode dflt = parse_test();
        arg.end_line = dflt.end_line;
        arg.children.push_back(std::move(dflt));
      }
      args.children.push_back(std::move(arg));
      if (at_op(",")) {
        advance();
      } else if (!at_op(")")) {
        fail("expected ',' or ')' in parameter list");
      }
    }
    args.end_line = cur().line;
    advance();  // ')'
    if (at_op("->")) fail("return annotations are not supported");
    std::vector<TreeNode> body = parse_block();
    TreeNode n = make_leaf("FunctionDef", name, line, body.back().end_line);
    n.children.push_back(std::move(args));
    for (auto& s : body) n.children.push_back(std::move(s));
    return n;
  }

  TreeNode parse_class() {
    int line = cur().line;
    advance();
    if (cur().type != Tok::kName) fail("expected class name after 'class'");
    std::string name = cur().text;
    advance();
    std::vector<TreeNode> bases;
    if (at_op("(")) {
      advance();
      while (!at_op(")")) {
        bases.push_back(parse_test());
        if (at_op(",")) advance();
        else if (!at_op(")")) fail("expected ',' or ')' in base list");
      }
      advance();
    }
    std::vector<TreeNode> body = parse_block();
    TreeNode n = make_leaf("ClassDef", name, line, body.back().end_line);
    for (auto& b : bases) n.children.push_back(std::move(b));
    for (auto& s : body) n.children.push_back(std::move(s));
    return n;
  }

  // ------------------------------------------------------------------ exprs

  bool starts_expression() const {
    switch (cur().type) {
      case Tok::kName:
      case Tok::kNumber:
      case Tok::kString:
        return true;
      case Tok::kKeyword:
        return cur().text == "not" || cur().text == "True" || cur().text == "False" ||
               cur().text == "None";
      case Tok::kOp:
        return cur().text == "(" || cur().text == "[" || cur().text == "{" ||
               cur().text == "-" || cur().text == "+";
      default:
        return false;
    }
  }

  TreeNode parse_testlist() {
    TreeNode first = parse_test();
    if (!at_op(",")) return first;
    std::vector<TreeNode> elts;
    elts.push_back(std::move(first));
    while (at_op(",")) {
      advance();
      if (!starts_expression()) break;
      elts.push_back(parse_test());
    }
    TreeNode n = make_node("Tuple", elts.front().start_line, elts.back().end_line);
    n.children = std::move(elts);
    return n;
  }

  TreeNode parse_test() { return parse_or(); }

  TreeNode parse_or() { return parse_boolop("or", "Or", &Parser::parse_and); }
  TreeNode parse_and() { return parse_boolop("and", "And", &Parser::parse_not); }

  TreeNode parse_boolop(const char* kw, const char* kind, TreeNode (Parser::*next)()) {
    TreeNode first = (this->*next)();
    if (!at_kw(kw)) return first;
    TreeNode n = make_node("BoolOp", first.start_line, first.end_line);
    n.children.push_back(std::move(first));
    while (at_kw(kw)) {
      n.children.push_back(make_node(kind, cur().line, cur().line));
      advance();
      TreeNode value = (this->*next)();
      n.end_line = value.end_line;
      n.children.push_back(std::move(value));
    }
    return n;
  }

  TreeNode parse_not() {
    if (at_kw("not")) {
      int line = cur().line;
      advance();
      TreeNode op = make_node("Not", line, line);
      TreeNode operand = parse_not();
      TreeNode n = make_node("UnaryOp", line, operand.end_line);
      n.children.push_back(std::move(op));
      n.children.push_back(std::move(operand));
      return n;
    }
    return parse_comparison();
  }

  TreeNode parse_comparison() {
    TreeNode left = parse_arith();
    std::vector<TreeNode> parts;
    while (true) {
      std::string kind;
      int op_start = cur().line;
      int op_end = cur().line;
      if (at_op("<")) kind = "Lt";
      else if (at_op(">")) kind = "Gt";
      else if (at_op("<=")) kind = "LtE";
      else if (at_op(">=")) kind = "GtE";
      else if (at_op("==")) kind = "Eq";
      else if (at_op("!=")) kind = "NotEq";
      else if (at_kw("in")) kind = "In";
      else if (at_kw("not") && peek().type == Tok::kKeyword && peek().text == "in") {
        kind = "NotIn";
        advance();
        op_end = cur().line;
      } else if (at_kw("is")) {
        kind = "Is";
        if (peek().type == Tok::kKeyword && peek().text == "not") {
          kind = "IsNot";
          advance();
          op_end = cur().line;
        }
      }
      if (kind.empty()) break;
      advance();
      parts.push_back(make_node(kind, op_start, op_end));
      parts.push_back(parse_arith());
    }
    if (parts.empty()) return left;
    TreeNode n = make_node("Compare", left.start_line, parts.back().end_line);
    n.children.push_back(std::move(left));
    for (auto& p : parts) n.children.push_back(std::move(p));
    return n;
  }

  TreeNode parse_binop_level(const std::vector<std::pair<const char*, const char*>>& ops,
                             TreeNode (Parser::*next)()) {
    TreeNode left = (this->*next)();
    while (true) {
      const char* kind = nullptr;
      for (const auto& [op, k] : ops) {
        if (at_op(op)) {
          kind = k;
          break;
        }
      }
      if (!kind) return left;
      TreeNode op_node = make_node(kind, cur().line, cur().line);
      advance();
      TreeNode right = (this->*next)();
      TreeNode n = make_node("BinOp", left.start_line, right.end_line);
      n.children.push_back(std::move(left));
      n.children.push_back(std::move(op_node));
      n.children.push_back(std::move(right));
      left = std::move(n);
    }
  }

  TreeNode parse_arith() {
    static const std::vector<std::pair<const char*, const char*>> ops = {
        {"+", "Add"}, {"-", "Sub"}};
    return parse_binop_level(ops, &Parser::parse_term);
  }

  TreeNode parse_term() {
    static const std::vector<std::pair<const char*, const char*>> ops = {
        {"*", "Mult"}, {"//", "FloorDiv"}, {"/", "Div"}, {"%", "Mod"}};
    return parse_binop_level(ops, &Parser::parse_factor);
  }

  TreeNode parse_factor() {
    if (at_op("-") || at_op("+")) {
      std::string kind = at_op("-") ? "USub" : "UAdd";
      int line = cur().line;
      advance();
      TreeNode op = make_node(kind, line, line);
      TreeNode operand = parse_factor();
      TreeNode n = make_node("UnaryOp", line, operand.end_line);
      n.children.push_back(std::move(op));
      n.children.push_back(std::move(operand));
      return n;
    }
    return parse_power();
  }

  TreeNode parse_power() {
    TreeNode base = parse_atom_trailer();
    if (!at_op("**")) return base;
    TreeNode op = make_node("Pow", cur().line, cur().line);
    advance();
    TreeNode exp = parse_factor();
    TreeNode n = make_node("BinOp", base.start_line, exp.end_line);
    n.children.push_back(std::move(base));
    n.children.push_back(std::move(op));
    n.children.push_back(std::move(exp));
    return n;
  }

  TreeNode parse_atom_trailer() {
    TreeNode node = parse_atom();
    while (true) {
      if (at_op("(")) {
        advance();
        TreeNode call = make_node("Call", node.start_line, node.end_line);
        call.children.push_back(std::move(node));
        while (!at_op(")")) {
          if (at_op("*") || at_op("**")) fail("starred call arguments are not supported");
          if (cur().type == Tok::kName && peek().type == Tok::kOp && peek().text == "=") {
            TreeNode kwarg = make_leaf("keyword", cur().text, cur().line, cur().line);
            advance();
            advance();  // '='
            TreeNode value = parse_test();
            kwarg.end_line = value.end_line;
            kwarg.children.push_back(std::move(value));
            call.children.push_back(std::move(kwarg));
          } else {
            call.children.push_back(parse_test());
          }
          if (at_op(",")) advance();
          else if (!at_op(")")) fail("expected ',' or ')' in call");
        }
        call.end_line = std::max(call.end_line, cur().line);
        advance();
        node = std::move(call);
      } else if (at_op("[")) {
        advance();
        TreeNode sub = make_node("Subscript", node.start_line, node.end_line);
        sub.children.push_back(std::move(node));
        sub.children.push_back(parse_subscript_index());
        if (!at_op("]")) fail("expected ']'");
        sub.end_line = std::max(sub.children.back().end_line, cur().line);
        advance();
        node = std::move(sub);
      } else if (at_op(".")) {
        advance();
        if (cur().type != Tok::kName) fail("expected attribute name after '.'");
        TreeNode attr = make_leaf("Attribute", cur().text, node.start_line, cur().line);
        advance();
        attr.children.push_back(std::move(node));
        node = std::move(attr);
      } else {
        return node;
      }
    }
  }

  // index expression or slice; slice children are the bounds present in
  // source order.
  TreeNode parse_subscript_index() {
    int line = cur().line;
    std::vector<TreeNode> parts;
    if (!at_op(":")) {
      parts.push_back(parse_testlist());
      if (!at_op(":")) return std::move(parts.front());
    }
    int end = cur().line;
    while (at_op(":")) {
      end = cur().line;
      advance();
      if (starts_expression()) {
        parts.push_back(parse_test());
        end = parts.back().end_line;
      }
    }
    int start = parts.empty() ? line : parts.front().start_line;
    TreeNode n = make_node("Slice", std::min(start, line), std::max(end, line));
    n.children = std::move(parts);
    return n;
  }

  TreeNode parse_atom() {
    switch (cur().type) {
      case Tok::kName: {
        TreeNode n = make_leaf("Name", cur().text, cur().line, cur().line);
        advance();
        return n;
      }
      case Tok::kNumber: {
        TreeNode n = make_leaf("Constant", cur().text, cur().line, cur().line);
        advance();
        return n;
      }
      case Tok::kString: {
        std::string text = cur().text;
        int start = cur().line;
        int end = cur().end_line;
        advance();
        while (cur().type == Tok::kString) {  // implicit concatenation
          text += ' ' + cur().text;
          end = cur().end_line;
          advance();
        }
        return make_leaf("Constant", text, start, end);
      }
      case Tok::kKeyword: {
        const std::string& kw = cur().text;
        if (kw == "True" || kw == "False" || kw == "None") {
          TreeNode n = make_leaf("Constant", kw, cur().line, cur().line);
          advance();
          return n;
        }
        fail("unsupported keyword '" + kw + "' in expression");
      }
      case Tok::kOp:
        if (cur().text == "(") return parse_paren();
        if (cur().text == "[") return parse_list();
        if (cur().text == "{") return parse_dict_or_set();
        fail("unexpected token '" + cur().text + "'");
      default:
        fail("unexpected end of statement");
    }
  }

  TreeNode parse_paren() {
    int lline = cur().line;
    advance();
    if (at_op(")")) {
      TreeNode n = make_node("Tuple", lline, cur().line);
      advance();
      return n;
    }
    TreeNode inner = parse_testlist();
    if (!at_op(")")) fail("expected ')'");
    inner.start_line = std::min(inner.start_line, lline);
    inner.end_line = std::max(inner.end_line, cur().line);
    advance();
    return inner;
  }

  TreeNode parse_list() {
    int lline = cur().line;
    advance();
    TreeNode n = make_node("List", lline, lline);
    while (!at_op("]")) {
      n.children.push_back(parse_test());
      if (at_op(",")) advance();
      else if (!at_op("]")) fail("expected ',' or ']'");
    }
    n.end_line = cur().line;
    advance();
    return n;
  }

  TreeNode parse_dict_or_set() {
    int lline = cur().line;
    advance();
    if (at_op("}")) {
      TreeNode n = make_node("Dict", lline, cur().line);
      advance();
      return n;
    }
    TreeNode first = parse_test();
    if (at_op(":")) {
      TreeNode n = make_node("Dict", lline, lline);
      n.children.push_back(std::move(first));
      advance();
      n.children.push_back(parse_test());
      while (at_op(",")) {
        advance();
        if (at_op("}")) break;
        n.children.push_back(parse_test());
        expect_op(":", "in dict literal");
        n.children.push_back(parse_test());
      }
      if (!at_op("}")) fail("expected '}'");
      n.end_line = cur().line;
      advance();
      return n;
    }
    TreeNode n = make_node("Set", lline, lline);
    n.children.push_back(std::move(first));
    while (at_op(",")) {
      advance();
      if (at_op("}")) break;
      n.children.push_back(parse_test());
    }
    if (!at_op("}")) fail("expected '}'");
    n.end_line = cur().line;
    advance();
    return n;
  }

  std::vector<Tok> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

TreeNode parse_source(const std::string& text) {
  Lexer lexer(text);
  Parser parser(lexer.run());
  return parser.parse_module();
}

int count_lines(const std::string& text) {
  return static_cast<int>(split_physical_lines(text).size());
}

}  // namespace sdx
