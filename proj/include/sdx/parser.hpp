#pragma once

#include <string>

#include "sdx/tree.hpp"

namespace sdx {

/// Parses source text of the supported Python-like subset into a
/// Module-rooted, line-annotated tree. Deterministic for identical input.
///
/// Supported statements: function/class definitions, if/elif/else, for,
/// while (both with optional else), return, assignment, augmented
/// assignment, import/from-import, pass/break/continue and expression
/// statements. Supported expressions: calls, attribute access, subscripts
/// and slices, names, literals (including tuple/list/dict/set displays),
/// binary/boolean/unary/comparison operators. Implicit line joining inside
/// brackets, backslash continuation and triple-quoted strings are handled;
/// comments and blank lines produce no nodes.
///
/// Anything outside the subset (decorators, comprehensions, lambdas,
/// f-strings, try/with/raise, ...) raises SyntaxError with the offending
/// line so callers can discard the program.
TreeNode parse_source(const std::string& text);

/// Number of physical lines in `text` ("a\nb" and "a\nb\n" both have two).
int count_lines(const std::string& text);

}  // namespace sdx
