#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "sdx/errors.hpp"
#include "sdx/parser.hpp"
#include "sdx/tree.hpp"
#include "sdx/tree_io.hpp"

using sdx::FormatError;
using sdx::TreeNode;

TEST_CASE("node_count and structure_equal") {
  TreeNode leaf{"Name", "x", 1, 1, {}};
  TreeNode root{"Module", std::nullopt, 1, 2, {leaf, {"Pass", std::nullopt, 2, 2, {}}}};
  CHECK(sdx::node_count(root) == 3);

  TreeNode other = root;
  other.children[0].start_line = 2;  // spans differ, structure does not
  other.children[0].end_line = 2;
  CHECK(sdx::structure_equal(root, other));
  CHECK(root != other);

  other.children[0].label = "y";
  CHECK(!sdx::structure_equal(root, other));
}

TEST_CASE("check_tree catches invariant violations") {
  TreeNode ok{"Module", std::nullopt, 1, 3, {{"Pass", std::nullopt, 2, 2, {}}}};
  CHECK(!sdx::check_tree(ok));

  TreeNode bad_span = ok;
  bad_span.children[0].end_line = 9;
  CHECK(sdx::check_tree(bad_span).has_value());

  TreeNode bad_order{"Module",
                     std::nullopt,
                     1,
                     3,
                     {{"Pass", std::nullopt, 3, 3, {}}, {"Pass", std::nullopt, 1, 1, {}}}};
  CHECK(sdx::check_tree(bad_order).has_value());

  TreeNode bad_kind{"has space", std::nullopt, 1, 1, {}};
  CHECK(sdx::check_tree(bad_kind).has_value());
}

TEST_CASE("tree document parsing") {
  TreeNode t = sdx::parse_tree_document(
      R"({"kind":"Module","span":[1,1],"children":[{"kind":"Pass","span":[1,1]}]})");
  CHECK(t.kind == "Module");
  CHECK(t.start_line == 1);
  CHECK(t.end_line == 1);
  REQUIRE(t.children.size() == 1);
  CHECK(t.children[0].kind == "Pass");
  CHECK(!t.children[0].label.has_value());

  SUBCASE("field order is irrelevant") {
    TreeNode u = sdx::parse_tree_document(
        R"({"span":[1,1],"children":[{"span":[1,1],"kind":"Pass"}],"kind":"Module"})");
    CHECK(u == t);
  }
  SUBCASE("unknown fields are rejected") {
    CHECK_THROWS_AS(sdx::parse_tree_document(R"({"kind":"Module","span":[1,1],"extra":0})"),
                    FormatError);
  }
  SUBCASE("child span containment is enforced") {
    CHECK_THROWS_AS(sdx::parse_tree_document(
                        R"({"kind":"Module","span":[1,1],"children":[{"kind":"Pass","span":[1,2]}]})"),
                    FormatError);
  }
  SUBCASE("children must be ordered by start line") {
    CHECK_THROWS_AS(
        sdx::parse_tree_document(
            R"({"kind":"Module","span":[1,3],"children":[{"kind":"Pass","span":[2,2]},{"kind":"Pass","span":[1,1]}]})"),
        FormatError);
  }
  SUBCASE("span must be a well-formed pair") {
    CHECK_THROWS_AS(sdx::parse_tree_document(R"({"kind":"Module","span":[2,1]})"), FormatError);
    CHECK_THROWS_AS(sdx::parse_tree_document(R"({"kind":"Module","span":[1]})"), FormatError);
    CHECK_THROWS_AS(sdx::parse_tree_document(R"({"kind":"Module"})"), FormatError);
  }
  SUBCASE("kind must be a single clean token") {
    CHECK_THROWS_AS(sdx::parse_tree_document(R"({"kind":"a b","span":[1,1]})"), FormatError);
    CHECK_THROWS_AS(sdx::parse_tree_document(R"({"kind":"a:b","span":[1,1]})"), FormatError);
    CHECK_THROWS_AS(sdx::parse_tree_document(R"({"kind":"","span":[1,1]})"), FormatError);
  }
  SUBCASE("invalid JSON") { CHECK_THROWS_AS(sdx::parse_tree_document("{nope"), FormatError); }
}

TEST_CASE("serialize/parse round trip over parsed sources") {
  for (const char* source : {
           "x = 1\n",
           "def f(a, b=2):\n    return a + b\n",
           "for i in items:\n    if i > 0:\n        total += i\n    else:\n        log(i)\n",
           "names = ['a', 'b']\nmessage = \"hello world\"\n",
       }) {
    TreeNode t = sdx::parse_source(source);
    CHECK(!sdx::check_tree(t));
    TreeNode back = sdx::parse_tree_document(sdx::serialize_tree(t));
    CHECK(back == t);
  }
}

TEST_CASE("serialization is deterministic") {
  std::string source = "x = 1\ny = x + 2\n";
  CHECK(sdx::serialize_tree(sdx::parse_source(source)) ==
        sdx::serialize_tree(sdx::parse_source(source)));
}

TEST_CASE("round trip over random trees") {
  std::mt19937_64 rng(20240811);
  for (int i = 0; i < 200; ++i) {
    TreeNode t = testutil::random_tree(rng, 40);
    REQUIRE(!sdx::check_tree(t));
    TreeNode back = sdx::parse_tree_document(sdx::serialize_tree(t));
    CHECK(back == t);
  }
}
