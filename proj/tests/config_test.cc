// Copyright 2026 The ccfunnel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ccfunnel/config_text.h"

#include <gtest/gtest.h>

#include <charconv>
#include <cmath>
#include <random>

namespace ccfunnel::config {
namespace {

int ErrorLine(std::string_view text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  ADD_FAILURE() << "accepted: " << text;
  return -1;
}

TEST(Parse, ScalarsListsBlocksAndTags) {
  const Block b = parse(R"(# leading comment
name = demo   # trailing comment
count = 3
words = [a, "b c", -1.5e-3]
section {
  inner = constant { value = 6.58 }, other = 2
  nested {
    deep = [[1, 2], [3, 4]]
  }
}
)");
  ASSERT_EQ(b.entries.size(), 4u);
  EXPECT_EQ(std::get<std::string>(b.find("name")->data), "demo");
  EXPECT_EQ(std::get<double>(b.find("count")->data), 3.0);
  const auto& words = std::get<List>(b.find("words")->data).items;
  ASSERT_EQ(words.size(), 3u);
  EXPECT_EQ(std::get<std::string>(words[1].data), "b c");
  EXPECT_EQ(std::get<double>(words[2].data), -1.5e-3);
  const Value* section = b.find("section");
  ASSERT_TRUE(section && section->is_block());
  EXPECT_EQ(section->line, 5);
  const Block& s = std::get<Block>(section->data);
  const auto& tag = std::get<Tagged>(s.find("inner")->data);
  EXPECT_EQ(tag.tag, "constant");
  EXPECT_EQ(std::get<double>(tag.body.find("value")->data), 6.58);
  EXPECT_EQ(std::get<double>(s.find("other")->data), 2.0);
  EXPECT_EQ(s.find("nested")->line, 7);
  EXPECT_EQ(b.find("missing"), nullptr);
}

TEST(Parse, ErrorsCarryLineNumbers) {
  EXPECT_EQ(ErrorLine("a = 1\nb {\n  c = 2\n"), 4);
  EXPECT_EQ(ErrorLine("a = 1\na = 2\n"), 2);
  EXPECT_EQ(ErrorLine("a = 1\n\nb = 1.2.3\n"), 3);
  EXPECT_EQ(ErrorLine("a = 1 b = 2\n"), 1);
  EXPECT_EQ(ErrorLine("a = [1, 2\n"), 2);
  EXPECT_EQ(ErrorLine("a\n"), 1);
  EXPECT_EQ(ErrorLine("a = \"open\n"), 1);
  EXPECT_EQ(ErrorLine("}\n"), 1);
  EXPECT_EQ(ErrorLine("a = @\n"), 1);
}

TEST(Serialize, CanonicalLayout) {
  Block inner;
  inner.set("k_c", number(0.3));
  inner.set("variant", word("smooth"));
  Block sig;
  sig.set("value", number(-6.58));
  Block root;
  root.set("planner", block(inner));
  root.set("hard", tagged("constant", sig));
  root.set("xs", list({number(1), number(0.1), word("two words")}));
  EXPECT_EQ(serialize(root),
            "planner {\n  k_c = 0.3\n  variant = smooth\n}\n"
            "hard = constant { value = -6.58 }\n"
            "xs = [1, 0.1, \"two words\"]\n");
}

TEST(Serialize, RoundTripIsByteIdentical) {
  const std::string text = R"(name = "x y"
a = 1
b {
  c = sum { terms = [sinusoid { amp = 5.8, omega = 0.24, phase = 1.5, offset = -1.5 }, scaled { coeff = -1, signal = exp_envelope { rho0 = 3.15, rho_inf = 0.2, rate = 0.7 } }] }
  d = [[0.5, 0], [0, 0.5]]
  e {
    f = auto
  }
}
)";
  const std::string once = serialize(parse(text));
  EXPECT_EQ(once, text);
  EXPECT_EQ(serialize(parse(once)), once);
}

TEST(FormatNumber, ShortestRoundTrip) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int k = 0; k < 2000; ++k) {
    const double v = u(rng) * std::pow(10.0, (k % 20) - 10);
    const std::string s = format_number(v);
    double back = 0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    ASSERT_EQ(back, v) << s;
    ASSERT_EQ(std::get<double>(parse_value(s).data), v);
  }
  EXPECT_EQ(format_number(0.001), "0.001");
  EXPECT_EQ(format_number(30), "30");
}

TEST(Override, SetsNestedAndTaggedValues) {
  Block root = parse("planner {\n  k_c = 3\n}\nsig = constant { value = 1 }\n");
  apply_override(root, "planner.k_c=0.3");
  apply_override(root, "sig.value = 2.5");
  apply_override(root, "sim.h=0.002");
  apply_override(root, "planner.variant=nonsmooth");
  EXPECT_EQ(serialize(root),
            "planner {\n  k_c = 0.3\n  variant = nonsmooth\n}\n"
            "sig = constant { value = 2.5 }\nsim {\n  h = 0.002\n}\n");
}

TEST(Override, RejectsMalformedAssignments) {
  Block root = parse("a = 1\n");
  EXPECT_THROW(apply_override(root, "a"), ParseError);
  EXPECT_THROW(apply_override(root, "=3"), ParseError);
  EXPECT_THROW(apply_override(root, "a.b=3"), ParseError);
  EXPECT_THROW(apply_override(root, "x..y=3"), ParseError);
  EXPECT_THROW(apply_override(root, "a=[1,"), ParseError);
}

}  // namespace
}  // namespace ccfunnel::config
