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

// A small nested key-value text format.
//
//   # comment
//   name = paper_kc3
//   planner {
//     k_c = 3
//     variant = smooth
//   }
//   hard_upper = constant { value = 6.58 }
//   rho_inf = [0.1, 0.1]
//
// Entries are separated by newlines or commas. Values are numbers, words
// (bare identifiers or double-quoted strings), lists in brackets, nested
// blocks (`key { ... }`) and tagged forms (`key = tag { ... }`). Keys are
// unique within a block and keep their order.

#ifndef CCFUNNEL_CONFIG_TEXT_H_
#define CCFUNNEL_CONFIG_TEXT_H_

#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ccfunnel::config {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

struct Value;
struct Entry;

struct List {
  std::vector<Value> items;
};

struct Block {
  std::vector<Entry> entries;
  int line = 0;

  const Value* find(std::string_view key) const;
  Value* find(std::string_view key);
  // Replaces an existing entry or appends a new one.
  void set(std::string key, Value value);
};

struct Tagged {
  std::string tag;
  Block body;
};

struct Value {
  std::variant<double, std::string, List, Block, Tagged> data;
  int line = 0;

  bool is_number() const { return std::holds_alternative<double>(data); }
  bool is_word() const { return std::holds_alternative<std::string>(data); }
  bool is_list() const { return std::holds_alternative<List>(data); }
  bool is_block() const { return std::holds_alternative<Block>(data); }
  bool is_tagged() const { return std::holds_alternative<Tagged>(data); }
};

struct Entry {
  std::string key;
  Value value;
};

Value number(double v);
Value word(std::string w);
Value list(std::vector<Value> items);
Value block(Block b);
Value tagged(std::string tag, Block body);

// Parses a whole document. Throws ParseError with a 1-based line number.
Block parse(std::string_view text);
// Parses a single value (for command-line overrides).
Value parse_value(std::string_view text);

std::string serialize(const Block& root);
std::string serialize_value(const Value& value);
// Shortest decimal form that reads back to the same double.
std::string format_number(double v);

// Applies `dotted.path=value`, descending through blocks and tagged bodies
// and creating missing blocks. Throws ParseError(0, ...) for malformed
// assignments or paths that cross a non-block value.
void apply_override(Block& root, std::string_view assignment);

}  // namespace ccfunnel::config

#endif  // CCFUNNEL_CONFIG_TEXT_H_
