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

#include <array>
#include <cctype>
#include <charconv>
#include <utility>

namespace ccfunnel::config {
namespace {

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

bool is_number_start(char c) {
  return std::isdigit(static_cast<unsigned char>(c)) || c == '-' ||
         c == '+' || c == '.';
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Block document() {
    Block b = body(/*closing=*/'\0');
    skip_space(true);
    if (!at_end()) fail("unexpected '" + std::string(1, peek()) + "'");
    return b;
  }

  Value single_value() {
    skip_space(true);
    Value v = value();
    skip_space(true);
    if (!at_end()) fail("trailing characters after value");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(line_, msg);
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  char get() {
    const char c = text_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }

  // Skips blanks and comments; newlines too when `newlines` is set.
  void skip_space(bool newlines) {
    while (!at_end()) {
      const char c = peek();
      if (c == '#') {
        while (!at_end() && peek() != '\n') get();
      } else if (c == ' ' || c == '\t' || c == '\r' ||
                 (newlines && c == '\n')) {
        get();
      } else {
        break;
      }
    }
  }

  void expect(char c) {
    skip_space(false);
    if (peek() != c) {
      fail(std::string("expected '") + c + "'" +
           (at_end() ? " before end of input"
                     : std::string(", found '") + peek() + "'"));
    }
    get();
  }

  std::string identifier() {
    if (!is_ident_start(peek())) fail("expected an identifier");
    const std::size_t start = pos_;
    while (!at_end() && is_ident_char(peek())) get();
    return std::string(text_.substr(start, pos_ - start));
  }

  Block body(char closing) {
    Block b;
    b.line = line_;
    while (true) {
      skip_space(true);
      while (peek() == ',') {
        get();
        skip_space(true);
      }
      if (at_end()) {
        if (closing != '\0') fail("missing closing '}'");
        return b;
      }
      if (peek() == closing) return b;
      const int entry_line = line_;
      std::string key = identifier();
      if (b.find(key)) fail("duplicate key '" + key + "'");
      skip_space(false);
      Value v;
      if (peek() == '{') {
        get();
        Block inner = body('}');
        inner.line = entry_line;
        expect('}');
        v.data = std::move(inner);
      } else if (peek() == '=') {
        get();
        skip_space(false);
        v = value();
      } else {
        fail("expected '=' or '{' after '" + key + "'");
      }
      v.line = entry_line;
      b.entries.push_back({std::move(key), std::move(v)});
      skip_space(false);
      if (!at_end() && peek() != '\n' && peek() != ',' && peek() != closing) {
        fail("expected a newline or ',' after entry '" +
             b.entries.back().key + "'");
      }
    }
  }

  Value value() {
    Value v;
    v.line = line_;
    const char c = peek();
    if (c == '[') {
      get();
      List l;
      skip_space(true);
      if (peek() != ']') {
        while (true) {
          skip_space(true);
          l.items.push_back(value());
          skip_space(true);
          if (peek() == ',') {
            get();
            continue;
          }
          if (peek() == ']') break;
          fail("expected ',' or ']' in list");
        }
      }
      get();
      v.data = std::move(l);
    } else if (c == '"') {
      get();
      std::string s;
      while (true) {
        if (at_end() || peek() == '\n') fail("unterminated string");
        char ch = get();
        if (ch == '"') break;
        if (ch == '\\') {
          if (at_end()) fail("unterminated string");
          ch = get();
        }
        s.push_back(ch);
      }
      v.data = std::move(s);
    } else if (is_ident_start(c)) {
      std::string w = identifier();
      skip_space(false);
      if (peek() == '{') {
        get();
        Tagged t{std::move(w), body('}')};
        t.body.line = v.line;
        expect('}');
        v.data = std::move(t);
      } else {
        v.data = std::move(w);
      }
    } else if (is_number_start(c)) {
      const std::size_t start = pos_;
      while (!at_end() &&
             (is_number_start(peek()) || peek() == 'e' || peek() == 'E')) {
        get();
      }
      std::string_view tok = text_.substr(start, pos_ - start);
      if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
      double d = 0.0;
      const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), d);
      if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
        fail("malformed number '" + std::string(tok) + "'");
      }
      v.data = d;
    } else {
      fail(at_end() ? "expected a value before end of input"
                    : "unexpected '" + std::string(1, c) + "'");
    }
    return v;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

bool needs_quotes(const std::string& w) {
  if (w.empty() || !is_ident_start(w.front())) return true;
  for (char c : w) {
    if (!is_ident_char(c)) return true;
  }
  return false;
}

void write_value(std::string& out, const Value& v, int indent);

void write_block_lines(std::string& out, const Block& b, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  for (const auto& e : b.entries) {
    out += pad;
    out += e.key;
    if (e.value.is_block()) {
      out += " {\n";
      write_block_lines(out, std::get<Block>(e.value.data), indent + 2);
      out += pad;
      out += "}\n";
    } else {
      out += " = ";
      write_value(out, e.value, indent);
      out += '\n';
    }
  }
}

void write_inline_body(std::string& out, const Block& b, int indent) {
  if (b.entries.empty()) {
    out += "{}";
    return;
  }
  out += "{ ";
  for (std::size_t k = 0; k < b.entries.size(); ++k) {
    if (k) out += ", ";
    const auto& e = b.entries[k];
    out += e.key;
    if (e.value.is_block()) {
      out += ' ';
      write_inline_body(out, std::get<Block>(e.value.data), indent);
    } else {
      out += " = ";
      write_value(out, e.value, indent);
    }
  }
  out += " }";
}

void write_value(std::string& out, const Value& v, int indent) {
  if (const auto* d = std::get_if<double>(&v.data)) {
    out += format_number(*d);
  } else if (const auto* w = std::get_if<std::string>(&v.data)) {
    if (!needs_quotes(*w)) {
      out += *w;
    } else {
      out += '"';
      for (char c : *w) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
      }
      out += '"';
    }
  } else if (const auto* l = std::get_if<List>(&v.data)) {
    out += '[';
    for (std::size_t k = 0; k < l->items.size(); ++k) {
      if (k) out += ", ";
      write_value(out, l->items[k], indent);
    }
    out += ']';
  } else if (const auto* t = std::get_if<Tagged>(&v.data)) {
    out += t->tag;
    out += ' ';
    write_inline_body(out, t->body, indent);
  } else {
    write_inline_body(out, std::get<Block>(v.data), indent);
  }
}

}  // namespace

ParseError::ParseError(int line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " +
                                        message
                                  : message),
      line_(line) {}

const Value* Block::find(std::string_view key) const {
  for (const auto& e : entries) {
    if (e.key == key) return &e.value;
  }
  return nullptr;
}

Value* Block::find(std::string_view key) {
  for (auto& e : entries) {
    if (e.key == key) return &e.value;
  }
  return nullptr;
}

void Block::set(std::string key, Value value) {
  if (Value* existing = find(key)) {
    *existing = std::move(value);
    return;
  }
  entries.push_back({std::move(key), std::move(value)});
}

Value number(double v) { return Value{v, 0}; }
Value word(std::string w) { return Value{std::move(w), 0}; }
Value list(std::vector<Value> items) { return Value{List{std::move(items)}, 0}; }
Value block(Block b) { return Value{std::move(b), 0}; }
Value tagged(std::string tag, Block body) {
  return Value{Tagged{std::move(tag), std::move(body)}, 0};
}

Block parse(std::string_view text) { return Parser(text).document(); }

Value parse_value(std::string_view text) {
  return Parser(text).single_value();
}

std::string serialize(const Block& root) {
  std::string out;
  write_block_lines(out, root, 0);
  return out;
}

std::string serialize_value(const Value& value) {
  std::string out;
  write_value(out, value, 0);
  return out;
}

std::string format_number(double v) {
  std::array<char, 32> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

void apply_override(Block& root, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ParseError(0, "override must look like key.path=value: '" +
                            std::string(assignment) + "'");
  }
  std::string_view path = assignment.substr(0, eq);
  while (!path.empty() && path.back() == ' ') path.remove_suffix(1);
  Value v;
  try {
    v = parse_value(assignment.substr(eq + 1));
  } catch (const ParseError& e) {
    throw ParseError(0, "override '" + std::string(assignment) +
                            "': " + e.what());
  }
  Block* cur = &root;
  while (true) {
    const auto dot = path.find('.');
    const std::string key(path.substr(0, dot));
    if (key.empty()) {
      throw ParseError(0, "empty key in override path '" +
                              std::string(assignment.substr(0, eq)) + "'");
    }
    if (dot == std::string_view::npos) {
      cur->set(key, std::move(v));
      return;
    }
    Value* next = cur->find(key);
    if (!next) {
      cur->set(key, block(Block{}));
      next = cur->find(key);
    }
    if (auto* b = std::get_if<Block>(&next->data)) {
      cur = b;
    } else if (auto* t = std::get_if<Tagged>(&next->data)) {
      cur = &t->body;
    } else {
      throw ParseError(0, "override path crosses non-block key '" + key +
                              "'");
    }
    path.remove_prefix(dot + 1);
  }
}

}  // namespace ccfunnel::config
