#pragma once

// A small non-validating XML reader. Enough for Maven POMs: elements,
// attributes, character data, entities, CDATA, comments, processing
// instructions and a (skipped) DOCTYPE. Namespaces are not interpreted; a
// prefixed name is kept verbatim.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "icmetrics/error.hpp"

namespace icm::xml {

struct Element {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<std::unique_ptr<Element>> children;
  std::string text;  // concatenated character data of this element only
  std::size_t line = 0;
  std::size_t column = 0;

  const Element* child(std::string_view n) const {
    for (const auto& c : children)
      if (c->name == n) return c.get();
    return nullptr;
  }

  std::vector<const Element*> children_named(std::string_view n) const {
    std::vector<const Element*> out;
    for (const auto& c : children)
      if (c->name == n) out.push_back(c.get());
    return out;
  }
};

namespace detail {

inline bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

inline bool is_name_start(char c) {
  auto u = static_cast<unsigned char>(c);
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_' || c == ':' || u >= 0x80;
}

inline bool is_name_char(char c) {
  return is_name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
}

inline void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class Reader {
 public:
  explicit Reader(std::string_view text) : s_(text) {}

  std::unique_ptr<Element> document() {
    if (s_.substr(0, 3) == "\xEF\xBB\xBF") advance(3);
    misc();
    if (at_end()) fail("document has no root element");
    if (peek() != '<') fail("expected '<'");
    auto root = element();
    misc();
    if (!at_end()) fail("content after the root element");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw XmlError(what, line_, col_); }

  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }
  bool starts_with(std::string_view p) const { return s_.substr(pos_, p.size()) == p; }

  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < s_.size(); ++i, ++pos_) {
      if (s_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
    }
  }

  void expect(std::string_view p) {
    if (!starts_with(p)) fail("expected '" + std::string(p) + "'");
    advance(p.size());
  }

  void skip_space() {
    while (!at_end() && is_space(peek())) advance();
  }

  void skip_until(std::string_view terminator, const char* construct) {
    auto end = s_.find(terminator, pos_);
    if (end == std::string_view::npos) fail(std::string("unterminated ") + construct);
    advance(end + terminator.size() - pos_);
  }

  // Comments, PIs, whitespace and DOCTYPE outside the root element.
  void misc() {
    for (;;) {
      skip_space();
      if (starts_with("<?")) {
        skip_until("?>", "processing instruction");
      } else if (starts_with("<!--")) {
        comment();
      } else if (starts_with("<!DOCTYPE")) {
        doctype();
      } else {
        return;
      }
    }
  }

  void comment() {
    advance(4);
    auto end = s_.find("--", pos_);
    if (end == std::string_view::npos) fail("unterminated comment");
    advance(end - pos_);
    if (!starts_with("-->")) fail("'--' inside comment");
    advance(3);
  }

  void doctype() {
    advance(9);
    int depth = 0;
    while (!at_end()) {
      char c = peek();
      if (c == '[') ++depth;
      if (c == ']') --depth;
      if (c == '>' && depth == 0) {
        advance();
        return;
      }
      advance();
    }
    fail("unterminated DOCTYPE");
  }

  std::string name() {
    if (at_end() || !is_name_start(peek())) fail("expected a name");
    auto start = pos_;
    while (!at_end() && is_name_char(peek())) advance();
    return std::string(s_.substr(start, pos_ - start));
  }

  void reference(std::string& out) {
    auto semi = s_.find(';', pos_);
    if (semi == std::string_view::npos || semi - pos_ > 12) fail("malformed entity reference");
    auto ent = s_.substr(pos_ + 1, semi - pos_ - 1);
    if (ent == "lt") out += '<';
    else if (ent == "gt") out += '>';
    else if (ent == "amp") out += '&';
    else if (ent == "quot") out += '"';
    else if (ent == "apos") out += '\'';
    else if (ent.size() > 1 && ent[0] == '#') {
      std::uint32_t cp = 0;
      bool hex = ent[1] == 'x';
      auto digits = ent.substr(hex ? 2 : 1);
      if (digits.empty()) fail("malformed character reference");
      for (char c : digits) {
        int d;
        if (c >= '0' && c <= '9') d = c - '0';
        else if (hex && c >= 'a' && c <= 'f') d = c - 'a' + 10;
        else if (hex && c >= 'A' && c <= 'F') d = c - 'A' + 10;
        else fail("malformed character reference");
        cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(d);
        if (cp > 0x10FFFF) fail("character reference out of range");
      }
      append_utf8(out, cp);
    } else {
      fail("unknown entity '&" + std::string(ent) + ";'");
    }
    advance(semi + 1 - pos_);
  }

  std::string attribute_value() {
    if (at_end() || (peek() != '"' && peek() != '\'')) fail("expected quoted attribute value");
    char quote = peek();
    advance();
    std::string out;
    while (!at_end() && peek() != quote) {
      if (peek() == '<') fail("'<' in attribute value");
      if (peek() == '&') reference(out);
      else {
        out += peek();
        advance();
      }
    }
    if (at_end()) fail("unterminated attribute value");
    advance();
    return out;
  }

  std::unique_ptr<Element> element() {
    auto el = std::make_unique<Element>();
    el->line = line_;
    el->column = col_;
    expect("<");
    el->name = name();
    for (;;) {
      bool had_space = !at_end() && is_space(peek());
      skip_space();
      if (at_end()) fail("unterminated start tag");
      if (starts_with("/>")) {
        advance(2);
        return el;
      }
      if (peek() == '>') {
        advance();
        break;
      }
      if (!had_space) fail("expected whitespace before attribute");
      auto attr = name();
      skip_space();
      expect("=");
      skip_space();
      for (const auto& [k, v] : el->attributes)
        if (k == attr) fail("duplicate attribute '" + attr + "'");
      el->attributes.emplace_back(std::move(attr), attribute_value());
    }
    content(*el);
    return el;
  }

  void content(Element& el) {
    for (;;) {
      if (at_end()) fail("unexpected end of document inside <" + el.name + ">");
      if (starts_with("</")) {
        const auto tag_line = line_, tag_col = col_;
        advance(2);
        auto close = name();
        if (close != el.name)
          throw XmlError("mismatched closing tag </" + close + ">, expected </" + el.name + ">", tag_line,
                         tag_col);
        skip_space();
        expect(">");
        return;
      }
      if (starts_with("<!--")) {
        comment();
      } else if (starts_with("<![CDATA[")) {
        advance(9);
        auto end = s_.find("]]>", pos_);
        if (end == std::string_view::npos) fail("unterminated CDATA section");
        el.text.append(s_.substr(pos_, end - pos_));
        advance(end + 3 - pos_);
      } else if (starts_with("<?")) {
        skip_until("?>", "processing instruction");
      } else if (peek() == '<') {
        el.children.push_back(element());
      } else if (peek() == '&') {
        reference(el.text);
      } else {
        el.text += peek();
        advance();
      }
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

}  // namespace detail

// Throws XmlError on malformed input.
inline std::unique_ptr<Element> parse(std::string_view text) {
  return detail::Reader(text).document();
}

}  // namespace icm::xml
