/*
 * Copyright 2026 The manifest-ig Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MANIFESTIG_XML_HPP
#define MANIFESTIG_XML_HPP

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "manifestig/errors.hpp"

namespace manifestig {

// An unresolved Android resource id, rendered as "@0x%08x".
struct ResourceRef {
  std::uint32_t id = 0;
  bool operator==(const ResourceRef&) const = default;
};

// Attribute values are fully resolved: a string, a boolean, a 32-bit integer,
// or a resource reference. Raw chunk offsets never escape the decoder.
class XmlValue {
 public:
  XmlValue() : v_(std::string{}) {}
  static XmlValue string(std::string s) { return XmlValue(std::move(s)); }
  static XmlValue boolean(bool b) { return XmlValue(b); }
  static XmlValue integer(std::int32_t i) { return XmlValue(i); }
  static XmlValue reference(std::uint32_t id) { return XmlValue(ResourceRef{id}); }

  bool is_string() const { return std::holds_alternative<std::string>(v_); }

  // Canonical text form: strings verbatim, true/false, signed decimal,
  // "@0x%08x". This is the form golden trees and feature names see.
  std::string text() const {
    struct Renderer {
      std::string operator()(const std::string& s) const { return s; }
      std::string operator()(bool b) const { return b ? "true" : "false"; }
      std::string operator()(std::int32_t i) const { return std::to_string(i); }
      std::string operator()(ResourceRef r) const {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "@0x%08x", r.id);
        return buf;
      }
    };
    return std::visit(Renderer{}, v_);
  }

  bool operator==(const XmlValue&) const = default;

 private:
  explicit XmlValue(std::variant<std::string, bool, std::int32_t, ResourceRef> v) : v_(std::move(v)) {}
  std::variant<std::string, bool, std::int32_t, ResourceRef> v_;
};

struct XmlAttribute {
  std::string ns;    // namespace URI, empty when unqualified
  std::string name;  // local name
  XmlValue value;
  bool operator==(const XmlAttribute&) const = default;
};

struct XmlElement {
  std::string ns;
  std::string name;
  std::vector<XmlAttribute> attributes;
  std::vector<XmlElement> children;

  bool operator==(const XmlElement&) const = default;

  const XmlAttribute* find_attribute(std::string_view local_name) const {
    for (const auto& a : attributes) {
      if (a.name == local_name) return &a;
    }
    return nullptr;
  }
};

struct XmlTree {
  XmlElement root;
  // prefix -> namespace URI, in declaration order. Rendered on the root
  // element in canonical text.
  std::vector<std::pair<std::string, std::string>> namespaces;
  // Recoverable decode notes (e.g. unknown chunk types that were skipped).
  std::vector<std::string> warnings;

  bool same_document(const XmlTree& other) const {
    return root == other.root && namespaces == other.namespaces;
  }
};

namespace detail {

inline void xml_escape_into(std::string& out, std::string_view s) {
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
}

inline std::string qualified_name(const XmlTree& tree, const std::string& ns, const std::string& name) {
  if (ns.empty()) return name;
  for (const auto& [prefix, uri] : tree.namespaces) {
    if (uri == ns) return prefix.empty() ? name : prefix + ":" + name;
  }
  return "{" + ns + "}" + name;
}

inline void serialize_element(const XmlTree& tree, const XmlElement& el, int depth, std::string& out) {
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
  out.push_back('<');
  const std::string qname = qualified_name(tree, el.ns, el.name);
  out += qname;
  if (depth == 0) {
    for (const auto& [prefix, uri] : tree.namespaces) {
      out += prefix.empty() ? " xmlns=\"" : " xmlns:" + prefix + "=\"";
      xml_escape_into(out, uri);
      out.push_back('"');
    }
  }
  for (const auto& attr : el.attributes) {
    out.push_back(' ');
    out += qualified_name(tree, attr.ns, attr.name);
    out += "=\"";
    xml_escape_into(out, attr.value.text());
    out.push_back('"');
  }
  if (el.children.empty()) {
    out += "/>\n";
    return;
  }
  out += ">\n";
  for (const auto& child : el.children) serialize_element(tree, child, depth + 1, out);
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
  out += "</" + qname + ">\n";
}

}  // namespace detail

// Deterministic text form of a decoded tree: 2-space indent, elements only,
// namespace declarations on the root, attributes in decode order, LF endings.
// Golden-fixture files hold exactly this rendering.
inline std::string to_canonical_text(const XmlTree& tree) {
  std::string out;
  detail::serialize_element(tree, tree.root, 0, out);
  return out;
}

namespace detail {

class TextXmlParser {
 public:
  explicit TextXmlParser(std::string_view input) : in_(input) {}

  XmlTree parse() {
    // UTF-8 BOM
    if (in_.size() >= 3 && static_cast<unsigned char>(in_[0]) == 0xef &&
        static_cast<unsigned char>(in_[1]) == 0xbb && static_cast<unsigned char>(in_[2]) == 0xbf) {
      pos_ = 3;
    }
    bool have_root = false;
    while (true) {
      skip_whitespace();
      if (pos_ >= in_.size()) break;
      if (in_[pos_] != '<') fail("text content outside the root element");
      if (starts_with("<?")) {
        skip_until("?>");
      } else if (starts_with("<!--")) {
        skip_until("-->");
      } else if (starts_with("<!")) {
        skip_until(">");
      } else {
        if (have_root) fail("more than one root element");
        tree_.root = parse_element();
        have_root = true;
      }
    }
    if (!have_root) fail("no root element");
    return std::move(tree_);
  }

 private:
  [[noreturn]] void fail(const std::string& why) { throw Error(Errc::NotXml, why); }

  bool starts_with(std::string_view s) const { return in_.substr(pos_).starts_with(s); }

  void skip_whitespace() {
    while (pos_ < in_.size() && (in_[pos_] == ' ' || in_[pos_] == '\t' || in_[pos_] == '\r' || in_[pos_] == '\n')) {
      ++pos_;
    }
  }

  void skip_until(std::string_view terminator) {
    const std::size_t found = in_.find(terminator, pos_);
    if (found == std::string_view::npos) fail("unterminated markup");
    pos_ = found + terminator.size();
  }

  std::string read_name() {
    const std::size_t start = pos_;
    while (pos_ < in_.size()) {
      const char c = in_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '/' || c == '>' || c == '=') break;
      ++pos_;
    }
    if (pos_ == start) fail("expected a name");
    return std::string(in_.substr(start, pos_ - start));
  }

  std::string read_quoted_value() {
    if (pos_ >= in_.size() || (in_[pos_] != '"' && in_[pos_] != '\'')) fail("expected a quoted attribute value");
    const char quote = in_[pos_++];
    std::string out;
    while (pos_ < in_.size() && in_[pos_] != quote) {
      if (in_[pos_] == '&') {
        out += read_entity();
      } else {
        out.push_back(in_[pos_++]);
      }
    }
    if (pos_ >= in_.size()) fail("unterminated attribute value");
    ++pos_;  // closing quote
    return out;
  }

  std::string read_entity() {
    const std::size_t semi = in_.find(';', pos_);
    if (semi == std::string_view::npos || semi - pos_ > 12) fail("malformed entity reference");
    const std::string_view body = in_.substr(pos_ + 1, semi - pos_ - 1);
    pos_ = semi + 1;
    if (body == "amp") return "&";
    if (body == "lt") return "<";
    if (body == "gt") return ">";
    if (body == "quot") return "\"";
    if (body == "apos") return "'";
    if (!body.empty() && body[0] == '#') {
      const bool hex = body.size() > 1 && (body[1] == 'x' || body[1] == 'X');
      std::uint32_t cp = 0;
      try {
        cp = static_cast<std::uint32_t>(std::stoul(std::string(body.substr(hex ? 2 : 1)), nullptr, hex ? 16 : 10));
      } catch (const std::exception&) {
        fail("malformed character reference");
      }
      return encode_utf8(cp);
    }
    fail("unknown entity '" + std::string(body) + "'");
  }

  static std::string encode_utf8(std::uint32_t cp) {
    std::string out;
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else {
      out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    }
    return out;
  }

  struct RawAttr {
    std::string name;  // as written, possibly "prefix:local"
    std::string value;
  };

  XmlElement parse_element() {
    if (++depth_ > 256) fail("element nesting exceeds limit");
    ++pos_;  // '<'
    const std::string raw_name = read_name();

    std::vector<RawAttr> raw_attrs;
    bool self_closing = false;
    while (true) {
      skip_whitespace();
      if (pos_ >= in_.size()) fail("unterminated element '" + raw_name + "'");
      if (in_[pos_] == '>') {
        ++pos_;
        break;
      }
      if (starts_with("/>")) {
        pos_ += 2;
        self_closing = true;
        break;
      }
      RawAttr attr;
      attr.name = read_name();
      skip_whitespace();
      if (pos_ >= in_.size() || in_[pos_] != '=') fail("attribute '" + attr.name + "' has no value");
      ++pos_;
      skip_whitespace();
      attr.value = read_quoted_value();
      raw_attrs.push_back(std::move(attr));
    }

    // xmlns declarations open a scope and move into the tree-level table.
    std::size_t scope_mark = scopes_.size();
    XmlElement el;
    for (auto& attr : raw_attrs) {
      if (attr.name == "xmlns") {
        declare("", attr.value);
      } else if (attr.name.starts_with("xmlns:")) {
        declare(attr.name.substr(6), attr.value);
      }
    }
    for (auto& attr : raw_attrs) {
      if (attr.name == "xmlns" || attr.name.starts_with("xmlns:")) continue;
      XmlAttribute out;
      const std::size_t colon = attr.name.find(':');
      if (colon != std::string::npos) {
        const std::string prefix = attr.name.substr(0, colon);
        const std::string* uri = lookup(prefix);
        if (uri != nullptr) {
          out.ns = *uri;
          out.name = attr.name.substr(colon + 1);
        } else {
          out.name = std::move(attr.name);  // undeclared prefix: keep verbatim
        }
      } else {
        out.name = std::move(attr.name);
      }
      out.value = XmlValue::string(std::move(attr.value));
      el.attributes.push_back(std::move(out));
    }
    {
      const std::size_t colon = raw_name.find(':');
      if (colon != std::string::npos) {
        const std::string* uri = lookup(raw_name.substr(0, colon));
        if (uri != nullptr) {
          el.ns = *uri;
          el.name = raw_name.substr(colon + 1);
        } else {
          el.name = raw_name;
        }
      } else {
        const std::string* default_uri = lookup("");
        if (default_uri != nullptr) el.ns = *default_uri;
        el.name = raw_name;
      }
    }

    if (!self_closing) {
      while (true) {
        // Skip character data; the tree models elements and attributes only.
        while (pos_ < in_.size() && in_[pos_] != '<') ++pos_;
        if (pos_ >= in_.size()) fail("unterminated element '" + raw_name + "'");
        if (starts_with("</")) {
          pos_ += 2;
          const std::string close_name = read_name();
          if (close_name != raw_name) {
            fail("mismatched closing tag '" + close_name + "' for '" + raw_name + "'");
          }
          skip_whitespace();
          if (pos_ >= in_.size() || in_[pos_] != '>') fail("malformed closing tag");
          ++pos_;
          break;
        }
        if (starts_with("<!--")) {
          skip_until("-->");
        } else if (starts_with("<![CDATA[")) {
          skip_until("]]>");
        } else if (starts_with("<?")) {
          skip_until("?>");
        } else {
          el.children.push_back(parse_element());
        }
      }
    }

    scopes_.resize(scope_mark);
    --depth_;
    return el;
  }

  void declare(std::string prefix, std::string uri) {
    bool known = false;
    for (const auto& [p, u] : tree_.namespaces) {
      if (p == prefix && u == uri) {
        known = true;
        break;
      }
    }
    if (!known) tree_.namespaces.emplace_back(prefix, uri);
    scopes_.emplace_back(std::move(prefix), std::move(uri));
  }

  const std::string* lookup(std::string_view prefix) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      if (it->first == prefix) return &it->second;
    }
    return nullptr;
  }

  std::string_view in_;
  std::size_t pos_ = 0;
  std::size_t depth_ = 0;
  XmlTree tree_;
  std::vector<std::pair<std::string, std::string>> scopes_;
};

}  // namespace detail

// Parses a plain-text manifest. All attribute values come out as strings.
inline XmlTree parse_text_xml(std::string_view input) {
  detail::TextXmlParser parser(input);
  return parser.parse();
}

}  // namespace manifestig

#endif  // MANIFESTIG_XML_HPP
