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

#ifndef MANIFESTIG_AXML_HPP
#define MANIFESTIG_AXML_HPP

#include <cstdint>
#include <cstdio>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "manifestig/errors.hpp"
#include "manifestig/xml.hpp"

namespace manifestig {
namespace axml {

// Chunk types of the Android binary XML format (ResourceTypes.h layout).
inline constexpr std::uint16_t kResXmlType = 0x0003;
inline constexpr std::uint16_t kResStringPoolType = 0x0001;
inline constexpr std::uint16_t kResXmlResourceMapType = 0x0180;
inline constexpr std::uint16_t kResXmlStartNamespace = 0x0100;
inline constexpr std::uint16_t kResXmlEndNamespace = 0x0101;
inline constexpr std::uint16_t kResXmlStartElement = 0x0102;
inline constexpr std::uint16_t kResXmlEndElement = 0x0103;
inline constexpr std::uint16_t kResXmlCdata = 0x0104;

inline constexpr std::uint32_t kNoEntry = 0xffffffffu;
inline constexpr std::uint32_t kUtf8Flag = 1u << 8;

// Manifests nest a handful of levels; anything deeper is hostile input.
inline constexpr std::size_t kMaxElementDepth = 256;

// Res_value data types that can appear on manifest attributes.
enum class ValueType : std::uint8_t {
  Null = 0x00,
  Reference = 0x01,
  Attribute = 0x02,
  String = 0x03,
  Float = 0x04,
  Dimension = 0x05,
  Fraction = 0x06,
  DynamicReference = 0x07,
  DynamicAttribute = 0x08,
  IntDec = 0x10,
  IntHex = 0x11,
  IntBoolean = 0x12,
};

namespace detail {

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t size() const { return bytes_.size(); }

  void require(std::size_t off, std::size_t len) const {
    if (off + len > bytes_.size() || off + len < off) {
      throw Error(Errc::TruncatedChunk, "need " + std::to_string(len) + " bytes at offset " + std::to_string(off));
    }
  }

  std::uint8_t u8(std::size_t off) const {
    require(off, 1);
    return bytes_[off];
  }
  std::uint16_t u16(std::size_t off) const {
    require(off, 2);
    return static_cast<std::uint16_t>(bytes_[off]) | (static_cast<std::uint16_t>(bytes_[off + 1]) << 8);
  }
  std::uint32_t u32(std::size_t off) const {
    require(off, 4);
    return static_cast<std::uint32_t>(bytes_[off]) | (static_cast<std::uint32_t>(bytes_[off + 1]) << 8) |
           (static_cast<std::uint32_t>(bytes_[off + 2]) << 16) | (static_cast<std::uint32_t>(bytes_[off + 3]) << 24);
  }

  std::span<const std::uint8_t> slice(std::size_t off, std::size_t len) const {
    require(off, len);
    return bytes_.subspan(off, len);
  }

 private:
  std::span<const std::uint8_t> bytes_;
};

inline void utf8_append(std::string& out, std::uint32_t cp) {
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
}

// String pool: header, offset table, then 8-bit (UTF-8) or 16-bit (UTF-16LE)
// encoded entries depending on the UTF8 flag.
class StringPool {
 public:
  StringPool() = default;

  static StringPool parse(const Reader& r, std::size_t chunk_off, std::uint32_t chunk_size) {
    StringPool pool;
    r.require(chunk_off, chunk_size);
    if (chunk_size < 28) throw Error(Errc::TruncatedChunk, "string pool header too small");
    const std::uint32_t string_count = r.u32(chunk_off + 8);
    const std::uint32_t flags = r.u32(chunk_off + 16);
    const std::uint32_t strings_start = r.u32(chunk_off + 20);
    const bool utf8 = (flags & kUtf8Flag) != 0;
    if (strings_start > chunk_size) throw Error(Errc::TruncatedChunk, "string data start beyond pool chunk");
    // The offset table must fit in the chunk; this also bounds string_count
    // before anything is allocated for it.
    if (28 + 4ull * string_count > chunk_size) {
      throw Error(Errc::TruncatedChunk, "string pool declares more offsets than fit in the chunk");
    }

    pool.strings_.reserve(string_count);
    for (std::uint32_t i = 0; i < string_count; ++i) {
      const std::uint32_t rel = r.u32(chunk_off + 28 + 4 * static_cast<std::size_t>(i));
      const std::size_t str_off = chunk_off + strings_start + rel;
      if (strings_start + rel >= chunk_size) {
        throw Error(Errc::TruncatedChunk, "string entry " + std::to_string(i) + " beyond pool chunk");
      }
      pool.strings_.push_back(utf8 ? decode_utf8_entry(r, str_off) : decode_utf16_entry(r, str_off));
    }
    return pool;
  }

  std::size_t size() const { return strings_.size(); }

  const std::string& at(std::uint32_t index) const {
    if (index >= strings_.size()) {
      throw Error(Errc::StringIndexOutOfRange,
                  "string index " + std::to_string(index) + " >= pool size " + std::to_string(strings_.size()));
    }
    return strings_[index];
  }

 private:
  static std::string decode_utf8_entry(const Reader& r, std::size_t off) {
    // Two lengths: UTF-16 char count, then byte count; each one or two bytes.
    std::size_t p = off;
    std::uint32_t chars = r.u8(p++);
    if (chars & 0x80) chars = ((chars & 0x7f) << 8) | r.u8(p++);
    std::uint32_t bytes = r.u8(p++);
    if (bytes & 0x80) bytes = ((bytes & 0x7f) << 8) | r.u8(p++);
    auto data = r.slice(p, bytes);
    return std::string(reinterpret_cast<const char*>(data.data()), data.size());
  }

  static std::string decode_utf16_entry(const Reader& r, std::size_t off) {
    std::size_t p = off;
    std::uint32_t units = r.u16(p);
    p += 2;
    if (units & 0x8000) {
      units = ((units & 0x7fff) << 16) | r.u16(p);
      p += 2;
    }
    r.require(p, 2ull * units);  // bound before allocating
    std::string out;
    out.reserve(units);
    for (std::uint32_t i = 0; i < units; ++i) {
      const std::uint16_t unit = r.u16(p + 2 * static_cast<std::size_t>(i));
      if (unit >= 0xd800 && unit < 0xdc00 && i + 1 < units) {
        const std::uint16_t low = r.u16(p + 2 * static_cast<std::size_t>(i) + 2);
        if (low >= 0xdc00 && low < 0xe000) {
          const std::uint32_t cp = 0x10000 + ((static_cast<std::uint32_t>(unit) - 0xd800) << 10) + (low - 0xdc00);
          utf8_append(out, cp);
          ++i;
          continue;
        }
      }
      if (unit >= 0xd800 && unit < 0xe000) {
        utf8_append(out, 0xfffd);  // unpaired surrogate
      } else {
        utf8_append(out, unit);
      }
    }
    return out;
  }

  std::vector<std::string> strings_;
};

inline std::string pool_string_or_empty(const StringPool& pool, std::uint32_t index) {
  return index == kNoEntry ? std::string{} : pool.at(index);
}

inline XmlValue resolve_value(const StringPool& pool, std::uint32_t raw_index, std::uint8_t data_type,
                              std::uint32_t data) {
  if (raw_index != kNoEntry) return XmlValue::string(pool.at(raw_index));
  switch (static_cast<ValueType>(data_type)) {
    case ValueType::Null:
      return XmlValue::string("");
    case ValueType::String:
      return XmlValue::string(pool.at(data));
    case ValueType::IntBoolean:
      return XmlValue::boolean(data != 0);
    case ValueType::IntDec:
    case ValueType::IntHex:
      return XmlValue::integer(static_cast<std::int32_t>(data));
    default:
      // References, attributes, and the layout-only types (float, dimension,
      // fraction, colors) all render as an unresolved token.
      return XmlValue::reference(data);
  }
}

}  // namespace detail

inline bool looks_binary(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8) return false;
  const std::uint16_t type = static_cast<std::uint16_t>(bytes[0]) | (static_cast<std::uint16_t>(bytes[1]) << 8);
  const std::uint16_t header = static_cast<std::uint16_t>(bytes[2]) | (static_cast<std::uint16_t>(bytes[3]) << 8);
  return type == kResXmlType && header == 8;
}

// Decodes an Android binary XML document into an XmlTree. Unknown chunk types
// are skipped with a warning on the tree; structural damage throws.
inline XmlTree decode_binary_xml(std::span<const std::uint8_t> bytes) {
  detail::Reader r(bytes);
  if (!looks_binary(bytes)) throw Error(Errc::NotXml, "missing binary XML chunk signature");
  const std::uint32_t declared_size = r.u32(4);
  if (declared_size < 8 || declared_size > bytes.size()) {
    throw Error(Errc::TruncatedChunk, "document chunk declares " + std::to_string(declared_size) + " bytes, have " +
                                          std::to_string(bytes.size()));
  }
  const std::size_t end = declared_size;

  XmlTree tree;
  detail::StringPool pool;
  bool have_pool = false;

  // Element construction runs off an explicit stack; completed elements move
  // into their parent on the end tag.
  std::vector<XmlElement> stack;
  std::vector<XmlElement> roots;

  std::size_t off = 8;
  while (off < end) {
    const std::uint16_t chunk_type = r.u16(off);
    const std::uint16_t header_size = r.u16(off + 2);
    const std::uint32_t chunk_size = r.u32(off + 4);
    if (header_size < 8 || chunk_size < header_size || off + chunk_size > end) {
      throw Error(Errc::TruncatedChunk, "chunk 0x" + std::to_string(chunk_type) + " overruns document");
    }

    switch (chunk_type) {
      case kResStringPoolType:
        pool = detail::StringPool::parse(r, off, chunk_size);
        have_pool = true;
        break;

      case kResXmlResourceMapType:
        break;  // attribute-id table; names come from the string pool

      case kResXmlStartNamespace:
      case kResXmlEndNamespace: {
        if (!have_pool) throw Error(Errc::NotXml, "namespace chunk before string pool");
        if (chunk_type == kResXmlStartNamespace) {
          if (chunk_size < static_cast<std::uint32_t>(header_size) + 8) {
            throw Error(Errc::TruncatedChunk, "namespace chunk too small for its prefix/uri record");
          }
          const std::string prefix = detail::pool_string_or_empty(pool, r.u32(off + header_size));
          const std::string uri = detail::pool_string_or_empty(pool, r.u32(off + header_size + 4));
          bool seen = false;
          for (const auto& [p, u] : tree.namespaces) {
            if (p == prefix) {
              seen = true;
              break;
            }
          }
          if (!seen) tree.namespaces.emplace_back(prefix, uri);
        }
        break;
      }

      case kResXmlStartElement: {
        if (!have_pool) throw Error(Errc::NotXml, "element chunk before string pool");
        if (stack.size() >= kMaxElementDepth) throw Error(Errc::NotXml, "element nesting exceeds limit");
        if (chunk_size < static_cast<std::uint32_t>(header_size) + 20) {
          throw Error(Errc::TruncatedChunk, "element chunk too small for its extension record");
        }
        const std::size_t ext = off + header_size;
        XmlElement el;
        el.ns = detail::pool_string_or_empty(pool, r.u32(ext));
        el.name = pool.at(r.u32(ext + 4));
        const std::uint16_t attribute_start = r.u16(ext + 8);
        const std::uint16_t attribute_size = r.u16(ext + 10);
        const std::uint16_t attribute_count = r.u16(ext + 12);
        if (attribute_size < 20) throw Error(Errc::TruncatedChunk, "attribute record smaller than 20 bytes");
        for (std::uint16_t i = 0; i < attribute_count; ++i) {
          const std::size_t a = ext + attribute_start + static_cast<std::size_t>(i) * attribute_size;
          if (a + attribute_size > off + chunk_size) {
            throw Error(Errc::TruncatedChunk, "attribute " + std::to_string(i) + " overruns element chunk");
          }
          XmlAttribute attr;
          attr.ns = detail::pool_string_or_empty(pool, r.u32(a));
          attr.name = pool.at(r.u32(a + 4));
          const std::uint32_t raw_index = r.u32(a + 8);
          const std::uint8_t data_type = r.u8(a + 15);
          const std::uint32_t data = r.u32(a + 16);
          attr.value = detail::resolve_value(pool, raw_index, data_type, data);
          el.attributes.push_back(std::move(attr));
        }
        stack.push_back(std::move(el));
        break;
      }

      case kResXmlEndElement: {
        if (stack.empty()) throw Error(Errc::NotXml, "end tag with no open element");
        XmlElement done = std::move(stack.back());
        stack.pop_back();
        if (stack.empty()) {
          roots.push_back(std::move(done));
        } else {
          stack.back().children.push_back(std::move(done));
        }
        break;
      }

      case kResXmlCdata:
        break;  // character data is not part of the tree model

      default: {
        char buf[48];
        std::snprintf(buf, sizeof(buf), "skipped unknown chunk type 0x%04x", chunk_type);
        tree.warnings.emplace_back(buf);
        break;
      }
    }
    off += chunk_size;
  }

  if (!stack.empty()) throw Error(Errc::TruncatedChunk, "document ends with unclosed elements");
  if (roots.empty()) throw Error(Errc::NotXml, "document has no element");
  if (roots.size() > 1) throw Error(Errc::NotXml, "document has more than one root element");
  tree.root = std::move(roots.front());
  return tree;
}

}  // namespace axml

// Decodes manifest bytes in either encoding: the binary chunked format, or
// plain text (pre-decompiled corpora and fixtures).
inline XmlTree decode_manifest(std::span<const std::uint8_t> bytes) {
  if (bytes.empty()) throw Error(Errc::NotXml, "empty manifest");
  if (axml::looks_binary(bytes)) return axml::decode_binary_xml(bytes);

  std::size_t start = 0;
  if (bytes.size() >= 3 && bytes[0] == 0xef && bytes[1] == 0xbb && bytes[2] == 0xbf) start = 3;
  while (start < bytes.size() &&
         (bytes[start] == ' ' || bytes[start] == '\t' || bytes[start] == '\r' || bytes[start] == '\n')) {
    ++start;
  }
  if (start < bytes.size() && bytes[start] == '<') {
    return parse_text_xml(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
  }
  throw Error(Errc::NotXml, "neither binary XML nor text XML");
}

}  // namespace manifestig

#endif  // MANIFESTIG_AXML_HPP
