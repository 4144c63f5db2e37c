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

#ifndef MANIFESTIG_ZIP_HPP
#define MANIFESTIG_ZIP_HPP

#include <zlib.h>

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "manifestig/errors.hpp"

namespace manifestig {

struct ZipEntry {
  std::string name;
  std::uint16_t method = 0;  // 0 = stored, 8 = deflate
  std::uint16_t flags = 0;
  std::uint32_t crc32 = 0;
  std::uint32_t compressed_size = 0;
  std::uint32_t uncompressed_size = 0;
  std::uint32_t local_header_offset = 0;
};

// Read-only view over a ZIP container held in memory. Entries come from the
// central directory; sizes and CRCs are taken from there so data-descriptor
// archives work too. No zip64 — APKs that carry a manifest are nowhere near
// the 4 GiB classic-format limits.
class ZipReader {
 public:
  explicit ZipReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) { parse_central_directory(); }

  const std::vector<ZipEntry>& entries() const { return entries_; }

  const ZipEntry* find(std::string_view name) const {
    for (const auto& e : entries_) {
      if (e.name == name) return &e;
    }
    return nullptr;
  }

  // Decompresses (or copies) one entry's payload.
  std::vector<std::uint8_t> read(const ZipEntry& entry) const {
    if (entry.flags & 0x0001) {
      throw Error(Errc::DecompressionFailure, "entry '" + entry.name + "' is encrypted");
    }

    // Local header: 30 fixed bytes, then name and extra whose lengths can
    // differ from the central directory copy.
    const std::size_t lho = entry.local_header_offset;
    if (lho + 30 > bytes_.size() || u32(lho) != 0x04034b50u) {
      throw Error(Errc::DecompressionFailure, "bad local header for '" + entry.name + "'");
    }
    const std::size_t name_len = u16(lho + 26);
    const std::size_t extra_len = u16(lho + 28);
    const std::size_t data_off = lho + 30 + name_len + extra_len;
    if (data_off + entry.compressed_size > bytes_.size()) {
      throw Error(Errc::DecompressionFailure, "entry data out of bounds for '" + entry.name + "'");
    }
    std::span<const std::uint8_t> payload = bytes_.subspan(data_off, entry.compressed_size);

    std::vector<std::uint8_t> out;
    switch (entry.method) {
      case 0:  // stored
        if (entry.compressed_size != entry.uncompressed_size) {
          throw Error(Errc::DecompressionFailure, "stored entry size mismatch for '" + entry.name + "'");
        }
        out.assign(payload.begin(), payload.end());
        break;
      case 8:  // deflate
        out = inflate_raw(payload, entry.uncompressed_size, entry.name);
        break;
      default:
        throw Error(Errc::DecompressionFailure,
                    "unsupported compression method " + std::to_string(entry.method) + " for '" + entry.name + "'");
    }

    const auto actual_crc =
        static_cast<std::uint32_t>(::crc32(0L, out.empty() ? Z_NULL : out.data(), static_cast<uInt>(out.size())));
    if (actual_crc != entry.crc32) {
      throw Error(Errc::DecompressionFailure, "CRC mismatch for '" + entry.name + "'");
    }
    return out;
  }

 private:
  std::uint16_t u16(std::size_t off) const {
    return static_cast<std::uint16_t>(bytes_[off]) | (static_cast<std::uint16_t>(bytes_[off + 1]) << 8);
  }
  std::uint32_t u32(std::size_t off) const {
    return static_cast<std::uint32_t>(bytes_[off]) | (static_cast<std::uint32_t>(bytes_[off + 1]) << 8) |
           (static_cast<std::uint32_t>(bytes_[off + 2]) << 16) | (static_cast<std::uint32_t>(bytes_[off + 3]) << 24);
  }

  void parse_central_directory() {
    // End-of-central-directory record: 22 bytes minimum, up to 64 KiB of
    // trailing comment. Scan backwards for the signature.
    if (bytes_.size() < 22) throw Error(Errc::NotAZip, "file too small for a ZIP archive");
    const std::size_t scan_limit = bytes_.size() >= 22 + 65535 ? bytes_.size() - 22 - 65535 : 0;
    std::size_t eocd = bytes_.size();  // sentinel: not found
    for (std::size_t pos = bytes_.size() - 22; ; --pos) {
      if (u32(pos) == 0x06054b50u) {
        eocd = pos;
        break;
      }
      if (pos == scan_limit) break;
    }
    if (eocd == bytes_.size()) throw Error(Errc::NotAZip, "end-of-central-directory record not found");

    const std::uint16_t entry_count = u16(eocd + 10);
    const std::uint32_t cd_size = u32(eocd + 12);
    const std::uint32_t cd_offset = u32(eocd + 16);
    if (entry_count == 0xffff || cd_size == 0xffffffffu || cd_offset == 0xffffffffu) {
      throw Error(Errc::NotAZip, "zip64 archives are not supported");
    }
    if (static_cast<std::size_t>(cd_offset) + cd_size > eocd) {
      throw Error(Errc::NotAZip, "central directory out of bounds");
    }

    std::size_t pos = cd_offset;
    entries_.reserve(entry_count);
    for (std::uint16_t i = 0; i < entry_count; ++i) {
      if (pos + 46 > bytes_.size() || u32(pos) != 0x02014b50u) {
        throw Error(Errc::NotAZip, "malformed central directory entry");
      }
      ZipEntry e;
      e.flags = u16(pos + 8);
      e.method = u16(pos + 10);
      e.crc32 = u32(pos + 16);
      e.compressed_size = u32(pos + 20);
      e.uncompressed_size = u32(pos + 24);
      const std::size_t name_len = u16(pos + 28);
      const std::size_t extra_len = u16(pos + 30);
      const std::size_t comment_len = u16(pos + 32);
      e.local_header_offset = u32(pos + 42);
      if (pos + 46 + name_len > bytes_.size()) {
        throw Error(Errc::NotAZip, "central directory name out of bounds");
      }
      e.name.assign(reinterpret_cast<const char*>(bytes_.data() + pos + 46), name_len);
      entries_.push_back(std::move(e));
      pos += 46 + name_len + extra_len + comment_len;
    }
  }

  std::vector<std::uint8_t> inflate_raw(std::span<const std::uint8_t> input, std::uint32_t expected_size,
                                        const std::string& name) const {
    std::vector<std::uint8_t> out(expected_size);
    z_stream zs{};
    // Negative window bits: raw deflate stream, as ZIP stores it.
    if (inflateInit2(&zs, -15) != Z_OK) {
      throw Error(Errc::DecompressionFailure, "inflateInit failed for '" + name + "'");
    }
    zs.next_in = const_cast<Bytef*>(input.data());
    zs.avail_in = static_cast<uInt>(input.size());
    zs.next_out = out.data();
    zs.avail_out = static_cast<uInt>(out.size());
    const int rc = inflate(&zs, Z_FINISH);
    const auto produced = static_cast<std::size_t>(zs.total_out);
    inflateEnd(&zs);
    if (rc != Z_STREAM_END || produced != expected_size) {
      throw Error(Errc::DecompressionFailure, "inflate failed for '" + name + "'");
    }
    return out;
  }

  std::span<const std::uint8_t> bytes_;
  std::vector<ZipEntry> entries_;
};

}  // namespace manifestig

#endif  // MANIFESTIG_ZIP_HPP
