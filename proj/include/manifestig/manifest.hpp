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

#ifndef MANIFESTIG_MANIFEST_HPP
#define MANIFESTIG_MANIFEST_HPP

#include <set>
#include <string>
#include <string_view>

#include "manifestig/errors.hpp"
#include "manifestig/xml.hpp"

namespace manifestig {

inline constexpr std::string_view kAndroidNamespaceUri = "http://schemas.android.com/apk/res/android";

// The permission and intent names one app declares. Names keep the manifest's
// exact spelling; vendor-custom names stay as written.
struct ManifestFeatures {
  std::string app_id;
  std::set<std::string> permissions;
  std::set<std::string> intents;

  bool operator==(const ManifestFeatures&) const = default;
};

namespace detail {

// The android:name attribute, tolerating fixtures that omit the xmlns
// declaration (the prefix then survives verbatim) or drop the prefix.
inline const XmlAttribute* android_name_attribute(const XmlElement& el) {
  for (const auto& a : el.attributes) {
    if (a.name == "name" && a.ns == kAndroidNamespaceUri) return &a;
  }
  for (const auto& a : el.attributes) {
    if (a.ns.empty() && (a.name == "android:name" || a.name == "name")) return &a;
  }
  return nullptr;
}

inline void collect_features(const XmlElement& el, ManifestFeatures& out) {
  if (el.name == "uses-permission" || el.name == "uses-permission-sdk-23") {
    if (const auto* attr = android_name_attribute(el)) {
      std::string name = attr->value.text();
      if (!name.empty()) out.permissions.insert(std::move(name));
    }
  }
  if (el.name == "intent-filter") {
    for (const auto& child : el.children) {
      if (child.name != "action" && child.name != "category") continue;
      if (const auto* attr = android_name_attribute(child)) {
        std::string name = attr->value.text();
        if (!name.empty()) out.intents.insert(std::move(name));
      }
    }
  }
  for (const auto& child : el.children) collect_features(child, out);
}

}  // namespace detail

// Reads permissions and intent action/category names off a decoded manifest.
// Sets are deduplicated by construction; an empty manifest yields empty sets.
inline ManifestFeatures extract_features(const XmlTree& tree) {
  if (tree.root.name != "manifest") {
    throw Error(Errc::NotManifest, "root element is <" + tree.root.name + ">, expected <manifest>");
  }
  ManifestFeatures out;
  if (const auto* package = tree.root.find_attribute("package"); package != nullptr && package->ns.empty()) {
    out.app_id = package->value.text();
  }
  detail::collect_features(tree.root, out);
  return out;
}

}  // namespace manifestig

#endif  // MANIFESTIG_MANIFEST_HPP
