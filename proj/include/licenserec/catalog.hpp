// SPDX-License-Identifier: Apache-2.0
//
// License catalog: canonical ids, tag aliases, category assignment and
// per-license clause profiles over a fixed action vocabulary. Membership
// lives in a JSON data file; this module only loads and queries it.
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "licenserec/errors.hpp"
#include "licenserec/io.hpp"
#include "licenserec/text.hpp"

namespace licenserec {

enum class Category {
  Permissive,
  Copyleft,
  ShareAlike,
  MlLicense,
  Nc,
  NcSa,
  NcNd,
  Nd,
  PublicDomain,
  Unknown,
};

inline constexpr std::array<Category, 10> kAllCategories = {
    Category::Permissive, Category::Copyleft, Category::ShareAlike, Category::MlLicense,
    Category::Nc,         Category::NcSa,     Category::NcNd,       Category::Nd,
    Category::PublicDomain, Category::Unknown,
};

// The nine categories the matrix defaults are total over (UNKNOWN excluded).
inline constexpr std::array<Category, 9> kKnownCategories = {
    Category::Permissive, Category::Copyleft, Category::ShareAlike,
    Category::MlLicense,  Category::Nc,       Category::NcSa,
    Category::NcNd,       Category::Nd,       Category::PublicDomain,
};

inline std::string_view category_code(Category c) {
  switch (c) {
    case Category::Permissive: return "PERMISSIVE";
    case Category::Copyleft: return "COPYLEFT";
    case Category::ShareAlike: return "SHARE_ALIKE";
    case Category::MlLicense: return "ML_LICENSE";
    case Category::Nc: return "NC";
    case Category::NcSa: return "NC_SA";
    case Category::NcNd: return "NC_ND";
    case Category::Nd: return "ND";
    case Category::PublicDomain: return "PUBLIC_DOMAIN";
    case Category::Unknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

inline std::optional<Category> parse_category(std::string_view code) {
  for (Category c : kAllCategories)
    if (code == category_code(c)) return c;
  return std::nullopt;
}

enum class ClauseAction {
  CommercialUse,
  CreateDerivatives,
  Distribute,
  RelicensePermissively,
  ShareAlikeSameTerms,
  DiscloseSource,
  Attribution,
  IncludeLicenseTerms,
  UseRestrictionsEthical,
};

inline constexpr std::array<ClauseAction, 9> kClauseActions = {
    ClauseAction::CommercialUse,        ClauseAction::CreateDerivatives,
    ClauseAction::Distribute,           ClauseAction::RelicensePermissively,
    ClauseAction::ShareAlikeSameTerms,  ClauseAction::DiscloseSource,
    ClauseAction::Attribution,          ClauseAction::IncludeLicenseTerms,
    ClauseAction::UseRestrictionsEthical,
};

inline std::string_view action_code(ClauseAction a) {
  switch (a) {
    case ClauseAction::CommercialUse: return "commercial_use";
    case ClauseAction::CreateDerivatives: return "create_derivatives";
    case ClauseAction::Distribute: return "distribute";
    case ClauseAction::RelicensePermissively: return "relicense_permissively";
    case ClauseAction::ShareAlikeSameTerms: return "share_alike_same_terms";
    case ClauseAction::DiscloseSource: return "disclose_source";
    case ClauseAction::Attribution: return "attribution";
    case ClauseAction::IncludeLicenseTerms: return "include_license_terms";
    case ClauseAction::UseRestrictionsEthical: return "use_restrictions_ethical";
  }
  return "";
}

inline std::optional<ClauseAction> parse_action(std::string_view code) {
  for (ClauseAction a : kClauseActions)
    if (code == action_code(a)) return a;
  return std::nullopt;
}

enum class ClauseStatus { Permission, Duty, Prohibition, Silent };

inline std::string_view status_code(ClauseStatus s) {
  switch (s) {
    case ClauseStatus::Permission: return "permission";
    case ClauseStatus::Duty: return "duty";
    case ClauseStatus::Prohibition: return "prohibition";
    case ClauseStatus::Silent: return "silent";
  }
  return "silent";
}

inline std::optional<ClauseStatus> parse_status(std::string_view code) {
  if (code == "permission") return ClauseStatus::Permission;
  if (code == "duty") return ClauseStatus::Duty;
  if (code == "prohibition") return ClauseStatus::Prohibition;
  if (code == "silent") return ClauseStatus::Silent;
  return std::nullopt;
}

// One status per action; Silent means the license says nothing.
struct ClauseProfile {
  std::array<ClauseStatus, kClauseActions.size()> statuses{};

  ClauseProfile() { statuses.fill(ClauseStatus::Silent); }

  ClauseStatus status(ClauseAction a) const { return statuses[static_cast<std::size_t>(a)]; }
  void set(ClauseAction a, ClauseStatus s) { statuses[static_cast<std::size_t>(a)] = s; }

  bool all_silent() const {
    for (ClauseStatus s : statuses)
      if (s != ClauseStatus::Silent) return false;
    return true;
  }
  bool has_duty() const {
    for (ClauseStatus s : statuses)
      if (s == ClauseStatus::Duty) return true;
    return false;
  }
  bool has_prohibition() const {
    for (ClauseStatus s : statuses)
      if (s == ClauseStatus::Prohibition) return true;
    return false;
  }
};

struct CcFamily {
  std::string family;   // e.g. "CC-BY-SA"
  std::string version;  // e.g. "4.0"; empty for unversioned deeds
};

struct CatalogEntry {
  std::string id;
  std::vector<std::string> aliases;
  Category category = Category::Unknown;
  ClauseProfile profile;
  std::uint64_t frequency_weight = 0;
  std::optional<CcFamily> cc_family;
  bool whitelisted = false;
};

class Catalog {
 public:
  static Catalog load(const std::filesystem::path& path) {
    return from_json(load_json_file(path), path.string());
  }

  static Catalog from_json(const nlohmann::json& doc, const std::string& label) {
    if (!doc.is_array()) throw SchemaError(label + ": catalog root must be an array");
    if (doc.empty()) throw SchemaError(label + ": catalog is empty");
    Catalog cat;
    cat.entries_.reserve(doc.size());
    for (const auto& item : doc) cat.entries_.push_back(parse_entry(item, label));
    std::sort(cat.entries_.begin(), cat.entries_.end(),
              [](const CatalogEntry& a, const CatalogEntry& b) {
                return ILess{}(a.id, b.id);
              });
    for (std::size_t i = 0; i < cat.entries_.size(); ++i) {
      const CatalogEntry& e = cat.entries_[i];
      cat.add_key(e.id, i);
      for (const std::string& alias : e.aliases) cat.add_key(alias, i);
    }
    return cat;
  }

  std::size_t size() const { return entries_.size(); }
  const std::vector<CatalogEntry>& entries() const { return entries_; }

  // Case-insensitive, punctuation-tolerant lookup by id or alias. A
  // trailing '+' falls back to the "-or-later" spelling.
  const CatalogEntry* find(std::string_view id_or_alias) const {
    std::string key = canonical_tag_key(id_or_alias);
    if (key.empty()) return nullptr;
    auto it = by_key_.find(key);
    if (it != by_key_.end()) return &entries_[it->second];
    if (key.back() == '+') {
      it = by_key_.find(key.substr(0, key.size() - 1) + "-or-later");
      if (it != by_key_.end()) return &entries_[it->second];
    }
    return nullptr;
  }

  bool is_known(std::string_view id) const { return find(id) != nullptr; }

  // Total: unmatched tags come back verbatim (trimmed) as unknown tokens.
  std::string normalize_license_tag(std::string_view raw) const {
    if (const CatalogEntry* e = find(raw)) return e->id;
    return std::string(trim_view(raw));
  }

  Category categorize(std::string_view id) const {
    const CatalogEntry* e = find(id);
    return e ? e->category : Category::Unknown;
  }

  ClauseProfile clause_profile(std::string_view id) const {
    const CatalogEntry* e = find(id);
    return e ? e->profile : ClauseProfile{};
  }

  std::set<std::string, ILess> default_whitelist() const {
    std::set<std::string, ILess> out;
    for (const CatalogEntry& e : entries_)
      if (e.whitelisted) out.insert(e.id);
    return out;
  }

  // Category/profile coherence rules; returns one diagnostic per breach.
  std::vector<std::string> check_coherence() const {
    std::vector<std::string> issues;
    auto flag = [&](const CatalogEntry& e, const std::string& what) {
      issues.push_back(e.id + ": " + what);
    };
    for (const CatalogEntry& e : entries_) {
      const ClauseProfile& p = e.profile;
      switch (e.category) {
        case Category::Nc:
        case Category::NcSa:
        case Category::NcNd:
          if (p.status(ClauseAction::CommercialUse) != ClauseStatus::Prohibition)
            flag(e, "NC-family entry lacks Prohibition(commercial_use)");
          break;
        default:
          break;
      }
      if ((e.category == Category::Nd || e.category == Category::NcNd) &&
          p.status(ClauseAction::CreateDerivatives) != ClauseStatus::Prohibition)
        flag(e, "ND-family entry lacks Prohibition(create_derivatives)");
      if ((e.category == Category::ShareAlike || e.category == Category::Copyleft ||
           e.category == Category::NcSa) &&
          p.status(ClauseAction::ShareAlikeSameTerms) != ClauseStatus::Duty)
        flag(e, "share-alike entry lacks Duty(share_alike_same_terms)");
      if (e.category == Category::MlLicense) {
        if (p.status(ClauseAction::IncludeLicenseTerms) != ClauseStatus::Duty)
          flag(e, "ML entry lacks Duty(include_license_terms)");
        if (p.status(ClauseAction::UseRestrictionsEthical) == ClauseStatus::Silent)
          flag(e, "ML entry is silent on use_restrictions_ethical");
      }
      if (e.category == Category::PublicDomain && (p.has_duty() || p.has_prohibition()))
        flag(e, "public-domain entry carries a duty or prohibition");
      bool is_cc = lower_copy(e.id).starts_with("cc-") || lower_copy(e.id).starts_with("cc0");
      if (is_cc != e.cc_family.has_value())
        flag(e, is_cc ? "Creative Commons id without cc_family"
                      : "cc_family on a non-Creative-Commons id");
    }
    return issues;
  }

 private:
  static CatalogEntry parse_entry(const nlohmann::json& item, const std::string& label) {
    if (!item.is_object()) throw SchemaError(label + ": catalog entry must be an object");
    CatalogEntry e;
    if (!item.contains("id") || !item["id"].is_string() || item["id"].get<std::string>().empty())
      throw SchemaError(label + ": entry missing non-empty 'id'");
    e.id = item["id"].get<std::string>();
    if (item.contains("aliases")) {
      if (!item["aliases"].is_array()) throw SchemaError(label + ": '" + e.id + "' aliases must be an array");
      for (const auto& a : item["aliases"]) {
        if (!a.is_string()) throw SchemaError(label + ": '" + e.id + "' alias must be a string");
        e.aliases.push_back(a.get<std::string>());
      }
    }
    if (!item.contains("category") || !item["category"].is_string())
      throw SchemaError(label + ": '" + e.id + "' missing 'category'");
    auto cat = parse_category(item["category"].get<std::string>());
    if (!cat)
      throw SchemaError(label + ": '" + e.id + "' has unknown category '" +
                        item["category"].get<std::string>() + "'");
    e.category = *cat;
    if (!item.contains("profile") || !item["profile"].is_object())
      throw SchemaError(label + ": '" + e.id + "' missing 'profile'");
    for (const auto& [key, value] : item["profile"].items()) {
      auto action = parse_action(key);
      if (!action) throw SchemaError(label + ": '" + e.id + "' unknown action '" + key + "'");
      if (!value.is_string())
        throw SchemaError(label + ": '" + e.id + "' status for '" + key + "' must be a string");
      auto status = parse_status(value.get<std::string>());
      if (!status)
        throw SchemaError(label + ": '" + e.id + "' has unknown status '" +
                          value.get<std::string>() + "'");
      e.profile.set(*action, *status);
    }
    if (item.contains("frequency_weight")) {
      if (!item["frequency_weight"].is_number_unsigned())
        throw SchemaError(label + ": '" + e.id + "' frequency_weight must be non-negative");
      e.frequency_weight = item["frequency_weight"].get<std::uint64_t>();
    }
    if (item.contains("cc_family")) {
      const auto& f = item["cc_family"];
      if (!f.is_object() || !f.contains("family") || !f["family"].is_string())
        throw SchemaError(label + ": '" + e.id + "' malformed cc_family");
      CcFamily fam;
      fam.family = f["family"].get<std::string>();
      if (f.contains("version")) fam.version = f["version"].get<std::string>();
      e.cc_family = std::move(fam);
    }
    if (item.contains("whitelisted")) {
      if (!item["whitelisted"].is_boolean())
        throw SchemaError(label + ": '" + e.id + "' whitelisted must be a boolean");
      e.whitelisted = item["whitelisted"].get<bool>();
    }
    return e;
  }

  void add_key(const std::string& tag, std::size_t index) {
    std::string key = canonical_tag_key(tag);
    if (key.empty()) throw SchemaError("catalog entry '" + entries_[index].id + "' has an empty alias");
    auto [it, inserted] = by_key_.emplace(key, index);
    if (!inserted && it->second != index)
      throw DuplicateAliasError(tag, entries_[it->second].id, entries_[index].id);
  }

  std::vector<CatalogEntry> entries_;
  std::unordered_map<std::string, std::size_t> by_key_;
};

}  // namespace licenserec
