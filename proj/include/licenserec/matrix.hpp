// SPDX-License-Identifier: Apache-2.0
//
// Directional compatibility rulings: may a work under the downstream
// license incorporate or derive from a work under the upstream license?
// Rule sources in lookup order: explicit id pair, category default,
// clause-profile derivation. Identical known ids are always compatible.
#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "licenserec/catalog.hpp"
#include "licenserec/errors.hpp"
#include "licenserec/io.hpp"
#include "licenserec/text.hpp"

namespace licenserec {

enum class VerdictKind { Compatible, Incompatible, ConditionalOnTermsPreservation, Unknown };

inline std::string_view verdict_kind_code(VerdictKind k) {
  switch (k) {
    case VerdictKind::Compatible: return "compatible";
    case VerdictKind::Incompatible: return "incompatible";
    case VerdictKind::ConditionalOnTermsPreservation: return "conditional_on_terms_preservation";
    case VerdictKind::Unknown: return "unknown";
  }
  return "unknown";
}

inline std::optional<VerdictKind> parse_verdict_kind(std::string_view code) {
  if (code == "compatible") return VerdictKind::Compatible;
  if (code == "incompatible") return VerdictKind::Incompatible;
  if (code == "conditional_on_terms_preservation")
    return VerdictKind::ConditionalOnTermsPreservation;
  if (code == "unknown") return VerdictKind::Unknown;
  return std::nullopt;
}

enum class VerdictSource { ExplicitMatrix, CategoryDefault, ClauseDerivation };

inline std::string_view verdict_source_code(VerdictSource s) {
  switch (s) {
    case VerdictSource::ExplicitMatrix: return "explicit_matrix";
    case VerdictSource::CategoryDefault: return "category_default";
    case VerdictSource::ClauseDerivation: return "clause_derivation";
  }
  return "category_default";
}

struct Verdict {
  VerdictKind kind = VerdictKind::Unknown;
  std::string reason;  // short machine-readable code
  VerdictSource source = VerdictSource::CategoryDefault;
};

// Downstream evaluation context for one lineage edge.
struct EdgeContext {
  bool terms_preserved = false;
};

class CompatibilityMatrix {
 public:
  static CompatibilityMatrix load(const std::filesystem::path& path) {
    return from_json(load_json_file(path), path.string());
  }

  static CompatibilityMatrix from_json(const nlohmann::json& doc, const std::string& label) {
    if (!doc.is_object()) throw SchemaError(label + ": matrix root must be an object");
    CompatibilityMatrix m;
    if (doc.contains("name") && doc["name"].is_string()) m.name_ = doc["name"].get<std::string>();
    if (!doc.contains("category_defaults") || !doc["category_defaults"].is_object())
      throw SchemaError(label + ": missing 'category_defaults'");
    const auto& defaults = doc["category_defaults"];
    for (Category u : kKnownCategories) {
      std::string ucode(category_code(u));
      if (!defaults.contains(ucode))
        throw MissingCategoryPairError(ucode, std::string(category_code(kKnownCategories[0])));
      const auto& row = defaults[ucode];
      if (!row.is_object()) throw SchemaError(label + ": row '" + ucode + "' must be an object");
      for (Category d : kKnownCategories) {
        std::string dcode(category_code(d));
        if (!row.contains(dcode)) throw MissingCategoryPairError(ucode, dcode);
        if (!row[dcode].is_string())
          throw SchemaError(label + ": kind for (" + ucode + ", " + dcode + ") must be a string");
        auto kind = parse_verdict_kind(row[dcode].get<std::string>());
        if (!kind)
          throw SchemaError(label + ": unknown verdict kind '" + row[dcode].get<std::string>() +
                            "' for (" + ucode + ", " + dcode + ")");
        m.defaults_[index(u)][index(d)] = *kind;
      }
    }
    if (doc.contains("explicit")) {
      if (!doc["explicit"].is_array()) throw SchemaError(label + ": 'explicit' must be an array");
      for (const auto& item : doc["explicit"]) {
        if (!item.is_object() || !item.contains("u") || !item.contains("d") ||
            !item.contains("kind"))
          throw SchemaError(label + ": explicit entries need 'u', 'd' and 'kind'");
        auto kind = parse_verdict_kind(item["kind"].get<std::string>());
        if (!kind)
          throw SchemaError(label + ": unknown verdict kind '" +
                            item["kind"].get<std::string>() + "' in explicit entry");
        m.explicit_[{canonical_tag_key(item["u"].get<std::string>()),
                     canonical_tag_key(item["d"].get<std::string>())}] = *kind;
      }
    }
    return m;
  }

  const std::string& name() const { return name_; }

  VerdictKind category_default(Category u, Category d) const {
    return defaults_[index(u)][index(d)];
  }

  std::optional<VerdictKind> explicit_kind(std::string_view u, std::string_view d) const {
    auto it = explicit_.find({canonical_tag_key(u), canonical_tag_key(d)});
    if (it == explicit_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t explicit_size() const { return explicit_.size(); }

 private:
  static std::size_t index(Category c) { return static_cast<std::size_t>(c); }

  std::string name_;
  std::array<std::array<VerdictKind, 9>, 9> defaults_{};
  std::map<std::pair<std::string, std::string>, VerdictKind> explicit_;
};

// A conditional ruling resolves through the edge context; the conditional
// origin stays visible in the reason code.
inline Verdict resolve_conditional(Verdict v, const EdgeContext& ctx) {
  if (v.kind != VerdictKind::ConditionalOnTermsPreservation) return v;
  if (ctx.terms_preserved) {
    v.kind = VerdictKind::Compatible;
    v.reason = "conditional_terms_preserved";
  } else {
    v.kind = VerdictKind::Incompatible;
    v.reason = "ml_terms_not_preserved";
  }
  return v;
}

// Clause-level fallback: a Duty upstream that the downstream Prohibits, or
// an upstream Prohibition the downstream affirmatively grants to everyone,
// is a contradiction. A bare duty to pass license terms along makes the
// pair conditional.
inline Verdict derive_fallback_verdict(const ClauseProfile& upstream,
                                       const ClauseProfile& downstream) {
  if (upstream.all_silent() || downstream.all_silent())
    return {VerdictKind::Unknown, "silent_profile", VerdictSource::ClauseDerivation};
  for (ClauseAction a : kClauseActions) {
    ClauseStatus us = upstream.status(a), ds = downstream.status(a);
    if (us == ClauseStatus::Duty && ds == ClauseStatus::Prohibition)
      return {VerdictKind::Incompatible,
              "duty_vs_prohibition:" + std::string(action_code(a)),
              VerdictSource::ClauseDerivation};
    if (us == ClauseStatus::Prohibition && ds == ClauseStatus::Permission)
      return {VerdictKind::Incompatible,
              "grant_contradiction:" + std::string(action_code(a)),
              VerdictSource::ClauseDerivation};
  }
  if (upstream.status(ClauseAction::IncludeLicenseTerms) == ClauseStatus::Duty)
    return {VerdictKind::ConditionalOnTermsPreservation, "terms_preservation_required",
            VerdictSource::ClauseDerivation};
  return {VerdictKind::Compatible, "no_contradiction", VerdictSource::ClauseDerivation};
}

inline Verdict verdict(const CompatibilityMatrix& matrix, const Catalog& catalog,
                       std::string_view upstream, std::string_view downstream,
                       const EdgeContext& ctx = {}) {
  const CatalogEntry* u = catalog.find(upstream);
  const CatalogEntry* d = catalog.find(downstream);
  if (u && d && u == d)
    return {VerdictKind::Compatible, "identical_license", VerdictSource::ExplicitMatrix};
  if (u && d) {
    if (auto kind = matrix.explicit_kind(u->id, d->id))
      return resolve_conditional({*kind, "explicit_pair", VerdictSource::ExplicitMatrix}, ctx);
    if (u->category != Category::Unknown && d->category != Category::Unknown) {
      VerdictKind kind = matrix.category_default(u->category, d->category);
      return resolve_conditional({kind, "category_rule", VerdictSource::CategoryDefault}, ctx);
    }
  }
  ClauseProfile up = u ? u->profile : ClauseProfile{};
  ClauseProfile dp = d ? d->profile : ClauseProfile{};
  return resolve_conditional(derive_fallback_verdict(up, dp), ctx);
}

struct CompatibleSet {
  std::vector<std::string> ids;  // catalog ids, sorted case-insensitively
  bool unknown_upstream = false;
};

// All catalog licenses the downstream side may adopt against this upstream.
inline CompatibleSet compatible_set(const CompatibilityMatrix& matrix, const Catalog& catalog,
                                    std::string_view upstream, const EdgeContext& ctx = {}) {
  CompatibleSet out;
  out.unknown_upstream = !catalog.is_known(upstream);
  if (out.unknown_upstream) return out;
  for (const CatalogEntry& entry : catalog.entries()) {
    if (verdict(matrix, catalog, upstream, entry.id, ctx).kind == VerdictKind::Compatible)
      out.ids.push_back(entry.id);
  }
  return out;
}

}  // namespace licenserec
