// SPDX-License-Identifier: Apache-2.0
//
// Brute-force oracles, kept independent of the engine code paths they
// check: verdict resolution and the recommend pipeline are re-derived here
// straight from the raw matrix data and clause profiles.
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "licenserec/catalog.hpp"
#include "licenserec/matrix.hpp"

namespace testsupport {

using licenserec::Catalog;
using licenserec::CatalogEntry;
using licenserec::Category;
using licenserec::ClauseAction;
using licenserec::ClauseProfile;
using licenserec::ClauseStatus;
using licenserec::CompatibilityMatrix;
using licenserec::ILess;
using licenserec::VerdictKind;

inline VerdictKind oracle_resolve(VerdictKind kind, bool terms_preserved) {
  if (kind != VerdictKind::ConditionalOnTermsPreservation) return kind;
  return terms_preserved ? VerdictKind::Compatible : VerdictKind::Incompatible;
}

inline VerdictKind oracle_derive(const ClauseProfile& up, const ClauseProfile& down) {
  if (up.all_silent() || down.all_silent()) return VerdictKind::Unknown;
  for (ClauseAction a : licenserec::kClauseActions) {
    if (up.status(a) == ClauseStatus::Duty && down.status(a) == ClauseStatus::Prohibition)
      return VerdictKind::Incompatible;
    if (up.status(a) == ClauseStatus::Prohibition && down.status(a) == ClauseStatus::Permission)
      return VerdictKind::Incompatible;
  }
  if (up.status(ClauseAction::IncludeLicenseTerms) == ClauseStatus::Duty)
    return VerdictKind::ConditionalOnTermsPreservation;
  return VerdictKind::Compatible;
}

inline VerdictKind oracle_verdict(const CompatibilityMatrix& matrix, const Catalog& catalog,
                                  const std::string& u, const std::string& d,
                                  bool terms_preserved) {
  const CatalogEntry* ue = catalog.find(u);
  const CatalogEntry* de = catalog.find(d);
  if (ue && de && ue == de) return VerdictKind::Compatible;
  if (ue && de) {
    if (auto kind = matrix.explicit_kind(ue->id, de->id))
      return oracle_resolve(*kind, terms_preserved);
    if (ue->category != Category::Unknown && de->category != Category::Unknown)
      return oracle_resolve(matrix.category_default(ue->category, de->category),
                            terms_preserved);
  }
  return oracle_resolve(
      oracle_derive(ue ? ue->profile : ClauseProfile{}, de ? de->profile : ClauseProfile{}),
      terms_preserved);
}

struct OracleRecommendation {
  bool resolvable = false;
  std::map<std::string, std::vector<std::string>> categories;
};

// filter -> whitelist -> CC dedup -> rank -> cut-5
inline OracleRecommendation oracle_recommend(
    const Catalog& catalog, const CompatibilityMatrix& matrix,
    const std::vector<std::string>& upstream,
    const std::optional<std::set<std::string, ILess>>& whitelist_opt, bool terms_preserved,
    std::size_t limit = 5) {
  OracleRecommendation out;
  std::vector<const CatalogEntry*> survivors;
  for (const CatalogEntry& e : catalog.entries()) {
    bool ok = true;
    for (const std::string& u : upstream) {
      if (!catalog.is_known(u) ||
          oracle_verdict(matrix, catalog, u, e.id, terms_preserved) !=
              VerdictKind::Compatible) {
        ok = false;
        break;
      }
    }
    if (ok) survivors.push_back(&e);
  }
  if (survivors.empty()) return out;
  out.resolvable = true;

  std::set<std::string, ILess> whitelist =
      whitelist_opt ? *whitelist_opt : catalog.default_whitelist();
  std::vector<const CatalogEntry*> kept;
  for (const CatalogEntry* e : survivors)
    if (whitelist.count(e->id)) kept.push_back(e);

  std::set<std::string> has40;
  for (const CatalogEntry* e : kept)
    if (e->cc_family && e->cc_family->version == "4.0") has40.insert(e->cc_family->family);
  std::vector<const CatalogEntry*> deduped;
  for (const CatalogEntry* e : kept) {
    if (e->cc_family && e->cc_family->version != "4.0" && has40.count(e->cc_family->family))
      continue;
    deduped.push_back(e);
  }

  std::map<std::string, std::vector<const CatalogEntry*>> grouped;
  for (const CatalogEntry* e : deduped)
    grouped[std::string(licenserec::category_code(e->category))].push_back(e);
  for (auto& [cat, entries] : grouped) {
    std::sort(entries.begin(), entries.end(), [](const CatalogEntry* a, const CatalogEntry* b) {
      if (a->frequency_weight != b->frequency_weight)
        return a->frequency_weight > b->frequency_weight;
      return ILess{}(a->id, b->id);
    });
    auto& ids = out.categories[cat];
    for (std::size_t i = 0; i < entries.size() && i < limit; ++i)
      ids.push_back(entries[i]->id);
  }
  return out;
}

}  // namespace testsupport
