// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch.hpp>

#include <algorithm>

#include "licenserec/matrix.hpp"
#include "support/oracles.hpp"
#include "support/paths.hpp"

using namespace licenserec;

namespace {

int severity(VerdictKind k) {
  return k == VerdictKind::Compatible ? 0 : k == VerdictKind::Incompatible ? 1 : -1;
}

}  // namespace

TEST_CASE("bundled matrices load with total category defaults") {
  CHECK(testsupport::default_matrix().name() == "licenserec-default");
  CHECK(testsupport::eu_jla_matrix().name() == "eu-jla-style");
  CHECK(testsupport::peatmoss_matrix().name() == "peatmoss-style");
  // eu-jla file carries no ML rules beyond the permissive fallback row
  for (Category d : kKnownCategories)
    CHECK(testsupport::eu_jla_matrix().category_default(Category::MlLicense, d) ==
          VerdictKind::Compatible);
}

TEST_CASE("a missing category pair is rejected at load") {
  nlohmann::json doc = load_json_file(testsupport::data_dir() / "matrix-licenserec-default.json");
  doc["category_defaults"]["ML_LICENSE"].erase("PERMISSIVE");
  CHECK_THROWS_AS(CompatibilityMatrix::from_json(doc, "broken"), MissingCategoryPairError);
  doc["category_defaults"].erase("ML_LICENSE");
  CHECK_THROWS_AS(CompatibilityMatrix::from_json(doc, "broken"), MissingCategoryPairError);
}

TEST_CASE("verdict examples from the category rules") {
  const Catalog& cat = testsupport::default_catalog();
  const CompatibilityMatrix& m = testsupport::default_matrix();

  CHECK(verdict(m, cat, "CC-BY-NC-4.0", "MIT").kind == VerdictKind::Incompatible);
  CHECK(verdict(m, cat, "MIT", "CC0-1.0").kind == VerdictKind::Incompatible);
  CHECK(verdict(m, cat, "MIT", "MIT").kind == VerdictKind::Compatible);
  CHECK(verdict(m, cat, "mit", "MIT").kind == VerdictKind::Compatible);

  EdgeContext not_preserved{false}, preserved{true};
  Verdict v1 = verdict(m, cat, "OpenRAIL-M", "Apache-2.0", not_preserved);
  CHECK(v1.kind == VerdictKind::Incompatible);
  CHECK(v1.reason == "ml_terms_not_preserved");
  Verdict v2 = verdict(m, cat, "OpenRAIL-M", "Apache-2.0", preserved);
  CHECK(v2.kind == VerdictKind::Compatible);
  CHECK(v2.reason == "conditional_terms_preserved");
}

TEST_CASE("explicit pairs override category defaults") {
  const Catalog& cat = testsupport::default_catalog();
  const CompatibilityMatrix& m = testsupport::default_matrix();
  // CL->CL would be compatible by default; the explicit OSADL entry wins
  Verdict v = verdict(m, cat, "GPL-2.0-only", "GPL-3.0-only");
  CHECK(v.kind == VerdictKind::Incompatible);
  CHECK(v.source == VerdictSource::ExplicitMatrix);
  // SA->CL default is compatible; CC chart pins 3.0 as one-way incompatible
  CHECK(verdict(m, cat, "CC-BY-SA-3.0", "GPL-3.0-only").kind == VerdictKind::Incompatible);
  CHECK(verdict(m, cat, "CC-BY-SA-4.0", "GPL-3.0-only").kind == VerdictKind::Compatible);
}

TEST_CASE("clause derivation fallback") {
  const Catalog& cat = testsupport::default_catalog();
  ClauseProfile nc = cat.clause_profile("CC-BY-NC-4.0");
  ClauseProfile mit = cat.clause_profile("MIT");
  Verdict v = derive_fallback_verdict(nc, mit);
  CHECK(v.kind == VerdictKind::Incompatible);
  CHECK(v.reason == "grant_contradiction:commercial_use");

  ClauseProfile gpl = cat.clause_profile("GPL-3.0-only");
  ClauseProfile relicense_prohibits_sharing;
  relicense_prohibits_sharing.set(ClauseAction::ShareAlikeSameTerms, ClauseStatus::Prohibition);
  relicense_prohibits_sharing.set(ClauseAction::RelicensePermissively, ClauseStatus::Permission);
  CHECK(derive_fallback_verdict(gpl, relicense_prohibits_sharing).kind ==
        VerdictKind::Incompatible);

  CHECK(derive_fallback_verdict(ClauseProfile{}, mit).kind == VerdictKind::Unknown);
  CHECK(derive_fallback_verdict(mit, ClauseProfile{}).kind == VerdictKind::Unknown);
}

TEST_CASE("derivation is consulted only without explicit or category rules") {
  // Elastic-2.0 sits in the UNKNOWN category with a real clause profile,
  // so its rulings must come from derivation.
  const Catalog& cat = testsupport::default_catalog();
  const CompatibilityMatrix& m = testsupport::default_matrix();
  Verdict v = verdict(m, cat, "Elastic-2.0", "MIT");
  CHECK(v.source == VerdictSource::ClauseDerivation);
  CHECK(v.kind == VerdictKind::Incompatible);  // relicensing grant contradiction

  Verdict known = verdict(m, cat, "MIT", "Apache-2.0");
  CHECK(known.source == VerdictSource::CategoryDefault);
}

TEST_CASE("compatible_set: public domain upstream admits the whole catalog") {
  const Catalog& cat = testsupport::default_catalog();
  const CompatibilityMatrix& m = testsupport::default_matrix();
  CompatibleSet cs = compatible_set(m, cat, "CC0-1.0");
  CHECK_FALSE(cs.unknown_upstream);
  // every known-category entry plus identity; UNKNOWN-category entries
  // resolve through derivation and may drop out
  std::size_t known_cat = 0;
  for (const CatalogEntry& e : cat.entries())
    if (e.category != Category::Unknown) ++known_cat;
  CHECK(cs.ids.size() >= known_cat);
}

TEST_CASE("compatible_set: NC upstream admits exactly the NC families") {
  const Catalog& cat = testsupport::default_catalog();
  const CompatibilityMatrix& m = testsupport::default_matrix();
  CompatibleSet cs = compatible_set(m, cat, "CC-BY-NC-4.0");
  REQUIRE_FALSE(cs.ids.empty());
  for (const std::string& id : cs.ids) {
    Category c = cat.categorize(id);
    bool nc_family = c == Category::Nc || c == Category::NcSa || c == Category::NcNd;
    CAPTURE(id);
    CHECK(nc_family);
  }
  // oracle enumeration agrees
  for (const CatalogEntry& e : cat.entries()) {
    bool in = std::binary_search(cs.ids.begin(), cs.ids.end(), e.id, ILess{});
    bool want = testsupport::oracle_verdict(m, cat, "CC-BY-NC-4.0", e.id, false) ==
                VerdictKind::Compatible;
    CAPTURE(e.id);
    CHECK(in == want);
  }
}

TEST_CASE("compatible_set: unknown upstream flags and stays empty") {
  const Catalog& cat = testsupport::default_catalog();
  CompatibleSet cs = compatible_set(testsupport::default_matrix(), cat, "no-such-license");
  CHECK(cs.unknown_upstream);
  CHECK(cs.ids.empty());
}

TEST_CASE("reflexivity holds for every catalog id") {
  const Catalog& cat = testsupport::default_catalog();
  const CompatibilityMatrix& m = testsupport::default_matrix();
  for (const CatalogEntry& e : cat.entries())
    CHECK(verdict(m, cat, e.id, e.id).kind == VerdictKind::Compatible);
}

TEST_CASE("category default rows satisfy the documented row shapes") {
  const CompatibilityMatrix& m = testsupport::default_matrix();
  for (Category d : kKnownCategories) {
    CHECK(m.category_default(Category::PublicDomain, d) == VerdictKind::Compatible);
    CHECK(m.category_default(Category::Permissive, d) ==
          (d == Category::PublicDomain ? VerdictKind::Incompatible : VerdictKind::Compatible));
    if (d != Category::Copyleft)
      CHECK(m.category_default(Category::Copyleft, d) == VerdictKind::Incompatible);
    CHECK(m.category_default(Category::MlLicense, d) ==
          VerdictKind::ConditionalOnTermsPreservation);
    CHECK(m.category_default(Category::Nd, d) == VerdictKind::Incompatible);
    CHECK(m.category_default(Category::NcNd, d) == VerdictKind::Incompatible);
  }
}

TEST_CASE("known category pairs never come back Unknown") {
  const Catalog& cat = testsupport::default_catalog();
  const CompatibilityMatrix& m = testsupport::default_matrix();
  for (const CatalogEntry& u : cat.entries()) {
    if (u.category == Category::Unknown) continue;
    for (const CatalogEntry& d : cat.entries()) {
      if (d.category == Category::Unknown) continue;
      CAPTURE(u.id, d.id);
      CHECK(verdict(m, cat, u.id, d.id).kind != VerdictKind::Unknown);
    }
  }
}

TEST_CASE("fallback derivation never relaxes a category default") {
  // resolved at the default context (terms not preserved)
  const Catalog& cat = testsupport::default_catalog();
  const CompatibilityMatrix& m = testsupport::default_matrix();
  for (const CatalogEntry& u : cat.entries()) {
    if (u.category == Category::Unknown) continue;
    for (const CatalogEntry& d : cat.entries()) {
      if (d.category == Category::Unknown) continue;
      if (&u == &d) continue;
      if (m.explicit_kind(u.id, d.id)) continue;
      VerdictKind def = testsupport::oracle_resolve(m.category_default(u.category, d.category),
                                                    false);
      VerdictKind derived = testsupport::oracle_resolve(
          testsupport::oracle_derive(u.profile, d.profile), false);
      if (derived == VerdictKind::Unknown) continue;
      CAPTURE(u.id, d.id);
      CHECK(severity(derived) >= severity(def));
    }
  }
}
