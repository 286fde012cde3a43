// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch.hpp>

#include "licenserec/catalog.hpp"
#include "support/paths.hpp"

using namespace licenserec;

TEST_CASE("bundled catalog loads with expected coverage") {
  const Catalog& cat = testsupport::default_catalog();
  CHECK(cat.size() >= 190);
  CHECK(cat.check_coherence().empty());
}

TEST_CASE("duplicate aliases across entries are rejected") {
  nlohmann::json doc = nlohmann::json::array();
  nlohmann::json profile;
  for (ClauseAction a : kClauseActions) profile[std::string(action_code(a))] = "silent";
  doc.push_back({{"id", "One"},
                 {"aliases", {"mit"}},
                 {"category", "UNKNOWN"},
                 {"profile", profile}});
  doc.push_back({{"id", "Two"},
                 {"aliases", {"MIT"}},
                 {"category", "UNKNOWN"},
                 {"profile", profile}});
  CHECK_THROWS_AS(Catalog::from_json(doc, "dup"), DuplicateAliasError);
}

TEST_CASE("empty or malformed files raise SchemaError") {
  CHECK_THROWS_AS(Catalog::from_json(nlohmann::json::array(), "empty"), SchemaError);
  CHECK_THROWS_AS(Catalog::from_json(nlohmann::json::object(), "obj"), SchemaError);
  nlohmann::json bad_cat = nlohmann::json::array();
  bad_cat.push_back({{"id", "X"}, {"category", "SHINY"}, {"profile", nlohmann::json::object()}});
  CHECK_THROWS_AS(Catalog::from_json(bad_cat, "badcat"), SchemaError);
}

TEST_CASE("tag normalization is case-insensitive and punctuation tolerant") {
  const Catalog& cat = testsupport::default_catalog();
  CHECK(cat.normalize_license_tag("apache-2.0") == "Apache-2.0");
  CHECK(cat.normalize_license_tag("Apache 2.0") == "Apache-2.0");
  CHECK(cat.normalize_license_tag("APACHE_2.0") == "Apache-2.0");
  CHECK(cat.normalize_license_tag("mit") == "MIT");
  CHECK(cat.normalize_license_tag("bsd") == "BSD-3-Clause");
  CHECK(cat.normalize_license_tag("gpl-2.0+") == "GPL-2.0-or-later");
  CHECK(cat.normalize_license_tag(" my-custom-eula ") == "my-custom-eula");
}

TEST_CASE("openrail tags land in the ML family") {
  const Catalog& cat = testsupport::default_catalog();
  const CatalogEntry* e = cat.find("openrail");
  REQUIRE(e != nullptr);
  CHECK(e->category == Category::MlLicense);
  CHECK(cat.categorize("creativeml-openrail-m") == Category::MlLicense);
  CHECK(cat.categorize("llama2") == Category::MlLicense);
}

TEST_CASE("categorize follows the category table") {
  const Catalog& cat = testsupport::default_catalog();
  CHECK(cat.categorize("MIT") == Category::Permissive);
  CHECK(cat.categorize("CC-BY-NC-SA-4.0") == Category::NcSa);
  CHECK(cat.categorize("CC0-1.0") == Category::PublicDomain);
  CHECK(cat.categorize("GPL-3.0-only") == Category::Copyleft);
  CHECK(cat.categorize("LGPL-3.0-only") == Category::ShareAlike);
  CHECK(cat.categorize("CC-BY-ND-4.0") == Category::Nd);
  CHECK(cat.categorize("make-believe-license") == Category::Unknown);
}

TEST_CASE("clause profiles match the transcribed obligations") {
  const Catalog& cat = testsupport::default_catalog();
  ClauseProfile gpl = cat.clause_profile("GPL-3.0-only");
  CHECK(gpl.status(ClauseAction::ShareAlikeSameTerms) == ClauseStatus::Duty);
  CHECK(gpl.status(ClauseAction::DiscloseSource) == ClauseStatus::Duty);
  CHECK(gpl.status(ClauseAction::CommercialUse) == ClauseStatus::Permission);

  ClauseProfile nc = cat.clause_profile("CC-BY-NC-4.0");
  CHECK(nc.status(ClauseAction::CommercialUse) == ClauseStatus::Prohibition);
  CHECK(nc.status(ClauseAction::Attribution) == ClauseStatus::Duty);

  CHECK(cat.clause_profile("no-such-license").all_silent());
}

TEST_CASE("normalize_license_tag is idempotent on canonical ids") {
  const Catalog& cat = testsupport::default_catalog();
  for (const CatalogEntry& e : cat.entries()) {
    CHECK(cat.normalize_license_tag(e.id) == e.id);
    CHECK(cat.normalize_license_tag(cat.normalize_license_tag(e.id)) == e.id);
  }
  std::string unknown = cat.normalize_license_tag("Weird Tag 99");
  CHECK(cat.normalize_license_tag(unknown) == unknown);
}

TEST_CASE("cc_family is present exactly on Creative Commons ids") {
  const Catalog& cat = testsupport::default_catalog();
  for (const CatalogEntry& e : cat.entries()) {
    std::string low = lower_copy(e.id);
    bool is_cc = low.starts_with("cc-") || low.starts_with("cc0");
    CHECK(is_cc == e.cc_family.has_value());
  }
  const CatalogEntry* by = cat.find("CC-BY-SA-4.0");
  REQUIRE(by != nullptr);
  REQUIRE(by->cc_family.has_value());
  CHECK(by->cc_family->family == "CC-BY-SA");
  CHECK(by->cc_family->version == "4.0");
}

TEST_CASE("default whitelist covers OSI, CC 4.0 and the ML family") {
  const Catalog& cat = testsupport::default_catalog();
  auto wl = cat.default_whitelist();
  CHECK(wl.count("MIT"));
  CHECK(wl.count("CC-BY-NC-4.0"));
  CHECK(wl.count("CreativeML-OpenRAIL-M"));
  CHECK_FALSE(wl.count("CC-BY-NC-ND-3.0"));
  CHECK_FALSE(wl.count("WTFPL"));
}
