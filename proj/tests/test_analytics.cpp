// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch.hpp>

#include "licenserec/analytics.hpp"
#include "support/builders.hpp"
#include "support/paths.hpp"
#include "support/tmpdir.hpp"

using namespace licenserec;
using testsupport::ChainSpec;
using testsupport::build_graph;

namespace {

const Catalog& cat() { return testsupport::default_catalog(); }
const CompatibilityMatrix& mx() { return testsupport::default_matrix(); }

// Drift scenario with pinned per-category retention shares.
LineageGraph retention_fixture_dataset_model() {
  return build_graph({
      {Stage::DatasetToModel, 24, {"CC-BY-4.0"}, "MIT", "p-keep"},
      {Stage::DatasetToModel, 5, {"MIT"}, "GPL-3.0-only", "p-cl"},
      {Stage::DatasetToModel, 6, {"CC-BY-NC-4.0"}, "CC-BY-NC-3.0", "nc-keep"},
      {Stage::DatasetToModel, 23, {"CC-BY-NC-4.0"}, "MIT", "nc-p"},
      {Stage::DatasetToModel, 2, {"CC-BY-SA-4.0"}, "MPL-2.0", "sa-keep"},
      {Stage::DatasetToModel, 49, {"CC-BY-SA-4.0"}, "MIT", "sa-p"},
  });
}

LineageGraph retention_fixture_model_repo() {
  return build_graph({
      {Stage::ModelToRepository, 57, {"Apache-2.0"}, "MIT", "p-keep"},
      {Stage::ModelToRepository, 5, {"MIT"}, "GPL-3.0-only", "p-cl"},
      {Stage::ModelToRepository, 19, {"GPL-3.0-only"}, "AGPL-3.0-only", "cl-keep"},
      {Stage::ModelToRepository, 56, {"GPL-3.0-only"}, "MIT", "cl-p"},
      {Stage::ModelToRepository, 1, {"CreativeML-OpenRAIL-M"}, "OpenRAIL-M", "ml-keep"},
      {Stage::ModelToRepository, 249, {"CreativeML-OpenRAIL-M"}, "MIT", "ml-p"},
      {Stage::ModelToRepository, 2, {"CC-BY-NC-4.0"}, "CC-BY-NC-3.0", "nc-keep"},
      {Stage::ModelToRepository, 28, {"CC-BY-NC-4.0"}, "MIT", "nc-p"},
  });
}

}  // namespace

TEST_CASE("transition counts and retention on a trivial fixture") {
  LineageGraph g = build_graph({
      {Stage::ModelToRepository, 5, {"MIT"}, "Apache-2.0", "pp"},
      {Stage::ModelToRepository, 5, {"OpenRAIL-M"}, "MIT", "mlp"},
  });
  TransitionMatrix tm = transition_matrix(g, Stage::ModelToRepository, mx(), cat());
  CHECK(tm.cell(Category::Permissive, Category::Permissive) == 5);
  CHECK(tm.cell(Category::MlLicense, Category::Permissive) == 5);
  CHECK(tm.total() == 10);
  CHECK(tm.retention.at("PERMISSIVE") == Approx(100.0));
  CHECK(tm.retention.at("ML_LICENSE") == Approx(0.0));
}

TEST_CASE("retention rates match the drift-scenario shares") {
  TransitionMatrix dm = transition_matrix(retention_fixture_dataset_model(), Stage::DatasetToModel, mx(), cat());
  CHECK(round_half_up(dm.retention.at("PERMISSIVE"), 1) == Approx(82.8));
  CHECK(round_half_up(dm.retention.at("NC"), 1) == Approx(20.7));
  CHECK(round_half_up(dm.retention.at("SHARE_ALIKE"), 1) == Approx(3.9));

  TransitionMatrix mr = transition_matrix(retention_fixture_model_repo(), Stage::ModelToRepository, mx(), cat());
  CHECK(round_half_up(mr.retention.at("PERMISSIVE"), 1) == Approx(91.9));
  CHECK(round_half_up(mr.retention.at("COPYLEFT"), 1) == Approx(25.3));
  CHECK(round_half_up(mr.retention.at("ML_LICENSE"), 1) == Approx(0.4));
  CHECK(round_half_up(mr.retention.at("NC"), 1) == Approx(6.7));
}

TEST_CASE("transition totals equal the stage link count") {
  LineageGraph g = testsupport::audit_fixture_dataset_model();
  TransitionMatrix tm = transition_matrix(g, Stage::DatasetToModel, mx(), cat());
  CHECK(tm.total() == g.edges(Stage::DatasetToModel).size());
}

TEST_CASE("multi-license downstream counts its best-case category once") {
  LineageGraph g;
  ArtifactNode model;
  model.id = "m/sa";
  model.kind = ArtifactKind::Model;
  model.licenses.push_back({"CC-BY-SA-4.0", "tag"});
  g.add_node(std::move(model));
  ArtifactNode repo;
  repo.id = "r/dual";
  repo.kind = ArtifactKind::Repository;
  repo.licenses.push_back({"MIT", "LICENSE"});
  repo.licenses.push_back({"MPL-2.0", "LICENSE.alt"});
  g.add_node(std::move(repo));
  g.add_edge({{ArtifactKind::Model, "m/sa"},
              {ArtifactKind::Repository, "r/dual"},
              Stage::ModelToRepository,
              false,
              "t"});
  g.canonicalize();
  TransitionMatrix tm = transition_matrix(g, Stage::ModelToRepository, mx(), cat());
  CHECK(tm.total() == 1);
  // MPL-2.0 is the compatible basis, so the link lands on SA -> SA
  CHECK(tm.cell(Category::ShareAlike, Category::ShareAlike) == 1);

  TransitionMatrix per_pair = transition_matrix(g, Stage::ModelToRepository, mx(), cat(),
                                                TransitionCounting::PerPair);
  CHECK(per_pair.total() == 2);
}

TEST_CASE("violation pattern tables rank by count") {
  LineageGraph g = testsupport::audit_fixture_dataset_model();
  ViolationReport r = detect_conflicts(g, Stage::DatasetToModel, mx(), cat());
  ViolationPatternTable t = violation_patterns(r, cat());
  REQUIRE_FALSE(t.rows.empty());
  CHECK(t.rows[0].upstream == Category::ShareAlike);
  CHECK(t.rows[0].downstream == Category::Permissive);
  CHECK(round_half_up(t.rows[0].pct, 1) == Approx(37.4));
  std::uint64_t sum = 0;
  for (const auto& row : t.rows) {
    sum += row.count;
    CHECK(row.count <= t.rows[0].count);
  }
  CHECK(sum == r.violations);

  ViolationReport empty =
      detect_conflicts(build_graph({{Stage::DatasetToModel, 3, {"MIT"}, "MIT", "ok"}}),
                       Stage::DatasetToModel, mx(), cat());
  ViolationPatternTable empty_table = violation_patterns(empty, cat());
  CHECK(empty_table.rows.empty());
  CHECK(empty_table.violations == 0);
}

TEST_CASE("category distribution uses occurrence semantics") {
  std::vector<ChainSpec> specs;
  auto repos = [&](std::size_t n, const std::string& lic, const std::string& prefix) {
    // isolated repository nodes via unlicensed models
    specs.push_back({Stage::ModelToRepository, n, {""}, lic, prefix});
  };
  repos(465, "MIT", "p");
  repos(32, "GPL-3.0-only", "cl");
  repos(1, "OpenRAIL-M", "ml");
  repos(2, "MPL-2.0", "sa");
  repos(4, "CC0-1.0", "pd");
  repos(5, "CC-BY-NC-4.0", "nc");
  repos(3, "CC-BY-NC-SA-4.0", "ncsa");
  repos(1, "CC-BY-NC-ND-4.0", "ncnd");
  LineageGraph g = build_graph(specs);
  auto dist = category_distribution(g, cat());
  const auto& repo_shares = dist.at("repository");
  std::uint64_t total = 0;
  for (const auto& [code, share] : repo_shares) total += share.count;
  CHECK(total == 513);
  CHECK(repo_shares.at("PERMISSIVE").count == 465);
  CHECK(round_half_up(repo_shares.at("PERMISSIVE").pct, 1) == Approx(90.6));

  // one node holding two licenses yields two occurrences
  LineageGraph dual;
  ArtifactNode repo;
  repo.id = "r/two";
  repo.kind = ArtifactKind::Repository;
  repo.licenses.push_back({"MIT", "a"});
  repo.licenses.push_back({"GPL-3.0-only", "b"});
  dual.add_node(std::move(repo));
  auto dual_dist = category_distribution(dual, cat());
  std::uint64_t dual_total = 0;
  for (const auto& [code, share] : dual_dist.at("repository")) dual_total += share.count;
  CHECK(dual_total == 2);
}

TEST_CASE("matrix comparison separates ML-aware from ML-blind rules") {
  LineageGraph g = testsupport::all_ml_to_permissive();
  auto cols = compare_matrices(g, {&mx(), &testsupport::eu_jla_matrix()}, cat());
  REQUIRE(cols.size() == 2);
  auto mr = std::string(stage_code(Stage::ModelToRepository));
  REQUIRE(cols[0].stage_rates.at(mr).has_value());
  CHECK(*cols[0].stage_rates.at(mr) == Approx(1.0));
  REQUIRE(cols[1].stage_rates.at(mr).has_value());
  CHECK(*cols[1].stage_rates.at(mr) == Approx(0.0));

  // same matrix twice: identical columns
  auto twice = compare_matrices(g, {&mx(), &mx()}, cat());
  CHECK(comparison_to_json({twice[0]}) == comparison_to_json({twice[1]}));

  LineageGraph empty;
  auto null_cols = compare_matrices(empty, {&mx()}, cat());
  for (const auto& [stage, rate] : null_cols[0].stage_rates) CHECK_FALSE(rate.has_value());
}

TEST_CASE("sankey export") {
  testsupport::TempDir tmp("sankey");
  LineageGraph g = build_graph({
      {Stage::ModelToRepository, 3, {"MIT"}, "Apache-2.0", "pp"},
      {Stage::ModelToRepository, 2, {"OpenRAIL-M"}, "MIT", "mlp"},
  });
  TransitionMatrix tm = transition_matrix(g, Stage::ModelToRepository, mx(), cat());
  export_sankey(tm, tmp.path / "flows.csv");
  std::string csv = read_text_file(tmp.path / "flows.csv");
  CHECK(csv == "source_category,target_category,count\n"
               "PERMISSIVE,PERMISSIVE,3\n"
               "ML_LICENSE,PERMISSIVE,2\n");

  TransitionMatrix empty;
  export_sankey(empty, tmp.path / "empty.csv");
  CHECK(read_text_file(tmp.path / "empty.csv") == "source_category,target_category,count\n");
}

TEST_CASE("the ML to permissive flow dominates the model-repo off-diagonal") {
  TransitionMatrix mr = transition_matrix(retention_fixture_model_repo(), Stage::ModelToRepository, mx(), cat());
  std::uint64_t ml_p = mr.cell(Category::MlLicense, Category::Permissive);
  for (Category u : kAllCategories)
    for (Category d : kAllCategories)
      if (u != d) CHECK(mr.cell(u, d) <= ml_p);
}
