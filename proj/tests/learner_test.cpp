#include "acer/learner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "acer/util.hpp"
#include "doctest.h"

using namespace acer;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("acer-learner-" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

FeatureVector features_of(double f0, double f1 = 0.0) {
  FeatureVector f{};
  f[0] = f0;
  f[1] = f1;
  return f;
}

TrainingRow make_row(const std::string& qid, CandidateKind kind, double f0, bool label,
                     double f1 = 0.0) {
  TrainingRow row;
  row.query_id = qid;
  row.kind = kind;
  row.features = features_of(f0, f1);
  row.label = label;
  return row;
}

bool same_nodes(const std::vector<TreeNode>& a, const std::vector<TreeNode>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].feature != b[i].feature || a[i].threshold != b[i].threshold ||
        a[i].left != b[i].left || a[i].right != b[i].right ||
        a[i].probability != b[i].probability) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("candidate priority orders msig first, baseline last") {
  CHECK(candidate_priority(CandidateKind::msig) < candidate_priority(CandidateKind::fsig));
  CHECK(candidate_priority(CandidateKind::fsig) < candidate_priority(CandidateKind::comb));
  CHECK(candidate_priority(CandidateKind::comb) < candidate_priority(CandidateKind::baseline));
}

TEST_CASE("tree splits separable data at the midpoint") {
  std::vector<TrainingRow> rows = {
      make_row("q", CandidateKind::msig, 1.0, false),
      make_row("q", CandidateKind::fsig, 2.0, false),
      make_row("q", CandidateKind::comb, 3.0, true),
      make_row("q", CandidateKind::baseline, 4.0, true),
  };
  std::vector<const TrainingRow*> ptrs;
  for (const auto& r : rows) ptrs.push_back(&r);
  DecisionTree tree = DecisionTree::fit(ptrs, TreeConfig{});
  REQUIRE(tree.nodes().size() == 3);
  CHECK(tree.nodes()[0].feature == 0);
  CHECK(tree.nodes()[0].threshold == doctest::Approx(2.5));
  CHECK(tree.predict(features_of(2.0)) == doctest::Approx(0.0));
  CHECK(tree.predict(features_of(2.4999)) == doctest::Approx(0.0));
  CHECK(tree.predict(features_of(2.5)) == doctest::Approx(1.0));
  CHECK(tree.predict(features_of(100.0)) == doctest::Approx(1.0));
}

TEST_CASE("split ties prefer the lowest feature index") {
  std::vector<TrainingRow> rows = {
      make_row("q", CandidateKind::msig, 0.0, false, 0.0),
      make_row("q", CandidateKind::fsig, 0.0, false, 0.0),
      make_row("q", CandidateKind::comb, 1.0, true, 1.0),
      make_row("q", CandidateKind::baseline, 1.0, true, 1.0),
  };
  std::vector<const TrainingRow*> ptrs;
  for (const auto& r : rows) ptrs.push_back(&r);
  DecisionTree tree = DecisionTree::fit(ptrs, TreeConfig{});
  REQUIRE(tree.nodes().size() == 3);
  CHECK(tree.nodes()[0].feature == 0);
}

TEST_CASE("split ties prefer the lowest threshold") {
  TreeConfig config;
  config.min_leaf = 1;
  std::vector<TrainingRow> rows = {
      make_row("q", CandidateKind::msig, 1.0, true),
      make_row("q", CandidateKind::fsig, 2.0, false),
      make_row("q", CandidateKind::comb, 3.0, true),
  };
  std::vector<const TrainingRow*> ptrs;
  for (const auto& r : rows) ptrs.push_back(&r);
  DecisionTree tree = DecisionTree::fit(ptrs, config);
  CHECK(tree.nodes()[0].feature == 0);
  CHECK(tree.nodes()[0].threshold == doctest::Approx(1.5));
}

TEST_CASE("no improving split collapses to a leaf with the positive fraction") {
  std::vector<TrainingRow> rows = {
      make_row("q", CandidateKind::msig, 1.0, true),
      make_row("q", CandidateKind::fsig, 2.0, false),
      make_row("q", CandidateKind::comb, 3.0, false),
      make_row("q", CandidateKind::baseline, 4.0, true),
  };
  std::vector<const TrainingRow*> ptrs;
  for (const auto& r : rows) ptrs.push_back(&r);
  DecisionTree tree = DecisionTree::fit(ptrs, TreeConfig{});
  REQUIRE(tree.nodes().size() == 1);
  CHECK(tree.nodes()[0].feature == -1);
  CHECK(tree.predict(features_of(0.0)) == doctest::Approx(0.5));
}

TEST_CASE("duplicate feature vectors with conflicting labels become a fraction leaf") {
  std::vector<TrainingRow> rows = {
      make_row("q", CandidateKind::msig, 7.0, true),
      make_row("q", CandidateKind::fsig, 7.0, false),
      make_row("q", CandidateKind::comb, 7.0, false),
      make_row("q", CandidateKind::baseline, 7.0, false),
  };
  std::vector<const TrainingRow*> ptrs;
  for (const auto& r : rows) ptrs.push_back(&r);
  DecisionTree tree = DecisionTree::fit(ptrs, TreeConfig{});
  REQUIRE(tree.nodes().size() == 1);
  CHECK(tree.predict(features_of(7.0)) == doctest::Approx(0.25));
}

TEST_CASE("max depth zero forces a single leaf") {
  TreeConfig config;
  config.max_depth = 0;
  std::vector<TrainingRow> rows = {
      make_row("q", CandidateKind::msig, 1.0, false),
      make_row("q", CandidateKind::fsig, 2.0, false),
      make_row("q", CandidateKind::comb, 3.0, true),
      make_row("q", CandidateKind::baseline, 4.0, true),
  };
  std::vector<const TrainingRow*> ptrs;
  for (const auto& r : rows) ptrs.push_back(&r);
  DecisionTree tree = DecisionTree::fit(ptrs, config);
  REQUIRE(tree.nodes().size() == 1);
  CHECK(tree.predict(features_of(4.0)) == doctest::Approx(0.5));
}

TEST_CASE("min leaf blocks splits that would strand a single row") {
  std::vector<TrainingRow> rows = {
      make_row("q", CandidateKind::msig, 1.0, true),
      make_row("q", CandidateKind::fsig, 2.0, false),
      make_row("q", CandidateKind::comb, 3.0, false),
  };
  std::vector<const TrainingRow*> ptrs;
  for (const auto& r : rows) ptrs.push_back(&r);
  DecisionTree tree = DecisionTree::fit(ptrs, TreeConfig{});
  REQUIRE(tree.nodes().size() == 1);
  CHECK(tree.predict(features_of(1.0)) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("fitting the same rows twice grows identical trees") {
  std::vector<TrainingRow> rows;
  std::mt19937_64 rng(20240818);
  for (int i = 0; i < 40; ++i) {
    double f0 = static_cast<double>(rng() % 1000) / 100.0;
    double f1 = static_cast<double>(rng() % 1000) / 100.0;
    bool label = f0 + f1 > 10.0;
    TrainingRow row = make_row("q" + std::to_string(i / 4), CandidateKind::msig, f0, label, f1);
    rows.push_back(row);
  }
  std::vector<const TrainingRow*> ptrs;
  for (const auto& r : rows) ptrs.push_back(&r);
  DecisionTree a = DecisionTree::fit(ptrs, TreeConfig{});
  DecisionTree b = DecisionTree::fit(ptrs, TreeConfig{});
  CHECK(same_nodes(a.nodes(), b.nodes()));
}

TEST_CASE("ensemble bootstrap draws follow the seeded per-tree generators") {
  std::vector<TrainingRow> rows = {
      make_row("q1", CandidateKind::msig, 1.0, true),
      make_row("q1", CandidateKind::fsig, 2.0, false),
      make_row("q1", CandidateKind::comb, 3.0, false),
      make_row("q2", CandidateKind::msig, 4.0, true),
      make_row("q2", CandidateKind::fsig, 5.0, false),
  };
  EnsembleConfig config;
  config.resample_count = 3;
  const uint64_t seed = 99;
  Ensemble ensemble = Ensemble::train(rows, config, seed);
  REQUIRE(ensemble.trees().size() == 3);
  for (int i = 0; i < 3; ++i) {
    std::mt19937_64 rng(seed + 0x9E3779B97F4A7C15ULL * static_cast<uint64_t>(i + 1));
    std::vector<const TrainingRow*> sample;
    for (size_t j = 0; j < rows.size(); ++j) {
      sample.push_back(&rows[static_cast<size_t>(rng() % rows.size())]);
    }
    DecisionTree expected = DecisionTree::fit(sample, config.tree);
    CHECK(same_nodes(ensemble.trees()[static_cast<size_t>(i)].nodes(), expected.nodes()));
  }
}

TEST_CASE("ensemble predictions average the per-tree leaf probabilities") {
  std::vector<TreeNode> leaf_low = {TreeNode{-1, 0.0, -1, -1, 0.2}};
  std::vector<TreeNode> leaf_high = {TreeNode{-1, 0.0, -1, -1, 0.8}};
  std::vector<DecisionTree> trees;
  trees.push_back(DecisionTree::from_nodes(leaf_low));
  trees.push_back(DecisionTree::from_nodes(leaf_high));
  Ensemble ensemble = Ensemble::from_parts(std::move(trees), EnsembleConfig{}, 0);
  CHECK(ensemble.predict(features_of(0.0)) == doctest::Approx(0.5));
}

TEST_CASE("training twice with one seed reproduces the ensemble exactly") {
  std::vector<TrainingRow> rows;
  std::mt19937_64 rng(4242);
  for (int i = 0; i < 24; ++i) {
    double f0 = static_cast<double>(rng() % 100);
    rows.push_back(make_row("q" + std::to_string(i / 4),
                            static_cast<CandidateKind>(i % 4), f0, f0 > 50.0));
  }
  EnsembleConfig config;
  config.resample_count = 10;
  Ensemble a = Ensemble::train(rows, config, 7);
  Ensemble b = Ensemble::train(rows, config, 7);
  REQUIRE(a.trees().size() == b.trees().size());
  for (size_t i = 0; i < a.trees().size(); ++i) {
    CHECK(same_nodes(a.trees()[i].nodes(), b.trees()[i].nodes()));
  }
}

TEST_CASE("default ensemble grows fifty trees") {
  std::vector<TrainingRow> rows = {
      make_row("q", CandidateKind::msig, 1.0, true),
      make_row("q", CandidateKind::fsig, 2.0, false),
      make_row("q", CandidateKind::comb, 3.0, false),
      make_row("q", CandidateKind::baseline, 4.0, false),
  };
  Ensemble ensemble = Ensemble::train(rows, EnsembleConfig{}, 1);
  CHECK(ensemble.trees().size() == 50);
}

TEST_CASE("labeling marks the lowest rank positive") {
  LabeledQuery query;
  query.query_id = "BLUE-123";
  query.candidates = {
      {CandidateKind::msig, features_of(1.0), 2},
      {CandidateKind::fsig, features_of(2.0), 6},
      {CandidateKind::comb, features_of(3.0), 16},
      {CandidateKind::baseline, features_of(4.0), 77},
  };
  LabelReport report;
  std::vector<TrainingRow> rows = label_rows({query}, &report);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].kind == CandidateKind::msig);
  CHECK(rows[0].label);
  CHECK_FALSE(rows[1].label);
  CHECK_FALSE(rows[2].label);
  CHECK_FALSE(rows[3].label);
  CHECK(report.all_none_queries.empty());
  for (const TrainingRow& row : rows) CHECK(row.query_id == "BLUE-123");
}

TEST_CASE("labeling treats a missing rank as worst") {
  LabeledQuery query;
  query.query_id = "q";
  query.candidates = {
      {CandidateKind::msig, features_of(1.0), std::nullopt},
      {CandidateKind::baseline, features_of(2.0), 400},
  };
  std::vector<TrainingRow> rows = label_rows({query});
  CHECK_FALSE(rows[0].label);
  CHECK(rows[1].label);
}

TEST_CASE("labeling breaks rank ties by candidate priority") {
  LabeledQuery query;
  query.query_id = "q";
  query.candidates = {
      {CandidateKind::baseline, features_of(1.0), 3},
      {CandidateKind::comb, features_of(2.0), 3},
      {CandidateKind::fsig, features_of(3.0), 3},
      {CandidateKind::msig, features_of(4.0), 5},
  };
  std::vector<TrainingRow> rows = label_rows({query});
  CHECK_FALSE(rows[0].label);
  CHECK_FALSE(rows[1].label);
  CHECK(rows[2].label);
  CHECK_FALSE(rows[3].label);
}

TEST_CASE("queries with no retrieved result anywhere are flagged and all negative") {
  LabeledQuery query;
  query.query_id = "lost";
  query.candidates = {
      {CandidateKind::msig, features_of(1.0), std::nullopt},
      {CandidateKind::fsig, features_of(2.0), std::nullopt},
      {CandidateKind::comb, features_of(3.0), std::nullopt},
      {CandidateKind::baseline, features_of(4.0), std::nullopt},
  };
  LabelReport report;
  std::vector<TrainingRow> rows = label_rows({query}, &report);
  for (const TrainingRow& row : rows) CHECK_FALSE(row.label);
  REQUIRE(report.all_none_queries.size() == 1);
  CHECK(report.all_none_queries[0] == "lost");
}

TEST_CASE("select_best picks the highest predicted probability") {
  std::vector<TreeNode> nodes = {
      TreeNode{0, 5.0, 1, 2, 0.0},
      TreeNode{-1, 0.0, -1, -1, 0.1},
      TreeNode{-1, 0.0, -1, -1, 0.9},
  };
  Ensemble ensemble =
      Ensemble::from_parts({DecisionTree::from_nodes(nodes)}, EnsembleConfig{}, 0);
  std::vector<SelectionCandidate> candidates = {
      {CandidateKind::msig, {"alpha"}, features_of(1.0)},
      {CandidateKind::fsig, {"beta"}, features_of(9.0)},
      {CandidateKind::baseline, {}, features_of(2.0)},
  };
  SelectionResult result = select_best(candidates, ensemble, {"debugger", "source"});
  CHECK(result.kind == CandidateKind::fsig);
  CHECK(result.terms == std::vector<std::string>{"beta"});
  CHECK(result.probabilities.at(CandidateKind::msig) == doctest::Approx(0.1));
  CHECK(result.probabilities.at(CandidateKind::fsig) == doctest::Approx(0.9));
  CHECK(result.probabilities.at(CandidateKind::baseline) == doctest::Approx(0.1));
}

TEST_CASE("select_best resolves probability ties by priority") {
  Ensemble flat = Ensemble::from_parts(
      {DecisionTree::from_nodes({TreeNode{-1, 0.0, -1, -1, 0.4}})}, EnsembleConfig{}, 0);
  std::vector<SelectionCandidate> candidates = {
      {CandidateKind::baseline, {}, features_of(1.0)},
      {CandidateKind::comb, {"c"}, features_of(2.0)},
      {CandidateKind::msig, {"m"}, features_of(3.0)},
      {CandidateKind::fsig, {"f"}, features_of(4.0)},
  };
  SelectionResult result = select_best(candidates, flat, {"x"});
  CHECK(result.kind == CandidateKind::msig);
  CHECK(result.terms == std::vector<std::string>{"m"});
}

TEST_CASE("baseline selection repeats the initial query twice") {
  std::vector<TreeNode> nodes = {
      TreeNode{0, 5.0, 1, 2, 0.0},
      TreeNode{-1, 0.0, -1, -1, 0.2},
      TreeNode{-1, 0.0, -1, -1, 0.95},
  };
  Ensemble ensemble =
      Ensemble::from_parts({DecisionTree::from_nodes(nodes)}, EnsembleConfig{}, 0);
  std::vector<SelectionCandidate> candidates = {
      {CandidateKind::msig, {"alpha"}, features_of(1.0)},
      {CandidateKind::baseline, {}, features_of(9.0)},
  };
  SelectionResult result = select_best(candidates, ensemble, {"debugger", "source"});
  CHECK(result.kind == CandidateKind::baseline);
  CHECK(result.terms ==
        std::vector<std::string>{"debugger", "source", "debugger", "source"});
}

TEST_CASE("selection is invariant to uniform probability scaling of the input order") {
  Ensemble flat = Ensemble::from_parts(
      {DecisionTree::from_nodes({TreeNode{-1, 0.0, -1, -1, 0.5}})}, EnsembleConfig{}, 0);
  std::vector<SelectionCandidate> a = {
      {CandidateKind::comb, {"c"}, features_of(1.0)},
      {CandidateKind::msig, {"m"}, features_of(2.0)},
  };
  std::vector<SelectionCandidate> b = {a[1], a[0]};
  CHECK(select_best(a, flat, {"x"}).kind == select_best(b, flat, {"x"}).kind);
}

TEST_CASE("grouped cross-validation scores learnable data perfectly") {
  std::vector<TrainingRow> rows;
  for (int q = 0; q < 12; ++q) {
    std::string qid = "q" + std::to_string(q);
    for (int c = 0; c < 4; ++c) {
      auto kind = static_cast<CandidateKind>(c);
      bool positive = c == q % 4;
      rows.push_back(make_row(qid, kind, positive ? 10.0 : 0.0, positive));
    }
  }
  EnsembleConfig config;
  config.resample_count = 5;
  CrossValidation cv = cross_validate(rows, config, 11, 4);
  CHECK(cv.folds == 4);
  CHECK(cv.queries == 12);
  CHECK(cv.correct == 12);
  CHECK(cv.accuracy == doctest::Approx(1.0));
}

TEST_CASE("cross-validation skips queries without a positive label") {
  std::vector<TrainingRow> rows;
  for (int q = 0; q < 8; ++q) {
    std::string qid = "q" + std::to_string(q);
    for (int c = 0; c < 4; ++c) {
      bool positive = q != 0 && c == 0;
      rows.push_back(make_row(qid, static_cast<CandidateKind>(c), positive ? 5.0 : 1.0,
                              positive));
    }
  }
  EnsembleConfig config;
  config.resample_count = 5;
  CrossValidation cv = cross_validate(rows, config, 3, 4);
  CHECK(cv.queries == 7);
}

TEST_CASE("cross-validation requires at least two folds") {
  std::vector<TrainingRow> rows = {make_row("q", CandidateKind::msig, 1.0, true)};
  CHECK_THROWS_AS(cross_validate(rows, EnsembleConfig{}, 1, 1), UsageError);
}

TEST_CASE("training rows survive a file round trip") {
  TempDir dir;
  std::vector<TrainingRow> rows;
  std::mt19937_64 rng(5150);
  for (int i = 0; i < 9; ++i) {
    TrainingRow row;
    row.query_id = "ISSUE-" + std::to_string(100 + i);
    row.kind = static_cast<CandidateKind>(i % 4);
    for (size_t f = 0; f < kQualityMetricCount; ++f) {
      row.features[f] = std::ldexp(static_cast<double>(rng()), -64) * 20.0 - 10.0;
    }
    row.label = i % 4 == 0;
    rows.push_back(row);
  }
  fs::path file = dir.path / "train.tsv";
  write_training_rows(rows, file);
  std::vector<TrainingRow> loaded = read_training_rows(file);
  REQUIRE(loaded.size() == rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(loaded[i].query_id == rows[i].query_id);
    CHECK(loaded[i].kind == rows[i].kind);
    CHECK(loaded[i].label == rows[i].label);
    for (size_t f = 0; f < kQualityMetricCount; ++f) {
      CHECK(loaded[i].features[f] == rows[i].features[f]);
    }
  }
}

TEST_CASE("training data with a foreign header is rejected") {
  TempDir dir;
  fs::path file = dir.path / "bad.tsv";
  write_text_file(file, "a\tb\tc\n1\t2\t3\n");
  CHECK_THROWS_AS(read_training_rows(file), DataError);
}

TEST_CASE("training data with a malformed row is rejected") {
  TempDir dir;
  std::vector<TrainingRow> rows = {make_row("q", CandidateKind::msig, 1.0, true)};
  fs::path file = dir.path / "train.tsv";
  write_training_rows(rows, file);
  std::string text = read_text_file(file);
  write_text_file(file, text + "q2\tmsig\tnot-a-number\n");
  CHECK_THROWS_AS(read_training_rows(file), DataError);
}

TEST_CASE("models survive a save and load round trip") {
  TempDir dir;
  std::vector<TrainingRow> rows;
  std::mt19937_64 rng(31337);
  for (int i = 0; i < 32; ++i) {
    double f0 = static_cast<double>(rng() % 97);
    double f1 = static_cast<double>(rng() % 89);
    rows.push_back(make_row("q" + std::to_string(i / 4), static_cast<CandidateKind>(i % 4), f0,
                            f0 > f1, f1));
  }
  EnsembleConfig config;
  config.resample_count = 8;
  Ensemble trained = Ensemble::train(rows, config, 2024);
  fs::path file = dir.path / "model.json";
  save_model(trained, file);
  Ensemble loaded = load_model(file);
  CHECK(loaded.seed() == 2024);
  CHECK(loaded.config().resample_count == 8);
  CHECK(loaded.config().tree.max_depth == config.tree.max_depth);
  REQUIRE(loaded.trees().size() == trained.trees().size());
  for (size_t i = 0; i < loaded.trees().size(); ++i) {
    CHECK(same_nodes(loaded.trees()[i].nodes(), trained.trees()[i].nodes()));
  }
  for (int i = 0; i < 20; ++i) {
    FeatureVector x = features_of(static_cast<double>(rng() % 120),
                                  static_cast<double>(rng() % 120));
    CHECK(loaded.predict(x) == trained.predict(x));
  }
  fs::path again = dir.path / "model2.json";
  save_model(loaded, again);
  CHECK(read_text_file(file) == read_text_file(again));
}

TEST_CASE("model files with the wrong magic are rejected") {
  TempDir dir;
  fs::path file = dir.path / "model.json";
  write_text_file(file, "{\"magic\": \"other\", \"version\": 1}\n");
  CHECK_THROWS_AS(load_model(file), DataError);
  write_text_file(file, "not json");
  CHECK_THROWS_AS(load_model(file), DataError);
  CHECK_THROWS_AS(load_model(dir.path / "missing.json"), DataError);
}

TEST_CASE("empty training input is a usage error") {
  CHECK_THROWS_AS(Ensemble::train({}, EnsembleConfig{}, 1), UsageError);
  CHECK_THROWS_AS(DecisionTree::fit({}, TreeConfig{}), UsageError);
  Ensemble flat = Ensemble::from_parts(
      {DecisionTree::from_nodes({TreeNode{-1, 0.0, -1, -1, 0.5}})}, EnsembleConfig{}, 0);
  CHECK_THROWS_AS(select_best({}, flat, {"x"}), UsageError);
}
