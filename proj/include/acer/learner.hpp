#ifndef ACER_LEARNER_HPP
#define ACER_LEARNER_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "acer/extract.hpp"
#include "acer/quality.hpp"

namespace acer {

using FeatureVector = std::array<double, kQualityMetricCount>;

struct TreeConfig {
  int max_depth = 8;
  int min_leaf = 2;
};

struct EnsembleConfig {
  int resample_count = 50;
  TreeConfig tree;
};

struct TrainingRow {
  std::string query_id;
  CandidateKind kind = CandidateKind::baseline;
  FeatureVector features{};
  bool label = false;  // true when this candidate achieved the best QE
};

// Selection priority on equal footing: msig beats fsig beats comb beats
// baseline.
int candidate_priority(CandidateKind kind);

struct TreeNode {
  int feature = -1;          // -1 marks a leaf
  double threshold = 0.0;    // x[feature] < threshold goes left
  int left = -1;
  int right = -1;
  double probability = 0.0;  // leaf positive-class fraction
};

// CART classifier: exhaustive midpoint threshold search minimizing weighted
// Gini impurity; ties resolve to the lowest feature index, then the lowest
// threshold, so identical inputs always grow identical trees.
class DecisionTree {
 public:
  static DecisionTree fit(const std::vector<const TrainingRow*>& rows, const TreeConfig& config);

  double predict(const FeatureVector& x) const;
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  static DecisionTree from_nodes(std::vector<TreeNode> nodes);

 private:
  std::vector<TreeNode> nodes_;  // nodes_[0] is the root
};

// Bagged CART ensemble: resample_count bootstrap draws of the full training
// set (with replacement), one tree each; prediction is the mean of the
// per-tree leaf probabilities.
class Ensemble {
 public:
  static Ensemble train(const std::vector<TrainingRow>& rows, const EnsembleConfig& config,
                        uint64_t seed);

  double predict(const FeatureVector& features) const;
  const std::vector<DecisionTree>& trees() const { return trees_; }
  const EnsembleConfig& config() const { return config_; }
  uint64_t seed() const { return seed_; }

  static Ensemble from_parts(std::vector<DecisionTree> trees, EnsembleConfig config, uint64_t seed);

 private:
  std::vector<DecisionTree> trees_;
  EnsembleConfig config_;
  uint64_t seed_ = 0;
};

// One candidate's measured retrieval outcome for labeling. A missing rank
// means no relevant document was retrieved and counts as worst.
struct CandidateOutcome {
  CandidateKind kind = CandidateKind::baseline;
  FeatureVector features{};
  std::optional<long long> rank;  // query effectiveness; nullopt = none
};

struct LabeledQuery {
  std::string query_id;
  std::vector<CandidateOutcome> candidates;
};

struct LabelReport {
  std::vector<std::string> all_none_queries;  // flagged: nothing retrieved anywhere
};

// Marks the minimum-rank candidate per query positive (priority order breaks
// ties); all-none queries get only negative rows and are flagged.
std::vector<TrainingRow> label_rows(const std::vector<LabeledQuery>& queries,
                                    LabelReport* report = nullptr);

struct SelectionCandidate {
  CandidateKind kind = CandidateKind::baseline;
  std::vector<std::string> terms;  // expansion terms; empty for baseline
  FeatureVector features{};
};

struct SelectionResult {
  CandidateKind kind = CandidateKind::baseline;
  std::vector<std::string> terms;  // chosen expansion terms, or the repeated
                                   // initial query when baseline wins
  std::map<CandidateKind, double> probabilities;
};

// Argmax of ensemble probability with priority tie-breaks. When baseline
// wins, the result terms are the initial query repeated twice (repetition
// fallback).
SelectionResult select_best(const std::vector<SelectionCandidate>& candidates,
                            const Ensemble& ensemble,
                            const std::vector<std::string>& initial_terms);

struct CrossValidation {
  int folds = 0;
  int queries = 0;   // queries with a positive label that were scored
  int correct = 0;   // predicted best candidate matched the labeled best
  double accuracy = 0.0;
};

// Grouped k-fold cross-validation: a query's four rows always share a fold.
CrossValidation cross_validate(const std::vector<TrainingRow>& rows, const EnsembleConfig& config,
                               uint64_t seed, int folds = 10);

// Tab-separated training data: header "query_id kind <metric...> label".
void write_training_rows(const std::vector<TrainingRow>& rows, const std::filesystem::path& path);
std::vector<TrainingRow> read_training_rows(const std::filesystem::path& path);

// JSON model file, magic "acer-model" version 1; stores config, seed, the
// feature schema and every tree.
void save_model(const Ensemble& ensemble, const std::filesystem::path& path);
Ensemble load_model(const std::filesystem::path& path);

}  // namespace acer

#endif  // ACER_LEARNER_HPP
