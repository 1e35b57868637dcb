#include "acer/learner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>

#include "acer/util.hpp"
#include "json.hpp"

namespace acer {

namespace {

constexpr uint64_t kTreeSeedStride = 0x9E3779B97F4A7C15ULL;

double gini(int positives, int total) {
  if (total == 0) return 0.0;
  double p = static_cast<double>(positives) / total;
  return 2.0 * p * (1.0 - p);
}

int count_positives(const std::vector<const TrainingRow*>& rows) {
  int n = 0;
  for (const TrainingRow* row : rows) {
    if (row->label) ++n;
  }
  return n;
}

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double impurity = 0.0;
};

std::optional<Split> best_split(const std::vector<const TrainingRow*>& rows, int min_leaf) {
  const int total = static_cast<int>(rows.size());
  const int total_pos = count_positives(rows);
  const double parent = gini(total_pos, total);
  std::optional<Split> best;
  for (int f = 0; f < static_cast<int>(kQualityMetricCount); ++f) {
    std::vector<std::pair<double, bool>> points;
    points.reserve(rows.size());
    for (const TrainingRow* row : rows) {
      points.emplace_back(row->features[static_cast<size_t>(f)], row->label);
    }
    std::sort(points.begin(), points.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    int left_n = 0;
    int left_pos = 0;
    for (size_t i = 0; i + 1 < points.size(); ++i) {
      ++left_n;
      if (points[i].second) ++left_pos;
      if (points[i].first == points[i + 1].first) continue;
      int right_n = total - left_n;
      if (left_n < min_leaf || right_n < min_leaf) continue;
      double threshold = points[i].first + (points[i + 1].first - points[i].first) / 2.0;
      int right_pos = total_pos - left_pos;
      double impurity = (static_cast<double>(left_n) / total) * gini(left_pos, left_n) +
                        (static_cast<double>(right_n) / total) * gini(right_pos, right_n);
      if (impurity >= parent - 1e-12) continue;
      if (!best || impurity < best->impurity - 1e-12) {
        best = Split{f, threshold, impurity};
      }
    }
  }
  return best;
}

class TreeBuilder {
 public:
  TreeBuilder(const TreeConfig& config) : config_(config) {}

  std::vector<TreeNode> build(const std::vector<const TrainingRow*>& rows) {
    nodes_.clear();
    grow(rows, 0);
    return std::move(nodes_);
  }

 private:
  int make_leaf(const std::vector<const TrainingRow*>& rows) {
    TreeNode node;
    node.probability =
        rows.empty() ? 0.0 : static_cast<double>(count_positives(rows)) / rows.size();
    nodes_.push_back(node);
    return static_cast<int>(nodes_.size()) - 1;
  }

  int grow(const std::vector<const TrainingRow*>& rows, int depth) {
    const int positives = count_positives(rows);
    const bool pure = positives == 0 || positives == static_cast<int>(rows.size());
    if (depth >= config_.max_depth || pure ||
        static_cast<int>(rows.size()) < 2 * config_.min_leaf) {
      return make_leaf(rows);
    }
    std::optional<Split> split = best_split(rows, config_.min_leaf);
    if (!split) return make_leaf(rows);
    std::vector<const TrainingRow*> left;
    std::vector<const TrainingRow*> right;
    for (const TrainingRow* row : rows) {
      if (row->features[static_cast<size_t>(split->feature)] < split->threshold) {
        left.push_back(row);
      } else {
        right.push_back(row);
      }
    }
    int index = static_cast<int>(nodes_.size());
    nodes_.push_back(TreeNode{});
    nodes_[static_cast<size_t>(index)].feature = split->feature;
    nodes_[static_cast<size_t>(index)].threshold = split->threshold;
    int left_index = grow(left, depth + 1);
    int right_index = grow(right, depth + 1);
    nodes_[static_cast<size_t>(index)].left = left_index;
    nodes_[static_cast<size_t>(index)].right = right_index;
    return index;
  }

  TreeConfig config_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

int candidate_priority(CandidateKind kind) {
  switch (kind) {
    case CandidateKind::msig:
      return 0;
    case CandidateKind::fsig:
      return 1;
    case CandidateKind::comb:
      return 2;
    case CandidateKind::baseline:
      return 3;
  }
  return 3;
}

DecisionTree DecisionTree::fit(const std::vector<const TrainingRow*>& rows,
                               const TreeConfig& config) {
  if (rows.empty()) throw UsageError("cannot fit a tree on an empty training set");
  DecisionTree tree;
  tree.nodes_ = TreeBuilder(config).build(rows);
  return tree;
}

DecisionTree DecisionTree::from_nodes(std::vector<TreeNode> nodes) {
  DecisionTree tree;
  tree.nodes_ = std::move(nodes);
  return tree;
}

double DecisionTree::predict(const FeatureVector& x) const {
  size_t at = 0;
  while (nodes_[at].feature >= 0) {
    const TreeNode& node = nodes_[at];
    at = static_cast<size_t>(x[static_cast<size_t>(node.feature)] < node.threshold ? node.left
                                                                                   : node.right);
  }
  return nodes_[at].probability;
}

Ensemble Ensemble::train(const std::vector<TrainingRow>& rows, const EnsembleConfig& config,
                         uint64_t seed) {
  if (rows.empty()) throw UsageError("cannot train on an empty training set");
  if (config.resample_count <= 0) throw UsageError("resample count must be positive");
  Ensemble ensemble;
  ensemble.config_ = config;
  ensemble.seed_ = seed;
  const size_t n = rows.size();
  for (int i = 0; i < config.resample_count; ++i) {
    std::mt19937_64 rng(seed + kTreeSeedStride * static_cast<uint64_t>(i + 1));
    std::vector<const TrainingRow*> sample;
    sample.reserve(n);
    for (size_t j = 0; j < n; ++j) {
      sample.push_back(&rows[static_cast<size_t>(rng() % n)]);
    }
    ensemble.trees_.push_back(DecisionTree::fit(sample, config.tree));
  }
  return ensemble;
}

double Ensemble::predict(const FeatureVector& features) const {
  if (trees_.empty()) return 0.0;
  double sum = 0.0;
  for (const DecisionTree& tree : trees_) {
    sum += tree.predict(features);
  }
  return sum / static_cast<double>(trees_.size());
}

Ensemble Ensemble::from_parts(std::vector<DecisionTree> trees, EnsembleConfig config,
                              uint64_t seed) {
  Ensemble ensemble;
  ensemble.trees_ = std::move(trees);
  ensemble.config_ = config;
  ensemble.seed_ = seed;
  return ensemble;
}

std::vector<TrainingRow> label_rows(const std::vector<LabeledQuery>& queries,
                                    LabelReport* report) {
  std::vector<TrainingRow> rows;
  for (const LabeledQuery& query : queries) {
    const CandidateOutcome* best = nullptr;
    for (const CandidateOutcome& outcome : query.candidates) {
      if (!outcome.rank) continue;
      if (!best || *outcome.rank < *best->rank ||
          (*outcome.rank == *best->rank &&
           candidate_priority(outcome.kind) < candidate_priority(best->kind))) {
        best = &outcome;
      }
    }
    if (!best && report) report->all_none_queries.push_back(query.query_id);
    for (const CandidateOutcome& outcome : query.candidates) {
      TrainingRow row;
      row.query_id = query.query_id;
      row.kind = outcome.kind;
      row.features = outcome.features;
      row.label = best == &outcome;
      rows.push_back(row);
    }
  }
  return rows;
}

SelectionResult select_best(const std::vector<SelectionCandidate>& candidates,
                            const Ensemble& ensemble,
                            const std::vector<std::string>& initial_terms) {
  if (candidates.empty()) throw UsageError("no candidates to select from");
  SelectionResult result;
  const SelectionCandidate* best = nullptr;
  double best_probability = 0.0;
  for (const SelectionCandidate& candidate : candidates) {
    double probability = ensemble.predict(candidate.features);
    result.probabilities[candidate.kind] = probability;
    if (!best || probability > best_probability ||
        (probability == best_probability &&
         candidate_priority(candidate.kind) < candidate_priority(best->kind))) {
      best = &candidate;
      best_probability = probability;
    }
  }
  result.kind = best->kind;
  if (best->kind == CandidateKind::baseline) {
    result.terms = initial_terms;
    result.terms.insert(result.terms.end(), initial_terms.begin(), initial_terms.end());
  } else {
    result.terms = best->terms;
  }
  return result;
}

CrossValidation cross_validate(const std::vector<TrainingRow>& rows, const EnsembleConfig& config,
                               uint64_t seed, int folds) {
  if (folds < 2) throw UsageError("cross-validation needs at least two folds");
  std::map<std::string, std::vector<const TrainingRow*>> by_query;
  for (const TrainingRow& row : rows) {
    by_query[row.query_id].push_back(&row);
  }
  std::vector<std::string> ids;
  ids.reserve(by_query.size());
  for (const auto& [id, group] : by_query) {
    ids.push_back(id);
  }
  CrossValidation cv;
  cv.folds = folds;
  for (int fold = 0; fold < folds; ++fold) {
    std::vector<TrainingRow> train;
    std::vector<const std::vector<const TrainingRow*>*> test_groups;
    for (size_t i = 0; i < ids.size(); ++i) {
      const auto& group = by_query[ids[i]];
      if (static_cast<int>(i % static_cast<size_t>(folds)) == fold) {
        test_groups.push_back(&group);
      } else {
        for (const TrainingRow* row : group) train.push_back(*row);
      }
    }
    if (train.empty() || test_groups.empty()) continue;
    Ensemble ensemble = Ensemble::train(train, config, seed + static_cast<uint64_t>(fold));
    for (const auto* group : test_groups) {
      const TrainingRow* labeled = nullptr;
      for (const TrainingRow* row : *group) {
        if (row->label) labeled = row;
      }
      if (!labeled) continue;  // all-none query, nothing to score
      const TrainingRow* predicted = nullptr;
      double best_probability = 0.0;
      for (const TrainingRow* row : *group) {
        double probability = ensemble.predict(row->features);
        if (!predicted || probability > best_probability ||
            (probability == best_probability &&
             candidate_priority(row->kind) < candidate_priority(predicted->kind))) {
          predicted = row;
          best_probability = probability;
        }
      }
      ++cv.queries;
      if (predicted == labeled) ++cv.correct;
    }
  }
  cv.accuracy = cv.queries == 0 ? 0.0 : static_cast<double>(cv.correct) / cv.queries;
  return cv;
}

void write_training_rows(const std::vector<TrainingRow>& rows,
                         const std::filesystem::path& path) {
  std::string out = "query_id\tkind";
  for (const std::string& name : quality_metric_names()) {
    out += "\t";
    out += name;
  }
  out += "\tlabel\n";
  char buf[64];
  for (const TrainingRow& row : rows) {
    out += row.query_id;
    out += "\t";
    out += candidate_kind_name(row.kind);
    for (double value : row.features) {
      std::snprintf(buf, sizeof(buf), "%.17g", value);
      out += "\t";
      out += buf;
    }
    out += row.label ? "\t1\n" : "\t0\n";
  }
  write_text_file(path, out);
}

std::vector<TrainingRow> read_training_rows(const std::filesystem::path& path) {
  std::string text = read_text_file(path);
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty training data file: " + path.string());
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::string expected = "query_id\tkind";
  for (const std::string& name : quality_metric_names()) {
    expected += "\t";
    expected += name;
  }
  expected += "\tlabel";
  if (line != expected) {
    throw DataError("training data header mismatch in " + path.string());
  }
  std::vector<TrainingRow> rows;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    size_t start = 0;
    while (true) {
      size_t tab = line.find('\t', start);
      if (tab == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, tab - start));
      start = tab + 1;
    }
    if (fields.size() != kQualityMetricCount + 3) {
      throw DataError("bad training data row at line " + std::to_string(line_no) + " in " +
                      path.string());
    }
    TrainingRow row;
    row.query_id = fields[0];
    auto kind = parse_candidate_kind(fields[1]);
    if (!kind) {
      throw DataError("unknown candidate kind at line " + std::to_string(line_no) + " in " +
                      path.string());
    }
    row.kind = *kind;
    try {
      for (size_t i = 0; i < kQualityMetricCount; ++i) {
        row.features[i] = std::stod(fields[i + 2]);
      }
    } catch (const std::exception&) {
      throw DataError("bad feature value at line " + std::to_string(line_no) + " in " +
                      path.string());
    }
    const std::string& label = fields.back();
    if (label != "0" && label != "1") {
      throw DataError("bad label at line " + std::to_string(line_no) + " in " + path.string());
    }
    row.label = label == "1";
    rows.push_back(std::move(row));
  }
  return rows;
}

void save_model(const Ensemble& ensemble, const std::filesystem::path& path) {
  nlohmann::json j;
  j["magic"] = "acer-model";
  j["version"] = 1;
  j["seed"] = ensemble.seed();
  j["resample_count"] = ensemble.config().resample_count;
  j["max_depth"] = ensemble.config().tree.max_depth;
  j["min_leaf"] = ensemble.config().tree.min_leaf;
  j["features"] = quality_metric_names();
  nlohmann::json trees = nlohmann::json::array();
  for (const DecisionTree& tree : ensemble.trees()) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const TreeNode& node : tree.nodes()) {
      nlohmann::json n;
      n["f"] = node.feature;
      if (node.feature >= 0) {
        n["t"] = node.threshold;
        n["l"] = node.left;
        n["r"] = node.right;
      } else {
        n["p"] = node.probability;
      }
      nodes.push_back(std::move(n));
    }
    trees.push_back(std::move(nodes));
  }
  j["trees"] = std::move(trees);
  write_text_file(path, j.dump(1) + "\n");
}

Ensemble load_model(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw DataError("cannot parse model file " + path.string() + ": " + e.what());
  }
  try {
    if (j.at("magic") != "acer-model" || j.at("version") != 1) {
      throw DataError("not a supported model file: " + path.string());
    }
    std::vector<std::string> features = j.at("features");
    const auto& names = quality_metric_names();
    if (!std::equal(features.begin(), features.end(), names.begin(), names.end())) {
      throw DataError("model feature schema mismatch: " + path.string());
    }
    EnsembleConfig config;
    config.resample_count = j.at("resample_count");
    config.tree.max_depth = j.at("max_depth");
    config.tree.min_leaf = j.at("min_leaf");
    uint64_t seed = j.at("seed");
    std::vector<DecisionTree> trees;
    for (const auto& tree_json : j.at("trees")) {
      std::vector<TreeNode> nodes;
      for (const auto& n : tree_json) {
        TreeNode node;
        node.feature = n.at("f");
        if (node.feature >= 0) {
          node.threshold = n.at("t");
          node.left = n.at("l");
          node.right = n.at("r");
          if (node.left < 0 || node.right < 0) {
            throw DataError("model tree has a dangling branch: " + path.string());
          }
        } else {
          node.probability = n.at("p");
        }
        nodes.push_back(node);
      }
      if (nodes.empty()) throw DataError("model tree is empty: " + path.string());
      for (const TreeNode& node : nodes) {
        if (node.feature >= static_cast<int>(kQualityMetricCount) ||
            (node.feature >= 0 && (node.left >= static_cast<int>(nodes.size()) ||
                                   node.right >= static_cast<int>(nodes.size())))) {
          throw DataError("model tree node out of range: " + path.string());
        }
      }
      trees.push_back(DecisionTree::from_nodes(std::move(nodes)));
    }
    if (trees.empty()) throw DataError("model has no trees: " + path.string());
    return Ensemble::from_parts(std::move(trees), config, seed);
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed model file " + path.string() + ": " + e.what());
  }
}

}  // namespace acer
