#include "acer/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace acer {

void TermGraph::add_vertex(const std::string& term) { adj_[term]; }

void TermGraph::add_edge(const std::string& a, const std::string& b) {
  if (a == b) {  // no self-loops; keep both endpoints as vertices
    adj_[a];
    return;
  }
  adj_[a].insert(b);
  adj_[b].insert(a);
}

bool TermGraph::has_edge(const std::string& a, const std::string& b) const {
  auto it = adj_.find(a);
  return it != adj_.end() && it->second.count(b) > 0;
}

size_t TermGraph::edge_count() const {
  size_t directed = 0;
  for (const auto& [v, nbrs] : adj_) directed += nbrs.size();
  return directed / 2;
}

TermGraph build_term_graph(const SignatureTokens& token_set, const Preprocessor& preprocessor,
                           const RankParams& params) {
  TermGraph graph;
  for (const auto& st : token_set.tokens) {
    std::vector<std::string> terms;
    for (const auto& piece : preprocessor.splitter().split(st.token)) {
      if (auto term = preprocessor.filter_term(piece)) terms.push_back(std::move(*term));
    }
    for (const auto& term : terms) graph.add_vertex(term);
    const size_t reach = params.window > 1 ? static_cast<size_t>(params.window - 1) : 1;
    for (size_t i = 0; i < terms.size(); ++i) {
      for (size_t d = 1; d <= reach && i + d < terms.size(); ++d) {
        graph.add_edge(terms[i], terms[i + d]);
      }
    }
  }
  return graph;
}

CodeRankScores code_rank(const TermGraph& graph, const RankParams& params) {
  CodeRankScores result;
  const auto& adj = graph.adjacency();
  if (adj.empty()) {
    result.converged = true;
    return result;
  }
  std::vector<const std::string*> terms;
  std::vector<const std::set<std::string>*> neighbors;
  std::map<std::string, size_t> pos;
  terms.reserve(adj.size());
  for (const auto& [term, nbrs] : adj) {
    pos[term] = terms.size();
    terms.push_back(&term);
    neighbors.push_back(&nbrs);
  }
  const size_t n = terms.size();
  std::vector<double> score(n, params.base_score);
  std::vector<double> next(n, 0.0);
  for (int iter = 1; iter <= params.max_iterations; ++iter) {
    // Synchronous update: every new score reads only the previous sweep.
    for (size_t i = 0; i < n; ++i) {
      double sum = 0.0;
      for (const auto& u : *neighbors[i]) {
        const size_t j = pos.at(u);
        sum += score[j] / static_cast<double>(neighbors[j]->size());
      }
      next[i] = (1.0 - params.damping) + params.damping * sum;
    }
    double max_delta = 0.0;
    for (size_t i = 0; i < n; ++i) max_delta = std::max(max_delta, std::fabs(next[i] - score[i]));
    score.swap(next);
    result.iterations_used = iter;
    if (max_delta < params.epsilon) {
      result.converged = true;
      break;
    }
  }
  for (size_t i = 0; i < n; ++i) result.scores[*terms[i]] = score[i];
  return result;
}

std::vector<std::pair<std::string, double>> top_k_scored(const CodeRankScores& scores, size_t k) {
  if (scores.scores.empty() || k == 0) return {};
  double lo = scores.scores.begin()->second;
  double hi = lo;
  for (const auto& [term, s] : scores.scores) {
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  std::vector<std::pair<std::string, double>> ranked;
  ranked.reserve(scores.scores.size());
  for (const auto& [term, s] : scores.scores) {
    ranked.emplace_back(term, hi > lo ? (s - lo) / (hi - lo) : 1.0);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (ranked.size() > k) ranked.resize(k);
  return ranked;
}

std::vector<std::string> top_k_terms(const CodeRankScores& scores, size_t k) {
  std::vector<std::string> terms;
  for (auto& [term, s] : top_k_scored(scores, k)) terms.push_back(term);
  return terms;
}

std::string dump_graph(const TermGraph& graph, const CodeRankScores& scores) {
  std::string out;
  char line[128];
  for (const auto& [term, nbrs] : graph.adjacency()) {
    auto it = scores.scores.find(term);
    std::snprintf(line, sizeof(line), "%.6f", it == scores.scores.end() ? 0.0 : it->second);
    out += term + "\t" + line + "\n";
  }
  for (const auto& [term, nbrs] : graph.adjacency()) {
    for (const auto& other : nbrs) {
      if (term < other) out += term + " -- " + other + "\n";
    }
  }
  return out;
}

}  // namespace acer
