#ifndef ACER_GRAPH_HPP
#define ACER_GRAPH_HPP

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "acer/corpus.hpp"
#include "acer/extract.hpp"

namespace acer {

// Term co-occurrence graph. Every edge is bidirectional, so each vertex has
// in-degree equal to out-degree; self-loops are rejected.
class TermGraph {
 public:
  void add_vertex(const std::string& term);
  void add_edge(const std::string& a, const std::string& b);

  bool has_vertex(const std::string& term) const { return adj_.count(term) > 0; }
  bool has_edge(const std::string& a, const std::string& b) const;
  size_t vertex_count() const { return adj_.size(); }
  size_t edge_count() const;  // undirected pair count

  const std::map<std::string, std::set<std::string>>& adjacency() const { return adj_; }

 private:
  std::map<std::string, std::set<std::string>> adj_;
};

struct RankParams {
  double damping = 0.85;        // psi
  double base_score = 0.25;     // initial vertex weight
  double epsilon = 0.0001;      // max per-vertex delta for convergence
  int max_iterations = 100;
  int window = 2;               // adjacency window within one token's pieces
};

struct CodeRankScores {
  std::map<std::string, double> scores;
  int iterations_used = 0;
  bool converged = false;
};

// Vertices are the filtered split terms of each candidate token; edges join
// terms adjacent (window 2) within a single token's surviving piece
// sequence. No cross-token edges; duplicate edges collapse.
TermGraph build_term_graph(const SignatureTokens& token_set, const Preprocessor& preprocessor,
                           const RankParams& params = RankParams());

// Synchronous fixed-point iteration of
//   S(v) = (1 - psi) + psi * sum over u in In(v) of S(u)/|Out(u)|
// from a uniform base score until the largest per-vertex change drops below
// epsilon or the iteration cap is hit.
CodeRankScores code_rank(const TermGraph& graph, const RankParams& params = RankParams());

// Top-k terms by min-max-normalized score, descending; ties break
// lexicographically. A constant score vector normalizes to all ones.
std::vector<std::pair<std::string, double>> top_k_scored(const CodeRankScores& scores, size_t k);
std::vector<std::string> top_k_terms(const CodeRankScores& scores, size_t k);

// Debug dump: one "term<TAB>score" line per vertex plus edge lines.
std::string dump_graph(const TermGraph& graph, const CodeRankScores& scores);

}  // namespace acer

#endif  // ACER_GRAPH_HPP
