#ifndef ACER_PIPELINE_HPP
#define ACER_PIPELINE_HPP

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "acer/corpus.hpp"
#include "acer/extract.hpp"
#include "acer/graph.hpp"
#include "acer/index.hpp"
#include "acer/learner.hpp"
#include "acer/quality.hpp"

namespace acer {

struct ReformulationParams {
  size_t coherence_depth = 10;
  RankParams rank;
};

struct ReformulationRequest {
  std::string query_id;
  std::string query_text;
  int feedback_size = 10;       // K: pseudo-relevance feedback depth
  int reformulation_size = 10;  // k: expansion terms per candidate
  std::vector<CandidateKind> sources = {CandidateKind::msig, CandidateKind::fsig,
                                        CandidateKind::comb};
};

struct ReformulationCandidate {
  CandidateKind kind = CandidateKind::baseline;
  std::vector<std::pair<std::string, double>> scored;  // term, normalized rank score
  QualityVector quality;
  bool has_quality = false;
  bool flagged_empty = false;  // token set produced no graph terms

  std::vector<std::string> terms() const;
};

// Full audit record of one reformulation: every candidate with its quality
// vector, the selection probabilities, and the final query. Re-running
// select_best over the stored candidates reproduces the choice.
struct ReformulatedQuery {
  std::string query_id;
  std::vector<std::string> initial_terms;
  std::vector<std::string> feedback_docs;             // doc ids, rank order
  std::vector<ReformulationCandidate> candidates;     // mined kinds, then baseline
  std::map<CandidateKind, double> probabilities;      // empty in pass-through mode
  std::optional<CandidateKind> chosen;                // unset in pass-through mode
  std::vector<std::string> final_terms;
  bool used_fallback = false;  // no feedback: initial query repeated
  std::string warning;
};

enum class BaselineMethod { tf, tfidf, rocchio, rsv };
enum class BaselineScope { msig, fsig, comb, all };

std::string baseline_method_name(BaselineMethod method);
std::string baseline_scope_name(BaselineScope scope);
std::optional<BaselineMethod> parse_baseline_method(const std::string& name);
std::optional<BaselineScope> parse_baseline_scope(const std::string& name);

struct BaselineReformulation {
  std::vector<std::string> expansion;    // ranked expansion terms, best first
  std::vector<std::string> final_terms;  // initial query plus expansion
  bool used_fallback = false;
};

class Reformulator {
 public:
  // Returns the raw source text of a corpus document, or nullopt when the
  // document cannot be produced.
  using RawTextProvider = std::function<std::optional<std::string>(const std::string& doc_id)>;

  Reformulator(const Index& index, Preprocessor preprocessor, RawTextProvider raw_text,
               ReformulationParams params = ReformulationParams());

  // Preprocessed query terms (split pieces plus retained originals).
  // Throws UsageError when nothing survives preprocessing.
  std::vector<std::string> preprocess_query(const std::string& text) const;

  // Candidate from one signature token set: preprocess tokens, build the
  // term graph, rank, normalize, take the top k. An empty token set (or one
  // that filters away entirely) yields a flagged empty candidate.
  ReformulationCandidate get_qr_candidate(const SignatureTokens& token_set, int k) const;

  // End-to-end reformulation. With an ensemble the best candidate is
  // selected and combined with the initial query; with ensemble == nullptr
  // (pass-through) all candidates are returned unselected. Zero feedback
  // results trigger the repetition fallback with a warning.
  ReformulatedQuery reformulate(const ReformulationRequest& request,
                                const Ensemble* ensemble) const;

  // Feedback-based expansion rankings used for comparison. tf and tfidf
  // accept any scope; rocchio and rsv work on whole documents only.
  // Scores that are not positive never select a term.
  BaselineReformulation baseline_reformulate(BaselineMethod method, BaselineScope scope,
                                             const std::string& query_text, int feedback_size,
                                             int expansion_size) const;

  // Initial terms followed by candidate terms not already present in the
  // initial query.
  static std::vector<std::string> combine(const std::vector<std::string>& initial,
                                          const std::vector<std::string>& candidate);

  const Index& index() const { return *index_; }
  const Preprocessor& preprocessor() const { return preprocessor_; }
  const ReformulationParams& params() const { return params_; }

 private:
  std::vector<SourceDocument> fetch_feedback_docs(const std::vector<SearchResult>& hits) const;

  const Index* index_;
  Preprocessor preprocessor_;
  RawTextProvider raw_text_;
  ReformulationParams params_;
};

// Provider backed by an in-memory corpus; the corpus must outlive it.
Reformulator::RawTextProvider make_corpus_provider(const Corpus& corpus);

// Provider reading root/<doc_id> from disk on demand.
Reformulator::RawTextProvider make_file_provider(std::filesystem::path root);

// One-line JSON audit record, lossless for doubles; the inverse parse raises
// DataError on malformed input. Used for the reformulation audit log.
std::string reformulated_query_to_json_text(const ReformulatedQuery& record);
ReformulatedQuery reformulated_query_from_json_text(const std::string& text);

}  // namespace acer

#endif  // ACER_PIPELINE_HPP
