#ifndef ACER_INDEX_HPP
#define ACER_INDEX_HPP

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "acer/corpus.hpp"

namespace acer {

struct SearchResult {
  std::string doc_id;
  double score = 0.0;
};

struct TermStats {
  long long df = 0;
  double idf = 0.0;   // ln(N/df); OOV ceiling ln(N+1) when df = 0
  long long ctf = 0;  // collection term frequency
};

// Vector-space index. Document weights use 1+ln(tf) scaled by idf and are
// cosine-normalized; query weights use raw tf x idf. Ties in search results
// break by ascending document id.
class Index {
 public:
  Index() = default;

  // Indexes body_terms plus original_tokens of every document.
  static Index build(const Corpus& corpus);
  static Index from_term_maps(std::vector<std::string> ids,
                              std::vector<std::map<std::string, int>> term_maps);

  long long doc_count() const { return static_cast<long long>(doc_ids_.size()); }
  long long total_terms() const { return total_terms_; }
  const std::vector<std::string>& doc_ids() const { return doc_ids_; }

  // Index of a document id, or -1 when absent.
  int doc_index_of(const std::string& doc_id) const;
  const std::map<std::string, int>& doc_terms(int doc_idx) const { return doc_terms_[doc_idx]; }
  double doc_norm(int doc_idx) const { return doc_norms_[doc_idx]; }

  TermStats term_stats(const std::string& term) const;
  double idf(const std::string& term) const { return term_stats(term).idf; }

  // Number of documents containing both terms.
  long long joint_doc_freq(const std::string& a, const std::string& b) const;

  // All document indices containing the term, ascending.
  std::vector<int> docs_containing(const std::string& term) const;

  // Document indices containing the term, by descending single-term score
  // (ties ascending index), truncated to limit.
  std::vector<int> top_docs_for_term(const std::string& term, size_t limit) const;

  // Cosine similarity between two document vectors.
  double doc_cosine(int a, int b) const;

  // Top-k documents by cosine similarity; zero-score documents excluded.
  std::vector<SearchResult> search(const std::vector<std::string>& query_terms, size_t k) const;

 private:
  void finalize();

  std::vector<std::string> doc_ids_;
  std::map<std::string, int> id_to_idx_;
  std::vector<std::map<std::string, int>> doc_terms_;  // term -> tf
  std::vector<double> doc_norms_;
  std::map<std::string, std::vector<std::pair<int, int>>> postings_;  // term -> (doc idx, tf)
  std::map<std::string, long long> ctf_;
  long long total_terms_ = 0;
};

// Everything needed to rebuild the preprocessing pipeline that produced an
// index, persisted alongside it so later runs stay consistent.
struct IndexConfig {
  std::string corpus_root;  // generic (forward-slash) absolute or relative path
  std::string extension = ".java";
  PreprocessOptions options;
  bool use_lexicon = false;
  int lexicon_min_freq = 2;
  std::set<std::string> stopwords;
  std::set<std::string> keywords;
  std::map<std::string, int> lexicon;  // word -> corpus frequency

  Preprocessor make_preprocessor() const;
};

// Stable digest of the preprocessing configuration (paths excluded, so the
// same corpus indexed from different mount points hashes identically).
std::string config_fingerprint(const IndexConfig& config);

struct LoadedIndex {
  Index index;
  IndexConfig config;
};

// JSON on disk, magic "acer-index" version 1. Postings, document norms and
// collection statistics are rebuilt at load so no floating-point state is
// serialized; identical inputs produce byte-identical files.
void save_index(const Index& index, const IndexConfig& config, const std::filesystem::path& path);
LoadedIndex load_index(const std::filesystem::path& path);

}  // namespace acer

#endif  // ACER_INDEX_HPP
