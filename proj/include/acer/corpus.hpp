#ifndef ACER_CORPUS_HPP
#define ACER_CORPUS_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace acer {

struct PreprocessOptions {
  bool stemming = false;
  int min_term_length = 3;
  bool keep_original_tokens = true;
};

// One preprocessed corpus file. `body_terms` holds the split terms after
// filtering; `original_tokens` keeps the structured identifiers themselves
// (lowercased) so that a query containing e.g. "resolveRuntimeClasspathEntry"
// can match the unsplit token in the index.
struct SourceDocument {
  std::string id;  // path relative to the corpus root
  std::string raw;
  std::vector<std::string> body_terms;
  std::vector<std::string> original_tokens;
};

struct LoadReport {
  std::vector<std::string> skipped;  // "path: reason"
};

struct Corpus {
  std::vector<SourceDocument> docs;  // sorted by id
  LoadReport load_report;
};

// Rule-based identifier splitter: punctuation, underscores, digit boundaries,
// lower->Upper camel boundaries, and UPPER-run/Tail boundaries
// ("XMLParser" -> "XML","Parser"). Total function, never returns empty pieces;
// concatenating the pieces (ignoring separators) restores the input.
std::vector<std::string> split_token(const std::string& token);

// Optional corpus-frequency lexicon for same-case tokens the rule-based
// splitter cannot break ("classpath" -> "class","path" when both are known
// words). Greedy: at each step the longest known prefix wins; if the
// remainder cannot be consumed, the token is left unsplit.
class SplitLexicon {
 public:
  SplitLexicon() = default;
  void add_word(const std::string& word, int freq = 1);
  void build_from_terms(const std::vector<std::string>& terms, int min_freq = 2);
  bool contains(const std::string& word) const;
  size_t size() const { return words_.size(); }

  // Attempts a full greedy decomposition of a same-case token into known
  // words of length >= min_piece. Returns nullopt when no full split exists.
  std::optional<std::vector<std::string>> decompose(const std::string& token, int min_piece = 3) const;

  const std::map<std::string, int>& words() const { return words_; }

 private:
  std::map<std::string, int> words_;
  size_t max_word_len_ = 0;
};

// split_token plus the optional lexicon pass for same-case pieces.
class TokenSplitter {
 public:
  TokenSplitter() = default;
  explicit TokenSplitter(SplitLexicon lexicon) : lexicon_(std::move(lexicon)), use_lexicon_(true) {}

  std::vector<std::string> split(const std::string& token) const;
  bool structured(const std::string& token) const { return split(token).size() >= 2; }
  bool has_lexicon() const { return use_lexicon_; }
  const SplitLexicon& lexicon() const { return lexicon_; }

 private:
  SplitLexicon lexicon_;
  bool use_lexicon_ = false;
};

// Porter-style English stemmer ("sending" -> "send").
std::string porter_stem(const std::string& word);

// Raw tokenization: maximal runs of [A-Za-z0-9_$] (bytes >= 0x80 included).
std::vector<std::string> lex_tokens(const std::string& raw);

// Bundled default word lists; both can be overridden from files with one
// entry per line (see load_word_list).
const std::set<std::string>& default_stopwords();
const std::set<std::string>& default_java_keywords();
std::set<std::string> load_word_list(const std::filesystem::path& path);

struct QueryTerms {
  std::vector<std::string> terms;             // split terms, filtered
  std::vector<std::string> original_tokens;   // structured originals, lowercased
  // Term multiset used for searching: terms with each structured original
  // inserted after its own pieces.
  std::vector<std::string> search_terms;
};

class Preprocessor {
 public:
  Preprocessor();
  Preprocessor(PreprocessOptions opts, std::set<std::string> stopwords, std::set<std::string> keywords,
               TokenSplitter splitter = TokenSplitter());

  // Removal rules + split_token + lowercasing + stopword/keyword/length
  // filters (+ stemming when enabled). Order preserved.
  std::vector<std::string> preprocess_text(const std::string& raw) const;

  // Same pipeline but also keeps structured original tokens, as done for
  // corpus documents and search queries.
  QueryTerms preprocess_with_originals(const std::string& raw) const;

  // Filter a single already-split piece; empty result means dropped.
  std::optional<std::string> filter_term(const std::string& piece) const;

  bool valid_term(const std::string& lowered) const;

  const PreprocessOptions& options() const { return opts_; }
  const TokenSplitter& splitter() const { return splitter_; }
  const std::set<std::string>& stopwords() const { return stopwords_; }
  const std::set<std::string>& keywords() const { return keywords_; }
  void set_splitter(TokenSplitter splitter) { splitter_ = std::move(splitter); }

 private:
  PreprocessOptions opts_;
  std::set<std::string> stopwords_;
  std::set<std::string> keywords_;
  TokenSplitter splitter_;
};

// Loads every file under `root` with the given extension (default ".java"),
// preprocesses it, and returns documents in deterministic id order.
// Unreadable individual files are skipped and recorded in the load report;
// an unreadable root raises DataError.
Corpus load_corpus(const std::filesystem::path& root, const Preprocessor& preprocessor,
                   const std::string& extension = ".java");

}  // namespace acer

#endif  // ACER_CORPUS_HPP
