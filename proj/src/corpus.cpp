#include "acer/corpus.hpp"

#include <algorithm>
#include <filesystem>

#include "acer/util.hpp"

namespace fs = std::filesystem;

namespace acer {

namespace {

// Bytes >= 0x80 (UTF-8 continuation/lead bytes) are kept as letter-like so
// multi-byte characters survive tokenization instead of splitting mid-rune.
inline bool is_high_byte(char c) { return static_cast<unsigned char>(c) >= 0x80; }

inline bool is_letterish(char c) { return is_ascii_alpha(c) || is_high_byte(c); }

inline bool is_token_char(char c) {
  return is_letterish(c) || is_ascii_digit(c) || c == '_' || c == '$';
}

inline bool is_piece_char(char c) { return is_letterish(c) || is_ascii_digit(c); }

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), is_ascii_digit);
}

bool has_alpha(const std::string& s) {
  return std::any_of(s.begin(), s.end(), is_letterish);
}

bool same_case_alpha(const std::string& s) {
  bool any_upper = false, any_lower = false;
  for (char c : s) {
    if (!is_letterish(c)) return false;
    if (is_ascii_upper(c)) any_upper = true;
    if (is_ascii_lower(c)) any_lower = true;
  }
  return !(any_upper && any_lower);
}

}  // namespace

std::vector<std::string> split_token(const std::string& token) {
  std::vector<std::string> pieces;
  const size_t n = token.size();
  size_t i = 0;
  while (i < n) {
    if (!is_piece_char(token[i])) {  // separators: '_', '$', punctuation
      ++i;
      continue;
    }
    size_t j = i + 1;
    while (j < n && is_piece_char(token[j])) {
      const char prev = token[j - 1];
      const char cur = token[j];
      if (is_ascii_digit(prev) != is_ascii_digit(cur)) break;            // letter<->digit
      if (is_ascii_lower(prev) && is_ascii_upper(cur)) break;            // camelCase
      if (is_ascii_upper(prev) && is_ascii_upper(cur) && j + 1 < n &&
          is_ascii_lower(token[j + 1]))                                  // XMLParser -> XML|Parser
        break;
      ++j;
    }
    pieces.push_back(token.substr(i, j - i));
    i = j;
  }
  return pieces;
}

void SplitLexicon::add_word(const std::string& word, int freq) {
  std::string w = to_lower(word);
  if (w.empty()) return;
  words_[w] += freq;
  max_word_len_ = std::max(max_word_len_, w.size());
}

void SplitLexicon::build_from_terms(const std::vector<std::string>& terms, int min_freq) {
  std::map<std::string, int> counts;
  for (const auto& t : terms) ++counts[to_lower(t)];
  for (const auto& [word, count] : counts) {
    if (count >= min_freq) add_word(word, count);
  }
}

bool SplitLexicon::contains(const std::string& word) const {
  return words_.count(to_lower(word)) > 0;
}

std::optional<std::vector<std::string>> SplitLexicon::decompose(const std::string& token, int min_piece) const {
  if (words_.empty()) return std::nullopt;
  const std::string lowered = to_lower(token);
  const size_t n = lowered.size();
  std::vector<std::string> pieces;
  size_t pos = 0;
  while (pos < n) {
    size_t best = 0;
    size_t limit = std::min(max_word_len_, n - pos);
    for (size_t len = limit; len >= static_cast<size_t>(min_piece); --len) {
      if (words_.count(lowered.substr(pos, len))) {
        best = len;
        break;
      }
    }
    if (best == 0) return std::nullopt;  // remainder not covered, leave unsplit
    pieces.push_back(token.substr(pos, best));
    pos += best;
  }
  if (pieces.size() < 2) return std::nullopt;
  return pieces;
}

std::vector<std::string> TokenSplitter::split(const std::string& token) const {
  std::vector<std::string> pieces = split_token(token);
  if (!use_lexicon_) return pieces;
  std::vector<std::string> out;
  out.reserve(pieces.size());
  for (auto& piece : pieces) {
    // Only same-case runs can hide word boundaries the rules cannot see.
    // Known whole words stay intact.
    if (piece.size() >= 6 && same_case_alpha(piece) && !lexicon_.contains(piece)) {
      if (auto sub = lexicon_.decompose(piece)) {
        for (auto& p : *sub) out.push_back(std::move(p));
        continue;
      }
    }
    out.push_back(std::move(piece));
  }
  return out;
}

Preprocessor::Preprocessor()
    : opts_(), stopwords_(default_stopwords()), keywords_(default_java_keywords()), splitter_() {}

Preprocessor::Preprocessor(PreprocessOptions opts, std::set<std::string> stopwords,
                           std::set<std::string> keywords, TokenSplitter splitter)
    : opts_(opts),
      stopwords_(std::move(stopwords)),
      keywords_(std::move(keywords)),
      splitter_(std::move(splitter)) {}

bool Preprocessor::valid_term(const std::string& lowered) const {
  if (lowered.empty()) return false;
  if (all_digits(lowered)) return false;
  if (lowered.size() < static_cast<size_t>(opts_.min_term_length)) return false;
  if (stopwords_.count(lowered)) return false;
  if (keywords_.count(lowered)) return false;
  return true;
}

std::optional<std::string> Preprocessor::filter_term(const std::string& piece) const {
  std::string lowered = to_lower(piece);
  if (!valid_term(lowered)) return std::nullopt;
  if (opts_.stemming) lowered = porter_stem(lowered);
  return lowered;
}

std::vector<std::string> lex_tokens(const std::string& raw) {
  std::vector<std::string> tokens;
  const size_t n = raw.size();
  size_t i = 0;
  while (i < n) {
    if (!is_token_char(raw[i])) {
      ++i;
      continue;
    }
    size_t j = i + 1;
    while (j < n && is_token_char(raw[j])) ++j;
    tokens.push_back(raw.substr(i, j - i));
    i = j;
  }
  return tokens;
}

std::vector<std::string> Preprocessor::preprocess_text(const std::string& raw) const {
  std::vector<std::string> out;
  for (const auto& token : lex_tokens(raw)) {
    for (const auto& piece : splitter_.split(token)) {
      if (auto term = filter_term(piece)) out.push_back(std::move(*term));
    }
  }
  return out;
}

QueryTerms Preprocessor::preprocess_with_originals(const std::string& raw) const {
  QueryTerms qt;
  for (const auto& token : lex_tokens(raw)) {
    const auto pieces = splitter_.split(token);
    for (const auto& piece : pieces) {
      if (auto term = filter_term(piece)) {
        qt.terms.push_back(*term);
        qt.search_terms.push_back(std::move(*term));
      }
    }
    if (!opts_.keep_original_tokens || pieces.size() < 2) continue;
    std::string lowered = to_lower(token);
    // Original identifiers are kept verbatim (no stemming) so they can match
    // the same unsplit token indexed from the corpus.
    if (has_alpha(lowered) && valid_term(lowered)) {
      qt.original_tokens.push_back(lowered);
      qt.search_terms.push_back(std::move(lowered));
    }
  }
  return qt;
}

Corpus load_corpus(const fs::path& root, const Preprocessor& preprocessor, const std::string& extension) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw DataError("corpus root is not a readable directory: " + root.generic_string());
  }
  std::vector<std::string> ids;
  for (fs::recursive_directory_iterator it(root, ec), end; it != end; it.increment(ec)) {
    if (ec) throw DataError("cannot walk corpus root: " + root.generic_string() + ": " + ec.message());
    if (!it->is_regular_file(ec)) continue;
    const fs::path& p = it->path();
    if (p.extension().string() != extension) continue;
    ids.push_back(p.lexically_relative(root).generic_string());
  }
  std::sort(ids.begin(), ids.end());

  Corpus corpus;
  for (const auto& id : ids) {
    SourceDocument doc;
    doc.id = id;
    try {
      doc.raw = read_text_file(root / id);
    } catch (const DataError& e) {
      corpus.load_report.skipped.push_back(id + ": " + e.what());
      continue;
    }
    QueryTerms qt = preprocessor.preprocess_with_originals(doc.raw);
    doc.body_terms = std::move(qt.terms);
    doc.original_tokens = std::move(qt.original_tokens);
    corpus.docs.push_back(std::move(doc));
  }
  return corpus;
}

}  // namespace acer
