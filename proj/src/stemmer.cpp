// Porter stemming algorithm (M.F. Porter, 1980), ASCII-only.

#include <string>

#include "acer/corpus.hpp"

namespace acer {

namespace {

class PorterStemmer {
 public:
  explicit PorterStemmer(std::string word) : w_(std::move(word)) {}

  std::string run() {
    if (w_.size() < 3) return w_;
    step1a();
    step1b();
    step1c();
    step2();
    step3();
    step4();
    step5a();
    step5b();
    return w_;
  }

 private:
  std::string w_;

  bool is_consonant(size_t i) const {
    char c = w_[i];
    switch (c) {
      case 'a': case 'e': case 'i': case 'o': case 'u':
        return false;
      case 'y':
        return i == 0 ? true : !is_consonant(i - 1);
      default:
        return true;
    }
  }

  // Number of VC sequences in the stem w_[0..end).
  int measure(size_t end) const {
    int m = 0;
    size_t i = 0;
    while (i < end && is_consonant(i)) ++i;       // leading consonants
    while (i < end) {
      while (i < end && !is_consonant(i)) ++i;    // vowel run
      if (i >= end) break;
      ++m;
      while (i < end && is_consonant(i)) ++i;     // consonant run
    }
    return m;
  }

  bool has_vowel(size_t end) const {
    for (size_t i = 0; i < end; ++i)
      if (!is_consonant(i)) return true;
    return false;
  }

  bool ends_with(const char* suffix) const {
    size_t n = std::char_traits<char>::length(suffix);
    return w_.size() >= n && w_.compare(w_.size() - n, n, suffix) == 0;
  }

  size_t stem_len(const char* suffix) const {
    return w_.size() - std::char_traits<char>::length(suffix);
  }

  bool double_consonant_at_end() const {
    size_t n = w_.size();
    return n >= 2 && w_[n - 1] == w_[n - 2] && is_consonant(n - 1);
  }

  // consonant-vowel-consonant at end, final consonant not w, x or y
  bool cvc_at_end(size_t end) const {
    if (end < 3) return false;
    if (!is_consonant(end - 3) || is_consonant(end - 2) || !is_consonant(end - 1)) return false;
    char c = w_[end - 1];
    return c != 'w' && c != 'x' && c != 'y';
  }

  void step1a() {
    if (ends_with("sses")) w_.resize(w_.size() - 2);
    else if (ends_with("ies")) w_.resize(w_.size() - 2);
    else if (ends_with("ss")) { /* keep */ }
    else if (ends_with("s")) w_.resize(w_.size() - 1);
  }

  void step1b() {
    bool cleanup = false;
    if (ends_with("eed")) {
      if (measure(stem_len("eed")) > 0) w_.resize(w_.size() - 1);
    } else if (ends_with("ed") && has_vowel(stem_len("ed"))) {
      w_.resize(w_.size() - 2);
      cleanup = true;
    } else if (ends_with("ing") && has_vowel(stem_len("ing"))) {
      w_.resize(w_.size() - 3);
      cleanup = true;
    }
    if (cleanup) {
      if (ends_with("at") || ends_with("bl") || ends_with("iz")) {
        w_ += 'e';
      } else if (double_consonant_at_end() && !ends_with("l") && !ends_with("s") && !ends_with("z")) {
        w_.resize(w_.size() - 1);
      } else if (measure(w_.size()) == 1 && cvc_at_end(w_.size())) {
        w_ += 'e';
      }
    }
  }

  void step1c() {
    if (ends_with("y") && has_vowel(w_.size() - 1)) w_[w_.size() - 1] = 'i';
  }

  void step2() {
    static const struct { const char* from; const char* to; } rules[] = {
        {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"}, {"anci", "ance"},
        {"izer", "ize"},    {"abli", "able"},   {"alli", "al"},   {"entli", "ent"},
        {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
        {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
        {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},   {"biliti", "ble"},
        {"logi", "log"},
    };
    for (const auto& r : rules) {
      if (ends_with(r.from)) {
        size_t sl = stem_len(r.from);
        if (measure(sl) > 0) w_ = w_.substr(0, sl) + r.to;
        return;
      }
    }
  }

  void step3() {
    static const struct { const char* from; const char* to; } rules[] = {
        {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
        {"ical", "ic"},  {"ful", ""},   {"ness", ""},
    };
    for (const auto& r : rules) {
      if (ends_with(r.from)) {
        size_t sl = stem_len(r.from);
        if (measure(sl) > 0) w_ = w_.substr(0, sl) + r.to;
        return;
      }
    }
  }

  void step4() {
    static const char* suffixes[] = {
        "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement",
        "ment", "ent", "ion", "ou", "ism", "ate", "iti", "ous", "ive", "ize",
    };
    for (const char* s : suffixes) {
      if (!ends_with(s)) continue;
      size_t sl = stem_len(s);
      if (std::string(s) == "ion" && !(sl >= 1 && (w_[sl - 1] == 's' || w_[sl - 1] == 't'))) return;
      if (measure(sl) > 1) w_.resize(sl);
      return;
    }
  }

  void step5a() {
    if (!ends_with("e")) return;
    size_t sl = w_.size() - 1;
    int m = measure(sl);
    if (m > 1 || (m == 1 && !cvc_at_end(sl))) w_.resize(sl);
  }

  void step5b() {
    if (ends_with("ll") && measure(w_.size()) > 1) w_.resize(w_.size() - 1);
  }
};

}  // namespace

std::string porter_stem(const std::string& word) {
  return PorterStemmer(word).run();
}

}  // namespace acer
