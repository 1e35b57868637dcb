#include "acer/extract.hpp"

#include <algorithm>
#include <array>
#include <set>

#include "acer/util.hpp"

namespace acer {

namespace {

inline bool is_ident_start(char c) { return is_ascii_alpha(c) || c == '_' || c == '$'; }
inline bool is_ident_char(char c) { return is_ident_start(c) || is_ascii_digit(c); }

// Replaces line/block comments and string/char literals with spaces so the
// scanner never sees braces or semicolons inside them. Length-preserving.
std::string strip_comments_and_strings(const std::string& src) {
  std::string out = src;
  const size_t n = src.size();
  size_t i = 0;
  auto blank = [&](size_t from, size_t to) {
    for (size_t k = from; k < to && k < n; ++k) {
      if (out[k] != '\n') out[k] = ' ';
    }
  };
  while (i < n) {
    char c = src[i];
    if (c == '/' && i + 1 < n && src[i + 1] == '/') {
      size_t j = i;
      while (j < n && src[j] != '\n') ++j;
      blank(i, j);
      i = j;
    } else if (c == '/' && i + 1 < n && src[i + 1] == '*') {
      size_t j = i + 2;
      while (j + 1 < n && !(src[j] == '*' && src[j + 1] == '/')) ++j;
      j = (j + 1 < n) ? j + 2 : n;
      blank(i, j);
      i = j;
    } else if (c == '"' || c == '\'') {
      size_t j = i + 1;
      while (j < n && src[j] != c && src[j] != '\n') {
        if (src[j] == '\\' && j + 1 < n) ++j;
        ++j;
      }
      if (j < n && src[j] == c) ++j;
      blank(i, j);
      i = j;
    } else {
      ++i;
    }
  }
  return out;
}

// Blanks @Annotation and @pkg.Annotation(args); "@interface" keeps the
// keyword so annotation-type declarations still open a type context.
std::string strip_annotations(const std::string& src) {
  std::string out = src;
  const size_t n = src.size();
  size_t i = 0;
  while (i < n) {
    if (src[i] != '@') {
      ++i;
      continue;
    }
    size_t j = i + 1;
    while (j < n && (src[j] == ' ' || src[j] == '\t')) ++j;
    size_t name_begin = j;
    while (j < n && (is_ident_char(src[j]) || src[j] == '.')) ++j;
    if (j == name_begin) {
      ++i;
      continue;
    }
    if (src.compare(name_begin, j - name_begin, "interface") == 0) {
      out[i] = ' ';
      i = j;
      continue;
    }
    size_t end = j;
    size_t k = j;
    while (k < n && (src[k] == ' ' || src[k] == '\t' || src[k] == '\n')) ++k;
    if (k < n && src[k] == '(') {
      int depth = 0;
      while (k < n) {
        if (src[k] == '(') ++depth;
        if (src[k] == ')' && --depth == 0) {
          ++k;
          break;
        }
        ++k;
      }
      end = k;
    }
    for (size_t p = i; p < end; ++p) {
      if (out[p] != '\n') out[p] = ' ';
    }
    i = end;
  }
  return out;
}

// Blanks balanced <...> groups whose content looks like type arguments,
// so generic declarations reduce to plain "Type name" shapes.
std::string strip_generics(const std::string& src) {
  std::string out = src;
  const size_t n = src.size();
  size_t i = 0;
  auto type_char = [](char c) {
    return is_ident_char(c) || c == '.' || c == ',' || c == '?' || c == '&' || c == '[' ||
           c == ']' || c == '<' || c == '>' || c == ' ' || c == '\t' || c == '\n';
  };
  while (i < n) {
    if (src[i] != '<') {
      ++i;
      continue;
    }
    size_t j = i;
    int depth = 0;
    bool generic = true;
    while (j < n) {
      char c = src[j];
      if (!type_char(c)) {
        generic = false;
        break;
      }
      if (c == '<') ++depth;
      if (c == '>' && --depth == 0) break;
      ++j;
    }
    if (!generic || j >= n || depth != 0) {
      ++i;
      continue;
    }
    for (size_t p = i; p <= j; ++p) {
      if (out[p] != '\n') out[p] = ' ';
    }
    i = j + 1;
  }
  return out;
}

std::string collapse_whitespace(const std::string& s) {
  std::string out;
  bool in_space = true;  // also trims leading whitespace
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      if (!in_space) out += ' ';
      in_space = true;
    } else {
      out += c;
      in_space = false;
    }
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

const std::set<std::string>& modifier_words() {
  static const std::set<std::string> words = {
      "public", "protected", "private",  "static",   "final",   "abstract",
      "native", "strictfp",  "default",  "synchronized", "transient", "volatile",
  };
  return words;
}

const std::set<std::string>& rejected_names() {
  static const std::set<std::string> words = {
      "if", "for", "while", "switch", "catch", "return", "new",  "do",
      "else", "try", "throw", "throws", "class", "interface", "enum", "record",
      "package", "import", "assert", "super", "this",
  };
  return words;
}

struct Cursor {
  const std::string& s;
  size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t' || s[pos] == '\n' || s[pos] == '\r'))
      ++pos;
  }
  std::string ident() {
    skip_ws();
    if (pos >= s.size() || !is_ident_start(s[pos])) return "";
    size_t b = pos;
    while (pos < s.size() && is_ident_char(s[pos])) ++pos;
    return s.substr(b, pos - b);
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }
  void skip_brackets() {
    while (true) {
      size_t save = pos;
      if (eat('[') && eat(']')) continue;
      pos = save;
      break;
    }
  }
};

// Qualified identifier ("java.lang.String"); returns the whole spelling.
std::string qualified_ident(Cursor& cur) {
  std::string name = cur.ident();
  if (name.empty()) return "";
  while (true) {
    size_t save = cur.pos;
    if (!cur.eat('.')) break;
    std::string next = cur.ident();
    if (next.empty()) {
      cur.pos = save;
      break;
    }
    name += "." + next;
  }
  return name;
}

// Method declaration header: modifiers, optional return type (absent for
// constructors), name, parameter list. Returns the normalized header
// through the closing parenthesis, or nullopt.
std::optional<std::string> match_method_header(const std::string& segment) {
  Cursor cur{segment};
  while (true) {
    size_t save = cur.pos;
    std::string word = cur.ident();
    if (word.empty()) return std::nullopt;
    if (modifier_words().count(word)) continue;
    cur.pos = save;
    break;
  }
  std::string first = qualified_ident(cur);
  if (first.empty() || rejected_names().count(first)) return std::nullopt;
  cur.skip_brackets();
  std::string name;
  if (cur.peek() == '(') {
    name = first;  // constructor form
  } else {
    name = cur.ident();
    if (name.empty() || rejected_names().count(name)) return std::nullopt;
    if (cur.peek() != '(') return std::nullopt;
  }
  // Balanced parameter list; the throws clause and anything after are cut.
  size_t open = cur.pos;
  int depth = 0;
  for (size_t i = open; i < segment.size(); ++i) {
    if (segment[i] == '(') ++depth;
    if (segment[i] == ')' && --depth == 0) {
      return collapse_whitespace(segment.substr(0, i + 1));
    }
  }
  return std::nullopt;
}

// Field declaration: modifiers, type, one or more declarators. Initializers
// are dropped; declarator names are kept.
std::optional<std::string> match_field_decl(const std::string& segment) {
  // Split at top-level commas first so each declarator parses on its own.
  std::vector<std::string> chunks;
  {
    int depth = 0;
    std::string current;
    for (char c : segment) {
      if (c == '(' || c == '[') ++depth;
      if (c == ')' || c == ']') --depth;
      if (c == ',' && depth == 0) {
        chunks.push_back(current);
        current.clear();
      } else {
        current += c;
      }
    }
    chunks.push_back(current);
  }

  Cursor cur{chunks[0]};
  std::vector<std::string> mods;
  while (true) {
    size_t save = cur.pos;
    std::string word = cur.ident();
    if (word.empty()) return std::nullopt;
    if (modifier_words().count(word)) {
      mods.push_back(word);
      continue;
    }
    cur.pos = save;
    break;
  }
  size_t type_begin = cur.pos;
  std::string type = qualified_ident(cur);
  if (type.empty() || rejected_names().count(type)) return std::nullopt;
  size_t type_end = cur.pos;
  cur.skip_brackets();
  std::string type_spelling = collapse_whitespace(chunks[0].substr(type_begin, cur.pos - type_begin));
  (void)type_end;

  auto declarator_name = [](Cursor& c) -> std::optional<std::string> {
    std::string name = c.ident();
    if (name.empty() || rejected_names().count(name)) return std::nullopt;
    c.skip_brackets();
    char next = c.peek();
    if (next != '\0' && next != '=') return std::nullopt;
    return name;
  };

  std::vector<std::string> names;
  auto first_name = declarator_name(cur);
  if (!first_name) return std::nullopt;
  names.push_back(*first_name);
  for (size_t i = 1; i < chunks.size(); ++i) {
    Cursor c{chunks[i]};
    if (auto name = declarator_name(c)) names.push_back(*name);
  }

  std::string out;
  for (const auto& m : mods) out += m + " ";
  out += type_spelling;
  for (size_t i = 0; i < names.size(); ++i) out += (i ? ", " : " ") + names[i];
  return out;
}

bool contains_type_keyword(const std::string& segment) {
  for (const auto& word : lex_tokens(segment)) {
    if (word == "class" || word == "interface" || word == "enum" || word == "record") return true;
  }
  return false;
}

struct MemberScan {
  std::vector<std::string> methods;
  std::vector<std::string> fields;
};

enum class Ctx { File, Type, Method, Block };

MemberScan scan_members(const std::string& raw) {
  const std::string text = strip_generics(strip_annotations(strip_comments_and_strings(raw)));
  MemberScan out;
  std::vector<Ctx> stack{Ctx::File};
  std::string segment;
  bool has_assign = false;
  size_t i = 0;
  const size_t n = text.size();
  while (i < n) {
    char c = text[i];
    if (c == '{') {
      if (has_assign && stack.back() == Ctx::Type) {
        // Field initializer block (array literal, anonymous class); skip it
        // wholesale, the declaration continues until its semicolon.
        int depth = 0;
        while (i < n) {
          if (text[i] == '{') ++depth;
          if (text[i] == '}' && --depth == 0) {
            ++i;
            break;
          }
          ++i;
        }
        segment += ' ';
        continue;
      }
      if (contains_type_keyword(segment)) {
        stack.push_back(Ctx::Type);
      } else if (stack.back() == Ctx::Type) {
        if (auto sig = match_method_header(segment)) {
          out.methods.push_back(*sig);
          stack.push_back(Ctx::Method);
        } else {
          stack.push_back(Ctx::Block);
        }
      } else {
        stack.push_back(Ctx::Block);
      }
      segment.clear();
      has_assign = false;
      ++i;
    } else if (c == '}') {
      if (stack.size() > 1) stack.pop_back();
      segment.clear();
      has_assign = false;
      ++i;
    } else if (c == ';') {
      if (stack.back() == Ctx::Type) {
        if (auto sig = match_method_header(segment)) {
          out.methods.push_back(*sig);  // abstract or interface declaration
        } else if (auto field = match_field_decl(segment)) {
          out.fields.push_back(*field);
        }
      }
      segment.clear();
      has_assign = false;
      ++i;
    } else {
      if (c == '=' && !has_assign) {
        const char prev = segment.empty() ? '\0' : segment.back();
        const char next = i + 1 < n ? text[i + 1] : '\0';
        if (prev != '=' && prev != '!' && prev != '<' && prev != '>' && next != '=') {
          has_assign = true;
        }
      }
      segment += c;
      ++i;
    }
  }
  return out;
}

}  // namespace

const char* candidate_kind_name(CandidateKind kind) {
  switch (kind) {
    case CandidateKind::msig: return "msig";
    case CandidateKind::fsig: return "fsig";
    case CandidateKind::comb: return "comb";
    case CandidateKind::baseline: return "baseline";
  }
  return "unknown";
}

std::optional<CandidateKind> parse_candidate_kind(const std::string& name) {
  if (name == "msig") return CandidateKind::msig;
  if (name == "fsig") return CandidateKind::fsig;
  if (name == "comb") return CandidateKind::comb;
  if (name == "baseline") return CandidateKind::baseline;
  return std::nullopt;
}

std::vector<std::string> extract_method_signatures(const SourceDocument& doc) {
  return scan_members(doc.raw).methods;
}

std::vector<std::string> extract_field_signatures(const SourceDocument& doc) {
  return scan_members(doc.raw).fields;
}

SignatureTokens collect_candidate_tokens(const std::vector<const SourceDocument*>& feedback_docs,
                                         CandidateKind kind, const TokenSplitter& splitter) {
  if (kind == CandidateKind::baseline) {
    throw UsageError("baseline carries no signature tokens");
  }
  std::vector<const SourceDocument*> docs = feedback_docs;
  std::sort(docs.begin(), docs.end(),
            [](const SourceDocument* a, const SourceDocument* b) { return a->id < b->id; });
  SignatureTokens out;
  out.kind = kind;
  for (const SourceDocument* doc : docs) {
    std::vector<std::string> signatures;
    if (kind == CandidateKind::msig || kind == CandidateKind::comb) {
      auto methods = extract_method_signatures(*doc);
      signatures.insert(signatures.end(), methods.begin(), methods.end());
    }
    if (kind == CandidateKind::fsig || kind == CandidateKind::comb) {
      auto fields = extract_field_signatures(*doc);
      signatures.insert(signatures.end(), fields.begin(), fields.end());
    }
    for (const auto& sig : signatures) {
      for (const auto& token : lex_tokens(sig)) {
        if (splitter.split(token).size() >= 2) {
          out.tokens.push_back(SignatureToken{token, doc->id});
        }
      }
    }
  }
  return out;
}

}  // namespace acer
