#include <fstream>

#include "acer/corpus.hpp"
#include "acer/util.hpp"

namespace acer {

namespace {

const char* const kStopwords[] = {
    "a", "about", "above", "after", "again", "against", "all", "also", "am", "an", "and", "any",
    "are", "aren", "as", "at", "be", "because", "been", "before", "being", "below", "between",
    "both", "but", "by", "can", "cannot", "could", "couldn", "did", "didn", "do", "does", "doesn",
    "doing", "don", "down", "during", "each", "either", "else", "ever", "every", "few", "for",
    "from", "further", "had", "hadn", "has", "hasn", "have", "haven", "having", "he", "hence",
    "her", "here", "hers", "herself", "him", "himself", "his", "how", "however", "i", "if", "in",
    "into", "is", "isn", "it", "its", "itself", "just", "let", "may", "maybe", "me", "might",
    "mightn", "more", "most", "much", "must", "mustn", "my", "myself", "neither", "no", "non",
    "nor", "not", "now", "of", "off", "often", "on", "once", "only", "onto", "or", "other",
    "others", "otherwise", "ought", "our", "ours", "ourselves", "out", "over", "own", "per",
    "perhaps", "rather", "same", "shall", "shan", "she", "should", "shouldn", "since", "so",
    "some", "somehow", "such", "than", "that", "the", "their", "theirs", "them", "themselves",
    "then", "there", "therefore", "these", "they", "this", "those", "though", "through", "thus",
    "to", "too", "under", "until", "up", "upon", "us", "very", "was", "wasn", "we", "were",
    "weren", "what", "whatever", "when", "whenever", "where", "wherever", "whether", "which",
    "while", "who", "whom", "whose", "why", "will", "with", "within", "without", "won", "would",
    "wouldn", "yet", "you", "your", "yours", "yourself", "yourselves",
};

const char* const kJavaKeywords[] = {
    "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char", "class", "const",
    "continue", "default", "do", "double", "else", "enum", "extends", "final", "finally", "float",
    "for", "goto", "if", "implements", "import", "instanceof", "int", "interface", "long",
    "native", "new", "package", "private", "protected", "public", "record", "return", "short",
    "static", "strictfp", "super", "switch", "synchronized", "this", "throw", "throws",
    "transient", "try", "var", "void", "volatile", "while", "yield",
    // literals, treated as keywords for filtering
    "true", "false", "null",
};

}  // namespace

const std::set<std::string>& default_stopwords() {
  static const std::set<std::string> words(std::begin(kStopwords), std::end(kStopwords));
  return words;
}

const std::set<std::string>& default_java_keywords() {
  static const std::set<std::string> words(std::begin(kJavaKeywords), std::end(kJavaKeywords));
  return words;
}

std::set<std::string> load_word_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read word list: " + path.string());
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n' || line.back() == ' ')) line.pop_back();
    size_t start = line.find_first_not_of(' ');
    if (start == std::string::npos) continue;
    std::string word = to_lower(line.substr(start));
    if (!word.empty() && word[0] != '#') words.insert(word);
  }
  return words;
}

}  // namespace acer
