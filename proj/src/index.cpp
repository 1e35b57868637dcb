#include "acer/index.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "acer/util.hpp"
#include "json.hpp"

namespace acer {

using nlohmann::json;

namespace {

inline double doc_weight(int tf) { return 1.0 + std::log(static_cast<double>(tf)); }

}  // namespace

Index Index::build(const Corpus& corpus) {
  if (corpus.docs.empty()) throw DataError("cannot index an empty corpus");
  std::vector<std::string> ids;
  std::vector<std::map<std::string, int>> maps;
  ids.reserve(corpus.docs.size());
  maps.reserve(corpus.docs.size());
  for (const auto& doc : corpus.docs) {
    std::map<std::string, int> counts;
    for (const auto& t : doc.body_terms) ++counts[t];
    for (const auto& t : doc.original_tokens) ++counts[t];
    ids.push_back(doc.id);
    maps.push_back(std::move(counts));
  }
  return from_term_maps(std::move(ids), std::move(maps));
}

Index Index::from_term_maps(std::vector<std::string> ids,
                            std::vector<std::map<std::string, int>> term_maps) {
  if (ids.size() != term_maps.size()) throw DataError("index: id/term map count mismatch");
  if (ids.empty()) throw DataError("cannot index an empty corpus");
  Index index;
  // Documents are kept in ascending id order so index order equals id order.
  std::vector<size_t> order(ids.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return ids[a] < ids[b]; });
  for (size_t i : order) {
    if (index.id_to_idx_.count(ids[i])) throw DataError("duplicate document id: " + ids[i]);
    index.id_to_idx_[ids[i]] = static_cast<int>(index.doc_ids_.size());
    index.doc_ids_.push_back(std::move(ids[i]));
    index.doc_terms_.push_back(std::move(term_maps[i]));
  }
  index.finalize();
  return index;
}

void Index::finalize() {
  postings_.clear();
  ctf_.clear();
  total_terms_ = 0;
  for (size_t d = 0; d < doc_terms_.size(); ++d) {
    for (const auto& [term, tf] : doc_terms_[d]) {
      if (tf <= 0) throw DataError("index: nonpositive term frequency for " + term);
      postings_[term].emplace_back(static_cast<int>(d), tf);
      ctf_[term] += tf;
      total_terms_ += tf;
    }
  }
  doc_norms_.assign(doc_terms_.size(), 0.0);
  const double n = static_cast<double>(doc_count());
  for (size_t d = 0; d < doc_terms_.size(); ++d) {
    double sum = 0.0;
    for (const auto& [term, tf] : doc_terms_[d]) {
      const double w = doc_weight(tf) * std::log(n / static_cast<double>(postings_.at(term).size()));
      sum += w * w;
    }
    doc_norms_[d] = std::sqrt(sum);
  }
}

int Index::doc_index_of(const std::string& doc_id) const {
  auto it = id_to_idx_.find(doc_id);
  return it == id_to_idx_.end() ? -1 : it->second;
}

TermStats Index::term_stats(const std::string& term) const {
  TermStats stats;
  const double n = static_cast<double>(doc_count());
  auto it = postings_.find(term);
  if (it == postings_.end()) {
    stats.idf = std::log(n + 1.0);  // out-of-vocabulary ceiling
    return stats;
  }
  stats.df = static_cast<long long>(it->second.size());
  stats.idf = std::log(n / static_cast<double>(stats.df));
  stats.ctf = ctf_.at(term);
  return stats;
}

long long Index::joint_doc_freq(const std::string& a, const std::string& b) const {
  auto ia = postings_.find(a);
  auto ib = postings_.find(b);
  if (ia == postings_.end() || ib == postings_.end()) return 0;
  const auto& pa = ia->second;
  const auto& pb = ib->second;
  long long joint = 0;
  size_t i = 0, j = 0;
  while (i < pa.size() && j < pb.size()) {
    if (pa[i].first == pb[j].first) {
      ++joint;
      ++i;
      ++j;
    } else if (pa[i].first < pb[j].first) {
      ++i;
    } else {
      ++j;
    }
  }
  return joint;
}

std::vector<int> Index::docs_containing(const std::string& term) const {
  auto it = postings_.find(term);
  if (it == postings_.end()) return {};
  std::vector<int> docs;
  docs.reserve(it->second.size());
  for (const auto& [d, tf] : it->second) docs.push_back(d);
  return docs;
}

std::vector<int> Index::top_docs_for_term(const std::string& term, size_t limit) const {
  auto it = postings_.find(term);
  if (it == postings_.end() || limit == 0) return {};
  const double idf_t = term_stats(term).idf;
  std::vector<std::pair<double, int>> scored;  // (score, doc idx)
  scored.reserve(it->second.size());
  for (const auto& [d, tf] : it->second) {
    if (doc_norms_[d] <= 0.0) continue;
    scored.emplace_back(doc_weight(tf) * idf_t / doc_norms_[d], d);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  if (scored.size() > limit) scored.resize(limit);
  std::vector<int> docs;
  docs.reserve(scored.size());
  for (const auto& [score, d] : scored) docs.push_back(d);
  return docs;
}

double Index::doc_cosine(int a, int b) const {
  if (a == b) return 1.0;
  if (doc_norms_[a] <= 0.0 || doc_norms_[b] <= 0.0) return 0.0;
  // Iterate the lower-index document's terms so (a,b) and (b,a) accumulate
  // in the same order.
  const int lo = std::min(a, b);
  const int hi = std::max(a, b);
  const auto& terms_lo = doc_terms_[lo];
  const auto& terms_hi = doc_terms_[hi];
  const double n = static_cast<double>(doc_count());
  double dot = 0.0;
  for (const auto& [term, tf_lo] : terms_lo) {
    auto it = terms_hi.find(term);
    if (it == terms_hi.end()) continue;
    const double idf_t = std::log(n / static_cast<double>(postings_.at(term).size()));
    dot += doc_weight(tf_lo) * idf_t * doc_weight(it->second) * idf_t;
  }
  return dot / (doc_norms_[lo] * doc_norms_[hi]);
}

std::vector<SearchResult> Index::search(const std::vector<std::string>& query_terms, size_t k) const {
  if (k == 0 || query_terms.empty()) return {};
  std::map<std::string, int> qtf;
  for (const auto& t : query_terms) ++qtf[t];
  // Term-at-a-time accumulation in ascending term order keeps per-document
  // addition order deterministic and oracle-comparable.
  std::vector<double> dot(doc_terms_.size(), 0.0);
  const double n = static_cast<double>(doc_count());
  for (const auto& [term, tf] : qtf) {
    auto it = postings_.find(term);
    if (it == postings_.end()) continue;
    const double idf_t = std::log(n / static_cast<double>(it->second.size()));
    if (idf_t == 0.0) continue;
    const double wq = static_cast<double>(tf) * idf_t;
    for (const auto& [d, dtf] : it->second) {
      dot[d] += wq * doc_weight(dtf) * idf_t;
    }
  }
  std::vector<SearchResult> results;
  for (size_t d = 0; d < dot.size(); ++d) {
    if (dot[d] <= 0.0 || doc_norms_[d] <= 0.0) continue;
    results.push_back(SearchResult{doc_ids_[d], dot[d] / doc_norms_[d]});
  }
  std::sort(results.begin(), results.end(), [](const SearchResult& a, const SearchResult& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc_id < b.doc_id;
  });
  if (results.size() > k) results.resize(k);
  return results;
}

Preprocessor IndexConfig::make_preprocessor() const {
  TokenSplitter splitter;
  if (use_lexicon) {
    SplitLexicon lex;
    for (const auto& [word, freq] : lexicon) lex.add_word(word, freq);
    splitter = TokenSplitter(std::move(lex));
  }
  return Preprocessor(options, stopwords, keywords, std::move(splitter));
}

std::string config_fingerprint(const IndexConfig& config) {
  std::string canon;
  canon += "ext=" + config.extension;
  canon += ";stem=" + std::to_string(config.options.stemming ? 1 : 0);
  canon += ";minlen=" + std::to_string(config.options.min_term_length);
  canon += ";orig=" + std::to_string(config.options.keep_original_tokens ? 1 : 0);
  canon += ";lex=" + std::to_string(config.use_lexicon ? 1 : 0);
  canon += ";lexfreq=" + std::to_string(config.lexicon_min_freq);
  canon += ";stop=";
  for (const auto& w : config.stopwords) canon += w + ",";
  canon += ";kw=";
  for (const auto& w : config.keywords) canon += w + ",";
  canon += ";lexicon=";
  for (const auto& [w, f] : config.lexicon) canon += w + ":" + std::to_string(f) + ",";
  return hex64(fnv1a64(canon));
}

void save_index(const Index& index, const IndexConfig& config, const std::filesystem::path& path) {
  json j;
  j["magic"] = "acer-index";
  j["version"] = 1;
  j["corpus_root"] = config.corpus_root;
  j["extension"] = config.extension;
  j["options"] = {
      {"stemming", config.options.stemming},
      {"min_term_length", config.options.min_term_length},
      {"keep_original_tokens", config.options.keep_original_tokens},
  };
  j["use_lexicon"] = config.use_lexicon;
  j["lexicon_min_freq"] = config.lexicon_min_freq;
  j["stopwords"] = config.stopwords;
  j["keywords"] = config.keywords;
  j["lexicon"] = config.lexicon;
  json docs = json::array();
  for (int d = 0; d < index.doc_count(); ++d) {
    json terms = json::object();
    for (const auto& [term, tf] : index.doc_terms(d)) terms[term] = tf;
    docs.push_back({{"id", index.doc_ids()[d]}, {"terms", std::move(terms)}});
  }
  j["docs"] = std::move(docs);
  write_text_file(path, j.dump(1) + "\n");
}

LoadedIndex load_index(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw DataError("malformed index file " + path.generic_string() + ": " + e.what());
  }
  try {
    if (!j.is_object() || j.value("magic", "") != "acer-index") {
      throw DataError("not an index file (bad magic): " + path.generic_string());
    }
    if (j.value("version", 0) != 1) {
      throw DataError("unsupported index version in " + path.generic_string());
    }
    IndexConfig config;
    config.corpus_root = j.value("corpus_root", "");
    config.extension = j.value("extension", ".java");
    const json& opts = j.at("options");
    config.options.stemming = opts.value("stemming", false);
    config.options.min_term_length = opts.value("min_term_length", 3);
    config.options.keep_original_tokens = opts.value("keep_original_tokens", true);
    config.use_lexicon = j.value("use_lexicon", false);
    config.lexicon_min_freq = j.value("lexicon_min_freq", 2);
    config.stopwords = j.at("stopwords").get<std::set<std::string>>();
    config.keywords = j.at("keywords").get<std::set<std::string>>();
    config.lexicon = j.at("lexicon").get<std::map<std::string, int>>();

    std::vector<std::string> ids;
    std::vector<std::map<std::string, int>> maps;
    for (const auto& doc : j.at("docs")) {
      ids.push_back(doc.at("id").get<std::string>());
      maps.push_back(doc.at("terms").get<std::map<std::string, int>>());
    }
    return LoadedIndex{Index::from_term_maps(std::move(ids), std::move(maps)), std::move(config)};
  } catch (const json::exception& e) {
    throw DataError("malformed index file " + path.generic_string() + ": " + e.what());
  }
}

}  // namespace acer
