#include "acer/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <set>

#include "acer/util.hpp"
#include "json.hpp"

namespace acer {

namespace {

std::vector<std::string> repeat_twice(const std::vector<std::string>& terms) {
  std::vector<std::string> out = terms;
  out.insert(out.end(), terms.begin(), terms.end());
  return out;
}

std::vector<std::string> rank_positive_scores(const std::map<std::string, double>& scores,
                                              size_t k) {
  std::vector<std::pair<std::string, double>> ranked;
  for (const auto& [term, score] : scores) {
    if (score > 0.0) ranked.emplace_back(term, score);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (ranked.size() > k) ranked.resize(k);
  std::vector<std::string> terms;
  terms.reserve(ranked.size());
  for (const auto& [term, score] : ranked) terms.push_back(term);
  return terms;
}

}  // namespace

std::vector<std::string> ReformulationCandidate::terms() const {
  std::vector<std::string> out;
  out.reserve(scored.size());
  for (const auto& [term, score] : scored) out.push_back(term);
  return out;
}

std::string baseline_method_name(BaselineMethod method) {
  switch (method) {
    case BaselineMethod::tf:
      return "tf";
    case BaselineMethod::tfidf:
      return "tfidf";
    case BaselineMethod::rocchio:
      return "rocchio";
    case BaselineMethod::rsv:
      return "rsv";
  }
  return "tf";
}

std::string baseline_scope_name(BaselineScope scope) {
  switch (scope) {
    case BaselineScope::msig:
      return "msig";
    case BaselineScope::fsig:
      return "fsig";
    case BaselineScope::comb:
      return "comb";
    case BaselineScope::all:
      return "all";
  }
  return "all";
}

std::optional<BaselineMethod> parse_baseline_method(const std::string& name) {
  if (name == "tf") return BaselineMethod::tf;
  if (name == "tfidf") return BaselineMethod::tfidf;
  if (name == "rocchio") return BaselineMethod::rocchio;
  if (name == "rsv") return BaselineMethod::rsv;
  return std::nullopt;
}

std::optional<BaselineScope> parse_baseline_scope(const std::string& name) {
  if (name == "msig") return BaselineScope::msig;
  if (name == "fsig") return BaselineScope::fsig;
  if (name == "comb") return BaselineScope::comb;
  if (name == "all") return BaselineScope::all;
  return std::nullopt;
}

Reformulator::Reformulator(const Index& index, Preprocessor preprocessor,
                           RawTextProvider raw_text, ReformulationParams params)
    : index_(&index),
      preprocessor_(std::move(preprocessor)),
      raw_text_(std::move(raw_text)),
      params_(params) {}

std::vector<std::string> Reformulator::preprocess_query(const std::string& text) const {
  QueryTerms terms = preprocessor_.preprocess_with_originals(text);
  if (terms.search_terms.empty()) {
    throw UsageError("query is empty after preprocessing");
  }
  return terms.search_terms;
}

ReformulationCandidate Reformulator::get_qr_candidate(const SignatureTokens& token_set,
                                                      int k) const {
  if (k < 1) throw UsageError("reformulation size must be at least 1");
  ReformulationCandidate candidate;
  candidate.kind = token_set.kind;
  candidate.quality.kind = token_set.kind;
  if (token_set.tokens.empty()) {
    candidate.flagged_empty = true;
    return candidate;
  }
  TermGraph graph = build_term_graph(token_set, preprocessor_, params_.rank);
  if (graph.vertex_count() == 0) {
    candidate.flagged_empty = true;
    return candidate;
  }
  CodeRankScores scores = code_rank(graph, params_.rank);
  candidate.scored = top_k_scored(scores, static_cast<size_t>(k));
  return candidate;
}

std::vector<SourceDocument> Reformulator::fetch_feedback_docs(
    const std::vector<SearchResult>& hits) const {
  std::vector<SourceDocument> docs;
  docs.reserve(hits.size());
  for (const SearchResult& hit : hits) {
    std::optional<std::string> raw = raw_text_(hit.doc_id);
    if (!raw) {
      throw DataError("cannot read feedback document: " + hit.doc_id);
    }
    SourceDocument doc;
    doc.id = hit.doc_id;
    doc.raw = std::move(*raw);
    docs.push_back(std::move(doc));
  }
  return docs;
}

ReformulatedQuery Reformulator::reformulate(const ReformulationRequest& request,
                                            const Ensemble* ensemble) const {
  if (request.feedback_size < 1) throw UsageError("feedback size must be at least 1");
  if (request.reformulation_size < 1) throw UsageError("reformulation size must be at least 1");
  std::set<CandidateKind> seen_sources;
  for (CandidateKind kind : request.sources) {
    if (kind == CandidateKind::baseline) {
      throw UsageError("baseline cannot be a candidate source");
    }
    if (!seen_sources.insert(kind).second) {
      throw UsageError(std::string("duplicate candidate source: ") + candidate_kind_name(kind));
    }
  }

  ReformulatedQuery out;
  out.query_id = request.query_id;
  out.initial_terms = preprocess_query(request.query_text);

  ReformulationCandidate baseline;
  baseline.kind = CandidateKind::baseline;
  baseline.quality =
      compute_quality_metrics(out.initial_terms, *index_, params_.coherence_depth);
  baseline.quality.kind = CandidateKind::baseline;
  baseline.has_quality = true;

  std::vector<SearchResult> hits =
      index_->search(out.initial_terms, static_cast<size_t>(request.feedback_size));
  if (hits.empty()) {
    out.used_fallback = true;
    out.warning = "no pseudo-relevance feedback retrieved; repeating the initial query terms";
    out.candidates.push_back(std::move(baseline));
    out.chosen = CandidateKind::baseline;
    out.final_terms = repeat_twice(out.initial_terms);
    return out;
  }
  for (const SearchResult& hit : hits) out.feedback_docs.push_back(hit.doc_id);

  std::vector<SourceDocument> docs = fetch_feedback_docs(hits);
  std::vector<const SourceDocument*> doc_ptrs;
  doc_ptrs.reserve(docs.size());
  for (const SourceDocument& doc : docs) doc_ptrs.push_back(&doc);

  for (CandidateKind kind : request.sources) {
    SignatureTokens tokens = collect_candidate_tokens(doc_ptrs, kind, preprocessor_.splitter());
    ReformulationCandidate candidate = get_qr_candidate(tokens, request.reformulation_size);
    if (!candidate.flagged_empty) {
      candidate.quality =
          compute_quality_metrics(candidate.terms(), *index_, params_.coherence_depth);
      candidate.quality.kind = kind;
      candidate.has_quality = true;
    }
    out.candidates.push_back(std::move(candidate));
  }
  out.candidates.push_back(std::move(baseline));

  if (!ensemble) return out;  // pass-through: audit only, no selection

  std::vector<SelectionCandidate> selectable;
  for (const ReformulationCandidate& candidate : out.candidates) {
    if (candidate.flagged_empty) continue;
    SelectionCandidate sc;
    sc.kind = candidate.kind;
    sc.terms = candidate.terms();
    sc.features = candidate.quality.values;
    selectable.push_back(std::move(sc));
  }
  SelectionResult selection = select_best(selectable, *ensemble, out.initial_terms);
  out.probabilities = selection.probabilities;
  out.chosen = selection.kind;
  if (selection.kind == CandidateKind::baseline) {
    out.final_terms = selection.terms;  // initial query repeated
  } else {
    out.final_terms = combine(out.initial_terms, selection.terms);
  }
  return out;
}

BaselineReformulation Reformulator::baseline_reformulate(BaselineMethod method,
                                                         BaselineScope scope,
                                                         const std::string& query_text,
                                                         int feedback_size,
                                                         int expansion_size) const {
  if (feedback_size < 1) throw UsageError("feedback size must be at least 1");
  if (expansion_size < 1) throw UsageError("expansion size must be at least 1");
  if ((method == BaselineMethod::rocchio || method == BaselineMethod::rsv) &&
      scope != BaselineScope::all) {
    throw UsageError(baseline_method_name(method) + " supports whole-document scope only");
  }

  std::vector<std::string> initial = preprocess_query(query_text);
  std::vector<SearchResult> hits =
      index_->search(initial, static_cast<size_t>(feedback_size));
  BaselineReformulation out;
  if (hits.empty()) {
    out.used_fallback = true;
    out.final_terms = repeat_twice(initial);
    return out;
  }

  std::map<std::string, double> scores;
  switch (method) {
    case BaselineMethod::tf:
    case BaselineMethod::tfidf: {
      std::map<std::string, long long> counts;
      if (scope == BaselineScope::all) {
        for (const SearchResult& hit : hits) {
          int idx = index_->doc_index_of(hit.doc_id);
          for (const auto& [term, tf] : index_->doc_terms(idx)) counts[term] += tf;
        }
      } else {
        CandidateKind kind = scope == BaselineScope::msig   ? CandidateKind::msig
                             : scope == BaselineScope::fsig ? CandidateKind::fsig
                                                            : CandidateKind::comb;
        std::vector<SourceDocument> docs = fetch_feedback_docs(hits);
        std::vector<const SourceDocument*> doc_ptrs;
        for (const SourceDocument& doc : docs) doc_ptrs.push_back(&doc);
        SignatureTokens tokens =
            collect_candidate_tokens(doc_ptrs, kind, preprocessor_.splitter());
        for (const SignatureToken& token : tokens.tokens) {
          for (const std::string& piece : preprocessor_.preprocess_text(token.token)) {
            counts[piece] += 1;
          }
        }
      }
      for (const auto& [term, count] : counts) {
        scores[term] = method == BaselineMethod::tf
                           ? static_cast<double>(count)
                           : static_cast<double>(count) * index_->idf(term);
      }
      break;
    }
    case BaselineMethod::rocchio: {
      const double feedback_count = static_cast<double>(hits.size());
      for (const SearchResult& hit : hits) {
        int idx = index_->doc_index_of(hit.doc_id);
        double norm = index_->doc_norm(idx);
        if (norm <= 0.0) continue;
        for (const auto& [term, tf] : index_->doc_terms(idx)) {
          double weight = (1.0 + std::log(static_cast<double>(tf))) * index_->idf(term);
          scores[term] += weight / norm;
        }
      }
      for (auto& [term, score] : scores) score /= feedback_count;
      break;
    }
    case BaselineMethod::rsv: {
      const double feedback_count = static_cast<double>(hits.size());
      const double corpus_count = static_cast<double>(index_->doc_count());
      std::map<std::string, int> in_feedback;
      for (const SearchResult& hit : hits) {
        int idx = index_->doc_index_of(hit.doc_id);
        for (const auto& [term, tf] : index_->doc_terms(idx)) in_feedback[term] += 1;
      }
      for (const auto& [term, r] : in_feedback) {
        double df = static_cast<double>(index_->term_stats(term).df);
        double weight = std::log(((r + 0.5) * (corpus_count - df - feedback_count + r + 0.5)) /
                                 ((df - r + 0.5) * (feedback_count - r + 0.5)));
        scores[term] = weight * (r / feedback_count - df / corpus_count);
      }
      break;
    }
  }

  out.expansion = rank_positive_scores(scores, static_cast<size_t>(expansion_size));
  out.final_terms = combine(initial, out.expansion);
  return out;
}

std::vector<std::string> Reformulator::combine(const std::vector<std::string>& initial,
                                               const std::vector<std::string>& candidate) {
  std::set<std::string> present(initial.begin(), initial.end());
  std::vector<std::string> out = initial;
  for (const std::string& term : candidate) {
    if (present.insert(term).second) out.push_back(term);
  }
  return out;
}

Reformulator::RawTextProvider make_corpus_provider(const Corpus& corpus) {
  auto by_id = std::make_shared<std::map<std::string, const std::string*>>();
  for (const SourceDocument& doc : corpus.docs) {
    (*by_id)[doc.id] = &doc.raw;
  }
  return [by_id](const std::string& doc_id) -> std::optional<std::string> {
    auto it = by_id->find(doc_id);
    if (it == by_id->end()) return std::nullopt;
    return *it->second;
  };
}

Reformulator::RawTextProvider make_file_provider(std::filesystem::path root) {
  return [root = std::move(root)](const std::string& doc_id) -> std::optional<std::string> {
    std::filesystem::path file = root / std::filesystem::path(doc_id);
    std::error_code ec;
    if (!std::filesystem::is_regular_file(file, ec)) return std::nullopt;
    try {
      return read_text_file(file);
    } catch (const DataError&) {
      return std::nullopt;
    }
  };
}

std::string reformulated_query_to_json_text(const ReformulatedQuery& record) {
  using json = nlohmann::json;
  json j;
  j["query_id"] = record.query_id;
  j["initial_terms"] = record.initial_terms;
  j["feedback_docs"] = record.feedback_docs;
  json cands = json::array();
  for (const ReformulationCandidate& cand : record.candidates) {
    json c;
    c["kind"] = candidate_kind_name(cand.kind);
    json scored = json::array();
    for (const auto& [term, score] : cand.scored) {
      scored.push_back(json::array({term, score}));
    }
    c["scored"] = std::move(scored);
    c["has_quality"] = cand.has_quality;
    c["flagged_empty"] = cand.flagged_empty;
    if (cand.has_quality) {
      c["quality"] = cand.quality.values;
    }
    cands.push_back(std::move(c));
  }
  j["candidates"] = std::move(cands);
  json probs = json::object();
  for (const auto& [kind, p] : record.probabilities) {
    probs[candidate_kind_name(kind)] = p;
  }
  j["probabilities"] = std::move(probs);
  if (record.chosen) {
    j["chosen"] = candidate_kind_name(*record.chosen);
  } else {
    j["chosen"] = nullptr;
  }
  j["final_terms"] = record.final_terms;
  j["used_fallback"] = record.used_fallback;
  j["warning"] = record.warning;
  return j.dump();
}

ReformulatedQuery reformulated_query_from_json_text(const std::string& text) {
  using json = nlohmann::json;
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw DataError("malformed reformulation record: not a JSON object");
  }
  auto require = [&](const char* key) -> const json& {
    auto it = j.find(key);
    if (it == j.end()) {
      throw DataError(std::string("malformed reformulation record: missing field '") + key + "'");
    }
    return *it;
  };
  auto parse_kind = [](const std::string& name) {
    std::optional<CandidateKind> kind = parse_candidate_kind(name);
    if (!kind) throw DataError("malformed reformulation record: unknown kind '" + name + "'");
    return *kind;
  };
  try {
    ReformulatedQuery record;
    record.query_id = require("query_id").get<std::string>();
    record.initial_terms = require("initial_terms").get<std::vector<std::string>>();
    record.feedback_docs = require("feedback_docs").get<std::vector<std::string>>();
    for (const json& c : require("candidates")) {
      ReformulationCandidate cand;
      cand.kind = parse_kind(c.at("kind").get<std::string>());
      for (const json& pair : c.at("scored")) {
        cand.scored.emplace_back(pair.at(0).get<std::string>(), pair.at(1).get<double>());
      }
      cand.has_quality = c.at("has_quality").get<bool>();
      cand.flagged_empty = c.at("flagged_empty").get<bool>();
      if (cand.has_quality) {
        const json& q = c.at("quality");
        if (!q.is_array() || q.size() != kQualityMetricCount) {
          throw DataError("malformed reformulation record: quality vector size mismatch");
        }
        for (size_t i = 0; i < kQualityMetricCount; ++i) {
          cand.quality.values[i] = q[i].get<double>();
        }
        cand.quality.kind = cand.kind;
      }
      record.candidates.push_back(std::move(cand));
    }
    for (const auto& [name, p] : require("probabilities").items()) {
      record.probabilities[parse_kind(name)] = p.get<double>();
    }
    const json& chosen = require("chosen");
    if (!chosen.is_null()) {
      record.chosen = parse_kind(chosen.get<std::string>());
    }
    record.final_terms = require("final_terms").get<std::vector<std::string>>();
    record.used_fallback = require("used_fallback").get<bool>();
    record.warning = require("warning").get<std::string>();
    return record;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed reformulation record: ") + e.what());
  }
}

}  // namespace acer
