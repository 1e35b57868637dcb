#include "acer/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <regex>
#include <sstream>

#include "acer/util.hpp"
#include "json.hpp"

namespace acer {

namespace {

std::string fmt(const char* spec, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, value);
  return buf;
}

std::string qe_text(const std::optional<long long>& qe) {
  return qe ? std::to_string(*qe) : "none";
}

void append_metrics_json(nlohmann::json& out, const std::vector<RetrievalMetrics>& metrics) {
  out = nlohmann::json::array();
  for (const RetrievalMetrics& m : metrics) {
    nlohmann::json j;
    j["k"] = m.k;
    j["queries"] = m.queries;
    j["mrr"] = m.mrr;
    j["top_k_accuracy"] = m.top_k_accuracy;
    out.push_back(std::move(j));
  }
}

nlohmann::json rank_stats_json(const RankStats& stats) {
  nlohmann::json j;
  j["count"] = stats.count;
  j["mean"] = stats.mean;
  j["q1"] = stats.q1;
  j["q2"] = stats.q2;
  j["q3"] = stats.q3;
  j["min"] = stats.min;
  j["max"] = stats.max;
  return j;
}

}  // namespace

bool has_stack_trace(const std::string& text) {
  static const std::regex frame(R"(at\s+[A-Za-z0-9_$.]+\([A-Za-z0-9_$]+\.java:\d+\))");
  return std::regex_search(text, frame);
}

std::vector<ChangeRequest> ingest_dataset(const std::filesystem::path& file, const Index& index,
                                          IngestStats* stats) {
  IngestStats local;
  IngestStats& st = stats ? *stats : local;
  std::string text = read_text_file(file);
  std::istringstream in(text);
  std::string line;
  size_t line_no = 0;
  std::vector<ChangeRequest> requests;
  std::set<std::string> seen_ids;
  auto warn = [&](const std::string& message) {
    st.warnings.push_back(file.filename().string() + ":" + std::to_string(line_no) + ": " +
                          message);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++st.parsed;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception&) {
      ++st.malformed;
      warn("not valid JSON, skipped");
      continue;
    }
    if (!j.is_object() || !j.contains("id") || !j["id"].is_string() ||
        !j.contains("title") || !j["title"].is_string() || !j.contains("description") ||
        !j["description"].is_string() || !j.contains("goldset") || !j["goldset"].is_array()) {
      ++st.malformed;
      warn("missing or mistyped fields, skipped");
      continue;
    }
    ChangeRequest request;
    request.id = j["id"].get<std::string>();
    request.title = j["title"].get<std::string>();
    request.description = j["description"].get<std::string>();
    if (request.id.empty() || request.title.empty()) {
      ++st.malformed;
      warn("empty id or title, skipped");
      continue;
    }
    bool goldset_ok = true;
    for (const auto& entry : j["goldset"]) {
      if (!entry.is_string()) {
        goldset_ok = false;
        break;
      }
    }
    if (!goldset_ok) {
      ++st.malformed;
      warn("goldset must be an array of strings, skipped");
      continue;
    }
    if (!seen_ids.insert(request.id).second) {
      ++st.duplicate_ids;
      warn("duplicate request id " + request.id + ", skipped");
      continue;
    }
    if (has_stack_trace(request.description)) {
      ++st.dropped_stack_trace;
      warn("request " + request.id + " contains a stack trace, excluded");
      continue;
    }
    std::set<std::string> kept_paths;
    for (const auto& entry : j["goldset"]) {
      std::string path = entry.get<std::string>();
      if (index.doc_index_of(path) < 0) {
        warn("request " + request.id + ": goldset file not in corpus: " + path);
        continue;
      }
      if (kept_paths.insert(path).second) request.goldset.push_back(path);
    }
    if (request.goldset.empty()) {
      ++st.dropped_goldset;
      warn("request " + request.id + " has no goldset files in the corpus, dropped");
      continue;
    }
    ++st.kept;
    requests.push_back(std::move(request));
  }
  if (requests.empty()) {
    throw DataError("no valid change requests in " + file.string());
  }
  return requests;
}

double QueryRun::reciprocal_rank(long long k) const {
  if (!qe || *qe > k) return 0.0;
  return 1.0 / static_cast<double>(*qe);
}

std::optional<long long> query_effectiveness(const std::vector<std::string>& ranked,
                                             const std::set<std::string>& goldset) {
  for (size_t i = 0; i < ranked.size(); ++i) {
    if (goldset.count(ranked[i])) return static_cast<long long>(i + 1);
  }
  return std::nullopt;
}

QueryRun run_query(const Index& index, std::string technique, std::string query_id,
                   const std::vector<std::string>& terms, const std::set<std::string>& goldset,
                   size_t depth) {
  QueryRun run;
  run.query_id = std::move(query_id);
  run.technique = std::move(technique);
  for (const SearchResult& hit : index.search(terms, depth)) {
    run.ranked.push_back(hit.doc_id);
  }
  run.qe = query_effectiveness(run.ranked, goldset);
  return run;
}

RetrievalMetrics retrieval_metrics(const std::vector<QueryRun>& runs, long long k) {
  if (runs.empty()) throw UsageError("retrieval metrics need at least one run");
  RetrievalMetrics metrics;
  metrics.k = k;
  metrics.queries = static_cast<int>(runs.size());
  double rr_sum = 0.0;
  int hits = 0;
  for (const QueryRun& run : runs) {
    rr_sum += run.reciprocal_rank(k);
    if (run.qe && *run.qe <= k) ++hits;
  }
  metrics.mrr = rr_sum / static_cast<double>(runs.size());
  metrics.top_k_accuracy = static_cast<double>(hits) / static_cast<double>(runs.size());
  return metrics;
}

std::string outcome_name(Outcome outcome) {
  switch (outcome) {
    case Outcome::improved:
      return "improved";
    case Outcome::worsened:
      return "worsened";
    case Outcome::preserved:
      return "preserved";
    case Outcome::unresolved:
      return "unresolved";
  }
  return "unresolved";
}

Outcome classify_outcome(std::optional<long long> baseline_qe,
                         std::optional<long long> reformulated_qe) {
  if (!baseline_qe && !reformulated_qe) return Outcome::unresolved;
  if (!baseline_qe) return Outcome::improved;
  if (!reformulated_qe) return Outcome::worsened;
  if (*reformulated_qe < *baseline_qe) return Outcome::improved;
  if (*reformulated_qe > *baseline_qe) return Outcome::worsened;
  return Outcome::preserved;
}

double quantile(const std::vector<double>& sorted_values, double p) {
  if (sorted_values.empty()) return 0.0;
  if (sorted_values.size() == 1) return sorted_values[0];
  double h = static_cast<double>(sorted_values.size() - 1) * p;
  size_t lo = static_cast<size_t>(h);
  if (lo + 1 >= sorted_values.size()) return sorted_values.back();
  double frac = h - static_cast<double>(lo);
  return sorted_values[lo] + frac * (sorted_values[lo + 1] - sorted_values[lo]);
}

RankStats make_rank_stats(std::vector<long long> ranks) {
  RankStats stats;
  if (ranks.empty()) return stats;
  std::sort(ranks.begin(), ranks.end());
  stats.count = static_cast<int>(ranks.size());
  stats.min = ranks.front();
  stats.max = ranks.back();
  std::vector<double> values(ranks.begin(), ranks.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  stats.mean = sum / static_cast<double>(values.size());
  stats.q1 = quantile(values, 0.25);
  stats.q2 = quantile(values, 0.50);
  stats.q3 = quantile(values, 0.75);
  return stats;
}

EvaluationReport build_report(const std::vector<QueryRun>& baseline_runs,
                              const std::vector<std::vector<QueryRun>>& technique_runs,
                              const std::vector<long long>& ks, size_t result_depth) {
  if (baseline_runs.empty()) throw UsageError("report needs baseline runs");
  if (ks.empty()) throw UsageError("report needs at least one k");
  std::map<std::string, const QueryRun*> baseline_by_id;
  for (const QueryRun& run : baseline_runs) {
    if (!baseline_by_id.emplace(run.query_id, &run).second) {
      throw UsageError("duplicate baseline run for query " + run.query_id);
    }
  }

  EvaluationReport report;
  report.baseline_technique = baseline_runs.front().technique;
  report.ks = ks;
  report.result_depth = result_depth;
  report.query_count = static_cast<int>(baseline_by_id.size());
  for (long long k : ks) report.baseline_metrics.push_back(retrieval_metrics(baseline_runs, k));

  for (const std::vector<QueryRun>& runs : technique_runs) {
    if (runs.empty()) throw UsageError("a technique has no runs");
    TechniqueReport tech;
    tech.technique = runs.front().technique;
    std::map<std::string, const QueryRun*> by_id;
    for (const QueryRun& run : runs) {
      if (!by_id.emplace(run.query_id, &run).second) {
        throw UsageError("duplicate run for query " + run.query_id + " in technique " +
                         tech.technique);
      }
    }
    if (by_id.size() != baseline_by_id.size()) {
      throw UsageError("technique " + tech.technique +
                       " does not cover the baseline query set");
    }
    OutcomeBreakdown& oc = tech.outcomes;
    std::vector<long long> improved_ranks;
    std::vector<long long> worsened_ranks;
    std::vector<long long> preserved_ranks;
    double mrd_improved_sum = 0.0;
    double mrd_worsened_sum = 0.0;
    double mrd_preserved_sum = 0.0;
    int mrd_improved_n = 0;
    int mrd_worsened_n = 0;
    int mrd_preserved_n = 0;
    for (const auto& [id, baseline] : baseline_by_id) {
      auto it = by_id.find(id);
      if (it == by_id.end()) {
        throw UsageError("technique " + tech.technique + " is missing query " + id);
      }
      const QueryRun* run = it->second;
      ++oc.total;
      Outcome outcome = classify_outcome(baseline->qe, run->qe);
      bool both = baseline->qe.has_value() && run->qe.has_value();
      double diff = both ? static_cast<double>(*run->qe - *baseline->qe) : 0.0;
      switch (outcome) {
        case Outcome::improved:
          ++oc.improved;
          if (run->qe) improved_ranks.push_back(*run->qe);
          if (both) {
            mrd_improved_sum += diff;
            ++mrd_improved_n;
          }
          break;
        case Outcome::worsened:
          ++oc.worsened;
          if (run->qe) worsened_ranks.push_back(*run->qe);
          if (both) {
            mrd_worsened_sum += diff;
            ++mrd_worsened_n;
          }
          break;
        case Outcome::preserved:
          ++oc.preserved;
          if (run->qe) preserved_ranks.push_back(*run->qe);
          if (both) {
            mrd_preserved_sum += diff;
            ++mrd_preserved_n;
          }
          break;
        case Outcome::unresolved:
          ++oc.unresolved;
          break;
      }
    }
    double total = static_cast<double>(oc.total);
    oc.improved_pct = 100.0 * oc.improved / total;
    oc.worsened_pct = 100.0 * oc.worsened / total;
    oc.preserved_pct = 100.0 * oc.preserved / total;
    oc.improved_ranks = make_rank_stats(std::move(improved_ranks));
    oc.worsened_ranks = make_rank_stats(std::move(worsened_ranks));
    oc.preserved_ranks = make_rank_stats(std::move(preserved_ranks));
    oc.mrd_improved = mrd_improved_n ? mrd_improved_sum / mrd_improved_n : 0.0;
    oc.mrd_worsened = mrd_worsened_n ? mrd_worsened_sum / mrd_worsened_n : 0.0;
    oc.mrd_preserved = mrd_preserved_n ? mrd_preserved_sum / mrd_preserved_n : 0.0;
    for (long long k : ks) tech.metrics.push_back(retrieval_metrics(runs, k));
    report.techniques.push_back(std::move(tech));
  }
  return report;
}

std::string runs_to_tsv(const std::vector<QueryRun>& runs, long long k) {
  std::string out = "query_id\ttechnique\tqe\trr@" + std::to_string(k) + "\n";
  for (const QueryRun& run : runs) {
    out += run.query_id + "\t" + run.technique + "\t" + qe_text(run.qe) + "\t" +
           fmt("%.6f", run.reciprocal_rank(k)) + "\n";
  }
  return out;
}

std::string report_to_tsv(const EvaluationReport& report) {
  std::string out;
  out += "# query reformulation evaluation\n";
  out += "# baseline: " + report.baseline_technique + "\n";
  out += "# queries: " + std::to_string(report.query_count) + "\n";
  out += "# result depth: " + std::to_string(report.result_depth) +
         " (hits below this rank count as not retrieved)\n";
  out += "\n[outcomes]\n";
  out +=
      "technique\timproved\timproved_pct\tworsened\tworsened_pct\tpreserved\t"
      "preserved_pct\tunresolved\tmrd_improved\tmrd_worsened\tmrd_preserved\n";
  for (const TechniqueReport& tech : report.techniques) {
    const OutcomeBreakdown& oc = tech.outcomes;
    out += tech.technique + "\t" + std::to_string(oc.improved) + "\t" +
           fmt("%.2f", oc.improved_pct) + "\t" + std::to_string(oc.worsened) + "\t" +
           fmt("%.2f", oc.worsened_pct) + "\t" + std::to_string(oc.preserved) + "\t" +
           fmt("%.2f", oc.preserved_pct) + "\t" + std::to_string(oc.unresolved) + "\t" +
           fmt("%.2f", oc.mrd_improved) + "\t" + fmt("%.2f", oc.mrd_worsened) + "\t" +
           fmt("%.2f", oc.mrd_preserved) + "\n";
  }
  out += "\n[rank_stats]\n";
  out += "technique\tclass\tcount\tmean\tq1\tq2\tq3\tmin\tmax\n";
  for (const TechniqueReport& tech : report.techniques) {
    const OutcomeBreakdown& oc = tech.outcomes;
    const std::pair<const char*, const RankStats*> rows[] = {
        {"improved", &oc.improved_ranks},
        {"worsened", &oc.worsened_ranks},
        {"preserved", &oc.preserved_ranks},
    };
    for (const auto& [name, stats] : rows) {
      out += tech.technique + "\t" + name + "\t" + std::to_string(stats->count) + "\t" +
             fmt("%.2f", stats->mean) + "\t" + fmt("%.2f", stats->q1) + "\t" +
             fmt("%.2f", stats->q2) + "\t" + fmt("%.2f", stats->q3) + "\t" +
             std::to_string(stats->min) + "\t" + std::to_string(stats->max) + "\n";
    }
  }
  out += "\n[metrics]\n";
  out += "technique\tk\tmrr\ttop_k_accuracy\n";
  for (const RetrievalMetrics& m : report.baseline_metrics) {
    out += report.baseline_technique + "\t" + std::to_string(m.k) + "\t" +
           fmt("%.4f", m.mrr) + "\t" + fmt("%.4f", m.top_k_accuracy) + "\n";
  }
  for (const TechniqueReport& tech : report.techniques) {
    for (const RetrievalMetrics& m : tech.metrics) {
      out += tech.technique + "\t" + std::to_string(m.k) + "\t" + fmt("%.4f", m.mrr) + "\t" +
             fmt("%.4f", m.top_k_accuracy) + "\n";
    }
  }
  return out;
}

std::string report_to_json_text(const EvaluationReport& report) {
  nlohmann::json j;
  j["baseline"] = report.baseline_technique;
  j["queries"] = report.query_count;
  j["result_depth"] = report.result_depth;
  j["ks"] = report.ks;
  append_metrics_json(j["baseline_metrics"], report.baseline_metrics);
  nlohmann::json techniques = nlohmann::json::array();
  for (const TechniqueReport& tech : report.techniques) {
    nlohmann::json t;
    t["technique"] = tech.technique;
    const OutcomeBreakdown& oc = tech.outcomes;
    t["outcomes"]["total"] = oc.total;
    t["outcomes"]["improved"] = oc.improved;
    t["outcomes"]["worsened"] = oc.worsened;
    t["outcomes"]["preserved"] = oc.preserved;
    t["outcomes"]["unresolved"] = oc.unresolved;
    t["outcomes"]["improved_pct"] = oc.improved_pct;
    t["outcomes"]["worsened_pct"] = oc.worsened_pct;
    t["outcomes"]["preserved_pct"] = oc.preserved_pct;
    t["outcomes"]["mrd_improved"] = oc.mrd_improved;
    t["outcomes"]["mrd_worsened"] = oc.mrd_worsened;
    t["outcomes"]["mrd_preserved"] = oc.mrd_preserved;
    t["rank_stats"]["improved"] = rank_stats_json(oc.improved_ranks);
    t["rank_stats"]["worsened"] = rank_stats_json(oc.worsened_ranks);
    t["rank_stats"]["preserved"] = rank_stats_json(oc.preserved_ranks);
    append_metrics_json(t["metrics"], tech.metrics);
    techniques.push_back(std::move(t));
  }
  j["techniques"] = std::move(techniques);
  return j.dump(1) + "\n";
}

std::string query_set_name(QuerySet set) {
  return set == QuerySet::hard ? "hard" : "extended";
}

std::optional<QuerySet> parse_query_set(const std::string& name) {
  if (name == "hard") return QuerySet::hard;
  if (name == "extended") return QuerySet::extended;
  return std::nullopt;
}

std::vector<ChangeRequest> select_query_set(
    const std::vector<ChangeRequest>& requests,
    const std::map<std::string, std::optional<long long>>& baseline_qe, QuerySet set,
    long long easy_threshold) {
  if (set == QuerySet::extended) return requests;
  std::vector<ChangeRequest> kept;
  for (const ChangeRequest& request : requests) {
    auto it = baseline_qe.find(request.id);
    bool easy = it != baseline_qe.end() && it->second.has_value() &&
                *it->second <= easy_threshold;
    if (!easy) kept.push_back(request);
  }
  return kept;
}

}  // namespace acer
