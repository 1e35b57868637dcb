#ifndef ACER_EVAL_HPP
#define ACER_EVAL_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "acer/index.hpp"

namespace acer {

struct ChangeRequest {
  std::string id;
  std::string title;        // used as the baseline query text
  std::string description;  // checked for stack traces at ingestion
  std::vector<std::string> goldset;  // corpus doc ids, validated, order kept
};

struct IngestStats {
  int parsed = 0;
  int kept = 0;
  int malformed = 0;
  int dropped_stack_trace = 0;
  int dropped_goldset = 0;
  int duplicate_ids = 0;
  std::vector<std::string> warnings;
};

// True when the text contains a Java stack frame such as
// "at org.foo.Bar.baz(Bar.java:42)".
bool has_stack_trace(const std::string& text);

// Reads one JSON object per line with fields id, title, description and
// goldset (array of corpus-relative paths). Malformed lines are skipped with
// a warning; requests with stack traces in the description are excluded;
// goldset entries missing from the corpus are filtered out and a request
// whose goldset empties out is dropped. Throws DataError when nothing
// valid remains.
std::vector<ChangeRequest> ingest_dataset(const std::filesystem::path& file, const Index& index,
                                          IngestStats* stats = nullptr);

struct QueryRun {
  std::string query_id;
  std::string technique;
  std::vector<std::string> ranked;  // result ids, capped at the result depth
  std::optional<long long> qe;      // 1-based rank of the first goldset doc

  double reciprocal_rank(long long k) const;  // 1/qe when qe <= k, else 0
};

// 1-based rank of the first ranked id present in the goldset.
std::optional<long long> query_effectiveness(const std::vector<std::string>& ranked,
                                             const std::set<std::string>& goldset);

// Runs one query against the index and scores it. Results past the depth
// cap count as not retrieved.
QueryRun run_query(const Index& index, std::string technique, std::string query_id,
                   const std::vector<std::string>& terms, const std::set<std::string>& goldset,
                   size_t depth = 5000);

struct RetrievalMetrics {
  long long k = 10;
  int queries = 0;
  double mrr = 0.0;             // mean reciprocal rank at k
  double top_k_accuracy = 0.0;  // fraction of queries with qe <= k
};

RetrievalMetrics retrieval_metrics(const std::vector<QueryRun>& runs, long long k);

enum class Outcome { improved, worsened, preserved, unresolved };

std::string outcome_name(Outcome outcome);

// Lower rank wins; a missing rank loses to any rank; two missing ranks are
// unresolved and reported outside the three classes.
Outcome classify_outcome(std::optional<long long> baseline_qe,
                         std::optional<long long> reformulated_qe);

// Linear interpolation between closest ranks (the type-7 convention):
// h = (n - 1) * p over the sorted values.
double quantile(const std::vector<double>& sorted_values, double p);

struct RankStats {
  int count = 0;  // ranks the stats were computed over
  double mean = 0.0;
  double q1 = 0.0;
  double q2 = 0.0;
  double q3 = 0.0;
  long long min = 0;
  long long max = 0;
};

RankStats make_rank_stats(std::vector<long long> ranks);

struct OutcomeBreakdown {
  int total = 0;
  int improved = 0;
  int worsened = 0;
  int preserved = 0;
  int unresolved = 0;  // no result on either side
  double improved_pct = 0.0;
  double worsened_pct = 0.0;
  double preserved_pct = 0.0;
  // Stats over the reformulated ranks inside each class; runs without a
  // rank (possible only in the worsened class) are excluded from stats.
  RankStats improved_ranks;
  RankStats worsened_ranks;
  RankStats preserved_ranks;
  // Mean rank difference (reformulated - baseline) per class, over pairs
  // where both ranks exist; negative means elevation toward the top.
  double mrd_improved = 0.0;
  double mrd_worsened = 0.0;
  double mrd_preserved = 0.0;
};

struct TechniqueReport {
  std::string technique;
  OutcomeBreakdown outcomes;
  std::vector<RetrievalMetrics> metrics;  // one entry per requested k
};

struct EvaluationReport {
  std::string baseline_technique;
  std::vector<long long> ks;
  size_t result_depth = 5000;
  int query_count = 0;
  std::vector<RetrievalMetrics> baseline_metrics;
  std::vector<TechniqueReport> techniques;
};

// Every technique must cover exactly the baseline's query ids; a mismatch
// is a usage error.
EvaluationReport build_report(const std::vector<QueryRun>& baseline_runs,
                              const std::vector<std::vector<QueryRun>>& technique_runs,
                              const std::vector<long long>& ks, size_t result_depth = 5000);

// Per-query raw numbers so external tools can run their own statistics.
std::string runs_to_tsv(const std::vector<QueryRun>& runs, long long k);

// Human-readable delimited tables: outcomes, rank stats and metrics.
std::string report_to_tsv(const EvaluationReport& report);

// Structured summary, stable key order, trailing newline.
std::string report_to_json_text(const EvaluationReport& report);

enum class QuerySet { hard, extended };

std::string query_set_name(QuerySet set);
std::optional<QuerySet> parse_query_set(const std::string& name);

// hard keeps queries whose baseline rank is missing or beyond the easy
// threshold; extended keeps everything.
std::vector<ChangeRequest> select_query_set(
    const std::vector<ChangeRequest>& requests,
    const std::map<std::string, std::optional<long long>>& baseline_qe, QuerySet set,
    long long easy_threshold = 10);

}  // namespace acer

#endif  // ACER_EVAL_HPP
