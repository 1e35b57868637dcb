#include "acer/quality.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <vector>

#include "acer/util.hpp"
#include "doctest.h"

using namespace acer;

namespace {

Index make_index(const std::vector<std::pair<std::string, std::vector<std::string>>>& docs) {
  std::vector<std::string> ids;
  std::vector<std::map<std::string, int>> maps;
  for (const auto& [id, terms] : docs) {
    std::map<std::string, int> counts;
    for (const auto& t : terms) ++counts[t];
    ids.push_back(id);
    maps.push_back(std::move(counts));
  }
  return Index::from_term_maps(std::move(ids), std::move(maps));
}

size_t metric(const std::string& name) {
  const auto& names = quality_metric_names();
  return std::find(names.begin(), names.end(), name) - names.begin();
}

}  // namespace

TEST_CASE("metric names are fixed and complete") {
  const auto& names = quality_metric_names();
  CHECK(names.size() == kQualityMetricCount);
  CHECK(names.front() == "avgIDF");
  CHECK(names.back() == "maxPMI");
  CHECK(metric("queryScope") == 6);
  CHECK(metric("avgCoherence") == 11);
}

TEST_CASE("single rare term pins the idf metrics") {
  Index index = make_index({{"d1", {"rare", "x"}}, {"d2", {"y"}}, {"d3", {"z"}}});
  QualityVector qv = compute_quality_metrics({"rare"}, index);
  CHECK(qv[metric("avgIDF")] == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(qv[metric("maxIDF")] == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(qv[metric("devIDF")] == doctest::Approx(0.0));
  CHECK(qv[metric("queryScope")] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("a term present everywhere has zero idf and full scope") {
  Index index = make_index({{"d1", {"common", "a"}}, {"d2", {"common"}}, {"d3", {"common", "b"}}});
  QualityVector qv = compute_quality_metrics({"common"}, index);
  CHECK(qv[metric("avgIDF")] == doctest::Approx(0.0));
  CHECK(qv[metric("queryScope")] == doctest::Approx(1.0));
}

TEST_CASE("ICTF uses the collection length") {
  // totalTerms = 6, ctf(rare) = 1, ctf(pair) = 2.
  Index index = make_index({{"d1", {"rare", "pair", "x"}}, {"d2", {"pair", "y", "z"}}});
  QualityVector qv = compute_quality_metrics({"rare", "pair"}, index);
  const double ictf_rare = std::log(6.0 / 1.0);
  const double ictf_pair = std::log(6.0 / 2.0);
  CHECK(qv[metric("avgICTF")] == doctest::Approx((ictf_rare + ictf_pair) / 2.0).epsilon(1e-12));
  CHECK(qv[metric("maxICTF")] == doctest::Approx(ictf_rare).epsilon(1e-12));
  const double mean = (ictf_rare + ictf_pair) / 2.0;
  const double dev = std::sqrt(((ictf_rare - mean) * (ictf_rare - mean) +
                                (ictf_pair - mean) * (ictf_pair - mean)) / 2.0);
  CHECK(qv[metric("devICTF")] == doctest::Approx(dev).epsilon(1e-12));
}

TEST_CASE("SCS follows the simplified clarity formula") {
  Index index = make_index({{"d1", {"launch", "debug", "x"}}, {"d2", {"launch", "y", "z"}}});
  // p(launch|q) = 1, p(launch|C) = 2/6.
  QualityVector qv = compute_quality_metrics({"launch"}, index);
  CHECK(qv[metric("SCS")] == doctest::Approx(std::log(3.0)).epsilon(1e-12));

  // Two-term query: each p(t|q) = 1/2.
  QualityVector two = compute_quality_metrics({"launch", "debug"}, index);
  const double expected =
      0.5 * std::log(0.5 / (2.0 / 6.0)) + 0.5 * std::log(0.5 / (1.0 / 6.0));
  CHECK(two[metric("SCS")] == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("SCQ combines collection frequency and idf") {
  Index index = make_index({{"d1", {"launch", "launch", "x"}}, {"d2", {"y"}}});
  // ctf(launch)=2, idf=ln(2/1).
  const double scq = (1.0 + std::log(2.0)) * std::log(2.0);
  QualityVector qv = compute_quality_metrics({"launch"}, index);
  CHECK(qv[metric("avgSCQ")] == doctest::Approx(scq).epsilon(1e-12));
  CHECK(qv[metric("maxSCQ")] == doctest::Approx(scq).epsilon(1e-12));
  CHECK(qv[metric("sumSCQ")] == doctest::Approx(scq).epsilon(1e-12));
}

TEST_CASE("out-of-vocabulary terms use the documented ceilings") {
  Index index = make_index({{"d1", {"a", "b"}}, {"d2", {"c"}}, {"d3", {"d"}}});
  QualityVector qv = compute_quality_metrics({"ghost"}, index);
  CHECK(qv[metric("avgIDF")] == doctest::Approx(std::log(4.0)).epsilon(1e-12));    // ln(N+1)
  CHECK(qv[metric("avgICTF")] == doctest::Approx(std::log(5.0)).epsilon(1e-12));   // ln(total+1)
  CHECK(qv[metric("avgSCQ")] == doctest::Approx(0.0));
  CHECK(qv[metric("queryScope")] == doctest::Approx(0.0));
  CHECK(qv[metric("avgCoherence")] == doctest::Approx(0.0));
  // SCS with the OOV language-model floor p(t|C) = 1/(total+1).
  CHECK(qv[metric("SCS")] == doctest::Approx(std::log(5.0)).epsilon(1e-12));
}

TEST_CASE("PMI reflects document-level co-occurrence") {
  Index index = make_index({
      {"d1", {"launch", "debug"}},
      {"d2", {"launch", "debug"}},
      {"d3", {"launch", "other"}},
      {"d4", {"filler"}},
  });
  // p(launch,debug) = 2/4, p(launch) = 3/4, p(debug) = 2/4.
  const double pmi = std::log((2.0 * 4.0) / (3.0 * 2.0));
  QualityVector qv = compute_quality_metrics({"launch", "debug"}, index);
  CHECK(qv[metric("avgPMI")] == doctest::Approx(pmi).epsilon(1e-12));
  CHECK(qv[metric("maxPMI")] == doctest::Approx(pmi).epsilon(1e-12));
}

TEST_CASE("disjoint terms sit at the PMI floor") {
  Index index = make_index({{"d1", {"alpha"}}, {"d2", {"beta"}}, {"d3", {"gamma"}}});
  QualityVector qv = compute_quality_metrics({"alpha", "beta"}, index);
  CHECK(qv[metric("avgPMI")] == doctest::Approx(-std::log(3.0)).epsilon(1e-12));
  CHECK(qv[metric("maxPMI")] == doctest::Approx(-std::log(3.0)).epsilon(1e-12));
}

TEST_CASE("single-term queries report zero for pairwise metrics") {
  Index index = make_index({{"d1", {"alpha"}}, {"d2", {"beta"}}});
  QualityVector qv = compute_quality_metrics({"alpha"}, index);
  CHECK(qv[metric("avgPMI")] == doctest::Approx(0.0));
  CHECK(qv[metric("maxPMI")] == doctest::Approx(0.0));
  // Repeating the same term is still a single distinct term.
  QualityVector rep = compute_quality_metrics({"alpha", "alpha"}, index);
  CHECK(rep[metric("avgPMI")] == doctest::Approx(0.0));
}

TEST_CASE("coherence averages pairwise cosine of a term's top documents") {
  Index index = make_index({{"d1", {"t", "u"}}, {"d2", {"t", "v"}}, {"d3", {"w"}}});
  // Only d1 and d2 contain t; coherence(t) = cos(d1, d2) computed directly.
  const double wt = std::log(3.0 / 2.0);   // weight of t in both docs (tf=1)
  const double wo = std::log(3.0 / 1.0);   // weight of u in d1 / v in d2
  const double cos = (wt * wt) / (std::sqrt(wt * wt + wo * wo) * std::sqrt(wt * wt + wo * wo));
  QualityVector qv = compute_quality_metrics({"t"}, index);
  CHECK(qv[metric("avgCoherence")] == doctest::Approx(cos).epsilon(1e-12));

  // A term in fewer than two documents contributes zero.
  QualityVector qu = compute_quality_metrics({"u"}, index);
  CHECK(qu[metric("avgCoherence")] == doctest::Approx(0.0));
}

TEST_CASE("coherence depth caps the examined documents") {
  std::vector<std::pair<std::string, std::vector<std::string>>> docs;
  for (int i = 0; i < 15; ++i) {
    char id[8];
    std::snprintf(id, sizeof(id), "d%02d", i);
    docs.emplace_back(id, std::vector<std::string>{"t", "u" + std::to_string(i)});
  }
  docs.emplace_back("zz", std::vector<std::string>{"solo"});
  Index index = make_index(docs);
  QualityVector capped = compute_quality_metrics({"t"}, index, 3);
  QualityVector full = compute_quality_metrics({"t"}, index, 100);
  // Different depths examine different doc sets; both stay finite.
  CHECK(std::isfinite(capped[metric("avgCoherence")]));
  CHECK(std::isfinite(full[metric("avgCoherence")]));
}

TEST_CASE("metrics are invariant under term permutation") {
  Index index = make_index({
      {"d1", {"launch", "debug", "config"}},
      {"d2", {"launch", "parser"}},
      {"d3", {"debug", "widget", "config"}},
  });
  QualityVector a = compute_quality_metrics({"launch", "debug", "config"}, index);
  QualityVector b = compute_quality_metrics({"config", "launch", "debug"}, index);
  for (size_t i = 0; i < kQualityMetricCount; ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("duplicated terms shift multiset metrics but not set metrics") {
  Index index = make_index({{"d1", {"launch", "x"}}, {"d2", {"debug", "y"}}, {"d3", {"z"}}});
  QualityVector once = compute_quality_metrics({"launch", "debug"}, index);
  QualityVector twice = compute_quality_metrics({"launch", "launch", "debug"}, index);
  CHECK(twice[metric("sumSCQ")] > once[metric("sumSCQ")]);
  CHECK(once[metric("queryScope")] == twice[metric("queryScope")]);
  CHECK(once[metric("maxIDF")] == twice[metric("maxIDF")]);
}

TEST_CASE("adding a ubiquitous term cannot raise avgIDF") {
  Index index = make_index({
      {"d1", {"rare", "common"}},
      {"d2", {"common"}},
      {"d3", {"common", "other"}},
  });
  QualityVector without = compute_quality_metrics({"rare"}, index);
  QualityVector with = compute_quality_metrics({"rare", "common"}, index);
  CHECK(with[metric("avgIDF")] <= without[metric("avgIDF")]);
}

TEST_CASE("every metric stays finite across randomized queries") {
  std::mt19937_64 rng(777);
  const std::vector<std::string> vocab = {"aaa", "bbb", "ccc", "ddd", "eee", "fff"};
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::pair<std::string, std::vector<std::string>>> docs;
    const int n = 2 + rng() % 6;
    for (int d = 0; d < n; ++d) {
      std::vector<std::string> terms;
      const int len = 1 + rng() % 6;
      for (int i = 0; i < len; ++i) terms.push_back(vocab[rng() % vocab.size()]);
      docs.emplace_back("d" + std::to_string(d), std::move(terms));
    }
    Index index = make_index(docs);
    std::vector<std::string> query;
    const int qlen = 1 + rng() % 4;
    for (int i = 0; i < qlen; ++i) query.push_back(vocab[rng() % vocab.size()]);
    query.push_back("unseen");
    QualityVector qv = compute_quality_metrics(query, index);
    for (size_t i = 0; i < kQualityMetricCount; ++i) {
      CAPTURE(quality_metric_names()[i]);
      CHECK(std::isfinite(qv[i]));
    }
  }
}

TEST_CASE("empty queries are rejected") {
  Index index = make_index({{"d1", {"a"}}});
  CHECK_THROWS_AS(compute_quality_metrics({}, index), UsageError);
}
