#include "acer/quality.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "acer/util.hpp"

namespace acer {

const std::array<std::string, kQualityMetricCount>& quality_metric_names() {
  static const std::array<std::string, kQualityMetricCount> names = {
      "avgIDF",  "maxIDF", "devIDF", "avgICTF",      "maxICTF", "devICTF", "queryScope",
      "SCS",     "avgSCQ", "maxSCQ", "sumSCQ",       "avgCoherence", "avgPMI", "maxPMI",
  };
  return names;
}

namespace {

struct Moments {
  double avg = 0.0;
  double max = 0.0;
  double dev = 0.0;  // population standard deviation
};

Moments moments(const std::vector<double>& xs) {
  Moments m;
  if (xs.empty()) return m;
  double sum = 0.0;
  m.max = xs.front();
  for (double x : xs) {
    sum += x;
    m.max = std::max(m.max, x);
  }
  m.avg = sum / static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - m.avg) * (x - m.avg);
  m.dev = std::sqrt(var / static_cast<double>(xs.size()));
  return m;
}

// Mean pairwise cosine among the top documents containing the term; fewer
// than two such documents contribute zero coherence.
double term_coherence(const std::string& term, const Index& index, size_t depth) {
  const std::vector<int> docs = index.top_docs_for_term(term, depth);
  if (docs.size() < 2) return 0.0;
  double sum = 0.0;
  size_t pairs = 0;
  for (size_t i = 0; i < docs.size(); ++i) {
    for (size_t j = i + 1; j < docs.size(); ++j) {
      sum += index.doc_cosine(docs[i], docs[j]);
      ++pairs;
    }
  }
  return sum / static_cast<double>(pairs);
}

}  // namespace

QualityVector compute_quality_metrics(const std::vector<std::string>& query_terms,
                                      const Index& index, size_t coherence_depth) {
  if (query_terms.empty()) throw UsageError("cannot score an empty candidate query");

  const double n_docs = static_cast<double>(index.doc_count());
  const double total = static_cast<double>(index.total_terms());

  // Sorted multiset view keeps every metric independent of term order.
  std::map<std::string, int> counts;
  for (const auto& t : query_terms) ++counts[t];
  const double query_len = static_cast<double>(query_terms.size());

  std::vector<double> idfs, ictfs, scqs, coherences;
  double scs = 0.0;
  std::set<int> scope_docs;
  for (const auto& [term, count] : counts) {
    const TermStats stats = index.term_stats(term);
    const double weight = static_cast<double>(count);

    const double idf = stats.idf;  // carries the OOV ceiling already
    const double ictf = stats.ctf > 0 ? std::log(total / static_cast<double>(stats.ctf))
                                      : std::log(total + 1.0);
    const double scq =
        stats.ctf > 0 ? (1.0 + std::log(static_cast<double>(stats.ctf))) * idf : 0.0;
    for (int r = 0; r < count; ++r) {
      idfs.push_back(idf);
      ictfs.push_back(ictf);
      scqs.push_back(scq);
    }

    const double p_q = weight / query_len;
    const double p_c = stats.ctf > 0 ? static_cast<double>(stats.ctf) / total : 1.0 / (total + 1.0);
    scs += p_q * std::log(p_q / p_c);

    const double coh = term_coherence(term, index, coherence_depth);
    for (int r = 0; r < count; ++r) coherences.push_back(coh);

    for (int d : index.docs_containing(term)) scope_docs.insert(d);
  }

  // Document-level PMI over distinct term pairs.
  std::vector<double> pmis;
  {
    std::vector<std::string> unique_terms;
    for (const auto& [term, count] : counts) unique_terms.push_back(term);
    for (size_t i = 0; i < unique_terms.size(); ++i) {
      for (size_t j = i + 1; j < unique_terms.size(); ++j) {
        const long long joint = index.joint_doc_freq(unique_terms[i], unique_terms[j]);
        if (joint == 0) {
          pmis.push_back(-std::log(n_docs));
          continue;
        }
        const long long df1 = index.term_stats(unique_terms[i]).df;
        const long long df2 = index.term_stats(unique_terms[j]).df;
        pmis.push_back(std::log(static_cast<double>(joint) * n_docs /
                                (static_cast<double>(df1) * static_cast<double>(df2))));
      }
    }
  }

  const Moments m_idf = moments(idfs);
  const Moments m_ictf = moments(ictfs);
  const Moments m_scq = moments(scqs);
  const Moments m_coh = moments(coherences);
  const Moments m_pmi = moments(pmis);

  QualityVector qv;
  qv.values[0] = m_idf.avg;
  qv.values[1] = m_idf.max;
  qv.values[2] = m_idf.dev;
  qv.values[3] = m_ictf.avg;
  qv.values[4] = m_ictf.max;
  qv.values[5] = m_ictf.dev;
  qv.values[6] = static_cast<double>(scope_docs.size()) / n_docs;
  qv.values[7] = scs;
  qv.values[8] = m_scq.avg;
  qv.values[9] = m_scq.max;
  double scq_sum = 0.0;
  for (double s : scqs) scq_sum += s;
  qv.values[10] = scq_sum;
  qv.values[11] = m_coh.avg;
  qv.values[12] = pmis.empty() ? 0.0 : m_pmi.avg;
  qv.values[13] = pmis.empty() ? 0.0 : m_pmi.max;
  return qv;
}

}  // namespace acer
