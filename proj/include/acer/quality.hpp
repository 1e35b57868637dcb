#ifndef ACER_QUALITY_HPP
#define ACER_QUALITY_HPP

#include <array>
#include <string>
#include <vector>

#include "acer/extract.hpp"
#include "acer/index.hpp"

namespace acer {

// Pre-retrieval query-quality metrics, fixed order. Specificity: avgIDF,
// maxIDF, devIDF, avgICTF, maxICTF, devICTF, queryScope, SCS. Similarity:
// avgSCQ, maxSCQ, sumSCQ. Coherency: avgCoherence. Term relatedness:
// avgPMI, maxPMI.
inline constexpr size_t kQualityMetricCount = 14;

const std::array<std::string, kQualityMetricCount>& quality_metric_names();

struct QualityVector {
  std::array<double, kQualityMetricCount> values{};
  CandidateKind kind = CandidateKind::baseline;

  double operator[](size_t i) const { return values[i]; }
};

// Computes all metrics for the query-term multiset against the index.
// Out-of-vocabulary terms use the documented ceilings: idf -> ln(N+1),
// ICTF -> ln(totalTerms+1), SCS language model p(t|C) -> 1/(totalTerms+1),
// SCQ -> 0. Pairwise PMI uses document-level co-occurrence with floor
// -ln(N) for a zero joint count; queries with fewer than two distinct
// terms report 0 for both PMI metrics. Deviations are population standard
// deviations. Throws UsageError on an empty query.
QualityVector compute_quality_metrics(const std::vector<std::string>& query_terms,
                                      const Index& index, size_t coherence_depth = 10);

}  // namespace acer

#endif  // ACER_QUALITY_HPP
