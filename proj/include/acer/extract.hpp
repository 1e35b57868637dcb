#ifndef ACER_EXTRACT_HPP
#define ACER_EXTRACT_HPP

#include <optional>
#include <string>
#include <vector>

#include "acer/corpus.hpp"

namespace acer {

// Where a candidate term list came from: method signatures, field
// signatures, their combination, or the unmodified initial query.
enum class CandidateKind { msig, fsig, comb, baseline };

const char* candidate_kind_name(CandidateKind kind);
std::optional<CandidateKind> parse_candidate_kind(const std::string& name);

struct SignatureToken {
  std::string token;   // original spelling, e.g. "resolveRuntimeClasspathEntry"
  std::string doc_id;  // feedback document it came from
};

struct SignatureTokens {
  CandidateKind kind = CandidateKind::msig;
  // Ordered by (doc id, extraction position); multiset, duplicates kept.
  std::vector<SignatureToken> tokens;
};

// Method declaration headers (modifiers through the parameter list, throws
// clause excluded) found at class-member nesting depth, in source order.
// Constructors and abstract/interface declarations included.
std::vector<std::string> extract_method_signatures(const SourceDocument& doc);

// Class-level field declarations: modifiers, type, declarator names;
// initializer expressions dropped.
std::vector<std::string> extract_field_signatures(const SourceDocument& doc);

// Structured tokens (>= 2 split pieces under the given splitter) from the
// requested signature kind across all feedback documents. kind must be
// msig, fsig or comb.
SignatureTokens collect_candidate_tokens(const std::vector<const SourceDocument*>& feedback_docs,
                                         CandidateKind kind, const TokenSplitter& splitter);

}  // namespace acer

#endif  // ACER_EXTRACT_HPP
