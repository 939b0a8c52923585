#include "semcom/mss.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "semcom/error.hpp"

namespace semcom {

std::size_t clipped_matches(const TokenSeq& original, const TokenSeq& recovered) {
  std::unordered_map<TokenId, std::size_t> orig_counts;
  for (auto t : original) ++orig_counts[t];
  std::unordered_map<TokenId, std::size_t> rec_counts;
  for (auto t : recovered) ++rec_counts[t];
  std::size_t matched = 0;
  for (const auto& [tok, n] : rec_counts) {
    auto it = orig_counts.find(tok);
    if (it != orig_counts.end()) matched += std::min(n, it->second);
  }
  return matched;
}

double semantic_accuracy(const TokenSeq& original, const TokenSeq& recovered) {
  if (recovered.empty()) return 0.0;
  return static_cast<double>(clipped_matches(original, recovered)) / static_cast<double>(recovered.size());
}

double semantic_completeness(const TokenSeq& original, const TokenSeq& recovered) {
  if (original.empty()) throw InputError("original text is empty");
  return static_cast<double>(clipped_matches(original, recovered)) / static_cast<double>(original.size());
}

double short_text_penalty(std::size_t original_length, std::size_t recovered_length) {
  if (recovered_length >= original_length) return 1.0;
  if (recovered_length == 0) return 0.0;
  return std::exp(1.0 - static_cast<double>(original_length) / static_cast<double>(recovered_length));
}

MssReport mss(const TokenSeq& original, const TokenSeq& recovered, double phi) {
  if (original.empty()) throw InputError("original text is empty");
  if (!(phi > 0.0 && phi < 1.0)) throw InputError("phi must lie in (0, 1)");
  MssReport r;
  r.original_length = original.size();
  r.recovered_length = recovered.size();
  r.degenerate = recovered.empty();
  r.matched = clipped_matches(original, recovered);
  r.accuracy = recovered.empty() ? 0.0 : static_cast<double>(r.matched) / static_cast<double>(recovered.size());
  r.completeness = static_cast<double>(r.matched) / static_cast<double>(original.size());
  r.penalty = short_text_penalty(r.original_length, r.recovered_length);
  const double ar = r.accuracy * r.completeness;
  r.score = ar == 0.0 ? 0.0 : r.penalty * ar / (phi * r.accuracy + (1.0 - phi) * r.completeness);
  return r;
}

}  // namespace semcom
