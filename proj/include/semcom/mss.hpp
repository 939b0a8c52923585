#pragma once

#include <cstddef>

#include "semcom/types.hpp"

namespace semcom {

/// Similarity of a recovered text to its original.
struct MssReport {
  double accuracy = 0.0;      ///< A: clipped matches / M
  double completeness = 0.0;  ///< R: clipped matches / N
  double penalty = 0.0;       ///< xi: short-text penalty
  double score = 0.0;         ///< E
  std::size_t recovered_length = 0;  ///< M
  std::size_t original_length = 0;   ///< N
  std::size_t matched = 0;
  bool degenerate = false;  ///< recovered text was empty
};

/// Sum over distinct token types of min(count in recovered, count in original).
std::size_t clipped_matches(const TokenSeq& original, const TokenSeq& recovered);

/// Returns 0 for an empty recovery.
double semantic_accuracy(const TokenSeq& original, const TokenSeq& recovered);

/// Throws InputError if `original` is empty.
double semantic_completeness(const TokenSeq& original, const TokenSeq& recovered);

/// 1 when M >= N, exp(1 - N/M) otherwise; 0 when M == 0.
double short_text_penalty(std::size_t original_length, std::size_t recovered_length);

/// E = xi * A*R / (phi*A + (1-phi)*R), with E = 0 when A*R = 0.
MssReport mss(const TokenSeq& original, const TokenSeq& recovered, double phi = 0.5);

}  // namespace semcom
