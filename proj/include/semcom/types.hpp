#pragma once

#include <cstdint>
#include <limits>
#include <vector>

namespace semcom {

using TokenId = std::uint32_t;
using TokenSeq = std::vector<TokenId>;

/// Id returned by a frozen vocabulary for tokens it has never seen. Never a
/// valid index into the vocabulary.
inline constexpr TokenId kUnknownToken = std::numeric_limits<TokenId>::max();

}  // namespace semcom
