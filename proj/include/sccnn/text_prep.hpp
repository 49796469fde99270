#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace sccnn {

// Twitter-style text normalization. Applies, in order: url, user mention,
// emoticon (smile/lolface/sadface/neutralface), heart, number, hashtag,
// repeated punctuation, elongated word, and all-caps rules, each emitting a
// lowercase angle-bracket tag as its own token; then lowercases and collapses
// whitespace. Total and idempotent.
std::string normalize(std::string_view raw);

// Splits on runs of whitespace. No empty tokens.
std::vector<std::string> tokenize(std::string_view normalized);

}  // namespace sccnn
