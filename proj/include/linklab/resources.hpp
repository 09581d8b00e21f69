#pragma once

#include <string_view>

// Text resources shipped under data/ and compiled into the library.
namespace linklab::resources {

/// English stopword list, one token per line.
std::string_view stopwords();
/// `token<TAB>lemma` pairs, one per line.
std::string_view lemmas();
/// `outward<TAB>inward` link type descriptors, one per line.
std::string_view link_types();

}  // namespace linklab::resources
