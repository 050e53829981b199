#pragma once

#include <iosfwd>
#include <string>

#include "gapmm/split_operator.hpp"

namespace gapmm {

// Plain-text split-operator exchange format: a header line "dim_plus
// dim_minus", then the row-major entries of the full matrix A and optionally
// of the Gram S (identity when absent). Tokens may be separated by
// whitespace or commas; '#' starts a comment.
SplitOperator read_split_operator(std::istream& in);
SplitOperator load_split_operator(const std::string& path);

// comma_separated selects CSV-style rows; include_gram emits S after A.
void write_split_operator(std::ostream& out, const SplitOperator& op,
                          bool comma_separated = false, bool include_gram = true);
void save_split_operator(const std::string& path, const SplitOperator& op,
                         bool comma_separated = false, bool include_gram = true);

}  // namespace gapmm
