#pragma once

#include <string_view>

// Evaluation fixtures compiled into the library.
namespace fountain::eval::builtin {

// group,id,sentence for Group1..Group4.
std::string_view sentence_groups_csv();
// CheckSpec JSON for Group1 x Group2.
std::string_view suitability_check_json();
// CheckSpec JSON for Group3 x Group4.
std::string_view negation_check_json();

}  // namespace fountain::eval::builtin
