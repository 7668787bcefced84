#pragma once

#include <string_view>

namespace fllab {

enum class Side { U, GL };

std::string_view to_string(Side side);
/// "u" or "gl"; throws Error(Parse) otherwise.
Side parse_side(std::string_view text);

}  // namespace fllab
