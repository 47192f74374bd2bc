#pragma once

#include <string_view>

namespace stormbox::detail {

/// Contents of a file under scenarios/ compiled into the library, or nullptr.
const char* builtin_file(std::string_view filename);

}  // namespace stormbox::detail
