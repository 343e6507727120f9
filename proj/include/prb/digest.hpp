#pragma once

#include <string>
#include <string_view>

namespace prb {

// First 16 hex digits of the SHA-256 of `text`.
std::string short_digest(std::string_view text);

}  // namespace prb
