#pragma once

#include <string>
#include <string_view>

namespace texturalyze {

// SHA-256 digest as lowercase hex; used for the run-manifest content hashes.
std::string sha256_hex(std::string_view data);

}  // namespace texturalyze
