#include "prb/digest.hpp"

#include <array>

#include <fmt/format.h>
#include <openssl/evp.h>

namespace prb {

std::string short_digest(std::string_view text) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_Digest(text.data(), text.size(), md.data(), &len, EVP_sha256(), nullptr);
  std::string out;
  for (unsigned int i = 0; i < 8 && i < len; ++i) out += fmt::format("{:02x}", md[i]);
  return out;
}

}  // namespace prb
