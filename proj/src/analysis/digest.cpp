#include <openssl/evp.h>

#include "hg/analysis.hpp"

namespace hg {

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorCode::IoError, "sha256 failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xf];
  }
  return out;
}

std::string canonical_tree(const Session& s) {
  std::string out;
  for (const auto& n : s.nodes()) {
    out += std::to_string(n.id) + "|" + (n.parent ? std::to_string(*n.parent) : "-") + "|" + status_label(n) + "|" +
           std::string(to_string(n.language())) + "|" + print(n.sequent) + "|" + n.provenance_action + "\n";
  }
  return out;
}

std::string tree_digest(const Session& s) { return sha256_hex(canonical_tree(s)); }

}  // namespace hg
