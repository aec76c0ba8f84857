#include "zl/merkle.hpp"

#include "zl/codec.hpp"
#include "zl/errors.hpp"

namespace zl {

Digest merkle_root(const std::vector<TxLink>& leaves) {
  if (leaves.empty()) throw EmptyBatch("merkle root of empty batch");
  std::vector<Digest> level;
  level.reserve(leaves.size());
  for (const TxLink& l : leaves) level.push_back(sha3_256(view(encode(l))));
  while (level.size() > 1) {
    std::vector<Digest> next;
    next.reserve(level.size() / 2 + 1);
    size_t i = 0;
    for (; i + 1 < level.size(); i += 2) {
      Bytes cat(level[i].v.begin(), level[i].v.end());
      append(cat, ByteView{level[i + 1].v});
      next.push_back(sha3_256(view(cat)));
    }
    if (i < level.size()) next.push_back(level[i]);  // odd node rises as-is
    level = std::move(next);
  }
  return level[0];
}

}  // namespace zl
