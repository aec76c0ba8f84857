#include "zl/rlnc.hpp"

#include <random>

#include "zl/errors.hpp"
#include "zl/gf256.hpp"

namespace zl {

namespace detail {

static uint32_t rank_of(std::vector<Bytes> mat, uint32_t m) {
  uint32_t rank = 0;
  for (uint32_t col = 0; col < m && rank < mat.size(); col++) {
    uint32_t p = rank;
    while (p < mat.size() && mat[p][col] == 0) p++;
    if (p == mat.size()) continue;
    std::swap(mat[rank], mat[p]);
    gf::scale(mat[rank].data(), m, gf::inv(mat[rank][col]));
    for (uint32_t r = 0; r < mat.size(); r++) {
      if (r != rank && mat[r][col]) {
        gf::mul_acc(mat[r].data(), mat[rank].data(), m, mat[r][col]);
      }
    }
    rank++;
  }
  return rank;
}

bool all_subsets_independent(const std::vector<Bytes>& rows, uint32_t m) {
  const uint32_t n = uint32_t(rows.size());
  std::vector<uint32_t> idx(m);
  for (uint32_t i = 0; i < m; i++) idx[i] = i;
  while (true) {
    std::vector<Bytes> sub;
    sub.reserve(m);
    for (uint32_t i : idx) sub.push_back(rows[i]);
    if (rank_of(std::move(sub), m) < m) return false;
    // next combination
    int32_t pos = int32_t(m) - 1;
    while (pos >= 0 && idx[pos] == n - m + pos) pos--;
    if (pos < 0) return true;
    idx[pos]++;
    for (uint32_t j = pos + 1; j < m; j++) idx[j] = idx[j - 1] + 1;
  }
}

std::vector<Bytes> vandermonde_rows(const CodingScheme& s) {
  // rows (1, a_i, a_i^2, ...) with distinct nonzero points: every square
  // minor is a Vandermonde determinant, so any m rows are independent
  std::vector<Bytes> rows;
  for (uint32_t i = 0; i < s.n; i++) {
    uint8_t a = uint8_t(i + 1);
    Bytes row(s.chunks());
    uint8_t p = 1;
    for (uint32_t c = 0; c < s.chunks(); c++) {
      row[c] = p;
      p = gf::mul(p, a);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace detail

std::vector<Shard> rlnc_encode(ByteView data, const CodingScheme& s,
                               const Link& object_link, uint64_t coeff_seed) {
  const uint32_t m = s.chunks();
  const size_t chunk_len = m ? (data.size() + m - 1) / m : 0;

  std::vector<Bytes> chunks(m, Bytes(chunk_len, 0));
  for (size_t i = 0; i < data.size(); i++) {
    chunks[i / chunk_len][i % chunk_len] = data[i];
  }

  std::mt19937_64 eng(coeff_seed);
  std::vector<Bytes> rows;
  bool ok = false;
  for (int attempt = 0; attempt < 64 && !ok; attempt++) {
    rows.clear();
    for (uint32_t i = 0; i < s.n; i++) {
      Bytes row(m);
      for (uint8_t& c : row) c = uint8_t(eng());
      rows.push_back(std::move(row));
    }
    ok = detail::all_subsets_independent(rows, m);
  }
  if (!ok) rows = detail::vandermonde_rows(s);

  std::vector<Shard> out;
  out.reserve(s.n);
  for (uint32_t i = 0; i < s.n; i++) {
    Shard sh;
    sh.object_link = object_link;
    sh.coefficients = rows[i];
    sh.index = i;
    sh.orig_len = data.size();
    sh.payload.assign(chunk_len, 0);
    for (uint32_t c = 0; c < m; c++) {
      gf::mul_acc(sh.payload.data(), chunks[c].data(), chunk_len, rows[i][c]);
    }
    out.push_back(std::move(sh));
  }
  return out;
}

Bytes rlnc_decode(const std::vector<Shard>& shards, const CodingScheme& s) {
  const uint32_t m = s.chunks();
  if (shards.size() < m) {
    throw InsufficientShards("have " + std::to_string(shards.size()) +
                             " shards, need " + std::to_string(m));
  }
  const Link& link = shards[0].object_link;
  const size_t plen = shards[0].payload.size();
  const uint64_t olen = shards[0].orig_len;
  for (const Shard& sh : shards) {
    if (sh.object_link != link) throw Error("mixed object links");
    if (sh.payload.size() != plen || sh.orig_len != olen ||
        sh.coefficients.size() != m) {
      throw Error("inconsistent shard shapes");
    }
  }
  if (olen > uint64_t(plen) * m) throw Error("recorded length exceeds payload");

  std::vector<Bytes> coef, pay;
  coef.reserve(shards.size());
  pay.reserve(shards.size());
  for (const Shard& sh : shards) {
    coef.push_back(sh.coefficients);
    pay.push_back(sh.payload);
  }

  uint32_t rank = 0;
  for (uint32_t col = 0; col < m; col++) {
    uint32_t p = rank;
    while (p < coef.size() && coef[p][col] == 0) p++;
    if (p == coef.size()) continue;
    std::swap(coef[rank], coef[p]);
    std::swap(pay[rank], pay[p]);
    uint8_t iv = gf::inv(coef[rank][col]);
    gf::scale(coef[rank].data(), m, iv);
    gf::scale(pay[rank].data(), plen, iv);
    for (uint32_t r = 0; r < coef.size(); r++) {
      if (r != rank && coef[r][col]) {
        uint8_t f = coef[r][col];
        gf::mul_acc(coef[r].data(), coef[rank].data(), m, f);
        gf::mul_acc(pay[r].data(), pay[rank].data(), plen, f);
      }
    }
    rank++;
  }
  if (rank < m) throw DependentCoefficients("shard coefficients do not span");

  Bytes out;
  out.reserve(plen * m);
  for (uint32_t c = 0; c < m; c++) append(out, view(pay[c]));
  out.resize(olen);
  if (sha3_256(view(out)) != link.digest) {
    throw IntegrityFailure("decoded bytes do not match object digest");
  }
  return out;
}

}  // namespace zl
