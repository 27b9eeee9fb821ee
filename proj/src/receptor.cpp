#include "sana/receptor.hpp"

#include <algorithm>

namespace sana {

namespace {

constexpr std::uint64_t kC1 = 0xbf58476d1ce4e5b9ULL;
constexpr std::uint64_t kC2 = 0x94d049bb133111ebULL;
constexpr std::uint64_t kKeyHi = 0x243f6a8885a308d3ULL;
constexpr std::uint64_t kKeyLo = 0x13198a2e03707344ULL;

constexpr std::uint64_t mul_inverse(std::uint64_t a) {
  std::uint64_t x = a;  // Newton: each round doubles the correct low bits
  for (int i = 0; i < 6; ++i) x *= 2 - a * x;
  return x;
}

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * kC1;
  z = (z ^ (z >> 27)) * kC2;
  return z ^ (z >> 31);
}

std::uint64_t unmix(std::uint64_t z) {
  z ^= (z >> 31) ^ (z >> 62);
  z *= mul_inverse(kC2);
  z ^= (z >> 27) ^ (z >> 54);
  z *= mul_inverse(kC1);
  z ^= (z >> 30) ^ (z >> 60);
  return z;
}

PublicToken public_of(const PrivateToken& s) { return {mix(s.hi ^ kKeyHi), mix(s.lo ^ kKeyLo)}; }

// Only the default scheme can do this; it is what makes it a toy.
PrivateToken private_of(const PublicToken& p) { return {unmix(p.hi) ^ kKeyHi, unmix(p.lo) ^ kKeyLo}; }

std::uint64_t derive_key(const std::vector<PrivateToken>& sorted_privates) {
  std::uint64_t k = 0x6a09e667f3bcc909ULL;
  for (const auto& s : sorted_privates) {
    k = mix(k ^ s.hi);
    k = mix(k ^ s.lo);
  }
  return k;
}

void xor_stream(Bytes& data, std::uint64_t key) {
  std::uint64_t state = key;
  std::uint64_t block = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (i % 8 == 0) {
      state += 0x9e3779b97f4a7c15ULL;
      block = mix(state);
    }
    data[i] ^= static_cast<std::uint8_t>(block >> (8 * (i % 8)));
  }
}

std::uint64_t integrity_tag(const Bytes& plaintext, std::uint64_t key) {
  std::uint64_t h = mix(key ^ 0xa54ff53a5f1d36f1ULL);
  for (auto b : plaintext) h = (h ^ b) * 0x100000001b3ULL;
  return mix(h ^ plaintext.size());
}

void put_u64(Bytes& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u32(Bytes& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

class Reader {
 public:
  explicit Reader(const Bytes& b) : b_(b) {}
  std::uint64_t u64() { return take(8); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(take(4)); }
  Bytes bytes(std::size_t n) {
    need(n);
    Bytes out(b_.begin() + static_cast<std::ptrdiff_t>(pos_), b_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
    pos_ += n;
    return out;
  }
  bool done() const { return pos_ == b_.size(); }

 private:
  void need(std::size_t n) const {
    if (b_.size() - pos_ < n) throw Error("MalformedSubstance", "truncated substance");
  }
  std::uint64_t take(int n) {
    need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(b_[pos_++]) << (8 * i);
    return v;
  }
  const Bytes& b_;
  std::size_t pos_ = 0;
};

}  // namespace

Receptor gen_receptor(Rng& rng) {
  Receptor r;
  r.private_part = {rng(), rng()};
  r.public_part = public_of(r.private_part);
  return r;
}

bool match(const PublicToken& pub, const PrivateToken& priv) { return public_of(priv) == pub; }

Substance DefaultCipher::seal(const Bytes& payload, std::vector<PublicToken> required, std::uint32_t ttl,
                              NodeId origin) const {
  if (required.empty()) throw Error("EmptyReceptorSet", "a substance needs at least one receptor");
  std::sort(required.begin(), required.end());
  required.erase(std::unique(required.begin(), required.end()), required.end());
  std::vector<PrivateToken> privates;
  privates.reserve(required.size());
  for (const auto& p : required) privates.push_back(private_of(p));
  std::sort(privates.begin(), privates.end());
  const std::uint64_t key = derive_key(privates);

  Substance sub;
  sub.required = std::move(required);
  sub.hop_ttl = ttl;
  sub.origin = origin;
  sub.ciphertext = payload;
  put_u64(sub.ciphertext, integrity_tag(payload, key));
  xor_stream(sub.ciphertext, key);
  return sub;
}

std::optional<Bytes> DefaultCipher::try_open(const Substance& sub, const std::vector<PrivateToken>& held) const {
  if (sub.required.empty() || sub.ciphertext.size() < 8) return std::nullopt;
  std::vector<PrivateToken> privates;
  privates.reserve(sub.required.size());
  for (const auto& pub : sub.required) {
    const auto it = std::find_if(held.begin(), held.end(), [&](const PrivateToken& s) { return match(pub, s); });
    if (it == held.end()) return std::nullopt;
    privates.push_back(*it);
  }
  std::sort(privates.begin(), privates.end());
  const std::uint64_t key = derive_key(privates);
  Bytes plain = sub.ciphertext;
  xor_stream(plain, key);
  std::uint64_t tag = 0;
  for (int i = 0; i < 8; ++i) tag |= static_cast<std::uint64_t>(plain[plain.size() - 8 + i]) << (8 * i);
  plain.resize(plain.size() - 8);
  if (tag != integrity_tag(plain, key)) return std::nullopt;
  return plain;
}

Substance seal(const Bytes& payload, std::vector<PublicToken> required, std::uint32_t ttl, NodeId origin) {
  return DefaultCipher{}.seal(payload, std::move(required), ttl, origin);
}

std::optional<Bytes> try_open(const Substance& sub, const std::vector<PrivateToken>& held) {
  return DefaultCipher{}.try_open(sub, held);
}

Bytes encode_substance(const Substance& sub) {
  Bytes out;
  out.reserve(16 + sub.required.size() * 16 + sub.ciphertext.size() + sub.visited.size() * 4);
  put_u32(out, sub.hop_ttl);
  put_u32(out, sub.origin);
  put_u32(out, static_cast<std::uint32_t>(sub.required.size()));
  for (const auto& p : sub.required) {
    put_u64(out, p.hi);
    put_u64(out, p.lo);
  }
  put_u32(out, static_cast<std::uint32_t>(sub.visited.size()));
  for (auto v : sub.visited) put_u32(out, v);
  put_u32(out, static_cast<std::uint32_t>(sub.ciphertext.size()));
  out.insert(out.end(), sub.ciphertext.begin(), sub.ciphertext.end());
  return out;
}

Substance decode_substance(const Bytes& wire) {
  Reader r(wire);
  Substance sub;
  sub.hop_ttl = r.u32();
  sub.origin = r.u32();
  const std::uint32_t nreq = r.u32();
  if (nreq > wire.size() / 16) throw Error("MalformedSubstance", "receptor count out of range");
  for (std::uint32_t i = 0; i < nreq; ++i) {
    PublicToken p;
    p.hi = r.u64();
    p.lo = r.u64();
    sub.required.push_back(p);
  }
  const std::uint32_t nvis = r.u32();
  if (nvis > wire.size() / 4) throw Error("MalformedSubstance", "visited count out of range");
  for (std::uint32_t i = 0; i < nvis; ++i) sub.visited.push_back(r.u32());
  sub.ciphertext = r.bytes(r.u32());
  if (!r.done()) throw Error("MalformedSubstance", "trailing bytes");
  return sub;
}

}  // namespace sana
