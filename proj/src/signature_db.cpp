#include "sana/signature_db.hpp"

#include <algorithm>
#include <cmath>

namespace sana {

namespace {

std::uint64_t fnv1a(std::span<const std::uint8_t> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (auto b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::size_t probe(std::uint64_t h, std::size_t i, std::size_t m) {
  return static_cast<std::size_t>(mix(h + (i + 1) * 0x9e3779b97f4a7c15ULL) % m);
}

std::uint16_t fingerprint(std::uint64_t h) { return static_cast<std::uint16_t>(mix(~h) >> 48); }

}  // namespace

std::size_t CompressedSignatureDb::bit_budget(std::size_t n, double target_fpr) {
  return 2 * static_cast<std::size_t>(std::ceil(1.44 * static_cast<double>(n) * std::log2(1.0 / target_fpr)));
}

CompressedSignatureDb::CompressedSignatureDb(std::size_t capacity, double target_fpr)
    : capacity_(capacity), target_fpr_(target_fpr) {
  if (capacity == 0) throw Error("InvalidArgument", "signature store capacity must be positive");
  if (!(target_fpr > 0.0 && target_fpr < 1.0)) throw Error("InvalidArgument", "target_fpr must lie in (0, 1)");
  const std::size_t m = bit_budget(capacity, target_fpr);
  bits_.assign(m, false);
  const double k = static_cast<double>(m) / static_cast<double>(capacity) * std::log(2.0);
  k_ = std::clamp<std::size_t>(static_cast<std::size_t>(std::lround(k)), 1, 32);
}

void CompressedSignatureDb::insert(std::span<const std::uint8_t> signature, AttackId tag) {
  if (signature.empty()) throw Error("InvalidArgument", "empty signature");
  const std::uint64_t h = fnv1a(signature);
  for (std::size_t i = 0; i < k_; ++i) bits_[probe(h, i, bits_.size())] = true;
  tags_[tag].insert(signature.size());
  lengths_.insert(signature.size());
  fingerprints_.insert({fingerprint(h), tag});
  ++count_;
}

bool CompressedSignatureDb::member(std::uint64_t h) const {
  for (std::size_t i = 0; i < k_; ++i) {
    if (!bits_[probe(h, i, bits_.size())]) return false;
  }
  return true;
}

bool CompressedSignatureDb::contains(std::span<const std::uint8_t> window, AttackId tag) const {
  const auto it = tags_.find(tag);
  if (it == tags_.end() || !it->second.contains(window.size())) return false;
  const std::uint64_t h = fnv1a(window);
  return member(h) && fingerprints_.contains({fingerprint(h), tag});
}

bool CompressedSignatureDb::contains(std::span<const std::uint8_t> window) const {
  return lengths_.contains(window.size()) && member(fnv1a(window));
}

std::optional<AttackId> CompressedSignatureDb::scan(std::span<const std::uint8_t> payload) const {
  for (std::size_t len : lengths_) {
    if (len > payload.size()) break;
    for (std::size_t off = 0; off + len <= payload.size(); ++off) {
      const std::uint64_t h = fnv1a(payload.subspan(off, len));
      if (!member(h)) continue;
      const std::uint16_t fp = fingerprint(h);
      for (auto it = fingerprints_.lower_bound({fp, 0}); it != fingerprints_.end() && it->first == fp; ++it) {
        if (tags_.at(it->second).contains(len)) return it->second;
      }
      for (const auto& [tag, lens] : tags_) {
        if (lens.contains(len)) return tag;
      }
    }
  }
  return std::nullopt;
}

CompressedSignatureDb compress_signatures(const std::vector<Bytes>& signatures, double target_fpr) {
  if (signatures.empty()) throw Error("EmptySignatureSet", "no signatures to compress");
  CompressedSignatureDb db(signatures.size(), target_fpr);
  for (std::size_t i = 0; i < signatures.size(); ++i) db.insert(signatures[i], static_cast<AttackId>(i));
  return db;
}

bool exact_scan(std::span<const std::uint8_t> payload, const std::vector<Bytes>& signatures) {
  for (const auto& s : signatures) {
    if (s.empty() || s.size() > payload.size()) continue;
    if (std::search(payload.begin(), payload.end(), s.begin(), s.end()) != payload.end()) return true;
  }
  return false;
}

}  // namespace sana
