#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "sana/types.hpp"

namespace sana {

/// Bloom filter over fixed-length signature windows. Membership is keyed
/// on the bytes alone; a side table of 16-bit fingerprints maps a positive
/// window back to the attack tag it most likely belongs to.
///
/// The filter is sized with twice the information-theoretic bit count for
/// `target_fpr` (m = 2 * ceil(1.44 n log2(1/p))), which puts the per-window
/// false-positive rate near p^2. A payload scan probes one window per
/// offset and signature length, so the per-packet rate stays below p for
/// payloads up to ~1/p windows.
class CompressedSignatureDb {
 public:
  /// Room for `capacity` signatures. Throws Error("InvalidArgument") when
  /// capacity == 0 or target_fpr is outside (0, 1).
  CompressedSignatureDb(std::size_t capacity, double target_fpr);

  void insert(std::span<const std::uint8_t> signature, AttackId tag);
  /// Membership plus a fingerprint match for `tag`.
  bool contains(std::span<const std::uint8_t> window, AttackId tag) const;
  bool contains(std::span<const std::uint8_t> window) const;

  /// Tag of the first positive window (lengths ascending, then offsets),
  /// or nullopt. A positive window whose fingerprint matches no tag is
  /// attributed to the smallest tag with that signature length.
  std::optional<AttackId> scan(std::span<const std::uint8_t> payload) const;
  bool has_tag(AttackId tag) const { return tags_.contains(tag); }

  /// Membership bits only; the fingerprint table adds 16 bits per entry.
  std::size_t size_bits() const noexcept { return bits_.size(); }
  std::size_t hash_count() const noexcept { return k_; }
  std::size_t signature_count() const noexcept { return count_; }
  std::size_t capacity() const noexcept { return capacity_; }
  double target_fpr() const noexcept { return target_fpr_; }
  const std::map<AttackId, std::set<std::size_t>>& tags() const noexcept { return tags_; }

  /// Upper bound on size_bits(): 2 * ceil(1.44 n log2(1/p)).
  static std::size_t bit_budget(std::size_t n, double target_fpr);

 private:
  bool member(std::uint64_t h) const;

  std::vector<bool> bits_;
  std::size_t k_ = 1;
  std::size_t count_ = 0;
  std::size_t capacity_ = 0;
  double target_fpr_ = 0.0;
  std::map<AttackId, std::set<std::size_t>> tags_;  // tag -> signature lengths
  std::set<std::size_t> lengths_;
  std::set<std::pair<std::uint16_t, AttackId>> fingerprints_;
};

/// Builds a store holding exactly `signatures`, tagged by list index. Throws
/// Error("EmptySignatureSet") for an empty list.
CompressedSignatureDb compress_signatures(const std::vector<Bytes>& signatures, double target_fpr);

/// Exact substring matcher; the oracle the compressed store approximates.
bool exact_scan(std::span<const std::uint8_t> payload, const std::vector<Bytes>& signatures);

}  // namespace sana
