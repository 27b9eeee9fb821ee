#pragma once

#include <optional>
#include <vector>

#include "sana/rng.hpp"
#include "sana/types.hpp"

namespace sana {

struct PublicToken {
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;
  auto operator<=>(const PublicToken&) const = default;
};

struct PrivateToken {
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;
  auto operator<=>(const PrivateToken&) const = default;
};

/// Public/private token pair gating which holders can open a Substance.
struct Receptor {
  PublicToken public_part;
  PrivateToken private_part;
};

Receptor gen_receptor(Rng& rng);
bool match(const PublicToken& pub, const PrivateToken& priv);

/// Sealed message. `visited` records the stations that forwarded it.
struct Substance {
  std::vector<PublicToken> required;  // sorted, unique
  Bytes ciphertext;
  std::uint32_t hop_ttl = 0;
  NodeId origin = 0;
  std::vector<std::uint32_t> visited;
  bool operator==(const Substance&) const = default;
};

/// Pluggable sealing scheme.
class CipherScheme {
 public:
  virtual ~CipherScheme() = default;
  virtual Substance seal(const Bytes& payload, std::vector<PublicToken> required, std::uint32_t ttl,
                         NodeId origin) const = 0;
  virtual std::optional<Bytes> try_open(const Substance& sub, const std::vector<PrivateToken>& held) const = 0;
};

/// Keyed XOR stream derived from the sorted private counterparts of the
/// required tokens, plus a 64-bit integrity tag. Gives matching semantics
/// only; it is not a secure cipher.
class DefaultCipher final : public CipherScheme {
 public:
  /// Throws Error("EmptyReceptorSet") when `required` is empty.
  Substance seal(const Bytes& payload, std::vector<PublicToken> required, std::uint32_t ttl,
                 NodeId origin) const override;
  /// Payload iff `held` covers every required token; nullopt otherwise.
  std::optional<Bytes> try_open(const Substance& sub, const std::vector<PrivateToken>& held) const override;
};

Substance seal(const Bytes& payload, std::vector<PublicToken> required, std::uint32_t ttl, NodeId origin);
std::optional<Bytes> try_open(const Substance& sub, const std::vector<PrivateToken>& held);

/// Wire form carried in an Immune packet payload.
Bytes encode_substance(const Substance& sub);
/// Throws Error("MalformedSubstance").
Substance decode_substance(const Bytes& wire);

}  // namespace sana
