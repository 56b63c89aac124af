#pragma once

// Self-certifying object names.
//
// Every authenticator is a SHA-256 digest. OwnerKey names hash a (surrogate)
// public key, ContentHash names hash the object payload. Canonical text:
//
//   ni:<owner|content>:<64 lowercase hex chars>:<label>

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace netinf {

using Bytes = std::vector<std::uint8_t>;
using Digest = std::array<std::uint8_t, 32>;

Digest sha256(std::span<const std::uint8_t> data);
Digest sha256(std::string_view text);

std::string to_hex(std::span<const std::uint8_t> bytes);
/// Throws Error(ParseError) on odd length or non-hex characters.
Bytes from_hex(std::string_view hex);

/// Stand-in for a real keypair: the public key is derived from the seed
/// as SHA-256("netinf-surrogate-key" || seed as 8 little-endian bytes).
class OwnerIdentity {
 public:
  explicit OwnerIdentity(std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }
  const Digest& public_key() const noexcept { return public_key_; }

 private:
  std::uint64_t seed_;
  Digest public_key_;
};

enum class NameScheme : std::uint8_t { OwnerKey, ContentHash };

struct ObjectName {
  NameScheme scheme = NameScheme::ContentHash;
  Digest authenticator{};
  std::string label;

  friend auto operator<=>(const ObjectName&, const ObjectName&) = default;
  friend bool operator==(const ObjectName&, const ObjectName&) = default;
};

inline constexpr std::size_t kMaxLabelBytes = 64;
inline constexpr std::string_view kContentLabel = "data";

bool is_valid_label(std::string_view label) noexcept;

ObjectName derive_owner_name(const OwnerIdentity& owner, std::string_view label);
ObjectName derive_content_name(std::span<const std::uint8_t> content);

/// Evidence is the owner's public key for OwnerKey names, the payload for
/// ContentHash names.
bool verify_name(const ObjectName& name, std::span<const std::uint8_t> evidence) noexcept;

std::string format_name(const ObjectName& name);
ObjectName parse_name(std::string_view text);

}  // namespace netinf
