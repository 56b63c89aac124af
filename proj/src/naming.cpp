#include "netinf/naming.hpp"

#include <openssl/evp.h>

#include <cstring>

#include "netinf/error.hpp"

namespace netinf {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::InvalidLabel: return "InvalidLabel";
    case Errc::EmptyContent: return "EmptyContent";
    case Errc::ParseError: return "ParseError";
    case Errc::UnknownEntity: return "UnknownEntity";
    case Errc::DuplicateEntity: return "DuplicateEntity";
    case Errc::IllegalAttachment: return "IllegalAttachment";
    case Errc::NotAttached: return "NotAttached";
    case Errc::CycleDetected: return "CycleDetected";
    case Errc::Unreachable: return "Unreachable";
    case Errc::UnknownAR: return "UnknownAR";
    case Errc::NameNotFound: return "NameNotFound";
    case Errc::Detached: return "Detached";
    case Errc::NoCandidates: return "NoCandidates";
    case Errc::VerificationFailed: return "VerificationFailed";
    case Errc::UnknownHost: return "UnknownHost";
    case Errc::StaleRoute: return "StaleRoute";
    case Errc::ScenarioError: return "ScenarioError";
    case Errc::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

Digest sha256(std::span<const std::uint8_t> data) {
  Digest out{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 ||
      len != out.size()) {
    throw std::runtime_error("EVP_Digest(sha256) failed");
  }
  return out;
}

Digest sha256(std::string_view text) {
  return sha256(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

const char* scheme_text(NameScheme s) {
  return s == NameScheme::OwnerKey ? "owner" : "content";
}

}  // namespace

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw Error(Errc::ParseError, "odd-length hex string");
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    int hi = hex_value(hex[2 * i]);
    int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw Error(Errc::ParseError, "invalid hex character");
    out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
  }
  return out;
}

OwnerIdentity::OwnerIdentity(std::uint64_t seed) : seed_(seed) {
  static constexpr std::string_view kDomain = "netinf-surrogate-key";
  std::array<std::uint8_t, kDomain.size() + 8> buf{};
  std::memcpy(buf.data(), kDomain.data(), kDomain.size());
  for (int i = 0; i < 8; ++i) buf[kDomain.size() + i] = static_cast<std::uint8_t>(seed >> (8 * i));
  public_key_ = sha256(buf);
}

bool is_valid_label(std::string_view label) noexcept {
  if (label.empty() || label.size() > kMaxLabelBytes) return false;
  for (char c : label) {
    if (c == '@' || c == '/') return false;
    // Labels appear in whitespace-separated scenario lines.
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') return false;
  }
  return true;
}

ObjectName derive_owner_name(const OwnerIdentity& owner, std::string_view label) {
  if (!is_valid_label(label)) throw Error(Errc::InvalidLabel, "label '" + std::string(label) + "'");
  return ObjectName{NameScheme::OwnerKey, sha256(owner.public_key()), std::string(label)};
}

ObjectName derive_content_name(std::span<const std::uint8_t> content) {
  if (content.empty()) throw Error(Errc::EmptyContent, "content must be non-empty");
  return ObjectName{NameScheme::ContentHash, sha256(content), std::string(kContentLabel)};
}

bool verify_name(const ObjectName& name, std::span<const std::uint8_t> evidence) noexcept {
  try {
    return sha256(evidence) == name.authenticator;
  } catch (...) {
    return false;
  }
}

std::string format_name(const ObjectName& name) {
  std::string out = "ni:";
  out += scheme_text(name.scheme);
  out += ':';
  out += to_hex(name.authenticator);
  out += ':';
  out += name.label;
  return out;
}

ObjectName parse_name(std::string_view text) {
  auto fail = [&](const char* why) {
    return Error(Errc::ParseError, std::string(why) + " in name '" + std::string(text) + "'");
  };
  if (!text.starts_with("ni:")) throw fail("missing 'ni:' prefix");
  std::string_view rest = text.substr(3);

  auto colon = rest.find(':');
  if (colon == std::string_view::npos) throw fail("missing scheme separator");
  std::string_view scheme = rest.substr(0, colon);
  rest = rest.substr(colon + 1);

  ObjectName name;
  if (scheme == "owner") {
    name.scheme = NameScheme::OwnerKey;
  } else if (scheme == "content") {
    name.scheme = NameScheme::ContentHash;
  } else {
    throw fail("unknown scheme");
  }

  colon = rest.find(':');
  if (colon == std::string_view::npos) throw fail("missing label separator");
  std::string_view hex = rest.substr(0, colon);
  if (hex.size() != 2 * name.authenticator.size()) throw fail("authenticator must be 64 hex chars");
  for (char c : hex) {
    // Canonical form is lowercase only, so format(parse(t)) == t.
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) throw fail("non-canonical hex");
  }
  auto bytes = from_hex(hex);
  std::copy(bytes.begin(), bytes.end(), name.authenticator.begin());

  std::string_view label = rest.substr(colon + 1);
  if (!is_valid_label(label)) throw Error(Errc::ParseError, "invalid label in name '" + std::string(text) + "'");
  name.label = std::string(label);
  return name;
}

}  // namespace netinf
