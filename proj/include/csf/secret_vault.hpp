#pragma once

/*
 * CacheWord-style serialized secret handling: the database key sits in
 * shared preferences as Base64 of
 *
 *     iteration_count (4, big-endian) || salt (16) || iv (12) || wrapped key (48)
 *
 * where the wrapped key is AES-256-GCM ciphertext+tag of the raw 32-byte
 * SQLCipher key under a PBKDF2-HMAC-SHA1 passphrase key. This module
 * parses/encodes that container and performs the wrap/unwrap, plus the
 * textual-key truncation rule the encrypted virtual disk uses.
 */

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "csf/base64.hpp"
#include "csf/bytes.hpp"
#include "csf/crypto.hpp"
#include "csf/errors.hpp"
#include "csf/prefs_xml.hpp"

namespace csf::vault {

inline constexpr size_t kSaltLen = 16;   // 128-bit KDF salt
inline constexpr size_t kIvLen = 12;     // 96-bit GCM nonce
inline constexpr size_t kKeyLen = 32;    // 256-bit database key
inline constexpr size_t kWrappedLen = kKeyLen + crypto::kGcmTagLen;  // 48
inline constexpr size_t kMinBlobLen = 4 + kSaltLen + kIvLen + kWrappedLen;  // 80

struct Passphrase {
    explicit Passphrase(std::string value) : text(std::move(value)) {
        if (text.empty()) throw ParseError("passphrase must be non-empty");
    }
    std::string text;
};

struct DatabaseKey {
    std::array<uint8_t, kKeyLen> bytes{};

    static DatabaseKey from_bytes(ByteView raw) {
        if (raw.size() != kKeyLen)
            throw BadKeyLength("database key must be exactly 32 bytes, got " +
                               std::to_string(raw.size()));
        DatabaseKey key;
        std::copy(raw.begin(), raw.end(), key.bytes.begin());
        return key;
    }

    static DatabaseKey from_hex(std::string_view hex) {
        return from_bytes(csf::from_hex(hex));
    }

    std::string hex() const { return to_hex(bytes); }

    bool operator==(const DatabaseKey&) const = default;
};

struct SerializedSecret {
    uint32_t iteration_count = 0;
    std::array<uint8_t, kSaltLen> salt{};
    std::array<uint8_t, kIvLen> iv{};
    Bytes wrapped_key;  // ciphertext (32) || GCM tag (16)

    // Slices a decoded blob at its fixed byte offsets 0/4/20/32.
    static SerializedSecret from_blob(ByteView blob) {
        if (blob.size() < kMinBlobLen)
            throw BlobTooShort("serialized secret is " + std::to_string(blob.size()) +
                               " bytes, need at least " + std::to_string(kMinBlobLen));
        SerializedSecret secret;
        secret.iteration_count = read_be32(blob.data());
        std::copy(blob.begin() + 4, blob.begin() + 4 + kSaltLen, secret.salt.begin());
        std::copy(blob.begin() + 20, blob.begin() + 20 + kIvLen, secret.iv.begin());
        secret.wrapped_key.assign(blob.begin() + 32, blob.end());
        secret.validate();
        return secret;
    }

    Bytes to_blob() const {
        Bytes blob(4 + kSaltLen + kIvLen + wrapped_key.size());
        write_be32(blob.data(), iteration_count);
        std::copy(salt.begin(), salt.end(), blob.begin() + 4);
        std::copy(iv.begin(), iv.end(), blob.begin() + 20);
        std::copy(wrapped_key.begin(), wrapped_key.end(), blob.begin() + 32);
        return blob;
    }

    void validate() const {
        if (iteration_count < 1)
            throw ParseError("serialized secret has zero KDF iteration count");
        if (wrapped_key.size() != kWrappedLen)
            throw ParseError("wrapped key is " + std::to_string(wrapped_key.size()) +
                             " bytes, expected " + std::to_string(kWrappedLen));
    }

    bool operator==(const SerializedSecret&) const = default;
};

// PBKDF2-HMAC-SHA1 over the UTF-8 passphrase; 32-byte output.
inline std::array<uint8_t, kKeyLen> derive_passphrase_key(const Passphrase& passphrase,
                                                          ByteView salt,
                                                          uint32_t iteration_count) {
    if (iteration_count < 1) throw ParseError("iteration count must be >= 1");
    Bytes derived = crypto::pbkdf2_hmac_sha1(as_bytes_view(passphrase.text), salt,
                                             iteration_count, kKeyLen);
    std::array<uint8_t, kKeyLen> out{};
    std::copy(derived.begin(), derived.end(), out.begin());
    return out;
}

inline DatabaseKey unwrap_database_key(const SerializedSecret& secret,
                                       const Passphrase& passphrase) {
    secret.validate();
    auto passphrase_key =
        derive_passphrase_key(passphrase, secret.salt, secret.iteration_count);
    auto plain = crypto::aes256_gcm_decrypt(passphrase_key, secret.iv, secret.wrapped_key);
    if (!plain)
        throw AuthFailure("secret authentication failed: wrong passphrase or corrupted blob");
    return DatabaseKey::from_bytes(*plain);
}

// Fixture-side inverse of unwrap_database_key. Salt and IV are drawn from
// the supplied RNG so deterministic fixtures stay reproducible.
inline SerializedSecret wrap_database_key(const DatabaseKey& key,
                                          const Passphrase& passphrase,
                                          uint32_t iteration_count, crypto::Rng& rng) {
    if (iteration_count < 1) throw ParseError("iteration count must be >= 1");
    SerializedSecret secret;
    secret.iteration_count = iteration_count;
    secret.salt = rng.array<kSaltLen>();
    secret.iv = rng.array<kIvLen>();
    auto passphrase_key =
        derive_passphrase_key(passphrase, secret.salt, secret.iteration_count);
    secret.wrapped_key = crypto::aes256_gcm_encrypt(passphrase_key, secret.iv, key.bytes);
    return secret;
}

// The virtual-disk database is keyed with the lower-case hex rendering of
// the raw key truncated to its leftmost 32 characters (= first 16 bytes).
inline std::string textual_media_key(const DatabaseKey& key) {
    return to_hex(key.bytes).substr(0, 32);
}

// ---- shared-preferences container ----

namespace detail {

inline std::optional<SerializedSecret> try_decode_entry(const std::string& value) {
    auto blob = base64_decode(value);
    if (!blob || blob->size() < kMinBlobLen) return std::nullopt;
    try {
        return SerializedSecret::from_blob(*blob);
    } catch (const ParseError&) {
        return std::nullopt;
    }
}

}  // namespace detail

// Finds the secret among the file's string entries. Preference files carry
// unrelated entries too, so without an explicit entry name every string
// value is tried and the first structurally valid secret wins.
inline SerializedSecret parse_serialized_secret(
    std::string_view prefs_xml, const std::optional<std::string>& entry_name = {}) {
    auto entries = prefs::parse_prefs_xml(prefs_xml);
    if (entry_name) {
        for (const auto& entry : entries) {
            if (entry.name != *entry_name) continue;
            auto blob = base64_decode(entry.value);
            if (!blob)
                throw NoSecretEntry("entry '" + *entry_name + "' is not valid Base64");
            return SerializedSecret::from_blob(*blob);  // surfaces BlobTooShort
        }
        throw NoSecretEntry("no string entry named '" + *entry_name + "'");
    }
    for (const auto& entry : entries) {
        if (auto secret = detail::try_decode_entry(entry.value)) return *secret;
    }
    throw NoSecretEntry("no string entry decodes to a plausible serialized secret");
}

inline SerializedSecret parse_serialized_secret(
    ByteView prefs_xml, const std::optional<std::string>& entry_name = {}) {
    return parse_serialized_secret(
        std::string_view(reinterpret_cast<const char*>(prefs_xml.data()), prefs_xml.size()),
        entry_name);
}

// Fixture-side: renders a preferences file holding the secret (plus any
// extra entries the caller wants as realistic clutter).
inline std::string write_serialized_secret(
    const SerializedSecret& secret, const std::string& entry_name = "encoded_secrets",
    const std::vector<prefs::StringEntry>& extra_entries = {}) {
    std::vector<prefs::StringEntry> entries = extra_entries;
    entries.push_back({entry_name, base64_encode(secret.to_blob())});
    return prefs::write_prefs_xml(entries);
}

}  // namespace csf::vault
