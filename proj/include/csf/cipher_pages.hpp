#pragma once

/*
 * SQLCipher-format page codec. An encrypted database is a sequence of
 * page_size-byte pages; the first 16 bytes of the file are a random KDF
 * salt that replaces the plaintext "SQLite format 3\0" magic. Each page
 * ends with a reserve region holding the per-page CBC IV (16 bytes), an
 * HMAC-SHA1 of ciphertext || IV || page number (20 bytes, little-endian
 * page number), and random padding up to the reserve size.
 *
 *   page 1:  [salt 16][ciphertext ............][IV][HMAC][pad]
 *   page n:  [ciphertext .....................][IV][HMAC][pad]
 *
 * Defaults follow the 3.x generation of the format: AES-256-CBC,
 * PBKDF2-HMAC-SHA1 with 64000 iterations for textual keys, 48-byte
 * reserve. Every parameter is configuration, not a constant.
 */

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "csf/bytes.hpp"
#include "csf/crypto.hpp"
#include "csf/errors.hpp"

namespace csf::cipher {

inline constexpr size_t kFileSaltLen = 16;
inline constexpr size_t kPageIvLen = 16;
inline constexpr size_t kPageHmacLen = 20;
inline constexpr uint8_t kHmacSaltMask = 0x3A;
inline constexpr uint32_t kFastKdfIterations = 2;
inline constexpr char kSqliteMagic[] = "SQLite format 3";  // + NUL = 16 bytes

// Raw mode supplies the 32 key bytes directly and bypasses the KDF; the
// hex form mirrors the x'..' PRAGMA. Textual mode mirrors the quoted
// PRAGMA string and derives the key from the file salt.
struct RawKey {
    std::array<uint8_t, 32> bytes{};
};

struct TextualKey {
    std::string text;
};

struct CipherProfile {
    uint32_t page_size = 1024;
    uint32_t kdf_iterations = 64000;  // textual mode only
    bool hmac_enabled = true;
    uint32_t reserve_size = 48;
    std::variant<RawKey, TextualKey> key;

    static CipherProfile raw_hex(std::string_view hex_key, uint32_t page_size = 1024) {
        Bytes bytes = from_hex(hex_key);
        if (bytes.size() != 32)
            throw BadKeyLength("raw key must be 64 hex characters (32 bytes), got " +
                               std::to_string(bytes.size() * 2));
        CipherProfile profile;
        profile.page_size = page_size;
        RawKey raw;
        std::copy(bytes.begin(), bytes.end(), raw.bytes.begin());
        profile.key = raw;
        return profile;
    }

    static CipherProfile raw(const std::array<uint8_t, 32>& key_bytes,
                             uint32_t page_size = 1024) {
        CipherProfile profile;
        profile.page_size = page_size;
        profile.key = RawKey{key_bytes};
        return profile;
    }

    static CipherProfile textual(std::string key_text, uint32_t page_size = 8192,
                                 uint32_t kdf_iterations = 64000) {
        CipherProfile profile;
        profile.page_size = page_size;
        profile.kdf_iterations = kdf_iterations;
        profile.key = TextualKey{std::move(key_text)};
        return profile;
    }

    bool is_raw() const { return std::holds_alternative<RawKey>(key); }

    void validate() const {
        if (page_size < 512 || page_size > 65536 || (page_size & (page_size - 1)) != 0)
            throw ParseError("page size must be a power of two in [512, 65536]");
        if (reserve_size % crypto::kAesBlockLen != 0)
            throw ParseError("reserve size must be a multiple of the cipher block size");
        uint32_t minimum = hmac_enabled
                               ? static_cast<uint32_t>(kPageIvLen + kPageHmacLen)
                               : static_cast<uint32_t>(kPageIvLen);
        if (reserve_size < minimum)
            throw ParseError("reserve size too small for IV" +
                             std::string(hmac_enabled ? " and HMAC" : ""));
        if (reserve_size >= page_size)
            throw ParseError("reserve size must be smaller than the page size");
    }
};

struct PageKeys {
    std::array<uint8_t, 32> enc_key{};
    std::array<uint8_t, 32> hmac_key{};
};

// Raw mode: the key bytes are used as-is (no KDF ever runs, so a zero
// kdf_iterations sentinel is legal there). Textual mode: PBKDF2 over the
// key text with the file salt. The MAC key is always a fast two-iteration
// PBKDF2 of the encryption key with the mask-XORed salt.
inline PageKeys derive_page_keys(const CipherProfile& profile, ByteView file_salt) {
    if (file_salt.size() != kFileSaltLen)
        throw ParseError("file salt must be 16 bytes");
    PageKeys keys;
    if (const auto* raw = std::get_if<RawKey>(&profile.key)) {
        keys.enc_key = raw->bytes;
    } else {
        const auto& textual = std::get<TextualKey>(profile.key);
        Bytes derived = crypto::pbkdf2_hmac_sha1(as_bytes_view(textual.text), file_salt,
                                                 profile.kdf_iterations, 32);
        std::copy(derived.begin(), derived.end(), keys.enc_key.begin());
    }
    std::array<uint8_t, kFileSaltLen> hmac_salt{};
    for (size_t i = 0; i < kFileSaltLen; ++i)
        hmac_salt[i] = file_salt[i] ^ kHmacSaltMask;
    Bytes derived = crypto::pbkdf2_hmac_sha1(keys.enc_key, hmac_salt,
                                             kFastKdfIterations, 32);
    std::copy(derived.begin(), derived.end(), keys.hmac_key.begin());
    return keys;
}

namespace detail {

// Content region start: page 1 keeps the 16-byte file salt in front.
inline size_t content_offset(uint32_t page_no) { return page_no == 1 ? 16 : 0; }

inline std::array<uint8_t, 4> page_no_le(uint32_t page_no) {
    std::array<uint8_t, 4> out{};
    write_le32(out.data(), page_no);
    return out;
}

}  // namespace detail

// Decrypts one page and returns the full page_size plaintext: page 1 is
// re-prefixed with the standard magic, the reserve region comes back
// zeroed (its IV/MAC content is meaningless in the plaintext image).
inline Bytes decrypt_page(const CipherProfile& profile, const PageKeys& keys,
                          uint32_t page_no, ByteView page) {
    profile.validate();
    if (page.size() != profile.page_size)
        throw ParseError("page " + std::to_string(page_no) + " has wrong length");
    size_t offset = detail::content_offset(page_no);
    size_t reserve_start = profile.page_size - profile.reserve_size;
    ByteView ciphertext = page.subspan(offset, reserve_start - offset);
    ByteView iv = page.subspan(reserve_start, kPageIvLen);

    if (profile.hmac_enabled) {
        ByteView stored_mac = page.subspan(reserve_start + kPageIvLen, kPageHmacLen);
        auto page_no_bytes = detail::page_no_le(page_no);
        auto computed = crypto::hmac_sha1(keys.hmac_key, {ciphertext, iv, page_no_bytes});
        if (!std::equal(computed.begin(), computed.end(), stored_mac.begin()))
            throw HmacMismatch(page_no);
    }

    Bytes plain_content = crypto::aes256_cbc_decrypt(keys.enc_key, iv, ciphertext);
    Bytes out(profile.page_size, 0);
    if (page_no == 1) std::memcpy(out.data(), kSqliteMagic, 16);
    std::copy(plain_content.begin(), plain_content.end(), out.begin() + offset);
    return out;
}

// Fixture-side inverse. `plain_page` is the full page from a plaintext
// image; for page 1 the leading magic is replaced by `file_salt`.
inline Bytes encrypt_page(const CipherProfile& profile, const PageKeys& keys,
                          uint32_t page_no, ByteView plain_page, ByteView file_salt,
                          crypto::Rng& rng) {
    profile.validate();
    if (plain_page.size() != profile.page_size)
        throw ParseError("plaintext page has wrong length");
    size_t offset = detail::content_offset(page_no);
    size_t reserve_start = profile.page_size - profile.reserve_size;

    Bytes out(profile.page_size);
    auto iv = rng.array<kPageIvLen>();
    Bytes ciphertext = crypto::aes256_cbc_encrypt(
        keys.enc_key, iv, plain_page.subspan(offset, reserve_start - offset));

    if (page_no == 1) std::copy(file_salt.begin(), file_salt.end(), out.begin());
    std::copy(ciphertext.begin(), ciphertext.end(), out.begin() + offset);
    std::copy(iv.begin(), iv.end(), out.begin() + reserve_start);
    size_t mac_end = reserve_start + kPageIvLen;
    if (profile.hmac_enabled) {
        auto page_no_bytes = detail::page_no_le(page_no);
        auto mac = crypto::hmac_sha1(keys.hmac_key,
                                     {ByteView(ciphertext), ByteView(iv), page_no_bytes});
        std::copy(mac.begin(), mac.end(), out.begin() + mac_end);
        mac_end += kPageHmacLen;
    }
    if (mac_end < out.size()) rng.fill(out.data() + mac_end, out.size() - mac_end);
    return out;
}

struct EncryptedDbFile {
    std::array<uint8_t, kFileSaltLen> file_salt{};
    size_t page_count = 0;
    Bytes raw;

    static EncryptedDbFile open(Bytes data, uint32_t page_size) {
        if (data.size() < page_size)
            throw TruncatedFile("file is smaller than a single page (" +
                                std::to_string(data.size()) + " bytes)");
        if (data.size() % page_size != 0)
            throw TruncatedFile("file length is not a multiple of the page size");
        EncryptedDbFile file;
        std::copy(data.begin(), data.begin() + kFileSaltLen, file.file_salt.begin());
        file.page_count = data.size() / page_size;
        file.raw = std::move(data);
        return file;
    }
};

// Decrypts a whole database into a plaintext SQLite image. The decrypted
// page-1 header already describes the image (its page-size field must
// match the profile; its reserve byte is the btree reserve, which may be
// larger than the codec reserve on files written by other tools, so it is
// preserved as-is).
inline Bytes decrypt_database(ByteView file, const CipherProfile& profile) {
    profile.validate();
    EncryptedDbFile db = EncryptedDbFile::open(Bytes(file.begin(), file.end()),
                                               profile.page_size);
    PageKeys keys = derive_page_keys(profile, db.file_salt);
    Bytes image;
    image.reserve(db.raw.size());
    for (size_t page_no = 1; page_no <= db.page_count; ++page_no) {
        ByteView page(db.raw.data() + (page_no - 1) * profile.page_size,
                      profile.page_size);
        Bytes plain = decrypt_page(profile, keys, static_cast<uint32_t>(page_no), page);
        image.insert(image.end(), plain.begin(), plain.end());
    }
    uint32_t header_page_size = read_be16(image.data() + 16);
    if (header_page_size == 1) header_page_size = 65536;
    if (header_page_size != profile.page_size)
        throw ParseError("decrypted header page size " + std::to_string(header_page_size) +
                         " does not match profile page size " +
                         std::to_string(profile.page_size));
    return image;
}

// Fixture-side: encrypts a plaintext SQLite image. The image must already
// be laid out for the profile — matching page size, and a btree reserve
// of at least reserve_size so cell content cannot collide with the IV/MAC
// region (use the fixture helpers to author such images).
inline Bytes encrypt_database(ByteView plain_image, const CipherProfile& profile,
                              crypto::Rng& rng) {
    profile.validate();
    if (plain_image.size() < 100 ||
        std::memcmp(plain_image.data(), kSqliteMagic, 16) != 0)
        throw ParseError("input is not a plaintext SQLite image");
    uint32_t header_page_size = read_be16(plain_image.data() + 16);
    if (header_page_size == 1) header_page_size = 65536;
    if (header_page_size != profile.page_size)
        throw PageSizeMismatch("image page size is " + std::to_string(header_page_size) +
                               ", profile wants " + std::to_string(profile.page_size));
    uint8_t btree_reserve = plain_image[20];
    if (btree_reserve < profile.reserve_size)
        throw PageSizeMismatch("image reserves " + std::to_string(btree_reserve) +
                               " bytes per page but the profile needs " +
                               std::to_string(profile.reserve_size) +
                               "; re-page the database first");
    if (plain_image.size() % profile.page_size != 0)
        throw TruncatedFile("plaintext image length is not a multiple of the page size");

    std::array<uint8_t, kFileSaltLen> file_salt{};
    do {
        file_salt = rng.array<kFileSaltLen>();
    } while (std::memcmp(file_salt.data(), kSqliteMagic, kFileSaltLen) == 0);

    PageKeys keys = derive_page_keys(profile, file_salt);
    size_t page_count = plain_image.size() / profile.page_size;
    Bytes out;
    out.reserve(plain_image.size());
    for (size_t page_no = 1; page_no <= page_count; ++page_no) {
        ByteView page = plain_image.subspan((page_no - 1) * profile.page_size,
                                            profile.page_size);
        Bytes enc = encrypt_page(profile, keys, static_cast<uint32_t>(page_no), page,
                                 file_salt, rng);
        out.insert(out.end(), enc.begin(), enc.end());
    }
    return out;
}

// Cheap wrong-key probe used by candidate validation: verify page 1's MAC
// without decrypting the rest of the file.
inline bool verify_first_page(ByteView file, const CipherProfile& profile) {
    try {
        profile.validate();
        if (file.size() < profile.page_size) return false;
        std::array<uint8_t, kFileSaltLen> salt{};
        std::copy(file.begin(), file.begin() + kFileSaltLen, salt.begin());
        PageKeys keys = derive_page_keys(profile, salt);
        decrypt_page(profile, keys, 1, file.subspan(0, profile.page_size));
        return true;
    } catch (const Error&) {
        return false;
    }
}

}  // namespace csf::cipher
