#pragma once

/*
 * Thin RAII wrappers over the OpenSSL 3 EVP interfaces: the digest, MAC,
 * KDF and cipher primitives every other module builds on. Also provides
 * the two RNGs used by the toolkit — the system CSPRNG for real key
 * material and a seeded generator for reproducible fixtures.
 */

#include <openssl/evp.h>
#include <openssl/core_names.h>
#include <openssl/rand.h>

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>

#include "csf/bytes.hpp"
#include "csf/errors.hpp"

namespace csf::crypto {

inline constexpr size_t kSha1Len = 20;
inline constexpr size_t kSha256Len = 32;
inline constexpr size_t kAes256KeyLen = 32;
inline constexpr size_t kGcmIvLen = 12;
inline constexpr size_t kGcmTagLen = 16;
inline constexpr size_t kCbcIvLen = 16;
inline constexpr size_t kAesBlockLen = 16;

namespace detail {

struct CipherCtxDeleter {
    void operator()(EVP_CIPHER_CTX* p) const { EVP_CIPHER_CTX_free(p); }
};
using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxDeleter>;

inline CipherCtx make_cipher_ctx() {
    CipherCtx ctx(EVP_CIPHER_CTX_new());
    if (!ctx) throw CryptoError("EVP_CIPHER_CTX_new failed");
    return ctx;
}

struct MacDeleter {
    void operator()(EVP_MAC* p) const { EVP_MAC_free(p); }
};

struct MacCtxDeleter {
    void operator()(EVP_MAC_CTX* p) const { EVP_MAC_CTX_free(p); }
};

}  // namespace detail

inline std::array<uint8_t, kSha1Len> sha1(ByteView data) {
    std::array<uint8_t, kSha1Len> out{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha1(), nullptr) != 1 ||
        len != kSha1Len)
        throw CryptoError("SHA-1 computation failed");
    return out;
}

inline std::array<uint8_t, kSha256Len> sha256(ByteView data) {
    std::array<uint8_t, kSha256Len> out{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len != kSha256Len)
        throw CryptoError("SHA-256 computation failed");
    return out;
}

// HMAC-SHA1 over the concatenation of `parts`, computed incrementally so
// page MACs never need a scratch copy of ciphertext || IV || page number.
inline std::array<uint8_t, kSha1Len> hmac_sha1(ByteView key,
                                               std::initializer_list<ByteView> parts) {
    static EVP_MAC* mac = [] {
        EVP_MAC* m = EVP_MAC_fetch(nullptr, "HMAC", nullptr);
        if (!m) throw CryptoError("EVP_MAC_fetch(HMAC) failed");
        return m;
    }();
    std::unique_ptr<EVP_MAC_CTX, detail::MacCtxDeleter> ctx(EVP_MAC_CTX_new(mac));
    if (!ctx) throw CryptoError("EVP_MAC_CTX_new failed");
    char digest_name[] = "SHA1";
    OSSL_PARAM params[] = {
        OSSL_PARAM_construct_utf8_string(OSSL_MAC_PARAM_DIGEST, digest_name, 0),
        OSSL_PARAM_construct_end(),
    };
    if (EVP_MAC_init(ctx.get(), key.data(), key.size(), params) != 1)
        throw CryptoError("HMAC init failed");
    for (ByteView part : parts) {
        if (EVP_MAC_update(ctx.get(), part.data(), part.size()) != 1)
            throw CryptoError("HMAC update failed");
    }
    std::array<uint8_t, kSha1Len> out{};
    size_t out_len = 0;
    if (EVP_MAC_final(ctx.get(), out.data(), &out_len, out.size()) != 1 ||
        out_len != kSha1Len)
        throw CryptoError("HMAC final failed");
    return out;
}

inline Bytes pbkdf2_hmac_sha1(ByteView password, ByteView salt, uint32_t iterations,
                              size_t out_len) {
    if (iterations < 1) throw CryptoError("PBKDF2 iteration count must be >= 1");
    Bytes out(out_len);
    if (PKCS5_PBKDF2_HMAC(reinterpret_cast<const char*>(password.data()),
                          static_cast<int>(password.size()), salt.data(),
                          static_cast<int>(salt.size()), static_cast<int>(iterations),
                          EVP_sha1(), static_cast<int>(out_len), out.data()) != 1)
        throw CryptoError("PBKDF2 computation failed");
    return out;
}

// AES-256-GCM. Output is ciphertext || 16-byte tag, the layout the
// Android crypto stack produces for AES/GCM/NoPadding.
inline Bytes aes256_gcm_encrypt(ByteView key, ByteView iv, ByteView plaintext) {
    if (key.size() != kAes256KeyLen) throw BadKeyLength("GCM key must be 32 bytes");
    auto ctx = detail::make_cipher_ctx();
    if (EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, nullptr, nullptr) != 1 ||
        EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_IVLEN,
                            static_cast<int>(iv.size()), nullptr) != 1 ||
        EVP_EncryptInit_ex(ctx.get(), nullptr, nullptr, key.data(), iv.data()) != 1)
        throw CryptoError("GCM encrypt init failed");
    Bytes out(plaintext.size() + kGcmTagLen);
    int len = 0;
    if (EVP_EncryptUpdate(ctx.get(), out.data(), &len, plaintext.data(),
                          static_cast<int>(plaintext.size())) != 1)
        throw CryptoError("GCM encrypt failed");
    int total = len;
    if (EVP_EncryptFinal_ex(ctx.get(), out.data() + total, &len) != 1)
        throw CryptoError("GCM encrypt finalization failed");
    total += len;
    if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, kGcmTagLen,
                            out.data() + total) != 1)
        throw CryptoError("GCM tag retrieval failed");
    out.resize(static_cast<size_t>(total) + kGcmTagLen);
    return out;
}

// Returns nullopt when the authentication tag does not verify.
inline std::optional<Bytes> aes256_gcm_decrypt(ByteView key, ByteView iv,
                                               ByteView ciphertext_and_tag) {
    if (key.size() != kAes256KeyLen) throw BadKeyLength("GCM key must be 32 bytes");
    if (ciphertext_and_tag.size() < kGcmTagLen) return std::nullopt;
    size_t ct_len = ciphertext_and_tag.size() - kGcmTagLen;
    auto ctx = detail::make_cipher_ctx();
    if (EVP_DecryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, nullptr, nullptr) != 1 ||
        EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_IVLEN,
                            static_cast<int>(iv.size()), nullptr) != 1 ||
        EVP_DecryptInit_ex(ctx.get(), nullptr, nullptr, key.data(), iv.data()) != 1)
        throw CryptoError("GCM decrypt init failed");
    Bytes out(ct_len);
    int len = 0;
    if (ct_len > 0 && EVP_DecryptUpdate(ctx.get(), out.data(), &len,
                                        ciphertext_and_tag.data(),
                                        static_cast<int>(ct_len)) != 1)
        return std::nullopt;
    int total = len;
    Bytes tag(ciphertext_and_tag.begin() + static_cast<ptrdiff_t>(ct_len),
              ciphertext_and_tag.end());
    if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, kGcmTagLen, tag.data()) != 1)
        throw CryptoError("GCM tag set failed");
    if (EVP_DecryptFinal_ex(ctx.get(), out.data() + total, &len) != 1)
        return std::nullopt;  // tag mismatch
    total += len;
    out.resize(static_cast<size_t>(total));
    return out;
}

namespace detail {

inline Bytes aes256_cbc(bool encrypt, ByteView key, ByteView iv, ByteView input) {
    if (key.size() != kAes256KeyLen) throw BadKeyLength("CBC key must be 32 bytes");
    if (iv.size() != kCbcIvLen) throw CryptoError("CBC IV must be 16 bytes");
    if (input.size() % kAesBlockLen != 0)
        throw CryptoError("CBC input must be block aligned");
    auto ctx = make_cipher_ctx();
    if (EVP_CipherInit_ex(ctx.get(), EVP_aes_256_cbc(), nullptr, key.data(), iv.data(),
                          encrypt ? 1 : 0) != 1)
        throw CryptoError("CBC init failed");
    EVP_CIPHER_CTX_set_padding(ctx.get(), 0);
    Bytes out(input.size());
    int len = 0;
    if (!input.empty() &&
        EVP_CipherUpdate(ctx.get(), out.data(), &len, input.data(),
                         static_cast<int>(input.size())) != 1)
        throw CryptoError("CBC transform failed");
    int total = len;
    if (EVP_CipherFinal_ex(ctx.get(), out.data() + total, &len) != 1)
        throw CryptoError("CBC finalization failed");
    total += len;
    out.resize(static_cast<size_t>(total));
    return out;
}

}  // namespace detail

// Unpadded AES-256-CBC (the page layer works on block-aligned regions).
inline Bytes aes256_cbc_encrypt(ByteView key, ByteView iv, ByteView plaintext) {
    return detail::aes256_cbc(true, key, iv, plaintext);
}

inline Bytes aes256_cbc_decrypt(ByteView key, ByteView iv, ByteView ciphertext) {
    return detail::aes256_cbc(false, key, iv, ciphertext);
}

// ---- random sources ----

class Rng {
public:
    virtual ~Rng() = default;
    virtual void fill(uint8_t* out, size_t len) = 0;

    Bytes bytes(size_t len) {
        Bytes out(len);
        fill(out.data(), len);
        return out;
    }

    template <size_t N>
    std::array<uint8_t, N> array() {
        std::array<uint8_t, N> out{};
        fill(out.data(), N);
        return out;
    }

    uint64_t next_u64() {
        uint8_t buf[8];
        fill(buf, sizeof buf);
        uint64_t v = 0;
        for (uint8_t b : buf) v = (v << 8) | b;
        return v;
    }

    // Unbiased-enough for fixture data selection.
    uint64_t below(uint64_t bound) { return bound ? next_u64() % bound : 0; }
};

class SystemRng final : public Rng {
public:
    void fill(uint8_t* out, size_t len) override {
        if (RAND_bytes(out, static_cast<int>(len)) != 1)
            throw CryptoError("system RNG failure");
    }
};

// splitmix64-seeded xoshiro256** — platform-stable, so a seed always maps
// to the same fixture bytes regardless of toolchain.
class DeterministicRng final : public Rng {
public:
    explicit DeterministicRng(uint64_t seed) {
        uint64_t x = seed;
        for (auto& s : state_) {
            x += 0x9E3779B97F4A7C15ULL;
            uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
            s = z ^ (z >> 31);
        }
    }

    void fill(uint8_t* out, size_t len) override {
        size_t i = 0;
        while (i < len) {
            uint64_t v = next();
            for (int b = 0; b < 8 && i < len; ++b, ++i) {
                out[i] = static_cast<uint8_t>(v >> (8 * b));
            }
        }
    }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    uint64_t next() {
        uint64_t result = rotl(state_[1] * 5, 7) * 9;
        uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    std::array<uint64_t, 4> state_{};
};

}  // namespace csf::crypto
