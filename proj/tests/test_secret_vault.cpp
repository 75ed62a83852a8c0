#include <catch2/catch_amalgamated.hpp>

#include "csf/base64.hpp"
#include "csf/secret_vault.hpp"

using namespace csf;
using namespace csf::vault;

namespace {

Bytes example_blob() {
    // ic=100 || 16 x AA || 12 x BB || 48 x CC
    Bytes blob = {0x00, 0x00, 0x00, 0x64};
    blob.insert(blob.end(), 16, 0xAA);
    blob.insert(blob.end(), 12, 0xBB);
    blob.insert(blob.end(), 48, 0xCC);
    return blob;
}

}  // namespace

TEST_CASE("serialized secret slices the fixed byte offsets", "[vault]") {
    SerializedSecret secret = SerializedSecret::from_blob(example_blob());
    CHECK(secret.iteration_count == 100);
    CHECK(secret.salt == std::array<uint8_t, 16>{0xAA, 0xAA, 0xAA, 0xAA, 0xAA, 0xAA, 0xAA,
                                                 0xAA, 0xAA, 0xAA, 0xAA, 0xAA, 0xAA, 0xAA,
                                                 0xAA, 0xAA});
    CHECK(secret.iv == std::array<uint8_t, 12>{0xBB, 0xBB, 0xBB, 0xBB, 0xBB, 0xBB, 0xBB,
                                               0xBB, 0xBB, 0xBB, 0xBB, 0xBB});
    CHECK(secret.wrapped_key == Bytes(48, 0xCC));
}

TEST_CASE("blob shorter than 80 bytes is rejected", "[vault]") {
    Bytes blob = example_blob();
    blob.pop_back();  // 79 bytes
    CHECK_THROWS_AS(SerializedSecret::from_blob(blob), BlobTooShort);
    CHECK_THROWS_AS(SerializedSecret::from_blob(Bytes{}), BlobTooShort);
}

TEST_CASE("encode then parse is the identity, byte-exact", "[vault]") {
    Bytes blob = example_blob();
    SerializedSecret secret = SerializedSecret::from_blob(blob);
    CHECK(secret.to_blob() == blob);

    crypto::DeterministicRng rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        SerializedSecret random_secret;
        random_secret.iteration_count = 1 + static_cast<uint32_t>(rng.below(100000));
        random_secret.salt = rng.array<16>();
        random_secret.iv = rng.array<12>();
        random_secret.wrapped_key = rng.bytes(48);
        CHECK(SerializedSecret::from_blob(random_secret.to_blob()) == random_secret);
    }
}

TEST_CASE("prefs parsing finds the secret among clutter", "[vault]") {
    crypto::DeterministicRng rng(4);
    SerializedSecret secret =
        wrap_database_key(DatabaseKey::from_bytes(rng.bytes(32)), Passphrase("pw"), 2, rng);
    std::string xml = write_serialized_secret(
        secret, "encoded_secrets",
        {{"initialized", "dHJ1ZQ=="},         // valid base64, 4 bytes: too short
         {"last_opened", "not base64 at all"},
         {"theme", "ZGFyaw=="}});

    SECTION("scan mode accepts the first structurally valid entry") {
        CHECK(parse_serialized_secret(xml) == secret);
    }
    SECTION("explicit entry name") {
        CHECK(parse_serialized_secret(xml, std::optional<std::string>("encoded_secrets")) ==
              secret);
        CHECK_THROWS_AS(parse_serialized_secret(xml, std::optional<std::string>("missing")),
                        NoSecretEntry);
        CHECK_THROWS_AS(
            parse_serialized_secret(xml, std::optional<std::string>("last_opened")),
            NoSecretEntry);
        // names a real entry whose blob is too short
        CHECK_THROWS_AS(
            parse_serialized_secret(xml, std::optional<std::string>("initialized")),
            BlobTooShort);
    }
    SECTION("no plausible entry at all") {
        std::string empty = prefs::write_prefs_xml({{"a", "dHJ1ZQ=="}});
        CHECK_THROWS_AS(parse_serialized_secret(empty), NoSecretEntry);
    }
    SECTION("malformed XML") {
        CHECK_THROWS_AS(parse_serialized_secret(std::string_view("<map><string>")),
                        XmlMalformed);
        CHECK_THROWS_AS(parse_serialized_secret(std::string_view("just text")), XmlMalformed);
    }
}

TEST_CASE("prefs writer emits entries the parser can read back", "[vault]") {
    auto entries = prefs::parse_prefs_xml(prefs::write_prefs_xml(
        {{"name with \"quotes\" & ampersand", "dmFsdWU="}, {"b", "PA=="}}));
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].name == "name with \"quotes\" & ampersand");
    CHECK(entries[0].value == "dmFsdWU=");
}

TEST_CASE("passphrase key derivation is deterministic and parameterized", "[vault]") {
    std::array<uint8_t, 16> salt = {'s', 'a', 'l', 't', 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0};
    auto key1 = derive_passphrase_key(Passphrase("password"), salt, 1);
    CHECK(to_hex(key1) == "c60111b37d0c07b1e4363d1a0bc7bc472d7fb0ff0fde33e4b7730595ecf87832");
    CHECK(derive_passphrase_key(Passphrase("password"), salt, 1) == key1);
    CHECK(derive_passphrase_key(Passphrase("password"), salt, 2) != key1);
    CHECK_THROWS_AS(Passphrase(""), ParseError);
}

TEST_CASE("wrap and unwrap are inverse", "[vault]") {
    crypto::DeterministicRng rng(12);
    for (uint32_t ic : {1u, 100u, 1000u}) {
        DatabaseKey key = DatabaseKey::from_bytes(rng.bytes(32));
        Passphrase pass("correct horse battery " + std::to_string(ic));
        SerializedSecret secret = wrap_database_key(key, pass, ic, rng);
        CHECK(secret.wrapped_key.size() == 48);
        CHECK(unwrap_database_key(secret, pass) == key);
        CHECK_THROWS_AS(unwrap_database_key(secret, Passphrase("wrong")), AuthFailure);
    }
}

TEST_CASE("fresh salt and iv give distinct blobs for the same key", "[vault]") {
    crypto::DeterministicRng rng(77);
    DatabaseKey key = DatabaseKey::from_bytes(rng.bytes(32));
    Passphrase pass("thisisthepassword2016");
    for (int trial = 0; trial < 100; ++trial) {
        SerializedSecret a = wrap_database_key(key, pass, 1, rng);
        SerializedSecret b = wrap_database_key(key, pass, 1, rng);
        CHECK(a.to_blob() != b.to_blob());
        CHECK(unwrap_database_key(a, pass) == key);
        CHECK(unwrap_database_key(b, pass) == key);
    }
}

TEST_CASE("independently generated fixture secret unwraps to its key", "[vault]") {
    // produced by a separate PBKDF2+AES-GCM implementation: ic=100,
    // salt=a0..af, iv=10..1b, passphrase below, key = the textual-rule
    // reference key
    auto blob = base64_decode(
        "AAAAZKChoqOkpaanqKmqq6ytrq8QERITFBUWFxgZGhvgKViCKtmYehZ2wJ/Xcz46r5OBT6LZVadKdPOQ2b9i"
        "dbgkGe3jqqstsuDahXMcczI=");
    REQUIRE(blob);
    SerializedSecret secret = SerializedSecret::from_blob(*blob);
    CHECK(secret.iteration_count == 100);
    DatabaseKey key = unwrap_database_key(secret, Passphrase("thisisthepassword2016"));
    CHECK(key.hex() == "629b8dbf3f26131b2fb69619fd4cf992a1d2d01296b573ba3459faff8a12cd89");
    CHECK_THROWS_AS(unwrap_database_key(secret, Passphrase("thisisthepassword2017")),
                    AuthFailure);
}

TEST_CASE("any single-bit tamper in the cryptographic fields fails closed", "[vault]") {
    crypto::DeterministicRng rng(31);
    DatabaseKey key = DatabaseKey::from_bytes(rng.bytes(32));
    Passphrase pass("tamper-me");
    SerializedSecret secret = wrap_database_key(key, pass, 1, rng);
    Bytes blob = secret.to_blob();
    // exhaustive over salt || iv || wrapped_key (bytes 4..79)
    for (size_t byte = 4; byte < blob.size(); ++byte) {
        for (int bit = 0; bit < 8; ++bit) {
            Bytes tampered = blob;
            tampered[byte] ^= static_cast<uint8_t>(1u << bit);
            SerializedSecret parsed = SerializedSecret::from_blob(tampered);
            CHECK_THROWS_AS(unwrap_database_key(parsed, pass), AuthFailure);
        }
    }
}

TEST_CASE("tampered iteration count fails closed too", "[vault]") {
    crypto::DeterministicRng rng(32);
    SerializedSecret secret =
        wrap_database_key(DatabaseKey::from_bytes(rng.bytes(32)), Passphrase("p"), 1, rng);
    Bytes blob = secret.to_blob();

    Bytes zero_ic = blob;  // ic 1 -> 0: structurally invalid
    zero_ic[3] ^= 0x01;
    CHECK_THROWS_AS(SerializedSecret::from_blob(zero_ic), ParseError);

    // representative flips that keep the KDF affordable; higher-order bits
    // behave identically, they only scale the iteration cost
    for (int bit : {1, 8, 16, 20}) {
        Bytes flipped = blob;
        flipped[3 - bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
        SerializedSecret parsed = SerializedSecret::from_blob(flipped);
        CHECK_THROWS_AS(unwrap_database_key(parsed, Passphrase("p")), AuthFailure);
    }
}

TEST_CASE("textual media key is the truncated lower-case hex", "[vault]") {
    DatabaseKey key = DatabaseKey::from_hex(
        "629B8DBF3F26131B2FB69619FD4CF992A1D2D01296B573BA3459FAFF8A12CD89");
    CHECK(textual_media_key(key) == "629b8dbf3f26131b2fb69619fd4cf992");

    DatabaseKey zero{};
    CHECK(textual_media_key(zero) == "00000000000000000000000000000000");

    crypto::DeterministicRng rng(6);
    for (int trial = 0; trial < 20; ++trial) {
        std::string text = textual_media_key(DatabaseKey::from_bytes(rng.bytes(32)));
        REQUIRE(text.size() == 32);
        for (char c : text) CHECK(((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f')));
    }
}
