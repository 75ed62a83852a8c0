#include <catch2/catch_amalgamated.hpp>

#include "csf/artifact_model.hpp"
#include "csf/fixtures.hpp"
#include "support/scenario.hpp"
#include "support/temp_dir.hpp"

using namespace csf;
using namespace csf::model;

TEST_CASE("epoch milliseconds decode to ISO-8601 UTC", "[model]") {
    CHECK(decode_epoch_ms(1443691955617) == "2015-10-01T09:32:35.617Z");
    CHECK(decode_epoch_ms(1443678380850) == "2015-10-01T05:46:20.850Z");
    CHECK(decode_epoch_ms(1443692083731) == "2015-10-01T09:34:43.731Z");
    CHECK(decode_epoch_ms(0) == "1970-01-01T00:00:00.000Z");
    CHECK(decode_epoch_ms(86399999) == "1970-01-01T23:59:59.999Z");
    CHECK(decode_epoch_s(1443692083) == "2015-10-01T09:34:43Z");

    CHECK(epoch_ms_plausible(1443691955617));
    CHECK_FALSE(epoch_ms_plausible(1443691955));      // seconds, not millis
    CHECK_FALSE(epoch_ms_plausible(14436919556170));  // 14 digits
}

TEST_CASE("message type classification", "[model]") {
    auto c15 = classify_message(15);
    CHECK(c15.kind == MessageClass::Kind::Chat);
    CHECK(c15.direction == MessageClass::Direction::Outgoing);
    CHECK(c15.encrypted);
    CHECK_FALSE(c15.verified);
    CHECK(c15.label == "outgoing encrypted");

    auto c13 = classify_message(13);
    CHECK(c13.direction == MessageClass::Direction::Incoming);
    CHECK(c13.encrypted);
    CHECK_FALSE(c13.verified);

    auto c8 = classify_message(8);
    CHECK(c8.kind == MessageClass::Kind::Chat);
    CHECK(c8.deferred);
    CHECK(c8.direction == MessageClass::Direction::Outgoing);

    CHECK(classify_message(14).verified);
    CHECK(classify_message(16).verified);
    CHECK(classify_message(16).direction == MessageClass::Direction::Outgoing);
    CHECK(classify_message(0).kind == MessageClass::Kind::Chat);
    CHECK_FALSE(classify_message(0).encrypted);
    CHECK(classify_message(1).direction == MessageClass::Direction::Incoming);

    for (int type : {2, 3, 4, 5, 6, 7, 9, 10, 11, 12})
        CHECK(classify_message(type).kind == MessageClass::Kind::Notification);

    auto raw = classify_message(99);
    CHECK(raw.kind == MessageClass::Kind::Raw);
    CHECK(raw.label == "raw(99)");
}

TEST_CASE("enum decoding never fails, unknown values stay raw", "[model]") {
    CHECK(presence_mode_name(0) == "offline");
    CHECK(presence_mode_name(5) == "available");
    CHECK(presence_mode_name(17) == "raw(17)");
    CHECK(presence_mode_name(-3) == "raw(-3)");
    CHECK(conn_status_name(3) == "online");
    CHECK(contact_type_name(2) == "temporary-group-chat");
    CHECK(otr_status_name(2) == "on-by-user");
    CHECK(subscription_type_name(4) == "mutual");
    CHECK(client_type_name(2) == "android");
}

TEST_CASE("accounts layer decodes the published scenario", "[model]") {
    testsupport::TempDir dir;
    auto set = testsupport::make_scenario(dir.path(), fixtures::Scenario::Fig3);
    auto img = testsupport::decrypt_imps(set);
    ArtifactDb db = load_artifact_db(img);

    REQUIRE(db.accounts.size() == 2);
    CHECK(db.accounts[0].name == "chat.secure.user");
    CHECK(db.accounts[0].active == 1);
    CHECK(db.accounts[0].keep_signed_in == 1);
    CHECK(db.accounts[0].username == "CS.test.user");
    CHECK(db.accounts[1].name == "test1chatsecure");
    CHECK(db.accounts[1].active == 1);
    CHECK(db.accounts[1].keep_signed_in == 1);
    CHECK(db.accounts[1].pw == "#t&st.p@sswd!");

    REQUIRE(db.providers.size() == 2);
    CHECK(db.find_provider(1)->name == "GTalk");
    CHECK(db.find_provider(2)->name == "ChatMe");
    CHECK(db.status_for_account(1)->presence_status == 0);
    CHECK(db.status_for_account(2)->conn_status == 0);

    // fig3 stops at the account layer
    CHECK(db.contacts.empty());
    CHECK(db.messages.empty());
    CHECK(db.dangling.empty());
}

TEST_CASE("contacts layer decodes the published scenario", "[model]") {
    testsupport::TempDir dir;
    auto set = testsupport::make_scenario(dir.path(), fixtures::Scenario::Fig4);
    auto img = testsupport::decrypt_imps(set);
    ArtifactDb db = load_artifact_db(img);

    REQUIRE(db.contacts.size() == 9);
    const Contact* group = db.find_contact(9);
    REQUIRE(group);
    CHECK(group->nickname == "grptest1");
    CHECK(group->type == 2);
    CHECK(group->username == "grptest1@conference.chatme.im");
    CHECK(group->account_id == 1);

    for (int64_t id : {1, 2, 3, 4, 5})
        CHECK(db.find_contact(id)->account_id == 1);
    for (int64_t id : {6, 7, 8})
        CHECK(db.find_contact(id)->account_id == 2);

    // only contact 8 carries an avatar, and its recorded hash verifies
    REQUIRE(db.avatars.size() == 1);
    CHECK(db.avatars[0].contact_username == "test2chatsecure@chatme.im");
    CHECK(db.avatars[0].hash_checked);
    CHECK(db.avatars[0].hash_matches);
    CHECK(db.avatar_for_username("first.contact@gmail.com") == nullptr);

    // presence: 8 is available, the rest offline, the group contact none
    CHECK(db.presence_for_contact(8)->mode == 5);
    CHECK(db.presence_for_contact(1)->mode == 0);
    CHECK(db.presence_for_contact(9) == nullptr);
}

TEST_CASE("message union preserves both tables and their counts", "[model]") {
    testsupport::TempDir dir;
    auto set = testsupport::make_scenario(dir.path(), fixtures::Scenario::Fig5);
    auto img = testsupport::decrypt_imps(set);
    ArtifactDb db = load_artifact_db(img);

    CHECK(db.messages_table_count == 4);
    CHECK(db.in_memory_messages_count == 6);
    CHECK(db.messages.size() == 10);
    size_t from_messages = 0;
    for (const auto& m : db.messages)
        if (m.origin == MessageOrigin::Messages) ++from_messages;
    CHECK(from_messages == 4);
    // `chats` is present in the image but deliberately not decoded
    CHECK(img.has_table("chats"));
    CHECK(std::find(db.tables_seen.begin(), db.tables_seen.end(), "chats") !=
          db.tables_seen.end());
}

TEST_CASE("file-transfer messages carry mime type and path body", "[model]") {
    testsupport::TempDir dir;
    auto set = testsupport::make_scenario(dir.path(), fixtures::Scenario::Fig6);
    auto img = testsupport::decrypt_imps(set);
    ArtifactDb db = load_artifact_db(img);

    const Message* transfer = nullptr;
    for (const auto& m : db.messages)
        if (m.is_file_transfer()) transfer = &m;
    REQUIRE(transfer);
    CHECK(*transfer->mime_type == "image/jpeg");
    CHECK(transfer->body == "vfs:/2/download/58278");
    CHECK(transfer->date_ms == 1443692083731);
    CHECK(transfer->type == 13);
    // textual messages have a null mime type
    size_t textual = 0;
    for (const auto& m : db.messages)
        if (!m.mime_type) ++textual;
    CHECK(textual == db.messages.size() - 1);
}

TEST_CASE("empty schema-only database loads to empty collections", "[model]") {
    testsupport::TempDir dir;
    auto path = dir / "schemas.db";
    fixtures::author_plain_db(path, 1024, 0, [](fixtures::SqliteDb& db) {
        fixtures::detail::create_imps_schema(db);
    });
    ArtifactDb db = load_artifact_db(sqlite::DbImage::open(load_file(path)));
    CHECK(db.accounts.empty());
    CHECK(db.contacts.empty());
    CHECK(db.messages.empty());
    CHECK(db.tables_missing.empty());
}

TEST_CASE("image without any forensic table raises NoForensicTables", "[model]") {
    testsupport::TempDir dir;
    auto path = dir / "other.db";
    fixtures::author_plain_db(path, 1024, 0, [](fixtures::SqliteDb& db) {
        db.exec("CREATE TABLE unrelated (a, b);");
    });
    CHECK_THROWS_AS(load_artifact_db(sqlite::DbImage::open(load_file(path))),
                    NoForensicTables);
}

TEST_CASE("missing tables are reported, not fatal", "[model]") {
    testsupport::TempDir dir;
    auto path = dir / "partial.db";
    fixtures::author_plain_db(path, 1024, 0, [](fixtures::SqliteDb& db) {
        db.exec("CREATE TABLE accounts (_id INTEGER PRIMARY KEY, name TEXT, provider INTEGER,"
                " username TEXT, pw TEXT, active INTEGER, locked INTEGER,"
                " keep_signed_in INTEGER, last_login_state INTEGER);");
        db.exec("INSERT INTO accounts VALUES (1, 'only', 7, 'u', 'p', 1, 0, 0, 0);");
    });
    ArtifactDb db = load_artifact_db(sqlite::DbImage::open(load_file(path)));
    CHECK(db.accounts.size() == 1);
    CHECK(db.tables_missing.size() == 10);
    // provider 7 does not resolve -> dangling reference recorded
    REQUIRE_FALSE(db.dangling.empty());
    CHECK(db.dangling[0].table == "accounts");
    CHECK(db.dangling[0].missing_id == 7);
}

TEST_CASE("avatar hash mismatch is flagged, not fatal", "[model]") {
    testsupport::TempDir dir;
    auto path = dir / "avatars.db";
    fixtures::author_plain_db(path, 1024, 0, [](fixtures::SqliteDb& db) {
        db.exec("CREATE TABLE avatars (_id INTEGER PRIMARY KEY, contact TEXT,"
                " provider INTEGER, account INTEGER, hash TEXT, data BLOB);");
        db.insert("INSERT INTO avatars VALUES (1, 'x@y', 1, 1, 'deadbeef', ?)",
                  {fixtures::SqliteDb::Param::blob(Bytes{1, 2, 3})});
    });
    ArtifactDb db = load_artifact_db(sqlite::DbImage::open(load_file(path)));
    REQUIRE(db.avatars.size() == 1);
    CHECK(db.avatars[0].hash_checked);
    CHECK_FALSE(db.avatars[0].hash_matches);
}
