#include <catch2/catch_amalgamated.hpp>

#include "csf/reconstruction.hpp"
#include "support/scenario.hpp"
#include "support/temp_dir.hpp"

using namespace csf;
using namespace csf::recon;

namespace {

model::ArtifactDb load_scenario(const testsupport::TempDir& dir,
                                fixtures::Scenario scenario) {
    auto set = testsupport::make_scenario(dir.path(), scenario);
    auto img = testsupport::decrypt_imps(set);
    return model::load_artifact_db(img);
}

}  // namespace

TEST_CASE("account reports resolve the qualified identities", "[recon]") {
    testsupport::TempDir dir;
    model::ArtifactDb db = load_scenario(dir, fixtures::Scenario::Fig3);
    auto reports = build_account_reports(db);
    REQUIRE(reports.size() == 2);

    CHECK(reports[0].local_name == "chat.secure.user");
    CHECK(reports[0].provider_name == "GTalk");
    CHECK(reports[0].account_domain == "gmail.com");
    CHECK(reports[0].qualified_identity == "CS.test.user@gmail.com");
    CHECK(reports[0].presence == "offline");
    CHECK(reports[0].connection == "offline");
    CHECK(reports[0].gaps.empty());

    CHECK(reports[1].local_name == "test1chatsecure");
    CHECK(reports[1].provider_name == "ChatMe");
    CHECK(reports[1].account_domain == "chatme.im");
    CHECK(reports[1].qualified_identity == "test1chatsecure@chatme.im");
}

TEST_CASE("missing joins yield partial reports with explicit gaps", "[recon]") {
    model::ArtifactDb db;
    db.accounts.push_back({1, "lonely", 5, "user", "pw", 1, 0, 1, 0});
    auto reports = build_account_reports(db);
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].presence == "unknown");
    CHECK(reports[0].connection == "unknown");
    CHECK(reports[0].qualified_identity.empty());
    REQUIRE(reports[0].gaps.size() == 3);  // provider, domain setting, status
}

TEST_CASE("contact reports join lists, presence and avatars", "[recon]") {
    testsupport::TempDir dir;
    model::ArtifactDb db = load_scenario(dir, fixtures::Scenario::Fig4);
    auto reports = build_contact_reports(db);
    REQUIRE(reports.size() == 9);

    for (const auto& r : reports) {
        CHECK(r.list_name == "Contacts");
        if (r.contact_id <= 5 || r.contact_id == 9)
            CHECK(r.account_name == "chat.secure.user");
        else
            CHECK(r.account_name == "test1chatsecure");
    }
    CHECK(reports[8].group_chat);
    CHECK(reports[8].type == "temporary-group-chat");
    CHECK(reports[8].presence == "unknown");  // no presence row for group chats

    size_t with_avatar = 0;
    for (const auto& r : reports)
        if (r.has_avatar) ++with_avatar;
    CHECK(with_avatar == 1);
    CHECK(reports[7].contact_id == 8);
    CHECK(reports[7].has_avatar);
    CHECK(reports[7].avatar_hash_ok);
    CHECK(reports[7].presence == "available");
    CHECK(reports[0].presence == "offline");
}

TEST_CASE("chronology is sorted, complete and classified", "[recon]") {
    testsupport::TempDir dir;
    model::ArtifactDb db = load_scenario(dir, fixtures::Scenario::Fig5);
    auto entries = build_chronology(db);

    // completeness: every message appears exactly once
    REQUIRE(entries.size() == db.messages.size());
    REQUIRE(entries.size() == 10);

    // sorted by timestamp: the deferred 05:46 message precedes the 09:32 ones
    CHECK(std::is_sorted(entries.begin(), entries.end(),
                         [](const ChronologyEntry& a, const ChronologyEntry& b) {
                             return a.date_ms < b.date_ms;
                         }));
    CHECK(entries.front().body == "Message no. 17");
    CHECK(entries.front().timestamp_utc == "2015-10-01T05:46:20.850Z");
    CHECK(entries.front().classification.deferred);
    CHECK_FALSE(entries.front().delivered);

    // the 09:32:35.617 outgoing encrypted message to "Second"
    const ChronologyEntry* msg1 = nullptr;
    for (const auto& e : entries)
        if (e.body == "Message 1") msg1 = &e;
    REQUIRE(msg1);
    CHECK(msg1->timestamp_utc == "2015-10-01T09:32:35.617Z");
    CHECK(msg1->classification.direction_name() == "outgoing");
    CHECK(msg1->classification.encrypted);
    CHECK(msg1->thread_id == 2);
    CHECK(msg1->contact_nickname == "Second");
    CHECK(msg1->local_account == "chat.secure.user");
    CHECK(msg1->delivered);

    // two group-chat entries to contact 9
    std::vector<const ChronologyEntry*> muc;
    for (const auto& e : entries)
        if (e.is_muc) muc.push_back(&e);
    REQUIRE(muc.size() == 2);
    CHECK(muc[0]->body == "Group chat message no. 1");
    CHECK(muc[1]->body == "Group chat message no. 2");
    CHECK(muc[0]->thread_id == 9);
    CHECK(muc[0]->group_alias == "chat.secure.user");
}

TEST_CASE("chronology filters", "[recon]") {
    testsupport::TempDir dir;
    model::ArtifactDb db = load_scenario(dir, fixtures::Scenario::Fig5);

    ChronologyFilter account2;
    account2.account_id = 2;
    CHECK(build_chronology(db, account2).size() == 1);  // only the ChatMe message

    ChronologyFilter contact9;
    contact9.contact_id = 9;
    CHECK(build_chronology(db, contact9).size() == 2);

    ChronologyFilter window;
    window.since_ms = 1443691955617;
    window.until_ms = 1443691964099;
    auto ranged = build_chronology(db, window);
    CHECK(ranged.size() == 2);
    CHECK(ranged[0].body == "Message 1");
    CHECK(ranged[1].body == "Message 2");
}

TEST_CASE("dangling thread ids keep their entries, annotated", "[recon]") {
    model::ArtifactDb db;
    model::Message m;
    m.id = 1;
    m.thread_id = 404;
    m.body = "orphan";
    m.date_ms = 1443691955617;
    m.type = 0;
    db.messages.push_back(m);
    auto entries = build_chronology(db);
    REQUIRE(entries.size() == 1);
    REQUIRE_FALSE(entries[0].gaps.empty());
    CHECK(entries[0].gaps[0].find("dangling thread_id 404") != std::string::npos);
}

TEST_CASE("file correlation matches the virtual-disk object", "[recon]") {
    testsupport::TempDir dir;
    auto set = testsupport::make_scenario(dir.path(), fixtures::Scenario::Fig6);
    auto img = testsupport::decrypt_imps(set);
    model::ArtifactDb db = model::load_artifact_db(img);
    auto media_img = testsupport::decrypt_media(set);
    model::VfsDb vfs = model::load_vfs_db(media_img);

    auto correlation = correlate_file_transfers(db, &vfs);
    REQUIRE(correlation.records.size() == 1);
    const auto& record = correlation.records[0];
    CHECK(record.vfs_path == "/2/download/58278");  // "vfs:" prefix stripped
    CHECK(record.meta_found);
    CHECK(record.size == 143584);
    CHECK(record.block_size == 8192);
    CHECK(*record.entry.mime_type == "image/jpeg");
    CHECK(record.entry.timestamp_utc == "2015-10-01T09:34:43.731Z");
    CHECK(correlation.files_without_message.empty());
}

TEST_CASE("unmatched paths are reported both ways", "[recon]") {
    model::ArtifactDb db;
    model::Message m;
    m.id = 1;
    m.thread_id = 1;
    m.body = "/1/download/nope";
    m.mime_type = "image/png";
    m.date_ms = 1443691955617;
    m.type = 13;
    db.messages.push_back(m);

    model::VfsDb vfs;
    vfs.metas.push_back({"blob", "/1/download/orphan", 1, 1, 1, 10, 8192});

    auto correlation = correlate_file_transfers(db, &vfs);
    REQUIRE(correlation.records.size() == 1);
    CHECK_FALSE(correlation.records[0].meta_found);
    CHECK(correlation.records[0].extraction_status == "message-without-file");
    REQUIRE(correlation.files_without_message.size() == 1);
    CHECK(correlation.files_without_message[0] == "/1/download/orphan");
}

TEST_CASE("reports are byte-deterministic for identical inputs", "[recon]") {
    testsupport::TempDir dir_a, dir_b;
    model::ArtifactDb db_a = load_scenario(dir_a, fixtures::Scenario::Fig5);
    model::ArtifactDb db_b = load_scenario(dir_b, fixtures::Scenario::Fig5);

    ReportMeta meta;  // same (empty) meta for both
    CHECK(to_json(build_chronology(db_a), meta).dump(2) ==
          to_json(build_chronology(db_b), meta).dump(2));
    CHECK(to_csv(build_account_reports(db_a)) == to_csv(build_account_reports(db_b)));
    CHECK(to_csv(build_contact_reports(db_a)) == to_csv(build_contact_reports(db_b)));
}

TEST_CASE("csv quoting survives commas, quotes and newlines", "[recon]") {
    model::ArtifactDb db;
    db.accounts.push_back({1, "has,comma", 1, "has\"quote", "line\nbreak", 1, 0, 0, 0});
    db.providers.push_back({1, "P", "Provider"});
    std::string csv = to_csv(build_account_reports(db));
    CHECK(csv.find("\"has,comma\"") != std::string::npos);
    CHECK(csv.find("\"has\"\"quote\"") != std::string::npos);
    CHECK(csv.find("\"line\nbreak\"") != std::string::npos);
}
