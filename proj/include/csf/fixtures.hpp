#pragma once

/*
 * Deterministic fixture generation: builds the full artifact set a seized
 * device would yield — the shared-preferences file with the wrapped key,
 * the encrypted main database, the encrypted media database, and
 * optionally a synthetic memory dump with the passphrase planted.
 *
 * Plaintext databases are authored with the system SQLite library (page
 * size + reserved bytes set so the page codec can encrypt them in place);
 * everything random is drawn from a seeded generator, so identical
 * (scenario, seed, passphrase) inputs produce byte-identical outputs.
 *
 * The named scenarios reproduce a two-account investigation: fig3 covers
 * the accounts/providers layer, fig4 adds the nine contacts, fig5 the ten
 * exchanged messages, fig6 the JPEG file transfer on the virtual disk.
 * Scenarios are cumulative.
 */

#include <sqlite3.h>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "csf/bytes.hpp"
#include "csf/cipher_pages.hpp"
#include "csf/crypto.hpp"
#include "csf/errors.hpp"
#include "csf/memscan.hpp"
#include "csf/secret_vault.hpp"

namespace csf::fixtures {

// ---- minimal RAII wrapper over the sqlite3 C API ----

class SqliteDb {
public:
    explicit SqliteDb(const std::filesystem::path& path) : path_(path) {
        if (sqlite3_open(path.string().c_str(), &db_) != SQLITE_OK)
            throw IoError("cannot open database for writing: " + path.string());
    }

    SqliteDb(const SqliteDb&) = delete;
    SqliteDb& operator=(const SqliteDb&) = delete;

    ~SqliteDb() { close(); }

    void close() {
        if (db_) {
            sqlite3_close(db_);
            db_ = nullptr;
        }
    }

    sqlite3* handle() { return db_; }

    void set_reserve_bytes(int reserve) {
        if (sqlite3_file_control(db_, "main", SQLITE_FCNTL_RESERVE_BYTES, &reserve) !=
            SQLITE_OK)
            throw IoError("cannot set reserved bytes on " + path_.string());
    }

    void exec(const std::string& sql) {
        char* err = nullptr;
        if (sqlite3_exec(db_, sql.c_str(), nullptr, nullptr, &err) != SQLITE_OK) {
            std::string message = err ? err : "unknown error";
            sqlite3_free(err);
            throw IoError("SQL failed (" + message + "): " + sql.substr(0, 120));
        }
    }

    // Parameterised insert; Value-free variant kept simple: text, int and
    // blob parameters cover everything fixtures need.
    struct Param {
        enum class Kind { Int, Text, Blob, Null } kind;
        int64_t i = 0;
        std::string s;
        const Bytes* b = nullptr;

        static Param integer(int64_t v) { return {Kind::Int, v, {}, nullptr}; }
        static Param text(std::string v) { return {Kind::Text, 0, std::move(v), nullptr}; }
        static Param blob(const Bytes& v) { return {Kind::Blob, 0, {}, &v}; }
        static Param null() { return {Kind::Null, 0, {}, nullptr}; }
    };

    void insert(const std::string& sql, const std::vector<Param>& params) {
        sqlite3_stmt* stmt = nullptr;
        if (sqlite3_prepare_v2(db_, sql.c_str(), -1, &stmt, nullptr) != SQLITE_OK)
            throw IoError("cannot prepare: " + sql);
        for (size_t i = 0; i < params.size(); ++i) {
            const auto& p = params[i];
            int idx = static_cast<int>(i + 1);
            switch (p.kind) {
                case Param::Kind::Int: sqlite3_bind_int64(stmt, idx, p.i); break;
                case Param::Kind::Text:
                    sqlite3_bind_text(stmt, idx, p.s.c_str(), -1, SQLITE_TRANSIENT);
                    break;
                case Param::Kind::Blob:
                    sqlite3_bind_blob(stmt, idx, p.b->data(),
                                      static_cast<int>(p.b->size()), SQLITE_TRANSIENT);
                    break;
                case Param::Kind::Null: sqlite3_bind_null(stmt, idx); break;
            }
        }
        int rc = sqlite3_step(stmt);
        sqlite3_finalize(stmt);
        if (rc != SQLITE_DONE) throw IoError("insert failed: " + sql);
    }

private:
    sqlite3* db_ = nullptr;
    std::filesystem::path path_;
};

// Authors a plaintext SQLite file with the page size and per-page reserve
// the encryption profile expects, then hands the connection to `populate`.
inline void author_plain_db(const std::filesystem::path& path, uint32_t page_size,
                            uint32_t reserve,
                            const std::function<void(SqliteDb&)>& populate) {
    std::filesystem::remove(path);
    SqliteDb db(path);
    db.set_reserve_bytes(static_cast<int>(reserve));
    db.exec("PRAGMA page_size = " + std::to_string(page_size) + ";");
    populate(db);
    db.exec("VACUUM;");
    db.close();
}

// ---- scenario constants (the published two-account investigation) ----

inline constexpr const char* kScenarioKeyHex =
    "629b8dbf3f26131b2fb69619fd4cf992a1d2d01296b573ba3459faff8a12cd89";
inline constexpr const char* kScenarioPassphrase = "thisisthepassword2016";
inline constexpr const char* kScenarioFilePath = "/2/download/58278";
inline constexpr int64_t kScenarioFileSize = 143584;
inline constexpr int64_t kScenarioBlockSize = 8192;
inline constexpr int64_t kScenarioFileDateMs = 1443692083731;

enum class Scenario { Fig3, Fig4, Fig5, Fig6, Random };

inline Scenario scenario_from_name(const std::string& name) {
    if (name == "fig3") return Scenario::Fig3;
    if (name == "fig4") return Scenario::Fig4;
    if (name == "fig5") return Scenario::Fig5;
    if (name == "fig6") return Scenario::Fig6;
    if (name == "random") return Scenario::Random;
    throw ParseError("unknown scenario: " + name + " (fig3|fig4|fig5|fig6|random)");
}

struct FixtureSpec {
    Scenario scenario = Scenario::Fig6;
    uint64_t seed = 2016;
    std::string passphrase = kScenarioPassphrase;
    uint32_t iteration_count = 100;
    std::optional<vault::DatabaseKey> key;  // defaults: scenario key / seeded random
    std::filesystem::path out_dir;
    bool with_dump = false;
    size_t dump_size = 8u * 1024 * 1024;
    uint32_t imps_page_size = 1024;
    uint32_t media_page_size = 8192;
    uint32_t media_kdf_iterations = 64000;
    std::string prefs_entry_name = "encoded_secrets";
};

struct FixtureSet {
    std::filesystem::path prefs_xml;
    std::filesystem::path impsenc_db;
    std::filesystem::path media_db;
    std::filesystem::path dump;  // empty when not requested
    vault::DatabaseKey key;
    std::string textual_key;
    vault::SerializedSecret secret;
    // content planted on the virtual disk, keyed by path (for byte-exact
    // verification after extraction)
    std::map<std::string, Bytes> planted_files;
};

namespace detail {

inline void create_imps_schema(SqliteDb& db) {
    db.exec(R"sql(
CREATE TABLE android_metadata (locale TEXT);
CREATE TABLE accounts (_id INTEGER PRIMARY KEY, name TEXT, provider INTEGER,
  username TEXT, pw TEXT, active INTEGER NOT NULL DEFAULT 0,
  locked INTEGER NOT NULL DEFAULT 0, keep_signed_in INTEGER NOT NULL DEFAULT 0,
  last_login_state INTEGER NOT NULL DEFAULT 0);
CREATE TABLE accountStatus (_id INTEGER PRIMARY KEY, account INTEGER,
  presenceStatus INTEGER, connStatus INTEGER);
CREATE TABLE providers (_id INTEGER PRIMARY KEY, name TEXT, fullname TEXT,
  category TEXT, signup_url TEXT);
CREATE TABLE providerSettings (_id INTEGER PRIMARY KEY, provider INTEGER,
  name TEXT, value TEXT);
CREATE TABLE contacts (_id INTEGER PRIMARY KEY, username TEXT, nickname TEXT,
  provider INTEGER, account INTEGER, contactList INTEGER, type INTEGER,
  subscriptionStatus INTEGER, subscriptionType INTEGER, otr INTEGER,
  qc INTEGER, rejected INTEGER);
CREATE TABLE contactList (_id INTEGER PRIMARY KEY, name TEXT, provider INTEGER,
  account INTEGER);
CREATE TABLE presence (_id INTEGER PRIMARY KEY, contact_id INTEGER,
  jid_resource TEXT, client_type INTEGER, priority INTEGER, mode INTEGER,
  status TEXT);
CREATE TABLE avatars (_id INTEGER PRIMARY KEY, contact TEXT, provider INTEGER,
  account INTEGER, hash TEXT, data BLOB);
CREATE TABLE chats (_id INTEGER PRIMARY KEY, contact_id INTEGER,
  jid_resource TEXT, groupchat INTEGER, last_unread_message TEXT,
  last_message_date INTEGER, unsent_composed_message TEXT, shortcut INTEGER);
CREATE TABLE messages (_id INTEGER PRIMARY KEY, thread_id INTEGER, nickname TEXT,
  body TEXT, date INTEGER, type INTEGER, packet_id TEXT,
  err_code INTEGER NOT NULL DEFAULT 0, err_msg TEXT, is_muc INTEGER,
  show_ts INTEGER, is_delivered INTEGER, mime_type TEXT);
CREATE TABLE inMemoryMessages (_id INTEGER PRIMARY KEY, thread_id INTEGER,
  nickname TEXT, body TEXT, date INTEGER, type INTEGER, packet_id TEXT,
  err_code INTEGER NOT NULL DEFAULT 0, err_msg TEXT, is_muc INTEGER,
  show_ts INTEGER, is_delivered INTEGER, mime_type TEXT);
CREATE TABLE brandingResMapCache (_id INTEGER PRIMARY KEY, provider_id INTEGER,
  app_res_id INTEGER, plugin_res_id INTEGER);
CREATE TABLE outgoingRmqMessages (_id INTEGER PRIMARY KEY, rmq_id INTEGER,
  type INTEGER, ts INTEGER, data TEXT);
)sql");
    db.insert("INSERT INTO android_metadata VALUES (?)",
              {SqliteDb::Param::text("en_US")});
}

inline void create_media_schema(SqliteDb& db) {
    db.exec(R"sql(
CREATE TABLE meta_data (key TEXT PRIMARY KEY, type TEXT, inode INTEGER,
  uid INTEGER, gid INTEGER, mode INTEGER, acl TEXT, attribute TEXT,
  atime INTEGER, mtime INTEGER, ctime INTEGER, size INTEGER,
  block_size INTEGER);
CREATE TABLE value_data (key TEXT, block_no INTEGER, data_block BLOB);
)sql");
}

struct MsgRow {
    int64_t id;
    int64_t thread_id;
    std::string nickname;
    std::string body;
    int64_t date_ms;
    int type;
    int is_muc;
    int is_delivered;
    std::optional<std::string> mime_type;
};

inline void insert_message(SqliteDb& db, const char* table, const MsgRow& m) {
    std::string sql = std::string("INSERT INTO ") + table +
                      " (_id, thread_id, nickname, body, date, type, err_code, err_msg,"
                      " is_muc, show_ts, is_delivered, mime_type)"
                      " VALUES (?,?,?,?,?,?,0,NULL,?,0,?,?)";
    db.insert(sql, {SqliteDb::Param::integer(m.id), SqliteDb::Param::integer(m.thread_id),
                    SqliteDb::Param::text(m.nickname), SqliteDb::Param::text(m.body),
                    SqliteDb::Param::integer(m.date_ms), SqliteDb::Param::integer(m.type),
                    SqliteDb::Param::integer(m.is_muc),
                    SqliteDb::Param::integer(m.is_delivered),
                    m.mime_type ? SqliteDb::Param::text(*m.mime_type)
                                : SqliteDb::Param::null()});
}

struct VfsObject {
    std::string path;
    std::string type = "blob";  // dir | blob | symlink
    int64_t times = 1443692083;
    int64_t size = 0;
    int64_t block_size = kScenarioBlockSize;
};

inline void insert_vfs_meta(SqliteDb& db, const VfsObject& object) {
    db.insert(
        "INSERT INTO meta_data (key, type, inode, uid, gid, mode, acl, attribute,"
        " atime, mtime, ctime, size, block_size) VALUES (?,?,NULL,0,0,?,NULL,NULL,?,?,?,?,?)",
        {SqliteDb::Param::text(object.path), SqliteDb::Param::text(object.type),
         SqliteDb::Param::integer(object.type == "dir" ? 0x41ED : 0x81A4),
         SqliteDb::Param::integer(object.times), SqliteDb::Param::integer(object.times),
         SqliteDb::Param::integer(object.times), SqliteDb::Param::integer(object.size),
         SqliteDb::Param::integer(object.block_size)});
}

// Stores content as sequential blocks; the final block is written
// full-length (zero padded) to mirror how the virtual disk stores tails —
// the size column stays authoritative.
inline void insert_vfs_blocks(SqliteDb& db, const std::string& path, ByteView content,
                              int64_t block_size, const std::set<int64_t>& skip = {},
                              bool pad_final_block = true) {
    int64_t block_count =
        (static_cast<int64_t>(content.size()) + block_size - 1) / block_size;
    for (int64_t block = 0; block < block_count; ++block) {
        if (skip.count(block)) continue;
        size_t begin = static_cast<size_t>(block * block_size);
        size_t end = std::min(content.size(), begin + static_cast<size_t>(block_size));
        Bytes chunk(content.begin() + static_cast<ptrdiff_t>(begin),
                    content.begin() + static_cast<ptrdiff_t>(end));
        if (pad_final_block && chunk.size() < static_cast<size_t>(block_size))
            chunk.resize(static_cast<size_t>(block_size), 0);
        db.insert("INSERT INTO value_data (key, block_no, data_block) VALUES (?,?,?)",
                  {SqliteDb::Param::text(path), SqliteDb::Param::integer(block),
                   SqliteDb::Param::blob(chunk)});
    }
}

inline void populate_scenario_imps(SqliteDb& db, Scenario scenario, crypto::Rng& rng) {
    create_imps_schema(db);

    // providers + settings (always present; accounts reference them)
    db.insert("INSERT INTO providers (_id, name, fullname) VALUES (?,?,?)",
              {SqliteDb::Param::integer(1), SqliteDb::Param::text("GTalk"),
               SqliteDb::Param::text("Google Talk")});
    db.insert("INSERT INTO providers (_id, name, fullname) VALUES (?,?,?)",
              {SqliteDb::Param::integer(2), SqliteDb::Param::text("ChatMe"),
               SqliteDb::Param::text("ChatMe")});
    auto setting = [&](int64_t id, int64_t provider, const char* name, const char* value) {
        db.insert("INSERT INTO providerSettings (_id, provider, name, value) VALUES (?,?,?,?)",
                  {SqliteDb::Param::integer(id), SqliteDb::Param::integer(provider),
                   SqliteDb::Param::text(name), SqliteDb::Param::text(value)});
    };
    setting(28, 1, "server", "talk.google.com");
    setting(29, 1, "account-domain", "gmail.com");
    setting(40, 2, "server", "chatme.im");
    setting(41, 2, "account-domain", "chatme.im");

    auto account = [&](int64_t id, const char* name, int64_t provider, const char* username,
                       const char* pw) {
        db.insert(
            "INSERT INTO accounts (_id, name, provider, username, pw, active, locked,"
            " keep_signed_in, last_login_state) VALUES (?,?,?,?,?,1,0,1,1)",
            {SqliteDb::Param::integer(id), SqliteDb::Param::text(name),
             SqliteDb::Param::integer(provider), SqliteDb::Param::text(username),
             SqliteDb::Param::text(pw)});
    };
    account(1, "chat.secure.user", 1, "CS.test.user",
            "X-GOOGLE-TOKEN:ya29.tOkEnTokEnToken");
    account(2, "test1chatsecure", 2, "test1chatsecure", "#t&st.p@sswd!");

    // both accounts offline at acquisition time
    db.insert("INSERT INTO accountStatus (_id, account, presenceStatus, connStatus)"
              " VALUES (1,1,0,0)", {});
    db.insert("INSERT INTO accountStatus (_id, account, presenceStatus, connStatus)"
              " VALUES (2,2,0,0)", {});

    if (scenario == Scenario::Fig3) return;

    // fig4: two contact lists, nine contacts, presence, one avatar
    db.insert("INSERT INTO contactList (_id, name, provider, account) VALUES (1,?,1,1)",
              {SqliteDb::Param::text("Contacts")});
    db.insert("INSERT INTO contactList (_id, name, provider, account) VALUES (2,?,2,2)",
              {SqliteDb::Param::text("Contacts")});

    auto contact = [&](int64_t id, const char* username, const char* nickname,
                       int64_t provider, int64_t acct, int64_t list, int type) {
        db.insert(
            "INSERT INTO contacts (_id, username, nickname, provider, account, contactList,"
            " type, subscriptionStatus, subscriptionType, otr) VALUES (?,?,?,?,?,?,?,0,4,0)",
            {SqliteDb::Param::integer(id), SqliteDb::Param::text(username),
             SqliteDb::Param::text(nickname), SqliteDb::Param::integer(provider),
             SqliteDb::Param::integer(acct), SqliteDb::Param::integer(list),
             SqliteDb::Param::integer(type)});
    };
    contact(1, "first.contact@gmail.com", "First", 1, 1, 1, 0);
    contact(2, "second.contact@gmail.com", "Second", 1, 1, 1, 0);
    contact(3, "third.contact@gmail.com", "Third", 1, 1, 1, 0);
    contact(4, "fourth.contact@gmail.com", "Fourth", 1, 1, 1, 0);
    contact(5, "fifth.contact@gmail.com", "Fifth", 1, 1, 1, 0);
    contact(6, "test3chatsecure@chatme.im", "test3chatsecure", 2, 2, 2, 0);
    contact(7, "test4chatsecure@chatme.im", "test4chatsecure", 2, 2, 2, 0);
    contact(8, "test2chatsecure@chatme.im", "test2chatsecure", 2, 2, 2, 0);
    contact(9, "grptest1@conference.chatme.im", "grptest1", 1, 1, 1, 2);

    // presence: contact 8 available, all other non-group contacts offline,
    // no row for the group-chat contact
    for (int64_t id = 1; id <= 8; ++id) {
        db.insert(
            "INSERT INTO presence (_id, contact_id, client_type, priority, mode, status)"
            " VALUES (?,?,0,0,?,?)",
            {SqliteDb::Param::integer(id), SqliteDb::Param::integer(id),
             SqliteDb::Param::integer(id == 8 ? 5 : 0), SqliteDb::Param::text("")});
    }

    Bytes avatar_png = rng.bytes(3100);
    std::string avatar_hash = to_hex(crypto::sha1(avatar_png));
    db.insert("INSERT INTO avatars (_id, contact, provider, account, hash, data)"
              " VALUES (1,?,2,2,?,?)",
              {SqliteDb::Param::text("test2chatsecure@chatme.im"),
               SqliteDb::Param::text(avatar_hash), SqliteDb::Param::blob(avatar_png)});

    if (scenario == Scenario::Fig4) return;

    // fig5: ten exchanged messages — four in `messages` (the deferred one
    // plus a ChatMe-side message and the two group-chat entries), six in
    // `inMemoryMessages`
    insert_message(db, "messages",
                   {1, 2, "", "Message no. 17", 1443678380850, 8, 0, 0, {}});
    insert_message(db, "messages",
                   {2, 6, "", "Hello from ChatMe", 1443690000000, 1, 0, 1, {}});
    insert_message(db, "messages",
                   {3, 9, "chat.secure.user", "Group chat message no. 1", 1443692200000, 0,
                    1, 1, {}});
    insert_message(db, "messages",
                   {4, 9, "chat.secure.user", "Group chat message no. 2", 1443692210000, 0,
                    1, 1, {}});
    insert_message(db, "inMemoryMessages",
                   {1, 2, "", "Message 1", 1443691955617, 15, 0, 1, {}});
    insert_message(db, "inMemoryMessages",
                   {2, 2, "", "Message 2", 1443691964099, 13, 0, 0, {}});
    insert_message(db, "inMemoryMessages",
                   {3, 2, "", "Message 3", 1443691970412, 15, 0, 1, {}});
    insert_message(db, "inMemoryMessages",
                   {4, 2, "", "Message 4", 1443691981058, 13, 0, 1, {}});
    insert_message(db, "inMemoryMessages",
                   {5, 2, "", "Message 5", 1443691992733, 15, 0, 1, {}});
    insert_message(db, "inMemoryMessages",
                   {6, 2, "", "Message 6", 1443692001916, 13, 0, 1, {}});

    db.insert("INSERT INTO chats (_id, contact_id, groupchat, last_unread_message,"
              " last_message_date) VALUES (1,2,0,?,1443691964099)",
              {SqliteDb::Param::text("Message 2")});

    if (scenario == Scenario::Fig5) return;

    // fig6: the downloaded JPEG's transfer record (content goes to media.db)
    insert_message(db, "inMemoryMessages",
                   {7, 2, "", std::string("vfs:") + kScenarioFilePath, kScenarioFileDateMs,
                    13, 0, 1, std::string("image/jpeg")});
}

inline Bytes scenario_file_content(uint64_t seed) {
    crypto::DeterministicRng rng(seed ^ 0xF11E5EEDULL);
    Bytes content = rng.bytes(static_cast<size_t>(kScenarioFileSize));
    // a JPEG header keeps viewers (and analysts) honest
    const uint8_t jpeg_magic[] = {0xFF, 0xD8, 0xFF, 0xE0, 0x00, 0x10, 'J', 'F', 'I', 'F', 0};
    std::copy(std::begin(jpeg_magic), std::end(jpeg_magic), content.begin());
    return content;
}

inline void populate_scenario_media(SqliteDb& db, Scenario scenario, uint64_t seed,
                                    std::map<std::string, Bytes>& planted) {
    create_media_schema(db);
    insert_vfs_meta(db, {"/", "dir", 1443692083, 0, kScenarioBlockSize});
    if (scenario != Scenario::Fig6) return;

    insert_vfs_meta(db, {"/2", "dir", 1443692083, 0, kScenarioBlockSize});
    insert_vfs_meta(db, {"/2/download", "dir", 1443692083, 0, kScenarioBlockSize});
    Bytes content = scenario_file_content(seed);
    insert_vfs_meta(db, {kScenarioFilePath, "blob", 1443692083,
                         static_cast<int64_t>(content.size()), kScenarioBlockSize});
    insert_vfs_blocks(db, kScenarioFilePath, content, kScenarioBlockSize);
    planted[kScenarioFilePath] = std::move(content);
}

// random scenario: same schema, seeded synthetic data
inline void populate_random_imps(SqliteDb& db, crypto::Rng& rng) {
    create_imps_schema(db);
    db.insert("INSERT INTO providers (_id, name, fullname) VALUES (1,?,?)",
              {SqliteDb::Param::text("GTalk"), SqliteDb::Param::text("Google Talk")});
    db.insert("INSERT INTO providers (_id, name, fullname) VALUES (2,?,?)",
              {SqliteDb::Param::text("Jabber"), SqliteDb::Param::text("Jabber XMPP")});
    db.insert("INSERT INTO providerSettings (_id, provider, name, value) VALUES (1,1,?,?)",
              {SqliteDb::Param::text("account-domain"), SqliteDb::Param::text("gmail.com")});
    db.insert("INSERT INTO providerSettings (_id, provider, name, value) VALUES (2,2,?,?)",
              {SqliteDb::Param::text("account-domain"), SqliteDb::Param::text("jabber.org")});

    auto suffix = [&](int digits) {
        std::string s;
        for (int i = 0; i < digits; ++i) s.push_back(static_cast<char>('0' + rng.below(10)));
        return s;
    };
    for (int64_t id = 1; id <= 2; ++id) {
        std::string user = "user" + suffix(4);
        db.insert(
            "INSERT INTO accounts (_id, name, provider, username, pw, active, locked,"
            " keep_signed_in, last_login_state) VALUES (?,?,?,?,?,1,0,?,1)",
            {SqliteDb::Param::integer(id), SqliteDb::Param::text(user),
             SqliteDb::Param::integer(id), SqliteDb::Param::text(user),
             SqliteDb::Param::text("pw-" + suffix(8)),
             SqliteDb::Param::integer(static_cast<int64_t>(rng.below(2)))});
        db.insert("INSERT INTO accountStatus (_id, account, presenceStatus, connStatus)"
                  " VALUES (?,?,?,?)",
                  {SqliteDb::Param::integer(id), SqliteDb::Param::integer(id),
                   SqliteDb::Param::integer(static_cast<int64_t>(rng.below(6))),
                   SqliteDb::Param::integer(static_cast<int64_t>(rng.below(4)))});
        db.insert("INSERT INTO contactList (_id, name, provider, account) VALUES (?,?,?,?)",
                  {SqliteDb::Param::integer(id), SqliteDb::Param::text("Contacts"),
                   SqliteDb::Param::integer(id), SqliteDb::Param::integer(id)});
    }

    int64_t contact_count = 6 + static_cast<int64_t>(rng.below(7));
    for (int64_t id = 1; id <= contact_count; ++id) {
        int64_t acct = 1 + static_cast<int64_t>(rng.below(2));
        std::string user = "buddy" + std::to_string(id) + "@example.org";
        db.insert(
            "INSERT INTO contacts (_id, username, nickname, provider, account, contactList,"
            " type, subscriptionStatus, subscriptionType, otr) VALUES (?,?,?,?,?,?,?,0,4,?)",
            {SqliteDb::Param::integer(id), SqliteDb::Param::text(user),
             SqliteDb::Param::text("buddy" + std::to_string(id)),
             SqliteDb::Param::integer(acct), SqliteDb::Param::integer(acct),
             SqliteDb::Param::integer(acct),
             SqliteDb::Param::integer(id == contact_count ? 2 : 0),
             SqliteDb::Param::integer(static_cast<int64_t>(rng.below(4)))});
        if (id != contact_count)
            db.insert("INSERT INTO presence (_id, contact_id, client_type, priority, mode,"
                      " status) VALUES (?,?,?,0,?,?)",
                      {SqliteDb::Param::integer(id), SqliteDb::Param::integer(id),
                       SqliteDb::Param::integer(static_cast<int64_t>(rng.below(3))),
                       SqliteDb::Param::integer(static_cast<int64_t>(rng.below(6))),
                       SqliteDb::Param::text("")});
    }

    static constexpr int kChatTypes[] = {0, 1, 8, 13, 14, 15, 16, 2, 10};
    int64_t message_count = 20 + static_cast<int64_t>(rng.below(41));
    int64_t date = 1443650000000;
    for (int64_t id = 1; id <= message_count; ++id) {
        date += 1000 + static_cast<int64_t>(rng.below(600000));
        const char* table = rng.below(2) ? "messages" : "inMemoryMessages";
        int64_t thread = 1 + static_cast<int64_t>(rng.below(
                                 static_cast<uint64_t>(contact_count)));
        insert_message(db, table,
                       {id, thread, "", "synthetic message " + std::to_string(id), date,
                        kChatTypes[rng.below(std::size(kChatTypes))], 0,
                        static_cast<int>(rng.below(2)), {}});
    }
}

inline void populate_random_media(SqliteDb& db, crypto::Rng& rng,
                                  std::map<std::string, Bytes>& planted) {
    create_media_schema(db);
    insert_vfs_meta(db, {"/", "dir", 1443650000, 0, kScenarioBlockSize});
    insert_vfs_meta(db, {"/1", "dir", 1443650000, 0, kScenarioBlockSize});
    insert_vfs_meta(db, {"/1/download", "dir", 1443650000, 0, kScenarioBlockSize});
    size_t sizes[] = {100000 + static_cast<size_t>(rng.below(100000)),
                      3 * static_cast<size_t>(kScenarioBlockSize),  // exact multiple
                      1 + static_cast<size_t>(rng.below(4000))};    // sub-block
    for (size_t i = 0; i < std::size(sizes); ++i) {
        std::string path = "/1/download/" + std::to_string(10000 + rng.below(90000));
        Bytes content = rng.bytes(sizes[i]);
        insert_vfs_meta(db, {path, "blob", 1443650000, static_cast<int64_t>(content.size()),
                             kScenarioBlockSize});
        insert_vfs_blocks(db, path, content, kScenarioBlockSize);
        planted[path] = std::move(content);
    }
}

}  // namespace detail

// ---- synthetic memory dumps ----

struct DumpSpec {
    size_t size = 8u * 1024 * 1024;
    uint64_t seed = 2016;
    std::string passphrase = kScenarioPassphrase;
    size_t passphrase_plants = 2;
    std::vector<std::string> decoys = {"SystemUiVisibility", "com.android.launcher",
                                       "wrongpass123", "NotTheSecret!", "hunter2hunter2"};
    size_t traps = 3;  // signature followed by non-printable bytes
    bool lime_framing = false;
    memscan::SignaturePattern signature;
    // Optional explicit plant positions (e.g. straddling chunk borders);
    // when empty, positions are derived from the seed.
    std::vector<uint64_t> forced_passphrase_offsets;
};

inline Bytes utf16le_bytes(const std::string& utf8) {
    // fixture passphrases are ASCII/Latin-1; map bytes directly
    Bytes out;
    for (unsigned char c : utf8) {
        out.push_back(c);
        out.push_back(0);
    }
    return out;
}

// Builds a dump with the passphrase planted `passphrase_plants` times and
// each decoy once, every instance signature-prefixed and NUL-terminated,
// plus `traps` signature hits followed by garbage.
inline Bytes build_memory_dump(const DumpSpec& spec) {
    crypto::DeterministicRng rng(spec.seed ^ 0xD0D0CAFEULL);
    Bytes dump = rng.bytes(spec.size);

    auto plant = [&](uint64_t offset, const std::string& text) {
        Bytes payload(spec.signature.bytes.begin(), spec.signature.bytes.end());
        Bytes body = utf16le_bytes(text);
        payload.insert(payload.end(), body.begin(), body.end());
        payload.push_back(0);
        payload.push_back(0);
        if (offset + payload.size() > dump.size())
            throw ParseError("plant offset beyond dump size");
        std::copy(payload.begin(), payload.end(),
                  dump.begin() + static_cast<ptrdiff_t>(offset));
        return payload.size();
    };

    std::vector<std::pair<uint64_t, uint64_t>> used;  // [offset, end)
    auto reserve_spot = [&](size_t len) {
        for (int attempt = 0; attempt < 1000; ++attempt) {
            uint64_t offset = 64 + rng.below(dump.size() - len - 128);
            bool clash = false;
            for (auto [b, e] : used)
                if (offset < e + 64 && b < offset + len + 64) clash = true;
            if (!clash) {
                used.emplace_back(offset, offset + len);
                return offset;
            }
        }
        throw ParseError("dump too small for the requested plants");
    };

    size_t passphrase_len = 16 + 2 * (spec.passphrase.size() + 1);
    for (size_t i = 0; i < spec.passphrase_plants; ++i) {
        uint64_t offset;
        if (i < spec.forced_passphrase_offsets.size()) {
            offset = spec.forced_passphrase_offsets[i];
            used.emplace_back(offset, offset + passphrase_len);
        } else {
            offset = reserve_spot(passphrase_len);
        }
        plant(offset, spec.passphrase);
    }
    for (const auto& decoy : spec.decoys)
        plant(reserve_spot(16 + 2 * (decoy.size() + 1)), decoy);
    for (size_t i = 0; i < spec.traps; ++i) {
        uint64_t offset = reserve_spot(16 + 8);
        std::copy(spec.signature.bytes.begin(), spec.signature.bytes.end(),
                  dump.begin() + static_cast<ptrdiff_t>(offset));
        // control characters right after the signature: not a valid string
        const uint8_t garbage[] = {0x07, 0x00, 0x1B, 0x00, 0x00, 0x00};
        std::copy(std::begin(garbage), std::end(garbage),
                  dump.begin() + static_cast<ptrdiff_t>(offset) + 16);
    }

    if (!spec.lime_framing) return dump;

    // two ranges with 32-byte headers, split mid-dump
    auto header = [&](uint64_t start, uint64_t end) {
        Bytes h(memscan::kLimeHeaderLen, 0);
        write_le32(h.data(), memscan::kLimeMagic);
        write_le32(h.data() + 4, 1);  // version
        for (int i = 0; i < 8; ++i) h[8 + i] = static_cast<uint8_t>(start >> (8 * i));
        for (int i = 0; i < 8; ++i) h[16 + i] = static_cast<uint8_t>(end >> (8 * i));
        return h;
    };
    size_t split = dump.size() / 2;
    Bytes framed;
    framed.reserve(dump.size() + 2 * memscan::kLimeHeaderLen);
    Bytes h1 = header(0x10000000, 0x10000000 + split - 1);
    framed.insert(framed.end(), h1.begin(), h1.end());
    framed.insert(framed.end(), dump.begin(), dump.begin() + static_cast<ptrdiff_t>(split));
    Bytes h2 = header(0x20000000, 0x20000000 + (dump.size() - split) - 1);
    framed.insert(framed.end(), h2.begin(), h2.end());
    framed.insert(framed.end(), dump.begin() + static_cast<ptrdiff_t>(split), dump.end());
    return framed;
}

// ---- top-level fixture entry point ----

inline FixtureSet make_fixture(const FixtureSpec& spec) {
    namespace fs = std::filesystem;
    fs::create_directories(spec.out_dir);
    crypto::DeterministicRng rng(spec.seed);

    FixtureSet set;
    if (spec.key) {
        set.key = *spec.key;
    } else if (spec.scenario == Scenario::Random) {
        set.key = vault::DatabaseKey::from_bytes(rng.bytes(vault::kKeyLen));
    } else {
        set.key = vault::DatabaseKey::from_hex(kScenarioKeyHex);
    }
    set.textual_key = vault::textual_media_key(set.key);

    // 1. the wrapped secret in its preferences file (with clutter entries)
    set.secret = vault::wrap_database_key(set.key, vault::Passphrase(spec.passphrase),
                                          spec.iteration_count, rng);
    std::string xml = vault::write_serialized_secret(
        set.secret, spec.prefs_entry_name,
        {{"initialized", "dHJ1ZQ=="},  // decodes to 4 bytes: too short to be a secret
         {"last_version", "MTQuMi4z"}});
    set.prefs_xml = spec.out_dir / "info.guardianproject.cacheword.prefs.xml";
    save_file(set.prefs_xml, as_bytes_view(xml));

    // 2. the main database, raw-key profile
    fs::path imps_plain = spec.out_dir / "impsenc.plain.tmp";
    author_plain_db(imps_plain, spec.imps_page_size, 48, [&](SqliteDb& db) {
        if (spec.scenario == Scenario::Random)
            detail::populate_random_imps(db, rng);
        else
            detail::populate_scenario_imps(db, spec.scenario, rng);
    });
    cipher::CipherProfile imps_profile =
        cipher::CipherProfile::raw(set.key.bytes, spec.imps_page_size);
    Bytes imps_cipher = cipher::encrypt_database(load_file(imps_plain), imps_profile, rng);
    set.impsenc_db = spec.out_dir / "impsenc.db";
    save_file(set.impsenc_db, imps_cipher);
    fs::remove(imps_plain);

    // 3. the media database, textual-key profile
    fs::path media_plain = spec.out_dir / "media.plain.tmp";
    author_plain_db(media_plain, spec.media_page_size, 48, [&](SqliteDb& db) {
        if (spec.scenario == Scenario::Random)
            detail::populate_random_media(db, rng, set.planted_files);
        else
            detail::populate_scenario_media(db, spec.scenario, spec.seed,
                                            set.planted_files);
    });
    cipher::CipherProfile media_profile = cipher::CipherProfile::textual(
        set.textual_key, spec.media_page_size, spec.media_kdf_iterations);
    Bytes media_cipher = cipher::encrypt_database(load_file(media_plain), media_profile, rng);
    set.media_db = spec.out_dir / "media.db";
    save_file(set.media_db, media_cipher);
    fs::remove(media_plain);

    // 4. optional memory dump with the passphrase planted twice
    if (spec.with_dump) {
        DumpSpec dump_spec;
        dump_spec.size = spec.dump_size;
        dump_spec.seed = spec.seed;
        dump_spec.passphrase = spec.passphrase;
        set.dump = spec.out_dir / "memory.dump";
        save_file(set.dump, build_memory_dump(dump_spec));
    }
    return set;
}

}  // namespace csf::fixtures
