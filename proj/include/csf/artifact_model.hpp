#pragma once

/*
 * Typed decoding of the forensic tables in the messenger's main database
 * (accounts, accountStatus, providers, providerSettings, contacts,
 * contactList, presence, avatars, messages, inMemoryMessages) and of the
 * two virtual-disk tables in media.db (meta_data, value_data).
 *
 * Decoding rules that matter for evidence fidelity:
 *  - columns are resolved by name, not position, so minor schema drift
 *    degrades gracefully;
 *  - unknown enum values are preserved verbatim and rendered as raw(n),
 *    never dropped;
 *  - every foreign key is audited after load and dangling references are
 *    reported, not silently ignored;
 *  - the `chats` table is skipped deliberately (its content duplicates
 *    the two message tables).
 */

#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "csf/bytes.hpp"
#include "csf/crypto.hpp"
#include "csf/errors.hpp"
#include "csf/sqlite_reader.hpp"

namespace csf::model {

// ---- timestamp decoding ----

// Renders epoch milliseconds as ISO-8601 UTC with millisecond precision.
// Uses the civil-from-days algorithm so the output is locale- and
// platform-independent.
inline std::string decode_epoch_ms(int64_t ms) {
    int64_t seconds = ms / 1000;
    int64_t millis = ms % 1000;
    if (millis < 0) {
        millis += 1000;
        seconds -= 1;
    }
    int64_t days = seconds / 86400;
    int64_t rem = seconds % 86400;
    if (rem < 0) {
        rem += 86400;
        days -= 1;
    }
    int64_t z = days + 719468;
    int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    uint64_t doe = static_cast<uint64_t>(z - era * 146097);
    uint64_t yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    int64_t year = static_cast<int64_t>(yoe) + era * 400;
    uint64_t doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    uint64_t mp = (5 * doy + 2) / 153;
    uint64_t day = doy - (153 * mp + 2) / 5 + 1;
    uint64_t month = mp < 10 ? mp + 3 : mp - 9;
    if (month <= 2) ++year;

    char buf[40];
    std::snprintf(buf, sizeof buf, "%04lld-%02llu-%02lluT%02lld:%02lld:%02lld.%03lldZ",
                  static_cast<long long>(year), static_cast<unsigned long long>(month),
                  static_cast<unsigned long long>(day),
                  static_cast<long long>(rem / 3600),
                  static_cast<long long>((rem % 3600) / 60),
                  static_cast<long long>(rem % 60), static_cast<long long>(millis));
    return buf;
}

// Virtual-disk metadata uses 10-digit epoch seconds.
inline std::string decode_epoch_s(int64_t seconds) {
    std::string iso = decode_epoch_ms(seconds * 1000);
    return iso.substr(0, iso.size() - 5) + "Z";  // drop ".000"
}

// Message dates are 13-digit epoch milliseconds in the era the app
// shipped; values outside [1e12, 1e13) get flagged upstream.
inline bool epoch_ms_plausible(int64_t ms) {
    return ms >= 1000000000000LL && ms < 10000000000000LL;
}

// ---- enum rendering (unknown values preserved as raw(n)) ----

namespace detail {

inline std::string named_or_raw(int value, std::initializer_list<const char*> names) {
    if (value >= 0 && static_cast<size_t>(value) < names.size())
        return *(names.begin() + value);
    return "raw(" + std::to_string(value) + ")";
}

}  // namespace detail

inline std::string presence_mode_name(int v) {
    return detail::named_or_raw(
        v, {"offline", "invisible", "away", "idle", "do-not-disturb", "available"});
}

inline std::string conn_status_name(int v) {
    return detail::named_or_raw(v, {"offline", "connecting", "suspended", "online"});
}

inline std::string contact_type_name(int v) {
    return detail::named_or_raw(v, {"normal", "temporary", "temporary-group-chat",
                                    "blocked", "hidden", "pinned"});
}

inline std::string subscription_status_name(int v) {
    return detail::named_or_raw(v, {"none", "subscribe-requested", "unsubscribe-requested"});
}

inline std::string subscription_type_name(int v) {
    return detail::named_or_raw(v, {"none", "stop-updates", "receive-updates",
                                    "contact-wants-updates", "mutual", "pending-invitation"});
}

inline std::string otr_status_name(int v) {
    return detail::named_or_raw(v, {"off", "on-unknown", "on-by-user", "on-by-contact"});
}

inline std::string client_type_name(int v) {
    return detail::named_or_raw(v, {"default", "mobile", "android"});
}

// ---- message classification ----

struct MessageClass {
    enum class Kind { Chat, Notification, Raw };
    enum class Direction { Incoming, Outgoing, None };

    Kind kind = Kind::Raw;
    Direction direction = Direction::None;
    bool encrypted = false;
    bool verified = false;
    bool deferred = false;
    std::string label;

    std::string kind_name() const {
        switch (kind) {
            case Kind::Chat: return "chat";
            case Kind::Notification: return "notification";
            default: return "raw";
        }
    }

    std::string direction_name() const {
        switch (direction) {
            case Direction::Incoming: return "incoming";
            case Direction::Outgoing: return "outgoing";
            default: return "none";
        }
    }
};

// Type column semantics: 0/1 cleartext out/in, 8 deferred outgoing,
// 13/14 encrypted incoming (14 verified), 15/16 encrypted outgoing
// (16 verified); 2-5 presence changes, 9-12 OTR state changes, 6 group
// conversion, 7 status message. Anything else is preserved raw.
inline MessageClass classify_message(int type) {
    MessageClass c;
    switch (type) {
        case 0: c = {MessageClass::Kind::Chat, MessageClass::Direction::Outgoing,
                     false, false, false, "outgoing"}; break;
        case 1: c = {MessageClass::Kind::Chat, MessageClass::Direction::Incoming,
                     false, false, false, "incoming"}; break;
        case 8: c = {MessageClass::Kind::Chat, MessageClass::Direction::Outgoing,
                     false, false, true, "outgoing deferred"}; break;
        case 13: c = {MessageClass::Kind::Chat, MessageClass::Direction::Incoming,
                      true, false, false, "incoming encrypted"}; break;
        case 14: c = {MessageClass::Kind::Chat, MessageClass::Direction::Incoming,
                      true, true, false, "incoming encrypted verified"}; break;
        case 15: c = {MessageClass::Kind::Chat, MessageClass::Direction::Outgoing,
                      true, false, false, "outgoing encrypted"}; break;
        case 16: c = {MessageClass::Kind::Chat, MessageClass::Direction::Outgoing,
                      true, true, false, "outgoing encrypted verified"}; break;
        case 2: c = {MessageClass::Kind::Notification, MessageClass::Direction::None,
                     false, false, false, "presence available"}; break;
        case 3: c = {MessageClass::Kind::Notification, MessageClass::Direction::None,
                     false, false, false, "presence away"}; break;
        case 4: c = {MessageClass::Kind::Notification, MessageClass::Direction::None,
                     false, false, false, "presence busy"}; break;
        case 5: c = {MessageClass::Kind::Notification, MessageClass::Direction::None,
                     false, false, false, "presence unavailable"}; break;
        case 6: c = {MessageClass::Kind::Notification, MessageClass::Direction::None,
                     false, false, false, "converted to group chat"}; break;
        case 7: c = {MessageClass::Kind::Notification, MessageClass::Direction::None,
                     false, false, false, "status message"}; break;
        case 9: c = {MessageClass::Kind::Notification, MessageClass::Direction::None,
                     false, false, false, "OTR off"}; break;
        case 10: c = {MessageClass::Kind::Notification, MessageClass::Direction::None,
                      false, false, false, "OTR on"}; break;
        case 11: c = {MessageClass::Kind::Notification, MessageClass::Direction::None,
                      false, false, false, "OTR on by user"}; break;
        case 12: c = {MessageClass::Kind::Notification, MessageClass::Direction::None,
                      false, false, false, "OTR on by contact"}; break;
        default:
            c.kind = MessageClass::Kind::Raw;
            c.label = "raw(" + std::to_string(type) + ")";
            break;
    }
    return c;
}

// ---- table row types ----

struct Account {
    int64_t id = 0;
    std::string name;
    int64_t provider_id = 0;
    std::string username;
    std::string pw;  // stored in cleartext by the app
    int active = 0;
    int locked = 0;
    int keep_signed_in = 0;
    int last_login_state = 0;
};

struct AccountStatus {
    int64_t id = 0;
    int64_t account_id = 0;
    int presence_status = 0;
    int conn_status = 0;
};

struct Provider {
    int64_t id = 0;
    std::string name;
    std::string fullname;
};

struct ProviderSetting {
    int64_t id = 0;
    int64_t provider_id = 0;
    std::string name;
    std::string value;
};

struct Contact {
    int64_t id = 0;
    std::string username;
    std::string nickname;
    int64_t provider_id = 0;
    int64_t account_id = 0;
    int64_t contact_list_id = 0;
    int type = 0;
    int subscription_status = 0;
    int subscription_type = 0;
    int otr = 0;
};

struct Presence {
    int64_t id = 0;
    int64_t contact_id = 0;
    int client_type = 0;
    int mode = 0;
    std::string status;
};

struct Avatar {
    int64_t id = 0;
    std::string contact_username;  // keyed by contact username, not id
    int64_t provider_id = 0;
    int64_t account_id = 0;
    std::string hash;  // SHA-1 of the picture as recorded by the app
    Bytes data;
    bool hash_checked = false;
    bool hash_matches = false;
};

struct ContactList {
    int64_t id = 0;
    std::string name;
    int64_t account_id = 0;
    int64_t provider_id = 0;
};

enum class MessageOrigin { Messages, InMemoryMessages };

inline std::string origin_name(MessageOrigin origin) {
    return origin == MessageOrigin::Messages ? "messages" : "inMemoryMessages";
}

struct Message {
    int64_t id = 0;
    int64_t thread_id = 0;  // contact this message was exchanged with
    std::string nickname;   // group-chat alias of the local user, empty for 1:1
    std::string body;       // text, or the virtual-disk path for file transfers
    int64_t date_ms = 0;
    int type = 0;
    int err_code = 0;
    std::string err_msg;
    int is_muc = 0;
    int is_delivered = 0;
    std::optional<std::string> mime_type;  // null <=> textual message
    MessageOrigin origin = MessageOrigin::Messages;

    bool is_file_transfer() const { return mime_type.has_value(); }
    bool date_plausible() const { return epoch_ms_plausible(date_ms); }
};

struct VfsMeta {
    std::string type;  // "dir" | "blob" | "symlink"
    std::string key;   // full path inside the virtual file system
    int64_t ctime = 0;
    int64_t mtime = 0;
    int64_t atime = 0;
    int64_t size = 0;
    int64_t block_size = 0;
};

struct VfsBlock {
    std::string key;
    int64_t block_no = 0;
    Bytes data_block;
};

struct DanglingRef {
    std::string table;
    std::string field;
    int64_t row_id = 0;
    int64_t missing_id = 0;
};

// ---- the decoded main database ----

struct ArtifactDb {
    std::vector<Account> accounts;
    std::vector<AccountStatus> account_statuses;
    std::vector<Provider> providers;
    std::vector<ProviderSetting> provider_settings;
    std::vector<Contact> contacts;
    std::vector<ContactList> contact_lists;
    std::vector<Presence> presences;
    std::vector<Avatar> avatars;
    std::vector<Message> messages;  // union of both message tables
    size_t messages_table_count = 0;
    size_t in_memory_messages_count = 0;

    std::vector<std::string> tables_seen;
    std::vector<std::string> tables_missing;
    std::vector<DanglingRef> dangling;

    const Account* find_account(int64_t id) const {
        for (const auto& a : accounts)
            if (a.id == id) return &a;
        return nullptr;
    }
    const Provider* find_provider(int64_t id) const {
        for (const auto& p : providers)
            if (p.id == id) return &p;
        return nullptr;
    }
    const Contact* find_contact(int64_t id) const {
        for (const auto& c : contacts)
            if (c.id == id) return &c;
        return nullptr;
    }
    const ContactList* find_contact_list(int64_t id) const {
        for (const auto& l : contact_lists)
            if (l.id == id) return &l;
        return nullptr;
    }
    const AccountStatus* status_for_account(int64_t account_id) const {
        for (const auto& s : account_statuses)
            if (s.account_id == account_id) return &s;
        return nullptr;
    }
    const Presence* presence_for_contact(int64_t contact_id) const {
        for (const auto& p : presences)
            if (p.contact_id == contact_id) return &p;
        return nullptr;
    }
    const Avatar* avatar_for_username(const std::string& username) const {
        for (const auto& a : avatars)
            if (a.contact_username == username) return &a;
        return nullptr;
    }
};

namespace detail {

// Column resolution by name with per-row accessors; missing columns fall
// back to defaults so schema drift never aborts a load.
class ColMap {
public:
    ColMap(const sqlite::TableSchema& schema) {
        for (size_t i = 0; i < schema.columns.size(); ++i) index_[schema.columns[i]] = i;
    }

    const sqlite::Value* get(const sqlite::Row& row, const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end() || it->second >= row.values.size()) return nullptr;
        return &row.values[it->second];
    }

    int64_t get_int(const sqlite::Row& row, const std::string& name,
                    int64_t fallback = 0) const {
        const auto* v = get(row, name);
        return v ? v->as_int(fallback) : fallback;
    }

    std::string get_text(const sqlite::Row& row, const std::string& name) const {
        const auto* v = get(row, name);
        return v ? v->as_text() : std::string{};
    }

    std::optional<std::string> get_text_opt(const sqlite::Row& row,
                                            const std::string& name) const {
        const auto* v = get(row, name);
        if (!v || v->is_null()) return std::nullopt;
        return v->as_text();
    }

    Bytes get_blob(const sqlite::Row& row, const std::string& name) const {
        const auto* v = get(row, name);
        return v ? v->as_blob() : Bytes{};
    }

private:
    std::map<std::string, size_t> index_;
};

template <typename Fn>
inline bool load_table(const sqlite::DbImage& img, const char* name, ArtifactDb& db,
                       Fn&& consume) {
    const auto* schema = img.find_table(name);
    if (!schema) {
        db.tables_missing.push_back(name);
        return false;
    }
    db.tables_seen.push_back(name);
    ColMap cols(*schema);
    img.for_each_row(name, [&](sqlite::Row&& row) {
        consume(cols, row);
        return true;
    });
    return true;
}

}  // namespace detail

inline constexpr const char* kForensicTables[] = {
    "accounts", "accountStatus", "providers",  "providerSettings",
    "contacts", "contactList",   "presence",   "avatars",
    "chats",    "messages",      "inMemoryMessages"};

// Decodes every forensic table present in the image. Missing tables are
// reported in tables_missing; an image containing none of them raises
// NoForensicTables.
inline ArtifactDb load_artifact_db(const sqlite::DbImage& img) {
    ArtifactDb db;

    detail::load_table(img, "accounts", db, [&](const detail::ColMap& c, const sqlite::Row& r) {
        Account a;
        a.id = c.get_int(r, "_id");
        a.name = c.get_text(r, "name");
        a.provider_id = c.get_int(r, "provider");
        a.username = c.get_text(r, "username");
        a.pw = c.get_text(r, "pw");
        a.active = static_cast<int>(c.get_int(r, "active"));
        a.locked = static_cast<int>(c.get_int(r, "locked"));
        a.keep_signed_in = static_cast<int>(c.get_int(r, "keep_signed_in"));
        a.last_login_state = static_cast<int>(c.get_int(r, "last_login_state"));
        db.accounts.push_back(std::move(a));
    });

    detail::load_table(img, "accountStatus", db,
                       [&](const detail::ColMap& c, const sqlite::Row& r) {
        AccountStatus s;
        s.id = c.get_int(r, "_id");
        s.account_id = c.get_int(r, "account");
        s.presence_status = static_cast<int>(c.get_int(r, "presenceStatus"));
        s.conn_status = static_cast<int>(c.get_int(r, "connStatus"));
        db.account_statuses.push_back(s);
    });

    detail::load_table(img, "providers", db,
                       [&](const detail::ColMap& c, const sqlite::Row& r) {
        Provider p;
        p.id = c.get_int(r, "_id");
        p.name = c.get_text(r, "name");
        p.fullname = c.get_text(r, "fullname");
        db.providers.push_back(std::move(p));
    });

    detail::load_table(img, "providerSettings", db,
                       [&](const detail::ColMap& c, const sqlite::Row& r) {
        ProviderSetting s;
        s.id = c.get_int(r, "_id");
        s.provider_id = c.get_int(r, "provider");
        s.name = c.get_text(r, "name");
        s.value = c.get_text(r, "value");
        db.provider_settings.push_back(std::move(s));
    });

    detail::load_table(img, "contacts", db,
                       [&](const detail::ColMap& c, const sqlite::Row& r) {
        Contact contact;
        contact.id = c.get_int(r, "_id");
        contact.username = c.get_text(r, "username");
        contact.nickname = c.get_text(r, "nickname");
        contact.provider_id = c.get_int(r, "provider");
        contact.account_id = c.get_int(r, "account");
        contact.contact_list_id = c.get_int(r, "contactList");
        contact.type = static_cast<int>(c.get_int(r, "type"));
        contact.subscription_status = static_cast<int>(c.get_int(r, "subscriptionStatus"));
        contact.subscription_type = static_cast<int>(c.get_int(r, "subscriptionType"));
        contact.otr = static_cast<int>(c.get_int(r, "otr"));
        db.contacts.push_back(std::move(contact));
    });

    detail::load_table(img, "contactList", db,
                       [&](const detail::ColMap& c, const sqlite::Row& r) {
        ContactList l;
        l.id = c.get_int(r, "_id");
        l.name = c.get_text(r, "name");
        l.account_id = c.get_int(r, "account");
        l.provider_id = c.get_int(r, "provider");
        db.contact_lists.push_back(std::move(l));
    });

    detail::load_table(img, "presence", db,
                       [&](const detail::ColMap& c, const sqlite::Row& r) {
        Presence p;
        p.id = c.get_int(r, "_id");
        p.contact_id = c.get_int(r, "contact_id");
        p.client_type = static_cast<int>(c.get_int(r, "client_type"));
        p.mode = static_cast<int>(c.get_int(r, "mode"));
        p.status = c.get_text(r, "status");
        db.presences.push_back(std::move(p));
    });

    detail::load_table(img, "avatars", db,
                       [&](const detail::ColMap& c, const sqlite::Row& r) {
        Avatar a;
        a.id = c.get_int(r, "_id");
        a.contact_username = c.get_text(r, "contact");
        a.provider_id = c.get_int(r, "provider");
        a.account_id = c.get_int(r, "account");
        a.hash = c.get_text(r, "hash");
        a.data = c.get_blob(r, "data");
        if (!a.data.empty()) {
            a.hash_checked = true;
            std::string computed = to_hex(crypto::sha1(a.data));
            std::string recorded = a.hash;
            for (char& ch : recorded)
                ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
            a.hash_matches = computed == recorded;  // mismatch flagged, not fatal
        }
        db.avatars.push_back(std::move(a));
    });

    // `chats` is intentionally decoded to nothing: its rows repeat what
    // the two message tables already store.
    if (img.has_table("chats"))
        db.tables_seen.push_back("chats");
    else
        db.tables_missing.push_back("chats");

    auto load_messages = [&](const char* table, MessageOrigin origin, size_t& counter) {
        detail::load_table(img, table, db,
                           [&](const detail::ColMap& c, const sqlite::Row& r) {
            Message m;
            m.id = c.get_int(r, "_id");
            m.thread_id = c.get_int(r, "thread_id");
            m.nickname = c.get_text(r, "nickname");
            m.body = c.get_text(r, "body");
            m.date_ms = c.get_int(r, "date");
            m.type = static_cast<int>(c.get_int(r, "type"));
            m.err_code = static_cast<int>(c.get_int(r, "err_code"));
            m.err_msg = c.get_text(r, "err_msg");
            m.is_muc = static_cast<int>(c.get_int(r, "is_muc"));
            m.is_delivered = static_cast<int>(c.get_int(r, "is_delivered"));
            m.mime_type = c.get_text_opt(r, "mime_type");
            m.origin = origin;
            db.messages.push_back(std::move(m));
            ++counter;
        });
    };
    load_messages("messages", MessageOrigin::Messages, db.messages_table_count);
    load_messages("inMemoryMessages", MessageOrigin::InMemoryMessages,
                  db.in_memory_messages_count);

    if (db.tables_seen.empty())
        throw NoForensicTables("image contains none of the forensic tables");

    // FK audit: record every reference that does not resolve.
    auto audit = [&](const char* table, const char* field, int64_t row_id, int64_t target,
                     bool ok) {
        if (!ok && target != 0) db.dangling.push_back({table, field, row_id, target});
    };
    for (const auto& a : db.accounts)
        audit("accounts", "provider", a.id, a.provider_id,
              db.find_provider(a.provider_id) != nullptr);
    for (const auto& s : db.account_statuses)
        audit("accountStatus", "account", s.id, s.account_id,
              db.find_account(s.account_id) != nullptr);
    for (const auto& s : db.provider_settings)
        audit("providerSettings", "provider", s.id, s.provider_id,
              db.find_provider(s.provider_id) != nullptr);
    for (const auto& c : db.contacts) {
        audit("contacts", "account", c.id, c.account_id,
              db.find_account(c.account_id) != nullptr);
        audit("contacts", "provider", c.id, c.provider_id,
              db.find_provider(c.provider_id) != nullptr);
        audit("contacts", "contactList", c.id, c.contact_list_id,
              db.find_contact_list(c.contact_list_id) != nullptr);
    }
    for (const auto& p : db.presences)
        audit("presence", "contact_id", p.id, p.contact_id,
              db.find_contact(p.contact_id) != nullptr);
    for (const auto& m : db.messages)
        audit(origin_name(m.origin).c_str(), "thread_id", m.id, m.thread_id,
              db.find_contact(m.thread_id) != nullptr);
    return db;
}

// ---- the decoded virtual-disk database ----

struct VfsDb {
    std::vector<VfsMeta> metas;
    std::vector<VfsBlock> blocks;

    const VfsMeta* find(const std::string& path) const {
        for (const auto& m : metas)
            if (m.key == path) return &m;
        return nullptr;
    }
};

inline VfsDb load_vfs_db(const sqlite::DbImage& img) {
    VfsDb db;
    if (!img.has_table("meta_data"))
        throw NoForensicTables("media database has no meta_data table");
    {
        detail::ColMap cols(*img.find_table("meta_data"));
        img.for_each_row("meta_data", [&](sqlite::Row&& r) {
            VfsMeta m;
            m.type = cols.get_text(r, "type");
            m.key = cols.get_text(r, "key");
            m.ctime = cols.get_int(r, "ctime");
            m.mtime = cols.get_int(r, "mtime");
            m.atime = cols.get_int(r, "atime");
            m.size = cols.get_int(r, "size");
            m.block_size = cols.get_int(r, "block_size");
            db.metas.push_back(std::move(m));
            return true;
        });
    }
    if (img.has_table("value_data")) {
        detail::ColMap cols(*img.find_table("value_data"));
        img.for_each_row("value_data", [&](sqlite::Row&& r) {
            VfsBlock b;
            b.key = cols.get_text(r, "key");
            b.block_no = cols.get_int(r, "block_no");
            b.data_block = cols.get_blob(r, "data_block");
            db.blocks.push_back(std::move(b));
            return true;
        });
    }
    return db;
}

}  // namespace csf::model
