#pragma once

/*
 * The investigative joins over the decoded database:
 *
 *  - account identities:  accounts x providers x providerSettings x accountStatus
 *  - contact lists:       contacts x contactList x presence x avatars
 *  - message chronology:  messages + inMemoryMessages, thread -> contact -> account
 *  - file transfers:      file-transfer messages x virtual-disk metadata
 *
 * Output is deliberately boring: plain structs with every join gap spelled
 * out, stable ordering everywhere (sorting key noted per builder), and
 * JSON/CSV emitters that are byte-deterministic for identical inputs.
 */

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "csf/artifact_model.hpp"
#include "csf/bytes.hpp"
#include "csf/version.hpp"

namespace csf::recon {

using Json = nlohmann::ordered_json;

// The provider setting that carries the account domain is matched by
// name; the name is configurable because deployments vary.
inline constexpr const char* kDefaultDomainSetting = "account-domain";

// ---- Q1: accounts ----

struct AccountReport {
    int64_t account_id = 0;
    std::string local_name;
    std::string username;
    std::string password;
    std::string provider_name;
    std::string provider_fullname;
    std::string account_domain;
    std::string qualified_identity;  // username@domain when both halves exist
    std::string presence;
    std::string connection;
    bool active = false;
    bool keep_signed_in = false;
    std::vector<std::string> gaps;
};

inline std::vector<AccountReport> build_account_reports(
    const model::ArtifactDb& db, const std::string& domain_setting = kDefaultDomainSetting) {
    std::vector<AccountReport> out;
    for (const auto& account : db.accounts) {
        AccountReport report;
        report.account_id = account.id;
        report.local_name = account.name;
        report.username = account.username;
        report.password = account.pw;
        report.active = account.active == 1;
        report.keep_signed_in = account.keep_signed_in == 1;

        if (const auto* provider = db.find_provider(account.provider_id)) {
            report.provider_name = provider->name;
            report.provider_fullname = provider->fullname;
        } else {
            report.gaps.push_back("provider " + std::to_string(account.provider_id) +
                                  " not found");
        }
        for (const auto& setting : db.provider_settings) {
            if (setting.provider_id == account.provider_id && setting.name == domain_setting) {
                report.account_domain = setting.value;
                break;
            }
        }
        if (report.account_domain.empty())
            report.gaps.push_back("no '" + domain_setting + "' setting for provider " +
                                  std::to_string(account.provider_id));
        if (!account.username.empty() && !report.account_domain.empty())
            report.qualified_identity = account.username + "@" + report.account_domain;

        if (const auto* status = db.status_for_account(account.id)) {
            report.presence = model::presence_mode_name(status->presence_status);
            report.connection = model::conn_status_name(status->conn_status);
        } else {
            report.presence = "unknown";
            report.connection = "unknown";
            report.gaps.push_back("no accountStatus row");
        }
        out.push_back(std::move(report));
    }
    std::sort(out.begin(), out.end(), [](const AccountReport& a, const AccountReport& b) {
        return a.account_id < b.account_id;
    });
    return out;
}

// ---- Q2: contacts ----

struct ContactReport {
    int64_t contact_id = 0;
    std::string username;
    std::string nickname;
    std::string type;
    bool group_chat = false;
    std::string list_name;
    int64_t account_id = 0;
    std::string account_name;
    std::string presence;
    std::string presence_status_text;
    std::string otr;
    std::string subscription_status;
    std::string subscription_type;
    bool has_avatar = false;
    std::string avatar_hash;
    bool avatar_hash_ok = false;
    int64_t avatar_bytes = 0;
    std::vector<std::string> gaps;
};

inline std::vector<ContactReport> build_contact_reports(const model::ArtifactDb& db) {
    std::vector<ContactReport> out;
    for (const auto& contact : db.contacts) {
        ContactReport report;
        report.contact_id = contact.id;
        report.username = contact.username;
        report.nickname = contact.nickname;
        report.type = model::contact_type_name(contact.type);
        report.group_chat = contact.type == 2;
        report.otr = model::otr_status_name(contact.otr);
        report.subscription_status =
            model::subscription_status_name(contact.subscription_status);
        report.subscription_type = model::subscription_type_name(contact.subscription_type);
        report.account_id = contact.account_id;

        if (const auto* list = db.find_contact_list(contact.contact_list_id))
            report.list_name = list->name;
        else
            report.gaps.push_back("contact list " + std::to_string(contact.contact_list_id) +
                                  " not found");
        if (const auto* account = db.find_account(contact.account_id))
            report.account_name = account->name;
        else
            report.gaps.push_back("account " + std::to_string(contact.account_id) +
                                  " not found");
        if (const auto* presence = db.presence_for_contact(contact.id)) {
            report.presence = model::presence_mode_name(presence->mode);
            report.presence_status_text = presence->status;
        } else {
            report.presence = "unknown";
        }
        if (const auto* avatar = db.avatar_for_username(contact.username)) {
            report.has_avatar = true;
            report.avatar_hash = avatar->hash;
            report.avatar_hash_ok = avatar->hash_matches;
            report.avatar_bytes = static_cast<int64_t>(avatar->data.size());
        }
        out.push_back(std::move(report));
    }
    std::sort(out.begin(), out.end(), [](const ContactReport& a, const ContactReport& b) {
        return a.contact_id < b.contact_id;
    });
    return out;
}

// ---- Q3: chronology ----

struct ChronologyEntry {
    int64_t message_id = 0;
    model::MessageOrigin origin = model::MessageOrigin::Messages;
    int64_t date_ms = 0;
    std::string timestamp_utc;
    bool date_suspect = false;
    std::string local_account;
    int64_t thread_id = 0;
    std::string contact_username;
    std::string contact_nickname;
    model::MessageClass classification;
    std::string body;
    std::optional<std::string> mime_type;
    bool is_muc = false;
    std::string group_alias;  // local user's alias inside the group chat
    bool delivered = false;
    int err_code = 0;
    std::string err_msg;
    std::vector<std::string> gaps;
};

struct ChronologyFilter {
    std::optional<int64_t> account_id;
    std::optional<int64_t> contact_id;
    std::optional<int64_t> since_ms;
    std::optional<int64_t> until_ms;
};

// Entries sorted by timestamp, ties broken by (origin, id) so identical
// inputs always produce identical reports. Notification messages are
// included but tagged; a dangling thread_id is recorded on the entry and
// the entry still emitted.
inline std::vector<ChronologyEntry> build_chronology(const model::ArtifactDb& db,
                                                     const ChronologyFilter& filter = {}) {
    std::vector<ChronologyEntry> out;
    for (const auto& message : db.messages) {
        ChronologyEntry entry;
        entry.message_id = message.id;
        entry.origin = message.origin;
        entry.date_ms = message.date_ms;
        entry.timestamp_utc = model::decode_epoch_ms(message.date_ms);
        entry.date_suspect = !message.date_plausible();
        entry.thread_id = message.thread_id;
        entry.classification = model::classify_message(message.type);
        entry.body = message.body;
        entry.mime_type = message.mime_type;
        entry.is_muc = message.is_muc == 1;
        entry.group_alias = message.nickname;
        entry.delivered = message.is_delivered == 1;
        entry.err_code = message.err_code;
        entry.err_msg = message.err_msg;

        const auto* contact = db.find_contact(message.thread_id);
        if (contact) {
            entry.contact_username = contact->username;
            entry.contact_nickname = contact->nickname;
            if (const auto* account = db.find_account(contact->account_id))
                entry.local_account = account->name;
            else
                entry.gaps.push_back("account " + std::to_string(contact->account_id) +
                                     " not found");
        } else {
            entry.gaps.push_back("dangling thread_id " + std::to_string(message.thread_id));
        }

        if (filter.contact_id && message.thread_id != *filter.contact_id) continue;
        if (filter.account_id &&
            (!contact || contact->account_id != *filter.account_id))
            continue;
        if (filter.since_ms && message.date_ms < *filter.since_ms) continue;
        if (filter.until_ms && message.date_ms > *filter.until_ms) continue;
        out.push_back(std::move(entry));
    }
    std::sort(out.begin(), out.end(), [](const ChronologyEntry& a, const ChronologyEntry& b) {
        if (a.date_ms != b.date_ms) return a.date_ms < b.date_ms;
        if (a.origin != b.origin) return a.origin < b.origin;
        return a.message_id < b.message_id;
    });
    return out;
}

// ---- Q4: file transfers ----

struct FileTransferRecord {
    ChronologyEntry entry;
    std::string vfs_path;  // message body with any "vfs:" scheme prefix stripped
    bool meta_found = false;
    int64_t size = 0;
    int64_t block_size = 0;
    std::string extraction_status = "not attempted";
};

struct FileCorrelation {
    std::vector<FileTransferRecord> records;
    std::vector<std::string> files_without_message;  // orphan virtual-disk blobs
};

inline std::string strip_vfs_prefix(const std::string& body) {
    constexpr std::string_view prefix = "vfs:";
    if (body.rfind(prefix, 0) == 0) return body.substr(prefix.size());
    return body;
}

// Matches every file-transfer message (non-null mime_type) to a
// virtual-disk object by exact path. Unmatched paths are reported in both
// directions.
inline FileCorrelation correlate_file_transfers(const model::ArtifactDb& db,
                                                const model::VfsDb* vfs) {
    FileCorrelation out;
    std::vector<std::string> referenced;
    for (const auto& entry : build_chronology(db)) {
        if (!entry.mime_type) continue;
        FileTransferRecord record;
        record.entry = entry;
        record.vfs_path = strip_vfs_prefix(entry.body);
        referenced.push_back(record.vfs_path);
        if (vfs) {
            if (const auto* meta = vfs->find(record.vfs_path)) {
                record.meta_found = true;
                record.size = meta->size;
                record.block_size = meta->block_size;
            } else {
                record.extraction_status = "message-without-file";
            }
        } else {
            record.extraction_status = "media database not supplied";
        }
        out.records.push_back(std::move(record));
    }
    if (vfs) {
        for (const auto& meta : vfs->metas) {
            if (meta.type != "blob") continue;
            if (std::find(referenced.begin(), referenced.end(), meta.key) ==
                referenced.end())
                out.files_without_message.push_back(meta.key);
        }
        std::sort(out.files_without_message.begin(), out.files_without_message.end());
    }
    return out;
}

// ---- emitters ----

struct InputDigest {
    std::string path;
    std::string sha256;
};

struct ReportMeta {
    std::vector<InputDigest> inputs;
};

inline Json meta_json(const ReportMeta& meta) {
    Json j;
    j["tool"] = std::string(kToolName) + " " + kToolVersion;
    Json inputs = Json::array();
    for (const auto& input : meta.inputs)
        inputs.push_back(Json{{"path", input.path}, {"sha256", input.sha256}});
    j["inputs"] = inputs;
    return j;
}

inline Json to_json(const std::vector<AccountReport>& reports, const ReportMeta& meta) {
    Json j;
    j["report"] = "accounts";
    j["meta"] = meta_json(meta);
    Json rows = Json::array();
    for (const auto& r : reports) {
        rows.push_back(Json{{"account_id", r.account_id},
                            {"local_name", r.local_name},
                            {"username", r.username},
                            {"password", r.password},
                            {"provider", r.provider_name},
                            {"provider_fullname", r.provider_fullname},
                            {"account_domain", r.account_domain},
                            {"qualified_identity", r.qualified_identity},
                            {"presence", r.presence},
                            {"connection", r.connection},
                            {"active", r.active},
                            {"keep_signed_in", r.keep_signed_in},
                            {"gaps", r.gaps}});
    }
    j["rows"] = rows;
    return j;
}

inline Json to_json(const std::vector<ContactReport>& reports, const ReportMeta& meta) {
    Json j;
    j["report"] = "contacts";
    j["meta"] = meta_json(meta);
    Json rows = Json::array();
    for (const auto& r : reports) {
        rows.push_back(Json{{"contact_id", r.contact_id},
                            {"username", r.username},
                            {"nickname", r.nickname},
                            {"type", r.type},
                            {"group_chat", r.group_chat},
                            {"list_name", r.list_name},
                            {"account_id", r.account_id},
                            {"account_name", r.account_name},
                            {"presence", r.presence},
                            {"status_text", r.presence_status_text},
                            {"otr", r.otr},
                            {"subscription_status", r.subscription_status},
                            {"subscription_type", r.subscription_type},
                            {"has_avatar", r.has_avatar},
                            {"avatar_hash", r.avatar_hash},
                            {"avatar_hash_ok", r.avatar_hash_ok},
                            {"avatar_bytes", r.avatar_bytes},
                            {"gaps", r.gaps}});
    }
    j["rows"] = rows;
    return j;
}

inline Json entry_json(const ChronologyEntry& e) {
    return Json{{"timestamp_utc", e.timestamp_utc},
                {"date_ms", e.date_ms},
                {"date_suspect", e.date_suspect},
                {"local_account", e.local_account},
                {"contact_id", e.thread_id},
                {"contact_username", e.contact_username},
                {"contact_nickname", e.contact_nickname},
                {"kind", e.classification.kind_name()},
                {"direction", e.classification.direction_name()},
                {"encrypted", e.classification.encrypted},
                {"verified", e.classification.verified},
                {"deferred", e.classification.deferred},
                {"type_label", e.classification.label},
                {"body", e.body},
                {"mime_type", e.mime_type ? Json(*e.mime_type) : Json(nullptr)},
                {"group_chat", e.is_muc},
                {"group_alias", e.group_alias},
                {"delivered", e.delivered},
                {"err_code", e.err_code},
                {"err_msg", e.err_msg},
                {"origin", model::origin_name(e.origin)},
                {"message_id", e.message_id},
                {"gaps", e.gaps}};
}

inline Json to_json(const std::vector<ChronologyEntry>& entries, const ReportMeta& meta) {
    Json j;
    j["report"] = "messages";
    j["meta"] = meta_json(meta);
    Json rows = Json::array();
    for (const auto& e : entries) rows.push_back(entry_json(e));
    j["rows"] = rows;
    return j;
}

inline Json to_json(const FileCorrelation& correlation, const ReportMeta& meta) {
    Json j;
    j["report"] = "files";
    j["meta"] = meta_json(meta);
    Json rows = Json::array();
    for (const auto& r : correlation.records) {
        Json row = entry_json(r.entry);
        row["vfs_path"] = r.vfs_path;
        row["meta_found"] = r.meta_found;
        row["size"] = r.size;
        row["block_size"] = r.block_size;
        row["extraction_status"] = r.extraction_status;
        rows.push_back(std::move(row));
    }
    j["rows"] = rows;
    j["files_without_message"] = correlation.files_without_message;
    return j;
}

// CSV with RFC-4180 quoting; one file per report type.
namespace detail {

inline std::string csv_escape(const std::string& field) {
    bool needs_quotes = field.find_first_of(",\"\r\n") != std::string::npos;
    if (!needs_quotes) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

inline std::string csv_row(const std::vector<std::string>& fields) {
    std::string out;
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back(',');
        out += csv_escape(fields[i]);
    }
    out.push_back('\n');
    return out;
}

}  // namespace detail

inline std::string to_csv(const std::vector<AccountReport>& reports) {
    std::string out = detail::csv_row(
        {"account_id", "local_name", "username", "password", "provider", "account_domain",
         "qualified_identity", "presence", "connection", "active", "keep_signed_in", "gaps"});
    for (const auto& r : reports) {
        std::string gaps;
        for (const auto& g : r.gaps) gaps += (gaps.empty() ? "" : "; ") + g;
        out += detail::csv_row({std::to_string(r.account_id), r.local_name, r.username,
                                r.password, r.provider_name, r.account_domain,
                                r.qualified_identity, r.presence, r.connection,
                                r.active ? "1" : "0", r.keep_signed_in ? "1" : "0", gaps});
    }
    return out;
}

inline std::string to_csv(const std::vector<ContactReport>& reports) {
    std::string out = detail::csv_row({"contact_id", "username", "nickname", "type",
                                       "group_chat", "list_name", "account_name", "presence",
                                       "otr", "has_avatar", "avatar_hash", "gaps"});
    for (const auto& r : reports) {
        std::string gaps;
        for (const auto& g : r.gaps) gaps += (gaps.empty() ? "" : "; ") + g;
        out += detail::csv_row({std::to_string(r.contact_id), r.username, r.nickname, r.type,
                                r.group_chat ? "1" : "0", r.list_name, r.account_name,
                                r.presence, r.otr, r.has_avatar ? "1" : "0", r.avatar_hash,
                                gaps});
    }
    return out;
}

inline std::string to_csv(const std::vector<ChronologyEntry>& entries) {
    std::string out = detail::csv_row(
        {"timestamp_utc", "local_account", "contact_username", "contact_nickname",
         "direction", "kind", "encrypted", "verified", "deferred", "body", "mime_type",
         "group_chat", "group_alias", "delivered", "origin", "message_id", "gaps"});
    for (const auto& e : entries) {
        std::string gaps;
        for (const auto& g : e.gaps) gaps += (gaps.empty() ? "" : "; ") + g;
        out += detail::csv_row(
            {e.timestamp_utc, e.local_account, e.contact_username, e.contact_nickname,
             e.classification.direction_name(), e.classification.kind_name(),
             e.classification.encrypted ? "1" : "0", e.classification.verified ? "1" : "0",
             e.classification.deferred ? "1" : "0", e.body,
             e.mime_type.value_or(""), e.is_muc ? "1" : "0", e.group_alias,
             e.delivered ? "1" : "0", model::origin_name(e.origin),
             std::to_string(e.message_id), gaps});
    }
    return out;
}

inline std::string to_csv(const FileCorrelation& correlation) {
    std::string out = detail::csv_row({"timestamp_utc", "local_account", "contact_username",
                                       "direction", "mime_type", "vfs_path", "meta_found",
                                       "size", "block_size", "extraction_status"});
    for (const auto& r : correlation.records) {
        out += detail::csv_row(
            {r.entry.timestamp_utc, r.entry.local_account, r.entry.contact_username,
             r.entry.classification.direction_name(), r.entry.mime_type.value_or(""),
             r.vfs_path, r.meta_found ? "1" : "0", std::to_string(r.size),
             std::to_string(r.block_size), r.extraction_status});
    }
    return out;
}

}  // namespace csf::recon
