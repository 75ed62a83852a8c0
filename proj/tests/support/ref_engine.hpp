#pragma once

/*
 * Wrapper over the vendored reference engine (tests/third_party/sqlcipher,
 * an unmodified upstream amalgamation: SQLite plus the SQLCipher codec).
 * Inside test binaries <sqlite3.h> resolves to that vendored header, so
 * this one engine serves three oracle roles:
 *
 *  - reference SQLite reader: row-level ground truth for our from-scratch
 *    file-format parser;
 *  - reference SQLCipher implementation: conformance target for our page
 *    codec, in both directions, using the 3.x-profile PRAGMAs;
 *  - reference deleter: secure_delete record deletion for the wipe
 *    diagnostic.
 *
 * Canonical row strings make multiset comparison trivial: every value is
 * rendered type-tagged, rows joined and sorted.
 */

#include <sqlite3.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "csf/bytes.hpp"
#include "csf/sqlite_reader.hpp"

namespace testsupport {

class RefDb {
public:
    explicit RefDb(const std::filesystem::path& path) {
        if (sqlite3_open(path.string().c_str(), &db_) != SQLITE_OK)
            throw std::runtime_error("ref engine: cannot open " + path.string());
    }

    RefDb(const RefDb&) = delete;
    RefDb& operator=(const RefDb&) = delete;

    ~RefDb() { close(); }

    void close() {
        if (db_) {
            sqlite3_close(db_);
            db_ = nullptr;
        }
    }

    sqlite3* handle() { return db_; }

    void exec(const std::string& sql) {
        char* err = nullptr;
        if (sqlite3_exec(db_, sql.c_str(), nullptr, nullptr, &err) != SQLITE_OK) {
            std::string message = err ? err : "unknown";
            sqlite3_free(err);
            throw std::runtime_error("ref engine SQL failed: " + message);
        }
    }

    bool try_exec(const std::string& sql) {
        char* err = nullptr;
        int rc = sqlite3_exec(db_, sql.c_str(), nullptr, nullptr, &err);
        sqlite3_free(err);
        return rc == SQLITE_OK;
    }

    // The 3.x-generation cipher profile via explicit PRAGMAs, equivalent
    // to what period builds used by default.
    void apply_cipher3_profile(const std::string& key_pragma_value, uint32_t page_size,
                               uint32_t kdf_iterations) {
        exec("PRAGMA key = " + key_pragma_value + ";");
        exec("PRAGMA cipher_page_size = " + std::to_string(page_size) + ";");
        exec("PRAGMA kdf_iter = " + std::to_string(kdf_iterations) + ";");
        exec("PRAGMA cipher_hmac_algorithm = HMAC_SHA1;");
        exec("PRAGMA cipher_kdf_algorithm = PBKDF2_HMAC_SHA1;");
    }

    static std::string raw_key_pragma(const std::string& key_hex) {
        return "\"x'" + key_hex + "'\"";
    }

    static std::string text_key_pragma(const std::string& key_text) {
        return "'" + key_text + "'";
    }

    std::vector<std::string> table_names() {
        std::vector<std::string> names;
        for_each_row("SELECT name FROM sqlite_master WHERE type='table' ORDER BY name",
                     [&](sqlite3_stmt* stmt) {
                         names.emplace_back(
                             reinterpret_cast<const char*>(sqlite3_column_text(stmt, 0)));
                     });
        return names;
    }

    // Canonical multiset of a table's rows (rowid included).
    std::vector<std::string> canonical_rows(const std::string& table) {
        std::vector<std::string> rows;
        for_each_row("SELECT rowid, * FROM \"" + table + "\"", [&](sqlite3_stmt* stmt) {
            std::string row;
            int cols = sqlite3_column_count(stmt);
            for (int i = 0; i < cols; ++i) {
                if (i) row.push_back('|');
                switch (sqlite3_column_type(stmt, i)) {
                    case SQLITE_NULL: row += "N"; break;
                    case SQLITE_INTEGER:
                        row += "I:" + std::to_string(sqlite3_column_int64(stmt, i));
                        break;
                    case SQLITE_FLOAT: {
                        char buf[40];
                        std::snprintf(buf, sizeof buf, "R:%.17g",
                                      sqlite3_column_double(stmt, i));
                        row += buf;
                        break;
                    }
                    case SQLITE_TEXT:
                        row += "T:";
                        row += reinterpret_cast<const char*>(sqlite3_column_text(stmt, i));
                        break;
                    case SQLITE_BLOB: {
                        const auto* data =
                            static_cast<const uint8_t*>(sqlite3_column_blob(stmt, i));
                        int len = sqlite3_column_bytes(stmt, i);
                        row += "B:" + csf::to_hex(csf::ByteView(data, static_cast<size_t>(len)));
                        break;
                    }
                }
            }
            rows.push_back(std::move(row));
        });
        std::sort(rows.begin(), rows.end());
        return rows;
    }

private:
    template <typename Fn>
    void for_each_row(const std::string& sql, Fn&& fn) {
        sqlite3_stmt* stmt = nullptr;
        if (sqlite3_prepare_v2(db_, sql.c_str(), -1, &stmt, nullptr) != SQLITE_OK)
            throw std::runtime_error("ref engine: cannot prepare " + sql);
        int rc;
        while ((rc = sqlite3_step(stmt)) == SQLITE_ROW) fn(stmt);
        sqlite3_finalize(stmt);
        if (rc != SQLITE_DONE) throw std::runtime_error("ref engine: step failed on " + sql);
    }

    sqlite3* db_ = nullptr;
};

// Same canonical form for rows produced by our parser.
inline std::vector<std::string> canonical_rows(const csf::sqlite::DbImage& img,
                                               const std::string& table) {
    std::vector<std::string> rows;
    img.for_each_row(table, [&](csf::sqlite::Row&& row) {
        std::string out = "I:" + std::to_string(row.rowid);
        for (const auto& value : row.values) {
            out.push_back('|');
            switch (value.type) {
                case csf::sqlite::Value::Type::Null: out += "N"; break;
                case csf::sqlite::Value::Type::Integer:
                    out += "I:" + std::to_string(value.int_value);
                    break;
                case csf::sqlite::Value::Type::Real: {
                    char buf[40];
                    std::snprintf(buf, sizeof buf, "R:%.17g", value.real_value);
                    out += buf;
                    break;
                }
                case csf::sqlite::Value::Type::Text: out += "T:" + value.text_value; break;
                case csf::sqlite::Value::Type::Blob:
                    out += "B:" + csf::to_hex(value.blob_value);
                    break;
            }
        }
        rows.push_back(std::move(out));
        return true;
    });
    std::sort(rows.begin(), rows.end());
    return rows;
}

}  // namespace testsupport
