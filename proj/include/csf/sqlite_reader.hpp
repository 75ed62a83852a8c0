#pragma once

/*
 * Read-only parser for the SQLite v3 main database file format: header,
 * table b-trees, record serial types, varints and overflow chains. No
 * database engine is involved — this operates on the raw byte image that
 * the page codec produces, which is the point: every structure that ends
 * up in a report has been decoded from first principles.
 *
 * Scope is deliberately narrow: rowid table b-trees only (no indices, no
 * SQL execution, no journals). WAL-mode files and WITHOUT ROWID tables
 * are rejected explicitly rather than misparsed.
 */

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "csf/bytes.hpp"
#include "csf/errors.hpp"

namespace csf::sqlite {

// ---- values and rows ----

struct Value {
    enum class Type { Null, Integer, Real, Text, Blob };

    Type type = Type::Null;
    int64_t int_value = 0;
    double real_value = 0.0;
    std::string text_value;
    Bytes blob_value;

    static Value null() { return Value{}; }
    static Value integer(int64_t v) {
        Value out;
        out.type = Type::Integer;
        out.int_value = v;
        return out;
    }
    static Value real(double v) {
        Value out;
        out.type = Type::Real;
        out.real_value = v;
        return out;
    }
    static Value text(std::string v) {
        Value out;
        out.type = Type::Text;
        out.text_value = std::move(v);
        return out;
    }
    static Value blob(Bytes v) {
        Value out;
        out.type = Type::Blob;
        out.blob_value = std::move(v);
        return out;
    }

    bool is_null() const { return type == Type::Null; }

    // Lenient accessors: forensic rows should never hard-fail on a type
    // quirk, so numeric text coerces and NULL maps to a default.
    int64_t as_int(int64_t fallback = 0) const {
        switch (type) {
            case Type::Integer: return int_value;
            case Type::Real: return static_cast<int64_t>(real_value);
            case Type::Text:
                try {
                    return std::stoll(text_value);
                } catch (...) {
                    return fallback;
                }
            default: return fallback;
        }
    }

    std::string as_text() const {
        switch (type) {
            case Type::Text: return text_value;
            case Type::Integer: return std::to_string(int_value);
            case Type::Real: return std::to_string(real_value);
            case Type::Blob: return std::string(blob_value.begin(), blob_value.end());
            default: return {};
        }
    }

    const Bytes& as_blob() const {
        static const Bytes empty;
        return type == Type::Blob ? blob_value : empty;
    }

    bool operator==(const Value&) const = default;
};

struct Row {
    int64_t rowid = 0;
    std::vector<Value> values;
};

struct TableSchema {
    std::string name;
    uint32_t root_page = 0;
    std::vector<std::string> columns;
    std::string create_sql;
    bool without_rowid = false;
    bool is_virtual = false;
    int ipk_column = -1;  // column that aliases the rowid, -1 if none
};

// ---- varints ----

// SQLite varint: 1-9 bytes, 7 bits per byte big-endian-first, the 9th
// byte contributing all 8 bits.
inline std::pair<uint64_t, int> read_varint(const uint8_t* p, const uint8_t* end) {
    uint64_t value = 0;
    for (int i = 0; i < 8; ++i) {
        if (p + i >= end) return {0, 0};
        value = (value << 7) | (p[i] & 0x7F);
        if ((p[i] & 0x80) == 0) return {value, i + 1};
    }
    if (p + 8 >= end) return {0, 0};
    value = (value << 8) | p[8];
    return {value, 9};
}

inline size_t write_varint(uint8_t* out, uint64_t value) {
    if (value <= 0x7F) {
        out[0] = static_cast<uint8_t>(value);
        return 1;
    }
    if (value > 0x00FFFFFFFFFFFFFFULL) {
        // 9-byte form: 8 continuation bytes then a full byte
        for (int i = 0; i < 8; ++i)
            out[i] = static_cast<uint8_t>(0x80 | ((value >> (8 + 7 * (7 - i))) & 0x7F));
        out[8] = static_cast<uint8_t>(value);
        return 9;
    }
    uint8_t tmp[9];
    int n = 0;
    uint64_t v = value;
    while (v != 0) {
        tmp[n++] = static_cast<uint8_t>(v & 0x7F);
        v >>= 7;
    }
    for (int i = 0; i < n; ++i) {
        out[i] = tmp[n - 1 - i];
        if (i != n - 1) out[i] |= 0x80;
    }
    return static_cast<size_t>(n);
}

namespace detail {

inline void append_utf8(std::string& out, uint32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

inline std::string utf16_to_utf8(ByteView data, bool little_endian) {
    std::string out;
    out.reserve(data.size() / 2);
    size_t n = data.size() / 2;
    for (size_t i = 0; i < n; ++i) {
        uint32_t unit = little_endian
                            ? static_cast<uint32_t>(data[2 * i] | (data[2 * i + 1] << 8))
                            : static_cast<uint32_t>((data[2 * i] << 8) | data[2 * i + 1]);
        if (unit >= 0xD800 && unit <= 0xDBFF && i + 1 < n) {
            uint32_t low = little_endian
                               ? static_cast<uint32_t>(data[2 * i + 2] | (data[2 * i + 3] << 8))
                               : static_cast<uint32_t>((data[2 * i + 2] << 8) | data[2 * i + 3]);
            if (low >= 0xDC00 && low <= 0xDFFF) {
                append_utf8(out, 0x10000 + ((unit - 0xD800) << 10) + (low - 0xDC00));
                ++i;
                continue;
            }
        }
        append_utf8(out, unit);  // lone surrogates pass through as-is
    }
    return out;
}

inline std::string upper_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

inline bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

struct SchemaColumns {
    std::vector<std::string> names;
    bool without_rowid = false;
    int ipk_column = -1;
};

// Extracts column names from a CREATE TABLE statement: find the outer
// parenthesised list, split it at depth-1 commas, take the leading
// identifier of each definition and stop at table-level constraints.
inline SchemaColumns parse_create_table(std::string_view sql) {
    SchemaColumns result;
    size_t open = std::string_view::npos;
    int quote = 0;
    for (size_t i = 0; i < sql.size(); ++i) {
        char c = sql[i];
        if (quote) {
            if (c == quote) quote = 0;
            continue;
        }
        if (c == '\'' || c == '"' || c == '`') {
            quote = c;
        } else if (c == '[') {
            quote = ']';
        } else if (c == '(') {
            open = i;
            break;
        }
    }
    if (open == std::string_view::npos) return result;

    int depth = 0;
    quote = 0;
    size_t def_start = open + 1;
    std::vector<std::string_view> defs;
    size_t close = sql.size();
    for (size_t i = open; i < sql.size(); ++i) {
        char c = sql[i];
        if (quote) {
            if (c == quote) quote = 0;
            continue;
        }
        if (c == '\'' || c == '"' || c == '`') {
            quote = c;
        } else if (c == '[') {
            quote = ']';
        } else if (c == '(') {
            ++depth;
        } else if (c == ')') {
            --depth;
            if (depth == 0) {
                defs.push_back(sql.substr(def_start, i - def_start));
                close = i;
                break;
            }
        } else if (c == ',' && depth == 1) {
            defs.push_back(sql.substr(def_start, i - def_start));
            def_start = i + 1;
        }
    }
    if (upper_ascii(sql.substr(close)).find("WITHOUT ROWID") != std::string::npos)
        result.without_rowid = true;

    static const char* kConstraintStarters[] = {"CONSTRAINT", "PRIMARY", "UNIQUE",
                                                "CHECK", "FOREIGN"};
    for (std::string_view def : defs) {
        size_t i = 0;
        while (i < def.size() && std::isspace(static_cast<unsigned char>(def[i]))) ++i;
        if (i >= def.size()) continue;
        std::string name;
        char c = def[i];
        if (c == '"' || c == '`' || c == '\'' || c == '[') {
            char end_q = (c == '[') ? ']' : c;
            size_t j = i + 1;
            while (j < def.size() && def[j] != end_q) ++j;
            name.assign(def.begin() + static_cast<ptrdiff_t>(i) + 1,
                        def.begin() + static_cast<ptrdiff_t>(j));
        } else {
            size_t j = i;
            while (j < def.size() && is_ident_char(def[j])) ++j;
            name.assign(def.begin() + static_cast<ptrdiff_t>(i),
                        def.begin() + static_cast<ptrdiff_t>(j));
            std::string upper = upper_ascii(name);
            bool is_constraint = false;
            for (const char* kw : kConstraintStarters)
                if (upper == kw) is_constraint = true;
            if (is_constraint) break;  // column defs precede table constraints
        }
        std::string rest_upper = upper_ascii(def.substr(i + name.size()));
        if (rest_upper.find("INTEGER") != std::string::npos &&
            rest_upper.find("PRIMARY KEY") != std::string::npos)
            result.ipk_column = static_cast<int>(result.names.size());
        result.names.push_back(std::move(name));
    }
    return result;
}

}  // namespace detail

// ---- free-space diagnostic report ----

struct FreeSpaceReport {
    uint32_t freelist_declared = 0;   // header count
    uint32_t trunk_pages = 0;
    uint32_t leaf_pages = 0;
    uint32_t zeroed_leaf_pages = 0;
    std::vector<uint32_t> dirty_leaf_pages;   // freed pages with residual data
    uint32_t freeblocks = 0;
    uint32_t zeroed_freeblocks = 0;
    std::vector<uint32_t> dirty_freeblock_pages;

    bool all_wiped() const {
        return dirty_leaf_pages.empty() && dirty_freeblock_pages.empty();
    }
};

// ---- the image ----

class DbImage {
public:
    // Parses the header and walks sqlite_master. Throws BadMagic on a
    // non-SQLite image and UnsupportedFeature on journal modes or
    // encodings this parser does not handle.
    static DbImage open(Bytes image) {
        DbImage db;
        db.data_ = std::move(image);
        if (db.data_.size() < 512)
            throw TruncatedFile("image too small to be a database (" +
                                std::to_string(db.data_.size()) + " bytes)");
        if (std::memcmp(db.data_.data(), "SQLite format 3\0", 16) != 0)
            throw BadMagic("missing SQLite file magic");
        uint32_t page_size = read_be16(db.data_.data() + 16);
        if (page_size == 1) page_size = 65536;
        if (page_size < 512 || page_size > 65536 || (page_size & (page_size - 1)) != 0)
            throw ParseError("invalid page size in header");
        db.page_size_ = page_size;
        if (db.data_[18] > 1 || db.data_[19] > 1)
            throw UnsupportedFeature("WAL-mode databases are not supported");
        db.reserved_ = db.data_[20];
        if (db.page_size_ - db.reserved_ < 480)
            throw ParseError("usable page size below the format minimum");
        db.page_count_ = static_cast<uint32_t>(db.data_.size() / db.page_size_);
        uint32_t declared = read_be32(db.data_.data() + 28);
        if (declared != 0 && declared < db.page_count_) db.page_count_ = declared;
        if (db.page_count_ == 0) throw TruncatedFile("image holds no complete page");
        db.freelist_head_ = read_be32(db.data_.data() + 32);
        db.freelist_count_ = read_be32(db.data_.data() + 36);
        uint32_t encoding = read_be32(db.data_.data() + 56);
        if (encoding > 3) throw UnsupportedFeature("unknown text encoding in header");
        db.encoding_ = encoding == 0 ? 1 : static_cast<uint8_t>(encoding);
        db.load_schema();
        return db;
    }

    uint32_t page_size() const { return page_size_; }
    uint32_t usable_size() const { return page_size_ - reserved_; }
    uint32_t page_count() const { return page_count_; }
    uint8_t text_encoding() const { return encoding_; }
    const Bytes& bytes() const { return data_; }

    const std::vector<TableSchema>& tables() const { return tables_; }

    const TableSchema* find_table(std::string_view name) const {
        for (const auto& t : tables_)
            if (t.name == name) return &t;
        return nullptr;
    }

    bool has_table(std::string_view name) const { return find_table(name) != nullptr; }

    // In-order traversal of the table's b-tree; the callback sees rows in
    // strictly increasing rowid order. Returning false stops the scan.
    void for_each_row(std::string_view name,
                      const std::function<bool(Row&&)>& callback) const {
        const TableSchema* table = find_table(name);
        if (!table) throw NoSuchTable("no such table: " + std::string(name));
        if (table->is_virtual)
            throw UnsupportedFeature("virtual table cannot be scanned: " + table->name);
        if (table->without_rowid)
            throw UnsupportedFeature("WITHOUT ROWID table cannot be scanned: " +
                                     table->name);
        if (table->root_page == 0) return;
        bool keep_going = true;
        walk_table_btree(table->root_page, 0, [&](int64_t rowid, Bytes payload) {
            if (!keep_going) return;
            Row row = decode_record(rowid, payload, *table);
            keep_going = callback(std::move(row));
        });
    }

    std::vector<Row> read_table(std::string_view name) const {
        std::vector<Row> rows;
        for_each_row(name, [&](Row&& row) {
            rows.push_back(std::move(row));
            return true;
        });
        return rows;
    }

    ByteView page(uint32_t page_no) const {
        if (page_no == 0 || page_no > page_count_)
            throw ParseError("page number " + std::to_string(page_no) + " out of range");
        return ByteView(data_.data() + static_cast<size_t>(page_no - 1) * page_size_,
                        page_size_);
    }

    // Secure-deletion diagnostic: inspects freelist leaf pages and the
    // freeblock chains inside live b-tree pages for residual content.
    // Reports findings; recovery is out of scope by design.
    FreeSpaceReport check_zeroed() const {
        FreeSpaceReport report;
        report.freelist_declared = freelist_count_;
        uint32_t trunk = freelist_head_;
        std::vector<bool> seen(page_count_ + 1, false);
        while (trunk != 0 && trunk <= page_count_ && !seen[trunk]) {
            seen[trunk] = true;
            ++report.trunk_pages;
            ByteView tp = page(trunk);
            uint32_t next = read_be32(tp.data());
            uint32_t leaf_count = read_be32(tp.data() + 4);
            uint32_t max_leaves = (usable_size() - 8) / 4;
            if (leaf_count > max_leaves) break;  // corrupt trunk, stop politely
            for (uint32_t i = 0; i < leaf_count; ++i) {
                uint32_t leaf = read_be32(tp.data() + 8 + 4 * i);
                if (leaf == 0 || leaf > page_count_) continue;
                ++report.leaf_pages;
                ByteView lp = page(leaf);
                bool zeroed = std::all_of(lp.begin(), lp.end(),
                                          [](uint8_t b) { return b == 0; });
                if (zeroed)
                    ++report.zeroed_leaf_pages;
                else
                    report.dirty_leaf_pages.push_back(leaf);
            }
            trunk = next;
        }
        for (const auto& table : tables_) {
            if (table.root_page == 0 || table.is_virtual) continue;
            inspect_freeblocks(table.root_page, seen, report);
        }
        return report;
    }

private:
    void load_schema() {
        TableSchema master;
        master.name = "sqlite_master";
        master.root_page = 1;
        master.columns = {"type", "name", "tbl_name", "rootpage", "sql"};
        walk_table_btree(1, 0, [&](int64_t rowid, Bytes payload) {
            Row row = decode_record(rowid, payload, master);
            if (row.values.size() < 5) return;
            if (row.values[0].as_text() != "table") return;
            TableSchema table;
            table.name = row.values[1].as_text();
            table.root_page = static_cast<uint32_t>(row.values[3].as_int());
            table.create_sql = row.values[4].as_text();
            if (detail::upper_ascii(table.create_sql).find("CREATE VIRTUAL TABLE") !=
                std::string::npos) {
                table.is_virtual = true;
            } else {
                auto cols = detail::parse_create_table(table.create_sql);
                table.columns = std::move(cols.names);
                table.without_rowid = cols.without_rowid;
                table.ipk_column = cols.ipk_column;
            }
            tables_.push_back(std::move(table));
        });
    }

    struct PageHeader {
        uint8_t type = 0;
        uint16_t first_freeblock = 0;
        uint16_t cell_count = 0;
        uint32_t content_start = 0;
        uint32_t right_child = 0;
        size_t header_size = 0;
    };

    PageHeader parse_page_header(uint32_t page_no, ByteView p) const {
        size_t base = page_no == 1 ? 100 : 0;
        if (base + 8 > p.size()) throw CorruptCell(page_no, 0, "page header out of range");
        PageHeader h;
        h.type = p[base];
        h.first_freeblock = read_be16(p.data() + base + 1);
        h.cell_count = read_be16(p.data() + base + 3);
        h.content_start = read_be16(p.data() + base + 5);
        if (h.content_start == 0) h.content_start = 65536;
        h.header_size = (h.type == 0x02 || h.type == 0x05) ? 12 : 8;
        if (h.header_size == 12) {
            if (base + 12 > p.size())
                throw CorruptCell(page_no, 0, "interior header out of range");
            h.right_child = read_be32(p.data() + base + 8);
        }
        return h;
    }

    void walk_table_btree(uint32_t page_no, int depth,
                          const std::function<void(int64_t, Bytes)>& emit) const {
        if (depth > 40)
            throw CorruptCell(page_no, 0, "b-tree deeper than the format allows");
        ByteView p = page(page_no);
        size_t base = page_no == 1 ? 100 : 0;
        PageHeader header = parse_page_header(page_no, p);
        if (header.type != 0x05 && header.type != 0x0D)
            throw CorruptCell(page_no, 0,
                              "not a table b-tree page (type " +
                                  std::to_string(header.type) + ")");
        size_t ptr_array = base + header.header_size;
        if (ptr_array + 2u * header.cell_count > p.size())
            throw CorruptCell(page_no, 0, "cell pointer array out of range");

        for (uint16_t i = 0; i < header.cell_count; ++i) {
            uint32_t cell_off = read_be16(p.data() + ptr_array + 2 * i);
            if (cell_off >= p.size()) throw CorruptCell(page_no, i, "cell offset out of range");
            const uint8_t* cell = p.data() + cell_off;
            const uint8_t* end = p.data() + usable_size();
            if (header.type == 0x05) {
                if (cell + 4 > end) throw CorruptCell(page_no, i, "truncated interior cell");
                uint32_t child = read_be32(cell);
                walk_table_btree(child, depth + 1, emit);
            } else {
                auto [payload_len, n1] = read_varint(cell, end);
                if (n1 == 0) throw CorruptCell(page_no, i, "bad payload length varint");
                auto [rowid_raw, n2] = read_varint(cell + n1, end);
                if (n2 == 0) throw CorruptCell(page_no, i, "bad rowid varint");
                Bytes payload = assemble_payload(page_no, i, cell + n1 + n2, end,
                                                 payload_len);
                emit(static_cast<int64_t>(rowid_raw), std::move(payload));
            }
        }
        if (header.type == 0x05 && header.right_child != 0)
            walk_table_btree(header.right_child, depth + 1, emit);
    }

    // Inline/overflow split for table leaves: X = U-35,
    // M = ((U-12)*32)/255 - 23, K = M + (P-M) % (U-4).
    Bytes assemble_payload(uint32_t page_no, uint16_t cell_no, const uint8_t* inline_start,
                           const uint8_t* page_end, uint64_t payload_len) const {
        uint64_t usable = usable_size();
        uint64_t max_inline = usable - 35;
        if (payload_len > data_.size())
            throw CorruptCell(page_no, cell_no, "payload larger than the database");
        if (payload_len <= max_inline) {
            if (inline_start + payload_len > page_end)
                throw CorruptCell(page_no, cell_no, "inline payload out of range");
            return Bytes(inline_start, inline_start + payload_len);
        }
        uint64_t min_inline = (usable - 12) * 32 / 255 - 23;
        uint64_t k = min_inline + (payload_len - min_inline) % (usable - 4);
        uint64_t inline_len = k <= max_inline ? k : min_inline;
        if (inline_start + inline_len + 4 > page_end)
            throw CorruptCell(page_no, cell_no, "spilled payload out of range");
        Bytes payload(inline_start, inline_start + inline_len);
        payload.reserve(payload_len);
        uint32_t overflow = read_be32(inline_start + inline_len);
        uint64_t remaining = payload_len - inline_len;
        std::vector<bool> seen(page_count_ + 1, false);
        while (remaining > 0) {
            if (overflow == 0 || overflow > page_count_ || seen[overflow])
                throw CorruptCell(page_no, cell_no, "broken overflow chain");
            seen[overflow] = true;
            ByteView op = page(overflow);
            overflow = read_be32(op.data());
            uint64_t take = std::min<uint64_t>(remaining, usable - 4);
            payload.insert(payload.end(), op.begin() + 4,
                           op.begin() + 4 + static_cast<ptrdiff_t>(take));
            remaining -= take;
        }
        return payload;
    }

    Row decode_record(int64_t rowid, ByteView payload, const TableSchema& table) const {
        Row row;
        row.rowid = rowid;
        const uint8_t* start = payload.data();
        const uint8_t* end = payload.data() + payload.size();
        auto [header_len, n] = read_varint(start, end);
        if (n == 0 || header_len > payload.size())
            throw ParseError("record header overruns payload");
        const uint8_t* type_ptr = start + n;
        const uint8_t* header_end = start + header_len;
        const uint8_t* body = header_end;

        std::vector<uint64_t> serial_types;
        while (type_ptr < header_end) {
            auto [serial, sn] = read_varint(type_ptr, header_end);
            if (sn == 0) throw ParseError("bad serial type varint");
            serial_types.push_back(serial);
            type_ptr += sn;
        }
        for (uint64_t serial : serial_types) {
            row.values.push_back(decode_value(serial, body, end));
        }
        // default-fill: records written before an ALTER TABLE ADD COLUMN
        // are shorter than the schema
        while (row.values.size() < table.columns.size()) row.values.push_back(Value::null());
        if (table.ipk_column >= 0 &&
            static_cast<size_t>(table.ipk_column) < row.values.size() &&
            row.values[static_cast<size_t>(table.ipk_column)].is_null())
            row.values[static_cast<size_t>(table.ipk_column)] = Value::integer(rowid);
        return row;
    }

    Value decode_value(uint64_t serial, const uint8_t*& body, const uint8_t* end) const {
        auto need = [&](size_t len) {
            if (body + len > end) throw ParseError("record body overruns payload");
        };
        switch (serial) {
            case 0: return Value::null();
            case 1: case 2: case 3: case 4: case 5: case 6: {
                static constexpr size_t kWidth[] = {0, 1, 2, 3, 4, 6, 8};
                size_t len = kWidth[serial];
                need(len);
                int64_t v = (body[0] & 0x80) ? -1 : 0;  // sign-extend
                for (size_t i = 0; i < len; ++i) v = (v << 8) | body[i];
                body += len;
                return Value::integer(v);
            }
            case 7: {
                need(8);
                uint64_t bits = 0;
                for (size_t i = 0; i < 8; ++i) bits = (bits << 8) | body[i];
                body += 8;
                double d;
                std::memcpy(&d, &bits, sizeof d);
                return Value::real(d);
            }
            case 8: return Value::integer(0);
            case 9: return Value::integer(1);
            case 10: case 11:
                throw UnsupportedFeature("reserved serial type in record");
            default: {
                uint64_t len = (serial - (serial % 2 == 0 ? 12 : 13)) / 2;
                need(len);
                const uint8_t* at = body;
                body += len;
                if (serial % 2 == 0)
                    return Value::blob(Bytes(at, at + len));
                if (encoding_ == 2 || encoding_ == 3)
                    return Value::text(
                        detail::utf16_to_utf8(ByteView(at, len), encoding_ == 2));
                return Value::text(std::string(at, at + len));
            }
        }
    }

    void inspect_freeblocks(uint32_t page_no, std::vector<bool>& seen,
                            FreeSpaceReport& report) const {
        if (page_no == 0 || page_no > page_count_ || seen[page_no]) return;
        seen[page_no] = true;
        ByteView p = page(page_no);
        PageHeader header;
        try {
            header = parse_page_header(page_no, p);
        } catch (const Error&) {
            return;
        }
        if (header.type != 0x05 && header.type != 0x0D) return;

        uint32_t fb = header.first_freeblock;
        int guard = 0;
        while (fb != 0 && fb + 4 <= usable_size() && ++guard < 10000) {
            uint16_t next = read_be16(p.data() + fb);
            uint16_t size = read_be16(p.data() + fb + 2);
            if (size < 4 || fb + size > usable_size()) break;
            ++report.freeblocks;
            bool zeroed = std::all_of(p.begin() + fb + 4, p.begin() + fb + size,
                                      [](uint8_t b) { return b == 0; });
            if (zeroed)
                ++report.zeroed_freeblocks;
            else if (report.dirty_freeblock_pages.empty() ||
                     report.dirty_freeblock_pages.back() != page_no)
                report.dirty_freeblock_pages.push_back(page_no);
            fb = next;
        }
        if (header.type == 0x05) {
            size_t base = page_no == 1 ? 100 : 0;
            for (uint16_t i = 0; i < header.cell_count; ++i) {
                uint32_t cell_off = read_be16(p.data() + base + 12 + 2 * i);
                if (cell_off + 4 <= p.size())
                    inspect_freeblocks(read_be32(p.data() + cell_off), seen, report);
            }
            inspect_freeblocks(header.right_child, seen, report);
        }
    }

    Bytes data_;
    uint32_t page_size_ = 0;
    uint32_t reserved_ = 0;
    uint32_t page_count_ = 0;
    uint32_t freelist_head_ = 0;
    uint32_t freelist_count_ = 0;
    uint8_t encoding_ = 1;
    std::vector<TableSchema> tables_;
};

inline DbImage open_image(Bytes image) { return DbImage::open(std::move(image)); }

}  // namespace csf::sqlite
