#include <catch2/catch_amalgamated.hpp>

#include "csf/fixtures.hpp"
#include "csf/sqlite_reader.hpp"
#include "support/ref_engine.hpp"
#include "support/temp_dir.hpp"

using namespace csf;
using namespace csf::sqlite;

TEST_CASE("varint decode/encode round trip", "[sqlite]") {
    // every byte-length boundary plus a random sweep
    std::vector<uint64_t> cases = {0,
                                   1,
                                   127,
                                   128,
                                   16383,
                                   16384,
                                   (1ull << 21) - 1,
                                   1ull << 21,
                                   (1ull << 28) - 1,
                                   1ull << 28,
                                   (1ull << 35) - 1,
                                   1ull << 35,
                                   (1ull << 42) - 1,
                                   1ull << 42,
                                   (1ull << 49) - 1,
                                   1ull << 49,
                                   (1ull << 56) - 1,
                                   1ull << 56,
                                   UINT64_MAX};
    crypto::DeterministicRng rng(13);
    for (int i = 0; i < 500; ++i) cases.push_back(rng.next_u64() >> rng.below(64));

    for (uint64_t value : cases) {
        uint8_t buf[9];
        size_t len = write_varint(buf, value);
        auto [decoded, decoded_len] = read_varint(buf, buf + sizeof buf);
        CHECK(decoded == value);
        CHECK(decoded_len == static_cast<int>(len));
    }
    // truncated input yields length 0, not a bogus value
    uint8_t cont[2] = {0x80, 0x80};
    CHECK(read_varint(cont, cont + 2).second == 0);
}

TEST_CASE("open parses header and schema", "[sqlite]") {
    testsupport::TempDir dir;
    auto path = dir / "schema.db";
    fixtures::author_plain_db(path, 1024, 0, [](fixtures::SqliteDb& db) {
        db.exec("CREATE TABLE alpha (x INTEGER PRIMARY KEY, y TEXT, z BLOB);");
        db.exec("CREATE TABLE beta (a, b, c, PRIMARY KEY (a));");
        db.exec("CREATE INDEX beta_idx ON beta (b);");
        db.exec("CREATE VIEW v AS SELECT x FROM alpha;");
    });
    DbImage img = DbImage::open(load_file(path));
    CHECK(img.page_size() == 1024);
    REQUIRE(img.find_table("alpha"));
    REQUIRE(img.find_table("beta"));
    CHECK_FALSE(img.find_table("beta_idx"));  // indexes are not tables
    CHECK_FALSE(img.find_table("v"));         // views are not tables
    CHECK(img.find_table("alpha")->columns ==
          std::vector<std::string>{"x", "y", "z"});
    CHECK(img.find_table("alpha")->ipk_column == 0);
    CHECK(img.find_table("beta")->columns == std::vector<std::string>{"a", "b", "c"});
    CHECK(img.find_table("beta")->ipk_column == -1);
}

TEST_CASE("corrupted magic is rejected explicitly", "[sqlite]") {
    testsupport::TempDir dir;
    auto path = dir / "magic.db";
    fixtures::author_plain_db(path, 1024, 0,
                              [](fixtures::SqliteDb& db) { db.exec("CREATE TABLE t (a);"); });
    Bytes data = load_file(path);
    data[0] ^= 0xFF;
    CHECK_THROWS_AS(DbImage::open(std::move(data)), BadMagic);
}

TEST_CASE("empty files and empty schemas", "[sqlite]") {
    CHECK_THROWS_AS(DbImage::open(Bytes{}), TruncatedFile);

    testsupport::TempDir dir;
    auto path = dir / "empty.db";
    // a database with no tables at all still has a valid page 1
    fixtures::author_plain_db(path, 1024, 0, [](fixtures::SqliteDb& db) {
        db.exec("CREATE TABLE scratch (a); DROP TABLE scratch;");
    });
    DbImage img = DbImage::open(load_file(path));
    CHECK(img.tables().empty());
    CHECK_THROWS_AS(img.read_table("scratch"), NoSuchTable);
}

TEST_CASE("wal-mode databases are refused, not misparsed", "[sqlite]") {
    testsupport::TempDir dir;
    auto path = dir / "wal.db";
    {
        fixtures::SqliteDb db(path);
        db.exec("PRAGMA journal_mode=WAL;");
        db.exec("CREATE TABLE t (a);");
        db.insert("INSERT INTO t VALUES (1)", {});
    }
    CHECK_THROWS_AS(DbImage::open(load_file(path)), UnsupportedFeature);
}

TEST_CASE("10k rows stream in strictly increasing rowid order", "[sqlite]") {
    testsupport::TempDir dir;
    auto path = dir / "big.db";
    fixtures::author_plain_db(path, 1024, 0, [](fixtures::SqliteDb& db) {
        db.exec("CREATE TABLE big (n INTEGER PRIMARY KEY, label TEXT);");
        db.exec("BEGIN;");
        for (int i = 1; i <= 10000; ++i)
            db.insert("INSERT INTO big VALUES (?, ?)",
                      {fixtures::SqliteDb::Param::integer(i),
                       fixtures::SqliteDb::Param::text("row-" + std::to_string(i))});
        db.exec("COMMIT;");
    });
    DbImage img = DbImage::open(load_file(path));
    int64_t previous = 0;
    size_t count = 0;
    img.for_each_row("big", [&](Row&& row) {
        CHECK(row.rowid > previous);
        previous = row.rowid;
        ++count;
        return true;
    });
    CHECK(count == 10000);
    // the interior pages force multi-level traversal at page size 1024
    CHECK(img.page_count() > 100);
}

TEST_CASE("large blobs round trip through overflow chains", "[sqlite]") {
    testsupport::TempDir dir;
    auto path = dir / "blob.db";
    crypto::DeterministicRng rng(21);
    Bytes big_blob = rng.bytes(100 * 1024);
    Bytes small_blob = rng.bytes(40);
    fixtures::author_plain_db(path, 1024, 0, [&](fixtures::SqliteDb& db) {
        db.exec("CREATE TABLE blobs (_id INTEGER PRIMARY KEY, data BLOB);");
        db.insert("INSERT INTO blobs VALUES (1, ?)",
                  {fixtures::SqliteDb::Param::blob(big_blob)});
        db.insert("INSERT INTO blobs VALUES (2, ?)",
                  {fixtures::SqliteDb::Param::blob(small_blob)});
    });
    DbImage img = DbImage::open(load_file(path));
    auto rows = img.read_table("blobs");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].values[1].as_blob() == big_blob);  // byte-exact through overflow
    CHECK(rows[1].values[1].as_blob() == small_blob);
}

TEST_CASE("integer primary key aliases the rowid", "[sqlite]") {
    testsupport::TempDir dir;
    auto path = dir / "ipk.db";
    fixtures::author_plain_db(path, 1024, 0, [](fixtures::SqliteDb& db) {
        db.exec("CREATE TABLE t (_id INTEGER PRIMARY KEY, v TEXT);");
        db.exec("INSERT INTO t VALUES (42, 'x'), (99, 'y');");
    });
    DbImage img = DbImage::open(load_file(path));
    auto rows = img.read_table("t");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].values[0].as_int() == 42);  // stored as NULL, surfaced as rowid
    CHECK(rows[1].values[0].as_int() == 99);
}

TEST_CASE("all value types decode", "[sqlite]") {
    testsupport::TempDir dir;
    auto path = dir / "types.db";
    fixtures::author_plain_db(path, 1024, 0, [](fixtures::SqliteDb& db) {
        db.exec("CREATE TABLE t (a, b, c, d, e, f);");
        db.exec("INSERT INTO t VALUES (NULL, -1, 0, 1, 3.5, 'text');");
        db.exec("INSERT INTO t VALUES (9223372036854775807, -9223372036854775808,"
                " 65536, x'00ff10', 2.0, '');");
    });
    DbImage img = DbImage::open(load_file(path));
    auto rows = img.read_table("t");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].values[0].is_null());
    CHECK(rows[0].values[1].as_int() == -1);
    CHECK(rows[0].values[2].as_int() == 0);
    CHECK(rows[0].values[3].as_int() == 1);
    CHECK(rows[0].values[4].real_value == 3.5);
    CHECK(rows[0].values[5].as_text() == "text");
    CHECK(rows[1].values[0].as_int() == INT64_MAX);
    CHECK(rows[1].values[1].as_int() == INT64_MIN);
    CHECK(rows[1].values[2].as_int() == 65536);
    CHECK(rows[1].values[3].as_blob() == Bytes{0x00, 0xFF, 0x10});
}

TEST_CASE("utf-16 databases convert text to utf-8 at the row boundary", "[sqlite]") {
    testsupport::TempDir dir;
    auto path = dir / "utf16.db";
    {
        fixtures::SqliteDb db(path);
        db.exec("PRAGMA encoding='UTF-16le';");
        db.exec("CREATE TABLE t (s TEXT);");
        db.insert("INSERT INTO t VALUES (?)",
                  {fixtures::SqliteDb::Param::text("p\xC3\xA4ss wörd ✓")});
    }
    DbImage img = DbImage::open(load_file(path));
    CHECK(img.text_encoding() == 2);
    auto rows = img.read_table("t");
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].values[0].as_text() == "p\xC3\xA4ss wörd ✓");
}

TEST_CASE("row multisets match the reference reader", "[sqlite]") {
    testsupport::TempDir dir;
    auto path = dir / "oracle.db";
    crypto::DeterministicRng rng(17);
    fixtures::author_plain_db(path, 1024, 0, [&](fixtures::SqliteDb& db) {
        db.exec("CREATE TABLE mixed (_id INTEGER PRIMARY KEY, t TEXT, n INTEGER, r REAL,"
                " b BLOB);");
        db.exec("BEGIN;");
        for (int i = 1; i <= 300; ++i) {
            Bytes blob = rng.bytes(rng.below(400));
            db.insert("INSERT INTO mixed VALUES (?,?,?,?,?)",
                      {fixtures::SqliteDb::Param::integer(i),
                       fixtures::SqliteDb::Param::text("value " + std::to_string(i)),
                       fixtures::SqliteDb::Param::integer(static_cast<int64_t>(
                           rng.next_u64())),
                       fixtures::SqliteDb::Param::integer(i % 7),
                       fixtures::SqliteDb::Param::blob(blob)});
        }
        db.exec("COMMIT;");
    });

    DbImage img = DbImage::open(load_file(path));
    testsupport::RefDb ref(path);
    CHECK(testsupport::canonical_rows(img, "mixed") == ref.canonical_rows("mixed"));
}
