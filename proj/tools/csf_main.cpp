/*
 * csf — command-line front end for the toolkit.
 *
 * Subcommands:
 *   decrypt-key    unwrap the database key from a preferences file
 *   decrypt-db     decrypt an encrypted database to a plaintext SQLite file
 *   report         accounts / contacts / messages / files reports (JSON, CSV)
 *   extract-files  reassemble virtual-disk files + manifest
 *   scan-memory    carve passphrase candidates from a memory dump
 *   check-zeroed   freed-page / freeblock wipe diagnostic
 *   make-fixture   deterministic test data (prefs + databases + dump)
 *
 * Exit codes are a stable contract: 0 success, 1 input error,
 * 2 cryptographic failure, 3 partial extraction.
 */

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "csf/csf.hpp"
#include "csf/fixtures.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitCryptoError = 2;
constexpr int kExitPartial = 3;

std::string read_passphrase(const std::string& flag_value, const std::string& file_path) {
    if (!flag_value.empty()) return flag_value;
    if (!file_path.empty()) {
        csf::Bytes raw = csf::load_file(file_path);
        std::string text(raw.begin(), raw.end());
        while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
        return text;
    }
    // fall back to reading one line from stdin so the secret stays out of
    // the shell history
    std::cerr << "passphrase: " << std::flush;
    std::string text;
    if (!std::getline(std::cin, text))
        throw csf::ParseError("no passphrase supplied (use --passphrase or --passphrase-file)");
    return text;
}

struct KeyOptions {
    std::string key_hex;
    std::string key_text;
    uint32_t page_size = 0;  // 0 = profile default
    uint32_t kdf_iterations = 64000;
    bool media_recipe = false;

    bool has_key() const { return !key_hex.empty() || !key_text.empty(); }

    csf::cipher::CipherProfile profile() const {
        uint32_t effective_page = page_size ? page_size : (media_recipe ? 8192 : 1024);
        if (media_recipe) {
            // media recipe: textual key; a 64-char hex key is truncated to
            // its leftmost 32 characters automatically
            std::string text = key_text;
            if (text.empty()) {
                if (key_hex.size() != 64)
                    throw csf::BadKeyLength("--key-hex must be 64 hex characters");
                std::string lower = key_hex;
                for (char& c : lower)
                    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
                text = lower.substr(0, 32);
            }
            return csf::cipher::CipherProfile::textual(text, effective_page, kdf_iterations);
        }
        if (!key_hex.empty())
            return csf::cipher::CipherProfile::raw_hex(key_hex, effective_page);
        return csf::cipher::CipherProfile::textual(key_text, effective_page, kdf_iterations);
    }
};

void add_key_options(CLI::App* cmd, KeyOptions& opts) {
    cmd->add_option("--key-hex", opts.key_hex, "raw key as 64 hex characters (x'..' form)");
    cmd->add_option("--key-text", opts.key_text, "textual key (quoted PRAGMA form)");
    cmd->add_option("--page-size", opts.page_size, "cipher page size (default 1024, media 8192)");
    cmd->add_option("--kdf-iter", opts.kdf_iterations, "KDF iterations for textual keys")
        ->default_val(64000);
}

// Accepts either an already-decrypted SQLite file or an encrypted one
// (key options required for the latter).
csf::Bytes load_plain_image(const fs::path& path, const KeyOptions& key) {
    csf::Bytes data = csf::load_file(path);
    if (data.size() >= 16 && std::memcmp(data.data(), "SQLite format 3\0", 16) == 0)
        return data;
    if (!key.has_key())
        throw csf::ParseError(path.string() +
                              " is encrypted; supply --key-hex or --key-text");
    return csf::cipher::decrypt_database(data, key.profile());
}

csf::recon::ReportMeta meta_for(const std::vector<fs::path>& inputs) {
    csf::recon::ReportMeta meta;
    for (const auto& path : inputs) {
        csf::Bytes data = csf::load_file(path);
        meta.inputs.push_back({path.string(), csf::to_hex(csf::crypto::sha256(data))});
    }
    return meta;
}

void write_text_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty() || out_path == "-") {
        std::cout << content;
        if (!content.empty() && content.back() != '\n') std::cout << '\n';
        return;
    }
    csf::save_file(out_path, csf::as_bytes_view(content));
}

// ---- subcommand bodies ----

int cmd_decrypt_key(const std::string& prefs_path, const std::string& passphrase,
                    const std::string& passphrase_file,
                    const std::optional<std::string>& entry) {
    csf::Bytes xml = csf::load_file(prefs_path);
    csf::vault::SerializedSecret secret = csf::vault::parse_serialized_secret(
        csf::ByteView(xml), entry);
    csf::vault::Passphrase pass(read_passphrase(passphrase, passphrase_file));
    csf::vault::DatabaseKey key = csf::vault::unwrap_database_key(secret, pass);
    std::cout << key.hex() << "\n";
    return kExitOk;
}

int cmd_decrypt_db(const std::string& in_path, const std::string& out_path,
                   const KeyOptions& key) {
    csf::Bytes data = csf::load_file(in_path);
    csf::Bytes image = csf::cipher::decrypt_database(data, key.profile());
    // prove the image parses before declaring success
    csf::sqlite::DbImage img = csf::sqlite::DbImage::open(image);
    csf::save_file(out_path, image);
    std::cerr << "decrypted " << in_path << " -> " << out_path << " ("
              << img.page_count() << " pages, " << img.tables().size() << " tables)\n";
    return kExitOk;
}

int cmd_report(const std::string& db_path, const std::string& media_path,
               const std::string& kind, const std::string& format,
               const std::string& out_path, const KeyOptions& imps_key,
               const KeyOptions& media_key, const csf::recon::ChronologyFilter& filter,
               const std::string& domain_setting, bool show_credentials) {
    std::vector<fs::path> inputs{db_path};
    csf::Bytes image = load_plain_image(db_path, imps_key);
    csf::sqlite::DbImage img = csf::sqlite::DbImage::open(std::move(image));
    csf::model::ArtifactDb db = csf::model::load_artifact_db(img);

    std::optional<csf::model::VfsDb> vfs;
    if (!media_path.empty()) {
        inputs.push_back(media_path);
        csf::sqlite::DbImage media_img =
            csf::sqlite::DbImage::open(load_plain_image(media_path, media_key));
        vfs = csf::model::load_vfs_db(media_img);
    }
    csf::recon::ReportMeta meta = meta_for(inputs);

    Json json;
    std::string csv;
    if (kind == "accounts") {
        auto reports = csf::recon::build_account_reports(db, domain_setting);
        if (!show_credentials)
            std::cerr << "accounts: " << reports.size()
                      << " (credentials in report; use --show-credentials to echo here)\n";
        else
            for (const auto& r : reports)
                std::cerr << "account " << r.local_name << " pw=" << r.password << "\n";
        json = csf::recon::to_json(reports, meta);
        csv = csf::recon::to_csv(reports);
    } else if (kind == "contacts") {
        auto reports = csf::recon::build_contact_reports(db);
        json = csf::recon::to_json(reports, meta);
        csv = csf::recon::to_csv(reports);
    } else if (kind == "messages") {
        auto entries = csf::recon::build_chronology(db, filter);
        json = csf::recon::to_json(entries, meta);
        csv = csf::recon::to_csv(entries);
    } else if (kind == "files") {
        auto correlation =
            csf::recon::correlate_file_transfers(db, vfs ? &*vfs : nullptr);
        json = csf::recon::to_json(correlation, meta);
        csv = csf::recon::to_csv(correlation);
    } else {
        throw csf::ParseError("unknown report kind: " + kind);
    }
    write_text_output(out_path, format == "csv" ? csv : json.dump(2) + "\n");
    return kExitOk;
}

int cmd_extract_files(const std::string& media_path, const std::string& imps_path,
                      const std::string& out_dir, const KeyOptions& media_key,
                      const KeyOptions& imps_key) {
    std::vector<fs::path> inputs{media_path};
    csf::sqlite::DbImage media_img =
        csf::sqlite::DbImage::open(load_plain_image(media_path, media_key));
    csf::model::VfsDb vfs = csf::model::load_vfs_db(media_img);

    fs::create_directories(out_dir);
    csf::vfs::ExtractionResult result = csf::vfs::extract_all(vfs, out_dir);

    // correlate with the message database when supplied
    Json correlation = Json::array();
    if (!imps_path.empty()) {
        inputs.push_back(imps_path);
        csf::sqlite::DbImage imps_img =
            csf::sqlite::DbImage::open(load_plain_image(imps_path, imps_key));
        csf::model::ArtifactDb db = csf::model::load_artifact_db(imps_img);
        auto corr = csf::recon::correlate_file_transfers(db, &vfs);
        correlation = csf::recon::to_json(corr, {})["rows"];
    }

    Json manifest;
    manifest["tool"] = std::string(csf::kToolName) + " " + csf::kToolVersion;
    Json inputs_json = Json::array();
    for (const auto& input : meta_for(inputs).inputs)
        inputs_json.push_back(Json{{"path", input.path}, {"sha256", input.sha256}});
    manifest["inputs"] = inputs_json;
    Json entries = Json::array();
    for (const auto& entry : result.entries) {
        entries.push_back(Json{{"vfs_path", entry.vfs_path},
                               {"type", entry.type},
                               {"output_path", entry.output_path},
                               {"size", entry.size},
                               {"block_size", entry.block_size},
                               {"ctime_utc", entry.ctime_utc},
                               {"mtime_utc", entry.mtime_utc},
                               {"atime_utc", entry.atime_utc},
                               {"sha256", entry.sha256},
                               {"status", entry.status}});
    }
    manifest["entries"] = entries;
    if (!imps_path.empty()) manifest["message_correlation"] = correlation;
    manifest["extracted"] = result.extracted;
    manifest["failed"] = result.failed;
    csf::save_file(fs::path(out_dir) / "manifest.json",
                   csf::as_bytes_view(manifest.dump(2) + "\n"));

    std::cerr << "extracted " << result.extracted << " file(s), " << result.failed
              << " failure(s); manifest written\n";
    return result.complete() ? kExitOk : kExitPartial;
}

int cmd_scan_memory(const std::string& dump_path, const std::string& prefs_path,
                    const std::string& db_path, const std::optional<std::string>& entry,
                    bool loose_signature, size_t max_len, const std::string& json_out,
                    uint32_t db_page_size) {
    csf::Bytes xml = csf::load_file(prefs_path);
    csf::vault::SerializedSecret secret =
        csf::vault::parse_serialized_secret(csf::ByteView(xml), entry);

    csf::memscan::SignaturePattern sig = loose_signature
                                             ? csf::memscan::SignaturePattern::relaxed()
                                             : csf::memscan::SignaturePattern::exact();
    csf::memscan::ScanConfig cfg;
    cfg.max_len = max_len;
    auto candidates = csf::memscan::scan_dump(dump_path, sig, cfg);
    size_t raw_count = candidates.size();
    candidates = csf::memscan::prune_candidates(std::move(candidates));

    std::optional<csf::memscan::DbProbe> probe;
    if (!db_path.empty()) {
        csf::Bytes head = csf::load_file(db_path);
        probe = csf::memscan::DbProbe{std::move(head), db_page_size};
    }
    auto best = csf::memscan::validate_candidates(candidates, secret, probe);

    Json out;
    out["tool"] = std::string(csf::kToolName) + " " + csf::kToolVersion;
    out["dump"] = dump_path;
    out["signature"] = loose_signature ? "relaxed" : "exact";
    out["candidates_seen"] = raw_count;
    Json cand_json = Json::array();
    for (const auto& c : candidates) {
        cand_json.push_back(Json{{"text", c.text},
                                 {"occurrences", c.occurrence_count()},
                                 {"offsets", c.offsets},
                                 {"validation", csf::memscan::validation_name(c.validation)}});
    }
    out["candidates"] = cand_json;
    if (best) {
        out["passphrase"] = best->text;
        out["validation"] = csf::memscan::validation_name(best->validation);
        csf::vault::DatabaseKey key = csf::vault::unwrap_database_key(
            secret, csf::vault::Passphrase(best->text));
        out["key_hex"] = key.hex();
        std::cerr << "recovered passphrase (" << csf::memscan::validation_name(best->validation)
                  << "), key follows on stdout\n";
    }
    write_text_output(json_out, out.dump(2) + "\n");
    if (!best) {
        std::cerr << "no candidate passphrase validated\n";
        return kExitCryptoError;
    }
    return kExitOk;
}

int cmd_check_zeroed(const std::string& in_path, const KeyOptions& key) {
    csf::Bytes image = load_plain_image(in_path, key);
    csf::sqlite::DbImage img = csf::sqlite::DbImage::open(std::move(image));
    csf::sqlite::FreeSpaceReport report = img.check_zeroed();
    Json out;
    out["input"] = in_path;
    out["freelist_pages_declared"] = report.freelist_declared;
    out["freelist_trunk_pages"] = report.trunk_pages;
    out["freelist_leaf_pages"] = report.leaf_pages;
    out["freelist_leaf_pages_zeroed"] = report.zeroed_leaf_pages;
    out["dirty_leaf_pages"] = report.dirty_leaf_pages;
    out["freeblocks"] = report.freeblocks;
    out["freeblocks_zeroed"] = report.zeroed_freeblocks;
    out["dirty_freeblock_pages"] = report.dirty_freeblock_pages;
    out["freed_content_wiped"] = report.all_wiped();
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

int cmd_make_fixture(const std::string& scenario, uint64_t seed,
                     const std::string& passphrase, uint32_t ic, const std::string& out_dir,
                     bool with_dump, size_t dump_size) {
    csf::fixtures::FixtureSpec spec;
    spec.scenario = csf::fixtures::scenario_from_name(scenario);
    spec.seed = seed;
    spec.passphrase = passphrase;
    spec.iteration_count = ic;
    spec.out_dir = out_dir;
    spec.with_dump = with_dump;
    spec.dump_size = dump_size;
    csf::fixtures::FixtureSet set = csf::fixtures::make_fixture(spec);

    Json manifest;
    manifest["tool"] = std::string(csf::kToolName) + " " + csf::kToolVersion;
    manifest["scenario"] = scenario;
    manifest["seed"] = seed;
    manifest["iteration_count"] = ic;
    manifest["key_hex"] = set.key.hex();
    manifest["textual_media_key"] = set.textual_key;
    manifest["prefs_xml"] = set.prefs_xml.string();
    manifest["impsenc_db"] = set.impsenc_db.string();
    manifest["media_db"] = set.media_db.string();
    if (!set.dump.empty()) manifest["dump"] = set.dump.string();
    Json planted = Json::array();
    for (const auto& [path, content] : set.planted_files)
        planted.push_back(Json{{"vfs_path", path},
                               {"size", content.size()},
                               {"sha256", csf::to_hex(csf::crypto::sha256(content))}});
    manifest["planted_files"] = planted;
    csf::save_file(fs::path(out_dir) / "fixture-manifest.json",
                   csf::as_bytes_view(manifest.dump(2) + "\n"));
    std::cerr << "fixture written to " << out_dir << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"forensic toolkit for the encrypted messenger artifact set"};
    app.set_version_flag("--version", std::string(csf::kToolName) + " " + csf::kToolVersion);
    app.set_config("--config", "", "read option defaults from an INI file");
    app.require_subcommand(1);

    int exit_code = kExitOk;
    std::function<int()> action;

    // decrypt-key
    auto* dk = app.add_subcommand("decrypt-key",
                                  "unwrap the database key from a preferences file");
    struct {
        std::string prefs, passphrase, passphrase_file, entry;
    } dk_opts;
    dk->add_option("--prefs", dk_opts.prefs, "preferences XML file")->required();
    dk->add_option("--passphrase", dk_opts.passphrase, "passphrase (prefer --passphrase-file)");
    dk->add_option("--passphrase-file", dk_opts.passphrase_file,
                   "file containing the passphrase");
    dk->add_option("--entry", dk_opts.entry, "preferences entry name holding the secret");
    dk->callback([&] {
        action = [&] {
            return cmd_decrypt_key(dk_opts.prefs, dk_opts.passphrase, dk_opts.passphrase_file,
                                   dk_opts.entry.empty()
                                       ? std::nullopt
                                       : std::optional<std::string>(dk_opts.entry));
        };
    });

    // decrypt-db
    auto* dd = app.add_subcommand("decrypt-db", "decrypt a database to a plaintext SQLite file");
    struct {
        std::string in, out;
        KeyOptions key;
        bool media = false;
    } dd_opts;
    dd->add_option("--in", dd_opts.in, "encrypted database")->required();
    dd->add_option("--out", dd_opts.out, "plaintext output path")->required();
    add_key_options(dd, dd_opts.key);
    dd->add_flag("--media", dd_opts.media,
                 "media recipe: textual key, page size 8192 (hex keys truncated to 32 chars)");
    dd->callback([&] {
        action = [&] {
            dd_opts.key.media_recipe = dd_opts.media;
            if (!dd_opts.key.has_key())
                throw csf::ParseError("supply --key-hex or --key-text");
            return cmd_decrypt_db(dd_opts.in, dd_opts.out, dd_opts.key);
        };
    });

    // report
    auto* rp = app.add_subcommand("report", "emit accounts/contacts/messages/files reports");
    struct {
        std::string db, media_db, kind, format = "json", out;
        KeyOptions imps_key, media_key;
        bool media_key_from_hex = true;
        int64_t account = -1, contact = -1, since = -1, until = -1;
        std::string domain_setting = csf::recon::kDefaultDomainSetting;
        bool show_credentials = false;
    } rp_opts;
    rp->add_option("kind", rp_opts.kind, "accounts|contacts|messages|files")->required();
    rp->add_option("--db", rp_opts.db, "main database (plaintext or encrypted)")->required();
    rp->add_option("--media-db", rp_opts.media_db, "media database (for the files report)");
    rp->add_option("--format", rp_opts.format, "json|csv")->default_val("json");
    rp->add_option("--out", rp_opts.out, "output file (default stdout)");
    add_key_options(rp, rp_opts.imps_key);
    rp->add_option("--media-key-text", rp_opts.media_key.key_text,
                   "textual key for the media database (defaults to the truncated raw key)");
    rp->add_option("--account", rp_opts.account, "filter: account id");
    rp->add_option("--contact", rp_opts.contact, "filter: contact id");
    rp->add_option("--since", rp_opts.since, "filter: epoch milliseconds lower bound");
    rp->add_option("--until", rp_opts.until, "filter: epoch milliseconds upper bound");
    rp->add_option("--domain-setting", rp_opts.domain_setting,
                   "provider setting name carrying the account domain");
    rp->add_flag("--show-credentials", rp_opts.show_credentials,
                 "echo recovered credentials on the console");
    rp->callback([&] {
        action = [&] {
            csf::recon::ChronologyFilter filter;
            if (rp_opts.account >= 0) filter.account_id = rp_opts.account;
            if (rp_opts.contact >= 0) filter.contact_id = rp_opts.contact;
            if (rp_opts.since >= 0) filter.since_ms = rp_opts.since;
            if (rp_opts.until >= 0) filter.until_ms = rp_opts.until;
            KeyOptions media_key = rp_opts.media_key;
            media_key.media_recipe = true;
            if (media_key.key_text.empty() && !rp_opts.imps_key.key_hex.empty())
                media_key.key_hex = rp_opts.imps_key.key_hex;
            return cmd_report(rp_opts.db, rp_opts.media_db, rp_opts.kind, rp_opts.format,
                              rp_opts.out, rp_opts.imps_key, media_key, filter,
                              rp_opts.domain_setting, rp_opts.show_credentials);
        };
    });

    // extract-files
    auto* ef = app.add_subcommand("extract-files",
                                  "reassemble virtual-disk files and write a manifest");
    struct {
        std::string media_db, imps_db, out;
        KeyOptions media_key, imps_key;
    } ef_opts;
    ef->add_option("--media-db", ef_opts.media_db, "media database")->required();
    ef->add_option("--imps-db", ef_opts.imps_db, "main database for mime/date correlation");
    ef->add_option("--out", ef_opts.out, "output directory")->required();
    add_key_options(ef, ef_opts.media_key);
    ef->add_option("--imps-key-hex", ef_opts.imps_key.key_hex,
                   "raw key for the main database (64 hex chars)");
    ef->callback([&] {
        action = [&] {
            ef_opts.media_key.media_recipe = true;
            if (ef_opts.imps_key.key_hex.empty())
                ef_opts.imps_key.key_hex = ef_opts.media_key.key_hex;
            return cmd_extract_files(ef_opts.media_db, ef_opts.imps_db, ef_opts.out,
                                     ef_opts.media_key, ef_opts.imps_key);
        };
    });

    // scan-memory
    auto* sm = app.add_subcommand("scan-memory",
                                  "carve passphrase candidates from a memory dump");
    struct {
        std::string dump, prefs, db, entry, json_out;
        bool loose = false;
        size_t max_len = 256;
        uint32_t db_page_size = 1024;
    } sm_opts;
    sm->add_option("--dump", sm_opts.dump, "raw or range-framed memory dump")->required();
    sm->add_option("--prefs", sm_opts.prefs, "preferences XML with the wrapped secret")
        ->required();
    sm->add_option("--db", sm_opts.db, "encrypted main database for final confirmation");
    sm->add_option("--entry", sm_opts.entry, "preferences entry name");
    sm->add_option("--json", sm_opts.json_out, "write the candidate report here");
    sm->add_flag("--loose-signature", sm_opts.loose, "wildcard signature bytes 8..15");
    sm->add_option("--max-len", sm_opts.max_len, "maximum candidate length in UTF-16 units")
        ->default_val(256);
    sm->add_option("--db-page-size", sm_opts.db_page_size, "page size of --db")
        ->default_val(1024);
    sm->callback([&] {
        action = [&] {
            return cmd_scan_memory(sm_opts.dump, sm_opts.prefs, sm_opts.db,
                                   sm_opts.entry.empty()
                                       ? std::nullopt
                                       : std::optional<std::string>(sm_opts.entry),
                                   sm_opts.loose, sm_opts.max_len, sm_opts.json_out,
                                   sm_opts.db_page_size);
        };
    });

    // check-zeroed
    auto* cz = app.add_subcommand("check-zeroed",
                                  "report whether freed database content is wiped");
    struct {
        std::string in;
        KeyOptions key;
        bool media = false;
    } cz_opts;
    cz->add_option("--in", cz_opts.in, "database (plaintext or encrypted)")->required();
    add_key_options(cz, cz_opts.key);
    cz->add_flag("--media", cz_opts.media, "use the media recipe for decryption");
    cz->callback([&] {
        action = [&] {
            cz_opts.key.media_recipe = cz_opts.media;
            return cmd_check_zeroed(cz_opts.in, cz_opts.key);
        };
    });

    // make-fixture
    auto* mf = app.add_subcommand("make-fixture", "generate a deterministic artifact set");
    struct {
        std::string scenario = "fig6", passphrase = csf::fixtures::kScenarioPassphrase, out;
        uint64_t seed = 2016;
        uint32_t ic = 100;
        bool with_dump = false;
        size_t dump_size = 8u * 1024 * 1024;
    } mf_opts;
    mf->add_option("--scenario", mf_opts.scenario, "fig3|fig4|fig5|fig6|random")
        ->default_val("fig6");
    mf->add_option("--seed", mf_opts.seed, "RNG seed (same seed => identical bytes)")
        ->default_val(2016);
    mf->add_option("--passphrase", mf_opts.passphrase, "passphrase wrapping the key");
    mf->add_option("--ic", mf_opts.ic, "PBKDF2 iteration count for the secret")
        ->default_val(100);
    mf->add_option("--out", mf_opts.out, "output directory")->required();
    mf->add_flag("--with-dump", mf_opts.with_dump, "also write a synthetic memory dump");
    mf->add_option("--dump-size", mf_opts.dump_size, "dump size in bytes")
        ->default_val(8u * 1024 * 1024);
    mf->callback([&] {
        action = [&] {
            return cmd_make_fixture(mf_opts.scenario, mf_opts.seed, mf_opts.passphrase,
                                    mf_opts.ic, mf_opts.out, mf_opts.with_dump,
                                    mf_opts.dump_size);
        };
    });

    try {
        app.parse(argc, argv);
        if (action) exit_code = action();
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInputError;
    } catch (const csf::CryptoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCryptoError;
    } catch (const csf::ExtractionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPartial;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return exit_code;
}
