#pragma once

/*
 * Reassembly of files from the block store inside the decrypted media
 * database. Each stored object is one meta_data row (path, size,
 * block_size, timestamps) plus value_data rows carrying the blocks in
 * sequence-number order. Extraction concatenates blocks by ascending
 * block_no and truncates to the recorded size — final blocks may be
 * stored full-length, the size field is authoritative.
 */

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "csf/artifact_model.hpp"
#include "csf/bytes.hpp"
#include "csf/crypto.hpp"
#include "csf/errors.hpp"

namespace csf::vfs {

// All objects sorted by path; directories and symlinks are listed but a
// symlink is never followed.
inline std::vector<model::VfsMeta> list_vfs(const model::VfsDb& db) {
    std::vector<model::VfsMeta> out = db.metas;
    std::sort(out.begin(), out.end(),
              [](const model::VfsMeta& a, const model::VfsMeta& b) { return a.key < b.key; });
    return out;
}

inline int64_t expected_block_count(int64_t size, int64_t block_size) {
    if (size <= 0 || block_size <= 0) return 0;
    return (size + block_size - 1) / block_size;
}

// Reassembles one file. Throws MissingBlock on a gap in the sequence and
// SizeOverflow when the concatenated blocks cannot cover the recorded
// size; the result is exactly meta.size bytes.
inline Bytes extract_file(const model::VfsDb& db, const std::string& path) {
    const model::VfsMeta* meta = db.find(path);
    if (!meta) throw NoSuchTable("no virtual-disk object at " + path);
    if (meta->type != "blob")
        throw UnsupportedFeature("virtual-disk object at " + path + " is a " + meta->type +
                                 ", not a file");
    if (meta->size < 0) throw ParseError("negative size recorded for " + path);
    if (meta->size == 0) return {};
    if (meta->block_size <= 0) throw ParseError("non-positive block size for " + path);

    std::vector<const model::VfsBlock*> blocks;
    for (const auto& block : db.blocks)
        if (block.key == path) blocks.push_back(&block);
    std::sort(blocks.begin(), blocks.end(),
              [](const model::VfsBlock* a, const model::VfsBlock* b) {
                  return a->block_no < b->block_no;
              });

    int64_t expected = expected_block_count(meta->size, meta->block_size);
    int64_t next = 0;
    Bytes out;
    out.reserve(static_cast<size_t>(meta->size));
    for (const auto* block : blocks) {
        if (block->block_no >= expected) break;  // ignore stale trailing blocks
        if (block->block_no != next) throw MissingBlock(path, next);
        out.insert(out.end(), block->data_block.begin(), block->data_block.end());
        ++next;
    }
    if (next != expected) throw MissingBlock(path, next);
    if (static_cast<int64_t>(out.size()) < meta->size)
        throw SizeOverflow("blocks for " + path + " cover " + std::to_string(out.size()) +
                           " bytes but meta_data records " + std::to_string(meta->size));
    out.resize(static_cast<size_t>(meta->size));
    return out;
}

// Path sanitizer for on-disk extraction: keeps the virtual hierarchy,
// drops the leading slash and refuses traversal components.
inline std::filesystem::path sanitize_vfs_path(const std::string& vfs_path) {
    std::filesystem::path out;
    std::string component;
    auto flush = [&] {
        if (component.empty() || component == ".") {
            component.clear();
            return;
        }
        if (component == "..") component = "__parent__";
        out /= component;
        component.clear();
    };
    for (char c : vfs_path) {
        if (c == '/' || c == '\\') {
            flush();
        } else if (static_cast<unsigned char>(c) < 0x20 || c == ':') {
            component.push_back('_');
        } else {
            component.push_back(c);
        }
    }
    flush();
    if (out.empty()) out = "__root__";
    return out;
}

struct ExtractedEntry {
    std::string vfs_path;
    std::string type;
    std::string output_path;  // relative to the output directory, empty if not written
    int64_t size = 0;
    int64_t block_size = 0;
    std::string ctime_utc, mtime_utc, atime_utc;
    std::string sha256;  // of the reassembled content
    std::string status;  // "extracted" | error description
    bool ok = false;
};

struct ExtractionResult {
    std::vector<ExtractedEntry> entries;
    size_t extracted = 0;
    size_t failed = 0;

    bool complete() const { return failed == 0; }
};

// Extracts every blob under out_dir and returns per-entry outcomes for
// the manifest. Failures are recorded per file so one damaged object
// never aborts the rest (partial extraction is the CLI's exit-3 case).
inline ExtractionResult extract_all(const model::VfsDb& db,
                                    const std::filesystem::path& out_dir) {
    ExtractionResult result;
    for (const auto& meta : list_vfs(db)) {
        ExtractedEntry entry;
        entry.vfs_path = meta.key;
        entry.type = meta.type;
        entry.size = meta.size;
        entry.block_size = meta.block_size;
        entry.ctime_utc = model::decode_epoch_s(meta.ctime);
        entry.mtime_utc = model::decode_epoch_s(meta.mtime);
        entry.atime_utc = model::decode_epoch_s(meta.atime);
        if (meta.type != "blob") {
            entry.status = meta.type == "symlink" ? "symlink (not followed)" : meta.type;
            entry.ok = true;  // nothing to extract, not a failure
            result.entries.push_back(std::move(entry));
            continue;
        }
        try {
            Bytes content = extract_file(db, meta.key);
            auto rel = sanitize_vfs_path(meta.key);
            auto dest = out_dir / rel;
            std::filesystem::create_directories(dest.parent_path());
            save_file(dest, content);
            entry.output_path = rel.generic_string();
            entry.sha256 = to_hex(crypto::sha256(content));
            entry.status = "extracted";
            entry.ok = true;
            ++result.extracted;
        } catch (const Error& e) {
            entry.status = e.what();
            entry.ok = false;
            ++result.failed;
        }
        result.entries.push_back(std::move(entry));
    }
    return result;
}

}  // namespace csf::vfs
