#pragma once

/*
 * Passphrase carving from volatile-memory dumps. The passphrase persists
 * in the messenger's process memory as a NUL-terminated UTF16-LE string
 * preceded by a fixed 16-byte signature, and a genuine passphrase shows
 * up twice; this module finds signature hits, decodes and filters the
 * strings behind them, prunes single-occurrence candidates, and validates
 * survivors against the serialized secret (and optionally against the
 * encrypted database itself).
 *
 * The scan is a single pass over overlapping windows, so memory use is
 * bounded by the window size and not the dump size. Raw dumps are read
 * as-is; dumps with per-range framing headers (magic 0x4C694D45) are
 * unframed transparently and offsets reported in payload space.
 */

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "csf/bytes.hpp"
#include "csf/cipher_pages.hpp"
#include "csf/errors.hpp"
#include "csf/secret_vault.hpp"

namespace csf::memscan {

inline constexpr std::array<uint8_t, 16> kDefaultSignature = {
    0x50, 0x99, 0xAB, 0xB2, 0x00, 0x00, 0x00, 0x00,
    0x1A, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00};

struct SignaturePattern {
    std::array<uint8_t, 16> bytes = kDefaultSignature;
    std::array<bool, 16> match;  // false = wildcard byte

    SignaturePattern() { match.fill(true); }

    // Exact signature as observed; the strict default.
    static SignaturePattern exact() { return SignaturePattern{}; }

    // Wildcards bytes 8..15, which look length- or allocator-dependent;
    // trades precision for recall on unknown system versions.
    static SignaturePattern relaxed() {
        SignaturePattern p;
        for (size_t i = 8; i < 16; ++i) p.match[i] = false;
        return p;
    }

    bool matches(const uint8_t* p) const {
        for (size_t i = 0; i < bytes.size(); ++i)
            if (match[i] && p[i] != bytes[i]) return false;
        return true;
    }
};

enum class Validation { Untested, Rejected, KeyRecovered, DbConfirmed };

inline std::string validation_name(Validation v) {
    switch (v) {
        case Validation::Rejected: return "rejected";
        case Validation::KeyRecovered: return "key_recovered";
        case Validation::DbConfirmed: return "db_confirmed";
        default: return "untested";
    }
}

struct PassphraseCandidate {
    std::string text;  // UTF-8
    std::vector<uint64_t> offsets;
    Validation validation = Validation::Untested;

    size_t occurrence_count() const { return offsets.size(); }
    uint64_t first_offset() const { return offsets.empty() ? UINT64_MAX : offsets.front(); }
};

struct ScanConfig {
    size_t max_len = 256;              // UTF-16 code units
    size_t chunk_size = 4 * 1024 * 1024;
};

// ---- printability filter ----

// Approximates "keyboard-enterable" code points: letters, numbers,
// punctuation, symbols and plain spaces across the common scripts, plus
// the emoji planes. Controls, separators other than space, lone
// surrogates and noncharacters are rejected. (A full category database
// would be overkill for carving passphrases.)
inline bool is_printable_cp(uint32_t cp) {
    if (cp == 0x20 || cp == 0xA0) return true;          // space, NBSP
    if (cp >= 0x21 && cp <= 0x7E) return true;          // ASCII printable
    if (cp < 0xA1) return false;                        // C0/C1 controls, DEL
    if (cp >= 0xD800 && cp <= 0xDFFF) return false;     // surrogates
    if (cp == 0x2028 || cp == 0x2029) return false;     // line/para separators
    if (cp >= 0xFDD0 && cp <= 0xFDEF) return false;     // noncharacters
    if ((cp & 0xFFFE) == 0xFFFE) return false;          // U+xxFFFE / U+xxFFFF
    static constexpr std::pair<uint32_t, uint32_t> kRanges[] = {
        {0x00A1, 0x024F},  // Latin-1 supplement + extended
        {0x0250, 0x02AF},  // IPA
        {0x0370, 0x04FF},  // Greek, Cyrillic
        {0x0530, 0x058F},  // Armenian
        {0x0590, 0x05FF},  // Hebrew
        {0x0600, 0x06FF},  // Arabic
        {0x0900, 0x097F},  // Devanagari
        {0x0E00, 0x0E7F},  // Thai
        {0x10A0, 0x10FF},  // Georgian
        {0x1E00, 0x1FFF},  // Latin/Greek extended additional
        {0x2000, 0x2027},  // general punctuation (minus Zl/Zp above)
        {0x202A, 0x206F},
        {0x20A0, 0x20CF},  // currency
        {0x2100, 0x2BFF},  // letterlike, arrows, math, misc symbols
        {0x3000, 0x30FF},  // CJK punctuation, kana
        {0x4E00, 0x9FFF},  // CJK unified
        {0xAC00, 0xD7A3},  // Hangul
        {0xFF00, 0xFFEF},  // fullwidth forms
        {0x1F000, 0x1FAFF},  // emoji and game symbols
    };
    for (auto [lo, hi] : kRanges)
        if (cp >= lo && cp <= hi) return true;
    return false;
}

namespace detail {

// Decodes a NUL-terminated UTF16-LE string starting at `p`. Returns the
// UTF-8 text only when the whole string is printable, at most max_len
// code units long and properly terminated inside the buffer.
inline std::optional<std::string> decode_candidate(const uint8_t* p, const uint8_t* end,
                                                   size_t max_len) {
    std::string out;
    size_t units = 0;
    while (p + 2 <= end) {
        uint32_t unit = static_cast<uint32_t>(p[0] | (p[1] << 8));
        p += 2;
        if (unit == 0) {
            if (out.empty()) return std::nullopt;  // zero-length string
            return out;
        }
        if (++units > max_len) return std::nullopt;
        uint32_t cp = unit;
        if (unit >= 0xD800 && unit <= 0xDBFF) {
            if (p + 2 > end) return std::nullopt;
            uint32_t low = static_cast<uint32_t>(p[0] | (p[1] << 8));
            if (low < 0xDC00 || low > 0xDFFF) return std::nullopt;
            p += 2;
            ++units;
            cp = 0x10000 + ((unit - 0xD800) << 10) + (low - 0xDC00);
        } else if (unit >= 0xDC00 && unit <= 0xDFFF) {
            return std::nullopt;  // lone low surrogate
        }
        if (!is_printable_cp(cp)) return std::nullopt;
        sqlite::detail::append_utf8(out, cp);
    }
    return std::nullopt;  // ran off the buffer before the terminator
}

}  // namespace detail

// Scans an in-memory window; offsets are reported relative to `base`.
// Used by the streaming scanner and directly by tests.
inline void scan_window(ByteView window, const SignaturePattern& sig, const ScanConfig& cfg,
                        uint64_t base, size_t from, size_t to,
                        std::map<std::string, PassphraseCandidate>& found) {
    if (window.size() < sig.bytes.size() + 2) return;
    to = std::min(to, window.size() - sig.bytes.size());
    for (size_t i = from; i < to; ++i) {
        if (!sig.matches(window.data() + i)) continue;
        auto text = detail::decode_candidate(window.data() + i + sig.bytes.size(),
                                             window.data() + window.size(), cfg.max_len);
        if (!text) continue;
        auto& candidate = found[*text];
        candidate.text = *text;
        candidate.offsets.push_back(base + i);
    }
}

// ---- dump sources ----

inline constexpr uint32_t kLimeMagic = 0x4C694D45;
inline constexpr size_t kLimeHeaderLen = 32;

// Reads a dump file sequentially. When the file starts with the framing
// magic, each 32-byte range header (magic, version, start addr, end addr,
// reserved) is stripped and the payloads concatenated.
class DumpReader {
public:
    explicit DumpReader(const std::filesystem::path& path) : in_(path, std::ios::binary) {
        if (!in_) throw IoError("cannot open dump: " + path.string());
        uint8_t head[4];
        if (in_.read(reinterpret_cast<char*>(head), 4))
            framed_ = read_le32(head) == kLimeMagic;
        in_.clear();
        in_.seekg(0);
        if (framed_) enter_segment();
    }

    // Fills `out` with up to out.size() payload bytes; returns bytes read.
    size_t read(uint8_t* out, size_t want) {
        if (!framed_) {
            in_.read(reinterpret_cast<char*>(out), static_cast<std::streamsize>(want));
            return static_cast<size_t>(in_.gcount());
        }
        size_t total = 0;
        while (total < want && segment_left_ > 0) {
            size_t take = std::min(want - total, segment_left_);
            in_.read(reinterpret_cast<char*>(out + total),
                     static_cast<std::streamsize>(take));
            size_t got = static_cast<size_t>(in_.gcount());
            total += got;
            segment_left_ -= got;
            if (got < take) return total;  // truncated dump
            if (segment_left_ == 0 && !enter_segment()) break;
        }
        return total;
    }

    bool framed() const { return framed_; }

private:
    bool enter_segment() {
        uint8_t header[kLimeHeaderLen];
        in_.read(reinterpret_cast<char*>(header), kLimeHeaderLen);
        if (static_cast<size_t>(in_.gcount()) < kLimeHeaderLen) return false;
        if (read_le32(header) != kLimeMagic)
            throw ParseError("framed dump has a corrupt range header");
        uint64_t start = 0, end = 0;
        for (int i = 7; i >= 0; --i) start = (start << 8) | header[8 + i];
        for (int i = 7; i >= 0; --i) end = (end << 8) | header[16 + i];
        if (end < start) throw ParseError("framed dump range runs backwards");
        segment_left_ = static_cast<size_t>(end - start + 1);
        return true;
    }

    std::ifstream in_;
    bool framed_ = false;
    size_t segment_left_ = 0;
};

// Single pass over the dump in overlapping chunks; a signature+string
// straddling a chunk boundary is still found because every window keeps
// the previous tail of (signature + longest possible string) bytes.
inline std::vector<PassphraseCandidate> scan_dump(DumpReader& reader,
                                                  const SignaturePattern& sig = {},
                                                  const ScanConfig& cfg = {}) {
    const size_t sig_len = 16;
    const size_t tail = sig_len + 2 * (cfg.max_len + 2);
    const size_t chunk = std::max(cfg.chunk_size, tail * 2);

    std::map<std::string, PassphraseCandidate> found;
    Bytes buffer;
    buffer.reserve(chunk + tail);
    uint64_t base = 0;  // dump offset of buffer[0]
    for (;;) {
        size_t old_size = buffer.size();
        buffer.resize(old_size + chunk);
        size_t got = reader.read(buffer.data() + old_size, chunk);
        buffer.resize(old_size + got);
        bool eof = got < chunk;
        if (buffer.size() < sig_len + 2) break;

        // scan everything on EOF, otherwise stop where a match could
        // still need bytes from the next chunk
        size_t scan_to = eof ? buffer.size() : (buffer.size() > tail ? buffer.size() - tail : 0);
        scan_window(buffer, sig, cfg, base, 0, scan_to, found);
        if (eof) break;

        size_t keep_from = scan_to;
        buffer.erase(buffer.begin(), buffer.begin() + static_cast<ptrdiff_t>(keep_from));
        base += keep_from;
    }

    std::vector<PassphraseCandidate> out;
    out.reserve(found.size());
    for (auto& [text, candidate] : found) {
        std::sort(candidate.offsets.begin(), candidate.offsets.end());
        candidate.offsets.erase(
            std::unique(candidate.offsets.begin(), candidate.offsets.end()),
            candidate.offsets.end());
        out.push_back(std::move(candidate));
    }
    std::sort(out.begin(), out.end(),
              [](const PassphraseCandidate& a, const PassphraseCandidate& b) {
                  return a.first_offset() < b.first_offset();
              });
    return out;
}

inline std::vector<PassphraseCandidate> scan_dump(const std::filesystem::path& path,
                                                  const SignaturePattern& sig = {},
                                                  const ScanConfig& cfg = {}) {
    DumpReader reader(path);
    return scan_dump(reader, sig, cfg);
}

// A genuine passphrase appears twice; dropping single hits removes the
// bulk of the false positives (heuristic, not a guarantee).
inline std::vector<PassphraseCandidate> prune_candidates(
    std::vector<PassphraseCandidate> candidates) {
    std::erase_if(candidates,
                  [](const PassphraseCandidate& c) { return c.occurrence_count() < 2; });
    return candidates;
}

struct DbProbe {
    Bytes file_head;  // at least the first page of the encrypted database
    uint32_t page_size = 1024;
};

// Tries to unwrap the secret with every candidate; AuthFailure means
// rejected. With a database supplied, a recovered key is additionally
// confirmed by verifying the first page MAC. Returns the best survivor
// (DbConfirmed beats KeyRecovered; ties go to the earliest offset) and
// updates every candidate's status in place.
inline std::optional<PassphraseCandidate> validate_candidates(
    std::vector<PassphraseCandidate>& candidates, const vault::SerializedSecret& secret,
    const std::optional<DbProbe>& db = {}) {
    std::optional<PassphraseCandidate> best;
    auto rank = [](Validation v) {
        return v == Validation::DbConfirmed ? 2 : v == Validation::KeyRecovered ? 1 : 0;
    };
    std::vector<PassphraseCandidate*> order;
    for (auto& c : candidates) order.push_back(&c);
    std::sort(order.begin(), order.end(),
              [](const PassphraseCandidate* a, const PassphraseCandidate* b) {
                  return a->first_offset() < b->first_offset();
              });
    for (auto* candidate : order) {
        if (candidate->text.empty()) {
            candidate->validation = Validation::Rejected;
            continue;
        }
        try {
            vault::DatabaseKey key =
                vault::unwrap_database_key(secret, vault::Passphrase(candidate->text));
            candidate->validation = Validation::KeyRecovered;
            if (db) {
                cipher::CipherProfile profile =
                    cipher::CipherProfile::raw(key.bytes, db->page_size);
                if (cipher::verify_first_page(db->file_head, profile))
                    candidate->validation = Validation::DbConfirmed;
            }
        } catch (const AuthFailure&) {
            candidate->validation = Validation::Rejected;
        }
        if (rank(candidate->validation) > (best ? rank(best->validation) : 0))
            best = *candidate;  // first-by-offset wins ties via scan order
    }
    return best;
}

}  // namespace csf::memscan
