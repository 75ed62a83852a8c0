#pragma once

/*
 * Error taxonomy for the toolkit. Every failure mode callers are expected
 * to branch on gets its own type; the CLI maps categories to exit codes
 * (input/parse -> 1, cryptographic -> 2, partial extraction -> 3).
 */

#include <cstdint>
#include <stdexcept>
#include <string>

namespace csf {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---- input / parse errors (CLI exit code 1) ----

struct IoError : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

struct XmlMalformed : ParseError {
    using ParseError::ParseError;
};

struct NoSecretEntry : ParseError {
    using ParseError::ParseError;
};

struct BlobTooShort : ParseError {
    using ParseError::ParseError;
};

struct BadKeyLength : ParseError {
    using ParseError::ParseError;
};

struct BadMagic : ParseError {
    using ParseError::ParseError;
};

struct UnsupportedFeature : ParseError {
    using ParseError::ParseError;
};

struct NoSuchTable : ParseError {
    using ParseError::ParseError;
};

struct CorruptCell : ParseError {
    CorruptCell(uint32_t page, uint32_t cell, const std::string& what)
        : ParseError("corrupt cell " + std::to_string(cell) + " on page " +
                     std::to_string(page) + ": " + what),
          page_no(page),
          cell_no(cell) {}
    uint32_t page_no;
    uint32_t cell_no;
};

struct NoForensicTables : ParseError {
    using ParseError::ParseError;
};

struct TruncatedFile : ParseError {
    using ParseError::ParseError;
};

struct PageSizeMismatch : ParseError {
    using ParseError::ParseError;
};

// ---- cryptographic failures (CLI exit code 2) ----

struct CryptoError : Error {
    using Error::Error;
};

// GCM tag check failed: wrong passphrase or corrupted blob.
struct AuthFailure : CryptoError {
    using CryptoError::CryptoError;
};

// Page MAC check failed: wrong key or corrupted database.
struct HmacMismatch : CryptoError {
    explicit HmacMismatch(uint32_t page)
        : CryptoError("page HMAC mismatch on page " + std::to_string(page)),
          page_no(page) {}
    uint32_t page_no;
};

// ---- extraction problems (CLI exit code 3, partial output) ----

struct ExtractionError : Error {
    using Error::Error;
};

struct MissingBlock : ExtractionError {
    MissingBlock(const std::string& path, int64_t block)
        : ExtractionError("missing block " + std::to_string(block) + " for " + path),
          vfs_path(path),
          block_no(block) {}
    std::string vfs_path;
    int64_t block_no;
};

struct SizeOverflow : ExtractionError {
    using ExtractionError::ExtractionError;
};

}  // namespace csf
