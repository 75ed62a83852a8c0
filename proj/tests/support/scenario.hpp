#pragma once

// Shared helpers: generate a scenario fixture set and run it through the
// decrypt -> parse pipeline the way an analyst would.

#include <filesystem>

#include "csf/artifact_model.hpp"
#include "csf/cipher_pages.hpp"
#include "csf/fixtures.hpp"
#include "csf/sqlite_reader.hpp"

namespace testsupport {

inline csf::fixtures::FixtureSet make_scenario(const std::filesystem::path& dir,
                                               csf::fixtures::Scenario scenario,
                                               bool with_dump = false,
                                               size_t dump_size = 4u * 1024 * 1024) {
    csf::fixtures::FixtureSpec spec;
    spec.scenario = scenario;
    spec.out_dir = dir;
    spec.with_dump = with_dump;
    spec.dump_size = dump_size;
    return csf::fixtures::make_fixture(spec);
}

inline csf::sqlite::DbImage decrypt_imps(const csf::fixtures::FixtureSet& set) {
    auto profile = csf::cipher::CipherProfile::raw(set.key.bytes, 1024);
    return csf::sqlite::DbImage::open(
        csf::cipher::decrypt_database(csf::load_file(set.impsenc_db), profile));
}

inline csf::sqlite::DbImage decrypt_media(const csf::fixtures::FixtureSet& set) {
    auto profile = csf::cipher::CipherProfile::textual(set.textual_key, 8192, 64000);
    return csf::sqlite::DbImage::open(
        csf::cipher::decrypt_database(csf::load_file(set.media_db), profile));
}

}  // namespace testsupport
