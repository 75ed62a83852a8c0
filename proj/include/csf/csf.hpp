#pragma once

// Umbrella header: the whole toolkit.

#include "csf/artifact_model.hpp"
#include "csf/base64.hpp"
#include "csf/bytes.hpp"
#include "csf/cipher_pages.hpp"
#include "csf/crypto.hpp"
#include "csf/errors.hpp"
#include "csf/memscan.hpp"
#include "csf/prefs_xml.hpp"
#include "csf/reconstruction.hpp"
#include "csf/secret_vault.hpp"
#include "csf/sqlite_reader.hpp"
#include "csf/version.hpp"
#include "csf/vfs_store.hpp"
