#pragma once

#include <string>

#include "qbo/instance.hpp"

namespace qbo {

// Sparse SDPA text form (.dat-s). The mapping is documented in
// docs/FORMATS.md: variables map one to one, the objective is negated
// (SDPA minimizes), each PSD block becomes one SDPA block, and the
// equalities become a trailing diagonal block holding an opposed pair of
// inequality rows per equality. Annotation comments make the import side
// reconstruct the exact instance, including metadata and labels; exports
// are deterministic and round-trip byte-identically.
std::string export_sdpa_string(const SDPInstance& inst);
void export_sdpa(const SDPInstance& inst, const std::string& path);

// Accepts both annotated exports and plain SDPA files produced elsewhere;
// plain files import with every block PSD and no equality rows.
SDPInstance import_sdpa_string(const std::string& text);
SDPInstance import_sdpa(const std::string& path);

}  // namespace qbo
