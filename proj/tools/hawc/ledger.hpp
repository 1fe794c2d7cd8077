#pragma once

#include <optional>
#include <string>

#include "hawc/hawc.hpp"

namespace hawc::cli {

/// Ledger CSV: header `index,dim0,...,dim{N-1}`, then one row per emitted
/// point with indices 1, 2, ... in order. Anything else is rejected.
HistoryLedger read_ledger(const std::string& path);

/// As read_ledger, but a missing file yields std::nullopt.
std::optional<HistoryLedger> read_ledger_if_exists(const std::string& path);

/// Writes `<path>.tmp` then renames it over `path`, so readers see either the
/// old or the new ledger, never a partial one.
void write_ledger_atomic(const std::string& path, const HistoryLedger& ledger);

}  // namespace hawc::cli
