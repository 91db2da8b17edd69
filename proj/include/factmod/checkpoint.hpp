#pragma once

// Resumable factorial scans: a three-line checkpoint file plus the CSV it covers.

#include <filesystem>
#include <optional>
#include <string>

#include "factmod/residues.hpp"

namespace factmod {

struct Checkpoint {
  u64 last_prime = 0;
  u64 sum_missed = 0;
  u64 count = 0;
  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

/// "last_prime=<p>\nsum_missed=<s>\ncount=<c>\n"
std::string format_checkpoint(const Checkpoint& cp);
/// Throws std::invalid_argument on anything but the three expected keys.
Checkpoint parse_checkpoint(const std::string& text);

std::optional<Checkpoint> read_checkpoint(const std::filesystem::path& path);
/// Writes to a sibling temporary file and renames it into place.
void write_checkpoint(const std::filesystem::path& path, const Checkpoint& cp);

Checkpoint checkpoint_of(const ScanSummary& s);

/// Drops rows past cp.last_prime from a scan CSV (rows written after the last
/// checkpoint), checks the kept rows against cp and returns their summary.
/// Throws std::runtime_error when the CSV and checkpoint disagree.
ScanSummary restore_scan_csv(const std::filesystem::path& csv, const Checkpoint& cp);

}  // namespace factmod
