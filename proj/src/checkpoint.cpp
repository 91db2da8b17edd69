#include "factmod/checkpoint.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace factmod {

std::string format_checkpoint(const Checkpoint& cp) {
  return "last_prime=" + std::to_string(cp.last_prime) + "\nsum_missed=" +
         std::to_string(cp.sum_missed) + "\ncount=" + std::to_string(cp.count) + "\n";
}

Checkpoint parse_checkpoint(const std::string& text) {
  Checkpoint cp;
  bool seen[3] = {false, false, false};
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("checkpoint line without '=': " + line);
    const std::string key = line.substr(0, eq);
    const std::string val = line.substr(eq + 1);
    std::size_t pos = 0;
    const u64 v = std::stoull(val, &pos);
    if (pos != val.size()) throw std::invalid_argument("bad checkpoint value: " + line);
    if (key == "last_prime") {
      cp.last_prime = v;
      seen[0] = true;
    } else if (key == "sum_missed") {
      cp.sum_missed = v;
      seen[1] = true;
    } else if (key == "count") {
      cp.count = v;
      seen[2] = true;
    } else {
      throw std::invalid_argument("unknown checkpoint key: " + key);
    }
  }
  if (!(seen[0] && seen[1] && seen[2])) throw std::invalid_argument("incomplete checkpoint");
  return cp;
}

std::optional<Checkpoint> read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_checkpoint(buf.str());
}

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& cp) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write checkpoint " + tmp.string());
    out << format_checkpoint(cp);
    out.flush();
    if (!out) throw std::runtime_error("short write on checkpoint " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint checkpoint_of(const ScanSummary& s) { return {s.last_prime, s.sum_missed, s.count}; }

ScanSummary restore_scan_csv(const std::filesystem::path& csv, const Checkpoint& cp) {
  std::ifstream in(csv);
  if (!in) throw std::runtime_error("checkpoint present but scan output missing: " + csv.string());
  std::vector<std::string> header;
  ScanSummary s;
  std::vector<std::string> kept;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#' || line == kScanCsvHeader) {
      header.push_back(line);
      continue;
    }
    ScanRecord r;
    try {
      r = parse_csv_row(line);
    } catch (const std::exception&) {
      // A torn final row from an interrupted write.
      break;
    }
    if (r.p > cp.last_prime) break;
    s.add(r);
    kept.push_back(line);
  }
  in.close();
  if (checkpoint_of(s) != cp) {
    throw std::runtime_error("scan output " + csv.string() + " does not match its checkpoint");
  }
  std::ofstream out(csv, std::ios::trunc);
  for (const auto& h : header) out << h << '\n';
  for (const auto& k : kept) out << k << '\n';
  return s;
}

}  // namespace factmod
