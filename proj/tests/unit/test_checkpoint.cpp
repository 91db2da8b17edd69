#include <doctest.h>

#include <stdexcept>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "factmod/checkpoint.hpp"

using namespace factmod;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "factmod_checkpoint_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("checkpoint text format") {
  const Checkpoint cp{1009, 4242, 166};
  CHECK(format_checkpoint(cp) == "last_prime=1009\nsum_missed=4242\ncount=166\n");
  CHECK(parse_checkpoint(format_checkpoint(cp)) == cp);
  CHECK(parse_checkpoint("count=1\nlast_prime=5\nsum_missed=2") == Checkpoint{5, 2, 1});
  CHECK_THROWS_AS(parse_checkpoint("last_prime=5\nsum_missed=2\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_checkpoint("last_prime=5\nsum_missed=2\ncount=1\nextra=3\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_checkpoint("last_prime=5x\nsum_missed=2\ncount=1\n"), std::invalid_argument);
  CHECK_THROWS(parse_checkpoint("last_prime=\nsum_missed=2\ncount=1\n"));
}

TEST_CASE("write and read back atomically") {
  const auto path = scratch("cp.txt");
  fs::remove(path);
  CHECK_FALSE(read_checkpoint(path).has_value());
  write_checkpoint(path, Checkpoint{7, 5, 2});
  CHECK(read_checkpoint(path) == Checkpoint{7, 5, 2});
  write_checkpoint(path, Checkpoint{11, 12, 3});
  CHECK(read_checkpoint(path) == Checkpoint{11, 12, 3});
  auto tmp = path;
  tmp += ".tmp";
  CHECK_FALSE(fs::exists(tmp));
}

TEST_CASE("restore_scan_csv drops rows after the checkpoint and torn rows") {
  std::vector<ScanRecord> rows;
  factorial_scan(5, 200, ScanOptions{}, [&](const ScanRecord& r) { rows.push_back(r); });
  ScanSummary upto;
  for (const auto& r : rows) {
    if (r.p <= 101) upto.add(r);
  }
  const auto csv = scratch("scan.csv");
  {
    std::ofstream out(csv, std::ios::trunc);
    out << kSchemaLine << '\n' << kScanCsvHeader << '\n';
    for (const auto& r : rows) {
      if (r.p <= 131) out << to_csv_row(r) << '\n';
    }
    out << "137,9";  // torn
  }
  const auto s = restore_scan_csv(csv, checkpoint_of(upto));
  CHECK(s.count == upto.count);
  CHECK(s.sum_missed == upto.sum_missed);
  CHECK(s.last_prime == 101);

  std::string expected = std::string(kSchemaLine) + "\n" + kScanCsvHeader + "\n";
  for (const auto& r : rows) {
    if (r.p <= 101) expected += to_csv_row(r) + "\n";
  }
  CHECK(slurp(csv) == expected);

  // A checkpoint claiming more than the file holds is rejected.
  CHECK_THROWS_AS(restore_scan_csv(csv, Checkpoint{199, 1, 1}), std::runtime_error);
  CHECK_THROWS_AS(restore_scan_csv(scratch("missing.csv"), Checkpoint{5, 2, 1}), std::runtime_error);
}
