#pragma once

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>

#include "nsac/spaces.hpp"

namespace nsac {

struct SnapshotMeta {
  int n = 0;  ///< cells per axis of the mesh the fields live on
  int dim = 2;
  double time = 0.0;
  int step = 0;
};

/// Named discrete fields written as text blocks:
///
///   nsac-snapshot 1
///   field <name> space <Q|V|X> n <n> d <d> time <t> step <k> count <m>
///   <id> <value>...            (m records, one per element or face)
///   ...
///   end
///
/// Values carry 17 significant digits so a write/read cycle is bit-exact.
struct Snapshot {
  SnapshotMeta meta;
  std::map<std::string, FieldQ> q;
  std::map<std::string, FieldV> v;
  std::map<std::string, FieldX> x;
};

class SnapshotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_snapshot(std::ostream& os, const Snapshot& snapshot);
Snapshot read_snapshot(std::istream& is);

void write_snapshot_file(const std::string& path, const Snapshot& snapshot);
Snapshot read_snapshot_file(const std::string& path);

}  // namespace nsac
