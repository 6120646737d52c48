#include "nsac/snapshot.hpp"

#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace nsac {

namespace {

void write_header(std::ostream& os, const std::string& name, char space, const SnapshotMeta& m,
                  Eigen::Index count) {
  os << "field " << name << " space " << space << " n " << m.n << " d " << m.dim << " time "
     << m.time << " step " << m.step << " count " << count << "\n";
}

void write_rows(std::ostream& os, const Eigen::VectorXd& values, int width) {
  const Eigen::Index rows = values.size() / width;
  for (Eigen::Index r = 0; r < rows; ++r) {
    os << r;
    for (int c = 0; c < width; ++c) os << ' ' << values[r * width + c];
    os << "\n";
  }
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw SnapshotError("snapshot line " + std::to_string(line) + ": " + what);
}

}  // namespace

void write_snapshot(std::ostream& os, const Snapshot& s) {
  const auto old_precision = os.precision();
  os << std::setprecision(17);
  os << "nsac-snapshot 1\n";
  for (const auto& [name, f] : s.q) {
    write_header(os, name, 'Q', s.meta, f.values.size());
    write_rows(os, f.values, 1);
  }
  for (const auto& [name, f] : s.v) {
    write_header(os, name, 'V', s.meta, f.values.size() / 2);
    write_rows(os, f.values, 2);
  }
  for (const auto& [name, f] : s.x) {
    write_header(os, name, 'X', s.meta, f.values.size() / 3);
    write_rows(os, f.values, 3);
  }
  os << "end\n";
  os.precision(old_precision);
}

Snapshot read_snapshot(std::istream& is) {
  Snapshot s;
  std::string line;
  int line_no = 0;
  if (!std::getline(is, line)) fail(1, "empty input");
  ++line_no;
  if (line != "nsac-snapshot 1") fail(line_no, "expected 'nsac-snapshot 1' header");

  bool ended = false;
  bool meta_seen = false;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line == "end") {
      ended = true;
      break;
    }
    std::istringstream hdr(line);
    std::string tag, name, key;
    hdr >> tag >> name;
    if (tag != "field" || name.empty()) fail(line_no, "expected a 'field <name> ...' header");
    char space = 0;
    SnapshotMeta meta;
    long count = -1;
    while (hdr >> key) {
      if (key == "space") hdr >> space;
      else if (key == "n") hdr >> meta.n;
      else if (key == "d") hdr >> meta.dim;
      else if (key == "time") hdr >> meta.time;
      else if (key == "step") hdr >> meta.step;
      else if (key == "count") hdr >> count;
      else fail(line_no, "unknown header key '" + key + "'");
      if (hdr.fail()) fail(line_no, "bad value for header key '" + key + "'");
    }
    int width = 0;
    switch (space) {
      case 'Q': width = 1; break;
      case 'V': width = 2; break;
      case 'X': width = 3; break;
      default: fail(line_no, "space must be Q, V or X");
    }
    if (count < 0) fail(line_no, "missing count");
    if (meta_seen && (meta.n != s.meta.n || meta.dim != s.meta.dim || meta.step != s.meta.step)) {
      fail(line_no, "field blocks disagree on mesh or step");
    }
    s.meta = meta;
    meta_seen = true;

    Eigen::VectorXd values(count * width);
    for (long r = 0; r < count; ++r) {
      if (!std::getline(is, line)) fail(line_no, "unexpected end of input in field '" + name + "'");
      ++line_no;
      std::istringstream row(line);
      long id = -1;
      row >> id;
      if (row.fail() || id != r) fail(line_no, "expected record id " + std::to_string(r));
      for (int c = 0; c < width; ++c) {
        row >> values[r * width + c];
        if (row.fail()) fail(line_no, "bad value in field '" + name + "'");
      }
    }
    if (space == 'Q') s.q[name] = FieldQ{values};
    else if (space == 'V') s.v[name] = FieldV{values};
    else s.x[name] = FieldX{values};
  }
  if (!ended) fail(line_no, "missing 'end' line");
  return s;
}

void write_snapshot_file(const std::string& path, const Snapshot& snapshot) {
  std::ofstream os(path);
  if (!os) throw SnapshotError("cannot open '" + path + "' for writing");
  write_snapshot(os, snapshot);
}

Snapshot read_snapshot_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw SnapshotError("cannot open snapshot '" + path + "'");
  return read_snapshot(is);
}

}  // namespace nsac
