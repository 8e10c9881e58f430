#include "tripmatch/harness/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "tripmatch/error.hpp"

namespace tripmatch::harness {

namespace {

// Calls fn(fields, line_number) for every non-comment line.
template <typename Fn>
void for_each_record(std::istream& in, const Fn& fn) {
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::istringstream fields(line);
    fn(fields, number);
  }
}

[[noreturn]] void bad_line(const std::string& source, int line, const std::string& what) {
  throw InvalidArgument(source + ":" + std::to_string(line) + ": " + what);
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  return in;
}

}  // namespace

RoadNetwork read_network(std::istream& in, const std::string& source) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for_each_record(in, [&](std::istringstream& f, int line) {
    NodeId a = 0;
    NodeId b = 0;
    std::string extra;
    if (!(f >> a >> b)) bad_line(source, line, "expected 'node_a node_b'");
    if (f >> extra) bad_line(source, line, "unexpected trailing field '" + extra + "'");
    edges.emplace_back(a, b);
  });
  if (edges.empty()) throw InvalidArgument(source + ": no edges");
  return RoadNetwork::from_edges(edges);
}

RoadNetwork read_network_file(const std::string& path) {
  auto in = open_input(path);
  return read_network(in, path);
}

void write_network(const RoadNetwork& network, std::ostream& out) {
  for (const auto& [a, b] : network.edges()) out << a << ' ' << b << '\n';
}

std::vector<RiderType> read_types(std::istream& in, const WtpModel& wtp, const std::string& source) {
  std::vector<RiderType> types;
  for_each_record(in, [&](std::istringstream& f, int line) {
    RiderType t;
    t.wtp = wtp;
    std::string extra;
    if (!(f >> t.id >> t.origin >> t.destination >> t.arrival_prob)) {
      bad_line(source, line, "expected 'id origin dest lambda'");
    }
    if (f >> extra) bad_line(source, line, "unexpected trailing field '" + extra + "'");
    types.push_back(t);
  });
  if (types.empty()) throw InvalidArgument(source + ": no rider types");
  return types;
}

std::vector<RiderType> read_types_file(const std::string& path, const WtpModel& wtp) {
  auto in = open_input(path);
  return read_types(in, wtp, path);
}

void write_types(const std::vector<RiderType>& types, std::ostream& out) {
  const auto old_precision = out.precision(17);
  for (const RiderType& t : types) {
    out << t.id << ' ' << t.origin << ' ' << t.destination << ' ' << t.arrival_prob << '\n';
  }
  out.precision(old_precision);
}

void write_text_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write '" + path + "'");
  out << text;
  if (!out) throw InvalidArgument("failed writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  auto in = open_input(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace tripmatch::harness
