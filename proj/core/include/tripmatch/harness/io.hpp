#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tripmatch/netgraph.hpp"

namespace tripmatch::harness {

// Edge list, one "node_a node_b" per line. Blank lines and lines starting
// with '#' are skipped. Errors name the file and line.
RoadNetwork read_network(std::istream& in, const std::string& source = "network");
RoadNetwork read_network_file(const std::string& path);
void write_network(const RoadNetwork& network, std::ostream& out);

// "id origin dest lambda" per line; every type gets the given WTP model.
std::vector<RiderType> read_types(std::istream& in, const WtpModel& wtp,
                                  const std::string& source = "types");
std::vector<RiderType> read_types_file(const std::string& path, const WtpModel& wtp);
void write_types(const std::vector<RiderType>& types, std::ostream& out);

// Writes `text` to `path`, creating parent directories.
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace tripmatch::harness
