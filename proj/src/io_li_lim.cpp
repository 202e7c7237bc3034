#include <sstream>

#include "pdptw/io.hpp"

namespace pdptw::io {

namespace {

struct Row {
  int id = 0;
  double x = 0.0;
  double y = 0.0;
  double demand = 0.0;
  double earliest = 0.0;
  double latest = 0.0;
  double service = 0.0;
  int pickup = 0;
  int delivery = 0;
  int line = 0;
};

[[noreturn]] void fail(int line, const std::string& message) {
  throw ParseError("line " + std::to_string(line) + ": " + message);
}

}  // namespace

Instance parse_li_lim(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;

  int vehicles = 0;
  double capacity = 0.0;
  double speed = 1.0;
  bool header = false;
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    if (!header) {
      if (!(fields >> vehicles >> capacity >> speed)) fail(line_no, "expected header 'K Q speed'");
      if (vehicles < 1) fail(line_no, "vehicle count must be >= 1");
      header = true;
      continue;
    }
    Row row;
    row.line = line_no;
    if (!(fields >> row.id >> row.x >> row.y >> row.demand >> row.earliest >> row.latest >>
          row.service >> row.pickup >> row.delivery)) {
      fail(line_no, "expected 9 columns: id x y demand earliest latest service pickup delivery");
    }
    if (row.id != static_cast<int>(rows.size())) {
      fail(line_no, "node ids must be contiguous from 0 (expected " + std::to_string(rows.size()) +
                        ", got " + std::to_string(row.id) + ")");
    }
    rows.push_back(row);
  }
  if (!header) throw ParseError("line 1: missing header 'K Q speed'");
  if (rows.empty()) throw ParseError("no depot row");
  if (rows.front().demand != 0.0) fail(rows.front().line, "depot must have zero demand");

  const int count = static_cast<int>(rows.size());
  auto row_at = [&](const Row& from, int id, const char* column) -> const Row& {
    if (id < 1 || id >= count) {
      fail(from.line, std::string(column) + " sibling " + std::to_string(id) + " is not a node");
    }
    return rows[static_cast<std::size_t>(id)];
  };

  std::vector<Node> nodes;
  std::vector<Request> requests;
  for (const Row& row : rows) {
    Node node{row.id, row.x, row.y, row.earliest, row.latest, row.service, row.demand};
    nodes.push_back(node);
    if (row.id == 0) continue;
    if (row.demand > 0.0) {
      if (row.pickup != 0) fail(row.line, "pickup row must have pickup sibling 0");
      const Row& sibling = row_at(row, row.delivery, "delivery");
      if (sibling.demand >= 0.0 || sibling.pickup != row.id) {
        fail(row.line, "delivery sibling " + std::to_string(row.delivery) +
                           " is not a delivery pointing back to " + std::to_string(row.id));
      }
      requests.push_back(Request{row.id, row.delivery});
    } else if (row.demand < 0.0) {
      if (row.delivery != 0) fail(row.line, "delivery row must have delivery sibling 0");
      const Row& sibling = row_at(row, row.pickup, "pickup");
      if (sibling.demand <= 0.0 || sibling.delivery != row.id) {
        fail(row.line, "pickup sibling " + std::to_string(row.pickup) +
                           " is not a pickup pointing back to " + std::to_string(row.id));
      }
    } else {
      fail(row.line, "non-depot node with zero demand");
    }
  }

  std::vector<VehicleSpec> fleet(static_cast<std::size_t>(vehicles),
                                 VehicleSpec{capacity, 1.0, speed});
  try {
    return Instance(std::move(nodes), std::move(requests), std::move(fleet));
  } catch (const ParseError&) {
    throw;
  } catch (const InputError& e) {
    throw ParseError(std::string("invalid instance: ") + e.what());
  }
}

}  // namespace pdptw::io
