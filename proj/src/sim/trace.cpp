#include "sim/trace.hpp"

#include <fstream>
#include <sstream>

#include "core/errors.hpp"

namespace cvq::sim {

namespace {
constexpr const char* kFlightHeader =
    "id,airline,weight_class,passengers,gate,runway,ready_step,pushback_step,queue_entry_step,wheelsoff_step,"
    "planes_out_at_pushback,active_planes_at_ready";
}

void write_flight_csv(const DayTrace& trace, std::ostream& out) {
  std::ostringstream buf;
  buf << kFlightHeader << '\n';
  for (const auto& f : trace.flights) {
    buf << f.id << ',' << f.airline << ',' << class_code(f.weight_class) << ',' << f.passengers << ',' << f.gate
        << ',' << f.runway << ',' << f.ready_step << ',' << f.pushback_step << ',' << f.queue_entry_step << ','
        << f.wheelsoff_step << ',' << f.planes_out_at_pushback << ',' << f.active_planes_at_ready << '\n';
  }
  out << buf.str();
}

void write_step_csv(const DayTrace& trace, std::ostream& out) {
  std::ostringstream buf;
  buf << "step,runway,planes_out,takeoffs\n";
  for (const auto& s : trace.steps) {
    for (std::size_t r = 0; r < s.planes_out.size(); ++r) {
      buf << s.step << ',' << r << ',' << s.planes_out[r] << ',' << s.takeoffs[r] << '\n';
    }
  }
  out << buf.str();
}

DayTrace read_flight_csv(std::istream& in, int step_seconds, const std::string& source_name) {
  DayTrace trace;
  trace.step_seconds = step_seconds;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line) || line != kFlightHeader) {
    throw InputError(source_name + ":1: missing or unexpected trace header");
  }
  ++line_no;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::vector<std::string> cols;
    std::string col;
    while (std::getline(fields, col, ',')) cols.push_back(col);
    const auto fail = [&] { throw InputError(source_name + ":" + std::to_string(line_no) + ": malformed trace row"); };
    if (cols.size() != 12) fail();
    try {
      FlightRecord f;
      f.id = std::stoull(cols[0]);
      f.airline = cols[1];
      const auto wc = parse_class_code(cols[2]);
      if (!wc) fail();
      f.weight_class = *wc;
      f.passengers = std::stoi(cols[3]);
      f.gate = std::stoll(cols[4]);
      f.runway = static_cast<RunwayIndex>(std::stoul(cols[5]));
      f.ready_step = std::stoll(cols[6]);
      f.pushback_step = std::stoll(cols[7]);
      f.queue_entry_step = std::stoll(cols[8]);
      f.wheelsoff_step = std::stoll(cols[9]);
      f.planes_out_at_pushback = std::stoi(cols[10]);
      f.active_planes_at_ready = std::stoi(cols[11]);
      trace.flights.push_back(std::move(f));
    } catch (const std::logic_error&) {
      fail();
    }
  }
  return trace;
}

DayTrace load_flight_csv(const std::filesystem::path& path, int step_seconds) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trace file " + path.string());
  return read_flight_csv(in, step_seconds, path.string());
}

}  // namespace cvq::sim
