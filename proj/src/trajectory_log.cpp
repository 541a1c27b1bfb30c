#include "quadspin/trajectory_log.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "quadspin/errors.hpp"

namespace quadspin {
namespace {

const char* kHeader =
    "t_s,com_x_m,com_y_m,com_z_m,yaw_rad,roll_rad,pitch_rad,"
    "cmd_com_x_m,cmd_com_y_m,cmd_com_z_m,v_cmd_mps,omega_cmd_radps,"
    "fr_contact,fr_foot_x_m,fr_foot_y_m,fr_foot_z_m,"
    "fl_contact,fl_foot_x_m,fl_foot_y_m,fl_foot_z_m,"
    "br_contact,br_foot_x_m,br_foot_y_m,br_foot_z_m,"
    "bl_contact,bl_foot_x_m,bl_foot_y_m,bl_foot_z_m";

constexpr int kColumns = 28;

void append_double(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

std::string log_to_csv(const TrajectoryLog& log) {
  std::string out = kHeader;
  out += '\n';
  for (const LogRecord& r : log.records) {
    const double scalars[] = {r.t,         r.com.x(),     r.com.y(),
                              r.com.z(),   r.yaw,         r.roll,
                              r.pitch,     r.cmd_com.x(), r.cmd_com.y(),
                              r.cmd_com.z(), r.v_cmd,     r.omega_cmd};
    bool first = true;
    for (double v : scalars) {
      if (!first) out += ',';
      first = false;
      append_double(out, v);
    }
    for (int leg = 0; leg < kNumLegs; ++leg) {
      out += ',';
      out += r.contact[leg] ? '1' : '0';
      for (int axis = 0; axis < 3; ++axis) {
        out += ',';
        append_double(out, r.foot[leg](axis));
      }
    }
    out += '\n';
  }
  return out;
}

void write_csv(const TrajectoryLog& log, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ConfigError("log: cannot open \"" + path + "\" for writing");
  }
  out << log_to_csv(log);
  if (!out) {
    throw ConfigError("log: short write to \"" + path + "\"");
  }
}

TrajectoryLog parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) {
    throw InsufficientDataError("log: empty document");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader) {
    throw ConfigError("log: header does not match the expected schema");
  }

  TrajectoryLog log;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::array<double, kColumns> cols{};
    int n = 0;
    const char* p = line.c_str();
    while (n < kColumns) {
      char* end = nullptr;
      cols[n] = std::strtod(p, &end);
      if (end == p) break;
      ++n;
      p = end;
      if (*p == ',') ++p;
    }
    if (n != kColumns || *p != '\0') {
      throw ConfigError("log: malformed record at line " +
                        std::to_string(line_no));
    }

    LogRecord r;
    r.t = cols[0];
    r.com = {cols[1], cols[2], cols[3]};
    r.yaw = cols[4];
    r.roll = cols[5];
    r.pitch = cols[6];
    r.cmd_com = {cols[7], cols[8], cols[9]};
    r.v_cmd = cols[10];
    r.omega_cmd = cols[11];
    for (int leg = 0; leg < kNumLegs; ++leg) {
      const int base = 12 + 4 * leg;
      r.contact[leg] = cols[base] != 0.0;
      r.foot[leg] = {cols[base + 1], cols[base + 2], cols[base + 3]};
    }
    log.records.push_back(r);
  }
  return log;
}

TrajectoryLog read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("log: cannot open \"" + path + "\"");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str());
}

}  // namespace quadspin
