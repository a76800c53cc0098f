// Copyright 2026 The ccfunnel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ccfunnel/trace_io.h"

#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <string_view>

namespace ccfunnel {
namespace {

constexpr std::array<const char*, 16> kGroup = {
    "x",     "v",     "vd",    "ev",    "u",     "xhat",  "evhat", "phiL",
    "phiU",  "rhoL",  "rhoU",  "softL", "softU", "hardL", "hardU", "gammav"};

// Member pointers in the same order as kGroup.
constexpr std::array<Eigen::VectorXd TraceRow::*, 16> kFields = {
    &TraceRow::x,          &TraceRow::v,          &TraceRow::v_d,
    &TraceRow::e_v,        &TraceRow::u,          &TraceRow::x_hat,
    &TraceRow::ev_hat,     &TraceRow::phi_lower,  &TraceRow::phi_upper,
    &TraceRow::rho_lower,  &TraceRow::rho_upper,  &TraceRow::soft_lower,
    &TraceRow::soft_upper, &TraceRow::hard_lower, &TraceRow::hard_upper,
    &TraceRow::gamma_v};

void put(std::ostream& os, double value) {
  std::array<char, 32> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::general, 17);
  os.write(buf.data(), res.ptr - buf.data());
}

double parse_number(std::string_view field, int line) {
  double value = 0.0;
  const auto res =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw TraceFormatError(line,
                           "not a number: '" + std::string(field) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <class... Cols>
void write_rows(std::ostream& os, const SimTrace& trace, Cols... cols) {
  for (const auto& row : trace.rows) {
    put(os, row.t);
    ((os << ',', put(os, cols(row))), ...);
    os << '\n';
  }
}

}  // namespace

TraceFormatError::TraceFormatError(int line, const std::string& message)
    : std::runtime_error("trace line " + std::to_string(line) + ": " +
                         message),
      line_(line) {}

std::vector<std::string> trace_columns(int outputs) {
  std::vector<std::string> cols{"t"};
  for (int i = 1; i <= outputs; ++i) {
    for (const char* g : kGroup) cols.push_back(g + ("_" + std::to_string(i)));
  }
  return cols;
}

void write_trace_csv(std::ostream& os, const SimTrace& trace) {
  const auto cols = trace_columns(trace.outputs);
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (c) os << ',';
    os << cols[c];
  }
  os << '\n';
  for (const auto& row : trace.rows) {
    put(os, row.t);
    for (int i = 0; i < trace.outputs; ++i) {
      for (auto field : kFields) {
        os << ',';
        put(os, (row.*field)[i]);
      }
    }
    os << '\n';
  }
  for (const auto& f : trace.faults) {
    os << "# fault," << fault_kind_name(f.kind) << ',';
    put(os, f.time);
    os << ',' << f.index << ',' << f.message << '\n';
  }
  os << "# rows," << trace.rows.size() << '\n';
}

SimTrace read_trace_csv(std::istream& is, int outputs) {
  SimTrace trace;
  trace.outputs = outputs;
  std::string line;
  int lineno = 0;
  if (!std::getline(is, line)) throw TraceFormatError(1, "empty trace file");
  ++lineno;
  const auto expected = trace_columns(outputs);
  const auto header = split(line, ',');
  if (header.size() != expected.size()) {
    throw TraceFormatError(
        lineno, "header has " + std::to_string(header.size()) +
                    " columns, expected " + std::to_string(expected.size()) +
                    " for " + std::to_string(outputs) + " output(s)");
  }
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] != expected[c]) {
      throw TraceFormatError(lineno, "unexpected column '" +
                                         std::string(header[c]) +
                                         "', expected '" + expected[c] + "'");
    }
  }
  bool closed = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (closed) throw TraceFormatError(lineno, "content after row count");
    if (line.front() == '#') {
      std::string_view body(line);
      body.remove_prefix(1);
      while (!body.empty() && body.front() == ' ') body.remove_prefix(1);
      if (body.starts_with("fault,")) {
        auto parts = split(body.substr(6), ',');
        if (parts.size() < 4) {
          throw TraceFormatError(lineno, "malformed fault line");
        }
        Fault f;
        try {
          f.kind = parse_fault_kind(parts[0]);
        } catch (const std::invalid_argument& e) {
          throw TraceFormatError(lineno, e.what());
        }
        f.time = parse_number(parts[1], lineno);
        f.index = static_cast<int>(parse_number(parts[2], lineno));
        const auto msg_start = parts[3].data() - body.data();
        f.message = std::string(body.substr(msg_start));
        trace.faults.push_back(std::move(f));
      } else if (body.starts_with("rows,")) {
        const double count = parse_number(body.substr(5), lineno);
        if (count != static_cast<double>(trace.rows.size())) {
          throw TraceFormatError(
              lineno, "row count " + std::string(body.substr(5)) +
                          " does not match " +
                          std::to_string(trace.rows.size()) + " data rows");
        }
        closed = true;
      }
      continue;
    }
    if (!trace.faults.empty()) {
      throw TraceFormatError(lineno, "data row after fault block");
    }
    const auto fields = split(line, ',');
    if (fields.size() != expected.size()) {
      throw TraceFormatError(lineno, "row has " +
                                         std::to_string(fields.size()) +
                                         " fields, expected " +
                                         std::to_string(expected.size()));
    }
    TraceRow row;
    row.t = parse_number(fields[0], lineno);
    for (auto field : kFields) (row.*field).resize(outputs);
    std::size_t c = 1;
    for (int i = 0; i < outputs; ++i) {
      for (auto field : kFields) {
        (row.*field)[i] = parse_number(fields[c++], lineno);
      }
    }
    trace.rows.push_back(std::move(row));
  }
  if (!closed) {
    throw TraceFormatError(lineno, "missing closing row count (truncated?)");
  }
  return trace;
}

void write_funnel_csv(std::ostream& os, const SimTrace& trace, int index) {
  const std::string s = "_" + std::to_string(index + 1);
  os << "t,x" << s << ",rhoL" << s << ",rhoU" << s << ",softL" << s
     << ",softU" << s << ",hardL" << s << ",hardU" << s << '\n';
  const int i = index;
  write_rows(
      os, trace, [i](const TraceRow& r) { return r.x[i]; },
      [i](const TraceRow& r) { return r.rho_lower[i]; },
      [i](const TraceRow& r) { return r.rho_upper[i]; },
      [i](const TraceRow& r) { return r.soft_lower[i]; },
      [i](const TraceRow& r) { return r.soft_upper[i]; },
      [i](const TraceRow& r) { return r.hard_lower[i]; },
      [i](const TraceRow& r) { return r.hard_upper[i]; });
}

void write_phi_csv(std::ostream& os, const SimTrace& trace, int index) {
  const std::string s = "_" + std::to_string(index + 1);
  os << "t,phiL" << s << ",phiU" << s << '\n';
  const int i = index;
  write_rows(
      os, trace, [i](const TraceRow& r) { return r.phi_lower[i]; },
      [i](const TraceRow& r) { return r.phi_upper[i]; });
}

void write_plane_csv(std::ostream& os, const SimTrace& trace) {
  if (trace.outputs != 2) {
    throw std::invalid_argument("plane data needs exactly two outputs");
  }
  os << "t,x_1,x_2,ref_1,ref_2,hardL_1,hardU_1,hardL_2,hardU_2\n";
  auto ref = [](int i) {
    return [i](const TraceRow& r) {
      return 0.5 * (r.soft_lower[i] + r.soft_upper[i]);
    };
  };
  write_rows(
      os, trace, [](const TraceRow& r) { return r.x[0]; },
      [](const TraceRow& r) { return r.x[1]; }, ref(0), ref(1),
      [](const TraceRow& r) { return r.hard_lower[0]; },
      [](const TraceRow& r) { return r.hard_upper[0]; },
      [](const TraceRow& r) { return r.hard_lower[1]; },
      [](const TraceRow& r) { return r.hard_upper[1]; });
}

}  // namespace ccfunnel
