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

// Trace CSV format.
//
// Header row, then one row per recorded instant. Columns are `t` followed by
// one group per output i (1-based):
//   x_i,v_i,vd_i,ev_i,u_i,xhat_i,evhat_i,phiL_i,phiU_i,rhoL_i,rhoU_i,
//   softL_i,softU_i,hardL_i,hardU_i,gammav_i
// Values are printed with 17 significant digits. A trailing comment block
// holds the fault log (`# fault,<kind>,<time>,<index>,<message>`) and a
// closing `# rows,<count>` line used to detect truncated files.

#ifndef CCFUNNEL_TRACE_IO_H_
#define CCFUNNEL_TRACE_IO_H_

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccfunnel/engine.h"

namespace ccfunnel {

class TraceFormatError : public std::runtime_error {
 public:
  TraceFormatError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

std::vector<std::string> trace_columns(int outputs);

void write_trace_csv(std::ostream& os, const SimTrace& trace);
// Throws TraceFormatError when the header does not match `outputs`, a row has
// the wrong number of fields or an unparsable number, or the closing row
// count is missing or wrong.
SimTrace read_trace_csv(std::istream& is, int outputs);

// Per-figure plot data.
// t,x_i,rhoL_i,rhoU_i,softL_i,softU_i,hardL_i,hardU_i  (0-based index)
void write_funnel_csv(std::ostream& os, const SimTrace& trace, int index);
// t,phiL_i,phiU_i
void write_phi_csv(std::ostream& os, const SimTrace& trace, int index);
// t,x_1,x_2,ref_1,ref_2,hardL_1,hardU_1,hardL_2,hardU_2; the reference is
// the soft-band midpoint. Requires two outputs.
void write_plane_csv(std::ostream& os, const SimTrace& trace);

}  // namespace ccfunnel

#endif  // CCFUNNEL_TRACE_IO_H_
