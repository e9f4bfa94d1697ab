#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "fixpoint/scheme.hpp"

namespace fixpoint {

//! Column layout of a trace table: point dimension and the number of
//! auxiliary stages (p - 1).
struct TraceShape {
    std::size_t dim = 0;
    std::size_t y_count = 0;
};

//! 17 significant digits, enough for an exact double round trip.
std::string format_double17(double value);

//! Columns: n, x_0.., y1_0.., .., residual, pair_gap, d_n. The residual
//! cell is empty when the record has none. LF line endings, byte-stable
//! for identical traces.
void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace,
                     TraceShape shape);
void write_trace_csv_file(const std::string& path, const std::vector<TraceRecord>& trace,
                          TraceShape shape);

struct ParsedTrace {
    TraceShape shape;
    std::vector<TraceRecord> records;
};

//! Strict inverse of write_trace_csv; malformed input raises InvalidInput
//! with a line diagnostic. Parsed records reproduce every stored double
//! bit-exactly.
ParsedTrace read_trace_csv(std::istream& in, const std::string& origin = "csv");
ParsedTrace read_trace_csv_file(const std::string& path);

}  // namespace fixpoint
