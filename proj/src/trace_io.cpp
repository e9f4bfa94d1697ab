#include "fixpoint/trace_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "fixpoint/errors.hpp"

namespace fixpoint {

namespace {

[[noreturn]] void bad_line(const std::string& origin, std::size_t line,
                           const std::string& what) {
    throw InvalidInput(origin + ": line " + std::to_string(line) + ": " + what);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_double(const std::string& field, const std::string& origin, std::size_t line) {
    if (field.empty()) bad_line(origin, line, "empty numeric field");
    const char* begin = field.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end != begin + field.size()) bad_line(origin, line, "malformed number '" + field + "'");
    return v;
}

long parse_long(const std::string& field, const std::string& origin, std::size_t line) {
    if (field.empty()) bad_line(origin, line, "empty index field");
    const char* begin = field.c_str();
    char* end = nullptr;
    const long v = std::strtol(begin, &end, 10);
    if (end != begin + field.size()) bad_line(origin, line, "malformed index '" + field + "'");
    return v;
}

void check_record_shape(const TraceRecord& rec, TraceShape shape) {
    bool ok = rec.x.dim() == shape.dim && rec.ys.size() == shape.y_count;
    for (const Point& y : rec.ys) ok = ok && y.dim() == shape.dim;
    if (!ok) throw InvalidInput("trace record shape does not match the declared layout");
}

}  // namespace

std::string format_double17(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace,
                     TraceShape shape) {
    if (shape.dim == 0) throw InvalidInput("trace layout needs dim >= 1");

    out << "n";
    for (std::size_t i = 0; i < shape.dim; ++i) out << ",x_" << i;
    for (std::size_t k = 1; k <= shape.y_count; ++k) {
        for (std::size_t i = 0; i < shape.dim; ++i) out << ",y" << k << "_" << i;
    }
    out << ",residual,pair_gap,d_n\n";

    for (const TraceRecord& rec : trace) {
        check_record_shape(rec, shape);
        out << rec.n;
        for (std::size_t i = 0; i < shape.dim; ++i) out << ',' << format_double17(rec.x[i]);
        for (const Point& y : rec.ys) {
            for (std::size_t i = 0; i < shape.dim; ++i) out << ',' << format_double17(y[i]);
        }
        out << ',';
        if (rec.residual) out << format_double17(*rec.residual);
        out << ',' << format_double17(rec.pair_gap);
        out << ',' << format_double17(rec.dn) << '\n';
    }
}

void write_trace_csv_file(const std::string& path, const std::vector<TraceRecord>& trace,
                          TraceShape shape) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot open trace csv for writing: " + path);
    write_trace_csv(out, trace, shape);
    out.flush();
    if (!out) throw InvalidInput("failed writing trace csv: " + path);
}

ParsedTrace read_trace_csv(std::istream& in, const std::string& origin) {
    std::string line;
    if (!std::getline(in, line)) throw InvalidInput(origin + ": missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const std::vector<std::string> head = split_csv(line);
    std::size_t col = 0;
    if (head.empty() || head[col] != "n") bad_line(origin, 1, "first column must be 'n'");
    ++col;

    TraceShape shape;
    while (col < head.size() && head[col] == "x_" + std::to_string(shape.dim)) {
        ++shape.dim;
        ++col;
    }
    if (shape.dim == 0) bad_line(origin, 1, "expected x_0.. coordinate columns");

    while (col < head.size() &&
           head[col] == "y" + std::to_string(shape.y_count + 1) + "_0") {
        const std::string prefix = "y" + std::to_string(shape.y_count + 1) + "_";
        for (std::size_t i = 0; i < shape.dim; ++i, ++col) {
            if (col >= head.size() || head[col] != prefix + std::to_string(i)) {
                bad_line(origin, 1, "ragged column group '" + prefix + "'");
            }
        }
        ++shape.y_count;
    }

    if (head.size() - col != 3 || head[col] != "residual" || head[col + 1] != "pair_gap" ||
        head[col + 2] != "d_n") {
        bad_line(origin, 1, "trailing columns must be residual,pair_gap,d_n");
    }

    const std::size_t expected = 1 + shape.dim * (1 + shape.y_count) + 3;
    ParsedTrace parsed;
    parsed.shape = shape;

    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        const std::vector<std::string> fields = split_csv(line);
        if (fields.size() != expected) {
            bad_line(origin, lineno,
                     "expected " + std::to_string(expected) + " fields, got " +
                         std::to_string(fields.size()));
        }

        TraceRecord rec;
        std::size_t f = 0;
        rec.n = parse_long(fields[f++], origin, lineno);
        rec.x.coords.resize(shape.dim);
        for (std::size_t i = 0; i < shape.dim; ++i) {
            rec.x.coords[i] = parse_double(fields[f++], origin, lineno);
        }
        rec.ys.resize(shape.y_count);
        for (std::size_t k = 0; k < shape.y_count; ++k) {
            rec.ys[k].coords.resize(shape.dim);
            for (std::size_t i = 0; i < shape.dim; ++i) {
                rec.ys[k].coords[i] = parse_double(fields[f++], origin, lineno);
            }
        }
        if (fields[f].empty()) {
            rec.residual.reset();
            ++f;
        } else {
            rec.residual = parse_double(fields[f++], origin, lineno);
        }
        rec.pair_gap = parse_double(fields[f++], origin, lineno);
        rec.dn = parse_double(fields[f++], origin, lineno);
        parsed.records.push_back(std::move(rec));
    }
    return parsed;
}

ParsedTrace read_trace_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot read trace csv: " + path);
    return read_trace_csv(in, path);
}

}  // namespace fixpoint
