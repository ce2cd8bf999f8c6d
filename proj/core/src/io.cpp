#include "swarmtrust/io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>

namespace swarmtrust {

namespace {

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    return line;
}

}  // namespace

ParseError::ParseError(int line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

std::string fmt_real(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

double parse_real(const std::string& token, int line) {
    double value = 0.0;
    const char* last = token.data() + token.size();
    const auto res = std::from_chars(token.data(), last, value);
    if (token.empty() || res.ec != std::errc{} || res.ptr != last) {
        throw ParseError(line, "not a number: '" + token + "'");
    }
    return value;
}

std::uint64_t parse_u64(const std::string& token, int line) {
    std::uint64_t value = 0;
    const char* last = token.data() + token.size();
    const auto res = std::from_chars(token.data(), last, value);
    if (token.empty() || res.ec != std::errc{} || res.ptr != last) {
        throw ParseError(line, "not an unsigned integer: '" + token + "'");
    }
    return value;
}

int parse_int(const std::string& token, int line) {
    int value = 0;
    const char* last = token.data() + token.size();
    const auto res = std::from_chars(token.data(), last, value);
    if (token.empty() || res.ec != std::errc{} || res.ptr != last) {
        throw ParseError(line, "not an integer: '" + token + "'");
    }
    return value;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

void write_trace(std::span<const pso::TraceRow> rows, std::ostream& out) {
    out << kTraceHeader << '\n';
    for (const pso::TraceRow& row : rows) {
        out << row.iteration << ',' << row.particle_id << ',' << fmt_real(row.position.t) << ','
            << fmt_real(row.position.r) << ',' << fmt_real(row.velocity.t) << ','
            << fmt_real(row.velocity.r) << ',' << fmt_real(row.fitness) << ','
            << fmt_real(row.global_best.t) << ',' << fmt_real(row.global_best.r) << '\n';
    }
}

void write_trace(std::span<const pso::TraceRow> rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open for writing: " + path);
    }
    write_trace(rows, out);
    if (!out) {
        throw IoError("write failed: " + path);
    }
}

std::vector<pso::TraceRow> parse_trace(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || strip_cr(line) != kTraceHeader) {
        throw ParseError(1, std::string("expected header '") + kTraceHeader + "'");
    }
    std::vector<pso::TraceRow> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        const auto fields = split_csv(line);
        if (fields.size() != 9) {
            throw ParseError(line_no, "expected 9 fields");
        }
        pso::TraceRow row;
        row.iteration = parse_int(fields[0], line_no);
        row.particle_id = parse_int(fields[1], line_no);
        row.position = {parse_real(fields[2], line_no), parse_real(fields[3], line_no)};
        row.velocity = {parse_real(fields[4], line_no), parse_real(fields[5], line_no)};
        row.fitness = parse_real(fields[6], line_no);
        row.global_best = {parse_real(fields[7], line_no), parse_real(fields[8], line_no)};
        rows.push_back(row);
    }
    return rows;
}

std::vector<Recommendation> load_recommendations(std::istream& in) {
    std::vector<Recommendation> recommendations;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line_no == 1 && line == kRecommendationsHeader) {
            continue;
        }
        const auto fields = split_csv(line);
        if (fields.size() != 3) {
            throw ParseError(line_no, "expected 3 fields (recommender_id,recommender_trust,reported_value)");
        }
        if (fields[0].empty()) {
            throw ParseError(line_no, "empty recommender id");
        }
        Recommendation rec;
        rec.recommender_id = fields[0];
        try {
            rec.recommender_trust = TrustWeight(parse_real(fields[1], line_no));
            rec.reported_value = TrustWeight(parse_real(fields[2], line_no));
        } catch (const std::domain_error& e) {
            throw ParseError(line_no, e.what());
        }
        recommendations.push_back(std::move(rec));
    }
    return recommendations;
}

std::vector<Recommendation> load_recommendations(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open: " + path);
    }
    return load_recommendations(in);
}

}  // namespace swarmtrust
