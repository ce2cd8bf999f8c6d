#pragma once

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "swarmtrust/pso.hpp"
#include "swarmtrust/trust.hpp"

namespace swarmtrust {

/// Parse failure carrying a 1-based line number for diagnostics.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& message);
    int line() const { return line_; }

private:
    int line_;
};

/// File open/write failure, distinct from parse failures so callers can map
/// them to different exit codes.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shortest general form at 17 significant digits: parses back bit-exactly.
std::string fmt_real(double value);

/// Strict full-token parses; throw ParseError naming `line` on failure.
double parse_real(const std::string& token, int line);
std::uint64_t parse_u64(const std::string& token, int line);
int parse_int(const std::string& token, int line);

std::vector<std::string> split_csv(const std::string& line);

inline constexpr const char* kTraceHeader =
    "iteration,particle_id,pos_t,pos_r,vel_t,vel_r,fitness,gbest_t,gbest_r";

void write_trace(std::span<const pso::TraceRow> rows, std::ostream& out);
void write_trace(std::span<const pso::TraceRow> rows, const std::string& path);
std::vector<pso::TraceRow> parse_trace(std::istream& in);

inline constexpr const char* kRecommendationsHeader =
    "recommender_id,recommender_trust,reported_value";

/// Loads recommendation rows. The canonical header line is skipped when
/// present; a headerless file is accepted so one-line fixtures stay
/// hand-writable.
std::vector<Recommendation> load_recommendations(std::istream& in);
std::vector<Recommendation> load_recommendations(const std::string& path);

}  // namespace swarmtrust
