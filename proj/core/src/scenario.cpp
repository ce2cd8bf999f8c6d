#include "swarmtrust/scenario.hpp"

#include <fstream>

#include "swarmtrust/io.hpp"

namespace swarmtrust {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

sim::Config parse_scenario(std::istream& in) {
    sim::Config config;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = trim(line);
        if (text.empty() || text.front() == '#') {
            continue;
        }
        const std::size_t eq = text.find('=');
        if (eq == std::string::npos) {
            throw ParseError(line_no, "expected key=value, got '" + text + "'");
        }
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (key.empty()) {
            throw ParseError(line_no, "empty key");
        }
        if (key == "max_population") {
            config.max_population = parse_int(value, line_no);
        } else if (key == "initial_clients") {
            config.initial_clients = parse_int(value, line_no);
        } else if (key == "initial_providers") {
            config.initial_providers = parse_int(value, line_no);
        } else if (key == "arrival_probability") {
            config.arrival_probability = parse_real(value, line_no);
        } else if (key == "departure_probability") {
            config.departure_probability = parse_real(value, line_no);
        } else if (key == "malicious_fraction") {
            config.malicious_fraction = parse_real(value, line_no);
        } else if (key == "acquaintances_per_provider") {
            config.acquaintances_per_provider = parse_int(value, line_no);
        } else if (key == "ticks") {
            config.ticks = parse_int(value, line_no);
        } else if (key == "seed") {
            config.seed = parse_u64(value, line_no);
        } else if (key == "threshold") {
            config.threshold = parse_real(value, line_no);
        } else if (key == "c1") {
            config.pso.c1 = parse_real(value, line_no);
        } else if (key == "c2") {
            config.pso.c2 = parse_real(value, line_no);
        } else if (key == "epsilon") {
            config.pso.epsilon = parse_real(value, line_no);
        } else if (key == "max_iterations") {
            config.pso.max_iterations = parse_int(value, line_no);
        } else {
            throw ParseError(line_no, "unknown key '" + key + "'");
        }
    }
    return config;
}

sim::Config load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open: " + path);
    }
    return parse_scenario(in);
}

}  // namespace swarmtrust
