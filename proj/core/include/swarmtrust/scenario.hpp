#pragma once

#include <iosfwd>
#include <string>

#include "swarmtrust/sim.hpp"

namespace swarmtrust {

/// Parses a key=value scenario document into a sim::Config. Blank lines and
/// '#' comments are skipped; unknown keys are rejected with the offending
/// line. Recognized keys: max_population, initial_clients, initial_providers,
/// arrival_probability, departure_probability, malicious_fraction,
/// acquaintances_per_provider, ticks, seed, threshold, c1, c2, epsilon,
/// max_iterations. Absent keys keep their defaults.
sim::Config parse_scenario(std::istream& in);
sim::Config load_scenario(const std::string& path);

}  // namespace swarmtrust
