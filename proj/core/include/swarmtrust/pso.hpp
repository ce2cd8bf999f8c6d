#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "swarmtrust/rng.hpp"
#include "swarmtrust/trust.hpp"

namespace swarmtrust::pso {

/// A point in the (recommender-trust, reported-value) plane.
struct Point2 {
    double t = 0.0;
    double r = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

struct Particle {
    int id = 0;
    Point2 position;
    Point2 velocity;
    Point2 personal_best_position;
    double personal_best_fitness = 0.0;
    double impact = 1.0;  // per-particle weight, fixed for the particle's lifetime
};

struct Config {
    double c1 = 1.4;        // nostalgia: pull toward the personal best
    double c2 = 1.6;        // envy: pull toward the global best, kept above c1
    int max_iterations = 100;
    double epsilon = 0.01;  // convergence tolerance on the max fitness
    std::uint64_t seed = 0;
    bool clamp_positions = true;
};

/// Throws std::invalid_argument when a field is outside its domain.
void validate(const Config& config);

struct SwarmState {
    std::vector<Particle> particles;
    Point2 global_best_raw;  // impact-weighted mean of current positions
    int iteration = 0;
};

/// One row per particle per recorded iteration.
struct TraceRow {
    int iteration = 0;
    int particle_id = 0;
    Point2 position;
    Point2 velocity;
    double fitness = 0.0;
    Point2 global_best;

    friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

struct AggregationResult {
    double trust_weight = 0.0;
    Point2 global_best_raw;
    Point2 global_best_normalized;
    int iterations_used = 0;
    bool converged = false;
    std::vector<TraceRow> trace;
};

/// Maps a recommender's standing in [-1, 1] onto a weight in [0, 1] via
/// (1 + T) / 2, zeroing out fully distrusted recommenders.
double impact_factor(double recommender_trust);

/// Pluggable impact map; aggregate() and make_swarm() default to impact_factor.
using ImpactFn = double (*)(double);

/// Euclidean distance between a position and the global best.
double fitness(const Point2& position, const Point2& global_best);

/// Sum of impact-weighted positions divided by the swarm size (the size, not
/// the impact sum, so low-impact swarms pull the result toward the origin).
Point2 weighted_global_best(std::span<const Particle> particles);

/// Max over particles of the current-position fitness.
double max_fitness(const SwarmState& swarm);

/// Advances the swarm one iteration. Four uniforms are drawn per particle in
/// a fixed order (particle index ascending; coordinate t then r; r1 before
/// r2). Velocity is rebuilt from the two attraction terms each iteration,
/// positions are clamped to [-1, 1]^2 when configured, the raw global best is
/// recomputed from the moved swarm, and personal bests update on strict
/// fitness improvement against that new global best.
void step(SwarmState& swarm, const Config& config, UniformSource& rng);

/// Rescales the raw global best against the current position span per
/// coordinate: 2 * (g - min) / (max - min) - 1. A degenerate span yields that
/// coordinate's common position value clamped to [-1, 1].
Point2 normalize_global_best(const Point2& global_best, std::span<const Particle> particles);

/// One particle per recommendation: position (T, R), zero velocity, impact
/// Theta(T), personal best at the initial position.
SwarmState make_swarm(std::span<const Recommendation> recommendations,
                      ImpactFn impact = impact_factor);

/// Full aggregation: iterate step() until the max fitness drops below
/// epsilon or the iteration budget runs out, then normalize and take the
/// reported-value coordinate (clamped) as the trust weight. A single
/// recommendation bypasses the swarm and returns Theta(T) * R directly.
/// Identical inputs and seed give a bit-identical result and trace.
AggregationResult aggregate(std::span<const Recommendation> recommendations, const Config& config,
                            ImpactFn impact = impact_factor);

}  // namespace swarmtrust::pso
