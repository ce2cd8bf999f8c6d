#include "swarmtrust/pso.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace swarmtrust::pso {

namespace {

double clamp_unit(double v) {
    return std::clamp(v, -1.0, 1.0);
}

void require_finite(const Point2& p) {
    if (!std::isfinite(p.t) || !std::isfinite(p.r)) {
        throw std::domain_error("non-finite point");
    }
}

/// Appends one row per particle at the swarm's current iteration and returns
/// the max fitness seen.
double snapshot(const SwarmState& swarm, std::vector<TraceRow>& trace) {
    double worst = 0.0;
    for (const Particle& p : swarm.particles) {
        const double f = fitness(p.position, swarm.global_best_raw);
        worst = std::max(worst, f);
        trace.push_back({swarm.iteration, p.id, p.position, p.velocity, f, swarm.global_best_raw});
    }
    return worst;
}

}  // namespace

double impact_factor(double recommender_trust) {
    if (!std::isfinite(recommender_trust) || recommender_trust < -1.0 || recommender_trust > 1.0) {
        throw std::domain_error("recommender trust outside [-1, 1]");
    }
    return (1.0 + recommender_trust) / 2.0;
}

double fitness(const Point2& position, const Point2& global_best) {
    require_finite(position);
    require_finite(global_best);
    const double dt = position.t - global_best.t;
    const double dr = position.r - global_best.r;
    return std::sqrt(dt * dt + dr * dr);
}

void validate(const Config& config) {
    if (!std::isfinite(config.c1) || config.c1 <= 0.0) {
        throw std::invalid_argument("c1 must be > 0");
    }
    if (!std::isfinite(config.c2) || config.c2 <= 0.0) {
        throw std::invalid_argument("c2 must be > 0");
    }
    if (config.max_iterations < 1) {
        throw std::invalid_argument("max_iterations must be >= 1");
    }
    if (!std::isfinite(config.epsilon) || config.epsilon <= 0.0) {
        throw std::invalid_argument("epsilon must be > 0");
    }
}

Point2 weighted_global_best(std::span<const Particle> particles) {
    if (particles.empty()) {
        throw std::invalid_argument("empty swarm");
    }
    double sum_t = 0.0;
    double sum_r = 0.0;
    for (const Particle& p : particles) {
        sum_t += p.impact * p.position.t;
        sum_r += p.impact * p.position.r;
    }
    const double size = static_cast<double>(particles.size());
    return {sum_t / size, sum_r / size};
}

double max_fitness(const SwarmState& swarm) {
    double worst = 0.0;
    for (const Particle& p : swarm.particles) {
        worst = std::max(worst, fitness(p.position, swarm.global_best_raw));
    }
    return worst;
}

void step(SwarmState& swarm, const Config& config, UniformSource& rng) {
    if (swarm.particles.empty()) {
        throw std::invalid_argument("empty swarm");
    }
    const Point2 gbest = swarm.global_best_raw;
    for (Particle& p : swarm.particles) {
        const double r1t = rng.next();
        const double r2t = rng.next();
        const double r1r = rng.next();
        const double r2r = rng.next();
        p.velocity.t = config.c1 * r1t * (p.personal_best_position.t - p.position.t) +
                       config.c2 * r2t * (gbest.t - p.position.t);
        p.velocity.r = config.c1 * r1r * (p.personal_best_position.r - p.position.r) +
                       config.c2 * r2r * (gbest.r - p.position.r);
        p.position.t = p.position.t + p.velocity.t;
        p.position.r = p.position.r + p.velocity.r;
        if (config.clamp_positions) {
            p.position.t = clamp_unit(p.position.t);
            p.position.r = clamp_unit(p.position.r);
        }
    }
    swarm.global_best_raw = weighted_global_best(swarm.particles);
    for (Particle& p : swarm.particles) {
        const double f = fitness(p.position, swarm.global_best_raw);
        if (f < p.personal_best_fitness) {
            p.personal_best_fitness = f;
            p.personal_best_position = p.position;
        }
    }
    swarm.iteration += 1;
}

Point2 normalize_global_best(const Point2& global_best, std::span<const Particle> particles) {
    if (particles.empty()) {
        throw std::invalid_argument("empty swarm");
    }
    const auto normalize_coord = [&](double g, double Point2::* coord) {
        double mn = particles[0].position.*coord;
        double mx = mn;
        for (const Particle& p : particles) {
            mn = std::min(mn, p.position.*coord);
            mx = std::max(mx, p.position.*coord);
        }
        if (mx == mn) {
            return clamp_unit(mn);
        }
        return 2.0 * (g - mn) / (mx - mn) - 1.0;
    };
    return {normalize_coord(global_best.t, &Point2::t), normalize_coord(global_best.r, &Point2::r)};
}

SwarmState make_swarm(std::span<const Recommendation> recommendations, ImpactFn impact) {
    if (recommendations.empty()) {
        throw std::invalid_argument("empty recommendation set");
    }
    SwarmState swarm;
    swarm.particles.reserve(recommendations.size());
    int id = 0;
    for (const Recommendation& rec : recommendations) {
        if (rec.recommender_id.empty()) {
            throw std::domain_error("empty recommender id");
        }
        Particle p;
        p.id = id++;
        p.position = {rec.recommender_trust.value(), rec.reported_value.value()};
        p.velocity = {0.0, 0.0};
        p.impact = impact(rec.recommender_trust.value());
        p.personal_best_position = p.position;
        swarm.particles.push_back(p);
    }
    swarm.global_best_raw = weighted_global_best(swarm.particles);
    for (Particle& p : swarm.particles) {
        p.personal_best_fitness = fitness(p.position, swarm.global_best_raw);
    }
    return swarm;
}

AggregationResult aggregate(std::span<const Recommendation> recommendations, const Config& config,
                            ImpactFn impact) {
    validate(config);
    if (recommendations.empty()) {
        throw std::invalid_argument("empty recommendation set");
    }

    if (recommendations.size() == 1) {
        // A one-particle swarm is already its own mean; return the
        // impact-damped reported value directly.
        const Recommendation& rec = recommendations.front();
        if (rec.recommender_id.empty()) {
            throw std::domain_error("empty recommender id");
        }
        const double theta = impact(rec.recommender_trust.value());
        const Point2 position{rec.recommender_trust.value(), rec.reported_value.value()};
        AggregationResult result;
        result.global_best_raw = {theta * position.t, theta * position.r};
        result.global_best_normalized = {clamp_unit(result.global_best_raw.t),
                                         clamp_unit(result.global_best_raw.r)};
        result.trust_weight = result.global_best_normalized.r;
        result.iterations_used = 0;
        result.converged = true;
        result.trace.push_back({0, 0, position, Point2{},
                                fitness(position, result.global_best_raw),
                                result.global_best_raw});
        return result;
    }

    SwarmState swarm = make_swarm(recommendations, impact);
    SeededRng rng(config.seed);
    AggregationResult result;
    while (true) {
        const double worst = snapshot(swarm, result.trace);
        if (worst < config.epsilon) {
            result.converged = true;
            break;
        }
        if (swarm.iteration >= config.max_iterations) {
            result.converged = false;
            break;
        }
        step(swarm, config, rng);
    }
    result.iterations_used = swarm.iteration;
    result.global_best_raw = swarm.global_best_raw;
    result.global_best_normalized = normalize_global_best(swarm.global_best_raw, swarm.particles);
    result.trust_weight = clamp_unit(result.global_best_normalized.r);
    return result;
}

}  // namespace swarmtrust::pso
