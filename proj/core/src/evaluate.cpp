#include "swarmtrust/evaluate.hpp"

#include <cmath>
#include <stdexcept>

namespace swarmtrust {

const char* to_string(Provenance provenance) {
    switch (provenance) {
        case Provenance::StoredRecord: return "StoredRecord";
        case Provenance::NeutralDefault: return "NeutralDefault";
        case Provenance::SingleRecommendation: return "SingleRecommendation";
        case Provenance::PsoAggregation: return "PsoAggregation";
    }
    return "?";
}

TrustDecision evaluate_client(const TrustDatabase& db, const std::string& client_id,
                              std::span<const Recommendation> recommendations, double threshold,
                              const pso::Config& pso_config, const AggregateFn& aggregate_fn) {
    if (!std::isfinite(threshold) || threshold < -1.0 || threshold > 1.0) {
        throw std::domain_error("threshold outside [-1, 1]");
    }
    if (const auto stored = db.lookup(client_id)) {
        return {decide(stored->weight, threshold), stored->weight, Provenance::StoredRecord};
    }
    if (recommendations.empty()) {
        const TrustWeight neutral;
        return {decide(neutral, threshold), neutral, Provenance::NeutralDefault};
    }
    const pso::AggregationResult aggregated = aggregate_fn
                                                  ? aggregate_fn(recommendations, pso_config)
                                                  : pso::aggregate(recommendations, pso_config);
    const TrustWeight weight(aggregated.trust_weight);
    const Provenance provenance = recommendations.size() == 1 ? Provenance::SingleRecommendation
                                                              : Provenance::PsoAggregation;
    return {decide(weight, threshold), weight, provenance};
}

}  // namespace swarmtrust
