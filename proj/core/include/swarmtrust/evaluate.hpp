#pragma once

#include <functional>
#include <span>
#include <string>

#include "swarmtrust/pso.hpp"
#include "swarmtrust/trust.hpp"

namespace swarmtrust {

enum class Provenance { StoredRecord, NeutralDefault, SingleRecommendation, PsoAggregation };

const char* to_string(Provenance provenance);

struct TrustDecision {
    Verdict verdict = Verdict::Untrusted;
    TrustWeight weight;
    Provenance provenance = Provenance::NeutralDefault;
};

using AggregateFn =
    std::function<pso::AggregationResult(std::span<const Recommendation>, const pso::Config&)>;

/// Admission flow for one client: a stored record decides by itself (the
/// reply set is never consulted), an empty reply set falls back to the
/// neutral zero, anything else goes through aggregation. `aggregate_fn` is an
/// injection seam for tests; empty means pso::aggregate.
TrustDecision evaluate_client(const TrustDatabase& db, const std::string& client_id,
                              std::span<const Recommendation> recommendations, double threshold,
                              const pso::Config& pso_config, const AggregateFn& aggregate_fn = {});

}  // namespace swarmtrust
