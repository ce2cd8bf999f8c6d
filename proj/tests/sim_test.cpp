#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "swarmtrust/sim.hpp"

using namespace swarmtrust;
using sim::Behavior;
using sim::Event;
using sim::EventKind;

namespace {

sim::Config small_config() {
    sim::Config config;
    config.initial_clients = 10;
    config.initial_providers = 5;
    config.ticks = 100;
    config.seed = 2024;
    return config;
}

int count_events(const sim::EventLog& events, EventKind kind) {
    return static_cast<int>(
        std::count_if(events.begin(), events.end(),
                      [&](const Event& e) { return e.kind == kind; }));
}

bool detail_has_provenance(const Event& event, const std::string& provenance) {
    return event.detail.find(";provenance=" + provenance) != std::string::npos;
}

}  // namespace

TEST_CASE("initial worlds are built as configured") {
    SUBCASE("a lone provider has no peers to befriend") {
        sim::Config config;
        config.initial_clients = 0;
        config.initial_providers = 1;
        const sim::World world(config);
        REQUIRE(world.providers().size() == 1);
        CHECK(world.providers().begin()->second.acquaintances.empty());
        CHECK(world.clients().empty());
    }
    SUBCASE("the malicious share rounds down") {
        sim::Config config;
        config.initial_clients = 10;
        config.initial_providers = 5;
        config.malicious_fraction = 0.2;
        const sim::World world(config);
        int malicious = 0;
        for (const auto& [id, client] : world.clients()) {
            if (client.behavior == Behavior::Malicious) {
                ++malicious;
                CHECK(client.misbehavior_probability >= 0.5);
            } else {
                CHECK(client.misbehavior_probability < 0.5);
            }
        }
        CHECK(malicious == 2);
    }
    SUBCASE("acquaintances exclude the owner and respect the budget") {
        sim::Config config;
        config.initial_clients = 0;
        config.initial_providers = 6;
        config.acquaintances_per_provider = 3;
        const sim::World world(config);
        for (const auto& [id, agent] : world.providers()) {
            CHECK(agent.acquaintances.size() == 3);
            CHECK_FALSE(agent.acquaintances.contains(id));
        }
    }
    SUBCASE("same config and seed build identical worlds") {
        const sim::Config config = small_config();
        const sim::World a(config);
        const sim::World b(config);
        REQUIRE(a.clients().size() == b.clients().size());
        for (const auto& [id, client] : a.clients()) {
            REQUIRE(b.clients().contains(id));
            CHECK(b.clients().at(id).behavior == client.behavior);
        }
        for (const auto& [id, agent] : a.providers()) {
            REQUIRE(b.providers().contains(id));
            CHECK(b.providers().at(id).acquaintances == agent.acquaintances);
        }
    }
    SUBCASE("invalid configurations are rejected by key") {
        sim::Config config = small_config();
        config.max_population = 10;
        CHECK_THROWS_WITH_AS(sim::World{config}, doctest::Contains("max_population"),
                             std::invalid_argument);
        config = small_config();
        config.arrival_probability = 1.5;
        CHECK_THROWS_WITH_AS(sim::World{config}, doctest::Contains("arrival_probability"),
                             std::invalid_argument);
        config = small_config();
        config.threshold = -2.0;
        CHECK_THROWS_WITH_AS(sim::World{config}, doctest::Contains("threshold"),
                             std::invalid_argument);
        config = small_config();
        config.ticks = -1;
        CHECK_THROWS_WITH_AS(sim::World{config}, doctest::Contains("ticks"),
                             std::invalid_argument);
    }
}

TEST_CASE("a full world admits no more agents") {
    sim::Config config;
    config.max_population = 15;
    config.initial_clients = 10;
    config.initial_providers = 5;
    config.arrival_probability = 1.0;
    config.departure_probability = 0.0;
    config.ticks = 50;
    const auto result = sim::run(config);
    for (const int population : result.metrics.population_timeline) {
        CHECK(population == 15);
    }
    CHECK(count_events(result.events, EventKind::Arrive) == 0);
}

TEST_CASE("gather_recommendations") {
    sim::Config config;
    config.initial_clients = 0;
    config.initial_providers = 4;
    config.acquaintances_per_provider = 3;  // complete graph on 4 providers
    config.seed = 5;
    sim::World world(config);
    const std::string asker = world.providers().begin()->first;

    SUBCASE("nobody knows the client") {
        CHECK(world.gather_recommendations(asker, "c000001").empty());
    }
    SUBCASE("one informed acquaintance") {
        auto ids = world.providers().begin();
        ++ids;
        const std::string informed = ids->first;
        world.find_provider(informed)->trust_db.record_outcome("c000001", 0.8, 1);
        world.find_provider(asker)->trust_db.record_outcome(informed, 0.6, 1);
        const auto recs = world.gather_recommendations(asker, "c000001");
        REQUIRE(recs.size() == 1);
        CHECK(recs[0].recommender_id == informed);
        CHECK(recs[0].recommender_trust.value() == 0.6);
        CHECK(recs[0].reported_value.value() == 0.8);
    }
    SUBCASE("three informed acquaintances arrive in id order") {
        // Hand-enumerated fixture: p2..p4 know the client, the asker only
        // trusts p3; expected replies (p2, 0, 0.5), (p3, 0.4, -0.2), (p4, 0, 0.9).
        world.find_provider("p000002")->trust_db.record_outcome("c000001", 0.5, 1);
        world.find_provider("p000003")->trust_db.record_outcome("c000001", -0.2, 1);
        world.find_provider("p000004")->trust_db.record_outcome("c000001", 0.9, 1);
        world.find_provider("p000001")->trust_db.record_outcome("p000003", 0.4, 1);
        const auto recs = world.gather_recommendations("p000001", "c000001");
        REQUIRE(recs.size() == 3);
        CHECK(recs[0].recommender_id == "p000002");
        CHECK(recs[0].recommender_trust.value() == 0.0);
        CHECK(recs[0].reported_value.value() == 0.5);
        CHECK(recs[1].recommender_id == "p000003");
        CHECK(recs[1].recommender_trust.value() == 0.4);
        CHECK(recs[1].reported_value.value() == -0.2);
        CHECK(recs[2].recommender_id == "p000004");
        CHECK(recs[2].recommender_trust.value() == 0.0);
        CHECK(recs[2].reported_value.value() == 0.9);
    }
    SUBCASE("unknown provider") {
        CHECK_THROWS_AS(world.gather_recommendations("p999999", "c1"), std::domain_error);
    }
}

TEST_CASE("trust queries are answered with well-formed responses") {
    sim::Config config;
    config.initial_clients = 0;
    config.initial_providers = 2;
    config.acquaintances_per_provider = 1;
    sim::World world(config);
    world.find_provider("p000002")->trust_db.record_outcome("c000009", -0.4, 3);

    const sim::Message query{sim::MessageKind::TrustQuery, "p000001", "p000002", "c000009",
                             std::nullopt};
    const auto response = world.answer_trust_query(query);
    REQUIRE(response.has_value());
    CHECK(response->kind == sim::MessageKind::TrustResponse);
    CHECK(response->sender == "p000002");
    CHECK(response->recipient == "p000001");
    REQUIRE(response->recommendation.has_value());
    CHECK(response->recommendation->recommender_id == response->sender);
    CHECK(response->recommendation->reported_value.value() == -0.4);
    CHECK(response->recommendation->recommender_trust.value() == 0.0);

    // Unknown client: no reply.
    CHECK_FALSE(world.answer_trust_query({sim::MessageKind::TrustQuery, "p000001", "p000002",
                                          "c000001", std::nullopt})
                    .has_value());
    // Departed recipient: no reply.
    CHECK_FALSE(world.answer_trust_query({sim::MessageKind::TrustQuery, "p000001", "p999999",
                                          "c000009", std::nullopt})
                    .has_value());
}

TEST_CASE("zero ticks produce an empty run") {
    sim::Config config = small_config();
    config.ticks = 0;
    const auto result = sim::run(config);
    CHECK(result.events.empty());
    CHECK(result.metrics.population_timeline.empty());
    CHECK(result.metrics.honest_grants == 0);
    CHECK(result.metrics.honest_denials == 0);
    CHECK(result.metrics.malicious_grants == 0);
    CHECK(result.metrics.malicious_denials == 0);
    CHECK(result.metrics.trust_queries_sent == 0);
    CHECK_FALSE(result.metrics.true_positive_rate().has_value());
    CHECK_FALSE(result.metrics.false_positive_rate().has_value());
}

TEST_CASE("identical runs are byte-identical") {
    const sim::Config config = small_config();
    const auto first = sim::run(config);
    const auto second = sim::run(config);
    CHECK(first.events == second.events);
    std::stringstream a;
    std::stringstream b;
    sim::write_events(first.events, a);
    sim::write_events(second.events, b);
    CHECK(a.str() == b.str());
}

TEST_CASE("a provider with a stored record never queries for that client") {
    // Records only come from outcomes, so scan the log: any QUERY about a
    // client the provider has already observed is a flow violation.
    sim::Config config = small_config();
    config.ticks = 200;
    const auto result = sim::run(config);
    std::set<std::pair<std::string, std::string>> observed;  // provider, client
    for (const Event& event : result.events) {
        if (event.kind == EventKind::Query) {
            CHECK_FALSE(observed.contains({event.actor, event.detail}));
        } else if (event.kind == EventKind::Outcome) {
            observed.emplace(event.counterparty, event.actor);
        }
    }
    CHECK(count_events(result.events, EventKind::Query) > 0);
}

TEST_CASE("every request is answered exactly once in its tick") {
    sim::Config config = small_config();
    config.ticks = 150;
    const auto result = sim::run(config);
    // key: tick | client | provider
    std::multiset<std::string> requests;
    std::multiset<std::string> replies;
    for (const Event& event : result.events) {
        const std::string tick = std::to_string(event.tick);
        if (event.kind == EventKind::Request) {
            requests.insert(tick + '|' + event.actor + '|' + event.counterparty);
        } else if (event.kind == EventKind::Grant || event.kind == EventKind::Deny) {
            replies.insert(tick + '|' + event.counterparty + '|' + event.actor);
        }
    }
    CHECK(requests == replies);
    CHECK_FALSE(requests.empty());
}

TEST_CASE("a provider with no peers decides unknown clients by the neutral default") {
    sim::Config config;
    config.initial_clients = 6;
    config.initial_providers = 3;
    config.acquaintances_per_provider = 0;
    config.departure_probability = 0.0;
    config.arrival_probability = 0.0;
    config.ticks = 60;
    config.seed = 9;
    const auto result = sim::run(config);
    CHECK(count_events(result.events, EventKind::Query) == 0);
    CHECK(result.metrics.trust_queries_sent == 0);
    for (const Event& event : result.events) {
        if (event.kind == EventKind::Grant || event.kind == EventKind::Deny) {
            const bool neutral = detail_has_provenance(event, "NeutralDefault");
            const bool stored = detail_has_provenance(event, "StoredRecord");
            CHECK((neutral || stored));
        }
    }
}

TEST_CASE("without attackers, aggregation rarely denies honest clients") {
    sim::Config config;
    config.initial_clients = 30;
    config.initial_providers = 8;
    config.malicious_fraction = 0.0;
    config.ticks = 500;
    config.seed = 31337;
    const auto result = sim::run(config);
    std::uint64_t evaluations = 0;
    std::uint64_t pso_denials = 0;
    for (const Event& event : result.events) {
        if (event.kind == EventKind::Grant || event.kind == EventKind::Deny) {
            ++evaluations;
            if (event.kind == EventKind::Deny && detail_has_provenance(event, "PsoAggregation")) {
                ++pso_denials;
            }
        }
    }
    REQUIRE(evaluations > 0);
    CHECK(static_cast<double>(pso_denials) < 0.10 * static_cast<double>(evaluations));
}

TEST_CASE("metrics counters agree with an independent recount of the log") {
    sim::Config config = small_config();
    config.ticks = 300;
    sim::World world(config);
    for (int i = 0; i < config.ticks; ++i) {
        world.tick();
    }
    const auto& census = world.client_census();
    sim::Metrics recount;
    for (const Event& event : world.events()) {
        if (event.kind == EventKind::Query) {
            recount.trust_queries_sent += 1;
        } else if (event.kind == EventKind::Grant || event.kind == EventKind::Deny) {
            const bool malicious = census.at(event.counterparty) == Behavior::Malicious;
            if (event.kind == EventKind::Grant) {
                (malicious ? recount.malicious_grants : recount.honest_grants) += 1;
            } else {
                (malicious ? recount.malicious_denials : recount.honest_denials) += 1;
            }
        }
    }
    CHECK(world.metrics().honest_grants == recount.honest_grants);
    CHECK(world.metrics().honest_denials == recount.honest_denials);
    CHECK(world.metrics().malicious_grants == recount.malicious_grants);
    CHECK(world.metrics().malicious_denials == recount.malicious_denials);
    CHECK(world.metrics().trust_queries_sent == recount.trust_queries_sent);
}

TEST_CASE("the canonical 500-tick scenario reproduces its frozen metrics") {
    // Golden values verified once by an independent recount over the raw
    // event log (shadow EMA of every stored record, query discipline,
    // threshold consistency) before freezing.
    sim::Config config;
    config.initial_clients = 50;
    config.initial_providers = 10;
    config.malicious_fraction = 0.3;
    config.ticks = 500;
    config.seed = 20240604;
    const auto result = sim::run(config);
    CHECK(result.metrics.honest_grants == 3039);
    CHECK(result.metrics.honest_denials == 1279);
    CHECK(result.metrics.malicious_grants == 143);
    CHECK(result.metrics.malicious_denials == 1572);
    CHECK(result.metrics.trust_queries_sent == 2763);
    CHECK(result.events.size() == 19224);
    REQUIRE(result.metrics.true_positive_rate().has_value());
    REQUIRE(result.metrics.false_positive_rate().has_value());
    CHECK(*result.metrics.true_positive_rate() == 0.91661807580174925);
    CHECK(*result.metrics.false_positive_rate() == 0.29620194534506716);
    CHECK(*result.metrics.true_positive_rate() > *result.metrics.false_positive_rate());
}

TEST_CASE("event logs round trip through their CSV form") {
    sim::Config config = small_config();
    config.ticks = 40;
    const auto result = sim::run(config);
    std::stringstream buffer;
    sim::write_events(result.events, buffer);
    CHECK(sim::parse_events(buffer) == result.events);

    std::stringstream metrics_buffer;
    sim::write_metrics(result.metrics, metrics_buffer);
    const auto parsed = sim::parse_metrics(metrics_buffer);
    CHECK(parsed.at("ticks") == "40");
    CHECK(parsed.at("grants_honest") == std::to_string(result.metrics.honest_grants));
    CHECK(parsed.at("trust_queries_sent") == std::to_string(result.metrics.trust_queries_sent));
    CHECK(parsed.at("population_max") == std::to_string(result.metrics.population_max()));
}
