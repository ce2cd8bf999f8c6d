#include "swarmtrust/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <utility>

#include "swarmtrust/io.hpp"

// Randomness is consumed from the single world generator in this order, once
// per tick:
//   1. departures  - one uniform per client (id ascending), then one per
//                    provider (id ascending)
//   2. arrival     - one uniform for the arrival itself; one more for the
//                    behavior class only when the candidate is admitted
//   3. requests    - one index draw per client (id ascending), skipped when
//                    no providers remain
//   4. evaluations - one u64 per swarm aggregation, drawn when a provider
//                    evaluates an unknown client with a non-empty reply set
//                    (providers ascending, inbox order)
//   5. outcomes    - one uniform per granted interaction, in grant order
// Changing any of this reorders every stream that follows, so treat it as
// part of the file format.

namespace swarmtrust::sim {

namespace {

std::string make_id(char prefix, int number) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%c%06d", prefix, number);
    return buf;
}

bool probability(double v) {
    return std::isfinite(v) && v >= 0.0 && v <= 1.0;
}

bool sign_matches(double reported, double observed) {
    return (reported > 0.0 && observed > 0.0) || (reported < 0.0 && observed < 0.0);
}

}  // namespace

void validate(const Config& config) {
    if (config.max_population < 1) {
        throw std::invalid_argument("max_population must be >= 1");
    }
    if (config.initial_clients < 0) {
        throw std::invalid_argument("initial_clients must be >= 0");
    }
    if (config.initial_providers < 0) {
        throw std::invalid_argument("initial_providers must be >= 0");
    }
    if (config.initial_clients + config.initial_providers > config.max_population) {
        throw std::invalid_argument(
            "initial_clients + initial_providers must not exceed max_population");
    }
    if (!probability(config.arrival_probability)) {
        throw std::invalid_argument("arrival_probability must lie in [0, 1]");
    }
    if (!probability(config.departure_probability)) {
        throw std::invalid_argument("departure_probability must lie in [0, 1]");
    }
    if (!probability(config.malicious_fraction)) {
        throw std::invalid_argument("malicious_fraction must lie in [0, 1]");
    }
    if (config.acquaintances_per_provider < 0) {
        throw std::invalid_argument("acquaintances_per_provider must be >= 0");
    }
    if (config.ticks < 0) {
        throw std::invalid_argument("ticks must be >= 0");
    }
    if (!std::isfinite(config.threshold) || config.threshold < -1.0 || config.threshold > 1.0) {
        throw std::invalid_argument("threshold must lie in [-1, 1]");
    }
    pso::validate(config.pso);
}

std::optional<double> Metrics::true_positive_rate() const {
    const std::uint64_t evaluated = malicious_grants + malicious_denials;
    if (evaluated == 0) {
        return std::nullopt;
    }
    return static_cast<double>(malicious_denials) / static_cast<double>(evaluated);
}

std::optional<double> Metrics::false_positive_rate() const {
    const std::uint64_t evaluated = honest_grants + honest_denials;
    if (evaluated == 0) {
        return std::nullopt;
    }
    return static_cast<double>(honest_denials) / static_cast<double>(evaluated);
}

int Metrics::population_max() const {
    int best = 0;
    for (const int p : population_timeline) {
        best = std::max(best, p);
    }
    return best;
}

World::World(const Config& config) : config_(config), rng_(config.seed) {
    validate(config_);

    // Exactly floor(n * fraction) initial clients are malicious; which ones
    // is a seeded draw (partial Fisher-Yates prefix).
    const int n_clients = config_.initial_clients;
    const int n_malicious =
        static_cast<int>(std::floor(static_cast<double>(n_clients) * config_.malicious_fraction));
    std::vector<int> slots(n_clients);
    for (int i = 0; i < n_clients; ++i) {
        slots[i] = i;
    }
    for (int i = 0; i < n_malicious; ++i) {
        const std::size_t j = i + rng_.uniform_index(static_cast<std::size_t>(n_clients - i));
        std::swap(slots[i], slots[j]);
    }
    std::set<int> malicious_slots(slots.begin(), slots.begin() + n_malicious);
    for (int i = 0; i < n_clients; ++i) {
        const Behavior behavior =
            malicious_slots.contains(i) ? Behavior::Malicious : Behavior::Honest;
        add_client(behavior);
    }

    std::vector<std::string> provider_ids;
    provider_ids.reserve(static_cast<std::size_t>(config_.initial_providers));
    for (int i = 0; i < config_.initial_providers; ++i) {
        provider_ids.push_back(make_id('p', i + 1));
    }
    for (const std::string& id : provider_ids) {
        providers_.emplace(id, ServiceAgentState{id, TrustDatabase(id), {}});
    }
    // Each provider wires to k random distinct peers (all of them when fewer
    // than k exist), drawn in provider-id order.
    for (const std::string& id : provider_ids) {
        std::vector<std::string> candidates;
        candidates.reserve(provider_ids.size() - 1);
        for (const std::string& other : provider_ids) {
            if (other != id) {
                candidates.push_back(other);
            }
        }
        const std::size_t k =
            std::min(candidates.size(), static_cast<std::size_t>(config_.acquaintances_per_provider));
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t j = i + rng_.uniform_index(candidates.size() - i);
            std::swap(candidates[i], candidates[j]);
        }
        providers_.at(id).acquaintances.insert(candidates.begin(), candidates.begin() + k);
    }
}

std::string World::add_client(Behavior behavior) {
    std::string id = make_id('c', ++next_client_number_);
    const double misbehavior =
        behavior == Behavior::Malicious ? kMaliciousMisbehavior : kHonestMisbehavior;
    clients_.emplace(id, ClientProfile{id, behavior, misbehavior});
    census_.emplace(id, behavior);
    return id;
}

void World::log(EventKind kind, std::string actor, std::string counterparty, std::string detail) {
    events_.push_back({tick_, kind, std::move(actor), std::move(counterparty), std::move(detail)});
}

void World::tick() {
    tick_ += 1;
    phase_departures();
    phase_arrivals();
    std::map<std::string, std::vector<Message>> inboxes;
    phase_requests(inboxes);
    std::vector<PendingOutcome> outcomes;
    phase_evaluations(inboxes, outcomes);
    phase_outcomes(outcomes);
    metrics_.population_timeline.push_back(population());
}

void World::phase_departures() {
    std::vector<std::string> leaving_clients;
    for (const auto& [id, client] : clients_) {
        if (rng_.bernoulli(config_.departure_probability)) {
            leaving_clients.push_back(id);
        }
    }
    std::vector<std::string> leaving_providers;
    for (const auto& [id, agent] : providers_) {
        if (rng_.bernoulli(config_.departure_probability)) {
            leaving_providers.push_back(id);
        }
    }
    for (const std::string& id : leaving_clients) {
        clients_.erase(id);
        log(EventKind::Depart, id, "", "client");
    }
    for (const std::string& id : leaving_providers) {
        providers_.erase(id);
        log(EventKind::Depart, id, "", "provider");
    }
}

void World::phase_arrivals() {
    if (!rng_.bernoulli(config_.arrival_probability)) {
        return;
    }
    if (population() >= config_.max_population) {
        return;  // world is full; the candidate is turned away
    }
    const Behavior behavior =
        rng_.bernoulli(config_.malicious_fraction) ? Behavior::Malicious : Behavior::Honest;
    log(EventKind::Arrive, add_client(behavior), "", "client");
}

void World::phase_requests(std::map<std::string, std::vector<Message>>& inboxes) {
    if (providers_.empty()) {
        return;
    }
    std::vector<const std::string*> provider_ids;
    provider_ids.reserve(providers_.size());
    for (const auto& [id, agent] : providers_) {
        provider_ids.push_back(&id);
    }
    for (const auto& [client_id, client] : clients_) {
        const std::string& target = *provider_ids[rng_.uniform_index(provider_ids.size())];
        inboxes[target].push_back(
            {MessageKind::ServiceRequest, client_id, target, client_id, std::nullopt});
        log(EventKind::Request, client_id, target, "");
    }
}

void World::phase_evaluations(const std::map<std::string, std::vector<Message>>& inboxes,
                              std::vector<PendingOutcome>& outcomes) {
    for (auto& [provider_id, agent] : providers_) {
        const auto it = inboxes.find(provider_id);
        if (it == inboxes.end()) {
            continue;
        }
        for (const Message& request : it->second) {
            handle_service_request(agent, request, outcomes);
        }
    }
}

ServiceAgentState* World::find_provider(const std::string& provider_id) {
    const auto it = providers_.find(provider_id);
    return it == providers_.end() ? nullptr : &it->second;
}

std::optional<Message> World::answer_trust_query(const Message& query) const {
    const auto peer = providers_.find(query.recipient);
    if (peer == providers_.end()) {
        return std::nullopt;  // departed, the query goes unanswered
    }
    const auto known = peer->second.trust_db.lookup(query.client_id);
    if (!known) {
        return std::nullopt;
    }
    const auto asker = providers_.find(query.sender);
    const auto own =
        asker == providers_.end() ? std::nullopt : asker->second.trust_db.lookup(query.recipient);
    const Recommendation payload{query.recipient, own ? own->weight : TrustWeight{},
                                 known->weight};
    return Message{MessageKind::TrustResponse, query.recipient, query.sender, query.client_id,
                   payload};
}

std::vector<Recommendation> World::gather_recommendations(const std::string& provider_id,
                                                          const std::string& client_id) const {
    const auto asker = providers_.find(provider_id);
    if (asker == providers_.end()) {
        throw std::domain_error("unknown provider: " + provider_id);
    }
    std::vector<Recommendation> recommendations;
    for (const std::string& acquaintance_id : asker->second.acquaintances) {
        const auto response = answer_trust_query(
            {MessageKind::TrustQuery, provider_id, acquaintance_id, client_id, std::nullopt});
        if (response) {
            recommendations.push_back(*response->recommendation);
        }
    }
    return recommendations;
}

void World::handle_service_request(ServiceAgentState& agent, const Message& request,
                                   std::vector<PendingOutcome>& outcomes) {
    const std::string& client_id = request.client_id;
    const bool known = agent.trust_db.lookup(client_id).has_value();

    std::vector<Recommendation> recommendations;
    if (!known) {
        // Replies arrive within the tick; the request blocks on them.
        for (const std::string& acquaintance_id : agent.acquaintances) {
            const Message query{MessageKind::TrustQuery, agent.agent_id, acquaintance_id,
                                client_id, std::nullopt};
            log(EventKind::Query, query.sender, query.recipient, query.client_id);
            metrics_.trust_queries_sent += 1;
            if (const auto response = answer_trust_query(query)) {
                log(EventKind::Response, response->sender, response->recipient,
                    fmt_real(response->recommendation->reported_value.value()));
                recommendations.push_back(*response->recommendation);
            }
        }
    }

    pso::Config pso_config = config_.pso;
    if (!known && !recommendations.empty()) {
        pso_config.seed = rng_.next_u64();
    }
    const TrustDecision decision =
        evaluate_client(agent.trust_db, client_id, recommendations, config_.threshold, pso_config);

    const std::string detail = "weight=" + fmt_real(decision.weight.value()) +
                               ";provenance=" + to_string(decision.provenance);
    const Behavior behavior = clients_.at(client_id).behavior;
    const Message reply{decision.verdict == Verdict::Trusted ? MessageKind::ServiceGrant
                                                             : MessageKind::ServiceDeny,
                        agent.agent_id, request.sender, client_id, std::nullopt};
    if (reply.kind == MessageKind::ServiceGrant) {
        log(EventKind::Grant, reply.sender, reply.recipient, detail);
        (behavior == Behavior::Malicious ? metrics_.malicious_grants : metrics_.honest_grants) += 1;
        PendingOutcome outcome{agent.agent_id, client_id, {}};
        outcome.responders.reserve(recommendations.size());
        for (const Recommendation& rec : recommendations) {
            outcome.responders.emplace_back(rec.recommender_id, rec.reported_value.value());
        }
        outcomes.push_back(std::move(outcome));
    } else {
        log(EventKind::Deny, reply.sender, reply.recipient, detail);
        (behavior == Behavior::Malicious ? metrics_.malicious_denials : metrics_.honest_denials) += 1;
    }
}

void World::phase_outcomes(const std::vector<PendingOutcome>& outcomes) {
    for (const PendingOutcome& pending : outcomes) {
        ServiceAgentState& agent = providers_.at(pending.provider_id);
        const ClientProfile& client = clients_.at(pending.client_id);
        const bool violation = rng_.bernoulli(client.misbehavior_probability);
        const double observed = violation ? -1.0 : 1.0;
        agent.trust_db.record_outcome(pending.client_id, observed,
                                      static_cast<std::uint64_t>(tick_));
        log(EventKind::Outcome, pending.client_id, pending.provider_id, fmt_real(observed));
        // Score every responder on sign agreement with what actually happened.
        for (const auto& [responder_id, reported] : pending.responders) {
            const double score = sign_matches(reported, observed) ? 1.0 : -1.0;
            agent.trust_db.record_outcome(responder_id, score, static_cast<std::uint64_t>(tick_));
        }
    }
}

RunResult run(const Config& config) {
    World world(config);
    for (int i = 0; i < config.ticks; ++i) {
        world.tick();
    }
    return {world.metrics(), world.events()};
}

const char* to_string(EventKind kind) {
    switch (kind) {
        case EventKind::Arrive: return "ARRIVE";
        case EventKind::Depart: return "DEPART";
        case EventKind::Request: return "REQUEST";
        case EventKind::Query: return "QUERY";
        case EventKind::Response: return "RESPONSE";
        case EventKind::Grant: return "GRANT";
        case EventKind::Deny: return "DENY";
        case EventKind::Outcome: return "OUTCOME";
    }
    return "?";
}

namespace {

EventKind event_kind_from(const std::string& token, int line) {
    if (token == "ARRIVE") return EventKind::Arrive;
    if (token == "DEPART") return EventKind::Depart;
    if (token == "REQUEST") return EventKind::Request;
    if (token == "QUERY") return EventKind::Query;
    if (token == "RESPONSE") return EventKind::Response;
    if (token == "GRANT") return EventKind::Grant;
    if (token == "DENY") return EventKind::Deny;
    if (token == "OUTCOME") return EventKind::Outcome;
    throw ParseError(line, "unknown event kind: '" + token + "'");
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    return line;
}

}  // namespace

void write_events(const EventLog& events, std::ostream& out) {
    out << kEventsHeader << '\n';
    for (const Event& event : events) {
        out << event.tick << ',' << to_string(event.kind) << ',' << event.actor << ','
            << event.counterparty << ',' << event.detail << '\n';
    }
}

void write_events(const EventLog& events, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open for writing: " + path);
    }
    write_events(events, out);
    out.flush();
    if (!out) {
        throw IoError("write failed: " + path);
    }
}

EventLog parse_events(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || strip_cr(line) != kEventsHeader) {
        throw ParseError(1, std::string("expected header '") + kEventsHeader + "'");
    }
    EventLog events;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        const auto fields = split_csv(line);
        if (fields.size() != 5) {
            throw ParseError(line_no, "expected 5 fields");
        }
        Event event;
        event.tick = parse_int(fields[0], line_no);
        event.kind = event_kind_from(fields[1], line_no);
        event.actor = fields[2];
        event.counterparty = fields[3];
        event.detail = fields[4];
        events.push_back(std::move(event));
    }
    return events;
}

void write_metrics(const Metrics& metrics, std::ostream& out) {
    out << "ticks=" << metrics.population_timeline.size() << '\n';
    out << "population_max=" << metrics.population_max() << '\n';
    out << "final_population="
        << (metrics.population_timeline.empty() ? 0 : metrics.population_timeline.back()) << '\n';
    out << "grants_honest=" << metrics.honest_grants << '\n';
    out << "denials_honest=" << metrics.honest_denials << '\n';
    out << "grants_malicious=" << metrics.malicious_grants << '\n';
    out << "denials_malicious=" << metrics.malicious_denials << '\n';
    if (const auto tpr = metrics.true_positive_rate()) {
        out << "true_positive_rate=" << fmt_real(*tpr) << '\n';
    }
    if (const auto fpr = metrics.false_positive_rate()) {
        out << "false_positive_rate=" << fmt_real(*fpr) << '\n';
    }
    out << "trust_queries_sent=" << metrics.trust_queries_sent << '\n';
}

void write_metrics(const Metrics& metrics, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open for writing: " + path);
    }
    write_metrics(metrics, out);
    out.flush();
    if (!out) {
        throw IoError("write failed: " + path);
    }
}

std::map<std::string, std::string> parse_metrics(std::istream& in) {
    std::map<std::string, std::string> values;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) {
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError(line_no, "expected key=value");
        }
        values[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return values;
}

}  // namespace swarmtrust::sim
