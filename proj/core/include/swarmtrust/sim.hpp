#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "swarmtrust/evaluate.hpp"
#include "swarmtrust/pso.hpp"
#include "swarmtrust/rng.hpp"
#include "swarmtrust/trust.hpp"

namespace swarmtrust::sim {

enum class Behavior { Honest, Malicious };

inline constexpr double kHonestMisbehavior = 0.05;
inline constexpr double kMaliciousMisbehavior = 0.9;

/// A cloud consumer. misbehavior_probability is the chance a granted
/// interaction ends in a violation.
struct ClientProfile {
    std::string client_id;
    Behavior behavior = Behavior::Honest;
    double misbehavior_probability = kHonestMisbehavior;
};

/// A service provider: its trust store plus the fixed peer set it queries
/// about unknown clients. Never contains its own id; entries may refer to
/// departed peers, whose queries simply go unanswered.
struct ServiceAgentState {
    std::string agent_id;
    TrustDatabase trust_db;
    std::set<std::string> acquaintances;
};

enum class MessageKind { ServiceRequest, TrustQuery, TrustResponse, ServiceGrant, ServiceDeny };

struct Message {
    MessageKind kind = MessageKind::ServiceRequest;
    std::string sender;
    std::string recipient;
    std::string client_id;                         // subject of requests and queries
    std::optional<Recommendation> recommendation;  // TrustResponse payload
};

struct Config {
    int max_population = 150;
    int initial_clients = 20;
    int initial_providers = 5;
    double arrival_probability = 0.1;
    double departure_probability = 0.01;
    double malicious_fraction = 0.3;
    int acquaintances_per_provider = 3;
    int ticks = 100;
    std::uint64_t seed = 42;
    double threshold = 0.0;
    pso::Config pso;
};

/// Throws std::invalid_argument naming the offending key.
void validate(const Config& config);

enum class EventKind { Arrive, Depart, Request, Query, Response, Grant, Deny, Outcome };

const char* to_string(EventKind kind);

struct Event {
    int tick = 0;
    EventKind kind = EventKind::Arrive;
    std::string actor;
    std::string counterparty;
    std::string detail;

    friend bool operator==(const Event&, const Event&) = default;
};

using EventLog = std::vector<Event>;

struct Metrics {
    std::uint64_t honest_grants = 0;
    std::uint64_t honest_denials = 0;
    std::uint64_t malicious_grants = 0;
    std::uint64_t malicious_denials = 0;
    std::uint64_t trust_queries_sent = 0;
    std::vector<int> population_timeline;  // total agents after each tick

    /// malicious denied / malicious evaluated; absent until a malicious
    /// client has been evaluated.
    std::optional<double> true_positive_rate() const;
    /// honest denied / honest evaluated.
    std::optional<double> false_positive_rate() const;
    int population_max() const;
};

/// Discrete-tick open world. Construction performs the initial seeding
/// (no events are logged for the initial population); each tick() runs the
/// fixed phase order departures, arrivals, requests, evaluations, outcomes.
/// All randomness flows from the single seeded generator in that order, so
/// equal configs produce byte-identical event logs.
class World {
public:
    explicit World(const Config& config);

    void tick();

    /// The receiving acquaintance's side of a TrustQuery: empty when the
    /// recipient has departed or has no record for the client, otherwise a
    /// TrustResponse whose payload carries the sender's own id, the asker's
    /// stored trust in it (0 when unknown), and its stored weight.
    std::optional<Message> answer_trust_query(const Message& query) const;

    /// One recommendation per acquaintance that is still present and has a
    /// record for the client, ordered by recommender id.
    std::vector<Recommendation> gather_recommendations(const std::string& provider_id,
                                                       const std::string& client_id) const;

    int population() const { return static_cast<int>(clients_.size() + providers_.size()); }
    int tick_count() const { return tick_; }
    const std::map<std::string, ClientProfile>& clients() const { return clients_; }
    const std::map<std::string, ServiceAgentState>& providers() const { return providers_; }
    /// Mutable access for scripted fixtures; nullptr when absent or departed.
    ServiceAgentState* find_provider(const std::string& provider_id);
    /// Every client ever created (including departed ones), for auditing.
    const std::map<std::string, Behavior>& client_census() const { return census_; }
    const EventLog& events() const { return events_; }
    const Metrics& metrics() const { return metrics_; }

private:
    struct PendingOutcome {
        std::string provider_id;
        std::string client_id;
        std::vector<std::pair<std::string, double>> responders;  // id, reported value
    };

    std::string add_client(Behavior behavior);
    void phase_departures();
    void phase_arrivals();
    void phase_requests(std::map<std::string, std::vector<Message>>& inboxes);
    void phase_evaluations(const std::map<std::string, std::vector<Message>>& inboxes,
                           std::vector<PendingOutcome>& outcomes);
    void handle_service_request(ServiceAgentState& agent, const Message& request,
                                std::vector<PendingOutcome>& outcomes);
    void phase_outcomes(const std::vector<PendingOutcome>& outcomes);
    void log(EventKind kind, std::string actor, std::string counterparty, std::string detail);

    Config config_;
    SeededRng rng_;
    int tick_ = 0;
    int next_client_number_ = 0;
    std::map<std::string, ClientProfile> clients_;
    std::map<std::string, ServiceAgentState> providers_;
    std::map<std::string, Behavior> census_;
    EventLog events_;
    Metrics metrics_;
};

struct RunResult {
    Metrics metrics;
    EventLog events;
};

/// init_world + `ticks` ticks; bit-deterministic for a fixed config.
RunResult run(const Config& config);

inline constexpr const char* kEventsHeader = "tick,event,actor,counterparty,detail";

void write_events(const EventLog& events, std::ostream& out);
void write_events(const EventLog& events, const std::string& path);
EventLog parse_events(std::istream& in);

/// Flat key=value summary; rate keys are omitted while undefined.
void write_metrics(const Metrics& metrics, std::ostream& out);
void write_metrics(const Metrics& metrics, const std::string& path);
std::map<std::string, std::string> parse_metrics(std::istream& in);

}  // namespace swarmtrust::sim
