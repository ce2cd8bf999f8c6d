#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

namespace swarmtrust {

/// Scalar trust in [-1, 1]: -1 untrustworthy, 0 neutral/unknown, 1 fully
/// trusted. Construction rejects non-finite or out-of-range values.
class TrustWeight {
public:
    TrustWeight() = default;
    explicit TrustWeight(double value);

    double value() const { return value_; }

    friend bool operator==(const TrustWeight&, const TrustWeight&) = default;

private:
    double value_ = 0.0;
};

/// One acquaintance reply about a client: who answered, how much the asker
/// trusts them, and the value they reported.
struct Recommendation {
    std::string recommender_id;
    TrustWeight recommender_trust;  // the asker's trust in the recommender
    TrustWeight reported_value;     // the recommender's stored weight for the client
};

struct TrustRecord {
    std::string client_id;
    TrustWeight weight;
    std::uint64_t interaction_count = 0;
    std::uint64_t last_updated_tick = 0;

    friend bool operator==(const TrustRecord&, const TrustRecord&) = default;
};

/// EMA factor applied by record_outcome to existing records.
inline constexpr double kOutcomeAlpha = 0.3;

/// Per-agent persistent trust store, at most one record per counterparty id.
class TrustDatabase {
public:
    TrustDatabase() = default;
    explicit TrustDatabase(std::string owner_id) : owner_id_(std::move(owner_id)) {}

    const std::string& owner_id() const { return owner_id_; }

    std::optional<TrustRecord> lookup(const std::string& client_id) const;

    /// Folds an observed outcome in [-1, 1] into the stored weight. A first
    /// observation becomes the weight; later ones move it by
    /// weight = (1 - alpha) * old + alpha * observed.
    void record_outcome(const std::string& client_id, double observed, std::uint64_t tick);

    /// Inserts a fully formed record; rejects duplicates and records with
    /// zero interactions.
    void insert(TrustRecord record);

    bool empty() const { return records_.empty(); }
    std::size_t size() const { return records_.size(); }
    const std::map<std::string, TrustRecord>& records() const { return records_; }

    friend bool operator==(const TrustDatabase&, const TrustDatabase&) = default;

private:
    std::string owner_id_;
    std::map<std::string, TrustRecord> records_;
};

enum class Verdict { Trusted, Untrusted };

const char* to_string(Verdict verdict);

/// Trusted iff weight >= threshold. The comparison is inclusive so the
/// neutral zero default passes the default threshold of 0.
Verdict decide(TrustWeight weight, double threshold);

/// CSV persistence, header client_id,weight,interaction_count,last_updated_tick,
/// rows sorted by client_id. Load failures carry the offending line number.
void save_database(const TrustDatabase& db, std::ostream& out);
void save_database(const TrustDatabase& db, const std::string& path);
TrustDatabase load_database(std::istream& in, std::string owner_id);
TrustDatabase load_database(const std::string& path, std::string owner_id);

}  // namespace swarmtrust
