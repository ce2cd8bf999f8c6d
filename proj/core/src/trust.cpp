#include "swarmtrust/trust.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "swarmtrust/io.hpp"

namespace swarmtrust {

namespace {

constexpr const char* kDbHeader = "client_id,weight,interaction_count,last_updated_tick";

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    return line;
}

}  // namespace

TrustWeight::TrustWeight(double value) : value_(value) {
    if (!std::isfinite(value) || value < -1.0 || value > 1.0) {
        throw std::domain_error("trust weight outside [-1, 1]");
    }
}

std::optional<TrustRecord> TrustDatabase::lookup(const std::string& client_id) const {
    const auto it = records_.find(client_id);
    if (it == records_.end()) {
        return std::nullopt;
    }
    return it->second;
}

void TrustDatabase::record_outcome(const std::string& client_id, double observed,
                                   std::uint64_t tick) {
    if (!std::isfinite(observed) || observed < -1.0 || observed > 1.0) {
        throw std::domain_error("observed outcome outside [-1, 1]");
    }
    const auto it = records_.find(client_id);
    if (it == records_.end()) {
        records_.emplace(client_id, TrustRecord{client_id, TrustWeight(observed), 1, tick});
        return;
    }
    TrustRecord& rec = it->second;
    const double updated = (1.0 - kOutcomeAlpha) * rec.weight.value() + kOutcomeAlpha * observed;
    rec.weight = TrustWeight(std::clamp(updated, -1.0, 1.0));
    rec.interaction_count += 1;
    rec.last_updated_tick = tick;
}

void TrustDatabase::insert(TrustRecord record) {
    if (record.client_id.empty()) {
        throw std::invalid_argument("empty client id");
    }
    if (record.interaction_count == 0) {
        throw std::invalid_argument("record for '" + record.client_id +
                                    "' must carry at least one interaction");
    }
    const std::string key = record.client_id;
    const auto [it, inserted] = records_.emplace(key, std::move(record));
    if (!inserted) {
        throw std::invalid_argument("duplicate client id: " + key);
    }
}

const char* to_string(Verdict verdict) {
    return verdict == Verdict::Trusted ? "Trusted" : "Untrusted";
}

Verdict decide(TrustWeight weight, double threshold) {
    if (!std::isfinite(threshold) || threshold < -1.0 || threshold > 1.0) {
        throw std::domain_error("threshold outside [-1, 1]");
    }
    return weight.value() >= threshold ? Verdict::Trusted : Verdict::Untrusted;
}

void save_database(const TrustDatabase& db, std::ostream& out) {
    out << kDbHeader << '\n';
    for (const auto& [id, rec] : db.records()) {
        out << id << ',' << fmt_real(rec.weight.value()) << ',' << rec.interaction_count << ','
            << rec.last_updated_tick << '\n';
    }
}

void save_database(const TrustDatabase& db, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open for writing: " + path);
    }
    save_database(db, out);
    out.flush();
    if (!out) {
        throw IoError("write failed: " + path);
    }
}

TrustDatabase load_database(std::istream& in, std::string owner_id) {
    std::string line;
    if (!std::getline(in, line) || strip_cr(line) != kDbHeader) {
        throw ParseError(1, std::string("expected header '") + kDbHeader + "'");
    }
    TrustDatabase db(std::move(owner_id));
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        const auto fields = split_csv(line);
        if (fields.size() != 4) {
            throw ParseError(line_no, "expected 4 fields");
        }
        if (fields[0].empty()) {
            throw ParseError(line_no, "empty client id");
        }
        TrustRecord rec;
        rec.client_id = fields[0];
        try {
            rec.weight = TrustWeight(parse_real(fields[1], line_no));
        } catch (const std::domain_error& e) {
            throw ParseError(line_no, e.what());
        }
        rec.interaction_count = parse_u64(fields[2], line_no);
        rec.last_updated_tick = parse_u64(fields[3], line_no);
        try {
            db.insert(std::move(rec));
        } catch (const std::invalid_argument& e) {
            throw ParseError(line_no, e.what());
        }
    }
    return db;
}

TrustDatabase load_database(const std::string& path, std::string owner_id) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open: " + path);
    }
    return load_database(in, std::move(owner_id));
}

}  // namespace swarmtrust
