#include "freegrass/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#ifndef FREEGRASS_VERSION
#define FREEGRASS_VERSION "0.1.0"
#endif

namespace freegrass {

namespace {

#define FREEGRASS_TOLERANCE_FIELDS(X)                                                                         \
    X(leibniz) X(coassociativity) X(resolvent_equation) X(representative) X(closed_form) X(unitary)           \
    X(involution) X(matricial) X(lambda_duality) X(choi) X(control_witness) X(extraction) X(composition)      \
    X(truncation_slack) X(semicircle) X(point_mass) X(additivity) X(sphere) X(vanishing) X(conditioning)

double finite_or_inf(double v) { return std::isfinite(v) ? v : INFINITY; }

nlohmann::json number(double v) {
    if (std::isfinite(v)) return v;
    return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

}  // namespace

nlohmann::json Tolerances::to_json() const {
    nlohmann::json j;
#define X(f) j[#f] = f;
    FREEGRASS_TOLERANCE_FIELDS(X)
#undef X
    return j;
}

Tolerances Tolerances::from_json(const nlohmann::json& j) {
    Tolerances t;
    if (j.is_null()) return t;
    if (!j.is_object()) throw std::invalid_argument("tolerances must be a JSON object");
    const nlohmann::json known = t.to_json();
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!known.contains(it.key())) throw std::invalid_argument("unknown tolerance '" + it.key() + "'");
        if (!it.value().is_number() || !(it.value().get<double>() > 0.0))
            throw std::invalid_argument("tolerance '" + it.key() + "' must be a positive number");
    }
#define X(f) \
    if (j.contains(#f)) t.f = j.at(#f).get<double>();
    FREEGRASS_TOLERANCE_FIELDS(X)
#undef X
    return t;
}

std::string version_string() { return FREEGRASS_VERSION; }

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string config_hash(const nlohmann::json& config) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(config.dump())));
    return std::string("fnv1a64:") + buf;
}

void Worst::add(double r) {
    ++count;
    if (std::isnan(r) || r > value) value = std::isnan(r) ? INFINITY : r;
}

Report::Report(std::string suite, nlohmann::json config) : suite_(std::move(suite)), config_(std::move(config)) {}

IdentityCheck& Report::add_upper(const std::string& name, const std::string& anchor, std::size_t instances,
                                 double value, double bound) {
    value = finite_or_inf(value);
    checks_.push_back({name, anchor, instances, value, bound, "<=", value <= bound, nlohmann::json::object()});
    return checks_.back();
}

IdentityCheck& Report::add_lower(const std::string& name, const std::string& anchor, std::size_t instances,
                                 double value, double bound) {
    checks_.push_back({name, anchor, instances, value, bound, ">=", value >= bound, nlohmann::json::object()});
    return checks_.back();
}

IdentityCheck& Report::add_flag(const std::string& name, const std::string& anchor, std::size_t instances, bool ok) {
    checks_.push_back({name, anchor, instances, ok ? 1.0 : 0.0, 1.0, "==", ok, nlohmann::json::object()});
    return checks_.back();
}

void Report::merge(const Report& other) {
    for (const auto& c : other.checks_) checks_.push_back(c);
}

bool Report::pass() const {
    if (checks_.empty()) return false;
    for (const auto& c : checks_)
        if (!c.pass) return false;
    return true;
}

nlohmann::json Report::to_json() const {
    nlohmann::json j;
    j["schema"] = kReportSchema;
    j["version"] = version_string();
    j["suite"] = suite_;
    j["config_hash"] = config_hash(config_);
    j["config"] = config_;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : checks_) {
        nlohmann::json e;
        e["identity"] = c.name;
        e["anchor"] = c.anchor;
        e["instances"] = c.instances;
        e["value"] = number(c.value);
        e["relation"] = c.relation;
        e["bound"] = number(c.bound);
        e["pass"] = c.pass;
        if (!c.detail.empty()) e["detail"] = c.detail;
        arr.push_back(e);
    }
    j["checks"] = arr;
    j["pass"] = pass();
    return j;
}

std::string Report::summary() const {
    std::ostringstream os;
    os.precision(3);
    for (const auto& c : checks_)
        os << (c.pass ? "  ok   " : "  FAIL ") << c.name << " [" << c.anchor << "] " << c.value << ' ' << c.relation
           << ' ' << c.bound << " (" << c.instances << ")\n";
    return os.str();
}

}  // namespace freegrass
