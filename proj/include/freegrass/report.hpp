#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace freegrass {

inline constexpr int kReportSchema = 1;

// Default tolerances. Residuals are relative: |x - y| / max(1, |y|).
struct Tolerances {
    double leibniz = 1e-9;
    double coassociativity = 1e-9;
    double resolvent_equation = 1e-9;
    double representative = 1e-10;
    double closed_form = 1e-10;
    double unitary = 1e-9;
    double involution = 1e-9;
    double matricial = 1e-9;
    double lambda_duality = 1e-6;
    double choi = 1e-8;
    double control_witness = 1e-3;
    double extraction = 1e-11;
    double composition = 1e-9;
    double truncation_slack = 1.1;
    double semicircle = 1e-6;
    double point_mass = 1e-9;
    double additivity = 1e-9;
    double sphere = 1e-8;
    double vanishing = 1e-12;
    // Instances with a resolvent norm above this are resampled.
    double conditioning = 50.0;

    nlohmann::json to_json() const;
    // Keys present in j override the defaults; unknown keys throw std::invalid_argument.
    static Tolerances from_json(const nlohmann::json& j);
};

std::string version_string();
// FNV-1a over the canonical dump.
std::uint64_t fnv1a(const std::string& s);
std::string config_hash(const nlohmann::json& config);

struct IdentityCheck {
    std::string name;
    std::string anchor;
    std::size_t instances = 0;
    double value = 0.0;  // worst case over instances
    double bound = 0.0;
    std::string relation = "<=";
    bool pass = false;
    nlohmann::json detail = nlohmann::json::object();
};

class Report {
public:
    Report(std::string suite, nlohmann::json config);

    // value <= bound
    IdentityCheck& add_upper(const std::string& name, const std::string& anchor, std::size_t instances, double value,
                             double bound);
    // value >= bound
    IdentityCheck& add_lower(const std::string& name, const std::string& anchor, std::size_t instances, double value,
                             double bound);
    IdentityCheck& add_flag(const std::string& name, const std::string& anchor, std::size_t instances, bool ok);
    void merge(const Report& other);

    const std::string& suite() const { return suite_; }
    const std::vector<IdentityCheck>& checks() const { return checks_; }
    bool pass() const;
    nlohmann::json to_json() const;
    std::string summary() const;

private:
    std::string suite_;
    nlohmann::json config_;
    std::vector<IdentityCheck> checks_;
};

// Running maximum of residuals over instances.
struct Worst {
    double value = 0.0;
    std::size_t count = 0;
    void add(double r);
};

}  // namespace freegrass
