#ifndef VCOH_SUITES_HPP
#define VCOH_SUITES_HPP

#include "vcoh/invariants.hpp"
#include "vcoh/sewing.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace vcoh {

struct RunConfig {
    int cutoff = 4;        // weight cutoff K for inputs
    int order = 1;         // epsilon order L
    std::uint64_t seed = 1;
    int count = 2;         // seeded cochains per slot
    int n = 1, m = 2;      // cohomology slot
    bool half = false;
    int t = 2;             // shared operators for the bracket table
    std::string config_path;
    void validate() const;
    nlohmann::json to_json() const;
};
// keys cutoff, order, seed, count, n, m, t, output at the top level or under [run];
// m = "1/2" selects the half slot
void apply_toml(RunConfig& cfg, const std::string& text, std::string* output = nullptr);

struct Assertion {
    std::string name;
    bool ok = false;
    nlohmann::json detail;
};

// ordered list of assertions of one suite
struct SuiteReport {
    std::string suite;
    std::vector<Assertion> assertions;
    nlohmann::json info = nlohmann::json::object();

    void record(const std::string& name, bool ok, nlohmann::json detail = nlohmann::json::object());
    void record(const std::string& name, const CheckReport& r);
    long failed() const;
    bool ok() const { return failed() == 0; }
    nlohmann::json to_json() const;
};

SuiteReport complex_suite(const RunConfig& cfg);
SuiteReport leibniz_suite(const RunConfig& cfg);
SuiteReport properties_suite(const RunConfig& cfg);
SuiteReport cohomology_suite(const RunConfig& cfg);
SuiteReport classes_suite(const RunConfig& cfg);
SuiteReport lie_table_suite(const RunConfig& cfg);
SuiteReport sewing_suite(const std::string& path);

// the full report of a command; deterministic for a given config
nlohmann::json assemble_report(const std::string& command, const RunConfig& cfg,
                               const std::vector<SuiteReport>& suites);

}  // namespace vcoh

#endif
