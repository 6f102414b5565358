#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace bregman {

struct VerifyOptions {
    std::uint64_t seed = 20240601;
    /// Samples per property and instance (>= 1000 for the geometry checks).
    int samples = 1000;
    /// Fault injection: resolvent outputs become z + resolvent_fault * x.
    double resolvent_fault = 0.0;
};

struct PropertyResult {
    std::string name;
    int samples = 0;
    /// Worst observed value of the checked quantity (sign convention per
    /// property: the check passes when worst <= threshold).
    double worst = 0.0;
    double threshold = 0.0;
    bool pass = false;
    std::string detail;
};

struct PropertyCheck {
    std::string name;
    std::string description;
    std::function<std::vector<PropertyResult>(const VerifyOptions&)> run;
};

/// Every registered property suite, in report order.
const std::vector<PropertyCheck>& property_registry();

/// Runs the named properties (all when `names` is empty and `select_all`).
std::vector<PropertyResult> run_properties(const std::vector<std::string>& names, bool select_all,
                                           const VerifyOptions& opts);

void write_report(std::ostream& os, const std::vector<PropertyResult>& results);

}  // namespace bregman
