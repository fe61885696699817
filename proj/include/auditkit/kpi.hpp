#pragma once

#include <json.hpp>

#include <map>
#include <optional>
#include <string>

namespace auditkit {

enum class Rag { red, amber, green, none };

std::string to_string(Rag rag);

// One audit measurement: a scalar or a per-group map, its applicability, the
// traffic-light band, and a free-form diagnostic payload.
struct KpiResult {
    std::string kpi_id;
    std::string name;
    bool applicable = true;
    std::string na_reason;                     // set when !applicable
    std::optional<double> value;               // scalar form
    std::map<std::string, double> group_values;  // per-group form (empty if scalar)
    Rag rag = Rag::none;                       // none iff !applicable
    nlohmann::json details = nlohmann::json::object();

    static KpiResult not_applicable(std::string kpi_id, std::string name, std::string reason) {
        KpiResult r;
        r.kpi_id = std::move(kpi_id);
        r.name = std::move(name);
        r.applicable = false;
        r.na_reason = std::move(reason);
        r.rag = Rag::none;
        return r;
    }
};

}  // namespace auditkit
