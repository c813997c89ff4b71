#pragma once

#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "mls/audit.hpp"
#include "mls/exact_solver.hpp"
#include "mls/geometry.hpp"
#include "mls/power_control.hpp"
#include "mls/reduction.hpp"
#include "mls/sinr.hpp"

namespace mls {

using json = nlohmann::json;

/// Malformed document. The message names the line and column for syntax
/// errors and the JSON path for missing or mistyped fields.
struct ParseError : InputError {
    using InputError::InputError;
};

/// Parses text as JSON, reporting syntax errors with line and column.
json parse_json(const std::string& text);

json to_json(const GridDrawing& d);
json to_json(const ModelParams& m);
json to_json(const Instance& inst);
json to_json(const Schedule& s);
json to_json(const GadgetMap& m);
json to_json(const std::map<int, int>& coloring);

GridDrawing drawing_from_json(const json& j);
ModelParams model_from_json(const json& j);
Instance instance_from_json(const json& j);
Schedule schedule_from_json(const json& j);
GadgetMap gadget_map_from_json(const json& j);
std::map<int, int> coloring_from_json(const json& j);

/// Text round trips.
GridDrawing load_grid_drawing(const std::string& text);
std::string save_grid_drawing(const GridDrawing& d);
Instance load_instance(const std::string& text);
std::string save_instance(const Instance& inst);
Schedule load_schedule(const std::string& text);
std::string save_schedule(const Schedule& s);

json to_json(const RoundReport& r, bool detail = false);
json to_json(const VerifyReport& r, bool detail = false);
json to_json(const FeasibilityResult& r);
json to_json(const SearchResult& r);
json to_json(const LayoutPlan& p);
json to_json(const std::vector<FactBound>& facts);
json to_json(const AuditReport& r, bool detail = false);

/// The document passed between pipeline stages. Every part is optional; a
/// bare drawing, instance or schedule document is accepted as a bundle with
/// only that part.
struct Bundle {
    std::optional<GridDrawing> drawing;
    std::optional<Instance> instance;
    std::optional<GadgetMap> gadget_map;
    std::optional<std::map<int, int>> coloring;
    std::optional<Schedule> schedule;
    /// Flags and parameters of the stages that produced the bundle.
    json params = json::object();
    /// Reports of previous stages, keyed by stage name.
    json reports = json::object();
};

Bundle bundle_from_json(const json& j);
json to_json(const Bundle& b);

/// Renders a number, mapping infinities to strings.
json number(double v);

}  // namespace mls
