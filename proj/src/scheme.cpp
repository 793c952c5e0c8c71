#include "dressed_limit/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include <json.hpp>

#include "dressed_limit/errors.hpp"

namespace dressed_limit {

using nlohmann::json;

const Level& LevelScheme::level(int id) const {
    for (const auto& l : levels)
        if (l.id == id) return l;
    throw Error("no level with id " + std::to_string(id));
}

const Laser& LevelScheme::laser(int id) const {
    for (const auto& l : lasers)
        if (l.id == id) return l;
    throw Error("no laser with id " + std::to_string(id));
}

bool LevelScheme::has_level(int id) const {
    return std::any_of(levels.begin(), levels.end(),
                       [id](const Level& l) { return l.id == id; });
}

bool LevelScheme::has_laser(int id) const {
    return std::any_of(lasers.begin(), lasers.end(),
                       [id](const Laser& l) { return l.id == id; });
}

double cross_section(double wavenumber) {
    return 6.0 * std::numbers::pi / (wavenumber * wavenumber);
}

namespace {

void check_keys(const json& obj, const char* where,
                std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) {
                return key == a;
            }) == allowed.end()) {
            throw ParseError(std::string("unknown field \"") + key + "\" in " +
                             where);
        }
    }
}

double num(const json& obj, const char* where, const char* key) {
    if (!obj.contains(key))
        throw ParseError(std::string(where) + ": missing field \"" + key + "\"");
    if (!obj[key].is_number())
        throw ParseError(std::string(where) + "." + key + ": expected a number");
    return obj[key].get<double>();
}

double num_or(const json& obj, const char* where, const char* key, double dflt) {
    if (!obj.contains(key)) return dflt;
    if (!obj[key].is_number())
        throw ParseError(std::string(where) + "." + key + ": expected a number");
    return obj[key].get<double>();
}

int integer(const json& obj, const char* where, const char* key) {
    if (!obj.contains(key))
        throw ParseError(std::string(where) + ": missing field \"" + key + "\"");
    if (!obj[key].is_number_integer())
        throw ParseError(std::string(where) + "." + key + ": expected an integer");
    return obj[key].get<int>();
}

}  // namespace

LevelScheme parse_scheme(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("syntax error: ") + e.what());
    }
    if (!root.is_object()) throw ParseError("top level must be a JSON object");
    check_keys(root, "scheme",
               {"levels", "lasers", "transitions", "context", "units"});

    double freq_scale = 1.0;
    if (root.contains("units")) {
        const json& u = root["units"];
        check_keys(u, "units", {"frequency_scale"});
        freq_scale = num(u, "units", "frequency_scale");
        if (!(freq_scale > 0))
            throw ParseError("units.frequency_scale: must be > 0");
    }

    LevelScheme s;
    if (!root.contains("levels") || !root["levels"].is_array())
        throw ParseError("missing \"levels\" array");
    for (const json& jl : root["levels"]) {
        check_keys(jl, "level", {"id", "detuning", "gamma"});
        Level l;
        l.id = integer(jl, "level", "id");
        l.detuning = num_or(jl, "level", "detuning", 0.0) * freq_scale;
        l.gamma = num_or(jl, "level", "gamma", 0.0) * freq_scale;
        s.levels.push_back(l);
    }

    if (!root.contains("lasers") || !root["lasers"].is_array())
        throw ParseError("missing \"lasers\" array");
    for (const json& jl : root["lasers"]) {
        check_keys(jl, "laser", {"id", "wavenumber", "power"});
        Laser l;
        l.id = integer(jl, "laser", "id");
        l.wavenumber = num(jl, "laser", "wavenumber");
        l.omega = speed_of_light * l.wavenumber;
        if (jl.contains("power")) l.power = num(jl, "laser", "power");
        s.lasers.push_back(l);
    }

    if (!root.contains("transitions") || !root["transitions"].is_array())
        throw ParseError("missing \"transitions\" array");
    for (const json& jt : root["transitions"]) {
        check_keys(jt, "transition", {"laser", "lower", "upper", "rabi"});
        Transition t;
        t.laser = integer(jt, "transition", "laser");
        t.lower = integer(jt, "transition", "lower");
        t.upper = integer(jt, "transition", "upper");
        t.rabi = num(jt, "transition", "rabi") * freq_scale;
        s.transitions.push_back(t);
    }

    if (!root.contains("context") || !root["context"].is_object())
        throw ParseError("missing \"context\" object");
    const json& jc = root["context"];
    check_keys(jc, "context",
               {"column_density", "area", "bandwidth", "efficiency",
                "initial_level"});
    s.context.column_density = num(jc, "context", "column_density");
    s.context.area = num(jc, "context", "area");
    s.context.bandwidth = num(jc, "context", "bandwidth");
    s.context.efficiency = num(jc, "context", "efficiency");
    s.context.initial_level = jc.contains("initial_level")
                                  ? integer(jc, "context", "initial_level")
                                  : 1;

    auto diags = validate_scheme(s);
    if (!diags.empty()) throw ParseError(diags.front().message());
    return s;
}

std::string serialize_scheme(const LevelScheme& s) {
    json root;
    root["levels"] = json::array();
    for (const auto& l : s.levels)
        root["levels"].push_back(
            {{"id", l.id}, {"detuning", l.detuning}, {"gamma", l.gamma}});
    root["lasers"] = json::array();
    for (const auto& l : s.lasers) {
        json jl = {{"id", l.id}, {"wavenumber", l.wavenumber}};
        if (l.power) jl["power"] = *l.power;
        root["lasers"].push_back(jl);
    }
    root["transitions"] = json::array();
    for (const auto& t : s.transitions)
        root["transitions"].push_back({{"laser", t.laser},
                                       {"lower", t.lower},
                                       {"upper", t.upper},
                                       {"rabi", t.rabi}});
    root["context"] = {{"column_density", s.context.column_density},
                       {"area", s.context.area},
                       {"bandwidth", s.context.bandwidth},
                       {"efficiency", s.context.efficiency},
                       {"initial_level", s.context.initial_level}};
    return root.dump(2);
}

std::vector<Diagnostic> validate_scheme(const LevelScheme& s) {
    std::vector<Diagnostic> out;
    auto add = [&](std::string type, std::string field, std::string rule) {
        out.push_back({std::move(type), std::move(field), std::move(rule)});
    };

    std::set<int> level_ids;
    for (const auto& l : s.levels) {
        std::string tag = "Level " + std::to_string(l.id);
        if (!level_ids.insert(l.id).second) add(tag, "id", "ids unique");
        if (l.gamma < 0) add(tag, "gamma", "gamma >= 0");
        if (!std::isfinite(l.detuning)) add(tag, "detuning", "finite");
    }
    for (int i = 1; i <= s.num_levels(); ++i)
        if (!level_ids.count(i)) {
            add("Level", "id",
                "ids contiguous from 1 (missing " + std::to_string(i) + ")");
            break;
        }

    std::set<int> laser_ids;
    for (const auto& l : s.lasers) {
        std::string tag = "Laser " + std::to_string(l.id);
        if (!laser_ids.insert(l.id).second) add(tag, "id", "ids unique");
        if (!(l.wavenumber > 0)) add(tag, "wavenumber", "k > 0");
        if (!(l.omega > 0)) add(tag, "omega", "omega > 0");
        if (l.power && !(*l.power > 0)) add(tag, "power", "P > 0");
    }
    for (int i = 1; i <= s.num_lasers(); ++i)
        if (!laser_ids.count(i)) {
            add("Laser", "id",
                "ids contiguous from 1 (missing " + std::to_string(i) + ")");
            break;
        }

    if (s.transitions.empty())
        add("LevelScheme", "transitions", "at least one transition");
    std::set<std::tuple<int, int, int>> seen;
    for (const auto& t : s.transitions) {
        std::string tag = "Transition (" + std::to_string(t.laser) + "," +
                          std::to_string(t.lower) + "," +
                          std::to_string(t.upper) + ")";
        if (t.lower == t.upper) add(tag, "upper", "lower != upper");
        if (!level_ids.count(t.lower))
            add(tag, "lower", "unknown level " + std::to_string(t.lower));
        if (!level_ids.count(t.upper))
            add(tag, "upper", "unknown level " + std::to_string(t.upper));
        if (!laser_ids.count(t.laser))
            add(tag, "laser", "unknown laser " + std::to_string(t.laser));
        if (!(t.rabi >= 0)) add(tag, "rabi", "rabi >= 0");
        if (!seen.insert({t.laser, t.lower, t.upper}).second)
            add(tag, "laser", "(laser, lower, upper) unique");
    }

    const auto& c = s.context;
    if (!(c.column_density > 0))
        add("MeasurementContext", "column_density", "> 0");
    if (!(c.area > 0)) add("MeasurementContext", "area", "> 0");
    if (!(c.bandwidth > 0)) add("MeasurementContext", "bandwidth", "> 0");
    if (!(c.efficiency > 0))
        add("MeasurementContext", "efficiency", "in (0, 1]");
    else if (c.efficiency > 1)
        add("MeasurementContext", "efficiency", "in (0, 1]");
    if (!level_ids.count(c.initial_level))
        add("MeasurementContext", "initial_level",
            "unknown level " + std::to_string(c.initial_level));

    return out;
}

}  // namespace dressed_limit
