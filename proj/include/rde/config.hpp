#pragma once

// JSON run configuration and the built-in figure presets.
//
//   {"k": 2, "form": "u",
//    "A": {"constant": "2"}, "B": {"periodic": ["-1", "1/2"]},
//    "initial": ["-2", "-3", ...]}
//
// Rationals are always strings. "initial" lists u[0] .. u[4k-1] for form "u"
// and eta[-4k+1] .. eta[0] for form "eta" (the same storage order).

#include "rde/core.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace rde {

class ParseError : public Error {
public:
    using Error::Error;
};

class UnknownPreset : public Error {
public:
    explicit UnknownPreset(const std::string& name)
        : Error("unknown preset \"" + name + "\" (expected fig1 or fig2)") {}
};

struct RunConfig {
    SystemSpec system;
    std::optional<std::int64_t> steps;
    std::optional<std::int64_t> horizon;
    std::optional<std::int64_t> max_period;
    std::string out;
    std::string preset;
};

namespace detail {

using nlohmann::json;

inline const json& require_field(const json& obj, const char* field) {
    auto it = obj.find(field);
    if (it == obj.end()) throw ParseError(std::string("missing field \"") + field + "\"");
    return *it;
}

inline Rational parse_rational_field(const json& v, const std::string& where) {
    if (!v.is_string())
        throw ParseError("field " + where + ": rationals must be strings like \"-1/3\"");
    try {
        return Rational::parse(v.get<std::string>());
    } catch (const RationalParseError& e) {
        throw ParseError("field " + where + ": " + e.what());
    }
}

inline SequenceSpec parse_sequence(const json& v, const char* field) {
    const std::string where = std::string("\"") + field + "\"";
    if (!v.is_object() || v.size() != 1)
        throw ParseError("field " + where + ": expected {\"constant\": ...} or {\"periodic\": [...]}");
    if (auto it = v.find("constant"); it != v.end())
        return SequenceSpec::constant(parse_rational_field(*it, where + ".constant"));
    if (auto it = v.find("periodic"); it != v.end()) {
        if (!it->is_array()) throw ParseError("field " + where + ".periodic: expected an array");
        if (it->empty()) throw ValidationError("field " + where + ".periodic: sequence is empty");
        std::vector<Rational> values;
        for (std::size_t j = 0; j < it->size(); ++j)
            values.push_back(parse_rational_field((*it)[j], where + ".periodic[" + std::to_string(j) + "]"));
        return SequenceSpec::periodic(std::move(values));
    }
    throw ParseError("field " + where + ": expected \"constant\" or \"periodic\"");
}

inline std::optional<std::int64_t> optional_int(const json& doc, const char* field) {
    auto it = doc.find(field);
    if (it == doc.end()) return std::nullopt;
    if (!it->is_number_integer()) throw ParseError(std::string("field \"") + field + "\": expected an integer");
    return it->get<std::int64_t>();
}

inline std::string line_context(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t p = 0; p < byte && p < text.size(); ++p) {
        if (text[p] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace detail

inline RunConfig parse_config(std::string_view text) {
    using detail::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        // e.byte is 1-based and points just past the offending character
        throw ParseError("invalid JSON at " + detail::line_context(text, e.byte == 0 ? 0 : e.byte - 1));
    }
    if (!doc.is_object()) throw ParseError("config must be a JSON object");

    RunConfig cfg;
    SystemSpec& spec = cfg.system;
    const json& k = detail::require_field(doc, "k");
    if (!k.is_number_integer()) throw ParseError("field \"k\": expected an integer");
    spec.k = k.get<std::int64_t>();
    if (spec.k < 1) throw ValidationError("field \"k\": must be at least 1");

    if (auto it = doc.find("form"); it != doc.end()) {
        if (*it == "u")
            spec.form = Form::u;
        else if (*it == "eta")
            spec.form = Form::eta;
        else
            throw ParseError("field \"form\": expected \"u\" or \"eta\"");
    }
    spec.A = detail::parse_sequence(detail::require_field(doc, "A"), "A");
    spec.B = detail::parse_sequence(detail::require_field(doc, "B"), "B");

    const json& init = detail::require_field(doc, "initial");
    if (!init.is_array()) throw ParseError("field \"initial\": expected an array");
    for (std::size_t j = 0; j < init.size(); ++j)
        spec.initial.push_back(detail::parse_rational_field(init[j], "\"initial\"[" + std::to_string(j) + "]"));
    spec.validate();

    cfg.steps = detail::optional_int(doc, "steps");
    cfg.horizon = detail::optional_int(doc, "horizon");
    cfg.max_period = detail::optional_int(doc, "max_period");
    return cfg;
}

inline std::string to_config_json(const SystemSpec& spec) {
    using detail::json;
    auto seq = [](const SequenceSpec& s) {
        if (s.period() == 1) return json{{"constant", s.values().front().str()}};
        json arr = json::array();
        for (const auto& v : s.values()) arr.push_back(v.str());
        return json{{"periodic", arr}};
    };
    json init = json::array();
    for (const auto& v : spec.initial) init.push_back(v.str());
    json doc = {{"k", spec.k},
                {"form", spec.form == Form::u ? "u" : "eta"},
                {"A", seq(spec.A)},
                {"B", seq(spec.B)},
                {"initial", init}};
    return doc.dump();
}

// x[n+8] = x[n] / (2 - x[n] x[n+4]) with x[0..7] = -2,-3,-4,1,-1/2,-1/3,-1/4,1
inline SystemSpec figure1_spec() {
    SystemSpec s;
    s.k = 2;
    s.A = Rational(2);
    s.B = Rational(-1);
    for (const char* v : {"-2", "-3", "-4", "1", "-1/2", "-1/3", "-1/4", "1"})
        s.initial.push_back(Rational::parse(v));
    return s;
}

// x[n+8] = x[n] / (2 + x[n] x[n+4]) with x[0..7] = 2,3,4,1,1/2,1/3,1/4,1
inline SystemSpec figure2_spec() {
    SystemSpec s;
    s.k = 2;
    s.A = Rational(2);
    s.B = Rational(1);
    for (const char* v : {"2", "3", "4", "1", "1/2", "1/3", "1/4", "1"})
        s.initial.push_back(Rational::parse(v));
    return s;
}

inline SystemSpec preset_spec(std::string_view name) {
    if (name == "fig1") return figure1_spec();
    if (name == "fig2") return figure2_spec();
    throw UnknownPreset(std::string(name));
}

}  // namespace rde
