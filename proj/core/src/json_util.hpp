// json_util.hpp - shared helpers for the JSON document codecs.

#pragma once

#include <algorithm>
#include <initializer_list>
#include <string>
#include <vector>

#include "json.hpp"
#include "qoscompose/model.hpp"

namespace qosc::jsonio {

using nlohmann::json;

constexpr int kDocVersion = 1;

inline const json& need(const json& obj, const char* key,
                        const std::string& what) {
    const auto it = obj.find(key);
    if (it == obj.end())
        throw ValidationError(what + ": missing key '" + key + "'");
    return *it;
}

inline std::string need_string(const json& obj, const char* key,
                               const std::string& what) {
    const json& v = need(obj, key, what);
    if (!v.is_string())
        throw ValidationError(what + ": key '" + key + "' must be a string");
    return v.get<std::string>();
}

inline double need_number(const json& obj, const char* key,
                          const std::string& what) {
    const json& v = need(obj, key, what);
    if (!v.is_number())
        throw ValidationError(what + ": key '" + key + "' must be a number");
    return v.get<double>();
}

inline void check_keys(const json& obj,
                       std::initializer_list<const char*> allowed,
                       const std::string& what) {
    if (!obj.is_object())
        throw ValidationError(what + ": expected an object");
    for (const auto& item : obj.items()) {
        const bool known =
            std::any_of(allowed.begin(), allowed.end(),
                        [&](const char* k) { return item.key() == k; });
        if (!known)
            throw ValidationError(what + ": unknown key '" + item.key() +
                                  "'");
    }
}

inline std::vector<std::string> string_list(const json& v,
                                            const std::string& what) {
    if (!v.is_array()) throw ValidationError(what + ": expected an array");
    std::vector<std::string> out;
    for (const json& e : v) {
        if (!e.is_string()) throw ValidationError(what + ": expected strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

inline void check_format(const json& doc, const char* format,
                         const std::string& what) {
    if (need_string(doc, "format", what) != format)
        throw ValidationError(what + ": not a " + format + " document");
    const json& v = need(doc, "version", what);
    if (!v.is_number_integer() || v.get<int>() != kDocVersion)
        throw ValidationError(what + ": unsupported document version");
}

inline json params_to_json(const ParamSet& ps) {
    json arr = json::array();
    for (const QosParam& p : ps.params) {
        json o;
        o["id"] = p.id;
        o["name"] = p.name;
        o["direction"] = to_string(p.direction);
        o["seq_agg"] = to_string(p.seq_agg);
        o["par_agg"] = to_string(p.par_agg);
        arr.push_back(std::move(o));
    }
    return arr;
}

inline ParamSet params_from_json(const json& arr, const std::string& what) {
    if (!arr.is_array()) throw ValidationError(what + ": expected an array");
    std::vector<QosParam> ps;
    for (const json& o : arr) {
        check_keys(o, {"id", "name", "direction", "seq_agg", "par_agg"}, what);
        QosParam p;
        p.id = need_string(o, "id", what);
        p.name = o.contains("name") ? need_string(o, "name", what) : p.id;
        p.direction = direction_from_string(need_string(o, "direction", what));
        p.seq_agg = aggregator_from_string(need_string(o, "seq_agg", what));
        p.par_agg = aggregator_from_string(need_string(o, "par_agg", what));
        ps.push_back(std::move(p));
    }
    return ParamSet(std::move(ps));
}

inline std::vector<Constraint> constraints_from_json(const json& arr,
                                                     const std::string& what) {
    if (!arr.is_array()) throw ValidationError(what + ": expected an array");
    std::vector<Constraint> out;
    for (const json& o : arr) {
        check_keys(o, {"param", "cmp", "bound"}, what);
        Constraint c;
        c.param_id = need_string(o, "param", what);
        c.cmp = cmp_from_string(need_string(o, "cmp", what));
        c.bound = need_number(o, "bound", what);
        out.push_back(std::move(c));
    }
    return out;
}

inline json constraints_to_json(const std::vector<Constraint>& cs) {
    json arr = json::array();
    for (const Constraint& c : cs) {
        json o;
        o["param"] = c.param_id;
        o["cmp"] = to_string(c.cmp);
        o["bound"] = c.bound;
        arr.push_back(std::move(o));
    }
    return arr;
}

}  // namespace qosc::jsonio
