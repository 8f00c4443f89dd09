#include "fpf/report.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>

namespace fpf {

using json = nlohmann::json;

std::string content_digest(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

json config_json(const SolverConfig& c) {
    return {{"alpha", c.alpha},       {"tol", c.tol},   {"max_iters", c.max_iters}, {"restarts", c.restarts},
            {"seed", c.seed},         {"anderson", c.anderson}, {"grid", c.grid}, {"newton", c.newton},
            {"extragradient", c.extragradient}};
}

json verification_json(const VerificationReport& r) {
    json conds = json::array();
    for (const auto& v : r.conditions)
        conds.push_back({{"condition", v.condition}, {"value", std::isfinite(v.value) ? json(v.value) : json("inf")}, {"tolerance", v.tolerance},
                         {"witness", v.witness}, {"ok", v.ok()}});
    return {{"pass", r.pass}, {"conditions", conds}, {"notes", r.notes}};
}

VerificationReport verification_from(const json& j) {
    VerificationReport r;
    r.pass = j.at("pass").get<bool>();
    for (const auto& c : j.at("conditions"))
        r.conditions.push_back({c.at("condition").get<std::string>(),
                                c.at("value").is_string() ? HUGE_VAL : c.at("value").get<double>(),
                                c.at("tolerance").get<double>(), c.at("witness").get<std::string>()});
    r.notes = j.at("notes").get<std::vector<std::string>>();
    return r;
}

}  // namespace

SolverConfig parse_solver_config(std::string_view bytes, SolverConfig c) {
    json j;
    try {
        j = json::parse(bytes.begin(), bytes.end());
    } catch (const json::parse_error& e) {
        throw ParseError("malformed config file", 1, e.byte);
    }
    if (!j.is_object()) throw SchemaError("config: expected an object");
    for (const auto& [k, v] : j.items()) {
        try {
            if (k == "alpha") c.alpha = v.get<double>();
            else if (k == "tol") c.tol = v.get<double>();
            else if (k == "max_iters") c.max_iters = v.get<std::size_t>();
            else if (k == "restarts") c.restarts = v.get<std::size_t>();
            else if (k == "seed") c.seed = v.get<std::uint64_t>();
            else if (k == "anderson") c.anderson = v.get<std::size_t>();
            else if (k == "grid") c.grid = v.get<std::size_t>();
            else if (k == "newton") c.newton = v.get<bool>();
            else if (k == "extragradient") c.extragradient = v.get<bool>();
            else throw SchemaError("config." + k + ": unknown field");
        } catch (const json::type_error&) {
            throw SchemaError("config." + k + ": wrong type");
        }
    }
    c.validate();
    return c;
}

std::string to_json(const VerificationReport& r) { return verification_json(r).dump(2) + "\n"; }

std::string to_json(const RunReport& r) {
    const auto& f = r.fixed_point;
    json j;
    j["digest"] = r.digest;
    j["kind"] = r.kind;
    j["config"] = config_json(r.config);
    j["fixed_point"] = {{"point", f.point}, {"residual", f.residual},   {"iterations", f.iterations},
                        {"converged", f.converged}, {"restart", f.restart}, {"trace", f.trace}};
    j["primary"] = r.primary;
    if (r.verification) j["verification"] = verification_json(*r.verification);
    j["timing"] = {{"seconds", r.seconds}};
    return j.dump(2) + "\n";
}

RunReport parse_run_report(std::string_view bytes) {
    json j;
    try {
        j = json::parse(bytes.begin(), bytes.end());
    } catch (const json::parse_error& e) {
        throw ParseError("malformed run report", 1, e.byte);
    }
    try {
        RunReport r;
        r.digest = j.at("digest").get<std::string>();
        r.kind = j.at("kind").get<std::string>();
        r.config = parse_solver_config(j.at("config").dump());
        const json& f = j.at("fixed_point");
        r.fixed_point.point = f.at("point").get<std::vector<double>>();
        r.fixed_point.residual = f.at("residual").get<double>();
        r.fixed_point.iterations = f.at("iterations").get<std::size_t>();
        r.fixed_point.converged = f.at("converged").get<bool>();
        r.fixed_point.restart = f.at("restart").get<std::size_t>();
        r.fixed_point.trace = f.at("trace").get<std::vector<double>>();
        r.primary = j.at("primary").get<std::vector<double>>();
        if (j.contains("verification")) r.verification = verification_from(j.at("verification"));
        r.seconds = j.at("timing").at("seconds").get<double>();
        return r;
    } catch (const json::exception& e) {
        throw SchemaError(std::string("run report: ") + e.what());
    }
}

std::string summarize(const RunReport& r) {
    std::ostringstream os;
    const auto& f = r.fixed_point;
    os << "instance " << r.digest << " (" << r.kind << ")\n";
    os << "solver   alpha=" << r.config.alpha << " tol=" << r.config.tol << " restarts=" << r.config.restarts
       << " seed=" << r.config.seed << "\n";
    os << "result   " << (f.converged ? "converged" : "NOT converged") << " residual=" << f.residual
       << " iterations=" << f.iterations << " restart=" << f.restart << " time=" << r.seconds << "s\n";
    os << "point   ";
    char buf[32];
    for (double v : r.primary) {
        std::snprintf(buf, sizeof buf, " %.9g", v);
        os << buf;
    }
    os << "\n";
    if (r.verification) {
        const auto& v = *r.verification;
        os << "verify   " << (v.pass ? "PASS" : "FAIL") << "\n";
        for (const auto& c : v.conditions) {
            os << "  " << (c.ok() ? "ok  " : "FAIL") << " " << c.condition << "  value=" << c.value
               << " tol=" << c.tolerance;
            if (!c.witness.empty()) os << "  [" << c.witness << "]";
            os << "\n";
        }
        for (const auto& n : v.notes) os << "  note: " << n << "\n";
    }
    return os.str();
}

}  // namespace fpf
