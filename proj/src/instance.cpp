#include "fpf/instance.hpp"

#include "fpf/solver.hpp"

#include <json.hpp>

#include <set>
#include <sstream>

namespace fpf {

using json = nlohmann::json;

namespace {

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    for (std::string line; std::getline(is, line);) out.push_back(line);
    return out;
}

struct Context {
    std::map<std::string, ParsedCircuit> circuits;
};

class Obj {
public:
    Obj(const json& j, std::string path, json& out, const Context& ctx) : j_(j), path_(std::move(path)), out_(out), ctx_(ctx) {
        if (!j.is_object()) fail(path_, "expected an object");
        out_ = json::object();
    }

    ~Obj() noexcept(false) {
        if (std::uncaught_exceptions() > 0) return;
        for (const auto& [k, v] : j_.items())
            if (!seen_.count(k)) fail(at(k), "unknown field");
    }

    bool has(const std::string& k) const { return j_.contains(k); }

    std::size_t count(const std::string& k) {
        const json& v = get(k);
        if (!v.is_number_unsigned()) fail(at(k), "expected a nonnegative integer");
        out_[k] = v;
        return v.get<std::size_t>();
    }

    std::vector<std::size_t> counts(const std::string& k) {
        const json& v = array(k);
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number_unsigned()) fail(at(k, i), "expected a nonnegative integer");
            out.push_back(v[i].get<std::size_t>());
        }
        out_[k] = v;
        return out;
    }

    Rational rational(const std::string& k) { return rat(get(k), at(k), out_[k]); }
    RVec rvec(const std::string& k) { return vec(get(k), at(k), out_[k]); }
    RMat rmat(const std::string& k) { return mat(get(k), at(k), out_[k]); }

    std::vector<RMat> rtensor(const std::string& k) {
        const json& v = array(k);
        std::vector<RMat> out;
        json& o = out_[k] = json::array();
        for (std::size_t i = 0; i < v.size(); ++i) {
            o.push_back(json());
            out.push_back(mat(v[i], at(k, i), o.back()));
        }
        return out;
    }

    Circuit circuit(const std::string& k) { return lookup(get(k), at(k), out_[k]).circuit; }

    std::vector<Circuit> circuit_list(const std::string& k) {
        const json& v = array(k);
        std::vector<Circuit> out;
        json& o = out_[k] = json::array();
        for (std::size_t i = 0; i < v.size(); ++i) {
            o.push_back(json());
            out.push_back(lookup(v[i], at(k, i), o.back()).circuit);
        }
        return out;
    }

    Pseudogate gate(const std::string& k) { return gate_at(get(k), at(k), out_[k]); }

    std::vector<Pseudogate> gate_list(const std::string& k) {
        const json& v = array(k);
        std::vector<Pseudogate> out;
        json& o = out_[k] = json::array();
        for (std::size_t i = 0; i < v.size(); ++i) {
            o.push_back(json());
            out.push_back(gate_at(v[i], at(k, i), o.back()));
        }
        return out;
    }

    const ParsedCircuit& parsed(const std::string& k) { return lookup(get(k), at(k), out_[k]); }

    template <class F>
    void each(const std::string& k, F fn) {
        const json& v = array(k);
        json& o = out_[k] = json::array();
        for (std::size_t i = 0; i < v.size(); ++i) {
            o.push_back(json());
            Obj sub(v[i], at(k, i), o.back(), ctx_);
            fn(sub);
        }
    }

    template <class F>
    auto object(const std::string& k, F fn) {
        Obj sub(get(k), at(k), out_[k], ctx_);
        return fn(sub);
    }

    [[noreturn]] static void fail(const std::string& path, const std::string& what) {
        throw SchemaError(path + ": " + what);
    }

    const std::string& path() const { return path_; }
    std::string at(const std::string& k) const { return path_ + "." + k; }
    std::string at(const std::string& k, std::size_t i) const { return at(k) + "[" + std::to_string(i) + "]"; }

private:
    const json& get(const std::string& k) {
        if (!j_.contains(k)) fail(at(k), "missing field");
        seen_.insert(k);
        return j_.at(k);
    }

    const json& array(const std::string& k) {
        const json& v = get(k);
        if (!v.is_array()) fail(at(k), "expected an array");
        return v;
    }

    static Rational rat(const json& v, const std::string& path, json& out) {
        if (!v.is_string()) fail(path, "rationals are written as \"p/q\" strings");
        try {
            Rational r = parse_rational(v.get<std::string>());
            out = format_rational(r);
            return r;
        } catch (const std::invalid_argument& e) {
            fail(path, e.what());
        }
    }

    static RVec vec(const json& v, const std::string& path, json& out) {
        if (!v.is_array()) fail(path, "expected an array of rationals");
        RVec r;
        out = json::array();
        for (std::size_t i = 0; i < v.size(); ++i) {
            out.push_back(json());
            r.push_back(rat(v[i], path + "[" + std::to_string(i) + "]", out.back()));
        }
        return r;
    }

    static RMat mat(const json& v, const std::string& path, json& out) {
        if (!v.is_array()) fail(path, "expected an array of rows");
        RMat r;
        out = json::array();
        for (std::size_t i = 0; i < v.size(); ++i) {
            out.push_back(json());
            r.push_back(vec(v[i], path + "[" + std::to_string(i) + "]", out.back()));
        }
        return r;
    }

    const ParsedCircuit& lookup(const json& v, const std::string& path, json& out) const {
        if (!v.is_string()) fail(path, "expected the name of an embedded circuit");
        auto it = ctx_.circuits.find(v.get<std::string>());
        if (it == ctx_.circuits.end()) fail(path, "no embedded circuit named '" + v.get<std::string>() + "'");
        out = v;
        return it->second;
    }

    // A circuit name (no aux wires) or {"circuit": name, "aux": count}.
    Pseudogate gate_at(const json& v, const std::string& path, json& out) const {
        if (v.is_string()) return as_pseudogate(lookup(v, path, out).circuit);
        Obj o(v, path, out, ctx_);
        const Circuit& c = o.parsed("circuit").circuit;
        const std::size_t aux = o.count("aux");
        if (aux > c.input_arity() || aux > c.output_arity()) fail(o.at("aux"), "more aux wires than circuit ports");
        return Pseudogate(c, c.input_arity() - aux, c.output_arity() - aux, aux);
    }

    const json& j_;
    std::string path_;
    json& out_;
    const Context& ctx_;
    std::set<std::string> seen_;
};

template <class F>
void validated(const std::string& path, F fn) {
    try {
        fn();
    } catch (const SchemaError& e) {
        throw SchemaError(path + ": " + e.what());
    }
}

GameNF read_game(Obj& o) {
    GameNF g;
    g.actions = o.counts("actions");
    auto pay = o.rmat("payoffs");
    g.payoffs = pay;
    validated(o.at("payoffs"), [&] { g.validate(); });
    return g;
}

ConvexSet read_set(Obj& o) {
    ConvexSet s;
    if (o.has("A")) s.A = o.rmat("A");
    if (o.has("b")) s.b = o.rvec("b");
    if (o.has("h")) s.h = o.circuit_list("h");
    if (o.has("grad_h")) s.grad_h = o.gate_list("grad_h");
    if (s.A.size() != s.b.size()) Obj::fail(o.path(), "A and b need the same number of rows");
    if (s.h.size() != s.grad_h.size()) Obj::fail(o.path(), "one gradient gate per constraint h");
    return s;
}

InstancePayload read_payload(const std::string& kind, Obj& o) {
    if (kind == "nash") return read_game(o);
    if (kind == "eps_proper") {
        EpsProperInstance e{read_game(o), o.rational("eps")};
        if (e.eps <= 0 || e.eps >= 1) Obj::fail(o.at("eps"), "eps must lie in (0, 1)");
        return e;
    }
    if (kind == "stochastic") {
        StochasticGameSpec g;
        g.states = o.count("states");
        g.actions = o.counts("actions");
        for (auto& m : o.rtensor("payoffs")) g.payoffs.push_back(m);
        for (auto& m : o.rtensor("transitions")) g.transitions.push_back(m);
        g.lambda = o.rational("lambda");
        validated(o.path(), [&] { g.validate(); });
        return g;
    }
    if (kind == "concave") {
        ConcaveGameSpec g;
        o.each("players", [&](Obj& p) {
            ConcavePlayer P(p.circuit("utility"), p.gate("grad_u"));
            P.dim = p.count("dim");
            P.R = p.rational("R");
            if (p.has("A")) P.A = p.rmat("A");
            if (p.has("b")) P.b = p.rvec("b");
            if (p.has("g")) P.g = p.circuit_list("g");
            if (p.has("grad_g")) P.grad_g = p.gate_list("grad_g");
            g.players.push_back(std::move(P));
        });
        return g;
    }
    if (kind == "ccc") {
        CCCSystem s;
        s.n = o.count("n");
        if (o.has("A")) s.A = o.rmat("A");
        if (o.has("b")) s.b = o.rvec("b");
        if (o.has("h")) s.h = o.circuit_list("h");
        if (o.has("grad_h")) s.grad_h = o.gate_list("grad_h");
        s.R = o.rational("R");
        o.each("constraints", [&](Obj& c) { s.constraints.push_back({c.circuit("f"), c.circuit("g"), c.gate("grad_g")}); });
        return s;
    }
    if (kind == "cake") {
        CakeSpec c{o.count("n"), o.circuit_list("u")};
        validated(o.path(), [&] { c.validate(); });
        return c;
    }
    if (kind == "kkm") {
        KKMSpec k{o.count("n"), o.circuit("F")};
        validated(o.path(), [&] { k.validate(); });
        return k;
    }
    if (kind == "bapat") {
        BapatSpec b{o.count("n"), o.circuit_list("f")};
        validated(o.path(), [&] { b.validate(); });
        return b;
    }
    if (kind == "hz") {
        HZSpec h{o.count("n"), o.rmat("u")};
        validated(o.path(), [&] { h.validate(); });
        return h;
    }
    if (kind == "ad_market") {
        ADMarketSpec m;
        m.goods = o.count("goods");
        m.C = o.rational("C");
        o.each("consumers", [&](Obj& c) {
            Consumer k(c.circuit("utility"), c.gate("grad_u"));
            k.X = c.object("X", read_set);
            k.endowment = c.rvec("endowment");
            k.lower = c.rvec("lower");
            if (c.has("witness")) k.witness = c.rvec("witness");
            k.shares = c.rvec("shares");
            m.consumers.push_back(std::move(k));
        });
        o.each("firms", [&](Obj& f) { m.firms.push_back(Firm{f.object("Y", read_set)}); });
        validated(o.path(), [&] { m.validate(); });
        return m;
    }
    if (kind == "cp") {
        CPInstance c;
        c.spec.n = o.count("n");
        c.spec.m = o.count("m");
        c.spec.k = o.count("k");
        c.spec.s = o.count("s");
        c.spec.g = o.circuit_list("g");
        c.spec.grad_f = o.gate("grad_f");
        c.spec.grad_g = o.gate_list("grad_g");
        c.params.w = o.rvec("w");
        c.params.A = o.rmat("A");
        c.params.b = o.rvec("b");
        c.params.R = o.rational("R");
        if (c.params.R <= 0) Obj::fail(o.at("R"), "R must be positive");
        return c;
    }
    if (kind == "raw_circuit") {
        const ParsedCircuit& pc = o.parsed("circuit");
        if (!pc.notes.domain) Obj::fail(o.at("circuit"), "raw circuits need a BOX domain annotation");
        FixedPointProblem p{pc.circuit, *pc.notes.domain, pc.notes.primary.value_or(pc.circuit.input_arity()), pc.notes.aux};
        if (p.domain.dim() != p.circuit.input_arity() || p.circuit.output_arity() != p.circuit.input_arity())
            Obj::fail(o.at("circuit"), "a fixed-point circuit maps its domain to itself");
        return RawCircuitInstance{std::move(p)};
    }
    throw SchemaError("kind: unknown problem kind '" + kind + "'");
}

}  // namespace

InstanceFile parse_instance(std::string_view bytes) {
    json doc;
    try {
        doc = json::parse(bytes.begin(), bytes.end());
    } catch (const json::parse_error& e) {
        auto [line, col] = line_column(bytes, e.byte > 0 ? e.byte - 1 : 0);
        std::string what = e.what();
        auto pos = what.find("syntax error");
        throw ParseError(pos == std::string::npos ? what : what.substr(pos), line, col);
    }
    if (!doc.is_object()) throw SchemaError("instance: expected a JSON object");
    for (const auto& [k, v] : doc.items())
        if (k != "format" && k != "kind" && k != "payload" && k != "circuits") throw SchemaError(k + ": unknown field");
    if (!doc.contains("format") || !doc["format"].is_number_integer()) throw SchemaError("format: missing or not an integer");
    InstanceFile inst;
    inst.version = doc["format"].get<int>();
    if (inst.version != kInstanceFormatVersion)
        throw SchemaError("format: unsupported version " + std::to_string(inst.version));
    if (!doc.contains("kind") || !doc["kind"].is_string()) throw SchemaError("kind: missing or not a string");
    inst.kind = doc["kind"].get<std::string>();
    if (!doc.contains("payload")) throw SchemaError("payload: missing field");

    Context ctx;
    if (doc.contains("circuits")) {
        if (!doc["circuits"].is_object()) throw SchemaError("circuits: expected an object");
        for (const auto& [name, v] : doc["circuits"].items()) {
            std::string text;
            if (v.is_string()) {
                text = v.get<std::string>();
            } else if (v.is_array()) {
                for (const auto& line : v) {
                    if (!line.is_string()) throw SchemaError("circuits." + name + ": expected lines of text");
                    text += line.get<std::string>() + "\n";
                }
            } else {
                throw SchemaError("circuits." + name + ": expected text or an array of lines");
            }
            try {
                ctx.circuits.emplace(name, parse_circuit_text(text));
            } catch (const ParseError& e) {
                throw SchemaError("circuits." + name + ": " + e.what());
            }
            inst.circuits[name] = to_text(ctx.circuits.at(name).circuit, ctx.circuits.at(name).notes);
        }
    }
    json norm;
    {
        Obj o(doc["payload"], "payload", norm, ctx);
        inst.payload = read_payload(inst.kind, o);
    }
    inst.payload_json = norm.dump();
    return inst;
}

std::string serialize_instance(const InstanceFile& inst) {
    json doc;
    doc["format"] = inst.version;
    doc["kind"] = inst.kind;
    doc["payload"] = json::parse(inst.payload_json);
    if (!inst.circuits.empty()) {
        json& c = doc["circuits"] = json::object();
        for (const auto& [name, text] : inst.circuits) c[name] = split_lines(text);
    }
    return doc.dump(2) + "\n";
}

FixedPointProblem compile_instance(const InstanceFile& inst) {
    return std::visit(
        [](const auto& p) -> FixedPointProblem {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, GameNF>) return compile_nash(p);
            else if constexpr (std::is_same_v<T, ConcaveGameSpec>) return compile_concave(p);
            else if constexpr (std::is_same_v<T, CCCSystem>) return compile_ccc(p);
            else if constexpr (std::is_same_v<T, EpsProperInstance>) return compile_eps_proper(p.game, p.eps);
            else if constexpr (std::is_same_v<T, StochasticGameSpec>) return compile_stochastic(p);
            else if constexpr (std::is_same_v<T, CakeSpec>) return compile_cake(p);
            else if constexpr (std::is_same_v<T, KKMSpec>) return compile_kkm(p);
            else if constexpr (std::is_same_v<T, BapatSpec>) return compile_cake(bapat_to_cake(p));
            else if constexpr (std::is_same_v<T, ADMarketSpec>) return compile_ad_market(p);
            else if constexpr (std::is_same_v<T, HZSpec>) return compile_hz(p);
            else if constexpr (std::is_same_v<T, CPInstance>) return compile_cp(p.spec, p.params);
            else return p.problem;
        },
        inst.payload);
}

std::size_t instance_point_dim(const InstanceFile& inst) {
    return std::visit(
        [](const auto& p) -> std::size_t {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, GameNF>) return p.strategy_dim();
            else if constexpr (std::is_same_v<T, ConcaveGameSpec>) return p.profile_dim();
            else if constexpr (std::is_same_v<T, CCCSystem>) return 2 * p.n;
            else if constexpr (std::is_same_v<T, EpsProperInstance>) return p.game.strategy_dim();
            else if constexpr (std::is_same_v<T, StochasticGameSpec>) return p.primary_dim();
            else if constexpr (std::is_same_v<T, CakeSpec> || std::is_same_v<T, KKMSpec> || std::is_same_v<T, BapatSpec>)
                return p.n;
            else if constexpr (std::is_same_v<T, ADMarketSpec> || std::is_same_v<T, HZSpec>) return p.primary_dim();
            else if constexpr (std::is_same_v<T, CPInstance>) return p.spec.n;
            else return p.problem.dim();
        },
        inst.payload);
}

double default_verify_tolerance(const InstanceFile& inst) {
    const std::string& k = inst.kind;
    return k == "cake" || k == "bapat" || k == "ad_market" || k == "stochastic" ? 1e-5 : 1e-6;
}

VerificationReport verify_instance(const InstanceFile& inst, std::span<const double> point, double eps) {
    if (point.size() != instance_point_dim(inst))
        throw SchemaError("point: expected " + std::to_string(instance_point_dim(inst)) + " coordinates, got " +
                          std::to_string(point.size()));
    return std::visit(
        [&](const auto& p) -> VerificationReport {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, GameNF>) return check_nash(p, point, eps);
            else if constexpr (std::is_same_v<T, ConcaveGameSpec>) return check_concave(p, point, eps);
            else if constexpr (std::is_same_v<T, CCCSystem>) return check_ccc(p, point.first(p.n), eps);
            else if constexpr (std::is_same_v<T, EpsProperInstance>) return check_eps_proper(p.game, point, p.eps, eps);
            else if constexpr (std::is_same_v<T, StochasticGameSpec>) {
                const std::size_t nv = p.actions.size() * p.states;
                return check_stochastic_stationary(p, point.first(nv), point.subspan(nv), eps);
            } else if constexpr (std::is_same_v<T, CakeSpec>) return check_envy_free(p, point, eps);
            else if constexpr (std::is_same_v<T, KKMSpec>) return check_kkm(p, point, eps);
            else if constexpr (std::is_same_v<T, BapatSpec>) return check_bapat(p, point, eps);
            else if constexpr (std::is_same_v<T, ADMarketSpec>) {
                const std::size_t xs = p.consumers.size() * p.goods, ys = p.firms.size() * p.goods;
                return check_ad_equilibrium(p, point.first(xs), point.subspan(xs, ys), point.subspan(xs + ys), eps);
            } else if constexpr (std::is_same_v<T, HZSpec>) return check_hz(p, point.first(p.n), point.subspan(p.n), eps);
            else if constexpr (std::is_same_v<T, CPInstance>) return check_cp(p.spec, p.params, point, eps);
            else {
                VerificationReport rep;
                rep.record("fixed-point residual", fixed_point_residual(p.problem.circuit, point), eps);
                rep.record("domain", p.problem.domain.contains(point, eps) ? 0.0 : 1.0, 0.0);
                return rep;
            }
        },
        inst.payload);
}

std::vector<double> parse_point(std::string_view bytes) {
    json doc;
    try {
        doc = json::parse(bytes.begin(), bytes.end());
    } catch (const json::parse_error& e) {
        auto [line, col] = line_column(bytes, e.byte > 0 ? e.byte - 1 : 0);
        throw ParseError("malformed point file", line, col);
    }
    if (!doc.is_object() || !doc.contains("point") || !doc["point"].is_array())
        throw SchemaError("point: expected {\"point\": [numbers]}");
    for (const auto& [k, v] : doc.items())
        if (k != "point") throw SchemaError(k + ": unknown field");
    std::vector<double> out;
    for (std::size_t i = 0; i < doc["point"].size(); ++i) {
        const json& v = doc["point"][i];
        if (v.is_number()) out.push_back(v.get<double>());
        else if (v.is_string()) {
            try {
                out.push_back(to_double(parse_rational(v.get<std::string>())));
            } catch (const std::invalid_argument& e) {
                throw SchemaError("point[" + std::to_string(i) + "]: " + e.what());
            }
        } else {
            throw SchemaError("point[" + std::to_string(i) + "]: expected a number");
        }
    }
    return out;
}

std::string serialize_point(std::span<const double> point) {
    json doc;
    doc["point"] = std::vector<double>(point.begin(), point.end());
    return doc.dump(2) + "\n";
}

}  // namespace fpf
