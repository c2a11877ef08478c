#include "skomap/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "skomap/brownian.hpp"

namespace skomap {

using nlohmann::json;

json parse_json_text(const std::string& text, const std::string& source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("", source + ": invalid JSON at byte " + std::to_string(e.byte));
    }
}

json load_json_file(const std::string& filename) {
    std::ifstream in(filename, std::ios::binary);
    if (!in) throw UsageError("cannot open " + filename);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str(), filename);
}

namespace {

std::string escape(const std::string& key) {
    std::string out;
    for (char c : key) {
        if (c == '~') out += "~0";
        else if (c == '/') out += "~1";
        else out += c;
    }
    return out;
}

const char* type_name(const json& j) { return j.type_name(); }

// Object view that remembers which keys were read.
class Obj {
public:
    Obj(const json& j, std::string ptr) : j_(j), ptr_(std::move(ptr)) {
        if (!j.is_object()) throw ConfigError(ptr_, std::string("expected an object, got ") + type_name(j));
    }

    std::string at(const std::string& key) const { return ptr_ + "/" + escape(key); }
    bool has(const std::string& key) {
        seen_.insert(key);
        return j_.contains(key);
    }
    const json& get(const std::string& key) {
        if (!has(key)) throw ConfigError(at(key), "required field is missing");
        return j_.at(key);
    }

    double number(const std::string& key) { return as_number(get(key), at(key)); }
    double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }
    std::optional<double> opt_number(const std::string& key) {
        if (!has(key)) return std::nullopt;
        return number(key);
    }
    bool boolean(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_boolean()) throw ConfigError(at(key), std::string("expected a boolean, got ") + type_name(v));
        return v.get<bool>();
    }
    std::string string(const std::string& key) {
        const json& v = get(key);
        if (!v.is_string()) throw ConfigError(at(key), std::string("expected a string, got ") + type_name(v));
        return v.get<std::string>();
    }
    std::optional<std::string> opt_string(const std::string& key) {
        if (!has(key)) return std::nullopt;
        return string(key);
    }

    // Rejects every key not read so far.
    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!seen_.count(it.key())) throw ConfigError(at(it.key()), "unknown field");
        }
    }

    static double as_number(const json& v, const std::string& ptr) {
        if (v.is_number()) return v.get<double>();
        if (v.is_string()) {
            const auto s = v.get<std::string>();
            if (s == "inf") return INFINITY;
            if (s == "-inf") return -INFINITY;
        }
        throw ConfigError(ptr, std::string("expected a number, got ") + type_name(v));
    }

private:
    const json& j_;
    std::string ptr_;
    std::set<std::string> seen_;
};

void check_command(Obj& o, const char* name) {
    if (o.has("command")) {
        const auto c = o.string("command");
        if (c != name) throw ConfigError(o.at("command"), "config is for '" + c + "', not '" + name + "'");
    }
}

double positive(Obj& o, const std::string& key, double fallback) {
    const double v = o.number(key, fallback);
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(o.at(key), "must be a positive finite number");
    return v;
}

std::uint64_t as_u64(const json& v, const std::string& ptr) {
    if (!v.is_number_unsigned()) throw ConfigError(ptr, "expected a non-negative integer");
    return v.get<std::uint64_t>();
}

std::vector<std::uint64_t> seeds_field(Obj& o, const std::string& key) {
    const json& v = o.get(key);
    const auto ptr = o.at(key);
    std::vector<std::uint64_t> out;
    if (v.is_string()) {
        try {
            out = expand_seeds(parse_seed_range(v.get<std::string>()));
        } catch (const UsageError& e) {
            throw ConfigError(ptr, e.what());
        }
    } else if (v.is_array()) {
        for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_u64(v[i], ptr + "/" + std::to_string(i)));
    } else if (v.is_number_unsigned()) {
        out.push_back(v.get<std::uint64_t>());
    } else {
        throw ConfigError(ptr, "expected \"a..b\", an integer or an array of integers");
    }
    if (out.empty()) throw ConfigError(ptr, "must not be empty");
    return out;
}

std::vector<double> number_array(Obj& o, const std::string& key) {
    const json& v = o.get(key);
    const auto ptr = o.at(key);
    if (!v.is_array() || v.empty()) throw ConfigError(ptr, "expected a non-empty array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(Obj::as_number(v[i], ptr + "/" + std::to_string(i)));
    return out;
}

std::vector<std::size_t> resolutions_field(Obj& o, const std::string& key) {
    const json& v = o.get(key);
    const auto ptr = o.at(key);
    if (!v.is_array() || v.size() < 2) throw ConfigError(ptr, "expected an array of at least two resolutions");
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto item = ptr + "/" + std::to_string(i);
        const auto n = static_cast<std::size_t>(as_u64(v[i], item));
        try {
            dyadic_level(n);
        } catch (const UsageError& e) {
            throw ConfigError(item, e.what());
        }
        if (i > 0 && n <= out.back()) throw ConfigError(item, "resolutions must increase");
        out.push_back(n);
    }
    return out;
}

TrendThresholds thresholds_field(Obj& o) {
    TrendThresholds t;
    if (!o.has("thresholds")) return t;
    Obj th(o.get("thresholds"), o.at("thresholds"));
    t.diverging = positive(th, "diverging", t.diverging);
    t.plateauing = positive(th, "plateauing", t.plateauing);
    th.finish();
    if (!(t.plateauing < t.diverging)) throw ConfigError(o.at("thresholds"), "plateauing must be below diverging");
    return t;
}

BoundarySpec boundary_field(Obj& parent, const std::string& key, bool allow_alpha) {
    Obj b(parent.get(key), parent.at(key));
    BoundarySpec s;
    try {
        s.kind = parse_boundary_kind(b.string("kind"));
    } catch (const ConfigError&) {
        throw;
    } catch (const UsageError& e) {
        throw ConfigError(b.at("kind"), e.what());
    }
    if (allow_alpha) s.alpha = positive(b, "alpha", s.alpha);
    s.tau = positive(b, "tau", s.tau);
    if (b.has("scale")) s.scale = positive(b, "scale", 1.0);
    if (b.has("cap")) s.cap = positive(b, "cap", 1.0);
    s.gap = positive(b, "gap", s.gap);
    s.offset = b.number("offset", s.offset);
    if (b.has("knots")) {
        const json& k = b.get("knots");
        const auto ptr = b.at("knots");
        if (!k.is_array()) throw ConfigError(ptr, "expected an array of [t, lower, upper]");
        for (std::size_t i = 0; i < k.size(); ++i) {
            const auto item = ptr + "/" + std::to_string(i);
            if (!k[i].is_array() || k[i].size() != 3) throw ConfigError(item, "expected [t, lower, upper]");
            s.knots.push_back({Obj::as_number(k[i][0], item + "/0"), Obj::as_number(k[i][1], item + "/1"),
                               Obj::as_number(k[i][2], item + "/2")});
        }
    }
    b.finish();
    try {
        s.validate();
    } catch (const UsageError& e) {
        throw ConfigError(parent.at(key), e.what());
    }
    return s;
}

ThornSpec thorn_spec_fields(Obj& o, ThornSpec s, bool with_gamma) {
    if (with_gamma) s.gamma = positive(o, "gamma", s.gamma);
    s.epsilon = positive(o, "epsilon", s.epsilon);
    if (o.has("slope_cap")) {
        s.slope_cap = o.number("slope_cap");
        if (!(s.slope_cap >= 0.0) || !std::isfinite(s.slope_cap)) throw ConfigError(o.at("slope_cap"), "must be >= 0");
    }
    if (o.has("lipschitz")) s.lipschitz = o.boolean("lipschitz", true);
    return s;
}

}  // namespace

std::vector<std::uint64_t> expand_seeds(const SeedRange& r) {
    if (r.last - r.first >= 100000000ULL) throw UsageError("seed range is too large");
    std::vector<std::uint64_t> out;
    for (std::uint64_t s = r.first;; ++s) {
        out.push_back(s);
        if (s == r.last) break;
    }
    return out;
}

Construction parse_construction(const std::string& name) {
    if (name == "automatic") return Construction::automatic;
    if (name == "recursion") return Construction::recursion;
    if (name == "dyadic") return Construction::dyadic;
    if (name == "boxes") return Construction::boxes;
    throw UsageError("unknown construction '" + name + "'");
}

SolveConfig parse_solve_config(const json& j) {
    Obj o(j, "");
    check_command(o, "solve");
    SolveConfig c;
    c.psi = o.string("psi");
    c.lower = o.string("lower");
    c.upper = o.string("upper");
    c.out = o.opt_string("out");
    o.finish();
    return c;
}

VerifyConfig parse_verify_config(const json& j) {
    Obj o(j, "");
    check_command(o, "verify");
    VerifyConfig c;
    try {
        c.suite = parse_suite(o.string("suite"));
    } catch (const ConfigError&) {
        throw;
    } catch (const UsageError& e) {
        throw ConfigError(o.at("suite"), e.what());
    }
    const json& s = o.get("seeds");
    try {
        if (s.is_string()) c.seeds = parse_seed_range(s.get<std::string>());
        else if (s.is_number_unsigned()) c.seeds.first = c.seeds.last = s.get<std::uint64_t>();
        else throw UsageError("expected \"a..b\" or an integer");
    } catch (const UsageError& e) {
        throw ConfigError(o.at("seeds"), e.what());
    }
    if (o.has("tol")) {
        c.tol = o.number("tol");
        if (!(*c.tol >= 0.0)) throw ConfigError(o.at("tol"), "must be >= 0");
    }
    o.finish();
    return c;
}

CuspConfig parse_cusp_config(const json& j) {
    Obj o(j, "");
    check_command(o, "cusp");
    CuspConfig c;
    auto& e = c.experiment;
    e.spec = boundary_field(o, "boundary", false);
    e.alphas = number_array(o, "alphas");
    for (std::size_t i = 0; i < e.alphas.size(); ++i) {
        if (!(e.alphas[i] > 0.0) || !std::isfinite(e.alphas[i]))
            throw ConfigError(o.at("alphas") + "/" + std::to_string(i), "alpha must be positive");
    }
    e.resolutions = resolutions_field(o, "resolutions");
    e.seeds = seeds_field(o, "seeds");
    if (e.seeds.size() < 10) throw ConfigError(o.at("seeds"), "need at least 10 seeds");
    e.x0 = o.number("x0", 0.0);
    e.thresholds = thresholds_field(o);
    c.out = o.opt_string("out");
    o.finish();
    return c;
}

ThornConfig parse_thorn_config(const json& j) {
    Obj o(j, "");
    check_command(o, "thorn");
    ThornConfig c;
    auto& e = c.sweep;
    const auto gammas = number_array(o, "gammas");
    ThornSpec shared = thorn_spec_fields(o, ThornSpec{}, false);
    const bool lipschitz_given = o.has("lipschitz");
    for (std::size_t i = 0; i < gammas.size(); ++i) {
        const auto ptr = o.at("gammas") + "/" + std::to_string(i);
        ThornSpec s = shared;
        s.gamma = gammas[i];
        if (!lipschitz_given) s.lipschitz = s.gamma >= 1.0;
        try {
            s.validate();
        } catch (const UsageError& err) {
            throw ConfigError(ptr, err.what());
        }
        for (const auto& prev : e.specs) {
            if (prev.gamma == s.gamma) throw ConfigError(ptr, "duplicate gamma");
        }
        e.specs.push_back(s);
    }
    e.horizon = positive(o, "T", 1.0);
    e.resolutions = resolutions_field(o, "resolutions");
    e.seeds = seeds_field(o, "seeds");
    if (e.seeds.size() < 10) throw ConfigError(o.at("seeds"), "need at least 10 seeds");
    e.threshold_scale = positive(o, "threshold_scale", 2.0);
    e.thresholds = thresholds_field(o);
    if (o.has("control")) {
        Obj ctl(o.get("control"), o.at("control"));
        ThornSpec s = thorn_spec_fields(ctl, shared, true);
        s.base_width = positive(ctl, "base_width", 1.0);
        if (!ctl.has("lipschitz")) s.lipschitz = s.gamma >= 1.0;
        ctl.finish();
        try {
            s.validate();
        } catch (const UsageError& err) {
            throw ConfigError(o.at("control"), err.what());
        }
        c.control = s;
    }
    c.out = o.opt_string("out");
    o.finish();
    return c;
}

CheckConditionsConfig parse_check_conditions_config(const json& j) {
    Obj o(j, "");
    check_command(o, "check-conditions");
    CheckConditionsConfig c;
    c.boundary = boundary_field(o, "boundary", true);
    if (o.has("construction")) {
        try {
            c.sequence.construction = parse_construction(o.string("construction"));
        } catch (const ConfigError&) {
            throw;
        } catch (const UsageError& e) {
            throw ConfigError(o.at("construction"), e.what());
        }
    }
    if (c.sequence.construction == Construction::boxes) c.sequence = box_options();
    if (o.has("start")) c.sequence.start = o.number("start");
    if (o.has("step_floor")) c.sequence.step_floor = positive(o, "step_floor", 1.0);
    if (o.has("max_count")) {
        const auto n = as_u64(o.get("max_count"), o.at("max_count"));
        if (n < 2) throw ConfigError(o.at("max_count"), "must be at least 2");
        c.sequence.max_count = static_cast<std::size_t>(n);
    }
    if (o.has("c1")) c.c1 = positive(o, "c1", 1.0);
    c.cauchy_tol = positive(o, "cauchy_tol", c.cauchy_tol);
    o.finish();
    return c;
}

}  // namespace skomap
