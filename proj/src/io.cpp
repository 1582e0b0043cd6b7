#include "cyclolab/io.hpp"

#include "cyclolab/error.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

namespace cyclo {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::InvalidInput, what); }

i64 parse_i64(const std::string& s) {
    i64 v = 0;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    if (begin != end && *begin == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec == std::errc::result_out_of_range) throw Error(ErrorKind::Overflow, "integer out of range: " + s);
    if (ec != std::errc() || ptr != end || begin == end) bad("not an integer: '" + s + "'");
    return v;
}

i64 as_i64(const Json& j, const char* what) {
    if (j.is_string()) return parse_i64(j.get<std::string>());
    if (j.is_number_integer()) return j.get<i64>();
    bad(std::string(what) + " must be an integer or decimal string");
}

std::string str(i64 v) { return std::to_string(v); }

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
    return j.at(key);
}

SymbolicTerm::Kind kind_from(const std::string& s) {
    if (s == "point") return SymbolicTerm::Kind::Point;
    if (s == "fiber") return SymbolicTerm::Kind::Fiber;
    if (s == "long_fiber") return SymbolicTerm::Kind::LongFiber;
    if (s == "box_fiber") return SymbolicTerm::Kind::BoxFiber;
    bad("unknown term kind '" + s + "'");
}

} // namespace

Json modulus_to_json(const CyclicModulus& m) {
    Json factors = Json::array();
    for (const auto& f : m.factors()) factors.push_back({str(f.prime), str(f.exponent)});
    return {{"factors", factors}};
}

CyclicModulus modulus_from_json(const Json& j) {
    const Json& f = field(j, "factors");
    if (!f.is_array()) bad("'factors' must be an array");
    std::vector<PrimePower> out;
    for (const auto& e : f) {
        if (!e.is_array() || e.size() != 2) bad("each factor must be [p, n]");
        i64 n = as_i64(e[1], "exponent");
        if (n < 1 || n > 62) bad("exponent out of range");
        out.push_back({as_i64(e[0], "prime"), static_cast<int>(n)});
    }
    return CyclicModulus::from_factors(std::move(out));
}

Json multiset_to_json(const Multiset& a) {
    Json w = Json::array();
    for (auto [x, v] : a.weights()) w.push_back({str(x), str(v)});
    return {{"modulus", modulus_to_json(a.modulus())}, {"weights", w}};
}

Multiset multiset_from_json(const Json& j) {
    CyclicModulus m = modulus_from_json(field(j, "modulus"));
    const Json& w = field(j, "weights");
    if (!w.is_array()) bad("'weights' must be an array");
    Multiset a(m);
    for (const auto& e : w) {
        if (!e.is_array() || e.size() != 2) bad("each weight must be [x, w]");
        i64 x = as_i64(e[0], "element");
        if (x < 0 || x >= m.value()) bad("element " + str(x) + " outside Z_" + str(m.value()));
        a.add_weight(x, as_i64(e[1], "weight"));
    }
    return a;
}

Json symbolic_to_json(const SymbolicMultiset& s) {
    Json terms = Json::array();
    for (const auto& t : s.terms()) {
        Json e{{"coeff", str(t.coeff)}, {"kind", kind_name(t.kind)}, {"shift", str(t.shift)}};
        if (t.kind != SymbolicTerm::Kind::Point) e["prime"] = str(t.prime);
        if (t.kind == SymbolicTerm::Kind::LongFiber || t.kind == SymbolicTerm::Kind::BoxFiber) e["depth"] = str(t.depth);
        if (t.kind == SymbolicTerm::Kind::BoxFiber) {
            Json box = Json::array();
            for (const auto& r : t.box) box.push_back({str(r.stride), str(r.lo), str(r.hi)});
            e["box"] = box;
        }
        terms.push_back(e);
    }
    return {{"modulus", modulus_to_json(s.modulus())}, {"terms", terms}};
}

SymbolicMultiset symbolic_from_json(const Json& j) {
    SymbolicMultiset s(modulus_from_json(field(j, "modulus")));
    const Json& terms = field(j, "terms");
    if (!terms.is_array()) bad("'terms' must be an array");
    for (const auto& e : terms) {
        SymbolicTerm t;
        const Json& kind = field(e, "kind");
        if (!kind.is_string()) bad("'kind' must be a string");
        t.kind = kind_from(kind.get<std::string>());
        t.coeff = e.contains("coeff") ? as_i64(e.at("coeff"), "coeff") : 1;
        t.shift = as_i64(field(e, "shift"), "shift");
        if (t.kind != SymbolicTerm::Kind::Point) t.prime = as_i64(field(e, "prime"), "prime");
        if (t.kind == SymbolicTerm::Kind::Fiber) t.depth = 1;
        if (t.kind == SymbolicTerm::Kind::LongFiber || t.kind == SymbolicTerm::Kind::BoxFiber)
            t.depth = static_cast<int>(as_i64(field(e, "depth"), "depth"));
        if (t.kind == SymbolicTerm::Kind::BoxFiber) {
            for (const auto& r : field(e, "box")) {
                if (!r.is_array() || r.size() != 3) bad("box ranges must be [stride, lo, hi]");
                t.box.push_back({as_i64(r[0], "stride"), as_i64(r[1], "lo"), as_i64(r[2], "hi")});
            }
        }
        s.add_term(std::move(t));
    }
    return s;
}

Json decomposition_to_json(const FiberDecomposition& d) {
    Json terms = Json::array();
    for (const auto& t : d.terms) terms.push_back({{"dir", str(t.prime)}, {"alpha", str(t.depth)}, {"shift", str(t.shift)}, {"coeff", str(t.coeff)}});
    Json j{{"scale", str(d.scale)}};
    if (d.block != 0) j["block"] = str(d.block);
    j["nonnegative"] = d.nonnegative;
    j["terms"] = terms;
    return j;
}

FiberDecomposition decomposition_from_json(const Json& j) {
    FiberDecomposition d;
    d.scale = as_i64(field(j, "scale"), "scale");
    if (j.contains("block")) d.block = as_i64(j.at("block"), "block");
    if (j.contains("nonnegative")) d.nonnegative = j.at("nonnegative").get<bool>();
    for (const auto& e : field(j, "terms"))
        d.terms.push_back({as_i64(field(e, "dir"), "dir"), static_cast<int>(as_i64(field(e, "alpha"), "alpha")), as_i64(field(e, "shift"), "shift"), as_i64(field(e, "coeff"), "coeff")});
    return d;
}

Json min_to_json(const ScaleSet& s, const MinResult& min, const FibResult& fib, const BoundReport& bounds) {
    Json scales = Json::array();
    for (i64 x : s.scales()) scales.push_back(str(x));
    Json sigma = Json::object();
    for (auto [sc, p] : fib.sigma.entries) sigma[str(sc)] = str(p);
    Json rules = Json::array();
    for (const auto& r : bounds.rules) rules.push_back({{"rule", r.rule}, {"value", str(r.value)}, {"applicable", r.applicable}, {"certificate", r.certificate}});
    Json j{{"scales", scales}};
    j["min"] = min.status == MinStatus::Optimal ? Json(str(min.value())) : Json(nullptr);
    j["fib"] = str(fib.value);
    j["sigma"] = sigma;
    j["witness"] = min.witness ? multiset_to_json(*min.witness) : Json(nullptr);
    j["bounds"] = rules;
    j["lower"] = str(min.lower);
    j["upper"] = str(min.upper);
    j["status"] = min.status == MinStatus::Optimal ? "optimal" : "bounded-only";
    j["nodes"] = str(min.nodes);
    if (!min.note.empty()) j["note"] = min.note;
    return j;
}

namespace {

Json int_list(const std::vector<i64>& v) {
    Json out = Json::array();
    for (i64 x : v) out.push_back(str(x));
    return out;
}

} // namespace

Json cm_report_to_json(const CMReport& r) {
    Json unsupported = Json::array();
    for (const auto& u : r.unsupported) unsupported.push_back({{"scale", str(u.scale)}, {"tag", tag_name(u.tag)}});
    Json extremes = Json::array();
    for (const auto& e : r.extremes) extremes.push_back({{"prime", str(e.prime)}, {"alpha", e.alpha}, {"beta", e.beta}});
    return {{"prime_power_divisors", int_list(r.prime_power_divisors)},
            {"mass", str(r.mass)},
            {"product", str(r.product)},
            {"t1", r.t1},
            {"t2", r.t2},
            {"t2_failures", int_list(r.t2_failures)},
            {"unsupported", unsupported},
            {"extremes", extremes}};
}

Json sands_to_json(const SandsReport& r) {
    return {{"holds", r.holds}, {"div_a", int_list(r.div_a)}, {"div_b", int_list(r.div_b)}, {"common", int_list(r.common)}};
}

Json partition_to_json(const PartitionReport& r) {
    return {{"holds", r.holds}, {"s_a", int_list(r.s_a)}, {"s_b", int_list(r.s_b)}};
}

Json uniformity_to_json(const UniformityReport& r) {
    return {{"modulus", str(r.modulus)}, {"weight", str(r.weight)}, {"uniform", r.uniform}, {"above_all_beta", r.above_all_beta}, {"weight_bound_holds", r.weight_bound_holds}};
}

Json construction_to_json(const ConstructionReport& r) {
    Json params = Json::object();
    for (const auto& [k, v] : r.parameters) params[k] = v;
    Json claims = Json::array();
    for (const auto& c : r.claims) {
        Json e{{"claim", c.claim}, {"holds", c.holds}, {"verification", verification_name(c.how)}};
        if (c.how == Verification::Sampled) {
            e["trials"] = str(c.trials);
            e["seed"] = std::to_string(c.seed);
        }
        if (!c.detail.empty()) e["detail"] = c.detail;
        claims.push_back(e);
    }
    Json j{{"kind", r.kind}, {"parameters", params}, {"accepted", r.accepted()}, {"claims", claims}};
    if (r.set) j["mass"] = str(r.set->mass());
    else if (r.symbolic) j["mass"] = str(r.symbolic->mass());
    return j;
}

i64 parse_scale(const std::string& text) {
    if (text.empty()) bad("empty scale");
    i64 value = 1;
    std::stringstream ss(text);
    std::string factor;
    while (std::getline(ss, factor, '*')) {
        auto caret = factor.find('^');
        i64 base = parse_i64(factor.substr(0, caret));
        i64 exp = caret == std::string::npos ? 1 : parse_i64(factor.substr(caret + 1));
        if (base < 1 || exp < 0 || exp > 62) bad("bad factor '" + factor + "'");
        value = checked_mul(value, checked_pow(base, static_cast<unsigned>(exp)));
    }
    if (text.back() == '*') bad("dangling '*' in '" + text + "'");
    return value;
}

std::vector<i64> parse_scale_list(const std::string& text) {
    std::vector<i64> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) bad("empty entry in scale list '" + text + "'");
        out.push_back(parse_scale(item));
    }
    if (out.empty() || text.back() == ',') bad("empty entry in scale list '" + text + "'");
    return out;
}

Json read_json_file(const std::string& path) {
    std::ifstream in;
    std::istream* src = &std::cin;
    if (path != "-") {
        in.open(path);
        if (!in) bad("cannot open '" + path + "'");
        src = &in;
    }
    try {
        return Json::parse(*src);
    } catch (const nlohmann::json::exception& e) {
        bad("'" + path + "' is not valid JSON: " + e.what());
    }
}

void write_json_file(const std::string& path, const Json& j) {
    if (path == "-") {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream out(path);
    if (!out) bad("cannot write '" + path + "'");
    out << j.dump(2) << "\n";
}

Multiset read_multiset_file(const std::string& path) {
    Json j = read_json_file(path);
    try {
        if (j.contains("terms")) return symbolic_from_json(j).materialize();
        return multiset_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        bad("malformed multiset file '" + path + "': " + e.what());
    }
}

} // namespace cyclo
