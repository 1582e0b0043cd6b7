// Command-line front end. Exit codes: 0 verified, 1 property failed, 2 invalid input, 3 cap exceeded.
#include "cyclolab/bounds.hpp"
#include "cyclolab/constructions.hpp"
#include "cyclolab/cyclotomic.hpp"
#include "cyclolab/error.hpp"
#include "cyclolab/io.hpp"
#include "cyclolab/structure.hpp"
#include "cyclolab/tiling.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

using namespace cyclo;

namespace {

enum Exit { Ok = 0, PropertyFailed = 1, InvalidInputExit = 2, CapExit = 3 };

int exit_for(const Error& e) {
    switch (e.kind()) {
    case ErrorKind::CapExceeded:
    case ErrorKind::Overflow: return CapExit;
    case ErrorKind::Internal: return PropertyFailed;
    default: return InvalidInputExit;
    }
}

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

std::vector<i64> scales_of(const std::string& text) { return parse_scale_list(text); }

CyclicModulus modulus_of(const std::string& text) { return factor_modulus(parse_scale(text)); }

// Divisor classes used by the lattice renderings.
std::string divisor_class(i64 s, const std::vector<i64>& divs, const CMReport& rep) {
    if (!std::binary_search(divs.begin(), divs.end(), s)) return "none";
    if (is_prime_power(s)) return "prime-power";
    for (const auto& u : rep.unsupported)
        if (u.scale == s) return "unsupported";
    return "T2";
}

std::string dot_lattice(const Multiset& a) {
    const auto& m = a.modulus();
    auto divs = all_divisors(a);
    auto rep = cm_report(a);
    std::ostringstream os;
    os << "graph divisors {\n  node [shape=circle];\n";
    auto all = divisors_of(m.value());
    for (i64 d : all) {
        if (d == 1) continue;
        auto v = m.valuations(d);
        os << "  \"" << d << "\" [class=\"" << divisor_class(d, divs, rep) << "\", pos=\"";
        for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
        os << "!\"];\n";
    }
    for (i64 d : all) {
        if (d == 1) continue;
        for (std::size_t i = 0; i < m.rank(); ++i)
            if (m.value() % (d * m.prime(i)) == 0) os << "  \"" << d << "\" -- \"" << d * m.prime(i) << "\";\n";
    }
    os << "}\n";
    return os.str();
}

// ASCII grid over (v_p, v_q) for two primes; one line per divisor otherwise.
std::string ascii_lattice(const Multiset& a) {
    const auto& m = a.modulus();
    auto divs = all_divisors(a);
    auto rep = cm_report(a);
    auto mark = [&](i64 d) {
        if (d == 1) return '.';
        auto c = divisor_class(d, divs, rep);
        if (c == "prime-power") return 'P';
        if (c == "T2") return 'T';
        if (c == "unsupported") return 'U';
        return 'o';
    };
    std::ostringstream os;
    if (m.rank() == 2) {
        os << "rows v_" << m.prime(1) << " descending, columns v_" << m.prime(0) << " ascending\n";
        for (int j = m.exponent(1); j >= 0; --j) {
            for (int i = 0; i <= m.exponent(0); ++i) os << mark(checked_pow(m.prime(0), static_cast<unsigned>(i)) * checked_pow(m.prime(1), static_cast<unsigned>(j))) << ' ';
            os << "\n";
        }
    } else {
        for (i64 d : divisors_of(m.value()))
            if (d > 1) os << d << " " << mark(d) << "\n";
    }
    os << "P prime-power divisor, T other supported divisor, U unsupported, o not a divisor\n";
    return os.str();
}

i64 param_i64(const Json& j, const char* key, std::optional<i64> fallback = std::nullopt) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        throw Error(ErrorKind::InvalidInput, std::string("--params needs '") + key + "'");
    }
    const auto& v = j.at(key);
    if (v.is_string()) return parse_scale(v.get<std::string>());
    if (!v.is_number_integer()) throw Error(ErrorKind::InvalidInput, std::string("'") + key + "' must be an integer");
    return v.get<i64>();
}

ConstructionReport run_construct(const std::string& kind, const Json& p, std::uint64_t seed) {
    if (kind == "prime-power") {
        std::vector<int> exps;
        if (!p.contains("exponents") || !p.at("exponents").is_array()) throw Error(ErrorKind::InvalidInput, "--params needs 'exponents'");
        for (const auto& e : p.at("exponents")) exps.push_back(e.get<int>());
        return prime_power_report(param_i64(p, "p"), exps);
    }
    if (kind == "three-primes") return three_primes_report(param_i64(p, "p1"), param_i64(p, "p2"), param_i64(p, "p3"));
    if (kind == "countex-2-3") return countex_2_3_report(static_cast<int>(param_i64(p, "n", 9)), static_cast<int>(param_i64(p, "m", 6)));
    if (kind == "countex-72") return countex_72_report();
    if (kind == "general-two-prime") return general_two_prime(param_i64(p, "p"), param_i64(p, "q"), param_i64(p, "cap", 1'000'000));
    if (kind == "four-prime") {
        std::array<i64, 4> primes{7, 11, 13, 17};
        if (p.contains("primes")) {
            const auto& arr = p.at("primes");
            if (!arr.is_array() || arr.size() != 4) throw Error(ErrorKind::InvalidInput, "'primes' must list four primes");
            for (std::size_t i = 0; i < 4; ++i) primes[i] = arr[i].get<i64>();
        }
        return four_prime(primes, param_i64(p, "samples", 100'000), seed);
    }
    throw Error(ErrorKind::InvalidInput, "unknown construction kind '" + kind + "'");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cyclolab: cyclotomic divisibility of multisets in cyclic groups"};
    app.require_subcommand(1);
    std::uint64_t seed = 1;
    int workers = 1;
    app.add_option("--seed", seed, "Seed for sampling harnesses");
    app.add_option("--workers", workers, "Worker threads for the exact MIN search")->check(CLI::Range(1, 256));

    std::string modulus_text, file, file_b, scales_text, kind, params_text = "{}", out_path = "-", report_path, method = "auto";
    bool dot = false, no_analytic = false;
    i64 max_mass = 0, cap = 10000, scale_n = 0;

    auto* info = app.add_subcommand("info", "Factorization, cofactors and D(M) of a modulus");
    info->add_option("--modulus", modulus_text, "M, e.g. 72 or 2^3*3^2")->required();

    auto* divisors = app.add_subcommand("divisors", "All cyclotomic divisors, S_A^* and unsupported divisors");
    divisors->add_option("file", file, "Multiset file, - for stdin")->required();
    divisors->add_flag("--dot", dot, "Emit the divisor lattice as DOT");

    auto* check = app.add_subcommand("check", "Test Phi_s | A for each listed scale");
    check->add_option("file", file)->required();
    check->add_option("--scales", scales_text, "Comma-separated scales")->required();

    auto* min = app.add_subcommand("min", "Exact MIN(S) with witness and bounds");
    min->add_option("--scales", scales_text)->required();
    min->add_option("--max-mass", max_mass, "Stop searching above this mass");
    min->add_option("--cap", cap, "Largest lcm(S) searched exactly");
    min->add_flag("--no-analytic", no_analytic, "Disable analytic pruning");
    min->add_option("--witness", out_path, "Write the witness multiset here");

    auto* fibc = app.add_subcommand("fib", "FIB(S) with the minimizing assignment and standard set");
    fibc->add_option("--scales", scales_text)->required();

    auto* trunc = app.add_subcommand("truncate", "Truncation of A relative to S");
    trunc->add_option("file", file)->required();
    trunc->add_option("--scales", scales_text)->required();

    auto* decomp = app.add_subcommand("decompose", "Fiber decomposition of A mod N");
    decomp->add_option("file", file)->required();
    decomp->add_option("--scale", scale_n, "N")->required();
    decomp->add_option("--method", method, "auto, signed, nonneg or long")->check(CLI::IsMember({"auto", "signed", "nonneg", "long"}));

    auto* construct = app.add_subcommand("construct", "Generate and audit a construction");
    construct->add_option("--kind", kind)->required()->check(CLI::IsMember({"prime-power", "three-primes", "countex-2-3", "countex-72", "general-two-prime", "four-prime"}));
    construct->add_option("--params", params_text, "JSON object of parameters");
    construct->add_option("--out", out_path, "Multiset file, - for stdout");
    construct->add_option("--report", report_path, "ConstructionReport JSON file");

    auto* t1 = app.add_subcommand("t1", "(T1) check");
    t1->add_option("file", file)->required();
    auto* t2 = app.add_subcommand("t2", "(T1), (T2) and unsupported divisors");
    t2->add_option("file", file)->required();
    auto* unsup = app.add_subcommand("unsupported", "Unsupported divisors with tags");
    unsup->add_option("file", file)->required();

    auto* tiling = app.add_subcommand("tiling-check", "Does A + B tile Z_M");
    tiling->add_option("a", file)->required();
    tiling->add_option("b", file_b)->required();
    auto* sands = app.add_subcommand("sands", "Div(A) and Div(B) meet only in M");
    sands->add_option("a", file)->required();
    sands->add_option("b", file_b)->required();

    auto* lattice = app.add_subcommand("lattice", "ASCII divisor lattice of a multiset");
    lattice->add_option("file", file)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? Ok : InvalidInputExit;
    }

    try {
        if (*info) {
            auto m = modulus_of(modulus_text);
            Json cof = Json::array();
            for (std::size_t i = 0; i < m.rank(); ++i) cof.push_back(std::to_string(m.cofactor(i)));
            emit({{"modulus", std::to_string(m.value())}, {"factors", modulus_to_json(m)["factors"]}, {"cofactors", cof},
                  {"D", std::to_string(radical_quotient(m.value()))}, {"divisors", divisors_of(m.value()).size()}});
            return Ok;
        }
        if (*divisors) {
            auto a = read_multiset_file(file);
            if (dot) {
                std::cout << dot_lattice(a);
                return Ok;
            }
            auto rep = cm_report(a);
            Json all = Json::array();
            for (i64 s : all_divisors(a)) all.push_back(std::to_string(s));
            Json j = cm_report_to_json(rep);
            emit({{"divisors", all}, {"prime_power_divisors", j["prime_power_divisors"]}, {"unsupported", j["unsupported"]}});
            return Ok;
        }
        if (*check) {
            auto a = read_multiset_file(file);
            bool all = true;
            Json res = Json::object();
            for (i64 s : scales_of(scales_text)) {
                bool d = divides(s, a);
                res[std::to_string(s)] = d;
                all = all && d;
            }
            emit({{"divides", res}, {"all", all}});
            return all ? Ok : PropertyFailed;
        }
        if (*min) {
            auto s = ScaleSet::over_lcm(scales_of(scales_text));
            MinOptions opt;
            if (max_mass > 0) opt.max_mass = max_mass;
            opt.workers = workers;
            opt.cap = cap;
            opt.analytic_pruning = !no_analytic;
            auto r = min_exact(s, opt);
            auto j = min_to_json(s, r, fib(s), analytic_lower_bounds(s));
            if (out_path != "-" && r.witness) write_json_file(out_path, multiset_to_json(*r.witness));
            emit(j);
            return r.status == MinStatus::Optimal ? Ok : CapExit;
        }
        if (*fibc) {
            auto s = ScaleSet::over_lcm(scales_of(scales_text));
            auto f = fib(s);
            Json sigma = Json::object();
            for (auto [sc, p] : f.sigma.entries) sigma[std::to_string(sc)] = std::to_string(p);
            emit({{"fib", std::to_string(f.value)}, {"sigma", sigma}, {"witness", multiset_to_json(f.witness)}});
            return Ok;
        }
        if (*trunc) {
            auto a = read_multiset_file(file);
            auto r = truncate(a, ScaleSet(a.modulus(), scales_of(scales_text)));
            Json map = Json::object();
            for (auto [sc, img] : r.scale_map) map[std::to_string(sc)] = std::to_string(img);
            emit({{"truncated", multiset_to_json(r.truncated)}, {"scale_map", map}});
            return Ok;
        }
        if (*decomp) {
            auto a = read_multiset_file(file);
            FiberDecomposition d;
            if (method == "long") d = long_fiber_decompose(a, scale_n);
            else if (method == "signed") d = fiber_decompose(a, scale_n);
            else if (method == "nonneg" || (method == "auto" && a.modulus().rank() <= 2 && a.is_nonnegative())) d = fiber_decompose_nonneg_two_prime(a, scale_n);
            else d = fiber_decompose(a, scale_n);
            emit(decomposition_to_json(d));
            return Ok;
        }
        if (*construct) {
            Json params;
            try {
                params = Json::parse(params_text);
            } catch (const nlohmann::json::exception& e) {
                throw Error(ErrorKind::InvalidInput, std::string("--params is not JSON: ") + e.what());
            }
            auto rep = run_construct(kind, params, seed);
            if (rep.set) write_json_file(out_path, multiset_to_json(*rep.set));
            else if (rep.symbolic) write_json_file(out_path, symbolic_to_json(*rep.symbolic));
            Json j = construction_to_json(rep);
            if (!report_path.empty()) write_json_file(report_path, j);
            else if (out_path != "-") emit(j);
            else std::cerr << j.dump(2) << "\n";
            return rep.accepted() ? Ok : PropertyFailed;
        }
        if (*t1) {
            auto rep = t1_check(read_multiset_file(file));
            emit(cm_report_to_json(rep));
            return rep.t1 ? Ok : PropertyFailed;
        }
        if (*t2) {
            auto rep = cm_report(read_multiset_file(file));
            emit(cm_report_to_json(rep));
            return rep.t1 && rep.t2 ? Ok : PropertyFailed;
        }
        if (*unsup) {
            auto rep = cm_report(read_multiset_file(file));
            emit(cm_report_to_json(rep)["unsupported"]);
            return Ok;
        }
        if (*tiling) {
            auto a = read_multiset_file(file), b = read_multiset_file(file_b);
            bool tiles = tiling_check(a, b);
            Json j{{"tiles", tiles}};
            if (tiles) j["partition"] = partition_to_json(prime_power_partition_check(a, b));
            emit(j);
            return tiles ? Ok : PropertyFailed;
        }
        if (*sands) {
            auto rep = sands_check(read_multiset_file(file), read_multiset_file(file_b));
            emit(sands_to_json(rep));
            return rep.holds ? Ok : PropertyFailed;
        }
        if (*lattice) {
            std::cout << ascii_lattice(read_multiset_file(file));
            return Ok;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_for(e);
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return InvalidInputExit;
    }
    return InvalidInputExit;
}
