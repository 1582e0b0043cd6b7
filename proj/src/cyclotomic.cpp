#include "cyclolab/cyclotomic.hpp"

#include "cyclolab/error.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <string>

namespace cyclo {

void poly_trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            if (b[j] != 0) out[i + j] = checked_add(out[i + j], checked_mul(a[i], b[j]));
    }
    return out;
}

std::pair<Poly, Poly> poly_divmod(const Poly& a, const Poly& b) {
    Poly bb = b;
    poly_trim(bb);
    if (bb.empty() || bb.back() != 1) throw Error(ErrorKind::InvalidInput, "poly_divmod needs a monic divisor");
    Poly r = a;
    poly_trim(r);
    std::size_t db = bb.size() - 1;
    if (r.size() <= db) return {Poly{}, r};
    Poly q(r.size() - db, 0);
    for (std::size_t k = r.size(); k-- > db;) {
        i64 c = r[k];
        if (c == 0) continue;
        q[k - db] = c;
        for (std::size_t j = 0; j <= db; ++j)
            if (bb[j] != 0) r[k - db + j] = checked_sub(r[k - db + j], checked_mul(c, bb[j]));
    }
    r.resize(db);
    poly_trim(r);
    poly_trim(q);
    return {q, r};
}

i64 euler_phi(i64 n) {
    i64 r = n;
    for (auto [p, e] : factorize(n)) r = r / p * (p - 1);
    return r;
}

bool is_prime_power(i64 s) { return s >= 2 && factorize(s).size() == 1; }

i64 cyclotomic_at_one(i64 s) {
    auto f = factorize(s);
    return f.size() == 1 ? f[0].first : 1;
}

namespace {

// Phi_n for squarefree n as prod_{d | n} (X^d - 1)^{mu(n/d)}. Multiplications by and
// exact divisions by binomials are linear-time, so this stays cheap for n ~ 10^5.
Poly squarefree_cyclotomic(i64 n) {
    if (n == 1) return {-1, 1};
    auto primes = factorize(n);
    std::vector<i64> up, down;
    std::size_t k = primes.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
        i64 removed = 1;
        for (std::size_t j = 0; j < k; ++j)
            if (mask & (std::size_t{1} << j)) removed *= primes[j].first;
        int bits = __builtin_popcountll(mask);
        (bits % 2 == 0 ? up : down).push_back(n / removed);
    }
    Poly p{1};
    // All multiplications first: after dividing by any subset of `down` the
    // running product is still Phi_n times the remaining binomials, so each
    // division is exact.
    for (i64 d : up) {
        std::size_t du = static_cast<std::size_t>(d);
        Poly q(p.size() + du, 0);
        for (std::size_t i = 0; i < p.size(); ++i) {
            q[i + du] = checked_add(q[i + du], p[i]);
            q[i] = checked_sub(q[i], p[i]);
        }
        p = std::move(q);
    }
    for (i64 d : down) {
        // coefficient of X^i in (X^d - 1) q is q_{i-d} - q_i; solve top-down.
        std::size_t du = static_cast<std::size_t>(d);
        std::size_t qs = p.size() - du;
        Poly q(qs, 0);
        for (std::size_t i = p.size(); i-- > du;) {
            i64 qi = i < qs ? q[i] : 0;
            q[i - du] = checked_add(p[i], qi);
        }
        for (std::size_t i = 0; i < du; ++i)
            if (checked_sub(0, i < qs ? q[i] : 0) != p[i])
                throw Error(ErrorKind::Internal, "inexact binomial division in cyclotomic_poly");
        p = std::move(q);
    }
    return p;
}

struct CyclotomicCache {
    std::mutex mu;
    std::map<i64, std::unique_ptr<Poly>> table;
};

CyclotomicCache& cache() {
    static CyclotomicCache c;
    return c;
}

} // namespace

const Poly& cyclotomic_poly(i64 s) {
    if (s < 1) throw Error(ErrorKind::InvalidInput, "cyclotomic index must be positive");
    auto& c = cache();
    {
        std::lock_guard<std::mutex> lock(c.mu);
        auto it = c.table.find(s);
        if (it != c.table.end()) return *it->second;
    }
    i64 rad = radical(s);
    i64 stretch = s / rad;
    Poly base = squarefree_cyclotomic(rad);
    Poly out;
    if (stretch == 1) {
        out = std::move(base);
    } else {
        // Phi_s(X) = Phi_rad(X^{s/rad}) because every prime of s/rad divides rad.
        out.assign((base.size() - 1) * static_cast<std::size_t>(stretch) + 1, 0);
        for (std::size_t i = 0; i < base.size(); ++i) out[i * static_cast<std::size_t>(stretch)] = base[i];
    }
    std::lock_guard<std::mutex> lock(c.mu);
    auto [it, inserted] = c.table.emplace(s, std::make_unique<Poly>(std::move(out)));
    return *it->second;
}

Poly cyclotomic_poly_by_division(i64 s) {
    Poly num(static_cast<std::size_t>(s) + 1, 0);
    num[0] = -1;
    num[static_cast<std::size_t>(s)] = 1;
    for (i64 d : divisors_of(s)) {
        if (d == s) continue;
        auto [q, r] = poly_divmod(num, cyclotomic_poly_by_division(d));
        if (!r.empty()) throw Error(ErrorKind::Internal, "X^s - 1 not divisible by Phi_d");
        num = std::move(q);
    }
    return num;
}

namespace {

struct SparseTerm {
    std::size_t deg;
    i64 coeff;
};

// Nonzero terms of Phi_rad below its leading term.
const std::vector<SparseTerm>& sparse_lower_terms(i64 rad) {
    static std::mutex mu;
    static std::map<i64, std::unique_ptr<std::vector<SparseTerm>>> table;
    std::lock_guard<std::mutex> lock(mu);
    auto it = table.find(rad);
    if (it != table.end()) return *it->second;
    const Poly& phi = cyclotomic_poly(rad);
    auto terms = std::make_unique<std::vector<SparseTerm>>();
    for (std::size_t j = 0; j + 1 < phi.size(); ++j)
        if (phi[j] != 0) terms->push_back({j, phi[j]});
    return *table.emplace(rad, std::move(terms)).first->second;
}

// In-place remainder of b (length rad) modulo Phi_rad; leaves the first phi(rad) entries.
void reduce_block(std::vector<i64>& b, i64 rad) {
    const auto& low = sparse_lower_terms(rad);
    std::size_t deg = static_cast<std::size_t>(euler_phi(rad));
    for (std::size_t k = b.size(); k-- > deg;) {
        i64 c = b[k];
        if (c == 0) continue;
        b[k] = 0;
        std::size_t shift = k - deg;
        for (const auto& t : low) b[shift + t.deg] = checked_sub(b[shift + t.deg], checked_mul(c, t.coeff));
    }
    b.resize(deg);
}

} // namespace

std::vector<i64> cyclotomic_remainder(const std::vector<i64>& reduced, i64 s) {
    if (static_cast<i64>(reduced.size()) != s) throw Error(ErrorKind::InvalidInput, "reduced vector length must equal the scale");
    i64 rad = radical(s);
    i64 grid = s / rad;  // D(s)
    std::size_t deg = static_cast<std::size_t>(euler_phi(rad));
    std::vector<i64> out;
    out.reserve(static_cast<std::size_t>(grid) * deg);
    std::vector<i64> block(static_cast<std::size_t>(rad));
    for (i64 r = 0; r < grid; ++r) {
        block.assign(static_cast<std::size_t>(rad), 0);
        for (i64 t = 0; t < rad; ++t) block[static_cast<std::size_t>(t)] = reduced[static_cast<std::size_t>(r + t * grid)];
        reduce_block(block, rad);
        out.insert(out.end(), block.begin(), block.end());
    }
    return out;
}

bool divides_reduced(i64 s, const std::vector<i64>& reduced) {
    if (s == 1) {
        i64 total = 0;
        for (i64 w : reduced) total = checked_add(total, w);
        return total == 0;
    }
    auto rem = cyclotomic_remainder(reduced, s);
    return std::all_of(rem.begin(), rem.end(), [](i64 c) { return c == 0; });
}

bool divides(i64 s, const Multiset& a) {
    a.modulus().require_divisor(s);
    if (s < 2) throw Error(ErrorKind::InvalidScale, "divides needs a scale of at least 2");
    return divides_reduced(s, reduce_dense(a, s));
}

bool divides_via_cuboids(i64 s, const Multiset& a) {
    a.modulus().require_divisor(s);
    if (s < 2) throw Error(ErrorKind::InvalidScale, "divides_via_cuboids needs a scale of at least 2");
    if (cuboid_enumeration_size(s) > kCuboidCap)
        throw Error(ErrorKind::UseRemainderMethod, "cuboid enumeration for scale " + std::to_string(s) + " exceeds the cap");
    auto reduced = reduce_dense(a, s);
    bool ok = true;
    for_each_canonical_cuboid(s, std::nullopt, [&](const CuboidSpec&, const std::vector<CuboidVertex>& verts) {
        i64 total = 0;
        for (const auto& v : verts) {
            i64 w = reduced[static_cast<std::size_t>(v.point)];
            total = checked_add(total, v.sign > 0 ? w : -w);
        }
        if (total != 0) ok = false;
        return ok;
    });
    return ok;
}

std::vector<i64> all_divisors(const Multiset& a) {
    if (a.empty()) throw Error(ErrorKind::UndefinedDivisors, "the zero multiset is divisible by every Phi_s");
    std::vector<i64> out;
    for (i64 s : divisors_of(a.modulus().value()))
        if (s > 1 && divides(s, a)) out.push_back(s);
    return out;
}

std::vector<i64> prime_power_divisors(const Multiset& a) {
    if (a.empty()) throw Error(ErrorKind::UndefinedDivisors, "the zero multiset is divisible by every Phi_s");
    std::vector<i64> out;
    for (i64 s : divisors_of(a.modulus().value()))
        if (is_prime_power(s) && divides(s, a)) out.push_back(s);
    return out;
}

bool chain_divides(const Multiset& a, i64 n, i64 p, int alpha) {
    a.modulus().require_divisor(n);
    if (p < 2 || n % p != 0) throw Error(ErrorKind::InvalidDirection, std::to_string(p) + " does not divide " + std::to_string(n));
    if (valuation(n, p) != alpha)
        throw Error(ErrorKind::InvalidInput, "chain_divides needs p^alpha to exactly divide N");
    i64 scale = n;
    for (int beta = 0; beta <= alpha; ++beta) {
        if (!divides_reduced(scale, reduce_dense(a, scale))) return false;
        scale /= p;
    }
    return true;
}

ScaleSet::ScaleSet(CyclicModulus m, std::vector<i64> scales) : modulus_(std::move(m)), scales_(std::move(scales)) {
    std::sort(scales_.begin(), scales_.end());
    scales_.erase(std::unique(scales_.begin(), scales_.end()), scales_.end());
    if (scales_.empty()) throw Error(ErrorKind::InvalidInput, "scale set must be nonempty");
    for (i64 s : scales_) {
        if (s == 1) throw Error(ErrorKind::InvalidScale, "1 is not allowed in a scale set");
        modulus_.require_divisor(s);
    }
}

ScaleSet ScaleSet::over_lcm(std::vector<i64> scales) {
    if (scales.empty()) throw Error(ErrorKind::InvalidInput, "scale set must be nonempty");
    i64 l = 1;
    for (i64 s : scales) {
        if (s < 2) throw Error(ErrorKind::InvalidScale, "scales must be at least 2");
        l = cyclo::lcm(l, s);
    }
    return ScaleSet(factor_modulus(l), std::move(scales));
}

i64 ScaleSet::lcm() const {
    i64 l = 1;
    for (i64 s : scales_) l = cyclo::lcm(l, s);
    return l;
}

ExponentProfile exponent_profile(const ScaleSet& s) {
    const auto& m = s.modulus();
    ExponentProfile prof;
    prof.exps.resize(m.rank());
    for (i64 sc : s.scales())
        for (std::size_t i = 0; i < m.rank(); ++i) {
            int e = valuation(sc, m.prime(i));
            if (e > 0) prof.exps[i].push_back(e);
        }
    for (auto& v : prof.exps) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    return prof;
}

} // namespace cyclo
