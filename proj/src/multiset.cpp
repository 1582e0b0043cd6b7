#include "cyclolab/multiset.hpp"

#include "cyclolab/error.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <string>

namespace cyclo {

i64 max_cells() {
    static const i64 cap = [] {
        if (const char* env = std::getenv("CYCLOLAB_MAX_CELLS")) {
            char* end = nullptr;
            long long v = std::strtoll(env, &end, 10);
            if (end != env && v > 0) return static_cast<i64>(v);
        }
        return static_cast<i64>(1) << 25;
    }();
    return cap;
}

void require_cells(i64 cells, const char* what) {
    if (cells > max_cells())
        throw Error(ErrorKind::CapExceeded, std::string(what) + " needs " + std::to_string(cells) + " cells, cap is " +
                                                std::to_string(max_cells()));
}

Multiset::Multiset(CyclicModulus m, const std::map<i64, i64>& weights) : modulus_(std::move(m)) {
    for (auto [x, w] : weights) add_weight(x, w);
}

Multiset Multiset::from_points(CyclicModulus m, const std::vector<i64>& points) {
    Multiset a(std::move(m));
    for (i64 x : points) a.add_weight(x, 1);
    return a;
}

Multiset Multiset::from_dense(CyclicModulus m, const std::vector<i64>& weights) {
    if (static_cast<i64>(weights.size()) != m.value()) throw Error(ErrorKind::InvalidInput, "dense weight vector has wrong length");
    Multiset a(std::move(m));
    for (std::size_t x = 0; x < weights.size(); ++x)
        if (weights[x] != 0) a.add_weight(static_cast<i64>(x), weights[x]);
    return a;
}

i64 Multiset::weight(i64 x) const {
    auto it = weights_.find(mod(x, modulus_.value()));
    return it == weights_.end() ? 0 : it->second;
}

std::vector<i64> Multiset::support() const {
    std::vector<i64> out;
    out.reserve(weights_.size());
    for (const auto& kv : weights_) out.push_back(kv.first);
    return out;
}

bool Multiset::is_nonnegative() const {
    for (const auto& kv : weights_)
        if (kv.second < 0) return false;
    return true;
}

bool Multiset::is_set() const {
    for (const auto& kv : weights_)
        if (kv.second != 1) return false;
    return true;
}

std::vector<i64> Multiset::dense() const {
    require_cells(modulus_.value(), "dense multiset");
    std::vector<i64> out(static_cast<std::size_t>(modulus_.value()), 0);
    for (auto [x, w] : weights_) out[static_cast<std::size_t>(x)] = w;
    return out;
}

void Multiset::add_weight(i64 x, i64 w) {
    if (w == 0) return;
    x = mod(x, modulus_.value());
    auto [it, inserted] = weights_.try_emplace(x, 0);
    it->second = checked_add(it->second, w);
    if (it->second == 0) weights_.erase(it);
    mass_ = checked_add(mass_, w);
}

NonnegMultiset::NonnegMultiset(Multiset a) : a_(std::move(a)) {
    require_nonnegative(a_, "NonnegMultiset");
    if (a_.mass() <= 0) throw Error(ErrorKind::InvalidInput, "NonnegMultiset requires positive mass");
}

void require_nonnegative(const Multiset& a, const char* what) {
    if (!a.is_nonnegative()) throw Error(ErrorKind::InvalidInput, std::string(what) + " requires nonnegative weights");
}

void require_same_modulus(const Multiset& a, const Multiset& b) {
    if (!(a.modulus() == b.modulus()))
        throw Error(ErrorKind::ModulusMismatch,
                    std::to_string(a.modulus().value()) + " vs " + std::to_string(b.modulus().value()));
}

Multiset reduce_mod(const Multiset& a, i64 n) {
    a.modulus().require_divisor(n);
    if (n == 1) throw Error(ErrorKind::InvalidScale, "cannot reduce to the trivial group");
    Multiset out(a.modulus().sub(n));
    for (auto [x, w] : a.weights()) out.add_weight(x % n, w);
    return out;
}

std::vector<i64> reduce_dense(const Multiset& a, i64 n) {
    a.modulus().require_divisor(n);
    require_cells(n, "reduce_dense");
    std::vector<i64> out(static_cast<std::size_t>(n), 0);
    for (auto [x, w] : a.weights()) {
        auto& cell = out[static_cast<std::size_t>(x % n)];
        cell = checked_add(cell, w);
    }
    return out;
}

Multiset add(const Multiset& a, const Multiset& b) {
    require_same_modulus(a, b);
    Multiset out = a;
    for (auto [x, w] : b.weights()) out.add_weight(x, w);
    return out;
}

Multiset subtract(const Multiset& a, const Multiset& b) {
    require_same_modulus(a, b);
    Multiset out = a;
    for (auto [x, w] : b.weights()) out.add_weight(x, checked_mul(w, -1));
    return out;
}

Multiset scale(const Multiset& a, i64 c) {
    Multiset out(a.modulus());
    for (auto [x, w] : a.weights()) out.add_weight(x, checked_mul(w, c));
    return out;
}

Multiset translate(const Multiset& a, i64 t) {
    Multiset out(a.modulus());
    i64 m = a.modulus().value();
    t = mod(t, m);
    for (auto [x, w] : a.weights()) {
        i64 y = x - (m - t);
        out.add_weight(y < 0 ? y + m : y, w);
    }
    return out;
}

Multiset restrict_to(const Multiset& a, const Multiset& y) {
    require_same_modulus(a, y);
    Multiset out(a.modulus());
    for (auto [x, w] : a.weights()) {
        i64 wy = y.weight(x);
        if (wy != 0) out.add_weight(x, checked_mul(w, wy));
    }
    return out;
}

Multiset restrict_to_grid(const Multiset& a, const GridSpec& g) {
    if (g.scale != a.modulus().value()) throw Error(ErrorKind::InvalidScale, "grid scale must equal the multiset modulus");
    Multiset out(a.modulus());
    for (auto [x, w] : a.weights())
        if (grid_contains(g, x)) out.add_weight(x, w);
    return out;
}

Multiset convolve(const Multiset& a, const Multiset& b) {
    require_same_modulus(a, b);
    Multiset out(a.modulus());
    i64 m = a.modulus().value();
    for (auto [x, wx] : a.weights())
        for (auto [y, wy] : b.weights()) {
            i64 s = x - (m - y);
            out.add_weight(s < 0 ? s + m : s, checked_mul(wx, wy));
        }
    return out;
}

Multiset fiber_multiset(const FiberSpec& f, const CyclicModulus& m) {
    auto pts = fiber_elements(f, m);
    return Multiset::from_points(m.sub(f.scale), pts);
}

Multiset long_fiber_multiset(const LongFiberSpec& f, const CyclicModulus& m) {
    return Multiset::from_points(m, fiber_elements(f, m));
}

std::vector<CuboidVertex> cuboid_vertices(const CuboidSpec& c) {
    auto primes = factorize(c.scale);
    if (c.offsets.size() != primes.size()) throw Error(ErrorKind::InvalidInput, "cuboid needs one offset per prime of its scale");
    std::vector<CuboidVertex> verts{{mod(c.corner, c.scale), 1}};
    for (std::size_t j = 0; j < primes.size(); ++j) {
        i64 p = primes[j].first;
        if (c.omitted && *c.omitted == p) continue;
        i64 d = c.offsets[j];
        if (mod(d, p) == 0) throw Error(ErrorKind::InvalidInput, "cuboid offset must be prime to its direction");
        i64 step = mulmod(mod(d, p), c.scale / p, c.scale);
        std::size_t n = verts.size();
        for (std::size_t t = 0; t < n; ++t) verts.push_back({mod(verts[t].point + step, c.scale), -verts[t].sign});
    }
    if (c.omitted && c.scale % *c.omitted != 0) throw Error(ErrorKind::InvalidDirection, "omitted direction must divide the scale");
    return verts;
}

i64 delta_eval_dense(const std::vector<i64>& reduced, const CuboidSpec& c) {
    i64 total = 0;
    for (const auto& v : cuboid_vertices(c)) {
        i64 w = reduced[static_cast<std::size_t>(v.point)];
        total = checked_add(total, v.sign > 0 ? w : checked_mul(w, -1));
    }
    return total;
}

i64 delta_eval(const Multiset& a, const CuboidSpec& c) {
    a.modulus().require_divisor(c.scale);
    i64 total = 0;
    auto verts = cuboid_vertices(c);
    // Sparse path: walk the support once instead of materializing A mod N.
    std::map<i64, int> sign_at;
    for (const auto& v : verts) sign_at[v.point] += v.sign;
    for (auto [x, w] : a.weights()) {
        auto it = sign_at.find(x % c.scale);
        if (it != sign_at.end() && it->second != 0) total = checked_add(total, checked_mul(w, it->second));
    }
    return total;
}

i64 cuboid_enumeration_size(i64 n, std::optional<i64> omitted) {
    i64 size = n;
    for (auto [p, e] : factorize(n)) {
        if (omitted && *omitted == p) continue;
        size = checked_mul(size, p - 1);
    }
    return size;
}

void for_each_canonical_cuboid(i64 n, std::optional<i64> omitted,
                               const std::function<bool(const CuboidSpec&, const std::vector<CuboidVertex>&)>& visit) {
    // In the CRT coordinates of Z_N a cuboid moves coordinate j between two
    // values congruent mod p_j^{a_j - 1}; its vertex set is therefore an
    // unordered pair per participating prime (and a single value for the
    // omitted one). Enumerating those pairs gives each vertex set once.
    if (n < 2) throw Error(ErrorKind::InvalidScale, "cuboids need a scale of at least 2");
    auto zn = factor_modulus(n);
    std::size_t k = zn.rank();
    if (omitted && !zn.index_of(*omitted)) throw Error(ErrorKind::InvalidDirection, "omitted direction must divide the scale");

    struct Choice {
        i64 low_term;   // low coordinate times N_j, reduced mod N
        i64 high_term;  // high coordinate times N_j; equal to low_term for the omitted direction
        i64 low;
        i64 offset;     // top-digit gap in {1..p-1}; 0 for the omitted direction
    };
    std::vector<std::vector<Choice>> per_prime(k);
    for (std::size_t j = 0; j < k; ++j) {
        i64 p = zn.prime(j);
        i64 q = zn.prime_power(j);
        i64 top = q / p;
        i64 nj = zn.cofactor(j);
        auto term = [&](i64 c) { return mulmod(c, nj, n); };
        if (omitted && *omitted == p) {
            for (i64 v = 0; v < q; ++v) per_prime[j].push_back({term(v), term(v), v, 0});
            continue;
        }
        for (i64 base = 0; base < top; ++base)
            for (i64 t = 0; t < p; ++t)
                for (i64 t2 = t + 1; t2 < p; ++t2)
                    per_prime[j].push_back({term(base + t * top), term(base + t2 * top), base + t * top, t2 - t});
    }

    std::vector<std::size_t> idx(k, 0);
    std::vector<CuboidVertex> verts;
    CuboidSpec c{n, 0, std::vector<i64>(k, 1), omitted};
    while (true) {
        verts.assign(1, CuboidVertex{0, 1});
        for (std::size_t j = 0; j < k; ++j) {
            const Choice& ch = per_prime[j][idx[j]];
            c.offsets[j] = ch.offset > 0 ? ch.offset : 1;
            std::size_t len = verts.size();
            if (ch.offset == 0) {
                for (auto& v : verts) v.point = addmod(v.point, ch.low_term, n);
                continue;
            }
            for (std::size_t t = 0; t < len; ++t) {
                verts.push_back({addmod(verts[t].point, ch.high_term, n), -verts[t].sign});
                verts[t].point = addmod(verts[t].point, ch.low_term, n);
            }
        }
        c.corner = verts[0].point;
        if (!visit(c, verts)) return;
        std::size_t j = 0;
        while (j < k && ++idx[j] == per_prime[j].size()) {
            idx[j] = 0;
            ++j;
        }
        if (j == k) break;
    }
}

std::vector<CuboidSpec> canonical_cuboids(i64 n, std::optional<i64> omitted) {
    std::vector<CuboidSpec> out;
    for_each_canonical_cuboid(n, omitted, [&](const CuboidSpec& c, const std::vector<CuboidVertex>&) {
        require_cells(static_cast<i64>(out.size()) + 1, "canonical cuboid list");
        out.push_back(c);
        return true;
    });
    std::sort(out.begin(), out.end(), [](const CuboidSpec& a, const CuboidSpec& b) {
        if (a.corner != b.corner) return a.corner < b.corner;
        return a.offsets < b.offsets;
    });
    return out;
}

} // namespace cyclo
