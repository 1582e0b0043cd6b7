#include "cyclolab/symbolic.hpp"

#include "cyclolab/error.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace cyclo {

const char* kind_name(SymbolicTerm::Kind kind) {
    switch (kind) {
    case SymbolicTerm::Kind::Point: return "point";
    case SymbolicTerm::Kind::Fiber: return "fiber";
    case SymbolicTerm::Kind::LongFiber: return "long_fiber";
    case SymbolicTerm::Kind::BoxFiber: return "box_fiber";
    }
    return "unknown";
}

namespace {

void validate_term(const SymbolicTerm& t, const CyclicModulus& m) {
    if (t.coeff <= 0) throw Error(ErrorKind::InvalidInput, "symbolic coefficients must be positive");
    if (t.depth > 0) {
        std::size_t i = m.require_index(t.prime);
        if (t.depth > m.exponent(i)) throw Error(ErrorKind::InvalidDirection, "fiber depth exceeds the exponent of its prime");
    }
    if (t.kind == SymbolicTerm::Kind::BoxFiber) {
        if (t.box.size() != m.rank()) throw Error(ErrorKind::InvalidInput, "box needs one range per prime");
        for (std::size_t k = 0; k < m.rank(); ++k) {
            const auto& r = t.box[k];
            if (r.stride < 1 || r.lo < 0 || r.hi < r.lo) throw Error(ErrorKind::InvalidInput, "malformed coordinate range");
            if (r.hi > r.lo && checked_mul(r.stride, r.hi - 1) >= m.prime_power(k))
                throw Error(ErrorKind::InvalidInput, "coordinate range leaves Z_{p^n}");
        }
    }
}

} // namespace

void SymbolicMultiset::add_term(SymbolicTerm t) {
    t.shift = mod(t.shift, modulus_.value());
    validate_term(t, modulus_);
    terms_.push_back(std::move(t));
}

void SymbolicMultiset::add_point(i64 x, i64 coeff) {
    SymbolicTerm t;
    t.kind = SymbolicTerm::Kind::Point;
    t.coeff = coeff;
    t.shift = x;
    add_term(std::move(t));
}

void SymbolicMultiset::add_fiber(i64 prime, i64 shift, i64 coeff) {
    SymbolicTerm t;
    t.kind = SymbolicTerm::Kind::Fiber;
    t.coeff = coeff;
    t.shift = shift;
    t.prime = prime;
    t.depth = 1;
    add_term(std::move(t));
}

void SymbolicMultiset::add_long_fiber(const LongFiberSpec& f, i64 coeff) {
    SymbolicTerm t;
    t.kind = SymbolicTerm::Kind::LongFiber;
    t.coeff = coeff;
    t.shift = f.shift;
    t.prime = f.prime;
    t.depth = f.depth;
    add_term(std::move(t));
}

void SymbolicMultiset::add_box_fiber(std::vector<CoordRange> box, i64 shift, i64 prime, int depth, i64 coeff) {
    SymbolicTerm t;
    t.kind = SymbolicTerm::Kind::BoxFiber;
    t.coeff = coeff;
    t.shift = shift;
    t.prime = depth > 0 ? prime : 0;
    t.depth = depth;
    t.box = std::move(box);
    add_term(std::move(t));
}

i64 term_cardinality(const SymbolicTerm& t, const CyclicModulus& m) {
    i64 n = 1;
    if (t.kind == SymbolicTerm::Kind::BoxFiber)
        for (const auto& r : t.box) n = checked_mul(n, r.count());
    (void)m;
    if (t.depth > 0) n = checked_mul(n, checked_pow(t.prime, static_cast<unsigned>(t.depth)));
    return n;
}

i64 SymbolicMultiset::mass() const {
    i64 total = 0;
    for (const auto& t : terms_) total = checked_add(total, checked_mul(t.coeff, term_cardinality(t, modulus_)));
    return total;
}

namespace {

// Element of a term from per-coordinate box indices and the fiber index.
i64 term_element(const SymbolicTerm& t, const CyclicModulus& m, const std::vector<i64>& box_coords, i64 nu) {
    i64 x = t.shift;
    if (t.kind == SymbolicTerm::Kind::BoxFiber) x = addmod(x, from_coord_vector(box_coords, m), m.value());
    if (t.depth > 0) {
        i64 step = m.value() / checked_pow(t.prime, static_cast<unsigned>(t.depth));
        x = addmod(x, mulmod(nu, step, m.value()), m.value());
    }
    return x;
}

} // namespace

Multiset SymbolicMultiset::materialize() const {
    i64 total = 0;
    for (const auto& t : terms_) total = checked_add(total, term_cardinality(t, modulus_));
    require_cells(total, "symbolic materialization");
    Multiset out(modulus_);
    std::size_t k = modulus_.rank();
    for (const auto& t : terms_) {
        i64 fiber_len = t.depth > 0 ? checked_pow(t.prime, static_cast<unsigned>(t.depth)) : 1;
        std::vector<i64> idx(k, 0), coords(k, 0);
        bool is_box = t.kind == SymbolicTerm::Kind::BoxFiber;
        if (is_box)
            for (std::size_t j = 0; j < k; ++j)
                if (t.box[j].count() == 0) goto next_term;
        while (true) {
            if (is_box)
                for (std::size_t j = 0; j < k; ++j) coords[j] = t.box[j].stride * (t.box[j].lo + idx[j]);
            for (i64 nu = 0; nu < fiber_len; ++nu) out.add_weight(term_element(t, modulus_, coords, nu), t.coeff);
            if (!is_box) break;
            std::size_t j = 0;
            while (j < k && ++idx[j] == t.box[j].count()) {
                idx[j] = 0;
                ++j;
            }
            if (j == k) break;
        }
    next_term:;
    }
    return out;
}

std::vector<i64> coordinate_histogram(const SymbolicTerm& t, const CyclicModulus& m, std::size_t k, int e) {
    i64 p = m.prime(k);
    i64 q = checked_pow(p, static_cast<unsigned>(e));
    i64 full = m.prime_power(k);
    std::vector<i64> h(static_cast<std::size_t>(q), 0);
    i64 base = coords_of(t.shift, m)[k];
    if (t.kind == SymbolicTerm::Kind::BoxFiber) {
        const auto& r = t.box[k];
        for (i64 v = r.lo; v < r.hi; ++v) {
            i64 y = mod(base + r.stride * v, full) % q;
            h[static_cast<std::size_t>(y)] += 1;
        }
    } else {
        h[static_cast<std::size_t>(base % q)] = 1;
    }
    if (t.depth > 0 && t.prime == p) {
        // Fiber steps are nu * p^{n - depth} in this coordinate; convolve with that subgroup.
        int n = m.exponent(k);
        int low = n - t.depth;
        i64 len = checked_pow(p, static_cast<unsigned>(t.depth));
        if (low >= e) {
            for (auto& c : h) c = checked_mul(c, len);
        } else {
            i64 g = checked_pow(p, static_cast<unsigned>(low));  // coset modulus inside Z_q
            i64 mult = len / (q / g);
            std::vector<i64> coset(static_cast<std::size_t>(g), 0);
            for (i64 y = 0; y < q; ++y) coset[static_cast<std::size_t>(y % g)] += h[static_cast<std::size_t>(y)];
            for (i64 y = 0; y < q; ++y) h[static_cast<std::size_t>(y)] = checked_mul(mult, coset[static_cast<std::size_t>(y % g)]);
        }
    }
    return h;
}

namespace {

struct ReducedFrame {
    std::vector<int> exps;       // v_{p_k}(N)
    std::vector<i64> unit;       // M_k * N_k^{-1} mod p_k^{e_k}
    CyclicModulus zn;
};

ReducedFrame make_frame(const CyclicModulus& m, i64 n) {
    m.require_divisor(n);
    ReducedFrame f;
    f.exps = m.valuations(n);
    if (n >= 2) f.zn = m.sub(n);
    for (std::size_t k = 0; k < m.rank(); ++k) {
        int e = f.exps[k];
        if (e == 0) {
            f.unit.push_back(0);
            continue;
        }
        i64 q = checked_pow(m.prime(k), static_cast<unsigned>(e));
        i64 nk = n / q;
        f.unit.push_back(mulmod(m.cofactor(k) % q, invmod(nk % q, q), q));
    }
    return f;
}

} // namespace

Multiset symbolic_reduce(const SymbolicMultiset& s, i64 n) {
    const auto& m = s.modulus();
    if (n < 2) throw Error(ErrorKind::InvalidScale, "reduction target must be at least 2");
    require_cells(n, "symbolic_reduce");
    ReducedFrame f = make_frame(m, n);
    std::vector<i64> dense(static_cast<std::size_t>(n), 0);
    std::size_t k = m.rank();
    // Positions of the primes of N among those of M.
    std::vector<std::size_t> kept;
    for (std::size_t j = 0; j < k; ++j)
        if (f.exps[j] > 0) kept.push_back(j);

    for (const auto& t : s.terms()) {
        i64 factor = t.coeff;
        std::vector<std::vector<std::pair<i64, i64>>> sparse;  // per kept prime: (N-coordinate, count)
        for (std::size_t j = 0; j < k; ++j) {
            if (f.exps[j] == 0) {
                auto h = coordinate_histogram(t, m, j, 0);
                factor = checked_mul(factor, h[0]);
                continue;
            }
            auto h = coordinate_histogram(t, m, j, f.exps[j]);
            i64 q = static_cast<i64>(h.size());
            std::vector<std::pair<i64, i64>> entries;
            for (i64 y = 0; y < q; ++y)
                if (h[static_cast<std::size_t>(y)] != 0) entries.emplace_back(mulmod(y, f.unit[j], q), h[static_cast<std::size_t>(y)]);
            sparse.push_back(std::move(entries));
        }
        if (factor == 0) continue;
        std::vector<std::size_t> idx(sparse.size(), 0);
        bool any_empty = std::any_of(sparse.begin(), sparse.end(), [](const auto& v) { return v.empty(); });
        if (any_empty) continue;
        std::vector<i64> zc(kept.size());
        while (true) {
            i64 w = factor;
            for (std::size_t a = 0; a < sparse.size(); ++a) {
                zc[a] = sparse[a][idx[a]].first;
                w = checked_mul(w, sparse[a][idx[a]].second);
            }
            i64 x = from_coord_vector(zc, f.zn);
            dense[static_cast<std::size_t>(x)] = checked_add(dense[static_cast<std::size_t>(x)], w);
            std::size_t a = 0;
            while (a < sparse.size() && ++idx[a] == sparse[a].size()) {
                idx[a] = 0;
                ++a;
            }
            if (a == sparse.size()) break;
        }
    }
    return Multiset::from_dense(f.zn, dense);
}

bool symbolic_congruent(const SymbolicMultiset& a, const SymbolicMultiset& b, i64 n) {
    if (!(a.modulus() == b.modulus())) throw Error(ErrorKind::ModulusMismatch, "symbolic_congruent needs a common modulus");
    const auto& m = a.modulus();
    m.require_divisor(n);
    auto exps = m.valuations(n);
    std::size_t k = m.rank();

    struct Signed {
        const SymbolicTerm* term;
        i64 sign;
    };
    std::vector<Signed> all;
    for (const auto& t : a.terms()) all.push_back({&t, 1});
    for (const auto& t : b.terms()) all.push_back({&t, -1});
    if (all.empty()) return true;

    // Per coordinate, residues with identical count-signatures across all
    // terms form one class; both sides are constant on products of classes.
    std::vector<std::vector<std::vector<i64>>> class_values(k);  // [coord][class][term]
    for (std::size_t j = 0; j < k; ++j) {
        std::vector<std::vector<i64>> hists;
        for (const auto& st : all) hists.push_back(coordinate_histogram(*st.term, m, j, exps[j]));
        std::size_t q = hists[0].size();
        std::map<std::vector<i64>, std::size_t> seen;
        for (std::size_t y = 0; y < q; ++y) {
            std::vector<i64> sig(all.size());
            for (std::size_t t = 0; t < all.size(); ++t) sig[t] = hists[t][y];
            if (seen.emplace(sig, seen.size()).second) class_values[j].push_back(std::move(sig));
        }
    }
    std::vector<std::size_t> idx(k, 0);
    while (true) {
        __int128 total = 0;
        for (std::size_t t = 0; t < all.size(); ++t) {
            __int128 v = all[t].sign * all[t].term->coeff;
            for (std::size_t j = 0; j < k && v != 0; ++j) v *= class_values[j][idx[j]][t];
            total += v;
        }
        if (total != 0) return false;
        std::size_t j = 0;
        while (j < k && ++idx[j] == class_values[j].size()) {
            idx[j] = 0;
            ++j;
        }
        if (j == k) break;
    }
    return true;
}

namespace {

// Number of t in [lo, hi) with stride * t == c (mod g).
i64 count_congruent(i64 stride, i64 lo, i64 hi, i64 c, i64 g) {
    if (hi <= lo) return 0;
    i64 d = gcd(stride, g);
    c = mod(c, g);
    if (c % d != 0) return 0;
    i64 gg = g / d;
    i64 t0 = gg == 1 ? 0 : mulmod(c / d, invmod((stride / d) % gg, gg), gg);
    // Count t = t0 + k*gg inside [lo, hi).
    auto upto = [&](i64 bound) {  // number of t < bound, t >= 0, t == t0 mod gg
        if (bound <= t0) return static_cast<i64>(0);
        return (bound - t0 - 1) / gg + 1;
    };
    return upto(hi) - upto(lo);
}

// Multiplicity of coordinate value v among the elements of a term.
i64 coordinate_count(const SymbolicTerm& t, const CyclicModulus& m, std::size_t k, i64 base, i64 v) {
    i64 full = m.prime_power(k);
    CoordRange r;
    if (t.kind == SymbolicTerm::Kind::BoxFiber) r = t.box[k];
    i64 c = mod(v - base, full);
    if (t.depth > 0 && t.prime == m.prime(k)) {
        i64 g = checked_pow(t.prime, static_cast<unsigned>(m.exponent(k) - t.depth));
        return count_congruent(r.stride, r.lo, r.hi, c, g);
    }
    // Without a fiber in this coordinate the value is base + stride * t with stride * t < full.
    if (c % r.stride != 0) return 0;
    i64 tt = c / r.stride;
    return (tt >= r.lo && tt < r.hi) ? 1 : 0;
}

} // namespace

i64 symbolic_weight(const SymbolicMultiset& s, i64 x) {
    const auto& m = s.modulus();
    auto xc = coords_of(x, m);
    i64 total = 0;
    for (const auto& t : s.terms()) {
        auto base = coords_of(t.shift, m);
        i64 w = t.coeff;
        for (std::size_t j = 0; j < m.rank() && w != 0; ++j) w = checked_mul(w, coordinate_count(t, m, j, base[j], xc[j]));
        total = checked_add(total, w);
    }
    return total;
}

SymbolicSampler::SymbolicSampler(const SymbolicMultiset& s) : s_(s) {
    double acc = 0;
    for (const auto& t : s.terms()) {
        acc += static_cast<double>(t.coeff) * static_cast<double>(term_cardinality(t, s.modulus()));
        cumulative_.push_back(acc);
    }
    if (acc <= 0) throw Error(ErrorKind::InvalidInput, "cannot sample from an empty symbolic multiset");
}

std::pair<std::size_t, i64> SymbolicSampler::sample_term(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> pick(0.0, cumulative_.back());
    double u = pick(rng);
    std::size_t ti = static_cast<std::size_t>(std::upper_bound(cumulative_.begin(), cumulative_.end(), u) - cumulative_.begin());
    if (ti >= cumulative_.size()) ti = cumulative_.size() - 1;
    const auto& t = s_.terms()[ti];
    const auto& m = s_.modulus();
    std::vector<i64> coords(m.rank(), 0);
    if (t.kind == SymbolicTerm::Kind::BoxFiber)
        for (std::size_t j = 0; j < m.rank(); ++j) {
            std::uniform_int_distribution<i64> d(t.box[j].lo, t.box[j].hi - 1);
            coords[j] = t.box[j].stride * d(rng);
        }
    i64 nu = 0;
    if (t.depth > 0) {
        std::uniform_int_distribution<i64> d(0, checked_pow(t.prime, static_cast<unsigned>(t.depth)) - 1);
        nu = d(rng);
    }
    return {ti, term_element(t, m, coords, nu)};
}

i64 SymbolicSampler::sample(std::mt19937_64& rng) const { return sample_term(rng).second; }

} // namespace cyclo
