#include "cyclolab/structure.hpp"

#include "cyclolab/error.hpp"

#include <algorithm>
#include <string>

namespace cyclo {

namespace {

struct Axis {
    i64 prime;
    int depth;  // the grid has p^depth points along this axis
};

struct GridFrame {
    i64 scale;  // T
    i64 step;   // D, the grid step in Z_T
    std::vector<Axis> axes;
    CyclicModulus box;  // Z_{T/D} = prod Z_{p_i^{depth_i}}
};

GridFrame make_frame(i64 scale, std::vector<Axis> axes) {
    std::vector<PrimePower> fs;
    i64 r = 1;
    for (const auto& ax : axes) {
        fs.push_back({ax.prime, ax.depth});
        r = checked_mul(r, checked_pow(ax.prime, static_cast<unsigned>(ax.depth)));
    }
    if (scale % r != 0) throw Error(ErrorKind::Internal, "grid box does not divide the scale");
    return GridFrame{scale, scale / r, std::move(axes), CyclicModulus::from_factors(std::move(fs))};
}

// Signed decomposition of one grid's values (indexed by box position u) into axis lines.
// Returns false if the residue after elimination is nonzero.
bool eliminate_grid(std::vector<i64>& values, const GridFrame& f, i64 base, std::vector<FiberTerm>& out) {
    i64 r = f.box.value();
    for (std::size_t i = 0; i < f.axes.size(); ++i) {
        i64 len = f.box.prime_power(i);
        i64 stride = f.box.cofactor(i);
        // Positions with coordinate i equal to 0 are exactly the multiples of p_i^{depth_i}.
        for (i64 u = 0; u < r; u += len) {
            i64 c = values[static_cast<std::size_t>(u)];
            if (c == 0) continue;
            out.push_back({f.axes[i].prime, f.axes[i].depth, base + f.step * u, c});
            for (i64 nu = 0; nu < len; ++nu) {
                auto& cell = values[static_cast<std::size_t>((u + nu * stride) % r)];
                cell = checked_sub(cell, c);
            }
        }
    }
    return std::all_of(values.begin(), values.end(), [](i64 v) { return v == 0; });
}

// Two-axis grid with values C(t, s) = w_s + v_t: re-balance around the minimum so every coefficient is >= 0.
bool nonneg_grid(const std::vector<i64>& values, const GridFrame& f, i64 base, std::vector<FiberTerm>& out) {
    i64 len0 = f.box.prime_power(0), len1 = f.box.prime_power(1);
    auto at = [&](i64 t, i64 s) { return values[static_cast<std::size_t>(from_coord_vector({t, s}, f.box))]; };
    i64 e = at(0, 0), t0 = 0, s0 = 0;
    for (i64 t = 0; t < len0; ++t)
        for (i64 s = 0; s < len1; ++s)
            if (at(t, s) < e) {
                e = at(t, s);
                t0 = t;
                s0 = s;
            }
    for (i64 t = 0; t < len0; ++t)
        for (i64 s = 0; s < len1; ++s)
            if (at(t, s) != at(t0, s) + at(t, s0) - e) return false;
    // Lines along axis 0 pass through (0, s); lines along axis 1 through (t, 0).
    for (i64 s = 0; s < len1; ++s) {
        i64 w = at(t0, s);
        if (w != 0) out.push_back({f.axes[0].prime, f.axes[0].depth, base + f.step * from_coord_vector({0, s}, f.box), w});
    }
    for (i64 t = 0; t < len0; ++t) {
        i64 v = at(t, s0) - e;
        if (v != 0) out.push_back({f.axes[1].prime, f.axes[1].depth, base + f.step * from_coord_vector({t, 0}, f.box), v});
    }
    return true;
}

FiberDecomposition decompose(const std::vector<i64>& reduced, const GridFrame& f, bool nonneg) {
    FiberDecomposition d;
    d.scale = f.scale;
    d.nonnegative = nonneg;
    i64 r = f.box.value();
    std::vector<i64> values(static_cast<std::size_t>(r));
    for (i64 base = 0; base < f.step; ++base) {
        for (i64 u = 0; u < r; ++u) values[static_cast<std::size_t>(u)] = reduced[static_cast<std::size_t>(base + f.step * u)];
        bool ok = nonneg ? nonneg_grid(values, f, base, d.terms) : eliminate_grid(values, f, base, d.terms);
        if (!ok) throw Error(ErrorKind::Internal, "grid " + std::to_string(base) + " did not decompose");
    }
    // Deterministic order: ascending prime, then shift.
    std::stable_sort(d.terms.begin(), d.terms.end(), [](const FiberTerm& a, const FiberTerm& b) {
        if (a.prime != b.prime) return a.prime < b.prime;
        return a.shift < b.shift;
    });
    return d;
}

void verify_reconstruction(const FiberDecomposition& d, const Multiset& a) {
    Multiset back = reconstruct(d, a.modulus());
    if (!(back == reduce_mod(a, d.scale))) throw Error(ErrorKind::Internal, "fiber decomposition failed to reconstruct its input");
    if (d.nonnegative)
        for (const auto& t : d.terms)
            if (t.coeff < 0) throw Error(ErrorKind::Internal, "nonnegative decomposition has a negative coefficient");
}

} // namespace

Multiset reconstruct(const FiberDecomposition& d, const CyclicModulus& ambient) {
    CyclicModulus zt = ambient.sub(d.scale);
    Multiset out(zt);
    for (const auto& t : d.terms) {
        i64 len = checked_pow(t.prime, static_cast<unsigned>(t.depth));
        i64 step = d.scale / len;
        for (i64 nu = 0; nu < len; ++nu) out.add_weight(mod(t.shift + nu * step, d.scale), t.coeff);
    }
    return out;
}

FiberDecomposition fiber_decompose(const Multiset& a, i64 n) {
    a.modulus().require_divisor(n);
    if (n < 2) throw Error(ErrorKind::InvalidScale, "fiber decomposition needs N >= 2");
    auto reduced = reduce_dense(a, n);
    if (!divides_reduced(n, reduced)) throw Error(ErrorKind::NotDivisible, "Phi_" + std::to_string(n) + " does not divide A");
    std::vector<Axis> axes;
    for (auto [p, e] : factorize(n)) axes.push_back({p, 1});
    auto d = decompose(reduced, make_frame(n, std::move(axes)), false);
    verify_reconstruction(d, a);
    return d;
}

FiberDecomposition fiber_decompose_nonneg_two_prime(const Multiset& a, i64 n) {
    a.modulus().require_divisor(n);
    require_nonnegative(a, "fiber_decompose_nonneg_two_prime");
    auto primes = factorize(n);
    if (primes.size() != 2) throw Error(ErrorKind::InvalidScale, "N must have exactly two prime factors");
    auto reduced = reduce_dense(a, n);
    if (!divides_reduced(n, reduced)) throw Error(ErrorKind::NotDivisible, "Phi_" + std::to_string(n) + " does not divide A");
    auto d = decompose(reduced, make_frame(n, {{primes[0].first, 1}, {primes[1].first, 1}}), true);
    verify_reconstruction(d, a);
    return d;
}

FiberDecomposition long_fiber_decompose(const Multiset& a, i64 n) {
    const auto& m = a.modulus();
    m.require_divisor(n);
    std::vector<Axis> axes;
    for (std::size_t i = 0; i < m.rank(); ++i) {
        int e = valuation(n, m.prime(i));
        if (e < 1) throw Error(ErrorKind::InvalidScale, "N must be divisible by every prime of M");
        axes.push_back({m.prime(i), m.exponent(i) - e + 1});
    }
    for (i64 l : divisors_of(m.value() / n)) {
        i64 scale = l * n;
        if (!divides(scale, a))
            throw Error(ErrorKind::NotDivisible, "Phi_" + std::to_string(scale) + " does not divide A (first failing L)");
    }
    bool nonneg = m.rank() == 2 && a.is_nonnegative();
    auto d = decompose(a.dense(), make_frame(m.value(), std::move(axes)), nonneg);
    d.block = n;
    verify_reconstruction(d, a);
    return d;
}

Multiset truncate_digit(const Multiset& a, i64 prime, int alpha) {
    const auto& m = a.modulus();
    std::size_t i = m.require_index(prime);
    if (alpha < 1 || alpha > m.exponent(i)) throw Error(ErrorKind::InvalidInput, "truncation level out of range");
    i64 place = checked_pow(prime, static_cast<unsigned>(alpha - 1));
    Multiset out(m);
    for (auto [x, w] : a.weights()) {
        auto c = coords_of(x, m);
        i64 digit = (c[i] / place) % prime;
        c[i] -= digit * place;
        out.add_weight(from_coord_vector(c, m), w);
    }
    return out;
}

TruncationTarget truncation_target(const ScaleSet& s) {
    const auto& m = s.modulus();
    auto prof = exponent_profile(s);
    std::vector<PrimePower> fs;
    for (std::size_t i = 0; i < m.rank(); ++i)
        if (!prof.exps[i].empty()) fs.push_back({m.prime(i), static_cast<int>(prof.exps[i].size())});
    TruncationTarget t{CyclicModulus::from_factors(fs), {}};
    for (i64 sc : s.scales()) {
        i64 image = 1;
        for (std::size_t i = 0; i < m.rank(); ++i) {
            int e = valuation(sc, m.prime(i));
            if (e == 0) continue;
            const auto& ex = prof.exps[i];
            int level = static_cast<int>(std::lower_bound(ex.begin(), ex.end(), e) - ex.begin()) + 1;
            image = checked_mul(image, checked_pow(m.prime(i), static_cast<unsigned>(level)));
        }
        t.scale_map.emplace_back(sc, image);
    }
    return t;
}

TruncationResult truncate(const Multiset& a, const ScaleSet& s) {
    const auto& m = a.modulus();
    if (!(s.modulus() == m)) throw Error(ErrorKind::ModulusMismatch, "scale set and multiset live in different groups");
    std::vector<i64> offending;
    for (i64 sc : s.scales())
        if (!divides(sc, a)) offending.push_back(sc);
    if (!offending.empty()) {
        std::string list;
        for (i64 o : offending) list += (list.empty() ? "" : ",") + std::to_string(o);
        throw Error(ErrorKind::NotDivisible, "Phi_s does not divide A for s in {" + list + "}");
    }
    auto prof = exponent_profile(s);
    auto target = truncation_target(s);
    TruncationResult res{Multiset(target.modulus), target.modulus, target.scale_map};
    for (auto [x, w] : a.weights()) {
        auto c = coords_of(x, m);
        std::vector<i64> packed;
        for (std::size_t i = 0; i < m.rank(); ++i) {
            if (prof.exps[i].empty()) continue;
            auto digits = digits_of(c[i], m.prime(i), m.exponent(i));
            std::vector<int> keep;
            for (int alpha : prof.exps[i]) keep.push_back(digits[static_cast<std::size_t>(alpha - 1)]);
            packed.push_back(from_digits(keep, m.prime(i)));
        }
        res.truncated.add_weight(from_coord_vector(packed, res.modulus), w);
    }
    for (auto [sc, image] : res.scale_map)
        if (!divides(image, res.truncated))
            throw Error(ErrorKind::Internal, "truncation lost the divisor Phi_" + std::to_string(image));
    return res;
}

DichotomyResult flat_dichotomy(const Multiset& a, i64 n, i64 p) {
    require_nonnegative(a, "flat_dichotomy");
    a.modulus().require_divisor(n);
    if (p < 2 || n % p != 0 || !is_prime(static_cast<u64>(p)))
        throw Error(ErrorKind::InvalidDirection, std::to_string(p) + " is not a prime factor of " + std::to_string(n));
    auto reduced = reduce_dense(a, n);
    if (!divides_reduced(n, reduced)) throw Error(ErrorKind::NotDivisible, "Phi_" + std::to_string(n) + " does not divide A");
    int alpha = valuation(n, p);
    if (chain_divides(a, n, p, alpha)) {
        ChainCertificate cert{n, p, alpha, {}};
        i64 sc = n;
        for (int b = 0; b <= alpha; ++b, sc /= p) cert.scales.push_back(sc);
        return cert;
    }
    std::optional<CuboidSpec> best;
    i64 best_eval = 0;
    std::vector<CuboidVertex> best_verts;
    for_each_canonical_cuboid(n, p, [&](const CuboidSpec& c, const std::vector<CuboidVertex>& verts) {
        i64 total = 0;
        for (const auto& v : verts) total = checked_add(total, v.sign * reduced[static_cast<std::size_t>(v.point)]);
        if (total != 0 && (!best || std::tie(c.corner, c.offsets) < std::tie(best->corner, best->offsets))) {
            best = c;
            best_eval = total;
            best_verts = verts;
        }
        return true;
    });
    if (!best) throw Error(ErrorKind::Internal, "chain fails but every flat cuboid vanishes");
    i64 anchor = -1;
    for (const auto& v : best_verts)
        if (reduced[static_cast<std::size_t>(v.point)] > 0 && (anchor < 0 || v.point < anchor)) anchor = v.point;
    DichotomyWitness w{n, p, anchor, *best, best_eval, {}};
    i64 grid = p * radical_quotient(n);
    CyclicModulus zn = a.modulus().sub(n);
    for (i64 nu = 0; nu < p; ++nu) {
        i64 y = mod(anchor + nu * (n / p), n);
        Multiset part(zn);
        for (i64 x = mod(y, grid); x < n; x += grid)
            if (reduced[static_cast<std::size_t>(x)] != 0) part.add_weight(x, reduced[static_cast<std::size_t>(x)]);
        if (part.empty()) throw Error(ErrorKind::Internal, "flat cuboid stack left an empty part");
        w.parts.push_back(std::move(part));
    }
    return w;
}

SplitWitness split_witness(const Multiset& a, i64 n, i64 anchor) {
    require_nonnegative(a, "split_witness");
    a.modulus().require_divisor(n);
    auto reduced = reduce_dense(a, n);
    if (!divides_reduced(n, reduced)) throw Error(ErrorKind::NotDivisible, "Phi_" + std::to_string(n) + " does not divide A");
    anchor = mod(anchor, n);
    if (reduced[static_cast<std::size_t>(anchor)] <= 0) throw Error(ErrorKind::InvalidInput, "anchor is not in the support of A mod N");
    i64 dn = radical_quotient(n);
    for (auto [p, e] : factorize(n)) {
        i64 grid = p * dn;
        SplitWitness w{p, {anchor}};
        for (i64 nu = 1; nu < p && static_cast<i64>(w.elements.size()) == nu; ++nu) {
            i64 y = mod(anchor + nu * (n / p), n);
            for (i64 x = mod(y, grid); x < n; x += grid)
                if (reduced[static_cast<std::size_t>(x)] > 0) {
                    w.elements.push_back(x);
                    break;
                }
        }
        if (static_cast<i64>(w.elements.size()) == p) return w;
    }
    throw Error(ErrorKind::Internal, "no split witness exists, contradicting Phi_N | A");
}

bool is_fibered(const Multiset& a, i64 n, i64 p) {
    require_nonnegative(a, "is_fibered");
    a.modulus().require_divisor(n);
    if (p < 2 || n % p != 0) throw Error(ErrorKind::InvalidDirection, std::to_string(p) + " does not divide " + std::to_string(n));
    auto reduced = reduce_dense(a, n);
    i64 step = n / p;
    for (i64 x = 0; x < n; ++x)
        if (reduced[static_cast<std::size_t>(x)] != reduced[static_cast<std::size_t>((x + step) % n)]) return false;
    return true;
}

} // namespace cyclo
