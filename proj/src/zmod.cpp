#include "cyclolab/zmod.hpp"

#include "cyclolab/error.hpp"

#include <string>

namespace cyclo {

CyclicModulus CyclicModulus::from_factors(std::vector<PrimePower> factors) {
    CyclicModulus m;
    i64 value = 1;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        const auto& f = factors[i];
        if (f.exponent < 1 || !is_prime(static_cast<u64>(f.prime)))
            throw Error(ErrorKind::InvalidModulus, "bad factor " + std::to_string(f.prime) + "^" + std::to_string(f.exponent));
        if (i > 0 && factors[i - 1].prime >= f.prime)
            throw Error(ErrorKind::InvalidModulus, "factors must have strictly increasing primes");
        i64 pp = checked_pow(f.prime, static_cast<unsigned>(f.exponent));
        m.prime_powers_.push_back(pp);
        value = checked_mul(value, pp);
    }
    if (value < 2) throw Error(ErrorKind::InvalidModulus, "modulus must be at least 2");
    m.value_ = value;
    m.factors_ = std::move(factors);
    for (std::size_t i = 0; i < m.factors_.size(); ++i) {
        i64 cof = value / m.prime_powers_[i];
        m.cofactors_.push_back(cof);
        m.cofactor_inverses_.push_back(invmod(cof % m.prime_powers_[i], m.prime_powers_[i]));
    }
    return m;
}

std::optional<std::size_t> CyclicModulus::index_of(i64 p) const {
    for (std::size_t i = 0; i < factors_.size(); ++i)
        if (factors_[i].prime == p) return i;
    return std::nullopt;
}

std::size_t CyclicModulus::require_index(i64 p) const {
    auto i = index_of(p);
    if (!i) throw Error(ErrorKind::InvalidDirection, std::to_string(p) + " does not divide " + std::to_string(value_));
    return *i;
}

void CyclicModulus::require_divisor(i64 n) const {
    if (!is_divisor(n))
        throw Error(ErrorKind::InvalidScale, std::to_string(n) + " does not divide " + std::to_string(value_));
}

CyclicModulus CyclicModulus::sub(i64 n) const {
    require_divisor(n);
    std::vector<PrimePower> fs;
    for (const auto& f : factors_) {
        int e = valuation(n, f.prime);
        if (e > 0) fs.push_back({f.prime, e});
    }
    return from_factors(std::move(fs));
}

std::vector<int> CyclicModulus::valuations(i64 n) const {
    std::vector<int> out;
    out.reserve(factors_.size());
    for (const auto& f : factors_) out.push_back(valuation(n, f.prime));
    return out;
}

i64 CyclicModulus::from_valuations(const std::vector<int>& vals) const {
    i64 n = 1;
    for (std::size_t i = 0; i < factors_.size(); ++i) n = checked_mul(n, checked_pow(factors_[i].prime, static_cast<unsigned>(vals[i])));
    return n;
}

CyclicModulus factor_modulus(i64 m) {
    if (m < 2) throw Error(ErrorKind::InvalidModulus, "modulus must be at least 2, got " + std::to_string(m));
    std::vector<PrimePower> fs;
    for (auto [p, e] : factorize(m)) fs.push_back({p, e});
    return CyclicModulus::from_factors(std::move(fs));
}

std::vector<i64> coords_of(i64 x, const CyclicModulus& m) {
    x = mod(x, m.value());
    std::vector<i64> c(m.rank());
    for (std::size_t i = 0; i < m.rank(); ++i) {
        i64 q = m.prime_power(i);
        c[i] = mulmod(x % q, m.cofactor_inverse(i), q);
    }
    return c;
}

i64 from_coord_vector(const std::vector<i64>& coords, const CyclicModulus& m) {
    if (coords.size() != m.rank()) throw Error(ErrorKind::InvalidInput, "coordinate vector has wrong length");
    i64 x = 0;
    for (std::size_t i = 0; i < m.rank(); ++i) {
        i64 term = mulmod(mod(coords[i], m.prime_power(i)), m.cofactor(i), m.value());
        x -= m.value() - term;
        if (x < 0) x += m.value();
    }
    return x;
}

std::vector<int> digits_of(i64 coord, i64 p, int n) {
    std::vector<int> d(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        d[static_cast<std::size_t>(j)] = static_cast<int>(coord % p);
        coord /= p;
    }
    return d;
}

i64 from_digits(const std::vector<int>& digits, i64 p) {
    i64 v = 0;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) v = v * p + *it;
    return v;
}

ArrayCoords to_coords(i64 x, const CyclicModulus& m) {
    if (x < 0 || x >= m.value()) throw Error(ErrorKind::InvalidInput, std::to_string(x) + " is outside [0, M)");
    ArrayCoords out;
    out.coords = coords_of(x, m);
    for (std::size_t i = 0; i < m.rank(); ++i) out.digits.push_back(digits_of(out.coords[i], m.prime(i), m.exponent(i)));
    return out;
}

i64 from_coords(const ArrayCoords& c, const CyclicModulus& m) {
    for (std::size_t i = 0; i < c.coords.size() && i < m.rank(); ++i)
        if (c.coords[i] < 0 || c.coords[i] >= m.prime_power(i)) throw Error(ErrorKind::InvalidInput, "coordinate out of range");
    return from_coord_vector(c.coords, m);
}

i64 radical(i64 n) {
    i64 r = 1;
    for (auto [p, e] : factorize(n)) r *= p;
    return r;
}

i64 radical_quotient(i64 n) { return n / radical(n); }

Radical radical_reduced(i64 n, const CyclicModulus& m) {
    m.require_divisor(n);
    Radical r{n, {}};
    for (const auto& f : m.factors()) {
        if (n % f.prime == 0) {
            r.primes.push_back(f.prime);
            r.reduced /= f.prime;
        }
    }
    return r;
}

std::vector<i64> grid_elements(const GridSpec& g) {
    if (g.scale < 1 || g.step < 1 || g.scale % g.step != 0) throw Error(ErrorKind::InvalidScale, "grid step must divide its scale");
    std::vector<i64> out;
    i64 start = mod(g.base, g.step);
    for (i64 x = start; x < g.scale; x += g.step) out.push_back(x);
    return out;
}

bool grid_contains(const GridSpec& g, i64 x) { return mod(x - g.base, g.step) == 0; }

std::vector<i64> fiber_elements(const FiberSpec& f, const CyclicModulus& m) {
    m.require_divisor(f.scale);
    if (f.prime < 2 || f.scale % f.prime != 0)
        throw Error(ErrorKind::InvalidDirection, std::to_string(f.prime) + " does not divide the scale " + std::to_string(f.scale));
    std::vector<i64> out;
    i64 step = f.scale / f.prime;
    for (i64 nu = 0; nu < f.prime; ++nu) out.push_back(mod(f.shift + nu * step, f.scale));
    return out;
}

std::vector<i64> fiber_elements(const LongFiberSpec& f, const CyclicModulus& m) {
    std::size_t i = m.require_index(f.prime);
    if (f.depth < 1 || f.depth > m.exponent(i))
        throw Error(ErrorKind::InvalidDirection, "long fiber depth " + std::to_string(f.depth) + " out of range");
    i64 len = checked_pow(f.prime, static_cast<unsigned>(f.depth));
    i64 step = m.value() / len;
    std::vector<i64> out;
    for (i64 nu = 0; nu < len; ++nu) out.push_back(mod(f.shift + mulmod(nu, step, m.value()), m.value()));
    return out;
}

} // namespace cyclo
