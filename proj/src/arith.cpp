#include "cyclolab/arith.hpp"

#include "cyclolab/error.hpp"

#include <algorithm>
#include <string>

namespace cyclo {

const char* error_kind_name(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidModulus: return "invalid-modulus";
    case ErrorKind::InvalidScale: return "invalid-scale";
    case ErrorKind::InvalidDirection: return "invalid-direction";
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::ModulusMismatch: return "modulus-mismatch";
    case ErrorKind::Overflow: return "overflow";
    case ErrorKind::CapExceeded: return "cap-exceeded";
    case ErrorKind::NotDivisible: return "not-divisible";
    case ErrorKind::UndefinedDivisors: return "undefined-divisors";
    case ErrorKind::UseRemainderMethod: return "use-remainder-method";
    case ErrorKind::Inapplicable: return "inapplicable";
    case ErrorKind::Internal: return "internal";
    }
    return "unknown";
}

i64 checked_add(i64 a, i64 b) {
    i64 r;
    if (__builtin_add_overflow(a, b, &r))
        throw Error(ErrorKind::Overflow, std::to_string(a) + " + " + std::to_string(b));
    return r;
}

i64 checked_sub(i64 a, i64 b) {
    i64 r;
    if (__builtin_sub_overflow(a, b, &r))
        throw Error(ErrorKind::Overflow, std::to_string(a) + " - " + std::to_string(b));
    return r;
}

i64 checked_mul(i64 a, i64 b) {
    i64 r;
    if (__builtin_mul_overflow(a, b, &r))
        throw Error(ErrorKind::Overflow, std::to_string(a) + " * " + std::to_string(b));
    return r;
}

i64 checked_pow(i64 base, unsigned exp) {
    i64 r = 1;
    for (unsigned k = 0; k < exp; ++k) r = checked_mul(r, base);
    return r;
}

i64 gcd(i64 a, i64 b) {
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b != 0) {
        i64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

i64 lcm(i64 a, i64 b) {
    if (a == 0 || b == 0) return 0;
    return checked_mul(a / gcd(a, b), b);
}

i64 mulmod(i64 a, i64 b, i64 m) {
    return static_cast<i64>((static_cast<__int128>(a) * b) % m);
}

i64 powmod(i64 base, u64 exp, i64 m) {
    i64 result = 1 % m;
    base = mod(base, m);
    while (exp > 0) {
        if (exp & 1) result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return result;
}

i64 invmod(i64 a, i64 m) {
    if (m == 1) return 0;
    i64 old_r = mod(a, m), r = m;
    i64 old_s = 1, s = 0;
    while (r != 0) {
        i64 q = old_r / r;
        i64 t = old_r - q * r;
        old_r = r;
        r = t;
        t = old_s - q * s;
        old_s = s;
        s = t;
    }
    if (old_r != 1)
        throw Error(ErrorKind::InvalidInput, std::to_string(a) + " is not invertible mod " + std::to_string(m));
    return mod(old_s, m);
}

namespace {

u64 mulmod_u(u64 a, u64 b, u64 m) {
    return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % m);
}

u64 powmod_u(u64 b, u64 e, u64 m) {
    u64 r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod_u(r, b, m);
        b = mulmod_u(b, b, m);
        e >>= 1;
    }
    return r;
}

} // namespace

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // These twelve bases are a deterministic witness set for all n < 2^64.
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        u64 x = powmod_u(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod_u(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

namespace {

u64 pollard_rho(u64 n) {
    if (n % 2 == 0) return 2;
    for (u64 c = 1;; ++c) {
        u64 x = 2, y = 2, d = 1;
        auto f = [&](u64 v) { return (mulmod_u(v, v, n) + c) % n; };
        while (d == 1) {
            x = f(x);
            y = f(f(y));
            d = static_cast<u64>(gcd(static_cast<i64>(x > y ? x - y : y - x), static_cast<i64>(n)));
        }
        if (d != n) return d;
    }
}

void factor_large(u64 n, std::vector<u64>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    u64 d = pollard_rho(n);
    factor_large(d, out);
    factor_large(n / d, out);
}

} // namespace

std::vector<std::pair<i64, int>> factorize(i64 n) {
    if (n < 1) throw Error(ErrorKind::InvalidInput, "factorize expects n >= 1, got " + std::to_string(n));
    std::vector<std::pair<i64, int>> out;
    u64 m = static_cast<u64>(n);
    constexpr u64 kTrialLimit = 10'000'000;
    for (u64 p = 2; p <= kTrialLimit && p * p <= m; p += (p == 2 ? 1 : 2)) {
        if (m % p != 0) continue;
        int e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        out.emplace_back(static_cast<i64>(p), e);
    }
    if (m > 1) {
        // Whatever survives trial division is either prime or has all factors above the limit.
        std::vector<u64> rest;
        factor_large(m, rest);
        std::sort(rest.begin(), rest.end());
        for (u64 p : rest) {
            if (!out.empty() && out.back().first == static_cast<i64>(p))
                ++out.back().second;
            else
                out.emplace_back(static_cast<i64>(p), 1);
        }
    }
    return out;
}

int valuation(i64 n, i64 p) {
    int e = 0;
    if (n == 0) return 0;
    while (n % p == 0) {
        n /= p;
        ++e;
    }
    return e;
}

std::vector<i64> divisors_of(i64 n) {
    std::vector<i64> divs{1};
    for (auto [p, e] : factorize(n)) {
        std::size_t base = divs.size();
        i64 pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t t = 0; t < base; ++t) divs.push_back(divs[t] * pk);
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

} // namespace cyclo
