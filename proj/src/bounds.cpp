#include "cyclolab/bounds.hpp"

#include "cyclolab/error.hpp"
#include "cyclolab/structure.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace cyclo {

namespace {

i64 min_prime(i64 s) { return factorize(s).front().first; }

i64 ceil_multiple(double v, i64 f) {
    if (v <= 0) return f;
    i64 k = static_cast<i64>(std::ceil(v / static_cast<double>(f)));
    return std::max<i64>(k, 1) * f;
}

// rows[r] = X^r mod Phi_s in the monomial basis, r in [0, s).
std::vector<std::vector<i64>> power_remainders(i64 s) {
    const Poly& phi = cyclotomic_poly(s);
    std::size_t d = phi.size() - 1;
    std::vector<std::vector<i64>> out(static_cast<std::size_t>(s));
    std::vector<i64> v(d, 0);
    v[0] = 1;
    for (i64 r = 0; r < s; ++r) {
        out[static_cast<std::size_t>(r)] = v;
        i64 top = v[d - 1];
        for (std::size_t k = d - 1; k > 0; --k) v[k] = v[k - 1];
        v[0] = 0;
        if (top != 0)
            for (std::size_t k = 0; k < d; ++k) v[k] = checked_sub(v[k], checked_mul(top, phi[k]));
    }
    return out;
}

std::string join(const std::vector<i64>& xs) {
    std::ostringstream os;
    for (std::size_t k = 0; k < xs.size(); ++k) os << (k ? "," : "") << xs[k];
    return os.str();
}

} // namespace

i64 AssignmentFunction::at(i64 scale) const {
    for (auto [s, p] : entries)
        if (s == scale) return p;
    throw Error(ErrorKind::InvalidInput, "assignment function has no entry for scale " + std::to_string(scale));
}

ExponentProfile exp_profile_sigma(const ScaleSet& s, const AssignmentFunction& sigma) {
    const auto& m = s.modulus();
    ExponentProfile prof;
    prof.exps.resize(m.rank());
    for (i64 sc : s.scales()) {
        i64 p = sigma.at(sc);
        if (p < 2 || sc % p != 0) throw Error(ErrorKind::InvalidDirection, std::to_string(p) + " does not divide " + std::to_string(sc));
        std::size_t i = m.require_index(p);
        auto& ex = prof.exps[i];
        int e = valuation(sc, p);
        if (std::find(ex.begin(), ex.end(), e) == ex.end()) ex.push_back(e);
    }
    for (auto& ex : prof.exps) std::sort(ex.begin(), ex.end());
    return prof;
}

i64 fib_value(const ScaleSet& s, const AssignmentFunction& sigma) {
    auto prof = exp_profile_sigma(s, sigma);
    i64 v = 1;
    for (std::size_t i = 0; i < prof.exps.size(); ++i)
        v = checked_mul(v, checked_pow(s.modulus().prime(i), static_cast<unsigned>(prof.exps[i].size())));
    return v;
}

Multiset standard_set(const ScaleSet& s, const AssignmentFunction& sigma) {
    const auto& m = s.modulus();
    auto prof = exp_profile_sigma(s, sigma);
    Multiset out = Multiset::from_points(m, {0});
    for (std::size_t i = 0; i < m.rank(); ++i)
        for (int alpha : prof.exps[i]) {
            i64 p = m.prime(i);
            i64 step = checked_mul(m.cofactor(i), checked_pow(p, static_cast<unsigned>(alpha - 1)));
            std::vector<i64> pts;
            for (i64 nu = 0; nu < p; ++nu) pts.push_back(mulmod(nu, step, m.value()));
            out = convolve(out, Multiset::from_points(m, pts));
        }
    return out;
}

std::pair<i64, AssignmentFunction> fib_search(const ScaleSet& s) {
    const auto& m = s.modulus();
    const auto& scales = s.scales();
    std::size_t n = scales.size();
    struct Option {
        std::size_t prime;
        int exp;
    };
    std::vector<std::vector<Option>> options(n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < m.rank(); ++i) {
            int e = valuation(scales[k], m.prime(i));
            if (e > 0) options[k].push_back({i, e});
        }
    std::vector<std::vector<int>> used(m.rank());
    for (std::size_t i = 0; i < m.rank(); ++i) used[i].assign(static_cast<std::size_t>(m.exponent(i)) + 1, 0);
    std::vector<int> chosen(n, -1), best_choice;
    i64 best = std::numeric_limits<i64>::max();

    auto assign = [&](std::size_t k, int o) {
        chosen[k] = o;
        ++used[options[k][static_cast<std::size_t>(o)].prime][static_cast<std::size_t>(options[k][static_cast<std::size_t>(o)].exp)];
    };
    auto unassign = [&](std::size_t k) {
        const auto& op = options[k][static_cast<std::size_t>(chosen[k])];
        --used[op.prime][static_cast<std::size_t>(op.exp)];
        chosen[k] = -1;
    };

    std::function<void(i64)> dfs = [&](i64 cur) {
        if (cur >= best) return;
        // A scale whose exponent is already present in some direction costs nothing; take it.
        std::vector<std::size_t> forced;
        for (bool changed = true; changed;) {
            changed = false;
            for (std::size_t k = 0; k < n; ++k) {
                if (chosen[k] >= 0) continue;
                for (std::size_t o = 0; o < options[k].size(); ++o)
                    if (used[options[k][o].prime][static_cast<std::size_t>(options[k][o].exp)] > 0) {
                        assign(k, static_cast<int>(o));
                        forced.push_back(k);
                        changed = true;
                        break;
                    }
            }
        }
        std::size_t pick = n;
        for (std::size_t k = 0; k < n; ++k)
            if (chosen[k] < 0 && (pick == n || options[k].size() < options[pick].size())) pick = k;
        if (pick == n) {
            best = cur;
            best_choice = chosen;
        } else {
            for (std::size_t o = 0; o < options[pick].size(); ++o) {
                i64 next = checked_mul(cur, m.prime(options[pick][o].prime));
                if (next >= best) continue;
                assign(pick, static_cast<int>(o));
                dfs(next);
                unassign(pick);
            }
        }
        for (auto it = forced.rbegin(); it != forced.rend(); ++it) unassign(*it);
    };
    dfs(1);

    AssignmentFunction sigma;
    for (std::size_t k = 0; k < n; ++k)
        sigma.entries.emplace_back(scales[k], m.prime(options[k][static_cast<std::size_t>(best_choice[k])].prime));
    return {best, sigma};
}

FibResult fib(const ScaleSet& s) {
    auto [value, sigma] = fib_search(s);
    FibResult r{value, sigma, standard_set(s, sigma)};
    if (r.witness.mass() != value) throw Error(ErrorKind::Internal, "standard set has the wrong mass");
    for (auto [sc, p] : sigma.entries) {
        if (!divides(sc, r.witness)) throw Error(ErrorKind::Internal, "standard set misses Phi_" + std::to_string(sc));
        if (!is_fibered(r.witness, sc, p)) throw Error(ErrorKind::Internal, "standard set is not fibered on scale " + std::to_string(sc));
    }
    return r;
}

i64 forced_factor(const ScaleSet& s) {
    i64 f = 1;
    for (i64 sc : s.scales())
        if (is_prime_power(sc)) f = checked_mul(f, min_prime(sc));
    return f;
}

BoundReport analytic_lower_bounds(const ScaleSet& s) {
    BoundReport rep;
    const auto& scales = s.scales();
    std::set<i64> in_s(scales.begin(), scales.end());
    i64 l = s.lcm();
    auto primes = factorize(l);
    std::optional<i64> fib_cache;
    auto fib_of = [&]() {
        if (!fib_cache) fib_cache = fib_search(s).first;
        return *fib_cache;
    };
    auto add = [&](std::string rule, bool ok, i64 value, std::string cert) {
        rep.rules.push_back({std::move(rule), ok, ok ? value : 0, std::move(cert)});
        if (ok) rep.combined = std::max(rep.combined, value);
    };

    {
        i64 best = 0, at = 0;
        for (i64 sc : scales)
            if (min_prime(sc) > best) {
                best = min_prime(sc);
                at = sc;
            }
        add("lam-leung", true, best, "s=" + std::to_string(at));
    }
    {
        std::vector<i64> pp;
        for (i64 sc : scales)
            if (is_prime_power(sc)) pp.push_back(sc);
        add("prime-power-product", !pp.empty(), forced_factor(s), "scales=" + join(pp));
    }
    {
        // Longest product chain with s_j | D(s_{j+1}); scales are sorted ascending.
        std::size_t n = scales.size();
        std::vector<i64> val(n);
        std::vector<int> len(n), prev(n, -1);
        std::size_t arg = n;
        for (std::size_t j = 0; j < n; ++j) {
            val[j] = min_prime(scales[j]);
            len[j] = 1;
            i64 dj = radical_quotient(scales[j]);
            for (std::size_t i = 0; i < j; ++i)
                if (dj % scales[i] == 0 && checked_mul(val[i], min_prime(scales[j])) > val[j]) {
                    val[j] = checked_mul(val[i], min_prime(scales[j]));
                    len[j] = len[i] + 1;
                    prev[j] = static_cast<int>(i);
                }
            if (len[j] >= 2 && (arg == n || val[j] > val[arg])) arg = j;
        }
        std::vector<i64> chain;
        for (int k = arg == n ? -1 : static_cast<int>(arg); k >= 0; k = prev[static_cast<std::size_t>(k)]) chain.push_back(scales[static_cast<std::size_t>(k)]);
        std::reverse(chain.begin(), chain.end());
        add("diagonal-chain", arg != n, arg == n ? 0 : val[arg], "chain=" + join(chain));
    }
    {
        bool ok = primes.size() == 1 || primes[1].first > checked_pow(primes[0].first, static_cast<unsigned>(primes[0].second));
        i64 p1 = primes[0].first;
        std::set<int> ex;
        for (i64 sc : scales)
            if (int e = valuation(sc, p1); e > 0) ex.insert(e);
        add("growth", ok, checked_pow(p1, static_cast<unsigned>(ex.size())), "p1=" + std::to_string(p1));
    }
    bool two = primes.size() == 2;
    std::vector<std::set<int>> exps(2);
    if (two)
        for (i64 sc : scales)
            for (int i = 0; i < 2; ++i)
                if (int e = valuation(sc, primes[static_cast<std::size_t>(i)].first); e > 0) exps[static_cast<std::size_t>(i)].insert(e);
    auto pq = [&](int a, int b) {
        return checked_mul(checked_pow(primes[0].first, static_cast<unsigned>(a)), checked_pow(primes[1].first, static_cast<unsigned>(b)));
    };
    {
        bool ok = two;
        if (two)
            for (int a : exps[0])
                for (int a2 : exps[0])
                    for (int b : exps[1])
                        for (int b2 : exps[1])
                            if (a2 < a && b2 < b && in_s.count(pq(a, b)) && !in_s.count(pq(a2, b2)) && !in_s.count(pq(a2, b)) &&
                                !in_s.count(pq(a, b2)))
                                ok = false;
        add("exponent-ladder", ok, ok ? fib_of() : 0, "two primes, ladder condition");
    }
    {
        bool ok = two && (exps[0].size() <= 2 || exps[1].size() <= 2);
        add("two-exponents", ok, ok ? fib_of() : 0, "two primes, |EXP_i| <= 2");
    }
    {
        bool ok = two && scales.size() == 3;
        add("three-scales-two-primes", ok, ok ? fib_of() : 0, "two primes, |S| = 3");
    }
    // Boosted two-prime rules and the large-prime rule, in both prime orders.
    i64 above = 0, below = 0, large = 0;
    std::string above_cert, below_cert, large_cert;
    if (two) {
        for (int o = 0; o < 2; ++o) {
            i64 p = primes[static_cast<std::size_t>(o)].first, q = primes[static_cast<std::size_t>(1 - o)].first;
            std::vector<int> p_pows, q_pows;
            for (i64 sc : scales) {
                if (sc % q != 0) p_pows.push_back(valuation(sc, p));
                if (sc % p != 0) q_pows.push_back(valuation(sc, q));
            }
            for (i64 sc : scales) {
                int alpha = valuation(sc, p), beta = valuation(sc, q);
                if (alpha == 0 || beta == 0) continue;
                int r_above = static_cast<int>(std::count_if(p_pows.begin(), p_pows.end(), [&](int m) { return m > alpha; }));
                int r_below = static_cast<int>(std::count_if(p_pows.begin(), p_pows.end(), [&](int m) { return m < alpha; }));
                bool q_other = std::any_of(q_pows.begin(), q_pows.end(), [&](int g) { return g != beta; });
                bool q_lower = std::any_of(q_pows.begin(), q_pows.end(), [&](int g) { return g < beta; });
                i64 boost = checked_mul(q, std::min(p, q));
                if (r_above >= 1 && q_other) {
                    i64 v = checked_mul(checked_pow(p, static_cast<unsigned>(r_above)), boost);
                    if (v > above) {
                        above = v;
                        above_cert = "p=" + std::to_string(p) + ",s=" + std::to_string(sc);
                    }
                }
                if (r_below >= 1 && q_lower) {
                    i64 v = checked_mul(checked_pow(p, static_cast<unsigned>(r_below)), boost);
                    if (v > below) {
                        below = v;
                        below_cert = "p=" + std::to_string(p) + ",s=" + std::to_string(sc);
                    }
                }
            }
            // Runs of prime-power scales ending at the top exponents of lcm(S), and pq in S.
            int n_top = primes[static_cast<std::size_t>(o)].second, m_top = primes[static_cast<std::size_t>(1 - o)].second;
            auto run = [&](i64 base, int top) {
                int a = 0;
                while (a < top && in_s.count(checked_pow(base, static_cast<unsigned>(top - a)))) ++a;
                return a;
            };
            int a = std::min(run(p, n_top), n_top - 1);
            int b = std::min(run(q, m_top), m_top - 1);
            while (b >= 1 && checked_pow(q, static_cast<unsigned>(b)) >= p) --b;
            if (a >= 1 && b >= 1 && in_s.count(p * q)) {
                i64 v = checked_mul(2, checked_mul(checked_pow(p, static_cast<unsigned>(a)), checked_pow(q, static_cast<unsigned>(b))));
                if (v > large) {
                    large = v;
                    large_cert = "p=" + std::to_string(p) + ",a=" + std::to_string(a) + ",b=" + std::to_string(b);
                }
            }
        }
    }
    add("three-divisors", above > 0, above, above_cert);
    add("three-divisors-below", below > 0, below, below_cert);
    add("large-prime", large > 0, large, large_cert);
    return rep;
}

i64 MinResult::value() const {
    if (status != MinStatus::Optimal) throw Error(ErrorKind::Inapplicable, "MIN was only bounded: [" + std::to_string(lower) + ", " + std::to_string(upper) + "]");
    return upper;
}

namespace {

constexpr double kEps = 1e-9;
constexpr double kIntEps = 1e-6;
constexpr double kPivotEps = 1e-7;

// Dense simplex tableau; every column is a nonnegative variable.
class Tableau {
public:
    Tableau(int rows, int cols, int cap) : rows_(rows), cols_(cols), cap_(cap), t_(static_cast<std::size_t>(rows) * cap, 0.0), b_(rows, 0.0),
                                           obj_(cap, 0.0), basis_(rows, -1) {}

    double& at(int r, int c) { return t_[static_cast<std::size_t>(r) * cap_ + c]; }
    double at(int r, int c) const { return t_[static_cast<std::size_t>(r) * cap_ + c]; }
    double& rhs(int r) { return b_[r]; }
    double& obj(int c) { return obj_[c]; }
    double& obj_rhs() { return z_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int& basis(int r) { return basis_[r]; }
    double objective() const { return -z_; }

    int add_column() {
        if (cols_ == cap_) grow(cap_ + 64);
        return cols_++;
    }

    int add_row() {
        t_.resize(static_cast<std::size_t>(rows_ + 1) * cap_, 0.0);
        b_.push_back(0.0);
        basis_.push_back(-1);
        return rows_++;
    }

    void pivot(int r, int c) {
        double inv = 1.0 / at(r, c);
        double* pr = &t_[static_cast<std::size_t>(r) * cap_];
        for (int j = 0; j < cols_; ++j) pr[j] *= inv;
        b_[r] *= inv;
        pr[c] = 1.0;
        for (int i = 0; i < rows_; ++i) {
            if (i == r) continue;
            double f = at(i, c);
            if (std::abs(f) < 1e-14) continue;
            double* pi = &t_[static_cast<std::size_t>(i) * cap_];
            for (int j = 0; j < cols_; ++j) pi[j] -= f * pr[j];
            pi[c] = 0.0;
            b_[i] -= f * b_[r];
        }
        double f = obj_[c];
        if (f != 0.0) {
            for (int j = 0; j < cols_; ++j) obj_[j] -= f * pr[j];
            obj_[c] = 0.0;
            z_ -= f * b_[r];
        }
        basis_[r] = c;
    }

    // Returns false when unbounded.
    bool primal(const std::vector<char>& blocked) {
        bool bland = false;
        int degenerate = 0;
        for (int iter = 0; iter < 200000; ++iter) {
            int c = -1;
            for (int j = 0; j < cols_; ++j) {
                if (!blocked.empty() && j < static_cast<int>(blocked.size()) && blocked[j]) continue;
                if (obj_[j] < -kEps && (c < 0 || (!bland && obj_[j] < obj_[c]))) {
                    c = j;
                    if (bland) break;
                }
            }
            if (c < 0) return true;
            int r = -1;
            double best = 0;
            for (int i = 0; i < rows_; ++i) {
                double a = at(i, c);
                if (a <= kEps) continue;
                double ratio = b_[i] / a;
                if (r < 0 || ratio < best - kEps || (ratio < best + kEps && basis_[i] < basis_[r])) {
                    r = i;
                    best = ratio;
                }
            }
            if (r < 0) return false;
            degenerate = best < kEps ? degenerate + 1 : 0;
            if (degenerate > 50) bland = true;
            pivot(r, c);
        }
        throw Error(ErrorKind::Internal, "primal simplex did not converge");
    }

    enum class Dual { Optimal, Infeasible, Stalled };

    Dual dual() {
        for (int iter = 0; iter < 100000; ++iter) {
            bool bland = iter > 5000;
            int r = -1;
            for (int i = 0; i < rows_; ++i)
                if (b_[i] < -kIntEps * 1e-2 && (r < 0 || (bland ? basis_[i] < basis_[r] : b_[i] < b_[r]))) r = i;
            if (r < 0) return Dual::Optimal;
            int c = -1;
            double best = 0;
            for (int j = 0; j < cols_; ++j) {
                double a = at(r, j);
                if (a >= -kPivotEps) continue;
                double ratio = std::max(obj_[j], 0.0) / -a;
                if (c < 0 || ratio < best - kEps) {
                    c = j;
                    best = ratio;
                }
            }
            if (c < 0) return Dual::Infeasible;
            pivot(r, c);
        }
        return Dual::Stalled;
    }

    double value_of(int col) const {
        for (int i = 0; i < rows_; ++i)
            if (basis_[i] == col) return b_[i];
        return 0.0;
    }

    // Adds x_col <= k (upper) or x_col >= k (lower) with a fresh slack, leaving the tableau dual feasible.
    void add_bound(int col, bool upper, double k) {
        int basic_row = -1;
        for (int i = 0; i < rows_; ++i)
            if (basis_[i] == col) basic_row = i;
        int s = add_column();
        int r = add_row();
        double sigma = upper ? 1.0 : -1.0;
        if (basic_row >= 0) {
            for (int j = 0; j < cols_; ++j) at(r, j) = -sigma * at(basic_row, j);
            at(r, col) = 0.0;
            b_[r] = sigma * (k - b_[basic_row]);
        } else {
            at(r, col) = sigma;
            b_[r] = sigma * k;
        }
        at(r, s) = 1.0;
        obj_[s] = 0.0;
        basis_[r] = s;
    }

    void drop_row(int r) {
        for (int i = r; i + 1 < rows_; ++i) {
            std::copy_n(&t_[static_cast<std::size_t>(i + 1) * cap_], cap_, &t_[static_cast<std::size_t>(i) * cap_]);
            b_[i] = b_[i + 1];
            basis_[i] = basis_[i + 1];
        }
        --rows_;
        t_.resize(static_cast<std::size_t>(rows_) * cap_);
        b_.pop_back();
        basis_.pop_back();
    }

    // Keeps the first `keep` columns only (all must be nonbasic beyond them).
    void truncate_columns(int keep, int cap) {
        Tableau out(rows_, keep, cap);
        for (int i = 0; i < rows_; ++i) {
            std::copy_n(&t_[static_cast<std::size_t>(i) * cap_], keep, &out.t_[static_cast<std::size_t>(i) * cap]);
            out.b_[i] = b_[i];
            out.basis_[i] = basis_[i];
        }
        *this = std::move(out);
    }

private:
    void grow(int cap) {
        std::vector<double> t(static_cast<std::size_t>(rows_) * cap, 0.0);
        for (int i = 0; i < rows_; ++i) std::copy_n(&t_[static_cast<std::size_t>(i) * cap_], cols_, &t[static_cast<std::size_t>(i) * cap]);
        t_ = std::move(t);
        obj_.resize(cap, 0.0);
        cap_ = cap;
    }

    int rows_, cols_, cap_;
    std::vector<double> t_, b_, obj_;
    std::vector<int> basis_;
    double z_ = 0.0;
};

struct Search {
    i64 l;
    i64 factor;
    std::vector<i64> scales;
    std::vector<std::vector<std::vector<i64>>> rems;  // per scale: X^r mod Phi_s
    i64 max_nodes;

    std::mutex mu;
    std::atomic<i64> incumbent;
    std::atomic<i64> nodes{0};
    std::atomic<bool> aborted{false};
    std::atomic<bool> stalled{false};  // a node LP hit the pivot limit
    std::optional<std::vector<i64>> best;  // weights of the best solution found by the search
    i64 target = 0;  // stop once the incumbent reaches this certified lower bound

    bool verify(const std::vector<i64>& w) const {
        for (std::size_t k = 0; k < scales.size(); ++k) {
            i64 s = scales[k];
            std::vector<i64> acc(rems[k][0].size(), 0);
            for (i64 x = 0; x < l; ++x) {
                if (w[static_cast<std::size_t>(x)] == 0) continue;
                const auto& r = rems[k][static_cast<std::size_t>(x % s)];
                for (std::size_t j = 0; j < acc.size(); ++j) acc[j] = checked_add(acc[j], checked_mul(w[static_cast<std::size_t>(x)], r[j]));
            }
            if (std::any_of(acc.begin(), acc.end(), [](i64 v) { return v != 0; })) return false;
        }
        return true;
    }

    // Solves the node LP, then prunes, records or returns a branching column (-1 if done).
    int evaluate(Tableau& t, bool solved) {
        if (!solved) {
            auto st = t.dual();
            if (st == Tableau::Dual::Stalled) stalled = true;
            if (st != Tableau::Dual::Optimal) return -1;
        }
        double z = 1.0 + t.objective();
        if (ceil_multiple(z - kIntEps, factor) >= incumbent.load()) return -1;
        std::vector<double> x(static_cast<std::size_t>(l), 0.0);
        for (int i = 0; i < t.rows(); ++i)
            if (t.basis(i) < l) x[static_cast<std::size_t>(t.basis(i))] = t.rhs(i);
        x[0] += 1.0;
        int branch = -1;
        double best_frac = 0;
        for (i64 j = 0; j < l; ++j) {
            double f = x[static_cast<std::size_t>(j)] - std::floor(x[static_cast<std::size_t>(j)]);
            double d = std::min(f, 1.0 - f);
            if (d > kIntEps && d > best_frac + 1e-12) {
                best_frac = d;
                branch = static_cast<int>(j);
            }
        }
        if (branch >= 0) return branch;
        std::vector<i64> w(static_cast<std::size_t>(l));
        i64 mass = 0;
        for (i64 j = 0; j < l; ++j) {
            w[static_cast<std::size_t>(j)] = std::llround(x[static_cast<std::size_t>(j)]);
            mass += w[static_cast<std::size_t>(j)];
        }
        if (w[0] < 1 || !verify(w)) return -1;
        std::lock_guard<std::mutex> lock(mu);
        if (mass < incumbent.load()) {
            incumbent = mass;
            best = w;
        }
        return -1;
    }

    bool done() const { return aborted.load() || stalled.load() || incumbent.load() <= target; }

    void dfs(Tableau t, bool solved) {
        if (done()) return;
        if (nodes.fetch_add(1) >= max_nodes) {
            aborted = true;
            return;
        }
        int col = evaluate(t, solved);
        if (col < 0) return;
        double v = t.value_of(col) + (col == 0 ? 1.0 : 0.0);
        double shift = col == 0 ? 1.0 : 0.0;
        {
            Tableau up = t;
            up.add_bound(col, false, std::ceil(v) - shift);
            dfs(std::move(up), false);
        }
        t.add_bound(col, true, std::floor(v) - shift);
        dfs(std::move(t), false);
    }
};

} // namespace

MinResult min_exact(const ScaleSet& s, const MinOptions& opt) {
    MinResult res;
    i64 l = s.lcm();
    auto report = analytic_lower_bounds(s);
    i64 factor = forced_factor(s);
    res.lower = std::max(factor, ceil_multiple(static_cast<double>(report.combined), factor));
    if (l > opt.cap) {
        res.upper = fib_search(s).first;
        res.note = "lcm(S) = " + std::to_string(l) + " exceeds the solver cap " + std::to_string(opt.cap);
        // Matching bounds still settle MIN when the standard set fits in memory.
        if (res.lower == res.upper && l <= max_cells()) {
            res.witness = fib(ScaleSet::over_lcm(s.scales())).witness;
            res.status = MinStatus::Optimal;
            res.note += "; closed by the analytic lower bound";
        }
        return res;
    }
    ScaleSet over_l = ScaleSet::over_lcm(s.scales());
    auto f = fib(over_l);
    res.upper = f.value;
    res.witness = f.witness;
    if (opt.analytic_pruning && res.lower >= f.value) {
        res.status = MinStatus::Optimal;
        res.lower = f.value;
        res.note = "analytic lower bound meets FIB";
        return res;
    }
    if (!opt.analytic_pruning) res.lower = factor;

    Search sr;
    sr.l = l;
    sr.factor = factor;
    sr.scales = over_l.scales();
    sr.max_nodes = opt.max_nodes;
    int rows = 0;
    for (i64 sc : sr.scales) {
        sr.rems.push_back(power_remainders(sc));
        rows += static_cast<int>(sr.rems.back()[0].size());
    }
    i64 ceiling = f.value;
    if (opt.max_mass && *opt.max_mass < ceiling) ceiling = *opt.max_mass + 1;
    sr.incumbent = ceiling;
    sr.target = opt.analytic_pruning ? res.lower : factor;
    if (static_cast<i64>(rows) * (l + rows + 64) > opt.max_tableau_cells) {
        res.note = "tableau too large for exact search";
        return res;
    }

    // Equality rows R w' = -R e_0 with w_0 = 1 + w'_0, artificials for phase one.
    int n = static_cast<int>(l);
    Tableau t(rows, n + rows, n + rows);
    {
        int r = 0;
        for (std::size_t k = 0; k < sr.scales.size(); ++k) {
            i64 sc = sr.scales[k];
            std::size_t d = sr.rems[k][0].size();
            for (std::size_t j = 0; j < d; ++j, ++r) {
                double rhs = -static_cast<double>(sr.rems[k][0][j]);
                double sign = rhs < 0 ? -1.0 : 1.0;
                for (int x = 0; x < n; ++x) t.at(r, x) = sign * static_cast<double>(sr.rems[k][static_cast<std::size_t>(x % sc)][j]);
                t.rhs(r) = sign * rhs;
                t.at(r, n + r) = 1.0;
                t.basis(r) = n + r;
            }
        }
        for (int x = 0; x < n; ++x) {
            double c = 0;
            for (int i = 0; i < rows; ++i) c -= t.at(i, x);
            t.obj(x) = c;
        }
        double z = 0;
        for (int i = 0; i < rows; ++i) z -= t.rhs(i);
        t.obj_rhs() = z;
    }
    t.primal({});
    if (t.objective() > 1e-7) throw Error(ErrorKind::Internal, "phase one found no feasible point");
    for (int i = t.rows() - 1; i >= 0; --i) {
        if (t.basis(i) < n) continue;
        int c = -1;
        for (int j = 0; j < n; ++j)
            if (std::abs(t.at(i, j)) > 1e-7) {
                c = j;
                break;
            }
        if (c >= 0)
            t.pivot(i, c);
        else
            t.drop_row(i);
    }
    t.truncate_columns(n, n + 64);
    for (int j = 0; j < n; ++j) t.obj(j) = 1.0;
    t.obj_rhs() = 0.0;
    // Every basic column is structural with cost 1.
    for (int i = 0; i < t.rows(); ++i) {
        for (int j = 0; j < n; ++j) t.obj(j) -= t.at(i, j);
        t.obj_rhs() -= t.rhs(i);
    }
    if (!t.primal({})) throw Error(ErrorKind::Internal, "LP relaxation is unbounded");
    i64 root_bound = ceil_multiple(1.0 + t.objective() - kIntEps, factor);
    res.lower = std::max(res.lower, root_bound);
    sr.target = std::max(sr.target, root_bound);

    if (opt.workers <= 1) {
        sr.dfs(std::move(t), true);
    } else {
        // Breadth-first split of the root into a frontier, then parallel depth-first search.
        std::deque<std::pair<Tableau, bool>> frontier;
        frontier.emplace_back(std::move(t), true);
        std::vector<std::pair<Tableau, bool>> work;
        while (!frontier.empty() && frontier.size() + work.size() < static_cast<std::size_t>(opt.workers) * 4 && !sr.done()) {
            auto [node, solved] = std::move(frontier.front());
            frontier.pop_front();
            sr.nodes.fetch_add(1);
            int col = sr.evaluate(node, solved);
            if (col < 0) continue;
            double shift = col == 0 ? 1.0 : 0.0;
            double v = node.value_of(col) + shift;
            Tableau up = node;
            up.add_bound(col, false, std::ceil(v) - shift);
            node.add_bound(col, true, std::floor(v) - shift);
            frontier.emplace_back(std::move(up), false);
            frontier.emplace_back(std::move(node), false);
        }
        for (auto& item : frontier) work.push_back(std::move(item));
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int k = 0; k < opt.workers; ++k)
            pool.emplace_back([&]() {
                for (std::size_t i = next.fetch_add(1); i < work.size(); i = next.fetch_add(1))
                    sr.dfs(std::move(work[i].first), work[i].second);
            });
        for (auto& th : pool) th.join();
    }
    res.nodes = sr.nodes.load();

    i64 found = sr.incumbent.load();
    if (sr.best) res.witness = Multiset::from_dense(over_l.modulus(), *sr.best);
    if (sr.aborted.load() || sr.stalled.load()) {
        res.upper = sr.best ? found : f.value;
        res.note = sr.aborted.load() ? "node budget exhausted" : "node LP hit the pivot limit";
        return res;
    }
    if (!sr.best && ceiling < f.value) {
        res.lower = std::max(res.lower, ceil_multiple(static_cast<double>(ceiling), factor));
        res.note = "no multiset within the mass cap";
        return res;
    }
    res.status = MinStatus::Optimal;
    res.upper = sr.best ? found : f.value;
    res.lower = res.upper;
    auto divs = all_divisors(*res.witness);
    for (i64 sc : s.scales())
        if (!std::binary_search(divs.begin(), divs.end(), sc)) throw Error(ErrorKind::Internal, "MIN witness misses Phi_" + std::to_string(sc));
    if (res.witness->mass() != res.upper || !res.witness->is_nonnegative()) throw Error(ErrorKind::Internal, "MIN witness has the wrong mass");
    return res;
}

namespace {

// Depth-first enumeration of nondecreasing sequences 0 = e_1 <= e_2 <= ... in Z_l up to mass_cap,
// carrying per-scale remainder vectors. visit(mass, elements, zero_mask) returns false to stop descending.
struct Enumerator {
    i64 l;
    std::vector<i64> scales;
    std::vector<std::vector<std::vector<i64>>> rems;
    std::vector<std::vector<i64>> acc;
    std::vector<i64> elems;
    i64 leaves = 0;

    Enumerator(i64 l_, std::vector<i64> scales_) : l(l_), scales(std::move(scales_)) {
        for (i64 s : scales) {
            rems.push_back(power_remainders(s));
            acc.emplace_back(rems.back()[0].size(), 0);
        }
    }

    void apply(i64 x, i64 sign) {
        for (std::size_t k = 0; k < scales.size(); ++k) {
            const auto& r = rems[k][static_cast<std::size_t>(x % scales[k])];
            for (std::size_t j = 0; j < r.size(); ++j) acc[k][j] += sign * r[j];
        }
    }

    u64 zero_mask() const {
        u64 mask = 0;
        for (std::size_t k = 0; k < scales.size(); ++k)
            if (std::all_of(acc[k].begin(), acc[k].end(), [](i64 v) { return v == 0; })) mask |= u64{1} << k;
        return mask;
    }

    void run(i64 cap, const std::function<bool(i64, u64)>& visit) {
        elems.assign(1, 0);
        apply(0, 1);
        descend(cap, visit);
        apply(0, -1);
    }

    void descend(i64 cap, const std::function<bool(i64, u64)>& visit) {
        ++leaves;
        i64 mass = static_cast<i64>(elems.size());
        if (!visit(mass, zero_mask()) || mass == cap) return;
        for (i64 x = elems.back(); x < l; ++x) {
            elems.push_back(x);
            apply(x, 1);
            descend(cap, visit);
            apply(x, -1);
            elems.pop_back();
        }
    }
};

double leaf_estimate(i64 l, i64 cap) {
    double total = 0, c = 1;
    for (i64 m = 1; m <= cap; ++m) {
        total += c;  // C(l + m - 2, m - 1)
        c = c * static_cast<double>(l + m - 1) / static_cast<double>(m);
    }
    return total;
}

} // namespace

MinResult min_bruteforce(const ScaleSet& s, i64 mass_cap) {
    i64 l = s.lcm();
    if (mass_cap < 1) throw Error(ErrorKind::InvalidInput, "mass cap must be positive");
    if (leaf_estimate(l, mass_cap) > 2e9) throw Error(ErrorKind::CapExceeded, "brute-force enumeration too large");
    Enumerator en(l, ScaleSet::over_lcm(s.scales()).scales());
    u64 full = (u64{1} << en.scales.size()) - 1;
    MinResult res;
    res.upper = fib_search(s).first;
    std::optional<std::vector<i64>> found;
    for (i64 m = 1; m <= mass_cap && !found; ++m) {
        en.run(m, [&](i64 mass, u64 mask) {
            if (found) return false;
            if (mass == m && (mask & full) == full) found = en.elems;
            return mass < m;
        });
    }
    res.nodes = en.leaves;
    if (!found) {
        res.lower = mass_cap + 1;
        res.note = "no multiset within the mass cap";
        return res;
    }
    res.status = MinStatus::Optimal;
    res.upper = res.lower = static_cast<i64>(found->size());
    res.witness = Multiset::from_points(factor_modulus(l), *found);
    return res;
}

MinTable::MinTable(i64 m, i64 mass_cap) : modulus_(factor_modulus(m)), cap_(mass_cap) {
    if (mass_cap < 1 || mass_cap > 64) throw Error(ErrorKind::InvalidInput, "mass cap must lie in [1, 64]");
    for (i64 d : divisors_of(m))
        if (d != 1) scales_.push_back(d);
    if (scales_.size() > 20) throw Error(ErrorKind::CapExceeded, "too many divisors for a mask table");
    if (leaf_estimate(m, mass_cap) > 2e9) throw Error(ErrorKind::CapExceeded, "brute-force enumeration too large");
    std::size_t masks = std::size_t{1} << scales_.size();
    best_.assign(masks, 0);
    witness_.assign(masks, {});
    Enumerator en(m, scales_);
    en.run(mass_cap, [&](i64 mass, u64 mask) {
        int& b = best_[mask];
        if (b == 0 || mass < b) {
            b = static_cast<int>(mass);
            witness_[mask] = en.elems;
        }
        return true;
    });
    leaves_ = en.leaves;
    superset_best_ = best_;
    superset_arg_.resize(masks);
    for (std::size_t k = 0; k < masks; ++k) superset_arg_[k] = k;
    for (std::size_t bit = 0; bit < scales_.size(); ++bit)
        for (std::size_t k = 0; k < masks; ++k) {
            if (k & (std::size_t{1} << bit)) continue;
            std::size_t up = k | (std::size_t{1} << bit);
            int v = superset_best_[up];
            if (v != 0 && (superset_best_[k] == 0 || v < superset_best_[k])) {
                superset_best_[k] = v;
                superset_arg_[k] = superset_arg_[up];
            }
        }
}

MinResult MinTable::lookup(const ScaleSet& s) const {
    std::size_t mask = 0;
    for (i64 sc : s.scales()) {
        auto it = std::lower_bound(scales_.begin(), scales_.end(), sc);
        if (it == scales_.end() || *it != sc) throw Error(ErrorKind::InvalidScale, std::to_string(sc) + " does not divide " + std::to_string(modulus_.value()));
        mask |= std::size_t{1} << (it - scales_.begin());
    }
    MinResult res;
    res.upper = fib_search(s).first;
    int v = superset_best_[mask];
    if (v == 0) {
        res.lower = cap_ + 1;
        res.note = "no multiset within the mass cap";
        return res;
    }
    res.status = MinStatus::Optimal;
    res.lower = res.upper = v;
    i64 l = s.lcm();
    Multiset w = Multiset::from_points(modulus_, witness_[superset_arg_[mask]]);
    res.witness = reduce_mod(w, l);
    return res;
}

} // namespace cyclo
