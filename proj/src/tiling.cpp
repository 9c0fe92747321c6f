#include "spindle/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace spindle {

ArcTable::ArcTable(int m, double init) : m_(m), f_(static_cast<std::size_t>(m) * m, init) {
    if (m < 3) throw std::invalid_argument("ArcTable: m must be >= 3");
    for (int i = 0; i < m; ++i) f_[static_cast<std::size_t>(i) * m + i] = 0.0;
}

void ArcTable::set(int i, int j, double v) {
    i = mod(i);
    j = mod(j);
    if (i == j && v != 0.0) throw std::invalid_argument("ArcTable: f(i,i) must stay 0");
    f_[static_cast<std::size_t>(i) * m_ + j] = v;
}

bool ArcTable::rotation_invariant(int s, double tol) const {
    for (int i = 0; i < m_; ++i)
        for (int j = 0; j < m_; ++j) {
            double a = at(i, j), b = at(i + s, j + s);
            if (std::isfinite(a) != std::isfinite(b)) return false;
            if (std::isfinite(a) && std::abs(a - b) > tol * (1.0 + std::abs(a))) return false;
        }
    return true;
}

ArcTable ArcTable::read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("ArcTable CSV: missing header");
    int m = std::stoi(line);
    ArcTable t(m);
    for (int i = 0; i < m; ++i) {
        if (!std::getline(in, line)) throw std::runtime_error("ArcTable CSV: missing row");
        std::stringstream ss(line);
        std::string tok;
        for (int j = 0; j < m; ++j) {
            if (!std::getline(ss, tok, ',')) throw std::runtime_error("ArcTable CSV: short row");
            double v;
            if (tok == "inf" || tok == "+inf")
                v = std::numeric_limits<double>::infinity();
            else if (tok == "-inf")
                v = -std::numeric_limits<double>::infinity();
            else
                v = std::stod(tok);
            if (i == j) v = 0.0;
            t.set(i, j, v);
        }
    }
    return t;
}

void ArcTable::write_csv(std::ostream& out) const {
    out << m_ << "\n";
    char buf[64];
    for (int i = 0; i < m_; ++i) {
        for (int j = 0; j < m_; ++j) {
            double v = at(i, j);
            if (j) out << ',';
            if (std::isinf(v))
                out << (v > 0 ? "inf" : "-inf");
            else {
                std::snprintf(buf, sizeof buf, "%.17g", v);
                out << buf;
            }
        }
        out << "\n";
    }
}

bool Tiling::valid(int m) const {
    if (endpoints.size() < 3) return false;
    for (std::size_t i = 0; i < endpoints.size(); ++i) {
        if (endpoints[i] < 0 || endpoints[i] >= m) return false;
        if (i && endpoints[i] <= endpoints[i - 1]) return false;
    }
    return true;
}

double tiling_value(const Tiling& t, const ArcTable& table) {
    int n = t.n();
    double acc = 0.0;
    for (int i = n - 1; i >= 0; --i) acc = table.at(t.endpoints[i], t.endpoints[(i + 1) % n]) + acc;
    return acc;
}

namespace {

inline bool better(double cand, double best, Sense s) {
    return s == Sense::Max ? cand > best : cand < best;
}

inline double worst_value(Sense s) {
    return s == Sense::Max ? -std::numeric_limits<double>::infinity()
                           : std::numeric_limits<double>::infinity();
}

// h[k][j] = best value of k arcs from j back to anchor s (edges strictly
// increasing in (j, m)), computed right-to-left so stored values are suffix
// sums; used both for the anchored sweep and the greedy reconstruction.
void fill_backward(const ArcTable& f, int s, int n, Sense sense, std::vector<double>& h) {
    int m = f.m();
    double worst = worst_value(sense);
    std::fill(h.begin(), h.end(), worst);
    auto H = [&](int k, int j) -> double& { return h[static_cast<std::size_t>(k - 1) * m + j]; };
    for (int j = s + 1; j < m; ++j) {
        double fj = f.at(j, s);
        if (std::isfinite(fj)) H(1, j) = fj;
    }
    for (int k = 2; k < n; ++k)
        for (int j = s + 1; j + k - 1 < m; ++j) {
            double best = worst;
            for (int l = j + 1; l < m; ++l) {
                double prev = H(k - 1, l);
                if (prev == worst) continue;
                double fj = f.at(j, l);
                if (!std::isfinite(fj)) continue;
                double cand = fj + prev;
                if (better(cand, best, sense)) best = cand;
            }
            H(k, j) = best;
        }
}

double anchored_value(const ArcTable& f, int s, int n, Sense sense, const std::vector<double>& h) {
    int m = f.m();
    double worst = worst_value(sense);
    const double* hn = h.data() + static_cast<std::size_t>(n - 2) * m;
    double best = worst;
    for (int l = s + 1; l < m; ++l) {
        double prev = hn[l];
        if (prev == worst) continue;
        double fl = f.at(s, l);
        if (!std::isfinite(fl)) continue;
        double cand = fl + prev;
        if (better(cand, best, sense)) best = cand;
    }
    return best;
}

}  // namespace

std::optional<TilingOpt> optimize_tiling(const ArcTable& table, int n, Sense sense) {
    int m = table.m();
    if (n < 3 || n > m) throw std::invalid_argument("optimize_tiling: need 3 <= n <= m");
    double worst = worst_value(sense);

    std::vector<double> h(static_cast<std::size_t>(n - 1) * m);
    double best = worst;
    int best_anchor = -1;
    for (int s = 0; s + n <= m; ++s) {
        fill_backward(table, s, n, sense, h);
        double v = anchored_value(table, s, n, sense, h);
        if (v != worst && (best_anchor < 0 || better(v, best, sense))) {
            best = v;
            best_anchor = s;
        }
    }
    if (best_anchor < 0) return std::nullopt;

    // Greedy front reconstruction at the winning anchor: smallest next
    // endpoint whose arc value plus stored suffix reproduces the optimum
    // bitwise. Yields the lexicographically smallest optimal sequence.
    fill_backward(table, best_anchor, n, sense, h);
    auto H = [&](int k, int j) { return h[static_cast<std::size_t>(k - 1) * m + j]; };
    Tiling t;
    t.endpoints.reserve(n);
    t.endpoints.push_back(best_anchor);
    double remaining = best;
    int cur = best_anchor;
    for (int k = n; k >= 2; --k) {
        int pick = -1;
        for (int l = cur + 1; l < m; ++l) {
            double suffix = H(k - 1, l);
            if (suffix == worst) continue;
            double fj = table.at(cur, l);
            if (!std::isfinite(fj)) continue;
            if (fj + suffix == remaining) {
                pick = l;
                remaining = suffix;
                break;
            }
        }
        if (pick < 0) throw std::logic_error("optimize_tiling: reconstruction failed");
        t.endpoints.push_back(pick);
        cur = pick;
    }
    return TilingOpt{std::move(t), best};
}

MongeReport monge_check(const ArcTable& table, Sense sense, unsigned sample_seed) {
    int m = table.m();
    MongeReport rep;
    rep.sense = sense;
    rep.m = m;
    rep.worst_margin = std::numeric_limits<double>::infinity();

    auto margin_of = [&](int x1, int x2, int x3, int x4) -> double {
        double a = table.at(x1, x3), b = table.at(x2, x4), c = table.at(x1, x4), d = table.at(x2, x3);
        if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(d))
            return std::numeric_limits<double>::quiet_NaN();
        double mg = a + b - c - d;
        return sense == Sense::Max ? mg : -mg;
    };
    auto consider = [&](int x1, int x2, int x3, int x4) {
        double mg = margin_of(x1, x2, x3, x4);
        if (std::isnan(mg)) return;
        ++rep.checked;
        if (mg < rep.worst_margin) {
            rep.worst_margin = mg;
            rep.worst_quad = {x1, x2, x3, x4};
        }
    };

    if (m <= 64) {
        for (int a = 0; a < m; ++a)
            for (int b = a + 1; b < m; ++b)
                for (int c = b + 1; c < m; ++c)
                    for (int d = c + 1; d < m; ++d) {
                        consider(a, b, c, d);
                        consider(b, c, d, a);
                        consider(c, d, a, b);
                        consider(d, a, b, c);
                    }
    } else {
        rep.exhaustive = false;
        std::mt19937 rng(sample_seed);
        std::uniform_int_distribution<int> pick(0, m - 1);
        const long long samples = 200000;
        for (long long it = 0; it < samples; ++it) {
            int v[4] = {pick(rng), pick(rng), pick(rng), pick(rng)};
            std::sort(v, v + 4);
            if (v[0] == v[1] || v[1] == v[2] || v[2] == v[3]) continue;
            int r = pick(rng) % 4;
            consider(v[r % 4], v[(r + 1) % 4], v[(r + 2) % 4], v[(r + 3) % 4]);
        }
    }
    if (rep.checked == 0) rep.worst_margin = 0.0;

    rep.mixed_diff.assign(static_cast<std::size_t>(m) * m, std::numeric_limits<double>::quiet_NaN());
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            int i1 = (i + 1) % m, j1 = (j + 1) % m;
            // All four corner arcs must be proper (nonempty, not wrapping onto
            // themselves): skip j in {i, i+1} and j+1 == i.
            if (j == i || j == i1 || j1 == i) continue;
            double a = table.at(i, j), b = table.at(i1, j1), c = table.at(i1, j), d = table.at(i, j1);
            if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(d)) continue;
            rep.mixed_diff[static_cast<std::size_t>(i) * m + j] = a + b - c - d;
        }
    return rep;
}

namespace {

// A merged multi-tiling: endpoint instances sorted by grid value (ties by
// source), each position starting exactly one arc.
struct MultiTiling {
    int m = 0;
    std::vector<int> value;    // grid value per position
    std::vector<int> arc_end;  // position where the arc starting here ends

    int p() const { return static_cast<int>(value.size()); }

    int span(int pos) const {  // grid length of the arc starting at pos
        int d = value[arc_end[pos]] - value[pos];
        return ((d % m) + m) % m == 0 ? m : ((d % m) + m) % m;
    }

    static MultiTiling merge(const std::vector<const Tiling*>& tilings, int m) {
        MultiTiling mt;
        mt.m = m;
        std::vector<std::pair<int, int>> items;  // (value, source)
        for (std::size_t s = 0; s < tilings.size(); ++s)
            for (int e : tilings[s]->endpoints) items.push_back({e, static_cast<int>(s)});
        std::sort(items.begin(), items.end());
        int p = static_cast<int>(items.size());
        mt.value.resize(p);
        mt.arc_end.assign(p, -1);
        for (int i = 0; i < p; ++i) mt.value[i] = items[i].first;
        // Arc from each endpoint to the next endpoint of the same source.
        std::vector<std::vector<int>> by_src(tilings.size());
        for (int i = 0; i < p; ++i) by_src[items[i].second].push_back(i);
        for (auto& posns : by_src)
            for (std::size_t i = 0; i < posns.size(); ++i)
                mt.arc_end[posns[i]] = posns[(i + 1) % posns.size()];
        return mt;
    }

    // Positions i<k<l<j strictly (cyclically): arc at a covers arc at b.
    bool covers(int a, int b) const {
        int p_ = p();
        int da = (arc_end[a] - a + p_) % p_;  // unrolled length of arc a in positions
        if (da == 0) da = p_;
        int db = (arc_end[b] - b + p_) % p_;
        if (db == 0) db = p_;
        int d = (b - a + p_) % p_;
        return d >= 1 && d + db < da;
    }

    // Replace covering pair (a covers b) by the uncrossed exchange.
    void exchange(int a, int b) { std::swap(arc_end[a], arc_end[b]); }

    std::optional<std::pair<int, int>> find_covering() const {
        for (int a = 0; a < p(); ++a)
            for (int b = 0; b < p(); ++b)
                if (a != b && covers(a, b)) return std::make_pair(a, b);
        return std::nullopt;
    }

    double total(const ArcTable& f) const {
        double s = 0.0;
        for (int i = 0; i < p(); ++i) s += f.at(value[i], value[arc_end[i]]);
        return s;
    }

    int uncross_all() {
        int steps = 0;
        int cap = p() * p() + 8;
        while (auto pr = find_covering()) {
            exchange(pr->first, pr->second);
            if (++steps > cap) throw std::logic_error("uncross: step cap exceeded");
        }
        return steps;
    }

    // After uncrossing, arcs go from position i to i+k; residue classes mod k
    // are the decomposed tilings.
    std::vector<Tiling> decompose(int k) const {
        int p_ = p();
        for (int i = 0; i < p_; ++i)
            if (arc_end[i] != (i + k) % p_) throw std::logic_error("decompose: not interleaved");
        std::vector<Tiling> out(k);
        for (int r = 0; r < k; ++r) {
            for (int i = r; i < p_; i += k) out[r].endpoints.push_back(value[i]);
            std::sort(out[r].endpoints.begin(), out[r].endpoints.end());
            if (!out[r].valid(m)) throw std::logic_error("decompose: invalid residue tiling");
        }
        return out;
    }
};

}  // namespace

UncrossResult uncross(const Tiling& a, const Tiling& b, const ArcTable& table) {
    int m = table.m();
    if (!a.valid(m) || !b.valid(m)) throw std::invalid_argument("uncross: invalid tilings");
    // Sizes n-1 and n+1 give two n-tilings; equal sizes are allowed and cover
    // the already-interleaved identity case.
    if (b.n() != a.n() + 2 && b.n() != a.n())
        throw std::invalid_argument("uncross: need sizes n-1 and n+1 (or equal)");
    UncrossResult res;
    res.sum_before = tiling_value(a, table) + tiling_value(b, table);
    MultiTiling mt = MultiTiling::merge({&a, &b}, m);
    res.steps = mt.uncross_all();
    auto parts = mt.decompose(2);
    res.first = parts[0];
    res.second = parts[1];
    res.sum_after = tiling_value(res.first, table) + tiling_value(res.second, table);
    double scale = std::abs(res.sum_before) + std::abs(res.sum_after) + 1.0;
    res.monge_ok = res.sum_after >= res.sum_before - 1e-9 * scale;
    return res;
}

SymmetrizeResult symmetrize(const ArcTable& table, int n, int k, Sense sense) {
    int m = table.m();
    if (k < 2 || n % k != 0 || m % k != 0)
        throw std::invalid_argument("symmetrize: need k >= 2, k | n, k | m");
    double maxabs = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (std::isfinite(table.at(i, j))) maxabs = std::max(maxabs, std::abs(table.at(i, j)));
    if (!table.rotation_invariant(m / k, 1e-9 * (1.0 + maxabs)))
        throw std::invalid_argument("symmetrize: table not invariant under rotation by m/k");

    auto opt = optimize_tiling(table, n, sense);
    if (!opt) throw std::domain_error("symmetrize: no feasible tiling");

    SymmetrizeResult res;
    res.unrestricted = opt->value;

    auto is_symmetric = [&](const Tiling& t) {
        std::vector<int> rot;
        for (int e : t.endpoints) rot.push_back((e + m / k) % m);
        std::sort(rot.begin(), rot.end());
        return rot == t.endpoints;
    };
    if (is_symmetric(opt->tiling)) {
        res.tiling = opt->tiling;
        res.value = opt->value;
        return res;
    }

    std::vector<Tiling> copies(k);
    for (int j = 0; j < k; ++j) {
        for (int e : opt->tiling.endpoints) copies[j].endpoints.push_back((e + j * (m / k)) % m);
        std::sort(copies[j].endpoints.begin(), copies[j].endpoints.end());
    }
    std::vector<const Tiling*> ptrs;
    for (auto& c : copies) ptrs.push_back(&c);
    MultiTiling mt = MultiTiling::merge(ptrs, m);
    res.uncross_steps = mt.uncross_all();
    auto parts = mt.decompose(k);

    // Every residue class attains the unrestricted optimum; pick the
    // lexicographically smallest symmetric one.
    const Tiling* best = nullptr;
    for (const auto& part : parts) {
        if (!is_symmetric(part)) continue;
        if (!best || part.endpoints < best->endpoints) best = &part;
    }
    if (!best) throw std::logic_error("symmetrize: no symmetric residue tiling");
    res.tiling = *best;
    res.value = tiling_value(res.tiling, table);
    return res;
}

}  // namespace spindle
