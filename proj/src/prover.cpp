#include "relunif/prover.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace relunif {

namespace {

struct Bits {
    std::vector<std::uint64_t> w;
    explicit Bits(std::size_t n = 0) : w((n + 63) / 64, 0) {}
    bool test(int i) const { return (w[static_cast<std::size_t>(i) >> 6] >> (i & 63)) & 1u; }
    void set(int i) { w[static_cast<std::size_t>(i) >> 6] |= 1ULL << (i & 63); }
    friend bool operator==(const Bits&, const Bits&) = default;
};

struct KeyHash {
    std::size_t operator()(const std::pair<Bits, Bits>& k) const {
        std::size_t h = 0xcbf29ce484222325ULL;
        for (auto x : k.first.w) h = (h ^ x) * 0x100000001b3ULL;
        for (auto x : k.second.w) h = (h ^ (x * 31 + 7)) * 0x100000001b3ULL;
        return h;
    }
};

struct Closure {
    std::vector<Formula> f;
    std::vector<Kind> kind;
    std::vector<int> l, r;
    std::vector<std::vector<int>> parents;
    std::unordered_map<Formula, int> index;
    std::vector<int> atoms;

    explicit Closure(const std::vector<Formula>& roots) {
        f = subformulas(roots);
        const int n = static_cast<int>(f.size());
        kind.resize(n);
        l.assign(n, -1);
        r.assign(n, -1);
        parents.resize(n);
        for (int i = 0; i < n; ++i) index.emplace(f[i], i);
        for (int i = 0; i < n; ++i) {
            kind[i] = f[i].kind();
            if (f[i].is_atom()) atoms.push_back(i);
            if (kind[i] == Kind::And || kind[i] == Kind::Or || kind[i] == Kind::Imp) {
                l[i] = index.at(f[i].lhs());
                r[i] = index.at(f[i].rhs());
                parents[l[i]].push_back(i);
                if (r[i] != l[i]) parents[r[i]].push_back(i);
            }
        }
    }
    int size() const { return static_cast<int>(f.size()); }
};

std::atomic<std::uint64_t> g_worlds{0};

class Search {
public:
    explicit Search(const Closure& c) : c_(c) {}

    // Returns the id of a built world refuting (T, F), or -1.
    int refute(const Bits& t, const Bits& f) {
        auto key = std::make_pair(t, f);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        g_worlds.fetch_add(1, std::memory_order_relaxed);
        Bits tt = t, ff = f;
        std::vector<int> queue;
        for (int i = 0; i < c_.size(); ++i)
            if (tt.test(i) || ff.test(i)) queue.push_back(i);
        int res = explore(std::move(tt), std::move(ff), std::move(queue));
        memo_.emplace(std::move(key), res);
        return res;
    }

    KripkeModel build(int id) const {
        KripkeModel k(world_atoms(id));
        attach(k, 0, id);
        return k;
    }

private:
    struct Built {
        Bits t;
        std::vector<int> kids;
    };

    AtomSet world_atoms(int id) const {
        std::vector<Atom> xs;
        for (int a : c_.atoms)
            if (built_[id].t.test(a)) xs.push_back(c_.f[a].atom());
        return AtomSet(std::move(xs));
    }

    void attach(KripkeModel& k, int at, int id) const {
        for (int kid : built_[id].kids) {
            int n = k.add_child(at, world_atoms(kid));
            attach(k, n, kid);
        }
    }

    // Signs formula j; false on a direct clash.
    bool sign(Bits& mine, const Bits& other, int j, std::vector<int>& queue) {
        if (mine.test(j)) return true;
        if (other.test(j)) return false;
        mine.set(j);
        queue.push_back(j);
        for (int p : c_.parents[j]) queue.push_back(p);
        return true;
    }

    bool saturate(Bits& t, Bits& f, std::vector<int>& queue) {
        while (!queue.empty()) {
            int i = queue.back();
            queue.pop_back();
            bool ti = t.test(i), fi = f.test(i);
            if (ti && fi) return false;
            const int l = c_.l[i], r = c_.r[i];
            if (ti) {
                switch (c_.kind[i]) {
                    case Kind::Bot:
                        return false;
                    case Kind::And:
                        if (!sign(t, f, l, queue) || !sign(t, f, r, queue)) return false;
                        break;
                    case Kind::Or:
                        if (t.test(l) || t.test(r)) break;
                        if (f.test(l) && !sign(t, f, r, queue)) return false;
                        if (f.test(r) && !sign(t, f, l, queue)) return false;
                        break;
                    case Kind::Imp:
                        if (t.test(l) && !sign(t, f, r, queue)) return false;
                        if (f.test(r) && !sign(f, t, l, queue)) return false;
                        break;
                    default:
                        break;
                }
            } else if (fi) {
                switch (c_.kind[i]) {
                    case Kind::Or:
                        if (!sign(f, t, l, queue) || !sign(f, t, r, queue)) return false;
                        break;
                    case Kind::And:
                        if (f.test(l) || f.test(r)) break;
                        if (t.test(l) && !sign(f, t, r, queue)) return false;
                        if (t.test(r) && !sign(f, t, l, queue)) return false;
                        break;
                    case Kind::Imp:
                        if (t.test(l) && !sign(f, t, r, queue)) return false;
                        break;
                    default:
                        break;
                }
            }
        }
        return true;
    }

    int explore(Bits t, Bits f, std::vector<int> queue) {
        if (!saturate(t, f, queue)) return -1;
        // Pick an undecided disjunctive obligation.
        for (int i = 0; i < c_.size(); ++i) {
            const int l = c_.l[i], r = c_.r[i];
            int opt_sign[2];
            int opt_form[2];
            bool branch = false;
            if (t.test(i) && c_.kind[i] == Kind::Or && !t.test(l) && !t.test(r)) {
                opt_sign[0] = opt_sign[1] = 1;
                opt_form[0] = l;
                opt_form[1] = r;
                branch = true;
            } else if (f.test(i) && c_.kind[i] == Kind::And && !f.test(l) && !f.test(r)) {
                opt_sign[0] = opt_sign[1] = 0;
                opt_form[0] = l;
                opt_form[1] = r;
                branch = true;
            } else if (t.test(i) && c_.kind[i] == Kind::Imp && !f.test(l) && !t.test(r)) {
                opt_sign[0] = 0;
                opt_form[0] = l;
                opt_sign[1] = 1;
                opt_form[1] = r;
                branch = true;
            }
            if (!branch) continue;
            for (int k = 0; k < 2; ++k) {
                Bits t2 = t, f2 = f;
                std::vector<int> q;
                bool ok = opt_sign[k] ? sign(t2, f2, opt_form[k], q) : sign(f2, t2, opt_form[k], q);
                if (!ok) continue;
                int res = explore(std::move(t2), std::move(f2), std::move(q));
                if (res >= 0) return res;
            }
            return -1;
        }
        std::vector<int> kids;
        for (int i = 0; i < c_.size(); ++i) {
            if (!f.test(i) || c_.kind[i] != Kind::Imp || t.test(c_.l[i])) continue;
            Bits t2 = t;
            t2.set(c_.l[i]);
            Bits f2(static_cast<std::size_t>(c_.size()));
            f2.set(c_.r[i]);
            int kid = refute(t2, f2);
            if (kid < 0) return -1;
            if (std::find(kids.begin(), kids.end(), kid) == kids.end()) kids.push_back(kid);
        }
        built_.push_back({std::move(t), std::move(kids)});
        return static_cast<int>(built_.size()) - 1;
    }

    const Closure& c_;
    std::unordered_map<std::pair<Bits, Bits>, int, KeyHash> memo_;
    std::vector<Built> built_;
};

std::optional<KripkeModel> classical_countermodel(const Closure& c, const std::vector<int>& assume, int goal) {
    if (c.atoms.size() > 10) return std::nullopt;
    const int n = c.size();
    std::vector<char> v(n);
    for (unsigned mask = 0; mask < (1u << c.atoms.size()); ++mask) {
        for (int i = 0; i < n; ++i) {
            switch (c.kind[i]) {
                case Kind::Bot:
                    v[i] = 0;
                    break;
                case Kind::Var:
                case Kind::Par: {
                    auto pos = std::find(c.atoms.begin(), c.atoms.end(), i) - c.atoms.begin();
                    v[i] = (mask >> pos) & 1u;
                    break;
                }
                case Kind::And:
                    v[i] = v[c.l[i]] && v[c.r[i]];
                    break;
                case Kind::Or:
                    v[i] = v[c.l[i]] || v[c.r[i]];
                    break;
                case Kind::Imp:
                    v[i] = !v[c.l[i]] || v[c.r[i]];
                    break;
            }
        }
        if (v[goal]) continue;
        if (std::all_of(assume.begin(), assume.end(), [&](int a) { return v[a] != 0; })) {
            std::vector<Atom> xs;
            for (std::size_t k = 0; k < c.atoms.size(); ++k)
                if (mask >> k & 1u) xs.push_back(c.f[c.atoms[k]].atom());
            return KripkeModel(AtomSet(std::move(xs)));
        }
    }
    return std::nullopt;
}

struct CacheKey {
    std::vector<std::uint32_t> assume;
    std::uint32_t goal;
    friend bool operator==(const CacheKey&, const CacheKey&) = default;
};
struct CacheKeyHash {
    std::size_t operator()(const CacheKey& k) const {
        std::size_t h = k.goal * 0x9e3779b97f4a7c15ULL;
        for (auto a : k.assume) h = (h ^ a) * 0x100000001b3ULL;
        return h;
    }
};

std::shared_mutex g_cache_mu;
std::unordered_map<CacheKey, ProofResult, CacheKeyHash> g_cache;
std::atomic<std::uint64_t> g_calls{0};
std::atomic<std::uint64_t> g_hits{0};

const bool g_hooked = [] {
    on_formula_truncate([](std::uint32_t mark) {
        std::unique_lock lock(g_cache_mu);
        std::erase_if(g_cache, [mark](const auto& kv) {
            if (kv.first.goal >= mark) return true;
            return !kv.first.assume.empty() && kv.first.assume.back() >= mark;
        });
    });
    return true;
}();

}  // namespace

ProofResult prove_uncached(const std::vector<Formula>& assumptions, Formula goal) {
    std::vector<Formula> roots = assumptions;
    roots.push_back(goal);
    Closure c(roots);
    std::vector<int> assume;
    for (Formula a : assumptions) assume.push_back(c.index.at(a));
    const int g = c.index.at(goal);
    if (auto k = classical_countermodel(c, assume, g)) return {false, std::move(k)};
    Search s(c);
    Bits t(static_cast<std::size_t>(c.size())), f(static_cast<std::size_t>(c.size()));
    for (int a : assume) t.set(a);
    f.set(g);
    int root = s.refute(t, f);
    if (root < 0) return {true, std::nullopt};
    return {false, s.build(root)};
}

ProofResult prove(const std::vector<Formula>& assumptions, Formula goal) {
    g_calls.fetch_add(1, std::memory_order_relaxed);
    CacheKey key{{}, goal.id()};
    for (Formula a : assumptions) key.assume.push_back(a.id());
    std::sort(key.assume.begin(), key.assume.end());
    key.assume.erase(std::unique(key.assume.begin(), key.assume.end()), key.assume.end());
    {
        std::shared_lock lock(g_cache_mu);
        auto it = g_cache.find(key);
        if (it != g_cache.end()) {
            g_hits.fetch_add(1, std::memory_order_relaxed);
            return it->second;
        }
    }
    ProofResult res = prove_uncached(assumptions, goal);
    std::unique_lock lock(g_cache_mu);
    g_cache.emplace(std::move(key), res);
    return res;
}

ProofResult prove(Formula goal) { return prove({}, goal); }
bool provable(const std::vector<Formula>& assumptions, Formula goal) { return prove(assumptions, goal).theorem; }
bool provable(Formula goal) { return prove({}, goal).theorem; }

bool equiv(Formula a, Formula b) {
    if (a == b) return true;
    return provable({a}, b) && provable({b}, a);
}

ProverStats prover_stats() { return {g_calls.load(), g_hits.load(), g_worlds.load()}; }

void clear_prover_cache() {
    std::unique_lock lock(g_cache_mu);
    g_cache.clear();
}

}  // namespace relunif
