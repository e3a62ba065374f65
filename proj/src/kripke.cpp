#include "relunif/kripke.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <set>

#include "relunif/errors.hpp"
#include "relunif/syntax.hpp"

namespace relunif {

NodeSet::NodeSet(std::size_t n, bool value) : n_(n), w_((n + 63) / 64, value ? ~0ULL : 0ULL) {
    if (value && n % 64) w_.back() &= (1ULL << (n % 64)) - 1;
}

void NodeSet::set(std::size_t i, bool v) {
    if (v)
        w_[i >> 6] |= 1ULL << (i & 63);
    else
        w_[i >> 6] &= ~(1ULL << (i & 63));
}

NodeSet& NodeSet::operator&=(const NodeSet& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    return *this;
}

NodeSet& NodeSet::operator|=(const NodeSet& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
}

NodeSet NodeSet::operator~() const {
    NodeSet r = *this;
    for (auto& x : r.w_) x = ~x;
    if (n_ % 64) r.w_.back() &= (1ULL << (n_ % 64)) - 1;
    return r;
}

bool NodeSet::any() const {
    return std::any_of(w_.begin(), w_.end(), [](std::uint64_t x) { return x != 0; });
}

bool NodeSet::all() const { return !(~*this).any(); }

KripkeModel::KripkeModel(AtomSet root_valuation)
    : parent_{-1}, children_(1), valuation_{std::move(root_valuation)} {}

KripkeModel KripkeModel::from_parents(const std::vector<int>& parent, const std::vector<AtomSet>& valuation) {
    const int n = static_cast<int>(parent.size());
    if (n == 0) throw InputError("model has no nodes");
    if (valuation.size() != parent.size()) throw InputError("valuation size mismatch");
    int root = -1;
    std::vector<std::vector<int>> kids(n);
    for (int i = 0; i < n; ++i) {
        if (parent[i] < 0) {
            if (root >= 0) throw InputError("model has more than one root");
            root = i;
        } else {
            if (parent[i] >= n) throw InputError("parent index out of range");
            kids[parent[i]].push_back(i);
        }
    }
    if (root < 0) throw InputError("model has no root");
    KripkeModel k(valuation[root]);
    std::queue<std::pair<int, int>> q;  // (source index, new index)
    q.push({root, 0});
    std::size_t seen = 1;
    while (!q.empty()) {
        auto [src, dst] = q.front();
        q.pop();
        for (int c : kids[src]) {
            if (!k.valuation_[dst].subset_of(valuation[c]))
                throw InputError("valuation is not monotone along an edge");
            int nc = k.add_child(dst, valuation[c]);
            q.push({c, nc});
            ++seen;
        }
    }
    if (seen != parent.size()) throw InputError("parent relation is not a tree (cycle or unreachable node)");
    return k;
}

int KripkeModel::add_child(int p, AtomSet v) {
    if (p < 0 || p >= static_cast<int>(size())) throw InputError("unknown parent node");
    if (!valuation_[p].subset_of(v)) throw InputError("valuation is not monotone along an edge");
    int id = static_cast<int>(size());
    parent_.push_back(p);
    children_.emplace_back();
    valuation_.push_back(std::move(v));
    children_[p].push_back(id);
    return id;
}

AtomSet KripkeModel::atoms() const {
    AtomSet r;
    for (const auto& v : valuation_) r = r.unite(v);
    return r;
}

bool KripkeModel::leq(int w, int u) const {
    while (u > w) u = parent_[u];
    return u == w;
}

std::vector<int> KripkeModel::up(int w) const {
    std::vector<int> out{w};
    for (std::size_t i = 0; i < out.size(); ++i)
        for (int c : children_[out[i]]) out.push_back(c);
    return out;
}

std::size_t KripkeModel::depth() const {
    std::vector<std::size_t> d(size(), 0);
    std::size_t best = 0;
    for (std::size_t i = 1; i < size(); ++i) {
        d[i] = d[parent_[i]] + 1;
        best = std::max(best, d[i]);
    }
    return best;
}

KripkeModel KripkeModel::generated(int w) const { return induced(up(w)); }

KripkeModel KripkeModel::restrict_atoms(const AtomSet& keep) const {
    KripkeModel r = *this;
    for (auto& v : r.valuation_) v = v.intersect(keep);
    return r;
}

KripkeModel KripkeModel::induced(const std::vector<int>& keep) const {
    std::vector<int> nodes = keep;
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    if (nodes.empty()) throw InputError("empty node set");
    for (int u : nodes)
        if (!leq(nodes[0], u)) throw InputError("node set has no least element");
    std::vector<int> parent(nodes.size(), -1);
    std::vector<AtomSet> val;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        val.push_back(valuation_[nodes[i]]);
        if (i == 0) continue;
        for (std::size_t j = i; j-- > 0;) {
            if (leq(nodes[j], nodes[i])) {
                parent[i] = static_cast<int>(j);
                break;
            }
        }
    }
    return from_parents(parent, val);
}

const NodeSet& Forcing::nodes(Formula f) {
    auto it = memo_.find(f);
    if (it != memo_.end()) return it->second;
    const std::size_t n = k_.size();
    NodeSet out(n);
    switch (f.kind()) {
        case Kind::Bot:
            break;
        case Kind::Var:
        case Kind::Par:
            for (std::size_t w = 0; w < n; ++w) out.set(w, k_.valuation(static_cast<int>(w)).contains(f.atom()));
            break;
        case Kind::And:
            out = nodes(f.lhs());
            out &= nodes(f.rhs());
            break;
        case Kind::Or:
            out = nodes(f.lhs());
            out |= nodes(f.rhs());
            break;
        case Kind::Imp: {
            const NodeSet& a = nodes(f.lhs());
            const NodeSet& b = nodes(f.rhs());
            for (std::size_t w = n; w-- > 0;) {
                bool ok = !a.test(w) || b.test(w);
                for (int c : k_.children(static_cast<int>(w))) ok = ok && out.test(static_cast<std::size_t>(c));
                out.set(w, ok);
            }
            break;
        }
    }
    return memo_.emplace(f, std::move(out)).first->second;
}

bool forces(const KripkeModel& k, int w, Formula f) {
    if (w < 0 || w >= static_cast<int>(k.size())) throw InputError("unknown node " + std::to_string(w));
    Forcing fc(k);
    return fc.at(w, f);
}

bool forces(const KripkeModel& k, Formula f) { return forces(k, 0, f); }

KripkeModel subst_model(const Substitution& theta, const KripkeModel& k) {
    Forcing fc(k);
    std::vector<int> parent;
    std::vector<AtomSet> val;
    std::map<Atom, NodeSet> bound;
    for (const auto& [a, f] : theta.bindings()) bound.emplace(a, fc.nodes(f));
    for (std::size_t w = 0; w < k.size(); ++w) {
        parent.push_back(k.parent(static_cast<int>(w)));
        std::vector<Atom> v;
        for (Atom a : k.valuation(static_cast<int>(w)))
            if (!bound.count(a)) v.push_back(a);
        for (const auto& [a, s] : bound)
            if (s.test(w)) v.push_back(a);
        val.emplace_back(std::move(v));
    }
    return KripkeModel::from_parents(parent, val);
}

KripkeModel sum(const std::vector<KripkeModel>& models, const KripkeModel* source,
                std::optional<AtomSet> protected_atoms) {
    if (models.empty()) throw InputError("sum of an empty class");
    AtomSet common = models[0].valuation(0);
    for (const auto& m : models) common = common.intersect(m.valuation(0));
    AtomSet root = common;
    if (source) {
        AtomSet all;
        for (const auto& m : models) all = all.unite(m.atoms());
        all = all.unite(source->atoms());
        AtomSet prot = protected_atoms ? *protected_atoms : all.params();
        root = common.minus(prot).unite(source->valuation(0).intersect(prot));
        for (const auto& m : models) root = root.intersect(m.valuation(0));
    }
    KripkeModel out(root);
    for (const auto& m : models) {
        std::vector<int> map(m.size());
        for (std::size_t w = 0; w < m.size(); ++w) {
            int p = w == 0 ? 0 : map[m.parent(static_cast<int>(w))];
            map[w] = out.add_child(p, m.valuation(static_cast<int>(w)));
        }
    }
    return out;
}

KripkeModel variant(const KripkeModel& k, const AtomSet& protected_atoms, const AtomSet& new_root) {
    if (!(k.valuation(0).intersect(protected_atoms) == new_root.intersect(protected_atoms)))
        throw InputError("variant changes a protected atom at the root");
    std::vector<int> parent;
    std::vector<AtomSet> val;
    for (std::size_t w = 0; w < k.size(); ++w) {
        parent.push_back(k.parent(static_cast<int>(w)));
        val.push_back(w == 0 ? new_root : k.valuation(static_cast<int>(w)));
    }
    for (int c : k.children(0))
        if (!new_root.subset_of(k.valuation(c))) throw InputError("variant root breaks monotonicity");
    return KripkeModel::from_parents(parent, val);
}

std::string tree_code(const KripkeModel& k) {
    std::vector<std::string> code(k.size());
    for (std::size_t w = k.size(); w-- > 0;) {
        std::vector<std::string> kids;
        for (int c : k.children(static_cast<int>(w))) kids.push_back(code[c]);
        std::sort(kids.begin(), kids.end());
        std::string s = "(" + print(k.valuation(static_cast<int>(w))) + ":";
        for (auto& c : kids) s += c;
        code[w] = s + ")";
    }
    return code[0];
}

std::string bisim_code(const KripkeModel& k) {
    struct Cls {
        AtomSet val;
        std::set<int> below;  // classes of strict successors
    };
    std::vector<Cls> classes;
    std::map<std::pair<AtomSet, std::set<int>>, int> index;
    std::vector<int> cls(k.size());
    std::vector<std::set<int>> desc(k.size());
    for (std::size_t w = k.size(); w-- > 0;) {
        std::set<int> d;
        for (int c : k.children(static_cast<int>(w))) {
            d.insert(cls[c]);
            d.insert(desc[c].begin(), desc[c].end());
        }
        desc[w] = d;
        const AtomSet& v = k.valuation(static_cast<int>(w));
        int found = -1;
        for (int c0 : d) {
            if (!(classes[c0].val == v)) continue;
            std::set<int> s = classes[c0].below;
            s.insert(c0);
            if (s == d) {
                found = c0;
                break;
            }
        }
        if (found < 0) {
            auto key = std::make_pair(v, d);
            auto it = index.find(key);
            if (it == index.end()) {
                found = static_cast<int>(classes.size());
                classes.push_back({v, d});
                index.emplace(key, found);
            } else {
                found = it->second;
            }
        }
        cls[w] = found;
    }
    std::map<int, std::string> memo;
    std::function<std::string(int)> code = [&](int c) -> std::string {
        auto it = memo.find(c);
        if (it != memo.end()) return it->second;
        std::vector<std::string> parts;
        for (int b : classes[c].below) parts.push_back(code(b));
        std::sort(parts.begin(), parts.end());
        std::string s = "(" + print(classes[c].val) + ":";
        for (auto& p : parts) s += p;
        s += ")";
        memo.emplace(c, s);
        return s;
    };
    return code(cls[0]);
}

std::vector<KripkeModel> enumerate_models(const AtomSet& atoms, std::size_t max_nodes) {
    const auto& av = atoms.items();
    const unsigned m = static_cast<unsigned>(av.size());
    if (m > 16) throw BudgetExceeded("too many atoms for model enumeration");
    auto to_set = [&](unsigned mask) {
        std::vector<Atom> xs;
        for (unsigned i = 0; i < m; ++i)
            if (mask >> i & 1u) xs.push_back(av[i]);
        return AtomSet(std::move(xs));
    };
    std::map<std::pair<unsigned, std::size_t>, std::vector<KripkeModel>> rooted_memo;
    std::function<const std::vector<KripkeModel>&(unsigned, std::size_t)> rooted;
    auto above = [&](unsigned vmin, std::size_t b) {
        std::vector<KripkeModel> pool;
        for (unsigned v = 0; v < (1u << m); ++v) {
            if ((v & vmin) != vmin) continue;
            const auto& r = rooted(v, b);
            pool.insert(pool.end(), r.begin(), r.end());
        }
        return pool;
    };
    rooted = [&](unsigned v, std::size_t b) -> const std::vector<KripkeModel>& {
        auto key = std::make_pair(v, b);
        auto it = rooted_memo.find(key);
        if (it != rooted_memo.end()) return it->second;
        std::vector<KripkeModel> out;
        if (b >= 1) {
            std::vector<KripkeModel> pool = b >= 2 ? above(v, b - 1) : std::vector<KripkeModel>{};
            std::vector<std::size_t> pick;
            std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t from, std::size_t left) {
                KripkeModel k(to_set(v));
                for (std::size_t idx : pick) {
                    const KripkeModel& sub = pool[idx];
                    std::vector<int> map(sub.size());
                    for (std::size_t w = 0; w < sub.size(); ++w) {
                        int p = w == 0 ? 0 : map[sub.parent(static_cast<int>(w))];
                        map[w] = k.add_child(p, sub.valuation(static_cast<int>(w)));
                    }
                }
                out.push_back(std::move(k));
                for (std::size_t i = from; i < pool.size(); ++i) {
                    if (pool[i].size() > left) continue;
                    pick.push_back(i);
                    rec(i, left - pool[i].size());
                    pick.pop_back();
                }
            };
            rec(0, b - 1);
        }
        return rooted_memo.emplace(key, std::move(out)).first->second;
    };
    return above(0, max_nodes);
}

bool relational_submodel(const KripkeModel& k1, const KripkeModel& k2, const AtomSet& atoms) {
    const std::size_t n1 = k1.size(), n2 = k2.size();
    std::vector<std::vector<char>> r(n1, std::vector<char>(n2, 0));
    for (std::size_t a = 0; a < n1; ++a)
        for (std::size_t b = 0; b < n2; ++b)
            r[a][b] = k1.valuation(static_cast<int>(a)).intersect(atoms) ==
                      k2.valuation(static_cast<int>(b)).intersect(atoms);
    std::vector<std::vector<int>> up1(n1), up2(n2);
    for (std::size_t a = 0; a < n1; ++a) up1[a] = k1.up(static_cast<int>(a));
    for (std::size_t b = 0; b < n2; ++b) up2[b] = k2.up(static_cast<int>(b));
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t a = 0; a < n1; ++a)
            for (std::size_t b = 0; b < n2; ++b) {
                if (!r[a][b]) continue;
                for (int va : up1[a]) {
                    bool matched = false;
                    for (int vb : up2[b])
                        if (r[va][vb]) {
                            matched = true;
                            break;
                        }
                    if (!matched) {
                        r[a][b] = 0;
                        changed = true;
                        break;
                    }
                }
            }
    }
    for (std::size_t a = 0; a < n1; ++a)
        if (std::none_of(r[a].begin(), r[a].end(), [](char c) { return c != 0; })) return false;
    return true;
}

bool embeds(const KripkeModel& k1, const KripkeModel& k2, const AtomSet& atoms) {
    const std::size_t n1 = k1.size(), n2 = k2.size();
    if (n1 > n2) return false;
    std::vector<int> f(n1, -1);
    std::vector<char> used(n2, 0);
    std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
        if (i == n1) return true;
        for (std::size_t c = 0; c < n2; ++c) {
            if (used[c]) continue;
            if (!(k1.valuation(static_cast<int>(i)).intersect(atoms) ==
                  k2.valuation(static_cast<int>(c)).intersect(atoms)))
                continue;
            bool ok = true;
            for (std::size_t j = 0; j < i && ok; ++j) {
                bool o1 = k1.leq(static_cast<int>(j), static_cast<int>(i));
                bool o2 = k2.leq(f[j], static_cast<int>(c));
                bool r1 = k1.leq(static_cast<int>(i), static_cast<int>(j));
                bool r2 = k2.leq(static_cast<int>(c), f[j]);
                ok = o1 == o2 && r1 == r2;
            }
            if (!ok) continue;
            f[i] = static_cast<int>(c);
            used[c] = 1;
            if (rec(i + 1)) return true;
            used[c] = 0;
        }
        return false;
    };
    return rec(0);
}

nlohmann::json model_to_json(const KripkeModel& k) {
    nlohmann::json nodes = nlohmann::json::array();
    for (std::size_t w = 0; w < k.size(); ++w) {
        nlohmann::json atoms = nlohmann::json::array();
        for (Atom a : k.valuation(static_cast<int>(w))) atoms.push_back(a.text());
        nlohmann::json node;
        node["id"] = w;
        node["parent"] = w == 0 ? nlohmann::json(nullptr) : nlohmann::json(k.parent(static_cast<int>(w)));
        node["atoms"] = atoms;
        nodes.push_back(node);
    }
    return {{"nodes", nodes}};
}

KripkeModel model_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("nodes") || !j["nodes"].is_array())
        throw InputError("model JSON must be an object with a \"nodes\" array");
    std::map<long long, std::size_t> index;
    std::vector<long long> ids;
    const auto& nodes = j["nodes"];
    for (const auto& n : nodes) {
        if (!n.is_object() || !n.contains("id") || !n["id"].is_number_integer())
            throw InputError("each node needs an integer \"id\"");
        long long id = n["id"].get<long long>();
        if (!index.emplace(id, ids.size()).second) throw InputError("duplicate node id " + std::to_string(id));
        ids.push_back(id);
    }
    std::vector<int> parent(ids.size(), -1);
    std::vector<AtomSet> val(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const auto& n = nodes[i];
        if (!n.contains("parent") || n["parent"].is_null()) {
            if (ids[i] != 0) throw InputError("only node 0 may be the root");
        } else {
            if (!n["parent"].is_number_integer()) throw InputError("\"parent\" must be an integer or null");
            auto it = index.find(n["parent"].get<long long>());
            if (it == index.end()) throw InputError("unknown parent of node " + std::to_string(ids[i]));
            if (ids[i] == 0) throw InputError("node 0 must be the root");
            parent[i] = static_cast<int>(it->second);
        }
        std::string list;
        if (n.contains("atoms")) {
            if (!n["atoms"].is_array()) throw InputError("\"atoms\" must be an array");
            for (const auto& a : n["atoms"]) {
                if (!a.is_string()) throw InputError("atoms must be strings");
                if (!list.empty()) list += ',';
                list += a.get<std::string>();
            }
        }
        try {
            val[i] = list.empty() ? AtomSet{} : parse_atoms(list);
        } catch (const ParseError& e) {
            throw InputError(std::string("bad atom name: ") + e.what());
        }
    }
    if (!index.count(0)) throw InputError("model has no node 0");
    return KripkeModel::from_parents(parent, val);
}

std::string describe(const KripkeModel& k) {
    std::string out;
    for (std::size_t w = 0; w < k.size(); ++w) {
        out += std::to_string(w);
        if (w) out += " <- " + std::to_string(k.parent(static_cast<int>(w)));
        out += " {" + print(k.valuation(static_cast<int>(w))) + "}\n";
    }
    return out;
}

}  // namespace relunif
