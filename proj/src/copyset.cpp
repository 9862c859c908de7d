#include "pyopt/copyset.hpp"

#include <map>

namespace pyopt {

namespace {

struct UnionFind {
    std::map<Ident, Ident> parent;

    const Ident& find(const Ident& x) {
        auto it = parent.find(x);
        if (it == parent.end()) {
            parent[x] = x;
            return parent.find(x)->first;
        }
        if (it->second == x) return it->first;
        Ident root = find(it->second);
        parent[x] = root;
        return parent.find(x)->second;
    }

    void unite(const Ident& a, const Ident& b) {
        Ident ra = find(a), rb = find(b);
        if (ra != rb) parent[ra] = rb;
    }
};

std::pair<Ident, Ident> canon(const Ident& a, const Ident& b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

}  // namespace

CopySet CopySet::closure(const std::vector<std::pair<Ident, Ident>>& raw) {
    UnionFind uf;
    for (const auto& [a, b] : raw) {
        if (a == b) continue;
        uf.unite(a, b);
    }
    std::map<Ident, std::vector<Ident>> classes;
    for (const auto& [x, _] : uf.parent) classes[uf.find(x)].push_back(x);
    CopySet out;
    for (const auto& [_, members] : classes) {
        for (size_t i = 0; i < members.size(); ++i)
            for (size_t j = i + 1; j < members.size(); ++j)
                out.pairs_.insert(canon(members[i], members[j]));
    }
    return out;
}

CopySet CopySet::remove(const Ident& x) const {
    CopySet out;
    for (const auto& p : pairs_)
        if (p.first != x && p.second != x) out.pairs_.insert(p);
    return out;
}

CopySet CopySet::intersect(const CopySet& other) const {
    CopySet out;
    for (const auto& p : pairs_)
        if (other.pairs_.count(p)) out.pairs_.insert(p);
    return out;
}

CopySet CopySet::with_pair(const Ident& x, const Ident& y) const {
    std::vector<std::pair<Ident, Ident>> raw(pairs_.begin(), pairs_.end());
    raw.emplace_back(x, y);
    return closure(raw);
}

bool CopySet::contains(const Ident& x, const Ident& y) const {
    if (x == y) return false;
    return pairs_.count(canon(x, y)) > 0;
}

bool CopySet::subset_of(const CopySet& other) const {
    for (const auto& p : pairs_)
        if (!other.pairs_.count(p)) return false;
    return true;
}

std::string CopySet::to_string() const {
    std::string out;
    for (const auto& [a, b] : pairs_) {
        if (!out.empty()) out += ", ";
        out += a + "~" + b;
    }
    return out;
}

}  // namespace pyopt
