#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pyopt/ast.hpp"

namespace pyopt {

// A symmetric, transitively closed set of variable pairs ("x and y hold the
// same value"). Pairs are stored unordered-canonical (first < second) and
// never reflexive; the pairs induce a partition into equivalence classes.
class CopySet {
public:
    CopySet() = default;

    // Smallest symmetric-transitive superset of `raw`, reflexive pairs dropped.
    static CopySet closure(const std::vector<std::pair<Ident, Ident>>& raw);

    // All pairs mentioning x removed; the result is still closed.
    CopySet remove(const Ident& x) const;

    // Set intersection of pairs (an intersection of equivalence relations,
    // hence closed).
    CopySet intersect(const CopySet& other) const;

    CopySet with_pair(const Ident& x, const Ident& y) const;

    bool contains(const Ident& x, const Ident& y) const;
    bool subset_of(const CopySet& other) const;
    bool empty() const { return pairs_.empty(); }
    size_t size() const { return pairs_.size(); }

    const std::set<std::pair<Ident, Ident>>& pairs() const { return pairs_; }

    // "a~b, a~c, b~c" with each pair and the list lexicographically sorted.
    std::string to_string() const;

    friend bool operator==(const CopySet& a, const CopySet& b) { return a.pairs_ == b.pairs_; }

private:
    std::set<std::pair<Ident, Ident>> pairs_;
};

}  // namespace pyopt
