#ifndef CDMG_VERTEX_SET_HPP
#define CDMG_VERTEX_SET_HPP

#include <algorithm>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <vector>

namespace cdmg {

/// Index of a vertex inside its owning graph. Graphs keep their vertex names
/// sorted, so index order equals lexicographic name order.
using Vertex = std::uint32_t;

/// Sorted, duplicate-free set of vertex indices.
class VertexSet {
public:
    using const_iterator = std::vector<Vertex>::const_iterator;

    VertexSet() = default;
    VertexSet(std::initializer_list<Vertex> items) : items_(items) { normalize(); }

    template <std::input_iterator It>
    VertexSet(It first, It last) : items_(first, last) { normalize(); }

    static VertexSet range(Vertex n) {
        VertexSet s;
        s.items_.resize(n);
        for (Vertex i = 0; i < n; ++i) s.items_[i] = i;
        return s;
    }

    bool contains(Vertex v) const { return std::binary_search(items_.begin(), items_.end(), v); }

    void insert(Vertex v) {
        auto it = std::lower_bound(items_.begin(), items_.end(), v);
        if (it == items_.end() || *it != v) items_.insert(it, v);
    }

    void erase(Vertex v) {
        auto it = std::lower_bound(items_.begin(), items_.end(), v);
        if (it != items_.end() && *it == v) items_.erase(it);
    }

    bool empty() const noexcept { return items_.empty(); }
    std::size_t size() const noexcept { return items_.size(); }
    const_iterator begin() const noexcept { return items_.begin(); }
    const_iterator end() const noexcept { return items_.end(); }
    Vertex front() const { return items_.front(); }
    const std::vector<Vertex>& items() const noexcept { return items_; }

    bool intersects(const VertexSet& other) const {
        auto a = items_.begin();
        auto b = other.items_.begin();
        while (a != items_.end() && b != other.items_.end()) {
            if (*a == *b) return true;
            if (*a < *b) ++a; else ++b;
        }
        return false;
    }

    bool subset_of(const VertexSet& other) const {
        return std::includes(other.items_.begin(), other.items_.end(), items_.begin(), items_.end());
    }

    friend VertexSet operator|(const VertexSet& a, const VertexSet& b) {
        VertexSet r;
        std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r.items_));
        return r;
    }
    friend VertexSet operator&(const VertexSet& a, const VertexSet& b) {
        VertexSet r;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r.items_));
        return r;
    }
    friend VertexSet operator-(const VertexSet& a, const VertexSet& b) {
        VertexSet r;
        std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r.items_));
        return r;
    }

    friend bool operator==(const VertexSet&, const VertexSet&) = default;
    friend auto operator<=>(const VertexSet&, const VertexSet&) = default;

private:
    void normalize() {
        std::sort(items_.begin(), items_.end());
        items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
    }

    std::vector<Vertex> items_;
};

/// Membership mask sized to a graph, for hot loops.
inline std::vector<char> to_mask(const VertexSet& s, std::size_t n) {
    std::vector<char> mask(n, 0);
    for (Vertex v : s) mask[v] = 1;
    return mask;
}

inline VertexSet from_mask(const std::vector<char>& mask) {
    std::vector<Vertex> items;
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (mask[i]) items.push_back(static_cast<Vertex>(i));
    return VertexSet(items.begin(), items.end());
}

} // namespace cdmg

#endif
