#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "contig/complex.hpp"

namespace contig {

/// Vertex assignment of a map: entry v is the image of domain vertex v.
using Assignment = std::vector<VertexId>;

/// Base-point constraint for based maps: (domain vertex, codomain vertex).
using BasePoint = std::pair<VertexId, VertexId>;

/// Default cap on enumerated maps.
inline constexpr std::size_t kDefaultMapCap = 50'000;

/// True iff the image of every maximal simplex of x is a simplex of y.
inline bool is_simplicial(std::span<const VertexId> f, const SimplicialComplex& x,
                          const SimplicialComplex& y)
{
    if (f.size() != x.vertex_count())
        throw InvalidArgument("assignment length does not match domain vertex count");
    for (VertexId w : f)
        if (w >= y.vertex_count())
            throw InvalidArgument("codomain vertex " + std::to_string(w) + " out of range");
    std::vector<VertexId> image;
    for (const auto& sigma : x.maximal_simplices()) {
        image.clear();
        for (VertexId v : sigma)
            image.push_back(f[v]);
        if (!y.spans_simplex(image))
            return false;
    }
    return true;
}

/**
 * A simplicial map between two shared complexes. The constructor checks
 * simpliciality.
 */
class SimplicialMap {
public:
    SimplicialMap(std::shared_ptr<const SimplicialComplex> domain,
                  std::shared_ptr<const SimplicialComplex> codomain, Assignment assignment)
        : domain_(std::move(domain)), codomain_(std::move(codomain)),
          assignment_(std::move(assignment))
    {
        if (!is_simplicial(assignment_, *domain_, *codomain_))
            throw NotSimplicial("assignment is not a simplicial map");
    }

    const SimplicialComplex& domain() const { return *domain_; }
    const SimplicialComplex& codomain() const { return *codomain_; }
    const std::shared_ptr<const SimplicialComplex>& domain_ptr() const { return domain_; }
    const std::shared_ptr<const SimplicialComplex>& codomain_ptr() const { return codomain_; }
    const Assignment& assignment() const { return assignment_; }
    VertexId operator()(VertexId v) const { return assignment_[v]; }

    friend bool operator==(const SimplicialMap& a, const SimplicialMap& b)
    {
        return a.assignment_ == b.assignment_ && same_complex(*a.domain_, *b.domain_) &&
               same_complex(*a.codomain_, *b.codomain_);
    }

private:
    static bool same_complex(const SimplicialComplex& a, const SimplicialComplex& b)
    {
        return &a == &b || a == b;
    }

    std::shared_ptr<const SimplicialComplex> domain_;
    std::shared_ptr<const SimplicialComplex> codomain_;
    Assignment assignment_;
};

/**
 * Contiguity tests between maps x -> y, checked on the maximal simplices of
 * x only. For domains of dimension <= 1 with at most 64 codomain vertices a
 * lookup table over (f(a), f(b), g(a), g(b)) answers pairwise queries.
 */
class ContiguityChecker {
public:
    ContiguityChecker(const SimplicialComplex& x, const SimplicialComplex& y)
        : x_(&x), y_(&y), maximal_(x.maximal_simplices())
    {
        const std::size_t n = y.vertex_count();
        if (x.dimension() <= 1 && n <= 64 && n > 0) {
            table_n_ = n;
            table_.assign((n * n * n * n + 63) / 64, 0);
            for (VertexId a = 0; a < n; ++a)
                for (VertexId b = 0; b < n; ++b)
                    for (VertexId c = 0; c < n; ++c)
                        for (VertexId d = 0; d < n; ++d) {
                            const std::uint64_t m = (std::uint64_t{1} << a) | (std::uint64_t{1} << b) |
                                                    (std::uint64_t{1} << c) | (std::uint64_t{1} << d);
                            if (y.spans_mask(m)) {
                                const std::size_t i = ((a * n + b) * n + c) * n + d;
                                table_[i / 64] |= std::uint64_t{1} << (i % 64);
                            }
                        }
        }
    }

    bool uses_lookup_table() const { return table_n_ != 0; }

    bool contiguous(std::span<const VertexId> f, std::span<const VertexId> g) const
    {
        if (table_n_ != 0) {
            const std::size_t n = table_n_;
            for (const auto& s : maximal_) {
                const VertexId a = s[0];
                const VertexId b = s.size() > 1 ? s[1] : s[0];
                const std::size_t i = ((f[a] * n + f[b]) * n + g[a]) * n + g[b];
                if (!(table_[i / 64] >> (i % 64) & 1U))
                    return false;
            }
            return true;
        }
        const std::span<const VertexId> pair[] = {f, g};
        return mutually(pair);
    }

    bool mutually(std::span<const std::span<const VertexId>> maps) const
    {
        std::vector<VertexId> image;
        for (const auto& s : maximal_) {
            image.clear();
            for (const auto& f : maps)
                for (VertexId v : s)
                    image.push_back(f[v]);
            if (!y_->spans_simplex(image))
                return false;
        }
        return true;
    }

    const SimplicialComplex& domain() const { return *x_; }
    const SimplicialComplex& codomain() const { return *y_; }

private:
    const SimplicialComplex* x_;
    const SimplicialComplex* y_;
    std::vector<Simplex> maximal_;
    std::size_t table_n_ = 0;
    std::vector<std::uint64_t> table_;
};

/// Mutual contiguity of raw assignments, tested on maximal simplices.
inline bool mutually_contiguous(const SimplicialComplex& x, const SimplicialComplex& y,
                                std::span<const Assignment> maps)
{
    std::vector<VertexId> image;
    for (const auto& s : x.maximal_simplices()) {
        image.clear();
        for (const auto& f : maps)
            for (VertexId v : s)
                image.push_back(f[v]);
        if (!y.spans_simplex(image))
            return false;
    }
    return true;
}

/// Mutual contiguity of maps sharing a domain and codomain.
inline bool mutually_contiguous(std::span<const SimplicialMap> maps)
{
    if (maps.empty())
        return true;
    const auto& first = maps.front();
    std::vector<Assignment> raw;
    raw.reserve(maps.size());
    for (const auto& f : maps) {
        if (!(f.domain_ptr() == first.domain_ptr() || f.domain() == first.domain()) ||
            !(f.codomain_ptr() == first.codomain_ptr() || f.codomain() == first.codomain()))
            throw InvalidArgument("maps do not share domain and codomain");
        raw.push_back(f.assignment());
    }
    return mutually_contiguous(first.domain(), first.codomain(), raw);
}

/**
 * Generic backtracking over vertex assignments x -> [0, n).
 *
 * Vertices are visited in BFS order through the 1-skeleton starting at the
 * base vertex (or 0). A vertex with an already-assigned neighbour only
 * tries candidates(image of that neighbour); otherwise every codomain
 * vertex. After each assignment, `admissible(partial image)` must hold for
 * every maximal simplex through the vertex, restricted to assigned
 * vertices. `emit` receives each complete assignment in deterministic order.
 */
template <class Candidates, class Admissible, class Emit>
void backtrack_assignments(const SimplicialComplex& x, std::size_t codomain_size,
                           std::optional<BasePoint> based, Candidates&& candidates,
                           Admissible&& admissible, Emit&& emit)
{
    const std::size_t nv = x.vertex_count();
    if (nv == 0) {
        Assignment empty;
        emit(empty);
        return;
    }
    if (based && (based->first >= nv || based->second >= codomain_size))
        throw InvalidArgument("base point out of range");

    std::vector<VertexId> order;
    std::vector<char> seen(nv, 0);
    std::vector<std::vector<VertexId>> nbrs(nv);
    for (VertexId v = 0; v < nv; ++v)
        for (VertexId w : x.closed_neighbors()[v])
            if (w != v)
                nbrs[v].push_back(w);
    auto bfs = [&](VertexId root) {
        std::vector<VertexId> queue{root};
        seen[root] = 1;
        for (std::size_t h = 0; h < queue.size(); ++h) {
            order.push_back(queue[h]);
            for (VertexId w : nbrs[queue[h]])
                if (!seen[w]) {
                    seen[w] = 1;
                    queue.push_back(w);
                }
        }
    };
    bfs(based ? based->first : 0);
    for (VertexId v = 0; v < nv; ++v)
        if (!seen[v])
            bfs(v);

    std::vector<std::size_t> position(nv);
    for (std::size_t i = 0; i < nv; ++i)
        position[order[i]] = i;

    // For vertex at position i: an earlier neighbour (anchor) and the
    // maximal simplices through it, restricted to earlier-or-equal vertices.
    std::vector<std::optional<VertexId>> anchor(nv);
    std::vector<std::vector<std::vector<VertexId>>> checks(nv);
    for (std::size_t i = 0; i < nv; ++i) {
        const VertexId v = order[i];
        for (VertexId w : nbrs[v])
            if (position[w] < i && (!anchor[i] || position[w] < position[*anchor[i]]))
                anchor[i] = w;
    }
    for (const auto& s : x.maximal_simplices()) {
        if (s.size() < 2)
            continue;
        for (VertexId v : s) {
            std::vector<VertexId> part;
            for (VertexId w : s)
                if (position[w] <= position[v])
                    part.push_back(w);
            if (part.size() >= 2)
                checks[position[v]].push_back(std::move(part));
        }
    }

    std::vector<VertexId> all(codomain_size);
    for (std::size_t i = 0; i < codomain_size; ++i)
        all[i] = static_cast<VertexId>(i);

    Assignment f(nv, 0);
    std::vector<VertexId> image;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == nv) {
            emit(static_cast<const Assignment&>(f));
            return;
        }
        const VertexId v = order[i];
        auto try_value = [&](VertexId c) {
            f[v] = c;
            for (const auto& part : checks[i]) {
                image.clear();
                for (VertexId w : part)
                    image.push_back(f[w]);
                if (!admissible(std::span<const VertexId>(image)))
                    return;
            }
            rec(i + 1);
        };
        if (based && v == based->first) {
            try_value(based->second);
            return;
        }
        if (anchor[i]) {
            for (VertexId c : candidates(f[*anchor[i]]))
                try_value(c);
        } else {
            for (VertexId c : all)
                try_value(c);
        }
    };
    rec(0);
}

/**
 * Every simplicial map x -> y (sending based->first to based->second when
 * given), in deterministic order. Throws CapExceeded past `cap` maps.
 */
inline std::vector<Assignment> enumerate_assignments(const SimplicialComplex& x,
                                                     const SimplicialComplex& y,
                                                     std::optional<BasePoint> based = std::nullopt,
                                                     std::size_t cap = kDefaultMapCap)
{
    std::vector<Assignment> out;
    backtrack_assignments(
        x, y.vertex_count(), based,
        [&](VertexId w) -> const std::vector<VertexId>& { return y.closed_neighbors()[w]; },
        [&](std::span<const VertexId> img) { return y.spans_simplex(img); },
        [&](const Assignment& f) {
            if (out.size() >= cap)
                throw CapExceeded("map enumeration", cap);
            out.push_back(f);
        });
    return out;
}

inline std::vector<SimplicialMap> enumerate_maps(const std::shared_ptr<const SimplicialComplex>& x,
                                                 const std::shared_ptr<const SimplicialComplex>& y,
                                                 std::optional<BasePoint> based = std::nullopt,
                                                 std::size_t cap = kDefaultMapCap)
{
    std::vector<SimplicialMap> out;
    for (auto& f : enumerate_assignments(*x, *y, based, cap))
        out.emplace_back(x, y, std::move(f));
    return out;
}

/// Packs an assignment into a byte string usable as a hash key.
inline std::string assignment_key(std::span<const VertexId> f)
{
    std::string key;
    key.reserve(f.size() * 2);
    for (VertexId v : f) {
        if (v < 0x80) {
            key.push_back(static_cast<char>(v));
        } else {
            while (v >= 0x80) {
                key.push_back(static_cast<char>((v & 0x7f) | 0x80));
                v >>= 7;
            }
            key.push_back(static_cast<char>(v));
        }
    }
    return key;
}

/// Index from assignment to its position in a list.
class AssignmentIndex {
public:
    AssignmentIndex() = default;
    explicit AssignmentIndex(const std::vector<Assignment>& maps)
    {
        index_.reserve(maps.size());
        for (std::size_t i = 0; i < maps.size(); ++i)
            index_.emplace(assignment_key(maps[i]), i);
    }

    std::optional<std::size_t> find(std::span<const VertexId> f) const
    {
        auto it = index_.find(assignment_key(f));
        if (it == index_.end())
            return std::nullopt;
        return it->second;
    }

    std::size_t size() const { return index_.size(); }

private:
    std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace contig
