#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <thread>
#include <unordered_set>
#include <utility>
#include <vector>

#include "contig/complex.hpp"
#include "contig/maps.hpp"
#include "contig/subdivision.hpp"
#include "contig/union_find.hpp"

namespace contig {

/// Contiguity classes of an enumerated map set.
struct ClassPartition {
    std::vector<Assignment> maps;
    std::vector<std::size_t> class_of;  // dense class ids in order of first appearance
    std::size_t class_count = 0;

    std::vector<std::size_t> class_sizes() const
    {
        std::vector<std::size_t> sizes(class_count, 0);
        for (std::size_t c : class_of)
            ++sizes[c];
        return sizes;
    }

    /// First map (in enumeration order) of each class.
    std::vector<std::size_t> representatives() const
    {
        std::vector<std::size_t> reps(class_count, maps.size());
        for (std::size_t i = 0; i < maps.size(); ++i)
            if (reps[class_of[i]] == maps.size())
                reps[class_of[i]] = i;
        return reps;
    }
};

namespace detail {

inline ClassPartition partition_from(std::vector<Assignment> maps, UnionFind& uf)
{
    ClassPartition p;
    p.maps = std::move(maps);
    p.class_of.resize(p.maps.size());
    std::vector<std::size_t> root_to_class(p.maps.size(), p.maps.size());
    for (std::size_t i = 0; i < p.maps.size(); ++i) {
        const std::size_t r = uf.find(i);
        if (root_to_class[r] == p.maps.size())
            root_to_class[r] = p.class_count++;
        p.class_of[i] = root_to_class[r];
    }
    return p;
}

}  // namespace detail

struct ExactCountOptions {
    std::size_t cap = kDefaultMapCap;
    unsigned workers = 1;
};

/**
 * Exact contiguity classes: enumerate all maps, test every pair for
 * contiguity, take the transitive closure with union-find. Quadratic in the
 * number of maps; the cap bounds it.
 *
 * With several workers the pair scan is split by rows; edges are merged
 * sequentially afterwards.
 */
inline ClassPartition exact_class_count(const SimplicialComplex& x, const SimplicialComplex& y,
                                        std::optional<BasePoint> based = std::nullopt,
                                        const ExactCountOptions& opts = {})
{
    auto maps = enumerate_assignments(x, y, based, opts.cap);
    const ContiguityChecker check(x, y);
    const std::size_t m = maps.size();
    UnionFind uf(m);

    const unsigned workers = std::max(1U, opts.workers);
    if (workers == 1 || m < 256) {
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j)
                if (uf.find(i) != uf.find(j) && check.contiguous(maps[i], maps[j]))
                    uf.unite(i, j);
    } else {
        std::vector<std::vector<std::pair<std::size_t, std::size_t>>> edges(workers);
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < m; i += workers)
                    for (std::size_t j = i + 1; j < m; ++j)
                        if (check.contiguous(maps[i], maps[j]))
                            edges[w].emplace_back(i, j);
            });
        for (auto& t : pool)
            t.join();
        for (const auto& list : edges)
            for (auto [i, j] : list)
                uf.unite(i, j);
    }
    return detail::partition_from(std::move(maps), uf);
}

/**
 * Calls visit(j) for every map j in `index` obtained from maps[i] by
 * changing the value at a single vertex such that the two maps are
 * contiguous. Each contiguous pair of maps is joined by a chain of such
 * single-vertex steps, so these edges give the same components as full
 * pairwise contiguity.
 */
template <class Visit>
void for_each_single_vertex_neighbor(const SimplicialComplex& x, const SimplicialComplex& y,
                                     const Assignment& f, const AssignmentIndex& index,
                                     const std::vector<std::vector<const Simplex*>>& star,
                                     Visit&& visit)
{
    Assignment g = f;
    std::vector<VertexId> image;
    for (VertexId v = 0; v < x.vertex_count(); ++v) {
        const VertexId old = f[v];
        for (VertexId c : y.closed_neighbors()[old]) {
            if (c == old)
                continue;
            bool ok = true;
            for (const Simplex* s : star[v]) {
                image.clear();
                for (VertexId w : *s)
                    image.push_back(f[w]);
                image.push_back(c);
                if (!y.spans_simplex(image)) {
                    ok = false;
                    break;
                }
            }
            if (!ok)
                continue;
            g[v] = c;
            if (auto j = index.find(g))
                visit(*j);
            g[v] = old;
        }
    }
}

/// Maximal simplices through each vertex.
inline std::vector<std::vector<const Simplex*>> maximal_star(const SimplicialComplex& x)
{
    std::vector<std::vector<const Simplex*>> star(x.vertex_count());
    for (const auto& s : x.maximal_simplices())
        for (VertexId v : s)
            star[v].push_back(&s);
    return star;
}

/**
 * Contiguity classes computed from single-vertex contiguous moves instead
 * of all pairs. Same partition as exact_class_count, linear in the number
 * of maps times |V_x| * max degree.
 */
inline ClassPartition local_move_classes(const SimplicialComplex& x, const SimplicialComplex& y,
                                         std::optional<BasePoint> based = std::nullopt,
                                         std::size_t cap = kDefaultMapCap)
{
    auto maps = enumerate_assignments(x, y, based, cap);
    const AssignmentIndex index(maps);
    const auto star = maximal_star(x);
    UnionFind uf(maps.size());
    for (std::size_t i = 0; i < maps.size(); ++i)
        for_each_single_vertex_neighbor(x, y, maps[i], index, star,
                                        [&](std::size_t j) { uf.unite(i, j); });
    return detail::partition_from(std::move(maps), uf);
}

/// Map_SC(x, y): vertices are the maps, simplices the mutually contiguous families.
struct ContiguityComplex {
    std::vector<Assignment> maps;
    SimplicialComplex complex;
    AssignmentIndex index;

    std::optional<std::size_t> find(std::span<const VertexId> f) const { return index.find(f); }
};

/**
 * Builds Map_SC(x, y) up to dimension max_dim. A (d+1)-set is tested only
 * when all of its d-faces are present; mutual contiguity passes to subsets.
 */
inline ContiguityComplex build_contiguity_complex(const SimplicialComplex& x,
                                                  const SimplicialComplex& y,
                                                  std::optional<BasePoint> based, int max_dim,
                                                  std::size_t cap = kDefaultMapCap,
                                                  std::size_t simplex_cap = SimplicialComplex::kDefaultSimplexCap)
{
    ContiguityComplex out;
    out.maps = enumerate_assignments(x, y, based, cap);
    out.index = AssignmentIndex(out.maps);
    const std::size_t m = out.maps.size();
    const ContiguityChecker check(x, y);

    std::vector<std::vector<VertexId>> adj(m);
    std::vector<std::vector<VertexId>> facets;
    std::size_t total = m;
    if (max_dim >= 1)
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j)
                if (check.contiguous(out.maps[i], out.maps[j])) {
                    adj[i].push_back(static_cast<VertexId>(j));
                    adj[j].push_back(static_cast<VertexId>(i));
                }
    for (auto& a : adj)
        std::sort(a.begin(), a.end());

    // Expand layer by layer; each simplex is extended only by larger vertices.
    std::vector<std::vector<VertexId>> layer;
    for (std::size_t i = 0; i < m; ++i) {
        layer.push_back({static_cast<VertexId>(i)});
        facets.push_back({static_cast<VertexId>(i)});
    }
    std::vector<std::span<const VertexId>> family;
    for (int d = 1; d <= max_dim && !layer.empty(); ++d) {
        std::unordered_set<Simplex, SimplexHash> prev;
        for (const auto& s : layer)
            prev.insert(Simplex(s));
        std::vector<std::vector<VertexId>> next;
        for (const auto& s : layer) {
            const auto& cand = adj[s.back()];
            for (auto it = std::upper_bound(cand.begin(), cand.end(), s.back()); it != cand.end(); ++it) {
                const VertexId u = *it;
                bool faces = true;
                for (std::size_t drop = 0; drop < s.size() && faces; ++drop) {
                    std::vector<VertexId> f;
                    for (std::size_t k = 0; k < s.size(); ++k)
                        if (k != drop)
                            f.push_back(s[k]);
                    f.push_back(u);
                    faces = prev.contains(Simplex(f));
                }
                if (!faces)
                    continue;
                auto t = s;
                t.push_back(u);
                family.clear();
                for (VertexId k : t)
                    family.emplace_back(out.maps[k]);
                if (d >= 2 && !check.mutually(family))
                    continue;
                next.push_back(std::move(t));
                if (++total > simplex_cap)
                    throw CapExceeded("contiguity complex size", simplex_cap);
            }
        }
        for (const auto& t : next)
            facets.push_back(t);
        layer = std::move(next);
    }
    out.complex = make_complex(m, facets, simplex_cap);
    out.complex.set_name("Map(" + x.name() + "," + y.name() + ")");
    return out;
}

enum class Tiebreak { LowestId, MaxWeight };

/**
 * Simplicial approximation of the homeomorphism |X'| -> |X| for a
 * subdivision: each refined vertex goes to a vertex of its carrier.
 */
inline Assignment approximate_subdivision(const Subdivision& s, Tiebreak rule = Tiebreak::LowestId)
{
    Assignment f(s.refined.vertex_count());
    for (VertexId v = 0; v < f.size(); ++v) {
        const auto& w = s.embedding[v].weights;
        if (rule == Tiebreak::LowestId) {
            f[v] = w.front().first;
        } else {
            auto best = w.begin();
            for (auto it = w.begin(); it != w.end(); ++it)
                if (it->second > best->second)
                    best = it;
            f[v] = best->first;
        }
    }
    return f;
}

/// Every refined simplex lands inside its own carrier.
inline bool satisfies_carrier_condition(const Subdivision& s, std::span<const VertexId> f)
{
    for (const auto& sigma : s.refined.all_simplices()) {
        const Simplex c = s.carrier(sigma);
        for (VertexId v : sigma)
            if (!c.contains(f[v]))
                return false;
    }
    return true;
}

/**
 * Exponential correspondence: a map f: x ⊠ z -> y (product vertex
 * (v, w) = v * |V_z| + w) becomes w |-> index of f(-, w) in Map_SC(x, y).
 */
inline Assignment exponential_transpose(const SimplicialComplex& x, const SimplicialComplex& z,
                                        const SimplicialComplex& y, const ContiguityComplex& maps,
                                        std::span<const VertexId> f)
{
    const std::size_t nx = x.vertex_count();
    const std::size_t nz = z.vertex_count();
    if (f.size() != nx * nz)
        throw InvalidArgument("assignment size does not match product vertex count");
    Assignment out(nz);
    Assignment slice(nx);
    for (std::size_t w = 0; w < nz; ++w) {
        for (std::size_t v = 0; v < nx; ++v)
            slice[v] = f[v * nz + w];
        auto idx = maps.find(slice);
        if (!idx || !is_simplicial(slice, x, y))
            throw NotSimplicial("slice f(-, w) is not a simplicial map");
        out[w] = static_cast<VertexId>(*idx);
    }
    if (!is_simplicial(out, z, maps.complex))
        throw NotSimplicial("transpose is not simplicial into the contiguity complex");
    return out;
}

/// Inverse of exponential_transpose.
inline Assignment exponential_untranspose(const SimplicialComplex& x, const SimplicialComplex& z,
                                          const ContiguityComplex& maps, std::span<const VertexId> g)
{
    if (g.size() != z.vertex_count())
        throw InvalidArgument("assignment size does not match z");
    if (!is_simplicial(g, z, maps.complex))
        throw NotSimplicial("map into the contiguity complex is not simplicial");
    const std::size_t nx = x.vertex_count();
    const std::size_t nz = z.vertex_count();
    Assignment f(nx * nz);
    for (std::size_t w = 0; w < nz; ++w)
        for (std::size_t v = 0; v < nx; ++v)
            f[v * nz + w] = maps.maps[g[w]][v];
    return f;
}

}  // namespace contig
