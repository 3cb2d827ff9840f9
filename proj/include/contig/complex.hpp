#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "contig/error.hpp"

namespace contig {

/// Dense index into a complex's vertex table.
using VertexId = std::uint32_t;

/**
 * A simplex in canonical form: a non-empty, strictly increasing list of
 * vertex ids. Construction from an arbitrary list sorts it and drops
 * duplicates, so two simplices compare equal iff they span the same
 * vertex set.
 */
class Simplex {
public:
    Simplex() = default;

    explicit Simplex(std::vector<VertexId> vertices) : vertices_(std::move(vertices))
    {
        std::sort(vertices_.begin(), vertices_.end());
        vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());
        if (vertices_.empty())
            throw InvalidArgument("simplex must have at least one vertex");
    }

    Simplex(std::initializer_list<VertexId> vertices)
        : Simplex(std::vector<VertexId>(vertices)) {}

    int dimension() const { return static_cast<int>(vertices_.size()) - 1; }
    std::size_t size() const { return vertices_.size(); }
    const std::vector<VertexId>& vertices() const { return vertices_; }
    VertexId operator[](std::size_t i) const { return vertices_[i]; }
    auto begin() const { return vertices_.begin(); }
    auto end() const { return vertices_.end(); }

    bool contains(VertexId v) const
    {
        return std::binary_search(vertices_.begin(), vertices_.end(), v);
    }

    bool is_face_of(const Simplex& other) const
    {
        return std::includes(other.vertices_.begin(), other.vertices_.end(),
                             vertices_.begin(), vertices_.end());
    }

    /// Codimension-one faces, in the order obtained by deleting vertex i.
    std::vector<Simplex> facets() const
    {
        std::vector<Simplex> out;
        if (vertices_.size() < 2)
            return out;
        out.reserve(vertices_.size());
        for (std::size_t i = 0; i < vertices_.size(); ++i) {
            Simplex f;
            f.vertices_.reserve(vertices_.size() - 1);
            for (std::size_t j = 0; j < vertices_.size(); ++j)
                if (j != i)
                    f.vertices_.push_back(vertices_[j]);
            out.push_back(std::move(f));
        }
        return out;
    }

    friend bool operator==(const Simplex&, const Simplex&) = default;
    friend auto operator<=>(const Simplex& a, const Simplex& b)
    {
        if (a.vertices_.size() != b.vertices_.size())
            return a.vertices_.size() <=> b.vertices_.size();
        return a.vertices_ <=> b.vertices_;
    }

private:
    std::vector<VertexId> vertices_;
};

struct SimplexHash {
    std::size_t operator()(const Simplex& s) const noexcept
    {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (VertexId v : s) {
            h ^= v + 0x9e3779b97f4a7c15ULL;
            h *= 0x100000001b3ULL;
            h ^= h >> 29;
        }
        return static_cast<std::size_t>(h);
    }
};

struct RipsTag;

/**
 * A finite abstract simplicial complex on vertices 0..n-1.
 *
 * Simplices are kept per dimension in lexicographic order; the global
 * index of a simplex (used by homology and subdivision) is its position in
 * the concatenation of those lists. The complex is immutable once built.
 */
class SimplicialComplex {
public:
    static constexpr std::size_t kDefaultSimplexCap = 2'000'000;

    SimplicialComplex() = default;

    /// Downward closure of the facets plus every singleton.
    static SimplicialComplex from_facets(std::size_t vertex_count,
                                         const std::vector<std::vector<VertexId>>& facets,
                                         std::size_t cap = kDefaultSimplexCap)
    {
        std::unordered_set<Simplex, SimplexHash> all;
        auto insert = [&](Simplex s) {
            all.insert(std::move(s));
            if (all.size() > cap)
                throw CapExceeded("simplicial complex size", cap);
        };
        for (VertexId v = 0; v < vertex_count; ++v)
            insert(Simplex{v});
        for (const auto& raw : facets) {
            if (raw.empty())
                throw InvalidArgument("empty facet");
            for (VertexId v : raw)
                if (v >= vertex_count)
                    throw InvalidArgument("facet vertex " + std::to_string(v) +
                                          " out of range for " +
                                          std::to_string(vertex_count) + " vertices");
            Simplex facet(raw);
            if (all.contains(facet))
                continue;
            const std::size_t n = facet.size();
            if (n > 40 || (std::uint64_t{1} << n) > cap + 1)
                throw CapExceeded("closure of a " + std::to_string(n) + "-vertex facet", cap);
            std::vector<VertexId> buf;
            for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
                buf.clear();
                for (std::size_t i = 0; i < n; ++i)
                    if (mask >> i & 1U)
                        buf.push_back(facet[i]);
                Simplex s(buf);
                if (!all.contains(s))
                    insert(std::move(s));
            }
        }
        SimplicialComplex c;
        c.vertex_count_ = vertex_count;
        c.assign(std::vector<Simplex>(all.begin(), all.end()));
        return c;
    }

    std::size_t vertex_count() const { return vertex_count_; }
    std::size_t simplex_count() const { return index_.size(); }
    int dimension() const { return static_cast<int>(by_dim_.size()) - 1; }

    std::size_t count(int dim) const
    {
        if (dim < 0 || dim > dimension())
            return 0;
        return by_dim_[static_cast<std::size_t>(dim)].size();
    }

    /// f-vector (count per dimension).
    std::vector<std::size_t> counts() const
    {
        std::vector<std::size_t> out;
        for (const auto& layer : by_dim_)
            out.push_back(layer.size());
        return out;
    }

    const std::vector<Simplex>& simplices(int dim) const
    {
        static const std::vector<Simplex> empty;
        if (dim < 0 || dim > dimension())
            return empty;
        return by_dim_[static_cast<std::size_t>(dim)];
    }

    /// Every simplex, ordered by dimension then lexicographically.
    std::vector<Simplex> all_simplices() const
    {
        std::vector<Simplex> out;
        out.reserve(simplex_count());
        for (const auto& layer : by_dim_)
            out.insert(out.end(), layer.begin(), layer.end());
        return out;
    }

    const std::vector<Simplex>& maximal_simplices() const { return maximal_; }

    bool contains(const Simplex& s) const { return index_.contains(s); }

    std::optional<std::size_t> index_of(const Simplex& s) const
    {
        auto it = index_.find(s);
        if (it == index_.end())
            return std::nullopt;
        return it->second.first;
    }

    bool is_maximal(const Simplex& s) const
    {
        auto it = index_.find(s);
        return it != index_.end() && it->second.second;
    }

    /// Membership test for an arbitrary vertex list (any order, repeats allowed).
    bool spans_simplex(std::span<const VertexId> vertices) const
    {
        if (vertices.empty())
            return false;
        if (!masks_.empty()) {
            std::uint64_t m = 0;
            for (VertexId v : vertices) {
                if (v >= vertex_count_)
                    return false;
                m |= std::uint64_t{1} << v;
            }
            return masks_.contains(m);
        }
        for (VertexId v : vertices)
            if (v >= vertex_count_)
                return false;
        return index_.contains(Simplex(std::vector<VertexId>(vertices.begin(), vertices.end())));
    }

    /// Bitmask membership; only valid when vertex_count() <= 64.
    bool spans_mask(std::uint64_t mask) const { return masks_.contains(mask); }
    bool has_mask_index() const { return !masks_.empty(); }

    /// Closed neighbourhoods in the 1-skeleton: v itself plus every w with {v,w} an edge.
    const std::vector<std::vector<VertexId>>& closed_neighbors() const { return closed_nbrs_; }

    bool adjacent_or_equal(VertexId a, VertexId b) const
    {
        if (a == b)
            return true;
        const auto& n = closed_nbrs_[a];
        return std::binary_search(n.begin(), n.end(), b);
    }

    const std::vector<std::string>& labels() const { return labels_; }
    void set_labels(std::vector<std::string> labels)
    {
        if (!labels.empty() && labels.size() != vertex_count_)
            throw InvalidArgument("label count does not match vertex count");
        labels_ = std::move(labels);
    }

    const std::string& name() const { return name_; }
    void set_name(std::string name) { name_ = std::move(name); }

    /// Present when this complex is a Vietoris-Rips complex of a metric space.
    const std::shared_ptr<const RipsTag>& rips_tag() const { return rips_; }
    void set_rips_tag(std::shared_ptr<const RipsTag> tag) { rips_ = std::move(tag); }

    /// Same vertex count and simplex set (names, labels and tags ignored).
    friend bool operator==(const SimplicialComplex& a, const SimplicialComplex& b)
    {
        return a.vertex_count_ == b.vertex_count_ && a.by_dim_ == b.by_dim_;
    }

    /// True iff every simplex of *this is a simplex of other.
    bool is_subcomplex_of(const SimplicialComplex& other) const
    {
        if (vertex_count_ > other.vertex_count_)
            return false;
        for (const auto& layer : by_dim_)
            for (const auto& s : layer)
                if (!other.contains(s))
                    return false;
        return true;
    }

private:
    void assign(std::vector<Simplex> all)
    {
        std::sort(all.begin(), all.end());
        by_dim_.clear();
        for (auto& s : all) {
            const auto d = static_cast<std::size_t>(s.dimension());
            if (by_dim_.size() <= d)
                by_dim_.resize(d + 1);
            by_dim_[d].push_back(std::move(s));
        }
        index_.clear();
        index_.reserve(all.size());
        std::size_t idx = 0;
        for (const auto& layer : by_dim_)
            for (const auto& s : layer)
                index_.emplace(s, std::make_pair(idx++, true));
        for (std::size_t d = 1; d < by_dim_.size(); ++d)
            for (const auto& s : by_dim_[d])
                for (const auto& f : s.facets())
                    index_.at(f).second = false;
        maximal_.clear();
        for (const auto& layer : by_dim_)
            for (const auto& s : layer)
                if (index_.at(s).second)
                    maximal_.push_back(s);

        masks_.clear();
        if (vertex_count_ <= 64) {
            masks_.reserve(index_.size());
            for (const auto& [s, _] : index_) {
                std::uint64_t m = 0;
                for (VertexId v : s)
                    m |= std::uint64_t{1} << v;
                masks_.insert(m);
            }
        }

        closed_nbrs_.assign(vertex_count_, {});
        for (VertexId v = 0; v < vertex_count_; ++v)
            closed_nbrs_[v].push_back(v);
        for (const auto& e : simplices(1)) {
            closed_nbrs_[e[0]].push_back(e[1]);
            closed_nbrs_[e[1]].push_back(e[0]);
        }
        for (auto& n : closed_nbrs_)
            std::sort(n.begin(), n.end());
    }

    std::size_t vertex_count_ = 0;
    std::vector<std::vector<Simplex>> by_dim_;
    // simplex -> (global index, maximal flag)
    std::unordered_map<Simplex, std::pair<std::size_t, bool>, SimplexHash> index_;
    std::vector<Simplex> maximal_;
    std::unordered_set<std::uint64_t> masks_;
    std::vector<std::vector<VertexId>> closed_nbrs_;
    std::vector<std::string> labels_;
    std::string name_;
    std::shared_ptr<const RipsTag> rips_;
};

/// Builds the complex generated by the given facets over vertex_count vertices.
inline SimplicialComplex make_complex(std::size_t vertex_count,
                                      const std::vector<std::vector<VertexId>>& facets,
                                      std::size_t cap = SimplicialComplex::kDefaultSimplexCap)
{
    return SimplicialComplex::from_facets(vertex_count, facets, cap);
}

/**
 * Product complex X ⊠ Y on V × W: a set of pairs is a simplex iff both
 * projections are simplices. Vertex (v, w) gets id v * |W| + w.
 *
 * Built from the pairwise products of maximal simplices, then closed.
 */
inline SimplicialComplex product_complex(const SimplicialComplex& x, const SimplicialComplex& y,
                                         std::size_t cap = SimplicialComplex::kDefaultSimplexCap)
{
    const std::size_t nw = y.vertex_count();
    std::vector<std::vector<VertexId>> facets;
    for (const auto& s : x.maximal_simplices())
        for (const auto& t : y.maximal_simplices()) {
            std::vector<VertexId> f;
            f.reserve(s.size() * t.size());
            for (VertexId v : s)
                for (VertexId w : t)
                    f.push_back(static_cast<VertexId>(v * nw + w));
            facets.push_back(std::move(f));
        }
    auto p = make_complex(x.vertex_count() * nw, facets, cap);
    std::vector<std::string> labels;
    labels.reserve(p.vertex_count());
    for (std::size_t v = 0; v < x.vertex_count(); ++v)
        for (std::size_t w = 0; w < nw; ++w)
            labels.push_back("(" + std::to_string(v) + "," + std::to_string(w) + ")");
    p.set_labels(std::move(labels));
    if (!x.name().empty() && !y.name().empty())
        p.set_name(x.name() + "*" + y.name());
    return p;
}

}  // namespace contig
