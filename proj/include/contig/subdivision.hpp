#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "contig/complex.hpp"

namespace contig {

using Rational = boost::multiprecision::cpp_rational;

/**
 * A point of |X| given by barycentric weights on ancestor vertices.
 * Weights are exact, strictly positive and sum to one; entries are sorted
 * by vertex id.
 */
struct GeometricVertex {
    std::vector<std::pair<VertexId, Rational>> weights;

    static GeometricVertex unit(VertexId v) { return {{{v, Rational(1)}}}; }

    Simplex support() const
    {
        std::vector<VertexId> s;
        s.reserve(weights.size());
        for (const auto& [v, _] : weights)
            s.push_back(v);
        return Simplex(std::move(s));
    }

    Rational weight(VertexId v) const
    {
        auto it = std::lower_bound(weights.begin(), weights.end(), v,
                                   [](const auto& e, VertexId x) { return e.first < x; });
        if (it == weights.end() || it->first != v)
            return Rational(0);
        return it->second;
    }

    friend bool operator==(const GeometricVertex&, const GeometricVertex&) = default;
};

/// Squared standard-metric distance, ancestor vertices treated as orthonormal.
inline Rational squared_distance(const GeometricVertex& a, const GeometricVertex& b)
{
    Rational sum(0);
    auto i = a.weights.begin();
    auto j = b.weights.begin();
    while (i != a.weights.end() || j != b.weights.end()) {
        Rational diff;
        if (j == b.weights.end() || (i != a.weights.end() && i->first < j->first)) {
            diff = i->second;
            ++i;
        } else if (i == a.weights.end() || j->first < i->first) {
            diff = j->second;
            ++j;
        } else {
            diff = i->second - j->second;
            ++i;
            ++j;
        }
        sum += diff * diff;
    }
    return sum;
}

/**
 * A subdivision X' of an ancestor complex X. Each refined vertex carries
 * its position in |X|; refined vertices 0..|V|-1 are the ancestor vertices.
 */
struct Subdivision {
    SimplicialComplex ancestor;
    SimplicialComplex refined;
    std::vector<GeometricVertex> embedding;

    /**
     * Minimal ancestor simplex whose geometric simplex contains sigma':
     * the union of the supports of its vertices.
     */
    Simplex carrier(const Simplex& refined_simplex) const
    {
        if (!refined.contains(refined_simplex))
            throw InvalidArgument("simplex is not in the refined complex");
        std::vector<VertexId> out;
        for (VertexId v : refined_simplex)
            for (const auto& [a, _] : embedding[v].weights)
                out.push_back(a);
        return Simplex(std::move(out));
    }
};

inline Simplex carrier(const Subdivision& s, const Simplex& refined_simplex)
{
    return s.carrier(refined_simplex);
}

/// X regarded as a subdivision of itself.
inline Subdivision identity_subdivision(const SimplicialComplex& x)
{
    Subdivision s{x, x, {}};
    s.embedding.reserve(x.vertex_count());
    for (VertexId v = 0; v < x.vertex_count(); ++v)
        s.embedding.push_back(GeometricVertex::unit(v));
    return s;
}

/**
 * Barycentric subdivision of a subdivision: one new vertex per simplex of
 * s.refined at its barycenter, simplices the flags sigma_0 < ... < sigma_n.
 * The new vertex for the refined simplex with global index i gets id i, so
 * the old vertices keep their ids. Coordinates are composed through s, so
 * the result is again a subdivision of s.ancestor.
 */
inline Subdivision barycentric_subdivision(const Subdivision& s)
{
    const SimplicialComplex& x = s.refined;
    const auto simplices = x.all_simplices();

    Subdivision out;
    out.ancestor = s.ancestor;
    out.embedding.reserve(simplices.size());
    for (const auto& sigma : simplices) {
        std::vector<std::pair<VertexId, Rational>> acc;
        const Rational scale(1, static_cast<long long>(sigma.size()));
        for (VertexId v : sigma)
            for (const auto& [a, w] : s.embedding[v].weights)
                acc.emplace_back(a, w * scale);
        std::sort(acc.begin(), acc.end(),
                  [](const auto& l, const auto& r) { return l.first < r.first; });
        GeometricVertex g;
        for (auto& [a, w] : acc) {
            if (!g.weights.empty() && g.weights.back().first == a)
                g.weights.back().second += w;
            else
                g.weights.emplace_back(a, std::move(w));
        }
        out.embedding.push_back(std::move(g));
    }

    // Maximal flags come from orderings of the vertices of maximal simplices.
    std::vector<std::vector<VertexId>> facets;
    for (const auto& m : x.maximal_simplices()) {
        std::vector<VertexId> perm(m.begin(), m.end());
        do {
            std::vector<VertexId> flag;
            flag.reserve(perm.size());
            std::vector<VertexId> prefix;
            for (VertexId v : perm) {
                prefix.push_back(v);
                flag.push_back(static_cast<VertexId>(*x.index_of(Simplex(prefix))));
            }
            facets.push_back(std::move(flag));
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    out.refined = make_complex(simplices.size(), facets);
    if (!x.name().empty())
        out.refined.set_name("Sd(" + x.name() + ")");
    return out;
}

inline Subdivision barycentric_subdivision(const SimplicialComplex& x)
{
    return barycentric_subdivision(identity_subdivision(x));
}

/// n-fold iterated barycentric subdivision (n = 0 gives the identity).
inline Subdivision iterated_subdivision(const SimplicialComplex& x, int n)
{
    Subdivision s = identity_subdivision(x);
    for (int i = 0; i < n; ++i)
        s = barycentric_subdivision(s);
    return s;
}

/// Exact squared mesh: max over edges of the squared distance between endpoints.
inline Rational mesh_size_squared(const Subdivision& s)
{
    Rational best(0);
    for (const auto& e : s.refined.simplices(1)) {
        Rational d = squared_distance(s.embedding[e[0]], s.embedding[e[1]]);
        if (d > best)
            best = d;
    }
    return best;
}

inline double mesh_size(const Subdivision& s)
{
    return std::sqrt(static_cast<double>(mesh_size_squared(s)));
}

}  // namespace contig
