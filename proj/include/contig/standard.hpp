#pragma once

#include <exception>
#include <optional>
#include <string>
#include <vector>

#include "contig/complex.hpp"
#include "contig/subdivision.hpp"

namespace contig {

/// The standard n-simplex on vertices 0..n.
inline SimplicialComplex standard_simplex(int n)
{
    if (n < 0)
        throw InvalidArgument("simplex dimension must be non-negative");
    std::vector<VertexId> all;
    for (int i = 0; i <= n; ++i)
        all.push_back(static_cast<VertexId>(i));
    auto c = make_complex(static_cast<std::size_t>(n) + 1, {all});
    c.set_name(n == 0 ? "point" : "simplex" + std::to_string(n));
    return c;
}

inline SimplicialComplex point_complex() { return standard_simplex(0); }

/// Boundary of the standard n-simplex (n >= 1).
inline SimplicialComplex boundary_complex(int n)
{
    if (n < 1)
        throw InvalidArgument("boundary of a simplex needs n >= 1");
    std::vector<std::vector<VertexId>> facets;
    for (int skip = 0; skip <= n; ++skip) {
        std::vector<VertexId> f;
        for (int i = 0; i <= n; ++i)
            if (i != skip)
                f.push_back(static_cast<VertexId>(i));
        facets.push_back(std::move(f));
    }
    auto c = make_complex(static_cast<std::size_t>(n) + 1, facets);
    c.set_name("boundary" + std::to_string(n));
    return c;
}

/// The k-gon S^1_k with edges {i, i+1 mod k}; base point is vertex 0.
inline SimplicialComplex circle_complex(int k)
{
    if (k < 3)
        throw InvalidArgument("a simplicial circle needs at least 3 vertices");
    std::vector<std::vector<VertexId>> facets;
    for (int i = 0; i < k; ++i)
        facets.push_back({static_cast<VertexId>(i), static_cast<VertexId>((i + 1) % k)});
    auto c = make_complex(static_cast<std::size_t>(k), facets);
    c.set_name("circle" + std::to_string(k));
    return c;
}

/**
 * Nine-vertex torus: the 3x3 grid with opposite sides identified, each
 * square split along the diagonal from (x, y+1) to (x+1, y). Vertex
 * (x, y) has id 3y + x. 9 vertices, 27 edges, 18 triangles.
 */
inline SimplicialComplex torus_complex()
{
    auto id = [](int x, int y) { return static_cast<VertexId>((y % 3) * 3 + (x % 3)); };
    std::vector<std::vector<VertexId>> facets;
    for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 3; ++x) {
            facets.push_back({id(x, y), id(x + 1, y), id(x, y + 1)});
            facets.push_back({id(x + 1, y), id(x, y + 1), id(x + 1, y + 1)});
        }
    auto c = make_complex(9, facets);
    c.set_name("torus_T");
    return c;
}

/**
 * Doubly pinched sphere: Sd(boundary of the 3-simplex) plus an edge between
 * the barycenters of triangles {0,1,2},{0,1,3} and another between those
 * of {0,2,3},{1,2,3}. 14 vertices, 38 edges, 24 triangles. Ids follow the
 * barycentric subdivision, so 0..3 are the original vertices.
 */
inline SimplicialComplex pinched_complex()
{
    const auto sd = barycentric_subdivision(boundary_complex(3));
    auto bary = [&](std::initializer_list<VertexId> tri) {
        return static_cast<VertexId>(*sd.ancestor.index_of(Simplex(tri)));
    };
    std::vector<std::vector<VertexId>> facets;
    for (const auto& m : sd.refined.maximal_simplices())
        facets.emplace_back(m.begin(), m.end());
    facets.push_back({bary({0, 1, 2}), bary({0, 1, 3})});
    facets.push_back({bary({0, 2, 3}), bary({1, 2, 3})});
    auto c = make_complex(sd.refined.vertex_count(), facets);
    c.set_name("pinched_P");
    return c;
}

/**
 * Parses a standard complex name: point, simplex<n>, boundary<n>,
 * circle<k>, torus_T, pinched_P. "boundary2" is the usual triangle circle.
 */
inline SimplicialComplex standard_complex(const std::string& name)
{
    auto suffix = [&](const std::string& prefix) -> std::optional<int> {
        if (name.rfind(prefix, 0) != 0 || name.size() == prefix.size())
            return std::nullopt;
        try {
            std::size_t used = 0;
            int v = std::stoi(name.substr(prefix.size()), &used);
            if (used != name.size() - prefix.size())
                return std::nullopt;
            return v;
        } catch (const std::exception&) {
            return std::nullopt;
        }
    };
    if (name == "point")
        return point_complex();
    if (name == "torus_T" || name == "torus")
        return torus_complex();
    if (name == "pinched_P" || name == "pinched")
        return pinched_complex();
    if (auto n = suffix("simplex"))
        return standard_simplex(*n);
    if (auto n = suffix("boundary"))
        return boundary_complex(*n);
    if (auto n = suffix("circle"))
        return circle_complex(*n);
    throw InvalidArgument("unknown standard complex '" + name + "'");
}

}  // namespace contig
