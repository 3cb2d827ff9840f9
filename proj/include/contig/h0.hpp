#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "contig/complex.hpp"
#include "contig/contiguity.hpp"
#include "contig/homology.hpp"
#include "contig/maps.hpp"
#include "contig/metric.hpp"
#include "contig/standard.hpp"
#include "contig/union_find.hpp"

namespace contig {

/**
 * Degree-0 persistence by union-find. Components are born with their first
 * vertex; when two merge, the younger one dies (elder rule, ties broken by
 * insertion order).
 */
class H0Tracker {
public:
    std::size_t add_vertex(double birth)
    {
        births_.push_back(birth);
        return births_.size() - 1;
    }

    /// An edge exists only once both endpoints do.
    void add_edge(std::size_t a, std::size_t b, double grade)
    {
        edges_.emplace_back(std::max({grade, births_.at(a), births_.at(b)}), a, b);
    }

    std::size_t vertex_count() const { return births_.size(); }

    Barcode barcode(std::vector<double> grades) const
    {
        Barcode out;
        out.degree = 0;
        out.grades = std::move(grades);
        auto edges = edges_;
        std::stable_sort(edges.begin(), edges.end(),
                         [](const auto& l, const auto& r) { return std::get<0>(l) < std::get<0>(r); });
        UnionFind uf(births_.size());
        // Oldest vertex of each component, kept at the root.
        std::vector<std::size_t> oldest(births_.size());
        for (std::size_t i = 0; i < oldest.size(); ++i)
            oldest[i] = i;
        auto elder = [&](std::size_t a, std::size_t b) {
            return births_[a] < births_[b] || (births_[a] == births_[b] && a < b);
        };
        for (const auto& [grade, a, b] : edges) {
            const std::size_t ra = uf.find(a), rb = uf.find(b);
            if (ra == rb)
                continue;
            const std::size_t oa = oldest[ra], ob = oldest[rb];
            const std::size_t young = elder(oa, ob) ? ob : oa;
            const std::size_t old = young == oa ? ob : oa;
            if (births_[young] < grade)
                out.bars.emplace_back(births_[young], grade);
            uf.unite(ra, rb);
            oldest[uf.find(ra)] = old;
        }
        for (std::size_t i = 0; i < births_.size(); ++i)
            if (uf.find(i) == i)
                out.bars.emplace_back(births_[oldest[i]], kInfinity);
        out.normalize();
        return out;
    }

private:
    std::vector<double> births_;
    std::vector<std::tuple<double, std::size_t, std::size_t>> edges_;
};

/// Degree-0 persistence of a Rips filtration, straight from the distance matrix.
inline Barcode rips_h0(const FiniteMetricSpace& m)
{
    H0Tracker t;
    for (std::size_t i = 0; i < m.size(); ++i)
        t.add_vertex(0.0);
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = i + 1; j < m.size(); ++j)
            t.add_edge(i, j, m(i, j));
    std::vector<double> grades{0.0};
    for (double e : m.distinct_distances())
        if (e > 0.0)
            grades.push_back(e);
    return t.barcode(std::move(grades));
}

/// Options shared by the two mapping-complex pipelines.
struct H0PipelineOptions {
    bool based = true;
    VertexId domain_base = 0;
    VertexId codomain_base = 0;
    std::size_t cap = kDefaultMapCap;
};

/// Barcode plus per-stage map and class counts.
struct H0PipelineResult {
    Barcode barcode;
    std::vector<std::size_t> map_counts;
    std::vector<std::size_t> class_counts;
};

/**
 * Persistent H0 of eps -> Map_SC(z, R_eps(M)) over the grades 0 and every
 * critical value up to max_epsilon (all when unset). Maps are enumerated
 * once at the last stage; a map is born at the first grade that bounds the
 * diameter of every image of a maximal simplex. Components are joined by
 * single-vertex contiguous moves, each graded by the first stage in which
 * it is a contiguity.
 */
inline H0PipelineResult persistent_contiguity_h0(const SimplicialComplex& z,
                                                 std::shared_ptr<const FiniteMetricSpace> space,
                                                 int rips_max_dim, std::optional<double> max_epsilon,
                                                 const H0PipelineOptions& opts = {})
{
    const RipsFiltration filt(space, rips_max_dim);
    std::vector<double> grades;
    for (double g : filt.grades())
        if (!max_epsilon || g <= *max_epsilon)
            grades.push_back(g);
    const auto& m = *space;
    const SimplicialComplex top = filt.complex_at(grades.back());

    std::optional<BasePoint> base;
    if (opts.based)
        base = BasePoint{opts.domain_base, opts.codomain_base};
    auto maps = enumerate_assignments(z, top, base, opts.cap);
    const AssignmentIndex index(maps);
    const auto star = maximal_star(z);

    auto stage_grade = [&](double value) {
        return *std::lower_bound(grades.begin(), grades.end(), value);
    };
    std::vector<VertexId> image;
    auto image_diameter = [&](const Assignment& f, const Simplex& s, std::optional<VertexId> extra) {
        image.clear();
        for (VertexId v : s)
            image.push_back(f[v]);
        if (extra)
            image.push_back(*extra);
        return m.diameter(image);
    };

    H0Tracker tracker;
    std::vector<double> birth(maps.size());
    for (std::size_t i = 0; i < maps.size(); ++i) {
        double d = 0.0;
        for (const auto& s : z.maximal_simplices())
            d = std::max(d, image_diameter(maps[i], s, std::nullopt));
        birth[i] = stage_grade(d);
        tracker.add_vertex(birth[i]);
    }
    for (std::size_t i = 0; i < maps.size(); ++i) {
        Assignment g = maps[i];
        for (VertexId v = 0; v < z.vertex_count(); ++v) {
            const VertexId old = g[v];
            for (VertexId c : top.closed_neighbors()[old]) {
                if (c == old)
                    continue;
                g[v] = c;
                const auto j = index.find(g);
                g[v] = old;
                if (!j || *j < i)
                    continue;
                double d = std::max(birth[i], birth[*j]);
                bool fits = true;
                for (const Simplex* s : star[v]) {
                    d = std::max(d, image_diameter(maps[i], *s, c));
                    std::sort(image.begin(), image.end());
                    if (std::unique(image.begin(), image.end()) - image.begin() > rips_max_dim + 1)
                        fits = false;
                }
                if (fits && d <= grades.back())
                    tracker.add_edge(i, *j, stage_grade(d));
            }
        }
    }

    H0PipelineResult out;
    out.barcode = tracker.barcode(grades);
    for (double g : grades) {
        out.map_counts.push_back(static_cast<std::size_t>(
            std::count_if(birth.begin(), birth.end(), [&](double b) { return b <= g; })));
        out.class_counts.push_back(out.barcode.alive_at(g));
    }
    return out;
}

/// One step of a refinement sequence: the finer complex and a map onto the coarser one.
struct RefinementStage {
    SimplicialComplex complex;
    Assignment to_previous;  // empty for the first stage
};

/**
 * Collapse S^1_fine -> S^1_coarse sending vertex j to floor(j * coarse / fine).
 * Consecutive vertices land on equal or adjacent vertices, every vertex is
 * hit and 0 goes to 0. For fine = m * coarse this is j -> floor(j / m).
 */
inline Assignment circle_collapse(int fine, int coarse)
{
    if (coarse < 3 || fine < coarse)
        throw InvalidArgument("circle refinement needs 3 <= coarse <= fine");
    Assignment f(static_cast<std::size_t>(fine));
    for (int j = 0; j < fine; ++j)
        f[static_cast<std::size_t>(j)] = static_cast<VertexId>(static_cast<long long>(j) * coarse / fine);
    return f;
}

/// S^1_{k_0} <- S^1_{k_1} <- ... with the collapse maps between consecutive sizes.
inline std::vector<RefinementStage> circle_refinements(std::span<const int> sizes)
{
    std::vector<RefinementStage> out;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        RefinementStage st{circle_complex(sizes[i]), {}};
        if (i > 0)
            st.to_previous = circle_collapse(sizes[i], sizes[i - 1]);
        out.push_back(std::move(st));
    }
    return out;
}

/// x <- Sd x <- Sd^2 x <- ... connected by approximate_subdivision.
inline std::vector<RefinementStage> subdivision_refinements(const SimplicialComplex& x, int levels,
                                                            Tiebreak rule = Tiebreak::LowestId)
{
    std::vector<RefinementStage> out;
    out.push_back({x, {}});
    for (int i = 0; i < levels; ++i) {
        const auto sd = barycentric_subdivision(out.back().complex);
        out.push_back({sd.refined, approximate_subdivision(sd, rule)});
    }
    return out;
}

/**
 * Persistent H0 of Map_SC(X_0, y) -> Map_SC(X_1, y) -> ... where the
 * structure maps precompose with the given maps X_{n+1} -> X_n. Grades are
 * the stage indices. Connecting maps must be simplicial and onto the
 * vertices, so precomposition is injective and each map keeps its identity
 * across stages.
 */
inline H0PipelineResult persistent_subdivision_h0(std::span<const RefinementStage> stages,
                                                  const SimplicialComplex& y,
                                                  const H0PipelineOptions& opts = {})
{
    H0Tracker tracker;
    H0PipelineResult out;
    std::vector<std::size_t> prev_nodes;
    std::vector<Assignment> prev_maps;
    std::vector<double> grades;
    std::optional<BasePoint> base;
    if (opts.based)
        base = BasePoint{opts.domain_base, opts.codomain_base};

    for (std::size_t n = 0; n < stages.size(); ++n) {
        const auto& x = stages[n].complex;
        const double grade = static_cast<double>(n);
        grades.push_back(grade);
        if (n > 0) {
            const auto& f = stages[n].to_previous;
            const auto& coarse = stages[n - 1].complex;
            if (!is_simplicial(f, x, coarse))
                throw NotSimplicial("connecting map at stage " + std::to_string(n) + " is not simplicial");
            std::vector<char> hit(coarse.vertex_count(), 0);
            for (VertexId w : f)
                hit[w] = 1;
            if (std::find(hit.begin(), hit.end(), 0) != hit.end())
                throw InvalidArgument("connecting map at stage " + std::to_string(n) +
                                      " is not onto the vertices");
            if (base && f[base->first] != base->first)
                throw InvalidArgument("connecting map at stage " + std::to_string(n) +
                                      " does not preserve the base vertex");
        }
        auto maps = enumerate_assignments(x, y, base, opts.cap);
        const AssignmentIndex index(maps);
        std::vector<std::size_t> node(maps.size(), static_cast<std::size_t>(-1));
        if (n > 0) {
            const auto& f = stages[n].to_previous;
            Assignment pulled(x.vertex_count());
            for (std::size_t i = 0; i < prev_maps.size(); ++i) {
                for (VertexId v = 0; v < x.vertex_count(); ++v)
                    pulled[v] = prev_maps[i][f[v]];
                const auto j = index.find(pulled);
                if (!j)
                    throw Error("pulled-back map missing from enumeration");
                node[*j] = prev_nodes[i];
            }
        }
        for (auto& id : node)
            if (id == static_cast<std::size_t>(-1))
                id = tracker.add_vertex(grade);
        const auto star = maximal_star(x);
        for (std::size_t i = 0; i < maps.size(); ++i)
            for_each_single_vertex_neighbor(x, y, maps[i], index, star, [&](std::size_t j) {
                if (j > i)
                    tracker.add_edge(node[i], node[j], grade);
            });
        out.map_counts.push_back(maps.size());
        prev_nodes = std::move(node);
        prev_maps = std::move(maps);
    }
    out.barcode = tracker.barcode(grades);
    for (double g : grades)
        out.class_counts.push_back(out.barcode.alive_at(g));
    return out;
}

}  // namespace contig
