#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "contig/complex.hpp"
#include "contig/maps.hpp"

namespace contig {

/// A finite metric space given by its full distance matrix.
class FiniteMetricSpace {
public:
    FiniteMetricSpace() = default;

    /// Row-major n x n matrix; must be symmetric, non-negative, zero on the diagonal.
    FiniteMetricSpace(std::size_t n, std::vector<double> distances)
        : n_(n), d_(std::move(distances))
    {
        if (d_.size() != n_ * n_)
            throw InvalidArgument("distance matrix has wrong size");
        for (std::size_t i = 0; i < n_; ++i) {
            if (d_[i * n_ + i] != 0.0)
                throw InvalidArgument("distance matrix diagonal must be zero");
            for (std::size_t j = 0; j < n_; ++j) {
                const double v = d_[i * n_ + j];
                if (!(v >= 0.0) || !std::isfinite(v))
                    throw InvalidArgument("distances must be finite and non-negative");
                if (v != d_[j * n_ + i])
                    throw InvalidArgument("distance matrix must be symmetric");
            }
        }
    }

    /// Euclidean distances between the given points.
    static FiniteMetricSpace from_points(const std::vector<std::vector<double>>& points)
    {
        const std::size_t n = points.size();
        std::vector<double> d(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            if (points[i].size() != points[0].size())
                throw InvalidArgument("points have inconsistent dimension");
            for (std::size_t j = i + 1; j < n; ++j) {
                double s = 0.0;
                for (std::size_t k = 0; k < points[i].size(); ++k) {
                    const double diff = points[i][k] - points[j][k];
                    s += diff * diff;
                }
                d[i * n + j] = d[j * n + i] = std::sqrt(s);
            }
        }
        return FiniteMetricSpace(n, std::move(d));
    }

    std::size_t size() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
    const std::vector<double>& matrix() const { return d_; }

    /// Reported, not enforced.
    bool satisfies_triangle_inequality() const
    {
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                for (std::size_t k = 0; k < n_; ++k)
                    if ((*this)(i, k) > (*this)(i, j) + (*this)(j, k))
                        return false;
        return true;
    }

    /// Largest pairwise distance among the given points (0 for one point).
    double diameter(std::span<const VertexId> points) const
    {
        double best = 0.0;
        for (std::size_t a = 0; a < points.size(); ++a)
            for (std::size_t b = a + 1; b < points.size(); ++b)
                best = std::max(best, (*this)(points[a], points[b]));
        return best;
    }

    /// Sorted distinct off-diagonal distances.
    std::vector<double> distinct_distances() const
    {
        std::vector<double> out;
        out.reserve(n_ * (n_ - (n_ > 0 ? 1 : 0)) / 2);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i + 1; j < n_; ++j)
                out.push_back((*this)(i, j));
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

private:
    std::size_t n_ = 0;
    std::vector<double> d_;
};

/// Marks a complex as R_epsilon(space) truncated at max_dim.
struct RipsTag {
    std::shared_ptr<const FiniteMetricSpace> space;
    double epsilon = 0.0;
    int max_dim = 0;
};

/**
 * Vietoris-Rips complex: subsets of at most max_dim + 1 points with all
 * pairwise distances <= epsilon. Cliques of the epsilon-graph are grown by
 * adding higher-indexed common neighbours.
 */
inline SimplicialComplex rips_complex(std::shared_ptr<const FiniteMetricSpace> space, double epsilon,
                                      int max_dim = 2,
                                      std::size_t cap = SimplicialComplex::kDefaultSimplexCap)
{
    if (!(epsilon >= 0.0))
        throw InvalidArgument("epsilon must be non-negative");
    const FiniteMetricSpace& m = *space;
    const std::size_t n = m.size();
    std::vector<std::vector<VertexId>> upper(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (m(i, j) <= epsilon)
                upper[i].push_back(static_cast<VertexId>(j));

    std::vector<std::vector<VertexId>> facets;
    std::size_t total = 0;
    std::vector<VertexId> clique;
    auto expand = [&](auto&& self, std::vector<VertexId> candidates) -> void {
        bool extended = false;
        if (static_cast<int>(clique.size()) <= max_dim) {
            for (std::size_t a = 0; a < candidates.size(); ++a) {
                const VertexId u = candidates[a];
                std::vector<VertexId> next;
                for (std::size_t b = a + 1; b < candidates.size(); ++b)
                    if (m(u, candidates[b]) <= epsilon)
                        next.push_back(candidates[b]);
                clique.push_back(u);
                if (++total > cap)
                    throw CapExceeded("Rips complex size", cap);
                self(self, std::move(next));
                clique.pop_back();
                extended = true;
            }
        }
        if (!extended)
            facets.push_back(clique);
    };
    for (std::size_t i = 0; i < n; ++i) {
        clique.assign(1, static_cast<VertexId>(i));
        expand(expand, upper[i]);
    }
    auto c = make_complex(n, facets, cap);
    c.set_rips_tag(std::make_shared<RipsTag>(RipsTag{std::move(space), epsilon, max_dim}));
    c.set_name("rips");
    return c;
}

/// Rips complexes at every critical value, built on request.
class RipsFiltration {
public:
    RipsFiltration(std::shared_ptr<const FiniteMetricSpace> space, int max_dim = 2)
        : space_(std::move(space)), critical_(space_->distinct_distances()), max_dim_(max_dim)
    {
        if (space_->size() == 0)
            throw InvalidArgument("metric space must have at least one point");
    }

    const std::vector<double>& critical_values() const { return critical_; }
    int max_dim() const { return max_dim_; }
    const std::shared_ptr<const FiniteMetricSpace>& space() const { return space_; }

    /// Grades including the discrete stage: 0, eps_1, ..., eps_m.
    std::vector<double> grades() const
    {
        std::vector<double> g{0.0};
        for (double e : critical_)
            if (e > 0.0)
                g.push_back(e);
        return g;
    }

    SimplicialComplex complex_at(double epsilon) const
    {
        return rips_complex(space_, epsilon, max_dim_);
    }

private:
    std::shared_ptr<const FiniteMetricSpace> space_;
    std::vector<double> critical_;
    int max_dim_;
};

inline RipsFiltration critical_filtration(std::shared_ptr<const FiniteMetricSpace> space, int max_dim = 2)
{
    return RipsFiltration(std::move(space), max_dim);
}

/**
 * Mutual contiguity into a Rips complex via the metric: for every maximal
 * domain simplex, all images under all maps lie within epsilon of each other.
 */
inline bool rips_contiguous(const SimplicialComplex& x, const FiniteMetricSpace& m, double epsilon,
                            std::span<const Assignment> maps)
{
    std::vector<VertexId> image;
    for (const auto& s : x.maximal_simplices()) {
        image.clear();
        for (const auto& f : maps)
            for (VertexId v : s)
                image.push_back(f[v]);
        for (std::size_t a = 0; a < image.size(); ++a)
            for (std::size_t b = a + 1; b < image.size(); ++b)
                if (m(image[a], image[b]) > epsilon)
                    return false;
    }
    return true;
}

inline bool rips_contiguous(std::span<const SimplicialMap> maps, double epsilon)
{
    if (maps.empty())
        return true;
    const auto& tag = maps.front().codomain().rips_tag();
    if (!tag)
        throw InvalidArgument("codomain is not tagged as a Rips complex");
    std::vector<Assignment> raw;
    for (const auto& f : maps) {
        if (f.codomain_ptr() != maps.front().codomain_ptr() ||
            f.domain_ptr() != maps.front().domain_ptr())
            throw InvalidArgument("maps do not share domain and codomain");
        raw.push_back(f.assignment());
    }
    return rips_contiguous(maps.front().domain(), *tag->space, epsilon, raw);
}

}  // namespace contig
