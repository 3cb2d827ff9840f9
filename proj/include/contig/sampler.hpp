#pragma once

#include <cstddef>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "contig/complex.hpp"
#include "contig/maps.hpp"
#include "contig/random.hpp"

namespace contig {

using BigInt = boost::multiprecision::cpp_int;

/**
 * Uniform sampler for based maps S^1_k -> y, i.e. closed walks of length k
 * from the base vertex. With collapse allowed a step may stay put (walks in
 * the reflexive closure of the 1-skeleton); otherwise every step follows
 * an edge. counts(j)[w] is the number of length-j walks from w to the base.
 */
class ClosedWalkSampler {
public:
    ClosedWalkSampler(const SimplicialComplex& y, VertexId base, int k, bool allow_collapse = true)
        : base_(base), k_(k), collapse_(allow_collapse)
    {
        if (k < 3)
            throw InvalidArgument("closed walks need k >= 3");
        if (base >= y.vertex_count())
            throw InvalidArgument("base vertex out of range");
        for (VertexId v = 0; v < y.vertex_count(); ++v) {
            std::vector<VertexId> step;
            for (VertexId w : y.closed_neighbors()[v])
                if (allow_collapse || w != v)
                    step.push_back(w);
            steps_.push_back(std::move(step));
        }
        const std::size_t n = y.vertex_count();
        counts_.assign(static_cast<std::size_t>(k) + 1, std::vector<BigInt>(n, 0));
        counts_[0][base] = 1;
        for (int j = 1; j <= k; ++j)
            for (VertexId v = 0; v < n; ++v) {
                BigInt s = 0;
                for (VertexId w : steps_[v])
                    s += counts_[static_cast<std::size_t>(j - 1)][w];
                counts_[static_cast<std::size_t>(j)][v] = std::move(s);
            }
    }

    /// Number of based closed walks of length k.
    const BigInt& total() const { return counts_[static_cast<std::size_t>(k_)][base_]; }
    const std::vector<BigInt>& counts(int j) const { return counts_.at(static_cast<std::size_t>(j)); }
    int k() const { return k_; }
    VertexId base() const { return base_; }
    bool allows_collapse() const { return collapse_; }

    /// Vertex i of the result is the image of circle vertex i; entry 0 is the base.
    Assignment sample(Rng& rng) const
    {
        if (total() == 0)
            throw InvalidArgument("no closed walk of this length exists");
        Assignment walk(static_cast<std::size_t>(k_));
        walk[0] = base_;
        VertexId cur = base_;
        for (int i = 1; i < k_; ++i) {
            const auto& remaining = counts_[static_cast<std::size_t>(k_ - i)];
            BigInt r = uniform_below(rng, counts_[static_cast<std::size_t>(k_ - i + 1)][cur]);
            for (VertexId w : steps_[cur]) {
                if (r < remaining[w]) {
                    cur = w;
                    break;
                }
                r -= remaining[w];
            }
            walk[static_cast<std::size_t>(i)] = cur;
        }
        return walk;
    }

private:
    VertexId base_;
    int k_;
    bool collapse_;
    std::vector<std::vector<VertexId>> steps_;
    std::vector<std::vector<BigInt>> counts_;
};

/// One uniform draw; builds the count tables each call.
inline Assignment uniform_closed_walk(const SimplicialComplex& y, VertexId base, int k, Rng& rng,
                                      bool allow_collapse = true)
{
    return ClosedWalkSampler(y, base, k, allow_collapse).sample(rng);
}

}  // namespace contig
