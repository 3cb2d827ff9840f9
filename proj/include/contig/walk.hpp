#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "contig/complex.hpp"
#include "contig/maps.hpp"
#include "contig/random.hpp"

namespace contig {

/// All-pairs graph distances on the 1-skeleton of a complex.
class DistanceTable {
public:
    static constexpr std::uint16_t kUnreachable = std::numeric_limits<std::uint16_t>::max();

    DistanceTable() = default;

    static DistanceTable bfs(const SimplicialComplex& y)
    {
        DistanceTable t;
        t.n_ = y.vertex_count();
        t.d_.assign(t.n_ * t.n_, kUnreachable);
        std::vector<VertexId> queue;
        for (VertexId s = 0; s < t.n_; ++s) {
            std::uint16_t* row = &t.d_[s * t.n_];
            row[s] = 0;
            queue.assign(1, s);
            for (std::size_t h = 0; h < queue.size(); ++h) {
                const VertexId u = queue[h];
                for (VertexId w : y.closed_neighbors()[u])
                    if (row[w] == kUnreachable) {
                        row[w] = static_cast<std::uint16_t>(row[u] + 1);
                        queue.push_back(w);
                    }
            }
        }
        return t;
    }

    /**
     * Like bfs(), but reuses a table stored under $CONTIG_CACHE_DIR when that
     * variable is set. Files are keyed by a hash of the maximal simplices.
     */
    static DistanceTable cached(const SimplicialComplex& y)
    {
        const char* dir = std::getenv("CONTIG_CACHE_DIR");
        if (!dir || !*dir)
            return bfs(y);
        std::uint64_t h = 1469598103934665603ULL;
        auto mix = [&](std::uint64_t v) {
            h ^= v;
            h *= 1099511628211ULL;
        };
        mix(y.vertex_count());
        for (const auto& s : y.maximal_simplices()) {
            mix(s.size());
            for (VertexId v : s)
                mix(v);
        }
        const auto path = std::filesystem::path(dir) / ("bfs-" + std::to_string(h) + ".bin");
        const std::size_t n = y.vertex_count();
        if (std::ifstream in{path, std::ios::binary}) {
            std::uint64_t stored = 0;
            in.read(reinterpret_cast<char*>(&stored), sizeof stored);
            DistanceTable t;
            t.n_ = n;
            t.d_.resize(n * n);
            in.read(reinterpret_cast<char*>(t.d_.data()), static_cast<std::streamsize>(n * n * sizeof(std::uint16_t)));
            if (in && stored == n)
                return t;
        }
        auto t = bfs(y);
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        const auto tmp = path.string() + ".tmp";
        if (std::ofstream out{tmp, std::ios::binary}) {
            const std::uint64_t stored = n;
            out.write(reinterpret_cast<const char*>(&stored), sizeof stored);
            out.write(reinterpret_cast<const char*>(t.d_.data()), static_cast<std::streamsize>(n * n * sizeof(std::uint16_t)));
            out.close();
            std::filesystem::rename(tmp, path, ec);
        }
        return t;
    }

    std::size_t size() const { return n_; }
    std::uint16_t operator()(VertexId a, VertexId b) const { return d_[a * n_ + b]; }

    bool connected() const
    {
        return std::find(d_.begin(), d_.end(), kUnreachable) == d_.end();
    }

private:
    std::size_t n_ = 0;
    std::vector<std::uint16_t> d_;
};

/// Sum over domain vertices of d_Y(f(v), g(v)); nullopt when some pair is unreachable.
inline std::optional<std::uint64_t> map_distance(const DistanceTable& d, std::span<const VertexId> f,
                                                 std::span<const VertexId> g)
{
    if (f.size() != g.size())
        throw InvalidArgument("maps have different domains");
    std::uint64_t total = 0;
    for (std::size_t v = 0; v < f.size(); ++v) {
        const auto e = d(f[v], g[v]);
        if (e == DistanceTable::kUnreachable)
            return std::nullopt;
        total += e;
    }
    return total;
}

inline std::optional<std::uint64_t> map_distance(const SimplicialMap& f, const SimplicialMap& g)
{
    if (!(f.codomain_ptr() == g.codomain_ptr() || f.codomain() == g.codomain()) ||
        !(f.domain_ptr() == g.domain_ptr() || f.domain() == g.domain()))
        throw InvalidArgument("maps do not share domain and codomain");
    return map_distance(DistanceTable::bfs(f.codomain()), f.assignment(), g.assignment());
}

/// Which single-vertex changes the walk may take.
enum class StepSoundness {
    PaperLiteral,    ///< the changed map only has to be simplicial
    ContiguousSteps  ///< the changed map must also be contiguous to the current one
};

struct WalkConfig {
    double kappa = 0.1;
    std::uint64_t max_iters = 500'000;
    std::uint64_t seed = 0;
    StepSoundness mode = StepSoundness::ContiguousSteps;
    /// Proposals tried per iteration before the iteration is spent without a move.
    unsigned max_attempts = 32;

    void validate() const
    {
        if (!(kappa >= 0.0 && kappa <= 1.0))
            throw InvalidArgument("kappa must lie in [0, 1]");
        if (max_iters < 1)
            throw InvalidArgument("max_iters must be at least 1");
        if (max_attempts < 1)
            throw InvalidArgument("max_attempts must be at least 1");
    }
};

/// A path of maps from f to g changing one vertex per step.
struct WalkCertificate {
    std::vector<Assignment> steps;
    bool verified = false;
};

struct WalkResult {
    bool found = false;
    bool found_early = false;  // stopped by the observer of run_observed
    std::uint64_t iterations = 0;
    std::optional<WalkCertificate> certificate;
};

/**
 * Local search between maps x -> y. Candidate values for a vertex depend
 * only on the current images of its closed star, so they are computed once
 * per pattern and cached.
 */
class WalkEngine {
public:
    WalkEngine(const SimplicialComplex& x, const SimplicialComplex& y, std::optional<VertexId> fixed_vertex,
               StepSoundness mode)
        : WalkEngine(x, y, fixed_vertex, mode, DistanceTable::cached(y))
    {
    }

    WalkEngine(const SimplicialComplex& x, const SimplicialComplex& y, std::optional<VertexId> fixed_vertex,
               StepSoundness mode, DistanceTable dist)
        : x_(&x), y_(&y), mode_(mode), dist_(std::move(dist))
    {
        if (fixed_vertex && *fixed_vertex >= x.vertex_count())
            throw InvalidArgument("fixed vertex out of range");
        for (VertexId v = 0; v < x.vertex_count(); ++v)
            if (!fixed_vertex || v != *fixed_vertex)
                mutable_.push_back(v);

        for (VertexId c = 0; c < y.vertex_count(); ++c)
            all_.push_back(c);
        Rng zr(0x5eedULL, 0);
        zobrist_.resize(x.vertex_count() * y.vertex_count());
        for (auto& z : zobrist_)
            z = zr();
        const std::size_t nx = x.vertex_count();
        star_.resize(nx);
        closed_star_.resize(nx);
        for (const auto& s : x.maximal_simplices())
            for (VertexId v : s) {
                std::vector<VertexId> others;
                for (VertexId w : s)
                    if (w != v)
                        others.push_back(w);
                star_[v].push_back(std::move(others));
                closed_star_[v].insert(closed_star_[v].end(), s.begin(), s.end());
            }
        for (auto& cs : closed_star_) {
            std::sort(cs.begin(), cs.end());
            cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
        }

        // Dense pattern tables where they stay small, hashing otherwise.
        const std::size_t ny = y.vertex_count();
        dense_.resize(nx);
        for (VertexId v = 0; v < nx; ++v) {
            std::size_t size = 1;
            bool small = true;
            for (std::size_t i = 0; i < closed_star_[v].size() && small; ++i) {
                size *= ny;
                small = size <= (std::size_t{1} << 20);
            }
            if (small)
                dense_[v].assign(size, kUnfilled);
        }
    }

    const DistanceTable& distances() const { return dist_; }
    const SimplicialComplex& domain() const { return *x_; }
    const SimplicialComplex& codomain() const { return *y_; }
    StepSoundness mode() const { return mode_; }

    /// Values c != f(v) such that changing f at v to c is an allowed step.
    std::span<const VertexId> candidates(VertexId v, std::span<const VertexId> f)
    {
        std::uint64_t key = 0;
        for (VertexId w : closed_star_[v])
            key = key * y_->vertex_count() + f[w];
        std::uint32_t slot;
        if (!dense_[v].empty()) {
            slot = dense_[v][key];
            if (slot == kUnfilled)
                slot = dense_[v][key] = fill(v, f);
        } else {
            const std::uint64_t hk = key * x_->vertex_count() + v;
            auto it = sparse_.find(hk);
            if (it == sparse_.end())
                it = sparse_.emplace(hk, fill(v, f)).first;
            slot = it->second;
        }
        const auto [begin, end] = ranges_[slot];
        return {pool_.data() + begin, end - begin};
    }

    /**
     * One run of the local search from f towards g. With a certificate the
     * visited path is loop-erased and checked step by step.
     */
    WalkResult run(std::span<const VertexId> f, std::span<const VertexId> g, const WalkConfig& cfg, Rng& rng,
                   bool want_certificate = false)
    {
        cfg.validate();
        const std::size_t nx = x_->vertex_count();
        if (f.size() != nx || g.size() != nx)
            throw InvalidArgument("assignment length does not match domain vertex count");
        for (VertexId v = 0; v < nx; ++v)
            if (std::find(mutable_.begin(), mutable_.end(), v) == mutable_.end() && f[v] != g[v])
                return {};

        Assignment cur(f.begin(), f.end());
        std::size_t mismatches = 0;
        for (std::size_t v = 0; v < nx; ++v)
            mismatches += cur[v] != g[v];

        std::vector<Assignment> path;
        std::unordered_map<std::string, std::size_t> seen;
        if (want_certificate) {
            path.push_back(cur);
            seen.emplace(assignment_key(cur), 0);
        }

        WalkResult result;
        std::uint64_t i = 0;
        while (mismatches != 0) {
            if (i >= cfg.max_iters) {
                result.iterations = i;
                return result;
            }
            ++i;
            if (mutable_.empty())
                continue;
            for (unsigned attempt = 0; attempt < cfg.max_attempts; ++attempt) {
                const VertexId v = mutable_[uniform_below(rng, mutable_.size())];
                const auto cand = candidates(v, cur);
                if (cand.empty())
                    continue;
                const VertexId c = cand[uniform_below(rng, cand.size())];
                const int delta = int{dist_(c, g[v])} - int{dist_(cur[v], g[v])};
                if (delta > 0 && !(uniform_unit(rng) < cfg.kappa))
                    continue;
                mismatches -= cur[v] != g[v];
                mismatches += c != g[v];
                cur[v] = c;
                if (want_certificate) {
                    auto [it, fresh] = seen.emplace(assignment_key(cur), path.size());
                    if (fresh) {
                        path.push_back(cur);
                    } else {
                        for (std::size_t j = it->second + 1; j < path.size(); ++j)
                            seen.erase(assignment_key(path[j]));
                        path.resize(it->second + 1);
                    }
                }
                break;
            }
        }
        result.found = true;
        result.iterations = i;
        if (want_certificate) {
            WalkCertificate cert;
            cert.steps = std::move(path);
            cert.verified = verify(cert.steps);
            result.certificate = std::move(cert);
        }
        return result;
    }

    /// Zobrist hash of an assignment; updated incrementally during walks.
    std::uint64_t hash(std::span<const VertexId> f) const
    {
        std::uint64_t h = 0;
        for (std::size_t v = 0; v < f.size(); ++v)
            h ^= zobrist_[v * y_->vertex_count() + f[v]];
        return h;
    }

    /**
     * Same search as run(), reporting the hash of every state it visits
     * (the start included) to on_state. When on_state returns true the walk
     * stops and the result is marked as found early.
     */
    template <class OnState>
    WalkResult run_observed(std::span<const VertexId> f, std::span<const VertexId> g, const WalkConfig& cfg,
                            Rng& rng, OnState&& on_state)
    {
        cfg.validate();
        const std::size_t nx = x_->vertex_count();
        const std::size_t ny = y_->vertex_count();
        if (f.size() != nx || g.size() != nx)
            throw InvalidArgument("assignment length does not match domain vertex count");
        for (VertexId v = 0; v < nx; ++v)
            if (std::find(mutable_.begin(), mutable_.end(), v) == mutable_.end() && f[v] != g[v])
                return {};

        Assignment cur(f.begin(), f.end());
        std::size_t mismatches = 0;
        for (std::size_t v = 0; v < nx; ++v)
            mismatches += cur[v] != g[v];
        std::uint64_t h = hash(cur);

        WalkResult result;
        if (on_state(h)) {
            result.found = result.found_early = true;
            return result;
        }
        std::uint64_t i = 0;
        while (mismatches != 0) {
            if (i >= cfg.max_iters) {
                result.iterations = i;
                return result;
            }
            ++i;
            if (mutable_.empty())
                continue;
            for (unsigned attempt = 0; attempt < cfg.max_attempts; ++attempt) {
                const VertexId v = mutable_[uniform_below(rng, mutable_.size())];
                const auto cand = candidates(v, cur);
                if (cand.empty())
                    continue;
                const VertexId c = cand[uniform_below(rng, cand.size())];
                const int delta = int{dist_(c, g[v])} - int{dist_(cur[v], g[v])};
                if (delta > 0 && !(uniform_unit(rng) < cfg.kappa))
                    continue;
                mismatches -= cur[v] != g[v];
                mismatches += c != g[v];
                h ^= zobrist_[v * ny + cur[v]] ^ zobrist_[v * ny + c];
                cur[v] = c;
                if (on_state(h)) {
                    result.found = result.found_early = true;
                    result.iterations = i;
                    return result;
                }
                break;
            }
        }
        result.found = true;
        result.iterations = i;
        return result;
    }

    /// Consecutive steps differ at one vertex and are contiguous.
    bool verify(const std::vector<Assignment>& steps) const
    {
        for (const auto& s : steps)
            if (!is_simplicial(s, *x_, *y_))
                return false;
        for (std::size_t i = 0; i + 1 < steps.size(); ++i) {
            std::size_t diff = 0;
            for (std::size_t v = 0; v < steps[i].size(); ++v)
                diff += steps[i][v] != steps[i + 1][v];
            if (diff != 1)
                return false;
            const Assignment pair[] = {steps[i], steps[i + 1]};
            if (!mutually_contiguous(*x_, *y_, pair))
                return false;
        }
        return true;
    }

private:
    static constexpr std::uint32_t kUnfilled = std::numeric_limits<std::uint32_t>::max();

    std::uint32_t fill(VertexId v, std::span<const VertexId> f)
    {
        const std::uint32_t begin = static_cast<std::uint32_t>(pool_.size());
        // Every admissible value is adjacent to the image of some vertex.
        const std::vector<VertexId>* source = &y_->closed_neighbors()[f[v]];
        if (mode_ == StepSoundness::PaperLiteral) {
            source = &all_;
            for (const auto& others : star_[v])
                if (!others.empty()) {
                    source = &y_->closed_neighbors()[f[others.front()]];
                    break;
                }
        }
        std::vector<VertexId> image;
        for (VertexId c : *source) {
            if (c == f[v])
                continue;
            bool ok = true;
            for (const auto& others : star_[v]) {
                image.clear();
                for (VertexId w : others)
                    image.push_back(f[w]);
                image.push_back(c);
                if (mode_ == StepSoundness::ContiguousSteps)
                    image.push_back(f[v]);
                if (!y_->spans_simplex(image)) {
                    ok = false;
                    break;
                }
            }
            if (ok)
                pool_.push_back(c);
        }
        ranges_.emplace_back(begin, static_cast<std::uint32_t>(pool_.size()));
        return static_cast<std::uint32_t>(ranges_.size() - 1);
    }

    const SimplicialComplex* x_;
    const SimplicialComplex* y_;
    StepSoundness mode_;
    DistanceTable dist_;
    std::vector<VertexId> mutable_;
    std::vector<VertexId> all_;
    std::vector<std::uint64_t> zobrist_;
    std::vector<std::vector<std::vector<VertexId>>> star_;
    std::vector<std::vector<VertexId>> closed_star_;
    std::vector<std::vector<std::uint32_t>> dense_;
    std::unordered_map<std::uint64_t, std::uint32_t> sparse_;
    std::vector<VertexId> pool_;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> ranges_;
};

/**
 * Randomized same-class test. Found comes with a certificate; in
 * contiguous-steps mode a verified certificate proves f and g share a
 * class. Not found proves nothing.
 */
inline WalkResult same_class_walk(const SimplicialMap& f, const SimplicialMap& g, const WalkConfig& cfg,
                                  std::optional<VertexId> fixed_vertex = std::nullopt)
{
    if (!(f.domain_ptr() == g.domain_ptr() || f.domain() == g.domain()) ||
        !(f.codomain_ptr() == g.codomain_ptr() || f.codomain() == g.codomain()))
        throw InvalidArgument("maps do not share domain and codomain");
    WalkEngine engine(f.domain(), f.codomain(), fixed_vertex, cfg.mode);
    Rng rng = stream_rng(cfg.seed, 0);
    return engine.run(f.assignment(), g.assignment(), cfg, rng, true);
}

}  // namespace contig
