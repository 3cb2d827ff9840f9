#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "contig/complex.hpp"

namespace contig {

/// Arithmetic in GF(p) for a prime p < 2^31.
class PrimeField {
public:
    explicit PrimeField(std::uint32_t p) : p_(p)
    {
        if (!is_prime(p))
            throw InvalidArgument("field characteristic " + std::to_string(p) + " is not prime");
    }

    static bool is_prime(std::uint32_t p)
    {
        if (p < 2)
            return false;
        for (std::uint64_t d = 2; d * d <= p; ++d)
            if (p % d == 0)
                return false;
        return true;
    }

    std::uint32_t characteristic() const { return p_; }
    std::uint32_t add(std::uint32_t a, std::uint32_t b) const { return static_cast<std::uint32_t>((std::uint64_t{a} + b) % p_); }
    std::uint32_t neg(std::uint32_t a) const { return a == 0 ? 0 : p_ - a; }
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const { return static_cast<std::uint32_t>(std::uint64_t{a} * b % p_); }
    std::uint32_t from_int(long long v) const
    {
        long long r = v % static_cast<long long>(p_);
        return static_cast<std::uint32_t>(r < 0 ? r + p_ : r);
    }

    std::uint32_t inv(std::uint32_t a) const
    {
        // a^(p-2)
        std::uint32_t result = 1, base = a, e = p_ - 2;
        while (e) {
            if (e & 1U)
                result = mul(result, base);
            base = mul(base, base);
            e >>= 1U;
        }
        return result;
    }

private:
    std::uint32_t p_;
};

/// Sparse column: (row, nonzero coefficient) sorted by row.
using SparseColumn = std::vector<std::pair<std::size_t, std::uint32_t>>;

/// col += factor * other over GF(p).
inline void axpy(SparseColumn& col, std::uint32_t factor, const SparseColumn& other, const PrimeField& f)
{
    SparseColumn out;
    out.reserve(col.size() + other.size());
    auto i = col.begin();
    auto j = other.begin();
    while (i != col.end() || j != other.end()) {
        if (j == other.end() || (i != col.end() && i->first < j->first)) {
            out.push_back(*i++);
        } else if (i == col.end() || j->first < i->first) {
            out.emplace_back(j->first, f.mul(factor, j->second));
            ++j;
        } else {
            const std::uint32_t v = f.add(i->second, f.mul(factor, j->second));
            if (v != 0)
                out.emplace_back(i->first, v);
            ++i;
            ++j;
        }
    }
    col = std::move(out);
}

/**
 * Boundary matrices of a complex over GF(p). matrices[d] maps d-chains to
 * (d-1)-chains; rows and columns use the per-dimension lexicographic order.
 */
struct ChainBoundary {
    std::vector<std::vector<SparseColumn>> matrices;

    static ChainBoundary of(const SimplicialComplex& x, const PrimeField& field)
    {
        ChainBoundary cb;
        cb.matrices.resize(static_cast<std::size_t>(std::max(0, x.dimension() + 1)));
        std::vector<std::unordered_map<Simplex, std::size_t, SimplexHash>> pos(cb.matrices.size());
        for (int d = 0; d <= x.dimension(); ++d) {
            const auto& layer = x.simplices(d);
            for (std::size_t i = 0; i < layer.size(); ++i)
                pos[static_cast<std::size_t>(d)].emplace(layer[i], i);
        }
        for (int d = 1; d <= x.dimension(); ++d)
            for (const auto& s : x.simplices(d)) {
                SparseColumn col;
                const auto faces = s.facets();
                for (std::size_t i = 0; i < faces.size(); ++i)
                    col.emplace_back(pos[static_cast<std::size_t>(d - 1)].at(faces[i]),
                                     field.from_int(i % 2 == 0 ? 1 : -1));
                std::sort(col.begin(), col.end());
                cb.matrices[static_cast<std::size_t>(d)].push_back(std::move(col));
            }
        return cb;
    }
};

/// Rank of a sparse matrix over GF(p) by column reduction on lowest pivots.
inline std::size_t sparse_rank(std::vector<SparseColumn> columns, const PrimeField& field)
{
    std::unordered_map<std::size_t, std::size_t> pivot_of;
    std::size_t rank = 0;
    for (std::size_t j = 0; j < columns.size(); ++j) {
        auto& col = columns[j];
        while (!col.empty()) {
            auto it = pivot_of.find(col.back().first);
            if (it == pivot_of.end())
                break;
            const auto& other = columns[it->second];
            const std::uint32_t factor =
                field.neg(field.mul(col.back().second, field.inv(other.back().second)));
            axpy(col, factor, other, field);
        }
        if (!col.empty()) {
            pivot_of.emplace(col.back().first, j);
            ++rank;
        }
    }
    return rank;
}

/// Betti numbers beta_0..beta_dim over GF(p).
inline std::vector<std::size_t> betti_numbers(const SimplicialComplex& x, std::uint32_t p = 2)
{
    const PrimeField field(p);
    const auto cb = ChainBoundary::of(x, field);
    const int top = x.dimension();
    if (top < 0)
        return {};
    std::vector<std::size_t> rank(static_cast<std::size_t>(top) + 2, 0);
    for (int d = 1; d <= top; ++d)
        rank[static_cast<std::size_t>(d)] = sparse_rank(cb.matrices[static_cast<std::size_t>(d)], field);
    std::vector<std::size_t> betti;
    for (int d = 0; d <= top; ++d) {
        const std::size_t n = x.count(d);
        betti.push_back(n - rank[static_cast<std::size_t>(d)] - rank[static_cast<std::size_t>(d) + 1]);
    }
    return betti;
}

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Persistence intervals [birth, death) in one degree; death may be infinite.
struct Barcode {
    int degree = 0;
    std::vector<std::pair<double, double>> bars;
    std::vector<double> grades;

    void normalize() { std::sort(bars.begin(), bars.end()); }

    /// Bars alive at grade g, i.e. birth <= g < death.
    std::size_t alive_at(double g) const
    {
        std::size_t n = 0;
        for (const auto& [b, d] : bars)
            if (b <= g && g < d)
                ++n;
        return n;
    }
};

/// One stage of a filtration: a complex and its grade value.
struct FiltrationStage {
    SimplicialComplex complex;
    double grade = 0.0;
};

/**
 * Persistent homology in degrees 0..max_degree of a nested sequence of
 * complexes. Simplices are ordered by first stage, then dimension, then
 * lexicographically, and reduced by the standard column algorithm; a bar's
 * endpoints are the grades of the stages where its simplices enter.
 * Zero-length bars are dropped.
 */
inline std::vector<Barcode> persistent_homology(std::span<const FiltrationStage> stages, int max_degree,
                                                std::uint32_t p = 2)
{
    const PrimeField field(p);
    std::vector<Barcode> out(static_cast<std::size_t>(max_degree) + 1);
    for (int k = 0; k <= max_degree; ++k) {
        out[static_cast<std::size_t>(k)].degree = k;
        for (const auto& s : stages)
            out[static_cast<std::size_t>(k)].grades.push_back(s.grade);
    }
    if (stages.empty())
        return out;

    for (std::size_t i = 1; i < stages.size(); ++i) {
        if (!(stages[i - 1].grade <= stages[i].grade))
            throw NotNested("filtration grades must be non-decreasing");
        if (!stages[i - 1].complex.is_subcomplex_of(stages[i].complex))
            throw NotNested("filtration stage " + std::to_string(i - 1) +
                            " is not contained in stage " + std::to_string(i));
    }

    // Simplexwise order; only dimensions up to max_degree + 1 matter.
    struct Entry {
        std::size_t stage;
        Simplex simplex;
    };
    std::vector<Entry> order;
    std::unordered_map<Simplex, std::size_t, SimplexHash> first_stage;
    for (std::size_t i = 0; i < stages.size(); ++i)
        for (int d = 0; d <= std::min(max_degree + 1, stages[i].complex.dimension()); ++d)
            for (const auto& s : stages[i].complex.simplices(d))
                if (first_stage.emplace(s, i).second)
                    order.push_back({i, s});
    std::stable_sort(order.begin(), order.end(), [](const Entry& a, const Entry& b) {
        if (a.stage != b.stage)
            return a.stage < b.stage;
        return a.simplex < b.simplex;
    });
    std::unordered_map<Simplex, std::size_t, SimplexHash> position;
    for (std::size_t i = 0; i < order.size(); ++i)
        position.emplace(order[i].simplex, i);

    std::vector<SparseColumn> columns(order.size());
    for (std::size_t j = 0; j < order.size(); ++j) {
        const auto faces = order[j].simplex.facets();
        for (std::size_t i = 0; i < faces.size(); ++i)
            columns[j].emplace_back(position.at(faces[i]), field.from_int(i % 2 == 0 ? 1 : -1));
        std::sort(columns[j].begin(), columns[j].end());
    }

    std::unordered_map<std::size_t, std::size_t> pivot_of;
    std::vector<char> paired(order.size(), 0);
    for (std::size_t j = 0; j < columns.size(); ++j) {
        auto& col = columns[j];
        while (!col.empty()) {
            auto it = pivot_of.find(col.back().first);
            if (it == pivot_of.end())
                break;
            const auto& other = columns[it->second];
            axpy(col, field.neg(field.mul(col.back().second, field.inv(other.back().second))), other, field);
        }
        if (col.empty())
            continue;
        const std::size_t birth = col.back().first;
        pivot_of.emplace(birth, j);
        paired[birth] = paired[j] = 1;
        const int k = order[birth].simplex.dimension();
        if (k <= max_degree) {
            const double b = stages[order[birth].stage].grade;
            const double d = stages[order[j].stage].grade;
            if (b < d)
                out[static_cast<std::size_t>(k)].bars.emplace_back(b, d);
        }
    }
    for (std::size_t i = 0; i < order.size(); ++i) {
        const int k = order[i].simplex.dimension();
        if (!paired[i] && k <= max_degree && columns[i].empty())
            out[static_cast<std::size_t>(k)].bars.emplace_back(stages[order[i].stage].grade, kInfinity);
    }
    for (auto& b : out)
        b.normalize();
    return out;
}

}  // namespace contig
