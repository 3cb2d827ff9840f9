#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "contig/complex.hpp"

namespace contig {

/**
 * Homotopy invariant of based closed walks in a complex, read off from a
 * presentation of the fundamental group at the base vertex.
 *
 * Generators are the edges outside a BFS spanning forest, relators come
 * from triangles. Generators occurring exactly once in some relator are
 * eliminated. If no relator survives the group is free and the freely
 * reduced word is a complete invariant; otherwise the invariant is the
 * image in first homology with coefficients in GF(2^31 - 1). Either way,
 * walks with different invariants are not homotopic.
 */
class LoopInvariant {
public:
    using Word = std::vector<int>;  // letters +-(generator + 1)

    explicit LoopInvariant(const SimplicialComplex& y, VertexId base = 0, std::size_t max_word = 4096)
    {
        const std::size_t n = y.vertex_count();
        if (base >= n)
            throw InvalidArgument("base vertex out of range");
        std::vector<char> seen(n, 0);
        std::vector<std::pair<VertexId, VertexId>> tree;
        auto bfs = [&](VertexId root) {
            std::vector<VertexId> queue{root};
            seen[root] = 1;
            for (std::size_t h = 0; h < queue.size(); ++h)
                for (VertexId w : y.closed_neighbors()[queue[h]])
                    if (!seen[w]) {
                        seen[w] = 1;
                        tree.emplace_back(std::min(queue[h], w), std::max(queue[h], w));
                        queue.push_back(w);
                    }
        };
        bfs(base);
        for (VertexId v = 0; v < n; ++v)
            if (!seen[v])
                bfs(v);
        std::sort(tree.begin(), tree.end());

        int gens = 0;
        for (const auto& e : y.simplices(1)) {
            const std::pair<VertexId, VertexId> p{e[0], e[1]};
            if (!std::binary_search(tree.begin(), tree.end(), p))
                edge_gen_.emplace(p, gens++);
        }
        expr_.resize(static_cast<std::size_t>(gens));
        for (int g = 0; g < gens; ++g)
            expr_[static_cast<std::size_t>(g)] = {g + 1};
        std::vector<char> alive(static_cast<std::size_t>(gens), 1);

        std::vector<Word> relators;
        if (y.dimension() >= 2)
            for (const auto& t : y.simplices(2)) {
                Word r;
                append_edge(r, t[0], t[1]);
                append_edge(r, t[1], t[2]);
                append_edge(r, t[2], t[0]);
                reduce_cyclic(r);
                if (!r.empty())
                    relators.push_back(std::move(r));
            }

        for (;;) {
            std::optional<std::pair<std::size_t, std::size_t>> pick;  // (relator, position)
            for (std::size_t i = 0; i < relators.size(); ++i) {
                if (pick && relators[i].size() >= relators[pick->first].size())
                    continue;
                for (std::size_t p = 0; p < relators[i].size(); ++p) {
                    const int g = std::abs(relators[i][p]);
                    if (std::count_if(relators[i].begin(), relators[i].end(),
                                      [&](int l) { return std::abs(l) == g; }) == 1) {
                        pick = {i, p};
                        break;
                    }
                }
            }
            if (!pick)
                break;
            // r = A x^e B = 1, so x = A^-1 B^-1 for e = +1 and x = B A for e = -1.
            const Word r = relators[pick->first];
            const int letter = r[pick->second];
            const Word a(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(pick->second));
            const Word b(r.begin() + static_cast<std::ptrdiff_t>(pick->second) + 1, r.end());
            Word value = letter > 0 ? concat(inverse(a), inverse(b)) : concat(b, a);
            reduce_free(value);
            const int x = std::abs(letter);
            relators.erase(relators.begin() + static_cast<std::ptrdiff_t>(pick->first));
            bool too_long = false;
            for (auto& rel : relators) {
                rel = substitute(rel, x, value);
                reduce_cyclic(rel);
                too_long = too_long || rel.size() > max_word;
            }
            for (auto& e : expr_) {
                e = substitute(e, x, value);
                reduce_free(e);
                too_long = too_long || e.size() > max_word;
            }
            alive[static_cast<std::size_t>(x - 1)] = 0;
            relators.erase(std::remove_if(relators.begin(), relators.end(), [](const Word& w) { return w.empty(); }),
                           relators.end());
            if (too_long)
                break;
        }

        for (int g = 0; g < gens; ++g)
            if (alive[static_cast<std::size_t>(g)])
                survivors_.push_back(g);
        free_ = relators.empty();
        if (!free_)
            build_abelian(relators);
    }

    /// True when the group presentation reduced to a free group.
    bool is_free() const { return free_; }
    std::size_t rank() const { return survivors_.size(); }

    /// Word traced by the step a -> b (empty on tree edges and collapsed steps).
    Word edge_word(VertexId a, VertexId b) const
    {
        if (a == b)
            return {};
        const auto it = edge_gen_.find({std::min(a, b), std::max(a, b)});
        if (it == edge_gen_.end())
            return {};
        const Word& e = expr_[static_cast<std::size_t>(it->second)];
        return a < b ? e : inverse(e);
    }

    /// Word of the closed walk (walk[0] is the base; the walk returns to it).
    Word word(std::span<const VertexId> walk) const
    {
        Word w;
        for (std::size_t i = 0; i < walk.size(); ++i) {
            const Word e = edge_word(walk[i], walk[(i + 1) % walk.size()]);
            w.insert(w.end(), e.begin(), e.end());
        }
        reduce_free(w);
        return w;
    }

    /// Canonical key of a word in the surviving generators.
    std::string key_of_word(Word w) const
    {
        reduce_free(w);
        std::string out;
        if (free_) {
            for (int l : w)
                out += std::to_string(l) + ',';
            return out;
        }
        std::vector<std::uint64_t> v(survivors_.size(), 0);
        for (int l : w) {
            const std::size_t c = column_of(std::abs(l) - 1);
            v[c] = (v[c] + (l > 0 ? 1 : kPrime - 1)) % kPrime;
        }
        reduce_vector(v);
        for (auto x : v)
            out += std::to_string(x) + ',';
        return out;
    }

    /// Canonical key; equal keys are necessary for two walks to be homotopic.
    std::string key(std::span<const VertexId> walk) const { return key_of_word(word(walk)); }

private:
    static constexpr std::uint64_t kPrime = 2147483647ULL;

    void append_edge(Word& w, VertexId a, VertexId b) const
    {
        const auto it = edge_gen_.find({std::min(a, b), std::max(a, b)});
        if (it != edge_gen_.end())
            w.push_back(a < b ? it->second + 1 : -(it->second + 1));
    }

    static Word inverse(const Word& w)
    {
        Word out(w.rbegin(), w.rend());
        for (int& l : out)
            l = -l;
        return out;
    }

    static Word concat(const Word& a, const Word& b)
    {
        Word out = a;
        out.insert(out.end(), b.begin(), b.end());
        return out;
    }

    static Word substitute(const Word& w, int x, const Word& value)
    {
        Word out;
        const Word inv = inverse(value);
        for (int l : w) {
            if (l == x)
                out.insert(out.end(), value.begin(), value.end());
            else if (l == -x)
                out.insert(out.end(), inv.begin(), inv.end());
            else
                out.push_back(l);
        }
        return out;
    }

public:
    static void reduce_free(Word& w)
    {
        Word out;
        for (int l : w) {
            if (!out.empty() && out.back() == -l)
                out.pop_back();
            else
                out.push_back(l);
        }
        w = std::move(out);
    }

private:
    static void reduce_cyclic(Word& w)
    {
        reduce_free(w);
        std::size_t lo = 0, hi = w.size();
        while (hi - lo >= 2 && w[lo] == -w[hi - 1]) {
            ++lo;
            --hi;
        }
        w = Word(w.begin() + static_cast<std::ptrdiff_t>(lo), w.begin() + static_cast<std::ptrdiff_t>(hi));
    }

    std::size_t column_of(int g) const
    {
        return static_cast<std::size_t>(std::lower_bound(survivors_.begin(), survivors_.end(), g) - survivors_.begin());
    }

    static std::uint64_t inv_mod(std::uint64_t a)
    {
        std::uint64_t r = 1, e = kPrime - 2;
        while (e) {
            if (e & 1U)
                r = r * a % kPrime;
            a = a * a % kPrime;
            e >>= 1U;
        }
        return r;
    }

    void build_abelian(const std::vector<Word>& relators)
    {
        const std::size_t m = survivors_.size();
        std::vector<std::vector<std::uint64_t>> rows;
        for (const auto& r : relators) {
            std::vector<std::uint64_t> row(m, 0);
            for (int l : r) {
                const std::size_t c = column_of(std::abs(l) - 1);
                row[c] = (row[c] + (l > 0 ? 1 : kPrime - 1)) % kPrime;
            }
            rows.push_back(std::move(row));
        }
        // Reduced row echelon form.
        std::size_t rank = 0;
        for (std::size_t c = 0; c < m && rank < rows.size(); ++c) {
            std::size_t p = rank;
            while (p < rows.size() && rows[p][c] == 0)
                ++p;
            if (p == rows.size())
                continue;
            std::swap(rows[p], rows[rank]);
            const std::uint64_t s = inv_mod(rows[rank][c]);
            for (auto& x : rows[rank])
                x = x * s % kPrime;
            for (std::size_t i = 0; i < rows.size(); ++i)
                if (i != rank && rows[i][c] != 0) {
                    const std::uint64_t f = rows[i][c];
                    for (std::size_t j = 0; j < m; ++j)
                        rows[i][j] = (rows[i][j] + (kPrime - f) * rows[rank][j]) % kPrime;
                }
            pivots_.push_back(c);
            ++rank;
        }
        rows.resize(rank);
        basis_ = std::move(rows);
    }

    void reduce_vector(std::vector<std::uint64_t>& v) const
    {
        for (std::size_t i = 0; i < basis_.size(); ++i) {
            const std::uint64_t f = v[pivots_[i]];
            if (f == 0)
                continue;
            for (std::size_t j = 0; j < v.size(); ++j)
                v[j] = (v[j] + (kPrime - f) * basis_[i][j]) % kPrime;
        }
    }

    std::map<std::pair<VertexId, VertexId>, int> edge_gen_;
    std::vector<Word> expr_;
    std::vector<int> survivors_;
    bool free_ = true;
    std::vector<std::vector<std::uint64_t>> basis_;
    std::vector<std::size_t> pivots_;
};

}  // namespace contig
