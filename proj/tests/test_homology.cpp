#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <vector>

#include "contig.hpp"

using namespace contig;

namespace {

// Rank over GF(p) by dense Gaussian elimination.
std::size_t dense_rank(std::vector<std::vector<std::int64_t>> a, std::int64_t p)
{
    auto inv = [p](std::int64_t x) {
        std::int64_t r = 1, e = p - 2;
        x %= p;
        while (e) {
            if (e & 1)
                r = r * x % p;
            x = x * x % p;
            e >>= 1;
        }
        return r;
    };
    std::size_t rank = 0;
    const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t piv = rank;
        while (piv < rows && ((a[piv][c] % p) + p) % p == 0)
            ++piv;
        if (piv == rows)
            continue;
        std::swap(a[piv], a[rank]);
        const std::int64_t s = inv(((a[rank][c] % p) + p) % p);
        for (auto& x : a[rank])
            x = ((x % p) + p) % p * s % p;
        for (std::size_t r = 0; r < rows; ++r)
            if (r != rank) {
                const std::int64_t f = ((a[r][c] % p) + p) % p;
                if (f)
                    for (std::size_t j = 0; j < cols; ++j)
                        a[r][j] = (((a[r][j] - f * a[rank][j]) % p) + p) % p;
            }
        ++rank;
    }
    return rank;
}

// Betti numbers from dense boundary matrices with explicit signs.
std::vector<std::size_t> dense_betti(const SimplicialComplex& x, std::int64_t p)
{
    const int top = x.dimension();
    std::vector<std::size_t> rank(static_cast<std::size_t>(top + 2), 0);
    for (int d = 1; d <= top; ++d) {
        const auto& rows = x.simplices(d - 1);
        const auto& cols = x.simplices(d);
        std::vector<std::vector<std::int64_t>> m(rows.size(), std::vector<std::int64_t>(cols.size(), 0));
        for (std::size_t j = 0; j < cols.size(); ++j) {
            const auto& v = cols[j].vertices();
            for (std::size_t i = 0; i < v.size(); ++i) {
                std::vector<VertexId> face = v;
                face.erase(face.begin() + static_cast<std::ptrdiff_t>(i));
                const auto r = std::find(rows.begin(), rows.end(), Simplex(face)) - rows.begin();
                m[static_cast<std::size_t>(r)][j] = i % 2 == 0 ? 1 : -1;
            }
        }
        rank[static_cast<std::size_t>(d)] = dense_rank(m, p);
    }
    std::vector<std::size_t> betti;
    for (int d = 0; d <= top; ++d)
        betti.push_back(x.count(d) - rank[static_cast<std::size_t>(d)] - rank[static_cast<std::size_t>(d + 1)]);
    return betti;
}

std::shared_ptr<const FiniteMetricSpace> random_cloud(Rng& rng, std::size_t n)
{
    std::vector<std::vector<double>> pts(n, std::vector<double>(2));
    for (auto& p : pts)
        for (auto& c : p)
            c = std::round(uniform_unit(rng) * 32.0) / 4.0;
    return std::make_shared<const FiniteMetricSpace>(FiniteMetricSpace::from_points(pts));
}

std::shared_ptr<const FiniteMetricSpace> circle_points(std::size_t n)
{
    std::vector<std::vector<double>> pts;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = 2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
        pts.push_back({std::cos(a), std::sin(a)});
    }
    return std::make_shared<const FiniteMetricSpace>(FiniteMetricSpace::from_points(pts));
}

std::vector<FiltrationStage> rips_stages(const std::shared_ptr<const FiniteMetricSpace>& m, int max_dim)
{
    const auto f = critical_filtration(m, max_dim);
    std::vector<FiltrationStage> stages;
    for (double g : f.grades())
        stages.push_back({f.complex_at(g), g});
    return stages;
}

using Bars = std::vector<std::pair<double, double>>;

}  // namespace

TEST_CASE("prime fields")
{
    CHECK_THROWS_AS(PrimeField(4), InvalidArgument);
    CHECK_THROWS_AS(PrimeField(1), InvalidArgument);
    const PrimeField f(7);
    CHECK(f.mul(3, f.inv(3)) == 1);
    CHECK(f.add(5, 4) == 2);
    CHECK(f.from_int(-1) == 6);
    CHECK_THROWS_AS(betti_numbers(torus_complex(), 9), InvalidArgument);
}

TEST_CASE("boundary of a boundary vanishes")
{
    for (const auto& x : {torus_complex(), pinched_complex(), standard_simplex(4), iterated_subdivision(standard_simplex(2), 2).refined})
        for (std::uint32_t p : {2U, 3U, 5U}) {
            const PrimeField f(p);
            const auto cb = ChainBoundary::of(x, f);
            for (std::size_t d = 2; d < cb.matrices.size(); ++d)
                for (const auto& col : cb.matrices[d]) {
                    SparseColumn acc;
                    for (const auto& [row, coeff] : col)
                        axpy(acc, coeff, cb.matrices[d - 1][row], f);
                    CHECK(acc.empty());
                }
        }
}

TEST_CASE("betti numbers")
{
    CHECK(betti_numbers(boundary_complex(2)) == std::vector<std::size_t>{1, 1});
    CHECK(betti_numbers(point_complex()) == std::vector<std::size_t>{1});
    CHECK(betti_numbers(standard_simplex(3)) == std::vector<std::size_t>{1, 0, 0, 0});
    CHECK(betti_numbers(boundary_complex(3)) == std::vector<std::size_t>{1, 0, 1});
    for (std::uint32_t p : {2U, 3U}) {
        CHECK(betti_numbers(torus_complex(), p) == std::vector<std::size_t>{1, 2, 1});
        CHECK(betti_numbers(pinched_complex(), p) == std::vector<std::size_t>{1, 2, 1});
        CHECK(dense_betti(torus_complex(), p) == betti_numbers(torus_complex(), p));
        CHECK(dense_betti(pinched_complex(), p) == betti_numbers(pinched_complex(), p));
    }
    const auto two = make_complex(5, {{0, 1}, {2, 3, 4}});
    CHECK(betti_numbers(two) == std::vector<std::size_t>{2, 0, 0});
}

TEST_CASE("sparse and dense ranks agree on random complexes")
{
    Rng rng(31, 0);
    for (int t = 0; t < 30; ++t) {
        std::vector<std::vector<VertexId>> facets;
        const std::size_t n = 4 + uniform_below(rng, 5);
        for (int i = 0; i < 6; ++i) {
            std::vector<VertexId> f;
            for (int j = 0; j < 3; ++j)
                f.push_back(static_cast<VertexId>(uniform_below(rng, n)));
            facets.push_back(f);
        }
        const auto x = make_complex(n, facets);
        CHECK(betti_numbers(x, 2) == dense_betti(x, 2));
        CHECK(betti_numbers(x, 5) == dense_betti(x, 5));
    }
}

TEST_CASE("persistence of the three-point Rips filtration")
{
    const auto m = std::make_shared<const FiniteMetricSpace>(3, std::vector<double>{0, 1, 2, 1, 0, 1, 2, 1, 0});
    const auto bars = persistent_homology(rips_stages(m, 2), 1);
    CHECK(bars[0].bars == Bars{{0, 1}, {0, 1}, {0, kInfinity}});
    CHECK(bars[1].bars.empty());
    auto uf = rips_h0(*m);
    CHECK(uf.bars == bars[0].bars);
}

TEST_CASE("single complex gives infinite Betti bars")
{
    const std::vector<FiltrationStage> one{{torus_complex(), 0.0}};
    const auto bars = persistent_homology(one, 2);
    CHECK(bars[0].bars == Bars{{0, kInfinity}});
    CHECK(bars[1].bars == Bars{{0, kInfinity}, {0, kInfinity}});
    CHECK(bars[2].bars == Bars{{0, kInfinity}});
}

TEST_CASE("a loop is born and filled in the Rips filtration of circle points")
{
    const auto m = circle_points(8);
    const auto stages = rips_stages(m, 2);
    const auto bars = persistent_homology(stages, 1);
    REQUIRE(bars[1].bars.size() == 1);
    const auto [birth, death] = bars[1].bars[0];
    CHECK(std::abs(birth - (*m)(0, 1)) < 1e-12);
    CHECK(death < kInfinity);
    for (const auto& st : stages) {
        const auto b = betti_numbers(st.complex);
        CHECK(bars[1].alive_at(st.grade) == (b.size() > 1 ? b[1] : 0));
        CHECK(bars[0].alive_at(st.grade) == b[0]);
    }
}

TEST_CASE("persistence on random clouds")
{
    Rng rng(37, 0);
    for (int t = 0; t < 25; ++t) {
        const auto m = random_cloud(rng, 3 + uniform_below(rng, 10));
        const auto stages = rips_stages(m, 2);
        const auto bars = persistent_homology(stages, 1, 3);
        CHECK(rips_h0(*m).bars == bars[0].bars);
        for (const auto& st : stages) {
            const auto b = betti_numbers(st.complex, 3);
            for (std::size_t d = 0; d <= 1; ++d)
                CHECK(bars[d].alive_at(st.grade) == (d < b.size() ? b[d] : 0));
        }
        // repeating a stage changes nothing
        auto padded = stages;
        padded.insert(padded.begin() + static_cast<std::ptrdiff_t>(padded.size() / 2), padded[padded.size() / 2]);
        const auto again = persistent_homology(padded, 1, 3);
        CHECK(again[0].bars == bars[0].bars);
        CHECK(again[1].bars == bars[1].bars);
    }
}

TEST_CASE("persistence rejects non-nested input")
{
    const std::vector<FiltrationStage> shrinking{{standard_simplex(2), 0.0}, {boundary_complex(2), 1.0}};
    CHECK_THROWS_AS(persistent_homology(shrinking, 1), NotNested);
    const std::vector<FiltrationStage> backwards{{boundary_complex(2), 1.0}, {standard_simplex(2), 0.0}};
    CHECK_THROWS_AS(persistent_homology(backwards, 1), NotNested);
}

TEST_CASE("H0 tracker elder rule")
{
    H0Tracker t;
    const auto a = t.add_vertex(0), b = t.add_vertex(1), c = t.add_vertex(2);
    t.add_edge(a, b, 3);
    t.add_edge(b, c, 0);  // effective grade 2, when c appears
    const auto bc = t.barcode({0, 1, 2, 3});
    CHECK(bc.bars == Bars{{0, kInfinity}, {1, 3}});
}

TEST_CASE("contiguity H0 from a point recovers Rips H0")
{
    Rng rng(41, 0);
    for (int t = 0; t < 10; ++t) {
        const auto m = random_cloud(rng, 3 + uniform_below(rng, 6));
        const auto r = persistent_contiguity_h0(point_complex(), m, 2, std::nullopt, {.based = false});
        CHECK(r.barcode.bars == rips_h0(*m).bars);
    }
}

TEST_CASE("contiguity H0 stage counts match exact counts")
{
    const auto far = std::make_shared<const FiniteMetricSpace>(
        3, std::vector<double>{0, 10, 11, 10, 0, 12, 11, 12, 0});
    Rng rng(43, 0);
    std::vector<std::shared_ptr<const FiniteMetricSpace>> clouds{far, circle_points(8)};
    for (int t = 0; t < 4; ++t)
        clouds.push_back(random_cloud(rng, 6));
    for (const auto& m : clouds)
        for (int k : {3, 5}) {
            const auto z = circle_complex(k);
            const auto r = persistent_contiguity_h0(z, m, 2, std::nullopt, {});
            const auto grades = r.barcode.grades;
            REQUIRE(grades.size() == r.class_counts.size());
            for (std::size_t i = 0; i < grades.size(); ++i) {
                const auto y = rips_complex(m, grades[i], 2);
                const auto p = exact_class_count(z, y, BasePoint{0, 0});
                CHECK(r.class_counts[i] == p.class_count);
                CHECK(r.map_counts[i] == p.maps.size());
            }
        }
    // three far points: only the constant map until the first edge appears
    const auto r = persistent_contiguity_h0(circle_complex(3), far, 2, std::nullopt, {});
    CHECK(r.class_counts.front() == 1);
    CHECK(r.class_counts.back() == 1);
}

TEST_CASE("winding classes appear and die for circle points")
{
    const auto m = circle_points(8);
    const auto r = persistent_contiguity_h0(circle_complex(6), m, 2, std::nullopt, {});
    // two extra classes (winding either way) exist at some scale and merge later
    CHECK(*std::max_element(r.class_counts.begin(), r.class_counts.end()) >= 3);
    CHECK(r.class_counts.front() == 1);
    CHECK(r.class_counts.back() == 1);
}

TEST_CASE("circle collapse maps")
{
    CHECK(circle_collapse(6, 3) == Assignment{0, 0, 1, 1, 2, 2});
    CHECK(circle_collapse(4, 3) == Assignment{0, 0, 1, 2});
    for (int coarse = 3; coarse <= 6; ++coarse)
        for (int fine = coarse; fine <= 12; ++fine) {
            const auto f = circle_collapse(fine, coarse);
            CHECK(is_simplicial(f, circle_complex(fine), circle_complex(coarse)));
            CHECK(std::set<VertexId>(f.begin(), f.end()).size() == static_cast<std::size_t>(coarse));
            CHECK(f[0] == 0);
        }
    CHECK_THROWS_AS(circle_collapse(3, 4), InvalidArgument);
}

TEST_CASE("subdivision H0")
{
    const std::vector<int> sizes{3, 6};
    const auto stages = circle_refinements(sizes);

    const auto to_point = persistent_subdivision_h0(stages, point_complex());
    CHECK(to_point.barcode.bars == Bars{{0, kInfinity}});

    const auto b = boundary_complex(2);
    const auto based = persistent_subdivision_h0(stages, b);
    CHECK(based.class_counts ==
          std::vector<std::size_t>{exact_class_count(circle_complex(3), b, BasePoint{0, 0}).class_count,
                                   exact_class_count(circle_complex(6), b, BasePoint{0, 0}).class_count});

    // unbased: the six permutations collapse to one class per degree
    const auto unbased = persistent_subdivision_h0(stages, b, {.based = false});
    CHECK(unbased.class_counts.front() == 7);
    CHECK(unbased.class_counts.back() == exact_class_count(circle_complex(6), b).class_count);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(unbased.barcode.alive_at(static_cast<double>(i)) == unbased.class_counts[i]);
        CHECK(based.barcode.alive_at(static_cast<double>(i)) == based.class_counts[i]);
    }

    const std::vector<int> torus_sizes{3, 4, 5};
    const auto t = torus_complex();
    const auto tr = persistent_subdivision_h0(circle_refinements(torus_sizes), t);
    for (std::size_t i = 0; i < torus_sizes.size(); ++i)
        CHECK(tr.class_counts[i] == exact_class_count(circle_complex(torus_sizes[i]), t, BasePoint{0, 0}).class_count);

    const auto sd = subdivision_refinements(b, 2);
    const auto sr = persistent_subdivision_h0(sd, b, {.cap = 1'000'000});
    for (std::size_t i = 0; i < sd.size(); ++i)
        CHECK(sr.class_counts[i] == local_move_classes(sd[i].complex, b, BasePoint{0, 0}, 1'000'000).class_count);
}

TEST_CASE("subdivision H0 checks its connecting maps")
{
    auto stages = circle_refinements(std::vector<int>{3, 6});
    stages[1].to_previous = Assignment{0, 0, 0, 1, 1, 1};  // misses vertex 2
    CHECK_THROWS(persistent_subdivision_h0(stages, boundary_complex(2)));
    stages[1].to_previous = Assignment{1, 1, 2, 2, 0, 0};  // moves the base point
    CHECK_THROWS(persistent_subdivision_h0(stages, boundary_complex(2)));
}
