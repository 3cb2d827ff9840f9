#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <vector>

#include "contig.hpp"

using namespace contig;

namespace {

std::shared_ptr<const FiniteMetricSpace> triple()
{
    return std::make_shared<const FiniteMetricSpace>(3, std::vector<double>{0, 1, 2, 1, 0, 1, 2, 1, 0});
}

std::shared_ptr<const FiniteMetricSpace> circle_points(std::size_t n, double jitter_seed = -1)
{
    std::vector<std::vector<double>> pts;
    Rng rng(static_cast<std::uint64_t>(jitter_seed < 0 ? 0 : jitter_seed), 0);
    for (std::size_t i = 0; i < n; ++i) {
        double a = 2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
        if (jitter_seed >= 0)
            a += 0.2 * (uniform_unit(rng) - 0.5);
        pts.push_back({std::cos(a), std::sin(a)});
    }
    return std::make_shared<const FiniteMetricSpace>(FiniteMetricSpace::from_points(pts));
}

bool pairwise_within(const FiniteMetricSpace& m, const Simplex& s, double eps)
{
    for (VertexId a : s)
        for (VertexId b : s)
            if (m(a, b) > eps)
                return false;
    return true;
}

}  // namespace

TEST_CASE("metric space validation")
{
    CHECK_THROWS_AS(FiniteMetricSpace(2, {0, 1, 2, 0}), InvalidArgument);
    CHECK_THROWS_AS(FiniteMetricSpace(2, {1, 1, 1, 0}), InvalidArgument);
    CHECK_THROWS_AS(FiniteMetricSpace(2, {0, -1, -1, 0}), InvalidArgument);
    CHECK_THROWS_AS(FiniteMetricSpace(2, {0, 1, 1}), InvalidArgument);
    CHECK(triple()->satisfies_triangle_inequality());
    CHECK(!FiniteMetricSpace(3, {0, 1, 5, 1, 0, 1, 5, 1, 0}).satisfies_triangle_inequality());
}

TEST_CASE("rips complexes of three points")
{
    const auto m = triple();
    CHECK(rips_complex(m, 1.0, 2).counts() == std::vector<std::size_t>{3, 2});
    CHECK(rips_complex(m, 2.0, 2) == standard_simplex(2));
    CHECK(rips_complex(m, 0.0, 2).counts() == std::vector<std::size_t>{3});
    CHECK(rips_complex(m, 1.999, 2).counts() == std::vector<std::size_t>{3, 2});
    CHECK(rips_complex(m, 2.0, 2).rips_tag() != nullptr);
}

TEST_CASE("rips complex agrees with a direct clique filter")
{
    Rng rng(17, 0);
    for (int t = 0; t < 20; ++t) {
        std::vector<std::vector<double>> pts(8, std::vector<double>(2));
        for (auto& p : pts)
            for (auto& c : p)
                c = uniform_unit(rng);
        const auto m = std::make_shared<const FiniteMetricSpace>(FiniteMetricSpace::from_points(pts));
        const auto crit = m->distinct_distances();
        const double eps = crit[uniform_below(rng, crit.size())];
        const auto r = rips_complex(m, eps, 7);
        std::size_t count = 0;
        for (std::uint32_t mask = 1; mask < 256; ++mask) {
            std::vector<VertexId> s;
            for (VertexId v = 0; v < 8; ++v)
                if (mask >> v & 1U)
                    s.push_back(v);
            const Simplex sigma(s);
            const bool want = pairwise_within(*m, sigma, eps);
            CHECK(r.contains(sigma) == want);
            count += want;
        }
        CHECK(r.simplex_count() == count);
    }
}

TEST_CASE("rips at the diameter is the full simplex")
{
    const auto m = circle_points(6);
    const auto d = m->distinct_distances().back();
    CHECK(rips_complex(m, d, 5) == standard_simplex(5));
    // truncation keeps only small simplices
    CHECK(rips_complex(m, d, 2).dimension() == 2);
}

TEST_CASE("critical filtration")
{
    CHECK(critical_filtration(triple()).critical_values() == std::vector<double>{1.0, 2.0});
    const auto one = std::make_shared<const FiniteMetricSpace>(1, std::vector<double>{0});
    const auto f = critical_filtration(one);
    CHECK(f.critical_values().empty());
    CHECK(f.complex_at(0.0).simplex_count() == 1);

    const auto m = circle_points(8, 3);
    std::vector<double> all;
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = i + 1; j < 8; ++j)
            all.push_back((*m)(i, j));
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    const auto filt = critical_filtration(m, 2);
    CHECK(filt.critical_values() == all);

    // stages are nested
    const auto grades = filt.grades();
    for (std::size_t i = 1; i < grades.size(); ++i)
        CHECK(filt.complex_at(grades[i - 1]).is_subcomplex_of(filt.complex_at(grades[i])));
}

TEST_CASE("metric contiguity into Rips targets")
{
    const auto m = triple();
    const auto r = std::make_shared<const SimplicialComplex>(rips_complex(m, 1.0, 2));
    const auto pt = std::make_shared<const SimplicialComplex>(point_complex());
    const SimplicialMap p0(pt, r, {0}), p1(pt, r, {1}), p2(pt, r, {2});
    CHECK(rips_contiguous(std::vector<SimplicialMap>{p0, p1}, 1.0));
    CHECK(!rips_contiguous(std::vector<SimplicialMap>{p0, p2}, 1.0));
    CHECK(rips_contiguous(std::vector<SimplicialMap>{p2, p2}, 1.0));

    const auto plain = std::make_shared<const SimplicialComplex>(standard_simplex(2));
    const SimplicialMap q(pt, plain, {0});
    CHECK_THROWS_AS(rips_contiguous(std::vector<SimplicialMap>{q}, 1.0), InvalidArgument);
}

TEST_CASE("metric contiguity agrees with simplex membership")
{
    Rng rng(23, 0);
    const auto cloud = [&] {
        std::vector<std::vector<double>> pts(20, std::vector<double>(2));
        for (auto& p : pts)
            for (auto& c : p)
                c = uniform_unit(rng);
        return std::make_shared<const FiniteMetricSpace>(FiniteMetricSpace::from_points(pts));
    }();
    const double eps = cloud->distinct_distances()[60];
    const auto x = circle_complex(4);
    const auto r = rips_complex(cloud, eps, 7);
    const auto maps = enumerate_assignments(x, r, std::nullopt, 2'000'000);
    int contiguous = 0;
    for (int t = 0; t < 100; ++t) {
        const auto& f = maps[uniform_below(rng, maps.size())];
        // a nearby partner so that both outcomes occur
        Assignment g = f;
        g[uniform_below(rng, 4)] = static_cast<VertexId>(uniform_below(rng, 20));
        if (!is_simplicial(g, x, r))
            g = maps[uniform_below(rng, maps.size())];
        const std::vector<Assignment> pair{f, g};
        const bool metric = rips_contiguous(x, *cloud, eps, pair);
        CHECK(metric == mutually_contiguous(x, r, pair));
        contiguous += metric;
    }
    CHECK(contiguous > 0);
    CHECK(contiguous < 100);
}
