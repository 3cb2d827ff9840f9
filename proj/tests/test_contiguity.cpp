#include <catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <vector>

#include "contig.hpp"

using namespace contig;

namespace {

// All vertex assignments x -> y, simplicial or not.
std::vector<Assignment> all_assignments(std::size_t nx, std::size_t ny)
{
    std::vector<Assignment> out;
    Assignment f(nx, 0);
    for (;;) {
        out.push_back(f);
        std::size_t i = 0;
        while (i < nx && ++f[i] == ny)
            f[i++] = 0;
        if (i == nx)
            break;
    }
    return out;
}

bool simplicial_by_edges(const Assignment& f, const SimplicialComplex& x, const SimplicialComplex& y)
{
    for (const auto& s : x.all_simplices()) {
        std::vector<VertexId> img;
        for (VertexId v : s)
            img.push_back(f[v]);
        if (!y.contains(Simplex(img)))
            return false;
    }
    return true;
}

bool contiguous_all_simplices(const SimplicialComplex& x, const SimplicialComplex& y, const Assignment& f,
                              const Assignment& g)
{
    for (const auto& s : x.all_simplices()) {
        std::vector<VertexId> img;
        for (VertexId v : s) {
            img.push_back(f[v]);
            img.push_back(g[v]);
        }
        if (!y.contains(Simplex(img)))
            return false;
    }
    return true;
}

// Brute force: filter every assignment, then close pairwise contiguity.
std::size_t brute_force_classes(const SimplicialComplex& x, const SimplicialComplex& y, std::optional<BasePoint> base)
{
    std::vector<Assignment> maps;
    for (const auto& f : all_assignments(x.vertex_count(), y.vertex_count()))
        if (simplicial_by_edges(f, x, y) && (!base || f[base->first] == base->second))
            maps.push_back(f);
    std::vector<std::size_t> label(maps.size());
    for (std::size_t i = 0; i < maps.size(); ++i)
        label[i] = i;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < maps.size(); ++i)
            for (std::size_t j = 0; j < maps.size(); ++j)
                if (label[i] != label[j] && contiguous_all_simplices(x, y, maps[i], maps[j])) {
                    const auto m = std::min(label[i], label[j]);
                    label[i] = label[j] = m;
                    changed = true;
                }
    }
    return std::set<std::size_t>(label.begin(), label.end()).size();
}

SimplicialComplex random_complex(Rng& rng, std::size_t n, int facets, int max_size)
{
    std::vector<std::vector<VertexId>> fs;
    for (int i = 0; i < facets; ++i) {
        const auto size = 1 + uniform_below(rng, static_cast<std::uint64_t>(max_size));
        std::vector<VertexId> f;
        for (std::uint64_t j = 0; j < size; ++j)
            f.push_back(static_cast<VertexId>(uniform_below(rng, n)));
        fs.push_back(std::move(f));
    }
    return make_complex(n, fs);
}

}  // namespace

TEST_CASE("is_simplicial")
{
    const auto b = boundary_complex(2);
    CHECK(is_simplicial(Assignment{0, 1, 2}, b, b));
    CHECK(is_simplicial(Assignment{1, 1, 1}, b, b));
    const auto path = make_complex(4, {{0, 1}, {1, 2}, {2, 3}});
    CHECK(!is_simplicial(Assignment{0, 1, 2}, b, path));  // {0,2} is not an edge of the path
    CHECK(is_simplicial(Assignment{0, 1, 1}, b, path));
    CHECK_THROWS_AS(is_simplicial(Assignment{0, 1, 5}, b, path), InvalidArgument);
    CHECK_THROWS_AS(is_simplicial(Assignment{0, 1}, b, path), InvalidArgument);

    auto pb = std::make_shared<const SimplicialComplex>(b);
    auto pp = std::make_shared<const SimplicialComplex>(path);
    CHECK_THROWS_AS(SimplicialMap(pb, pp, {0, 1, 2}), NotSimplicial);
}

TEST_CASE("contiguity on the triangle")
{
    const auto b = boundary_complex(2);
    const Assignment f{0, 1, 0}, g{0, 2, 0}, c{0, 0, 0};
    CHECK(!mutually_contiguous(b, b, std::vector<Assignment>{f, g}));
    CHECK(mutually_contiguous(b, b, std::vector<Assignment>{f, f}));
    CHECK(mutually_contiguous(b, b, std::vector<Assignment>{f, c}));
    CHECK(mutually_contiguous(b, b, std::vector<Assignment>{g, c}));
    // not transitive
    const ContiguityChecker check(b, b);
    CHECK(check.contiguous(f, c));
    CHECK(check.contiguous(c, g));
    CHECK(!check.contiguous(f, g));

    auto pb = std::make_shared<const SimplicialComplex>(b);
    const std::vector<SimplicialMap> maps{{pb, pb, f}, {pb, pb, c}};
    CHECK(mutually_contiguous(maps));
    auto other = std::make_shared<const SimplicialComplex>(standard_simplex(2));
    const std::vector<SimplicialMap> mixed{{pb, pb, f}, {pb, other, c}};
    CHECK_THROWS_AS(mutually_contiguous(mixed), InvalidArgument);
}

TEST_CASE("lookup table agrees with direct checks")
{
    Rng rng(3, 0);
    for (const auto& y : {torus_complex(), pinched_complex(), boundary_complex(3)}) {
        const auto x = circle_complex(5);
        const ContiguityChecker check(x, y);
        REQUIRE(check.uses_lookup_table());
        const auto maps = enumerate_assignments(x, y, BasePoint{0, 0});
        for (int t = 0; t < 300; ++t) {
            const auto& f = maps[uniform_below(rng, maps.size())];
            const auto& g = maps[uniform_below(rng, maps.size())];
            CHECK(check.contiguous(f, g) == contiguous_all_simplices(x, y, f, g));
        }
    }
}

TEST_CASE("maximal simplices suffice for contiguity")
{
    Rng rng(5, 0);
    int agree = 0;
    for (int t = 0; t < 200; ++t) {
        const auto x = random_complex(rng, 2 + uniform_below(rng, 4), 1 + static_cast<int>(uniform_below(rng, 4)), 3);
        const auto y = random_complex(rng, 2 + uniform_below(rng, 4), 1 + static_cast<int>(uniform_below(rng, 5)), 4);
        const auto maps = enumerate_assignments(x, y);
        const auto& f = maps[uniform_below(rng, maps.size())];
        const auto& g = maps[uniform_below(rng, maps.size())];
        agree += mutually_contiguous(x, y, std::vector<Assignment>{f, g}) == contiguous_all_simplices(x, y, f, g);
    }
    CHECK(agree == 200);
}

TEST_CASE("enumerate_maps matches exhaustive filtering")
{
    const auto b = boundary_complex(2);
    CHECK(enumerate_assignments(b, b).size() == 27);
    CHECK(enumerate_assignments(b, b, BasePoint{0, 0}).size() == 9);
    CHECK(enumerate_assignments(point_complex(), torus_complex()).size() == 9);

    Rng rng(9, 0);
    for (int t = 0; t < 40; ++t) {
        const auto x = random_complex(rng, 1 + uniform_below(rng, 4), 1 + static_cast<int>(uniform_below(rng, 3)), 3);
        const auto y = random_complex(rng, 1 + uniform_below(rng, 5), 1 + static_cast<int>(uniform_below(rng, 4)), 3);
        std::set<Assignment> want;
        for (const auto& f : all_assignments(x.vertex_count(), y.vertex_count()))
            if (simplicial_by_edges(f, x, y))
                want.insert(f);
        const auto got = enumerate_assignments(x, y);
        CHECK(std::set<Assignment>(got.begin(), got.end()) == want);
        CHECK(got.size() == want.size());
    }
    CHECK_THROWS_AS(enumerate_assignments(circle_complex(9), torus_complex(), std::nullopt, 100), CapExceeded);
}

TEST_CASE("enumeration order is deterministic")
{
    const auto a = enumerate_assignments(circle_complex(5), torus_complex(), BasePoint{0, 0});
    const auto b = enumerate_assignments(circle_complex(5), torus_complex(), BasePoint{0, 0});
    CHECK(a == b);
}

TEST_CASE("contiguity complex")
{
    for (const auto& y : {boundary_complex(2), standard_simplex(2)}) {
        const auto mc = build_contiguity_complex(point_complex(), y, std::nullopt, 3);
        REQUIRE(mc.maps.size() == y.vertex_count());
        // vertex i is the map onto vertex i, so the complexes coincide
        for (std::size_t i = 0; i < mc.maps.size(); ++i)
            CHECK(mc.maps[i] == Assignment{static_cast<VertexId>(i)});
        CHECK(mc.complex == y);
    }

    const auto b = boundary_complex(2);
    const auto mc = build_contiguity_complex(b, b, std::nullopt, 1);
    REQUIRE(mc.maps.size() == 27);
    for (std::size_t i = 0; i < 27; ++i)
        for (std::size_t j = i + 1; j < 27; ++j)
            CHECK(mc.complex.contains(Simplex{static_cast<VertexId>(i), static_cast<VertexId>(j)}) ==
                  contiguous_all_simplices(b, b, mc.maps[i], mc.maps[j]));

    const auto to_point = build_contiguity_complex(torus_complex(), point_complex(), std::nullopt, 2);
    CHECK(to_point.complex.simplex_count() == 1);
}

TEST_CASE("contiguity complex simplices are mutually contiguous families")
{
    const auto x = standard_simplex(1);
    const auto y = boundary_complex(3);
    const auto mc = build_contiguity_complex(x, y, std::nullopt, 3);
    for (const auto& s : mc.complex.all_simplices()) {
        std::vector<Assignment> fam;
        for (VertexId v : s)
            fam.push_back(mc.maps[v]);
        CHECK(mutually_contiguous(x, y, fam));
    }
    // and every mutually contiguous triple is present
    for (VertexId a = 0; a < mc.maps.size(); ++a)
        for (VertexId b = a + 1; b < mc.maps.size(); ++b)
            for (VertexId c = b + 1; c < mc.maps.size(); ++c) {
                const std::vector<Assignment> fam{mc.maps[a], mc.maps[b], mc.maps[c]};
                CHECK(mc.complex.contains(Simplex{a, b, c}) == mutually_contiguous(x, y, fam));
            }
}

TEST_CASE("exact class counts")
{
    const auto b = boundary_complex(2);
    const auto p = exact_class_count(b, b);
    CHECK(p.class_count == 7);
    auto sizes = p.class_sizes();
    std::sort(sizes.begin(), sizes.end());
    CHECK(sizes == std::vector<std::size_t>{1, 1, 1, 1, 1, 1, 21});
    // the singleton classes are exactly the permutations
    for (std::size_t i = 0; i < p.maps.size(); ++i) {
        auto f = p.maps[i];
        std::sort(f.begin(), f.end());
        const bool permutation = f == Assignment{0, 1, 2};
        CHECK(permutation == (p.class_sizes()[p.class_of[i]] == 1));
    }

    CHECK(exact_class_count(torus_complex(), point_complex()).class_count == 1);
    CHECK(exact_class_count(circle_complex(4), b, BasePoint{0, 0}).class_count ==
          brute_force_classes(circle_complex(4), b, BasePoint{0, 0}));
    for (int k = 3; k <= 5; ++k)
        CHECK(exact_class_count(circle_complex(k), b, BasePoint{0, 0}).class_count ==
              brute_force_classes(circle_complex(k), b, BasePoint{0, 0}));
}

TEST_CASE("parallel exact count matches serial")
{
    const auto x = circle_complex(5);
    const auto y = torus_complex();
    ExactCountOptions par;
    par.workers = 4;
    const auto a = exact_class_count(x, y, BasePoint{0, 0});
    const auto b = exact_class_count(x, y, BasePoint{0, 0}, par);
    CHECK(a.class_of == b.class_of);
}

TEST_CASE("single-vertex moves give the contiguity classes")
{
    for (const auto& y : {boundary_complex(2), torus_complex(), pinched_complex()})
        for (int k = 3; k <= 5; ++k) {
            const auto x = circle_complex(k);
            const auto a = exact_class_count(x, y, BasePoint{0, 0});
            const auto b = local_move_classes(x, y, BasePoint{0, 0});
            REQUIRE(a.maps == b.maps);
            // same partition, not just the same count
            std::map<std::size_t, std::size_t> m;
            bool same = a.class_count == b.class_count;
            for (std::size_t i = 0; i < a.maps.size(); ++i) {
                auto [it, fresh] = m.emplace(a.class_of[i], b.class_of[i]);
                same = same && it->second == b.class_of[i];
            }
            CHECK(same);
        }
}

TEST_CASE("simplicial approximation of subdivisions")
{
    const auto b = boundary_complex(2);
    CHECK(approximate_subdivision(identity_subdivision(b)) == Assignment{0, 1, 2});

    const auto sd = barycentric_subdivision(b);
    const auto lo = approximate_subdivision(sd, Tiebreak::LowestId);
    // barycenters of {0,1}, {0,2}, {1,2} are vertices 3, 4, 5
    CHECK(lo == Assignment{0, 1, 2, 0, 0, 1});
    CHECK(is_simplicial(lo, sd.refined, b));
    const auto hi = approximate_subdivision(sd, Tiebreak::MaxWeight);
    CHECK(mutually_contiguous(sd.refined, b, std::vector<Assignment>{lo, hi}));

    for (const auto& base : {b, standard_simplex(2), standard_simplex(3)})
        for (int n = 0; n <= 3; ++n) {
            if (base.vertex_count() == 4 && n == 3)
                continue;
            const auto s = iterated_subdivision(base, n);
            const auto f = approximate_subdivision(s, Tiebreak::LowestId);
            const auto g = approximate_subdivision(s, Tiebreak::MaxWeight);
            CHECK(satisfies_carrier_condition(s, f));
            CHECK(satisfies_carrier_condition(s, g));
            CHECK(is_simplicial(f, s.refined, base));
            CHECK(mutually_contiguous(s.refined, base, std::vector<Assignment>{f, g}));
        }

    // a map that ignores carriers fails the check
    auto bad = lo;
    bad[3] = 2;
    CHECK(!satisfies_carrier_condition(sd, bad));
}

TEST_CASE("exponential law")
{
    const std::vector<SimplicialComplex> small{point_complex(), standard_simplex(1), boundary_complex(2)};
    std::vector<SimplicialComplex> targets = small;
    targets.push_back(standard_simplex(2));
    for (const auto& x : small)
        for (const auto& z : small)
            for (const auto& y : targets) {
                const auto prod = product_complex(x, z);
                const auto lhs = enumerate_assignments(prod, y, std::nullopt, 1'000'000);
                const auto mc = build_contiguity_complex(x, y, std::nullopt, std::max(1, z.dimension()));
                const auto rhs = enumerate_assignments(z, mc.complex, std::nullopt, 1'000'000);
                CHECK(lhs.size() == rhs.size());
                for (const auto& f : lhs)
                    CHECK(exponential_untranspose(x, z, mc, exponential_transpose(x, z, y, mc, f)) == f);
                for (const auto& g : rhs)
                    CHECK(exponential_transpose(x, z, y, mc, exponential_untranspose(x, z, mc, g)) == g);
            }

    // z = point picks out the map itself
    const auto b = boundary_complex(2);
    const auto mc = build_contiguity_complex(b, b, std::nullopt, 1);
    const Assignment f{0, 1, 0};
    const auto t = exponential_transpose(b, point_complex(), b, mc, f);
    CHECK(mc.maps[t[0]] == f);

    CHECK_THROWS_AS(exponential_transpose(b, point_complex(), b, mc, Assignment{0, 1}), InvalidArgument);
}
