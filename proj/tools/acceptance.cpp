// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion that ran failed.
//
//   acceptance              all criteria
//   acceptance --skip 3     everything but the long randomized table run
//   acceptance --only 3     just that one

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "CLI11.hpp"
#include "contig.hpp"

using namespace contig;
using BigInt = boost::multiprecision::cpp_int;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x, int prec = 3)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", prec, x);
    return buf;
}

// ---- independent oracles ----

// Contiguity tested on every simplex of the domain, not only maximal ones.
bool contiguous_all_simplices(const SimplicialComplex& x, const SimplicialComplex& y, const Assignment& f,
                              const Assignment& g)
{
    for (const auto& s : x.all_simplices()) {
        std::set<VertexId> image;
        for (VertexId v : s) {
            image.insert(f[v]);
            image.insert(g[v]);
        }
        if (!y.contains(Simplex(std::vector<VertexId>(image.begin(), image.end()))))
            return false;
    }
    return true;
}

// Entry (base, base) of (A + I)^k by repeated dense multiplication.
BigInt closed_walks_by_matrix_power(const SimplicialComplex& y, VertexId base, int k)
{
    const std::size_t n = y.vertex_count();
    std::vector<std::vector<BigInt>> a(n, std::vector<BigInt>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        a[i][i] = 1;
    for (const auto& e : y.simplices(1)) {
        a[e[0]][e[1]] = 1;
        a[e[1]][e[0]] = 1;
    }
    auto p = a;
    for (int step = 1; step < k; ++step) {
        std::vector<std::vector<BigInt>> q(n, std::vector<BigInt>(n, 0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l)
                if (p[i][l] != 0)
                    for (std::size_t j = 0; j < n; ++j)
                        if (a[l][j] != 0)
                            q[i][j] += p[i][l];
        p = std::move(q);
    }
    return p[base][base];
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
    return SimplicialComplex::from_facets(n, fs);
}

std::shared_ptr<const FiniteMetricSpace> random_cloud(Rng& rng, std::size_t n)
{
    std::vector<std::vector<double>> pts(n, std::vector<double>(2));
    for (auto& p : pts)
        for (auto& c : p)
            c = std::round(uniform_unit(rng) * 64.0) / 8.0;  // coarse grid so distances tie
    return std::make_shared<const FiniteMetricSpace>(FiniteMetricSpace::from_points(pts));
}

// ---- criteria ----

Outcome criterion1()
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto b = boundary_complex(2);
    const auto p = exact_class_count(b, b);
    auto sizes = p.class_sizes();
    std::sort(sizes.begin(), sizes.end());
    const double dt = seconds_since(t0);
    const bool shape = sizes == std::vector<std::size_t>{1, 1, 1, 1, 1, 1, 21};
    return {p.maps.size() == 27 && p.class_count == 7 && shape && dt < 1.0,
            std::to_string(p.maps.size()) + " maps, " + std::to_string(p.class_count) +
                " classes (6 singletons + 21: " + (shape ? "yes" : "no") + "), " + fmt(dt) + " s"};
}

Outcome criterion2()
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto bt = betti_numbers(torus_complex(), 2);
    const auto bp = betti_numbers(pinched_complex(), 2);
    const double dt = seconds_since(t0);
    const std::vector<std::size_t> want{1, 2, 1};
    auto str = [](const std::vector<std::size_t>& v) {
        std::string s = "(";
        for (std::size_t i = 0; i < v.size(); ++i)
            s += (i ? "," : "") + std::to_string(v[i]);
        return s + ")";
    };
    return {bt == want && bp == want && dt < 1.0, "T " + str(bt) + ", P " + str(bp) + ", " + fmt(dt) + " s"};
}

Outcome criterion3()
{
    const std::vector<int> ks{9, 12, 15, 18, 21};
    const std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    const auto t = torus_complex();
    const auto p = pinched_complex();
    std::map<int, double> tm, pm;
    std::ostringstream log;
    log << "    k  T per seed            P per seed            T/k^2  P/k^2\n";
    const auto t0 = std::chrono::steady_clock::now();
    for (int k : ks) {
        std::string tl, pl;
        double ts = 0, ps = 0;
        for (auto seed : seeds) {
            EstimatorConfig cfg;  // M = 500000, kappa = 0.1, schedule 10^3, 10^4, 10^5
            cfg.walk.seed = seed;
            const auto a = estimate_class_count(t, k, cfg).class_count();
            const auto b = estimate_class_count(p, k, cfg).class_count();
            ts += static_cast<double>(a);
            ps += static_cast<double>(b);
            tl += std::to_string(a) + " ";
            pl += std::to_string(b) + " ";
        }
        tm[k] = ts / static_cast<double>(seeds.size());
        pm[k] = ps / static_cast<double>(seeds.size());
        char line[256];
        std::snprintf(line, sizeof line, "   %2d  %-20s  %-20s  %.3f  %.3f\n", k, tl.c_str(), pl.c_str(),
                      tm[k] / (k * k), pm[k] / (k * k));
        log << line;
        std::cerr << line << std::flush;
    }
    const bool a = std::abs(tm[9] - 41.0) <= 0.25 * 41.0 && std::abs(pm[9] - 40.0) <= 0.25 * 40.0;
    const bool b = pm[21] / tm[21] >= 2.0;
    bool c = true;
    for (int k : ks)
        c = c && tm[k] / (k * k) >= 0.25 && tm[k] / (k * k) <= 0.60;
    const bool d = pm[15] / 225.0 < pm[18] / 324.0 && pm[18] / 324.0 < pm[21] / 441.0;
    auto yn = [](bool v) { return v ? "ok" : "fail"; };
    std::string detail = "means over 5 seeds: (a) T(9)=" + fmt(tm[9], 1) + " P(9)=" + fmt(pm[9], 1) + " " + yn(a) +
                         "; (b) P(21)/T(21)=" + fmt(pm[21] / tm[21]) + " " + yn(b) + "; (c) T/k^2 in [0.25,0.60] " +
                         yn(c) + "; (d) P/k^2 increasing from 15 " + yn(d) + "; " + fmt(seconds_since(t0), 0) +
                         " s\n" + log.str();
    return {a && b && c && d, detail};
}

Outcome criterion4()
{
    const auto t0 = std::chrono::steady_clock::now();
    struct Instance {
        std::string name;
        SimplicialComplex y;
        int k;
    };
    const std::vector<Instance> instances{{"boundary2", boundary_complex(2), 3},
                                          {"boundary2", boundary_complex(2), 4},
                                          {"boundary2", boundary_complex(2), 5},
                                          {"torus_T", torus_complex(), 3}};
    bool pass = true;
    std::string detail;
    for (const auto& in : instances) {
        const auto exact = exact_class_count(circle_complex(in.k), in.y, BasePoint{0, 0}).class_count;
        int agree = 0;
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            EstimatorConfig cfg;
            cfg.walk.seed = seed;
            agree += estimate_class_count(in.y, in.k, cfg).class_count() == exact;
        }
        pass = pass && agree >= 9;
        detail += in.name + " k=" + std::to_string(in.k) + ": exact " + std::to_string(exact) + ", " +
                  std::to_string(agree) + "/10 agree; ";
    }
    const double dt = seconds_since(t0);
    return {pass && dt < 60.0, detail + fmt(dt, 1) + " s"};
}

Outcome criterion5()
{
    Rng rng(20240501, 0);
    int facet_cases = 0, facet_cases_bad = 0, facet_cases_true = 0;
    while (facet_cases < 200) {
        const auto x = random_complex(rng, 2 + uniform_below(rng, 4), 1 + static_cast<int>(uniform_below(rng, 4)), 3);
        const auto y = random_complex(rng, 2 + uniform_below(rng, 4), 1 + static_cast<int>(uniform_below(rng, 5)), 4);
        const auto maps = enumerate_assignments(x, y);
        const auto& f = maps[uniform_below(rng, maps.size())];
        const auto& g = maps[uniform_below(rng, maps.size())];
        const std::vector<Assignment> pair{f, g};
        const bool fast = mutually_contiguous(x, y, pair);
        facet_cases_bad += fast != contiguous_all_simplices(x, y, f, g);
        facet_cases_true += fast;
        ++facet_cases;
    }
    int rips_cases = 0, rips_cases_bad = 0, rips_cases_true = 0;
    while (rips_cases < 200) {
        const auto space = random_cloud(rng, 7);
        const auto crit = space->distinct_distances();
        const double eps = crit[uniform_below(rng, crit.size())];
        const auto r = rips_complex(space, eps, 6);
        const auto x = random_complex(rng, 2 + uniform_below(rng, 3), 1 + static_cast<int>(uniform_below(rng, 3)), 3);
        const auto maps = enumerate_assignments(x, r, std::nullopt, 200000);
        const auto& f = maps[uniform_below(rng, maps.size())];
        const auto& g = maps[uniform_below(rng, maps.size())];
        const std::vector<Assignment> pair{f, g};
        const bool metric = rips_contiguous(x, *space, eps, pair);
        rips_cases_bad += metric != mutually_contiguous(x, r, pair);
        rips_cases_true += metric;
        ++rips_cases;
    }
    return {facet_cases_bad == 0 && rips_cases_bad == 0,
            "maximal vs all simplices: " + std::to_string(facet_cases_bad) + " disagreements in 200 (" +
                std::to_string(facet_cases_true) + " contiguous); metric vs simplicial on Rips targets: " +
                std::to_string(rips_cases_bad) + " disagreements in 200 (" + std::to_string(rips_cases_true) +
                " contiguous)"};
}

Outcome criterion6()
{
    const std::vector<std::pair<std::string, SimplicialComplex>> small{
        {"point", point_complex()}, {"simplex1", standard_simplex(1)}, {"boundary2", boundary_complex(2)}};
    auto targets = small;
    targets.emplace_back("simplex2", standard_simplex(2));
    int cases = 0, bad = 0;
    std::size_t checked = 0;
    for (const auto& [xn, x] : small)
        for (const auto& [zn, z] : small)
            for (const auto& [yn, y] : targets) {
                ++cases;
                const auto prod = product_complex(x, z);
                const auto lhs = enumerate_assignments(prod, y, std::nullopt, 1'000'000);
                const auto mc = build_contiguity_complex(x, y, std::nullopt, std::max(1, z.dimension()));
                const auto rhs = enumerate_assignments(z, mc.complex, std::nullopt, 1'000'000);
                bool ok = lhs.size() == rhs.size();
                for (const auto& f : lhs) {
                    const auto g = exponential_transpose(x, z, y, mc, f);
                    ok = ok && exponential_untranspose(x, z, mc, g) == f;
                }
                for (const auto& g : rhs)
                    ok = ok && exponential_transpose(x, z, y, mc, exponential_untranspose(x, z, mc, g)) == g;
                checked += lhs.size() + rhs.size();
                if (!ok) {
                    ++bad;
                    std::cerr << "  mismatch for x=" << xn << " z=" << zn << " y=" << yn << ": " << lhs.size()
                              << " vs " << rhs.size() << "\n";
                }
            }
    return {bad == 0, std::to_string(cases) + " (x, z, y) triples, " + std::to_string(bad) + " failures, " +
                          std::to_string(checked) + " round trips"};
}

Outcome criterion7()
{
    int cases = 0, bad = 0;
    for (const auto& base : {boundary_complex(2), standard_simplex(2)})
        for (int n = 0; n <= 3; ++n) {
            const auto s = iterated_subdivision(base, n);
            const auto lo = approximate_subdivision(s, Tiebreak::LowestId);
            const auto hi = approximate_subdivision(s, Tiebreak::MaxWeight);
            const std::vector<Assignment> pair{lo, hi};
            const bool ok = is_simplicial(lo, s.refined, base) && is_simplicial(hi, s.refined, base) &&
                            satisfies_carrier_condition(s, lo) && satisfies_carrier_condition(s, hi) &&
                            mutually_contiguous(s.refined, base, pair);
            ++cases;
            bad += !ok;
        }
    return {bad == 0, std::to_string(cases) + " subdivisions, both tiebreaks, " + std::to_string(bad) + " failures"};
}

Outcome criterion8()
{
    const auto b = boundary_complex(2);
    const double id = mesh_size(identity_subdivision(b));
    bool pass = std::abs(id - std::sqrt(2.0)) <= 1e-12;
    std::string detail = "identity " + fmt(id, 15);
    auto s = identity_subdivision(b);
    for (int n = 1; n <= 6; ++n) {
        s = barycentric_subdivision(s);
        const Rational sq = mesh_size_squared(s);
        const Rational bound_sq = Rational(1, BigInt(1) << (n - 1));
        const double m = mesh_size(s);
        const bool ok = sq <= bound_sq && m <= 1.0 / std::sqrt(std::ldexp(1.0, n - 1));
        pass = pass && ok;
        detail += "; Sd^" + std::to_string(n) + " " + fmt(m, 4) + (ok ? "" : " (over bound)");
    }
    return {pass, detail};
}

Outcome criterion9()
{
    bool pass = true;
    int cases = 0;
    for (const auto& y : {boundary_complex(2), torus_complex()})
        for (int k = 3; k <= 9; ++k) {
            ++cases;
            pass = pass && ClosedWalkSampler(y, 0, k).total() == closed_walks_by_matrix_power(y, 0, k);
        }
    const auto b = boundary_complex(2);
    const ClosedWalkSampler sampler(b, 0, 3);
    Rng rng(9000, 0);
    std::map<Assignment, int> hist;
    for (const auto& f : enumerate_assignments(circle_complex(3), b, BasePoint{0, 0}))
        hist[f] = 0;
    const int draws = 9000;
    bool in_support = hist.size() == 9;
    for (int i = 0; i < draws; ++i) {
        const auto f = sampler.sample(rng);
        auto it = hist.find(f);
        if (it == hist.end())
            in_support = false;
        else
            ++it->second;
    }
    double chi2 = 0;
    const double expect = static_cast<double>(draws) / static_cast<double>(hist.size());
    for (const auto& [f, c] : hist)
        chi2 += (c - expect) * (c - expect) / expect;
    const boost::math::chi_squared dist(static_cast<double>(hist.size() - 1));
    const double pval = boost::math::cdf(boost::math::complement(dist, chi2));
    pass = pass && in_support && pval > 0.001;
    return {pass, std::to_string(cases) + " walk totals vs matrix power" + (pass ? "" : " (check)") + "; chi2 = " +
                      fmt(chi2) + ", p = " + fmt(pval, 4) + " over " + std::to_string(draws) + " draws"};
}

Outcome criterion10()
{
    Rng rng(4242, 0);
    int bad_h0 = 0, bad_betti = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const auto space = random_cloud(rng, 3 + uniform_below(rng, 13));
        const auto filt = critical_filtration(space, 2);
        std::vector<FiltrationStage> stages;
        for (double g : filt.grades())
            stages.push_back({filt.complex_at(g), g});
        const auto bars = persistent_homology(stages, 1);
        auto uf = rips_h0(*space);
        auto red = bars[0];
        uf.normalize();
        red.normalize();
        bad_h0 += uf.bars != red.bars;
        for (const auto& st : stages) {
            const auto betti = betti_numbers(st.complex, 2);
            for (int d = 0; d <= 1; ++d) {
                const std::size_t want = static_cast<std::size_t>(d) < betti.size() ? betti[static_cast<std::size_t>(d)] : 0;
                bad_betti += bars[static_cast<std::size_t>(d)].alive_at(st.grade) != want;
            }
        }
    }
    const auto triple = std::make_shared<const FiniteMetricSpace>(3, std::vector<double>{0, 1, 2, 1, 0, 1, 2, 1, 0});
    auto tb = rips_h0(*triple);
    tb.normalize();
    const std::vector<std::pair<double, double>> want{{0, 1}, {0, 1}, {0, kInfinity}};
    const bool triple_ok = tb.bars == want;
    return {bad_h0 == 0 && bad_betti == 0 && triple_ok,
            "50 clouds: " + std::to_string(bad_h0) + " union-find/reduction mismatches, " + std::to_string(bad_betti) +
                " alive-vs-Betti mismatches; (1,1,2) triple " + (triple_ok ? "ok" : "wrong")};
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"acceptance criteria"};
    std::vector<int> skip, only;
    app.add_option("--skip", skip, "criteria to skip");
    app.add_option("--only", only, "criteria to run");
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"exact-class oracle", criterion1},        {"homology non-separation", criterion2},
        {"table reproduction", criterion3},        {"oracle-estimator agreement", criterion4},
        {"contiguity equivalences", criterion5},        {"exponential law", criterion6},
        {"simplicial approximation", criterion7},  {"mesh bounds", criterion8},
        {"sampler correctness", criterion9},       {"persistence consistency", criterion10}};

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (std::find(skip.begin(), skip.end(), id) != skip.end())
            continue;
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end())
            continue;
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << criteria[i].first << "): " << o.detail
                  << "\n"
                  << std::flush;
    }
    return failed == 0 ? 0 : 1;
}
