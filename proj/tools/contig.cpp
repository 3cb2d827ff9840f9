// contig: command-line front end for the contiguity library.
//
//   contig complex --standard torus_T
//   contig count --target torus_T --k 9 --mode estimate --seed 1
//   contig table1 --k-list 9,12 --seeds 1,2
//   contig persist --pipeline rips-h0 --points cloud.csv

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "contig.hpp"
#include "contig/io.hpp"

namespace {

using contig::io::json;

struct Common {
    std::string out;
    std::string format = "json";
};

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> parts;
    if (s.empty())
        return parts;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep))
        parts.push_back(cur);
    return parts;
}

std::vector<int> int_list(const std::string& s)
{
    std::vector<int> out;
    for (const auto& p : split(s, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(p, &used));
            if (used != p.size())
                throw std::invalid_argument(p);
        } catch (const std::exception&) {
            throw contig::InvalidArgument("not an integer list: '" + s + "'");
        }
    }
    return out;
}

// "circle" takes its size from --k; every other name goes to standard_complex.
contig::SimplicialComplex named_complex(const std::string& name, int k)
{
    auto c = name == "circle" ? contig::circle_complex(k) : contig::standard_complex(name);
    c.set_name(name == "circle" ? "circle" + std::to_string(k) : name);
    return c;
}

// Every option of the subcommand, as given or defaulted.
json run_config(const CLI::App& app)
{
    json cfg = json::object();
    cfg["command"] = app.get_name();
    for (const CLI::Option* opt : app.get_options()) {
        if (opt->get_lnames().empty() || opt->get_lnames().front() == "help")
            continue;
        const std::string name = opt->get_lnames().front();
        if (opt->get_type_size() == 0)
            cfg[name] = opt->count() > 0;
        else if (opt->count() > 0)
            cfg[name] = opt->results().size() == 1 ? json(opt->results().front()) : json(opt->results());
        else
            cfg[name] = opt->get_default_str();
    }
    return cfg;
}

json envelope(const CLI::App& app)
{
    return {{"version", contig::kVersion}, {"config", run_config(app)}};
}

void emit(const Common& c, const std::string& text)
{
    if (c.out.empty() || c.out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f)
        throw contig::ParseError("cannot write " + c.out);
    f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---- complex ----

struct ComplexArgs {
    Common io;
    std::string standard;
    std::string facets;
    int k = 3;
};

void cmd_complex(const CLI::App& app, const ComplexArgs& a)
{
    if (a.standard.empty() == a.facets.empty())
        throw contig::InvalidArgument("give exactly one of --standard or --facets");
    const auto c = a.facets.empty() ? named_complex(a.standard, a.k) : contig::io::complex_from_file(a.facets);
    if (a.io.format == "text") {
        std::string s = "vertices " + std::to_string(c.vertex_count()) + "\n";
        const auto counts = c.counts();
        for (std::size_t d = 0; d < counts.size(); ++d)
            s += "dim " + std::to_string(d) + ": " + std::to_string(counts[d]) + "\n";
        emit(a.io, s);
        return;
    }
    if (a.io.format == "csv") {
        std::string s = "dimension,count\n";
        const auto counts = c.counts();
        for (std::size_t d = 0; d < counts.size(); ++d)
            s += std::to_string(d) + "," + std::to_string(counts[d]) + "\n";
        emit(a.io, s);
        return;
    }
    auto out = envelope(app);
    out["complex"] = contig::io::complex_to_json(c);
    out["simplex_counts"] = c.counts();
    emit(a.io, dump(out));
}

// ---- count and table1 ----

struct EstimateArgs {
    double kappa = 0.1;
    std::uint64_t max_iters = 500'000;
    std::uint64_t seed = 0;
    unsigned workers = std::max(1U, std::thread::hardware_concurrency());
    std::string schedule = "1000,10000,100000";
    std::string step_soundness = "contiguous-steps";
    bool no_collapse = false;
    bool no_prune = false;
    bool no_memo = false;
    bool wall_time = false;

    contig::EstimatorConfig config() const
    {
        contig::EstimatorConfig cfg;
        cfg.walk.kappa = kappa;
        cfg.walk.max_iters = max_iters;
        cfg.walk.seed = seed;
        cfg.walk.mode = step_soundness == "paper-literal" ? contig::StepSoundness::PaperLiteral
                                                          : contig::StepSoundness::ContiguousSteps;
        cfg.workers = workers;
        cfg.schedule.clear();
        for (int b : int_list(schedule)) {
            if (b <= 0)
                throw contig::InvalidArgument("schedule budgets must be positive");
            cfg.schedule.push_back(static_cast<std::uint64_t>(b));
        }
        if (cfg.schedule.empty())
            throw contig::InvalidArgument("schedule must not be empty");
        cfg.allow_collapse = !no_collapse;
        cfg.prune = !no_prune;
        cfg.memo = !no_memo;
        return cfg;
    }
};

void add_estimate_options(CLI::App* sub, EstimateArgs& e)
{
    sub->add_option("--kappa", e.kappa, "acceptance probability for non-improving moves")->capture_default_str();
    sub->add_option("--max-iters", e.max_iters, "iterations per walk (M)")->capture_default_str();
    sub->add_option("--seed", e.seed, "random seed")->capture_default_str();
    sub->add_option("--workers", e.workers, "worker threads")->capture_default_str();
    sub->add_option("--schedule", e.schedule, "cumulative trial budgets, comma separated")->capture_default_str();
    sub->add_option("--step-soundness", e.step_soundness, "walk step rule")
        ->check(CLI::IsMember({"contiguous-steps", "paper-literal"}))
        ->capture_default_str();
    sub->add_flag("--no-collapse", e.no_collapse, "sample closed walks without repeated vertices in a row");
    sub->add_flag("--no-prune", e.no_prune, "compare against every catalog entry");
    sub->add_flag("--no-memo", e.no_memo, "do not remember visited walk states");
    sub->add_flag("--wall-time", e.wall_time, "include wall time (report is then not reproducible byte for byte)");
}

struct CountArgs {
    Common io;
    EstimateArgs est;
    std::string target;
    int k = 3;
    std::string mode = "estimate";
    std::size_t cap = contig::kDefaultMapCap;
    bool based = true;
};

void cmd_count(const CLI::App& app, const CountArgs& a)
{
    const auto y = named_complex(a.target, a.k);
    auto out = envelope(app);
    std::size_t count = 0;
    if (a.mode == "exact") {
        const auto x = contig::circle_complex(a.k);
        std::optional<contig::BasePoint> base;
        if (a.based)
            base = contig::BasePoint{0, 0};
        contig::ExactCountOptions opts;
        opts.cap = a.cap;
        opts.workers = a.est.workers;
        const auto p = contig::exact_class_count(x, y, base, opts);
        count = p.class_count;
        out["result"] = contig::io::partition_to_json(p);
    } else {
        if (!a.based)
            throw contig::InvalidArgument("the estimator counts based maps; drop --unbased");
        const auto cfg = a.est.config();
        const auto t0 = std::chrono::steady_clock::now();
        const auto st = contig::estimate_class_count(y, a.k, cfg);
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        count = st.class_count();
        out["result"] = contig::io::estimator_to_json(st, cfg, {y.name(), a.k, true, a.est.wall_time ? dt : -1});
    }
    const double ratio = static_cast<double>(count) / (static_cast<double>(a.k) * a.k);
    if (a.io.format == "csv") {
        emit(a.io, "target,k,mode,seed,class_count,count_over_k2\n" + y.name() + "," + std::to_string(a.k) + "," +
                       a.mode + "," + std::to_string(a.est.seed) + "," + std::to_string(count) + "," +
                       contig::io::decimal(ratio) + "\n");
        return;
    }
    if (a.io.format == "text") {
        emit(a.io, std::to_string(count) + " classes (count/k^2 = " + contig::io::decimal(ratio) + ")\n");
        return;
    }
    out["class_count"] = count;
    out["count_over_k2"] = ratio;
    emit(a.io, dump(out));
}

struct TableArgs {
    Common io;
    EstimateArgs est;
    std::string k_list = "9,12,15,18,21";
    std::string seeds = "1,2,3,4,5";
    std::string json_out;
};

void cmd_table1(const CLI::App& app, const TableArgs& a)
{
    const auto ks = int_list(a.k_list);
    const auto seeds = int_list(a.seeds);
    const auto t = contig::torus_complex();
    const auto p = contig::pinched_complex();
    std::string csv = "k,T,P,T_over_k2,P_over_k2,T_min,T_max,P_min,P_max,seeds\n";
    json rows = json::array();
    for (int k : ks) {
        std::vector<std::size_t> tc, pc;
        json runs = json::array();
        for (int s : seeds) {
            EstimateArgs e = a.est;
            e.seed = static_cast<std::uint64_t>(s);
            const auto cfg = e.config();
            for (const auto* y : {&t, &p}) {
                const auto st = contig::estimate_class_count(*y, k, cfg);
                (y == &t ? tc : pc).push_back(st.class_count());
                runs.push_back({{"target", y == &t ? "torus_T" : "pinched_P"},
                                {"seed", s},
                                {"class_count", st.class_count()},
                                {"stabilized", st.stabilized},
                                {"walks_not_found", st.walks - st.walks_found}});
            }
        }
        auto mean = [](const std::vector<std::size_t>& v) {
            double s = 0;
            for (auto x : v)
                s += static_cast<double>(x);
            return v.empty() ? 0.0 : s / static_cast<double>(v.size());
        };
        auto lo = [](const std::vector<std::size_t>& v) { return v.empty() ? 0 : *std::min_element(v.begin(), v.end()); };
        auto hi = [](const std::vector<std::size_t>& v) { return v.empty() ? 0 : *std::max_element(v.begin(), v.end()); };
        const double k2 = static_cast<double>(k) * k;
        using contig::io::decimal;
        csv += std::to_string(k) + "," + decimal(mean(tc)) + "," + decimal(mean(pc)) + "," + decimal(mean(tc) / k2) +
               "," + decimal(mean(pc) / k2) + "," + std::to_string(lo(tc)) + "," + std::to_string(hi(tc)) + "," +
               std::to_string(lo(pc)) + "," + std::to_string(hi(pc)) + "," + std::to_string(seeds.size()) + "\n";
        rows.push_back({{"k", k},
                        {"T", mean(tc)},
                        {"P", mean(pc)},
                        {"T_over_k2", mean(tc) / k2},
                        {"P_over_k2", mean(pc) / k2},
                        {"T_per_seed", tc},
                        {"P_per_seed", pc},
                        {"runs", std::move(runs)}});
    }
    auto report = envelope(app);
    report["rows"] = std::move(rows);
    if (!a.json_out.empty()) {
        Common j{a.json_out, "json"};
        emit(j, dump(report));
    }
    emit(a.io, a.io.format == "json" ? dump(report) : csv);
}

// ---- persist ----

struct PersistArgs {
    Common io;
    std::string pipeline = "homology";
    std::string standard;
    std::string facets;
    std::string points;
    std::string distance_matrix;
    std::string x;
    std::string y;
    std::string z = "circle3";
    int k = 3;
    std::uint32_t field = 2;
    std::optional<double> epsilon;
    int max_dim = 2;
    int max_degree = 1;
    std::size_t cap = contig::kDefaultMapCap;
    bool based = true;
    std::string tiebreak = "lowest-id";
};

std::shared_ptr<const contig::FiniteMetricSpace> metric_input(const PersistArgs& a)
{
    if (a.points.empty() == a.distance_matrix.empty())
        throw contig::InvalidArgument("give exactly one of --points or --distance-matrix");
    return std::make_shared<const contig::FiniteMetricSpace>(
        a.points.empty() ? contig::io::distance_matrix_from_csv(a.distance_matrix) : contig::io::points_from_csv(a.points));
}

std::vector<contig::RefinementStage> refinement_input(const PersistArgs& a)
{
    const auto colon = a.x.find(':');
    if (colon == std::string::npos)
        throw contig::InvalidArgument("--x expects circle:K0,K1,... or sd:NAME,LEVELS");
    const std::string kind = a.x.substr(0, colon);
    const auto args = split(a.x.substr(colon + 1), ',');
    if (kind == "circle") {
        const auto sizes = int_list(a.x.substr(colon + 1));
        if (sizes.empty())
            throw contig::InvalidArgument("--x circle: needs at least one size");
        return contig::circle_refinements(sizes);
    }
    if (kind == "sd" && args.size() == 2) {
        const auto rule = a.tiebreak == "max-weight" ? contig::Tiebreak::MaxWeight : contig::Tiebreak::LowestId;
        return contig::subdivision_refinements(contig::standard_complex(args[0]), int_list(args[1]).at(0), rule);
    }
    throw contig::InvalidArgument("--x expects circle:K0,K1,... or sd:NAME,LEVELS");
}

void cmd_persist(const CLI::App& app, const PersistArgs& a)
{
    auto out = envelope(app);
    std::vector<contig::Barcode> barcodes;
    contig::H0PipelineOptions h0;
    h0.based = a.based;
    h0.cap = a.cap;

    if (a.pipeline == "homology") {
        if (!a.points.empty() || !a.distance_matrix.empty()) {
            const auto space = metric_input(a);
            const auto filt = contig::critical_filtration(space, a.max_dim);
            std::vector<contig::FiltrationStage> stages;
            for (double g : filt.grades())
                if (!a.epsilon || g <= *a.epsilon)
                    stages.push_back({filt.complex_at(g), g});
            barcodes = contig::persistent_homology(stages, a.max_degree, a.field);
            out["filtration"] = contig::io::filtration_to_json(filt);
        } else {
            if (a.standard.empty() == a.facets.empty())
                throw contig::InvalidArgument("give --standard, --facets, --points or --distance-matrix");
            const auto c = a.facets.empty() ? named_complex(a.standard, a.k) : contig::io::complex_from_file(a.facets);
            const auto betti = contig::betti_numbers(c, a.field);
            out["betti"] = betti;
            const std::vector<contig::FiltrationStage> one{{c, 0.0}};
            barcodes = contig::persistent_homology(one, std::max(0, c.dimension()), a.field);
        }
    } else if (a.pipeline == "rips-h0") {
        const auto space = metric_input(a);
        barcodes.push_back(contig::rips_h0(*space));
        out["filtration"] = contig::io::filtration_to_json(contig::critical_filtration(space, a.max_dim));
    } else if (a.pipeline == "contiguity-h0") {
        const auto space = metric_input(a);
        const auto z = named_complex(a.z, a.k);
        const auto r = contig::persistent_contiguity_h0(z, space, a.max_dim, a.epsilon, h0);
        barcodes.push_back(r.barcode);
        out["map_counts"] = r.map_counts;
        out["class_counts"] = r.class_counts;
    } else if (a.pipeline == "subdivision-h0") {
        if (a.y.empty())
            throw contig::InvalidArgument("subdivision-h0 needs --y");
        const auto stages = refinement_input(a);
        const auto r = contig::persistent_subdivision_h0(stages, contig::standard_complex(a.y), h0);
        barcodes.push_back(r.barcode);
        out["map_counts"] = r.map_counts;
        out["class_counts"] = r.class_counts;
    }

    if (a.io.format == "text") {
        std::string s;
        for (const auto& b : barcodes)
            s += contig::io::barcode_text(b);
        emit(a.io, s);
        return;
    }
    if (a.io.format == "csv") {
        std::string s = "degree,birth,death\n";
        for (const auto& b : barcodes)
            for (const auto& [birth, death] : b.bars)
                s += std::to_string(b.degree) + "," + contig::io::decimal(birth) + "," + contig::io::decimal(death) + "\n";
        emit(a.io, s);
        return;
    }
    json bs = json::array();
    for (const auto& b : barcodes)
        bs.push_back(contig::io::barcode_to_json(b));
    out["barcodes"] = std::move(bs);
    emit(a.io, dump(out));
}

void add_io_options(CLI::App* sub, Common& c, const std::string& default_format)
{
    c.format = default_format;
    sub->add_option("--out", c.out, "output file (default stdout)");
    sub->add_option("--format", c.format, "output format")
        ->check(CLI::IsMember({"json", "csv", "text"}))
        ->capture_default_str();
}

int fail(const char* kind, const std::string& message)
{
    std::cerr << json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << "\n";
    return 2;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Contiguity classes of simplicial maps and persistence pipelines"};
    app.set_version_flag("--version", contig::kVersion);
    app.require_subcommand(1);

    ComplexArgs ca;
    auto* complex = app.add_subcommand("complex", "build a complex and print it");
    add_io_options(complex, ca.io, "json");
    complex->add_option("--standard", ca.standard, "point, simplexN, boundaryN, circle (with --k), circleN, torus_T, pinched_P");
    complex->add_option("--facets", ca.facets, "complex JSON file");
    complex->add_option("--k", ca.k, "circle size")->capture_default_str();

    CountArgs co;
    auto* count = app.add_subcommand("count", "exact or estimated class count of maps from the k-gon");
    add_io_options(count, co.io, "json");
    add_estimate_options(count, co.est);
    count->add_option("--target", co.target, "target complex name")->required();
    count->add_option("--k", co.k, "circle size")->capture_default_str();
    count->add_option("--mode", co.mode, "exact or estimate")
        ->check(CLI::IsMember({"exact", "estimate"}))
        ->capture_default_str();
    count->add_option("--cap", co.cap, "map enumeration cap (exact mode)")->capture_default_str();
    count->add_flag("--based,!--unbased", co.based, "based maps (default); unbased needs exact mode");

    TableArgs ta;
    auto* table = app.add_subcommand("table1", "estimated counts for torus_T and pinched_P over k and seeds");
    add_io_options(table, ta.io, "csv");
    add_estimate_options(table, ta.est);
    table->add_option("--k-list", ta.k_list, "comma separated k values (empty for none)")->capture_default_str();
    table->add_option("--seeds", ta.seeds, "comma separated seeds")->capture_default_str();
    table->add_option("--json-out", ta.json_out, "also write the JSON report here");

    PersistArgs pa;
    auto* persist = app.add_subcommand("persist", "homology and persistence pipelines");
    add_io_options(persist, pa.io, "json");
    persist->add_option("--pipeline", pa.pipeline, "pipeline")
        ->check(CLI::IsMember({"homology", "rips-h0", "contiguity-h0", "subdivision-h0"}))
        ->capture_default_str();
    persist->add_option("--standard", pa.standard, "standard complex (homology)");
    persist->add_option("--facets", pa.facets, "complex JSON file (homology)");
    persist->add_option("--points", pa.points, "point cloud CSV");
    persist->add_option("--distance-matrix", pa.distance_matrix, "distance matrix CSV");
    persist->add_option("--x", pa.x, "refinement sequence: circle:K0,K1,... or sd:NAME,LEVELS");
    persist->add_option("--y", pa.y, "target complex (subdivision-h0)");
    persist->add_option("--z", pa.z, "domain complex (contiguity-h0)")->capture_default_str();
    persist->add_option("--k", pa.k, "circle size when a complex is named 'circle'")->capture_default_str();
    persist->add_option("--field", pa.field, "prime field of coefficients")->capture_default_str();
    persist->add_option("--epsilon", pa.epsilon, "largest filtration value");
    persist->add_option("--max-dim", pa.max_dim, "Rips truncation dimension")->capture_default_str();
    persist->add_option("--max-degree", pa.max_degree, "highest homological degree (point clouds)")->capture_default_str();
    persist->add_option("--cap", pa.cap, "map enumeration cap")->capture_default_str();
    persist->add_flag("--based,!--unbased", pa.based, "based maps (default) or unbased");
    persist->add_option("--tiebreak", pa.tiebreak, "approximation rule for sd sequences")
        ->check(CLI::IsMember({"lowest-id", "max-weight"}))
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (complex->parsed())
            cmd_complex(*complex, ca);
        else if (count->parsed())
            cmd_count(*count, co);
        else if (table->parsed())
            cmd_table1(*table, ta);
        else if (persist->parsed())
            cmd_persist(*persist, pa);
    } catch (const contig::Error& e) {
        return fail(e.kind(), e.what());
    } catch (const std::exception& e) {
        return fail("error", e.what());
    }
    return 0;
}
