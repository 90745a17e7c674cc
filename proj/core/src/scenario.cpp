#include "otsm/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace otsm::scenario {

namespace fs = std::filesystem;

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

struct Entry {
    std::string value;
    int line = 0;
};

using Section = std::map<std::string, Entry>;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const Entry& e, const std::string& key) {
    const char* begin = e.value.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw ParseError("line " + std::to_string(e.line) + ": key '" + key +
                         "' has non-numeric value '" + e.value + "'");
    return v;
}

std::uint64_t parse_seed(const Entry& e, const std::string& key) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
    if (res.ec != std::errc{} || res.ptr != e.value.data() + e.value.size())
        throw ParseError("line " + std::to_string(e.line) + ": key '" + key +
                         "' must be a non-negative integer, got '" + e.value + "'");
    return v;
}

class SectionReader {
public:
    SectionReader(Section section, std::string name)
        : section_(std::move(section)), name_(std::move(name)) {}

    std::optional<Entry> take(const std::string& key) {
        const auto it = section_.find(key);
        if (it == section_.end()) return std::nullopt;
        Entry e = it->second;
        section_.erase(it);
        return e;
    }

    double number(const std::string& key, double fallback) {
        const auto e = take(key);
        return e ? parse_number(*e, key) : fallback;
    }

    std::optional<double> number_or_auto(const std::string& key) {
        const auto e = take(key);
        if (!e || e->value == "auto") return std::nullopt;
        return parse_number(*e, key);
    }

    std::uint64_t seed(const std::string& key, std::uint64_t fallback) {
        const auto e = take(key);
        return e ? parse_seed(*e, key) : fallback;
    }

    /// Any key not consumed by the schema is a configuration error.
    void finish() const {
        if (!section_.empty()) {
            const auto& [key, entry] = *section_.begin();
            throw ParseError("line " + std::to_string(entry.line) + ": unknown key '" + key +
                             "' in section [" + name_ + "]");
        }
    }

private:
    Section section_;
    std::string name_;
};

}  // namespace

Scenario parse_scenario(const std::string& text) {
    static const std::set<std::string> known_sections = {"", "plant", "surface",
                                                         "perturbation", "sim", "analysis"};
    std::map<std::string, Section> sections;
    std::string current;

    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ParseError("line " + std::to_string(lineno) + ": malformed section header");
            current = trim(line.substr(1, line.size() - 2));
            if (!known_sections.count(current))
                throw ParseError("line " + std::to_string(lineno) + ": unknown section [" +
                                 current + "]");
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ParseError("line " + std::to_string(lineno) + ": empty key or value");
        if (!sections[current].emplace(key, Entry{value, lineno}).second)
            throw ParseError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }

    Scenario sc;

    SectionReader top(sections[""], "");
    if (const auto e = top.take("name")) sc.name = e->value;
    top.finish();
    if (sc.name.empty()) throw ParseError("scenario name is required and must be nonempty");

    SectionReader plant(sections["plant"], "plant");
    sc.plant.m = plant.number("m", sc.plant.m);
    sc.plant.U = plant.number("U", sc.plant.U);
    plant.finish();

    SectionReader surface(sections["surface"], "surface");
    {
        std::string type = "optimal";
        if (const auto e = surface.take("type")) type = e->value;
        if (type == "optimal") {
            control::OptimalSurface s;
            s.alpha = surface.number("alpha", s.alpha);
            sc.surface = s;
        } else if (type == "classic") {
            control::ClassicSurface s;
            s.beta = surface.number("beta", s.beta);
            s.q_over_p = surface.number("q_over_p", s.q_over_p);
            sc.surface = s;
        } else if (type == "nonsingular") {
            control::NonSingularSurface s;
            s.beta = surface.number("beta", s.beta);
            s.p_over_q = surface.number("p_over_q", s.p_over_q);
            sc.surface = s;
        } else {
            throw ParseError("surface type must be optimal, classic, or nonsingular, got '" +
                             type + "'");
        }
        surface.finish();
    }

    SectionReader sim(sections["sim"], "sim");
    sc.sim.dt = sim.number("dt", sc.sim.dt);
    sc.sim.t_end = sim.number("t_end", sc.sim.t_end);
    sc.sim.initial.x1 = sim.number("x1", sc.sim.initial.x1);
    sc.sim.initial.x2 = sim.number("x2", sc.sim.initial.x2);
    sc.sim.seed = sim.seed("seed", sc.sim.seed);
    sim.finish();

    SectionReader pert(sections["perturbation"], "perturbation");
    {
        std::string type = "none";
        if (const auto e = pert.take("type")) type = e->value;
        if (type == "none") {
            sc.perturbation = dynamics::NoPerturbation{};
        } else if (type == "friction") {
            dynamics::FrictionPerturbation p;
            p.Fc = pert.number("Fc", p.Fc);
            p.sigma0 = pert.number("sigma0", p.sigma0);
            sc.perturbation = p;
        } else if (type == "harmonic") {
            dynamics::HarmonicPerturbation p;
            p.A = pert.number("A", p.A);
            p.omega = pert.number("omega", p.omega);
            p.phase = pert.number("phase", p.phase);
            sc.perturbation = p;
        } else if (type == "random_binary") {
            dynamics::RandomBinaryPerturbation p;
            p.A = pert.number("A", p.A);
            p.dwell = pert.number("dwell", p.dwell);
            p.seed = pert.seed("seed", sc.sim.seed);  // defaults to the global seed
            sc.perturbation = p;
        } else {
            throw ParseError(
                "perturbation type must be none, friction, harmonic, or random_binary, got '" +
                type + "'");
        }
        pert.finish();
    }

    SectionReader analysis(sections["analysis"], "analysis");
    sc.analysis.band = analysis.number_or_auto("band");
    sc.analysis.eps_x1 = analysis.number("eps_x1", sc.analysis.eps_x1);
    sc.analysis.eps_x2 = analysis.number("eps_x2", sc.analysis.eps_x2);
    sc.analysis.eta = analysis.number("eta", sc.analysis.eta);
    sc.analysis.window = analysis.number_or_auto("window");
    analysis.finish();

    validate(sc);
    return sc;
}

Scenario load_scenario(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw std::ios_base::failure("cannot open config file: " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_scenario(buf.str());
    } catch (const ParseError& e) {
        throw ParseError(file.string() + ": " + e.what());
    }
}

void validate(const Scenario& sc) {
    if (sc.name.empty()) throw ValidationError("scenario name must be nonempty");
    validate(sc.plant);
    control::validate(sc.surface);
    dynamics::validate(sc.perturbation, sc.plant);
    dynamics::validate(sc.sim);
    const auto& a = sc.analysis;
    if (!(a.eps_x1 > 0.0) || !(a.eps_x2 > 0.0))
        throw ValidationError("analysis tolerances eps_x1/eps_x2 must be positive");
    if (!(a.eta > 0.0)) throw ValidationError("analysis eta must be positive");
    if (a.band && !(*a.band > 0.0)) throw ValidationError("analysis band must be positive");
    if (a.window && (!(*a.window > 0.0) || *a.window > sc.sim.t_end))
        throw ValidationError("analysis window must be in (0, t_end]");
}

std::string dump_scenario(const Scenario& sc) {
    std::ostringstream out;
    out << "name = " << sc.name << "\n\n";
    out << "[plant]\n";
    out << "m = " << format_double(sc.plant.m) << "\n";
    out << "U = " << format_double(sc.plant.U) << "\n\n";

    out << "[surface]\n";
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, control::OptimalSurface>) {
                out << "type = optimal\n";
                out << "alpha = " << format_double(s.alpha) << "\n";
            } else if constexpr (std::is_same_v<T, control::ClassicSurface>) {
                out << "type = classic\n";
                out << "beta = " << format_double(s.beta) << "\n";
                out << "q_over_p = " << format_double(s.q_over_p) << "\n";
            } else {
                out << "type = nonsingular\n";
                out << "beta = " << format_double(s.beta) << "\n";
                out << "p_over_q = " << format_double(s.p_over_q) << "\n";
            }
        },
        sc.surface);

    out << "\n[perturbation]\n";
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, dynamics::NoPerturbation>) {
                out << "type = none\n";
            } else if constexpr (std::is_same_v<T, dynamics::FrictionPerturbation>) {
                out << "type = friction\n";
                out << "Fc = " << format_double(p.Fc) << "\n";
                out << "sigma0 = " << format_double(p.sigma0) << "\n";
            } else if constexpr (std::is_same_v<T, dynamics::HarmonicPerturbation>) {
                out << "type = harmonic\n";
                out << "A = " << format_double(p.A) << "\n";
                out << "omega = " << format_double(p.omega) << "\n";
                out << "phase = " << format_double(p.phase) << "\n";
            } else {
                out << "type = random_binary\n";
                out << "A = " << format_double(p.A) << "\n";
                out << "dwell = " << format_double(p.dwell) << "\n";
                out << "seed = " << p.seed << "\n";
            }
        },
        sc.perturbation);

    out << "\n[sim]\n";
    out << "dt = " << format_double(sc.sim.dt) << "\n";
    out << "t_end = " << format_double(sc.sim.t_end) << "\n";
    out << "x1 = " << format_double(sc.sim.initial.x1) << "\n";
    out << "x2 = " << format_double(sc.sim.initial.x2) << "\n";
    out << "seed = " << sc.sim.seed << "\n";

    out << "\n[analysis]\n";
    out << "band = " << (sc.analysis.band ? format_double(*sc.analysis.band) : "auto") << "\n";
    out << "eps_x1 = " << format_double(sc.analysis.eps_x1) << "\n";
    out << "eps_x2 = " << format_double(sc.analysis.eps_x2) << "\n";
    out << "eta = " << format_double(sc.analysis.eta) << "\n";
    out << "window = " << (sc.analysis.window ? format_double(*sc.analysis.window) : "auto")
        << "\n";
    return out.str();
}

RunResult run_scenario(const Scenario& sc) {
    validate(sc);
    RunResult result;
    result.trajectory = dynamics::simulate(sc.plant, sc.surface, sc.perturbation, sc.sim);

    std::optional<double> alpha;
    if (const auto* opt = std::get_if<control::OptimalSurface>(&sc.surface)) alpha = opt->alpha;
    result.report = analysis::analyze(result.trajectory, sc.analysis, alpha);
    return result;
}

namespace {

void write_atomic(const fs::path& file, const std::string& content) {
    const fs::path tmp = file.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::ios_base::failure("cannot open for writing: " + tmp.string());
        out << content;
        if (!out) throw std::ios_base::failure("write failed: " + tmp.string());
    }
    fs::rename(tmp, file);
}

}  // namespace

void write_trajectory_csv(const dynamics::Trajectory& traj, const fs::path& file) {
    std::string out = "t,x1,x2,s,u,xi\n";
    for (const auto& smp : traj.samples) {
        out += format_double(smp.t);
        out += ',';
        out += format_double(smp.state.x1);
        out += ',';
        out += format_double(smp.state.x2);
        out += ',';
        out += format_double(smp.s);
        out += ',';
        out += format_double(smp.u);
        out += ',';
        out += format_double(smp.xi);
        out += '\n';
    }
    write_atomic(file, out);
}

namespace {

ScenarioSummary run_one(const Scenario& sc, const fs::path& out_dir) {
    ScenarioSummary row;
    row.name = sc.name;
    try {
        const RunResult result = run_scenario(sc);
        write_trajectory_csv(result.trajectory, out_dir / (sc.name + ".trajectory.csv"));
        write_atomic(out_dir / (sc.name + ".report.json"), analysis::report_json(result.report));
        row.mode = analysis::to_string(result.report.mode);
        row.settling_time = result.report.settling_time;
        row.crossings = result.report.crossings.size();
        row.residual_amplitude = result.report.residual_amplitude;
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    return row;
}

}  // namespace

std::vector<ScenarioSummary> run_batch(const std::vector<Scenario>& scenarios,
                                       const fs::path& out_dir) {
    std::set<std::string> names;
    for (const auto& sc : scenarios) {
        if (sc.name.empty()) throw ValidationError("scenario name must be nonempty");
        if (!names.insert(sc.name).second)
            throw ValidationError("duplicate scenario name in batch: " + sc.name);
    }

    fs::create_directories(out_dir);
    std::vector<ScenarioSummary> summary;
    summary.reserve(scenarios.size());
    for (const auto& sc : scenarios) summary.push_back(run_one(sc, out_dir));
    return summary;
}

Scenario substitute(const Scenario& base, const std::string& parameter, double value) {
    Scenario sc = base;
    bool ok = true;

    if (parameter == "plant.m") sc.plant.m = value;
    else if (parameter == "plant.U") sc.plant.U = value;
    else if (parameter == "sim.dt") sc.sim.dt = value;
    else if (parameter == "sim.t_end") sc.sim.t_end = value;
    else if (parameter == "sim.x1") sc.sim.initial.x1 = value;
    else if (parameter == "sim.x2") sc.sim.initial.x2 = value;
    else if (parameter == "surface.alpha") {
        auto* s = std::get_if<control::OptimalSurface>(&sc.surface);
        if ((ok = s != nullptr)) s->alpha = value;
    } else if (parameter == "surface.beta") {
        if (auto* cs = std::get_if<control::ClassicSurface>(&sc.surface)) cs->beta = value;
        else if (auto* ns = std::get_if<control::NonSingularSurface>(&sc.surface)) ns->beta = value;
        else ok = false;
    } else if (parameter == "surface.q_over_p") {
        auto* s = std::get_if<control::ClassicSurface>(&sc.surface);
        if ((ok = s != nullptr)) s->q_over_p = value;
    } else if (parameter == "surface.p_over_q") {
        auto* s = std::get_if<control::NonSingularSurface>(&sc.surface);
        if ((ok = s != nullptr)) s->p_over_q = value;
    } else if (parameter == "perturbation.Fc") {
        auto* p = std::get_if<dynamics::FrictionPerturbation>(&sc.perturbation);
        if ((ok = p != nullptr)) p->Fc = value;
    } else if (parameter == "perturbation.sigma0") {
        auto* p = std::get_if<dynamics::FrictionPerturbation>(&sc.perturbation);
        if ((ok = p != nullptr)) p->sigma0 = value;
    } else if (parameter == "perturbation.A") {
        if (auto* h = std::get_if<dynamics::HarmonicPerturbation>(&sc.perturbation)) h->A = value;
        else if (auto* r = std::get_if<dynamics::RandomBinaryPerturbation>(&sc.perturbation)) r->A = value;
        else ok = false;
    } else if (parameter == "perturbation.omega") {
        auto* p = std::get_if<dynamics::HarmonicPerturbation>(&sc.perturbation);
        if ((ok = p != nullptr)) p->omega = value;
    } else if (parameter == "perturbation.phase") {
        auto* p = std::get_if<dynamics::HarmonicPerturbation>(&sc.perturbation);
        if ((ok = p != nullptr)) p->phase = value;
    } else if (parameter == "perturbation.dwell") {
        auto* p = std::get_if<dynamics::RandomBinaryPerturbation>(&sc.perturbation);
        if ((ok = p != nullptr)) p->dwell = value;
    } else {
        throw ValidationError("unknown sweep parameter path: " + parameter);
    }
    if (!ok)
        throw ValidationError("sweep parameter '" + parameter +
                              "' does not apply to the configured scenario");

    const auto dot = parameter.rfind('.');
    sc.name = base.name + "_" + parameter.substr(dot + 1) + "_" + format_double(value);
    validate(sc);
    return sc;
}

std::vector<SweepRow> run_sweep(const SweepSpec& sweep, const fs::path& out_dir) {
    if (sweep.values.empty()) throw ValidationError("sweep values must be nonempty");

    std::vector<Scenario> scenarios;
    scenarios.reserve(sweep.values.size());
    for (const double v : sweep.values) scenarios.push_back(substitute(sweep.base, sweep.parameter, v));

    const auto summary = run_batch(scenarios, out_dir);

    std::vector<SweepRow> rows;
    std::string csv = "value,mode,settling_time,crossings,residual\n";
    for (std::size_t i = 0; i < summary.size(); ++i) {
        if (summary[i].error)
            throw std::runtime_error("sweep run '" + summary[i].name + "' failed: " + *summary[i].error);
        SweepRow row{sweep.values[i], summary[i].mode, summary[i].settling_time,
                     summary[i].crossings, summary[i].residual_amplitude};
        rows.push_back(row);
        csv += format_double(row.value) + "," + row.mode + "," +
               (row.settling_time ? format_double(*row.settling_time) : "") + "," +
               std::to_string(row.crossings) + "," + format_double(row.residual_amplitude) + "\n";
    }
    write_atomic(out_dir / (sweep.base.name + ".sweep.csv"), csv);
    return rows;
}

}  // namespace otsm::scenario
