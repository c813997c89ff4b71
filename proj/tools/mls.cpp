// Command-line front end: gen, reduce, color, schedule, solve, verify,
// feasible, audit, facts and render. Documents travel as JSON bundles on
// stdin/stdout. Exit codes: 0 success, 1 negative verdict, 2 usage or input
// error.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <sstream>

#include "mls/audit.hpp"
#include "mls/drawing.hpp"
#include "mls/exact_solver.hpp"
#include "mls/io.hpp"
#include "mls/power_control.hpp"
#include "mls/reduction.hpp"
#include "mls/render.hpp"

namespace {

using mls::json;

struct Flags {
    std::string in;
    std::string out;
    double alpha = 3.0;
    double noise = 0.0;
    double beta = 1.0;
    int max_rounds = 3;
    std::uint64_t budget = 50'000'000;
    bool compact = false;
    int scale = 0;
    std::string svg;
    bool detail = false;
    // Set when the flag was given on the command line.
    bool alpha_set = false;
    bool noise_set = false;
    bool beta_set = false;
};

std::string read_input(const Flags& f) {
    if (f.in.empty() || f.in == "-") {
        return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    }
    std::ifstream is(f.in);
    if (!is) throw mls::InputError("cannot open " + f.in);
    return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream os(path);
    if (!os) throw mls::InputError("cannot write " + path);
    os << text;
}

void write_json(const Flags& f, const json& j) { write_text(f.out, j.dump(2) + "\n"); }

mls::Bundle read_bundle(const Flags& f) { return mls::bundle_from_json(mls::parse_json(read_input(f))); }

mls::ModelParams model_with_flags(mls::ModelParams m, const Flags& f) {
    if (f.alpha_set) m.alpha = f.alpha;
    if (f.noise_set) m.noise = f.noise;
    if (f.beta_set) m.beta = f.beta;
    m.validate();
    return m;
}

json model_flags(const mls::ModelParams& m) { return {{"alpha", m.alpha}, {"noise", m.noise}, {"beta", m.beta}}; }

mls::Instance& need_instance(mls::Bundle& b, const Flags& f) {
    if (!b.instance) throw mls::InputError("input has no instance");
    b.instance->set_model(model_with_flags(b.instance->model(), f));
    return *b.instance;
}

int size_parameter(const mls::Bundle& b, const Flags& f) {
    if (f.scale > 0) return f.scale;
    if (b.params.contains("reduce") && b.params["reduce"].contains("n")) return b.params["reduce"]["n"].get<int>();
    throw mls::InputError("size parameter unknown: pass --scale or a reduced bundle");
}

// ---------------------------------------------------------------------------

int cmd_gen(const Flags& f, const std::string& name) {
    mls::Bundle b;
    b.drawing = mls::builtin_drawing(name);
    b.params["gen"] = {{"name", name}};
    write_json(f, mls::to_json(b));
    return 0;
}

int cmd_reduce(const Flags& f) {
    auto b = read_bundle(f);
    if (!b.drawing) throw mls::InputError("input has no drawing");
    mls::ReduceParams rp;
    if (f.scale > 0) rp.n = f.scale;
    rp.compact = f.compact;
    rp.model = model_with_flags({}, f);
    auto red = mls::reduce(*b.drawing, rp);
    b.instance = std::move(red.instance);
    b.gadget_map = std::move(red.map);
    b.schedule.reset();
    json p = model_flags(rp.model);
    p["n"] = red.n;
    p["compact"] = f.compact;
    if (f.scale > 0) p["scale"] = f.scale;
    b.params["reduce"] = p;
    b.reports["layout"] = mls::to_json(red.plan);
    if (!f.svg.empty()) write_text(f.svg, mls::render_svg(*b.instance, &*b.gadget_map));
    write_json(f, mls::to_json(b));
    return 0;
}

int cmd_color(const Flags& f) {
    auto b = read_bundle(f);
    if (!b.drawing) throw mls::InputError("input has no drawing");
    auto c = mls::three_color(*b.drawing);
    b.reports["color"] = {{"colorable", c.has_value()}};
    if (!c) {
        std::cerr << "no 3-coloring\n";
        write_json(f, mls::to_json(b));
        return 1;
    }
    b.coloring = *c;
    write_json(f, mls::to_json(b));
    return 0;
}

int cmd_schedule(const Flags& f, bool minimal_powers) {
    auto b = read_bundle(f);
    auto& inst = need_instance(b, f);
    if (!b.gadget_map) throw mls::InputError("input has no gadget map");
    if (!b.coloring) {
        if (!b.drawing) throw mls::InputError("input has neither a coloring nor a drawing");
        auto c = mls::three_color(*b.drawing);
        if (!c) {
            std::cerr << "no 3-coloring\n";
            b.reports["color"] = {{"colorable", false}};
            write_json(f, mls::to_json(b));
            return 1;
        }
        b.coloring = *c;
    }
    const auto policy = minimal_powers ? mls::PowerPolicy::minimal() : mls::PowerPolicy{};
    b.schedule = mls::schedule_from_coloring(inst, *b.gadget_map, *b.coloring, policy);
    json p = model_flags(inst.model());
    p["minimal_powers"] = minimal_powers;
    if (minimal_powers) {
        auto rep = mls::repair_powers(inst, *b.schedule);
        p["repaired_rounds"] = rep.repaired_rounds;
    }
    b.params["schedule"] = p;
    write_json(f, mls::to_json(b));
    return 0;
}

int cmd_solve(const Flags& f) {
    auto b = read_bundle(f);
    auto& inst = need_instance(b, f);
    mls::SearchOptions o;
    o.max_rounds = f.max_rounds;
    o.budget = f.budget;
    const auto res = mls::min_latency_exact(inst, o);
    if (res.schedule) b.schedule = *res.schedule;
    json p = model_flags(inst.model());
    p["max_rounds"] = f.max_rounds;
    p["budget"] = f.budget;
    b.params["solve"] = p;
    b.reports["solve"] = mls::to_json(res);
    write_json(f, mls::to_json(b));
    if (res.status != mls::SearchStatus::Found) {
        std::cerr << "no schedule within " << f.max_rounds << " rounds (" << mls::to_string(res.status) << ")\n";
        return 1;
    }
    return 0;
}

int cmd_verify(const Flags& f) {
    auto b = read_bundle(f);
    auto& inst = need_instance(b, f);
    if (!b.schedule) throw mls::InputError("input has no schedule");
    const auto rep = mls::verify_schedule(inst, *b.schedule);
    b.params["verify"] = model_flags(inst.model());
    b.reports["verify"] = mls::to_json(rep, f.detail);
    write_json(f, mls::to_json(b));
    std::cerr << (rep.success ? "valid" : "invalid") << " schedule, " << b.schedule->rounds.size()
              << " rounds, worst margin " << rep.worst_margin() << "\n";
    return rep.success ? 0 : 1;
}

int cmd_feasible(const Flags& f, int round, bool synthesize) {
    auto b = read_bundle(f);
    auto& inst = need_instance(b, f);
    std::vector<mls::Link> links;
    if (round >= 0) {
        if (!b.schedule || static_cast<std::size_t>(round) >= b.schedule->rounds.size()) {
            throw mls::InputError("round " + std::to_string(round) + " not present in the schedule");
        }
        links = mls::links_of(mls::round_config(inst, b.schedule->rounds[static_cast<std::size_t>(round)]));
    } else {
        for (const auto& m : inst.messages()) {
            links.push_back({m.sender, m.receiver, inst.position(m.sender), inst.position(m.receiver)});
        }
    }
    const auto res = mls::round_feasible(links, inst.model());
    json rep = mls::to_json(res);
    if (synthesize && res.feasible) {
        const auto sol = mls::synthesize_powers(links, inst.model());
        rep["powers"] = sol.powers;
        rep["achieved_margin"] = mls::number(sol.achieved_margin);
    }
    json p = model_flags(inst.model());
    p["round"] = round;
    b.params["feasible"] = p;
    b.reports["feasible"] = rep;
    write_json(f, mls::to_json(b));
    std::cerr << mls::to_string(res.status) << " (rho " << res.spectrum.rho << ")\n";
    return res.feasible ? 0 : 1;
}

void print_audit_table(const mls::AuditReport& r, std::ostream& os) {
    os << "audit: alpha " << r.alpha << ", n " << r.n << ", " << r.node_count << " nodes\n";
    os << "  far-field bound " << r.global_far_bound << " vs 1/n = " << r.global_far_threshold
       << (r.global_far_ok() ? "  ok" : "  EXCEEDED") << "\n";
    os << "  transmissions " << r.entries.size() << ": certified " << r.certified << ", failed " << r.failed
       << ", unresolved " << r.unresolved << "\n";
    os << "  worst margin " << r.worst_margin() << "\n";
    os << "  certificate " << (r.valid() ? "valid" : "INVALID") << "\n";
}

int cmd_audit(const Flags& f, double radius, const std::string& csv) {
    auto b = read_bundle(f);
    auto& inst = need_instance(b, f);
    if (!b.schedule) throw mls::InputError("input has no schedule");
    mls::AuditOptions o;
    o.n = size_parameter(b, f);
    if (radius > 0.0) o.radius = radius;
    const auto rep = mls::audit_instance(inst, *b.schedule, o);
    if (!csv.empty()) {
        std::ostringstream os;
        os << std::setprecision(17) << "round,index,msg,copy,receiver,signal,near,far_bound,margin_lo,status\n";
        for (const auto& e : rep.entries) {
            os << e.round << ',' << e.index << ',' << e.msg << ',' << e.copy << ',' << e.receiver << ',' << e.signal
               << ',' << e.near.hi << ',' << e.far_bound << ',' << e.margin.lo << ',' << mls::to_string(e.status)
               << '\n';
        }
        write_text(csv, os.str());
    }
    json p = model_flags(inst.model());
    p["n"] = o.n;
    if (radius > 0.0) p["radius"] = radius;
    b.params["audit"] = p;
    b.reports["audit"] = mls::to_json(rep, f.detail);
    write_json(f, mls::to_json(b));
    print_audit_table(rep, std::cerr);
    return rep.valid() && rep.global_far_ok() ? 0 : 1;
}

int cmd_facts(const Flags& f, bool as_json) {
    const auto facts = mls::fact_bounds(f.alpha);
    const double es = mls::edge_signal(f.alpha);
    if (as_json) {
        write_json(f, {{"alpha", f.alpha},
                       {"tail_bound_5", mls::tail_bound(5, f.alpha)},
                       {"edge_signal", es},
                       {"facts", mls::to_json(facts)}});
    } else {
        std::ostringstream os;
        os << "alpha = " << f.alpha << "\n";
        os << std::left << std::setw(10) << "bound" << std::setw(12) << "value" << std::setw(12) << "closed"
           << std::setw(12) << "series" << std::setw(10) << "printed" << "holds\n";
        os << std::fixed << std::setprecision(6);
        for (const auto& x : facts) {
            os << std::setw(10) << x.name << std::setw(12) << x.value << std::setw(12) << x.closed_value
               << std::setw(12) << x.series_value << std::setw(10) << std::setprecision(4) << x.printed
               << std::setprecision(6) << (x.holds() ? "yes" : "NO") << "\n";
        }
        os << "edge signal 1.1^-alpha = " << es << "\n";
        os << "tail_bound(5) = " << mls::tail_bound(5, f.alpha) << "\n";
        write_text(f.out, os.str());
    }
    bool ok = es > facts.back().value;
    for (const auto& x : facts) ok = ok && x.holds();
    return ok ? 0 : 1;
}

int cmd_render(const Flags& f) {
    auto b = read_bundle(f);
    if (!b.instance) throw mls::InputError("input has no instance");
    const auto svg = mls::render_svg(*b.instance, b.gadget_map ? &*b.gadget_map : nullptr);
    write_text(!f.svg.empty() ? f.svg : f.out, svg);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Minimum-latency SINR scheduling: reduction, verification and exact search"};
    app.require_subcommand(1);
    Flags f;

    auto add_io = [&](CLI::App* c) {
        c->add_option("--in", f.in, "Input document (default stdin)");
        c->add_option("--out", f.out, "Output document (default stdout)");
    };
    auto add_model = [&](CLI::App* c) {
        c->add_option("--alpha", f.alpha, "Path-loss exponent")->default_val(3.0);
        c->add_option("--noise", f.noise, "Ambient noise")->default_val(0.0);
        c->add_option("--beta", f.beta, "SINR threshold")->default_val(1.0);
    };

    std::string gen_name;
    auto* gen = app.add_subcommand("gen", "Emit a built-in grid drawing");
    gen->add_option("name", gen_name, "k2, path, c3 (odd-cycle), c4 (square), c6 (even-cycle), k4")->required();
    gen->add_option("--out", f.out, "Output document (default stdout)");

    auto* reduce = app.add_subcommand("reduce", "Build the scheduling instance of a grid drawing");
    add_io(reduce);
    add_model(reduce);
    reduce->add_flag("--compact", f.compact, "Small spacing; certified only by verification and audit");
    reduce->add_option("--scale", f.scale, "Size parameter n (default: smallest admissible)")->check(CLI::PositiveNumber);
    reduce->add_option("--svg", f.svg, "Also write an SVG rendering");

    auto* color = app.add_subcommand("color", "Find a proper 3-coloring of the drawing");
    add_io(color);

    bool minimal_powers = false;
    auto* schedule = app.add_subcommand("schedule", "Three-round schedule from a coloring");
    add_io(schedule);
    add_model(schedule);
    schedule->add_flag("--minimal-powers", minimal_powers, "Powers 1 and 2 only, repaired by iterative power control");

    auto* solve = app.add_subcommand("solve", "Exact minimum-latency search");
    add_io(solve);
    add_model(solve);
    solve->add_option("--max-rounds", f.max_rounds, "Largest latency tried")->check(CLI::PositiveNumber);
    solve->add_option("--budget", f.budget, "Search node budget");

    auto* verify = app.add_subcommand("verify", "Certified SINR verification of a schedule");
    add_io(verify);
    add_model(verify);
    verify->add_flag("--detail", f.detail, "Report every transmission");

    int round = -1;
    bool synthesize = false;
    auto* feasible = app.add_subcommand("feasible", "Single-round power feasibility");
    add_io(feasible);
    add_model(feasible);
    feasible->add_option("--round", round, "Schedule round to test (default: all messages at once)");
    feasible->add_flag("--synthesize", synthesize, "Attach witness powers");

    double radius = 0.0;
    std::string csv;
    auto* audit = app.add_subcommand("audit", "Near/far interference certificate");
    add_io(audit);
    add_model(audit);
    audit->add_option("--scale", f.scale, "Size parameter n (default: from the reduce stage)");
    audit->add_option("--radius", radius, "Initial near-field radius (default n^2)");
    audit->add_option("--csv", csv, "Per-receiver margins as CSV");
    audit->add_flag("--detail", f.detail, "Report every receiver");

    bool facts_json = false;
    auto* facts = app.add_subcommand("facts", "Interference bound table");
    facts->add_option("--alpha", f.alpha, "Path-loss exponent")->default_val(3.0);
    facts->add_option("--out", f.out, "Output file (default stdout)");
    facts->add_flag("--json", facts_json, "JSON instead of a table");

    auto* render = app.add_subcommand("render", "SVG of an instance");
    add_io(render);
    render->add_option("--svg", f.svg, "SVG output path (default --out or stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    for (auto* c : app.get_subcommands()) {
        auto given = [&](const char* name) {
            const auto* o = c->get_option_no_throw(name);
            return o != nullptr && o->count() > 0;
        };
        f.alpha_set = given("--alpha");
        f.noise_set = given("--noise");
        f.beta_set = given("--beta");
    }

    try {
        if (*gen) return cmd_gen(f, gen_name);
        if (*reduce) return cmd_reduce(f);
        if (*color) return cmd_color(f);
        if (*schedule) return cmd_schedule(f, minimal_powers);
        if (*solve) return cmd_solve(f);
        if (*verify) return cmd_verify(f);
        if (*feasible) return cmd_feasible(f, round, synthesize);
        if (*audit) return cmd_audit(f, radius, csv);
        if (*facts) return cmd_facts(f, facts_json);
        if (*render) return cmd_render(f);
    } catch (const mls::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
