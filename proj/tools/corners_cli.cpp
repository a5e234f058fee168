// Command-line front end: one subcommand per pipeline stage.

#include "corners/colouring.hpp"
#include "corners/error.hpp"
#include "corners/homology.hpp"
#include "corners/io.hpp"
#include "corners/lspace.hpp"
#include "corners/quotient.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace corners;

namespace {

// Key/value report printed as "key: value" lines, or as one JSON object with --json.
class Report {
public:
    explicit Report(bool as_json) : json_(as_json) {}

    template <typename T>
    void set(const std::string& key, const T& value) {
        data_[key] = value;
    }
    void text(const std::string& block) { text_ += block; }
    json& raw() { return data_; }

    void print(std::ostream& out) const {
        if (json_) {
            out << data_.dump(2) << "\n";
            return;
        }
        for (const auto& [k, v] : data_.items()) out << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
        out << text_;
    }

private:
    bool json_;
    json data_ = json::object();
    std::string text_;
};

class Timer {
public:
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path);
    return in;
}

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write " + path.string());
    return out;
}

json strata_counts(const CornerComplex& w) {
    json a = json::array();
    for (int d = 0; d <= w.dim(); ++d) a.push_back(w.strata(d).size());
    return a;
}

void describe_complex(Report& r, const CornerComplex& w) {
    r.set("dim", w.dim());
    r.set("chambers", w.chambers().size());
    r.set("strata", strata_counts(w));
    r.set("facets", w.facets().size());
    r.set("corners", w.corners().size());
    r.set("closed", w.closed());
    r.set("all_embedded", w.all_embedded());
    json bad = json::array();
    for (const auto& f : w.facets())
        if (!f.embedded) bad.push_back(f.id);
    r.set("non_embedded_facets", bad);
}

json colouring_json(const Colouring& c) {
    return json{{"k", c.k}, {"colour", c.colour}};
}

struct Common {
    bool as_json = false;
    std::string out;
};

int cmd_catalog(const Common& opt, const std::string& name) {
    Report r(opt.as_json);
    if (name.empty()) {
        json list = json::array();
        for (const auto& n : catalog_names()) {
            const auto p = catalog_load(n);
            list.push_back(json{{"name", n}, {"dim", p->dim()}, {"fvector", p->fvector()}});
            r.text(n + " dim " + std::to_string(p->dim()) + "\n");
        }
        if (opt.as_json) r.set("polytopes", list);
    } else {
        const auto p = catalog_load(name);
        r.set("name", p->name());
        r.set("dim", p->dim());
        r.set("fvector", p->fvector());
        r.set("facets", p->count(p->dim() - 1));
    }
    r.print(std::cout);
    return 0;
}

int cmd_build(const Common& opt, const std::string& tess) {
    const auto w = read_tessellation_file(tess).build();
    Report r(opt.as_json);
    describe_complex(r, w);
    r.print(std::cout);
    return 0;
}

int cmd_thicken(const Common& opt, const std::string& tess, const std::string& host, bool do_mirror) {
    const auto m = read_tessellation_file(tess).build();
    if (!m.closed()) throw Error("thicken needs a closed tessellation; " + tess + " has boundary");
    auto th = thicken(m, catalog_load(host));
    Report r(opt.as_json);
    describe_complex(r, th.complex);
    const auto& mf = th.complex.facets()[th.m_facet];
    r.set("m_facet", th.m_facet);
    r.set("m_facet_isolated", mf.isolated);
    r.set("m_facet_embedded", mf.embedded);
    if (m.chambers().front()->name() == "dodecahedron" && host == "120cell")
        r.set("facet_count_prediction", facet_count_prediction(static_cast<long long>(m.chambers().size())));
    if (!opt.out.empty()) {
        auto out = open_out(fs::path(opt.out) / "thickened.tess");
        write_tessellation(out, th.complex);
    }
    if (do_mirror) {
        if (!mf.isolated) throw Error("facet " + std::to_string(th.m_facet) + " is not isolated; cannot mirror");
        auto mr = mirror(th.complex, th.m_facet);
        r.set("mirrored_facets", mr.complex.facets().size());
        if (!opt.out.empty()) {
            auto out = open_out(fs::path(opt.out) / "mirrored.tess");
            write_tessellation(out, mr.complex);
        }
        if (mr.complex.all_embedded()) r.set("mirrored_components", adjacency_graph(mr.complex).components);
    }
    r.print(std::cout);
    // Colouring needs every facet embedded; name the first offender.
    if (!th.complex.all_embedded()) adjacency_graph(th.complex);
    return 0;
}

struct ColourOptions {
    int colours = 0;
    long long budget_ms = 0;
    bool symmetric = false;
    int mirror_facet = -1;
    int reduce = 0;
    bool separation = false;
};

int cmd_colour(const Common& opt, const std::string& tess, const ColourOptions& co) {
    if (co.colours < 1) throw Error("--colours must be positive");
    if (co.budget_ms < 0) throw Error("--budget-ms must be non-negative");
    const auto input = read_tessellation_file(tess).build();
    std::optional<MirrorResult> mr;
    if (co.symmetric) {
        if (co.mirror_facet < 0) throw Error("--symmetric needs --mirror-facet");
        mr = mirror(input, co.mirror_facet);
    }
    const CornerComplex& w = mr ? mr->complex : input;
    const auto g = adjacency_graph(w);
    Report r(opt.as_json);
    r.set("facets", g.size());
    r.set("components", g.components);
    Timer t;
    const auto res = find_colouring(g, co.colours, std::chrono::milliseconds(co.budget_ms));
    r.set("status", res.status == SearchStatus::found ? "found" : res.status == SearchStatus::none ? "none" : "unknown");
    r.set("nodes", res.nodes);
    r.set("search_ms", t.ms());
    if (!res.certificate.empty()) r.set("certificate", res.certificate);
    if (res.status != SearchStatus::found) {
        r.print(std::cout);
        throw Error(res.status == SearchStatus::none ? "no " + std::to_string(co.colours) + "-colouring exists"
                                                     : "colouring budget exhausted");
    }
    Colouring c = *res.colouring;
    if (mr) {
        c = symmetrize(g, c, mr->involution, mr->side);
        r.set("symmetric_colours", c.k);
    }
    r.set("colouring", colouring_json(c));
    if (co.separation) {
        if (!mr) throw Error("--separation needs --symmetric");
        const auto sep = separation_check(*mr, c);
        r.set("separation",
              json{{"ok", sep.ok()}, {"components_after_removal", sep.components_after_removal},
                   {"separating_copies", sep.separating_copies}, {"expected_copies", sep.expected_copies}});
    }
    if (!opt.out.empty()) {
        auto out = open_out(fs::path(opt.out) / "colouring.txt");
        write_colouring(out, c);
        if (mr) {
            auto tout = open_out(fs::path(opt.out) / "mirrored.tess");
            write_tessellation(tout, mr->complex);
        }
        if (co.reduce > 0) {
            auto rout = open_out(fs::path(opt.out) / "reduced.txt");
            write_colouring(rout, reduce_colouring(c, co.reduce));
        }
    }
    r.print(std::cout);
    return 0;
}

int cmd_orbit(const Common& opt, const std::string& tess, const std::string& colouring, bool explicit_copies) {
    const auto w = read_tessellation_file(tess).build();
    const auto file = read_colouring_file(colouring);
    const auto& rho = file.generalised;
    const auto v = validate_generalised(rho, w);
    if (!v.ok) throw Error("invalid colouring: " + v.violations.front());
    Timer t;
    const auto q = build_quotient(w, rho);
    Report r(opt.as_json);
    r.set("m", rho.m);
    json cells = json::array();
    for (int d = 0; d <= q.dim; ++d) cells.push_back(q.cells(d));
    r.set("cells", cells);
    r.set("euler_characteristic", q.euler_characteristic());
    r.set("weighted_euler", weighted_euler(w, rho));
    r.set("components", q.components);
    r.set("orientable", q.orientable);
    r.set("colouring_orientable", is_orientable(rho));
    if (q.chi_120_identity) r.set("chi_120_identity", *q.chi_120_identity);
    r.set("build_ms", t.ms());
    if (!opt.out.empty()) {
        auto out = open_out(fs::path(opt.out) / "quotient.dump");
        write_quotient_dump(out, q);
        if (explicit_copies) {
            auto tout = open_out(fs::path(opt.out) / "quotient.tess");
            write_tessellation(tout, quotient_tessellation(w, rho));
        }
    }
    r.print(std::cout);
    return 0;
}

int cmd_homology(const Common& opt, const std::string& dump, const std::string& field, bool fast, int threads) {
    if (threads < 1) throw Error("--threads must be positive");
    auto in = open_in(dump);
    const auto cc = read_chain_complex(in);
    Report r(opt.as_json);
    r.set("cells", cc.cells);
    r.set("euler_characteristic", cc.euler_characteristic());
    RankOptions ro;
    ro.threads = threads;
    std::vector<Field> fields;
    if (field == "gf2" || field == "both") fields.push_back(Field::gf2);
    if (field == "rational" || field == "both") fields.push_back(Field::rational);
    for (Field f : fields) {
        Timer t;
        const auto b = betti(cc, f, fast && f == Field::rational, ro);
        const std::string key = field_name(f);
        r.set("betti_" + key, b.b);
        const std::vector<long long> ranks(b.ranks.begin() + 1, b.ranks.end());
        r.set("ranks_" + key, ranks);
        r.set("ms_" + key, t.ms());
        if (b.fast_path) r.set("fast_path_" + key, true);
    }
    r.print(std::cout);
    return 0;
}

int cmd_certify(const Common& opt, const std::string& cert_path, const std::string& census_path) {
    auto in = open_in(cert_path);
    const auto cert = read_certificate(in);
    Census census;
    if (!census_path.empty()) {
        auto cin = open_in(census_path);
        census = Census::read(cin);
    }
    const auto report = verify_certificate(cert, census);
    if (opt.as_json) {
        json nodes = json::array();
        for (std::size_t i = 0; i < cert.nodes.size(); ++i) {
            const auto& n = cert.nodes[i];
            json j{{"label", n.label},
                   {"verdict", verdict_name(report.nodes[i].verdict, n.kind)},
                   {"reason", report.nodes[i].reason}};
            if (n.slope) j["slope"] = n.slope->str();
            if (n.parent >= 0) j["parent"] = cert.nodes[n.parent].label;
            if (report.nodes[i].intervals) {
                json iv = json::array();
                for (const auto& x : report.nodes[i].intervals->intervals) iv.push_back(x.str());
                j["intervals"] = iv;
                j["longitude"] = report.nodes[i].intervals->longitude.str();
            }
            nodes.push_back(j);
        }
        json out{{"root", verdict_name(report.root, CertNode::Kind::qhs)},
                 {"nodes", nodes},
                 {"census_mismatches", report.census_mismatches}};
        std::cout << out.dump(2) << "\n";
    } else {
        write_verdict_tree(std::cout, cert, report);
    }
    return 0;
}

int cmd_parse_log(const Common& opt, const std::string& log_path, const std::string& census_path) {
    auto in = open_in(log_path);
    const auto cert = parse_log(in);
    Report r(opt.as_json);
    int qhs = 0, qht = 0, implicit = 0;
    json leaves = json::array(), doubles = json::array();
    for (const auto& n : cert.nodes) {
        if (n.implicit) {
            ++implicit;
            continue;
        }
        (n.kind == CertNode::Kind::qhs ? qhs : qht)++;
        if (n.census) leaves.push_back(json{{"node", n.label}, {"census", *n.census}, {"value", *n.claimed_value}});
        if (n.double_interval) doubles.push_back(n.label);
    }
    r.set("nodes", qhs + qht);
    r.set("qhs", qhs);
    r.set("qht", qht);
    r.set("implicit_ancestors", implicit);
    r.set("census_leaves", leaves);
    r.set("double_intervals", doubles);
    if (cert.logged_result) r.set("logged_result", *cert.logged_result);
    if (!census_path.empty()) {
        auto cin = open_in(census_path);
        const auto census = Census::read(cin);
        json mismatches = json::array();
        for (const auto& n : cert.nodes)
            if (n.census && n.claimed_value)
                if (auto v = census.lookup(*n.census); v && *v != (*n.claimed_value == 1)) mismatches.push_back(n.label);
        r.set("census_mismatches", mismatches);
    }
    if (!opt.out.empty()) {
        auto out = open_out(opt.out);
        print_log(out, cert);
    }
    r.print(std::cout);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Right-angled tessellations, small covers and L-space certificates"};
    app.require_subcommand(1);
    Common common;
    app.add_flag("--json", common.as_json, "Print the report as JSON");

    std::string name, tess, host, colouring, dump, field = "both", cert, census, log;
    bool do_mirror = false, fast = false, explicit_copies = false;
    int threads = 1;
    ColourOptions co;

    auto* catalog = app.add_subcommand("catalog", "List catalog polytopes or describe one");
    catalog->add_option("name", name, "Catalog name");

    auto* build = app.add_subcommand("build", "Build a tessellation and report its strata and facets");
    build->add_option("tessellation", tess)->required()->check(CLI::ExistingFile);

    auto* thick = app.add_subcommand("thicken", "Thicken a closed tessellation into a host polytope");
    thick->add_option("tessellation", tess)->required()->check(CLI::ExistingFile);
    thick->add_option("--host", host, "Host polytope from the catalog")->required();
    thick->add_flag("--mirror", do_mirror, "Also double along the thickened facet");
    thick->add_option("--out", common.out, "Directory for thickened.tess and mirrored.tess");

    auto* colour = app.add_subcommand("colour", "Find a proper colouring of the facet graph");
    colour->add_option("tessellation", tess)->required()->check(CLI::ExistingFile);
    colour->add_option("--colours,-k", co.colours, "Number of colours")->required();
    colour->add_option("--budget-ms", co.budget_ms, "Search budget in milliseconds; 0 is unlimited");
    colour->add_flag("--symmetric", co.symmetric, "Mirror along --mirror-facet and symmetrize");
    colour->add_option("--mirror-facet", co.mirror_facet, "Isolated facet to mirror along");
    colour->add_flag("--separation", co.separation, "Check that the mirrored facet separates the quotient");
    colour->add_option("--reduce", co.reduce, "Also write the reduced colouring for dimension n");
    colour->add_option("--out", common.out, "Output directory");

    auto* orbit = app.add_subcommand("orbit", "Build the small-cover quotient of a coloured tessellation");
    orbit->add_option("tessellation", tess)->required()->check(CLI::ExistingFile);
    orbit->add_option("colouring", colouring)->required()->check(CLI::ExistingFile);
    orbit->add_flag("--explicit", explicit_copies, "Also write the quotient as an explicit tessellation");
    orbit->add_option("--out", common.out, "Output directory for quotient.dump");

    auto* hom = app.add_subcommand("homology", "Betti numbers of a chain-complex dump");
    hom->add_option("dump", dump)->required()->check(CLI::ExistingFile);
    hom->add_option("--field", field, "gf2, rational or both")->check(CLI::IsMember({"gf2", "rational", "both"}));
    hom->add_flag("--fast", fast, "Use duality for closed orientable manifolds (rational field)");
    hom->add_option("--threads", threads, "Worker threads for dense elimination");

    auto* certify = app.add_subcommand("certify", "Verify an L-space certificate");
    certify->add_option("certificate", cert)->required()->check(CLI::ExistingFile);
    certify->add_option("--census", census, "Census table: name value");

    auto* plog = app.add_subcommand("parse-log", "Read a search transcript into its drilling-filling tree");
    plog->add_option("log", log)->required()->check(CLI::ExistingFile);
    plog->add_option("--census", census, "Census table to check logged values against");
    plog->add_option("--out", common.out, "Write the transcript back out, normalised");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*catalog) return cmd_catalog(common, name);
        if (*build) return cmd_build(common, tess);
        if (*thick) return cmd_thicken(common, tess, host, do_mirror);
        if (*colour) return cmd_colour(common, tess, co);
        if (*orbit) return cmd_orbit(common, tess, colouring, explicit_copies);
        if (*hom) return cmd_homology(common, dump, field, fast, threads);
        if (*certify) return cmd_certify(common, cert, census);
        if (*plog) return cmd_parse_log(common, log, census);
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
