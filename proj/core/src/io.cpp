#include "corners/io.hpp"

#include "corners/error.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

namespace corners {

namespace {

std::string strip_comment(std::string line) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = line.find_last_not_of(" \t\r");
    return line.substr(first, last - first + 1);
}

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
    for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size())
        s.replace(pos, from.size(), to);
    return s;
}

PolytopePtr resolve_polytope(const std::string& name) {
    auto names = catalog_names();
    if (std::find(names.begin(), names.end(), name) != names.end()) return catalog_load(name);
    if (std::filesystem::exists(name)) return load_lattice_file(name);
    throw FormatError("unknown polytope '" + name + "'");
}

}  // namespace

CornerComplex Tessellation::build() const {
    return CornerComplex::build(std::vector<PolytopePtr>(chambers, polytope), gluings);
}

Tessellation read_tessellation(std::istream& in) {
    static const std::regex header(
        R"(dim\s+(\d+)\s*;\s*polytope\s+(\S+)\s*;\s*chambers\s+(\d+))");
    static const std::regex glue(R"(glue\s+(\d+)\.(\d+)\s+(\d+)\.(\d+)\s*:\s*(.*))");
    static const std::regex pair(R"(^\s*(\d+)\s*->\s*(\d+)\s*$)");
    Tessellation t;
    bool have_header = false;
    int dim = 0;
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = strip_comment(replace_all(raw, "\xE2\x86\x92", "->"));
        if (line.empty()) continue;
        std::smatch m;
        if (!have_header) {
            if (!std::regex_match(line, m, header))
                throw FormatError("expected 'dim n; polytope name; chambers count'", lineno);
            dim = std::stoi(m[1]);
            t.polytope = resolve_polytope(m[2]);
            t.chambers = std::stoi(m[3]);
            if (t.polytope->dim() != dim)
                throw FormatError("polytope dimension disagrees with header", lineno);
            if (t.chambers < 1) throw FormatError("chamber count must be positive", lineno);
            have_header = true;
            continue;
        }
        if (!std::regex_match(line, m, glue)) throw FormatError("expected a glue line", lineno);
        Slot a{std::stoi(m[1]), std::stoi(m[2])};
        Slot b{std::stoi(m[3]), std::stoi(m[4])};
        for (Slot s : {a, b})
            if (s.chamber >= t.chambers || s.facet >= t.polytope->count(dim - 1))
                throw FormatError("slot out of range", lineno);
        FaceIso iso{t.polytope, {dim - 1, a.facet}, t.polytope, {dim - 1, b.facet}, {}};
        std::stringstream pairs(m[5].str());
        std::string item;
        while (std::getline(pairs, item, ',')) {
            std::smatch pm;
            if (!std::regex_match(item, pm, pair)) throw FormatError("bad vertex pair '" + item + "'", lineno);
            iso.vertex_map.emplace_back(std::stoi(pm[1]), std::stoi(pm[2]));
        }
        std::sort(iso.vertex_map.begin(), iso.vertex_map.end());
        if (!iso.is_valid())
            throw FormatError("vertex bijection is not a facet isomorphism", lineno);
        t.gluings.push_back({a, b, std::move(iso)});
    }
    if (!have_header) throw FormatError("empty tessellation file");
    return t;
}

Tessellation read_tessellation_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path);
    return read_tessellation(in);
}

void write_tessellation(std::ostream& out, const CornerComplex& w) {
    const auto& ch = w.chambers();
    for (const auto& c : ch)
        if (c.get() != ch[0].get()) throw Error("tessellation format needs a single chamber type");
    out << "dim " << w.dim() << "; polytope " << ch[0]->name() << "; chambers " << ch.size() << "\n";
    for (const Gluing& g : w.gluings()) {
        out << "glue " << g.a.chamber << "." << g.a.facet << " " << g.b.chamber << "." << g.b.facet << " :";
        for (std::size_t i = 0; i < g.iso.vertex_map.size(); ++i)
            out << (i ? ", " : " ") << g.iso.vertex_map[i].first << "->" << g.iso.vertex_map[i].second;
        out << "\n";
    }
}

ColouringFile read_colouring(std::istream& in) {
    std::string raw, kind;
    long long size = 0;
    int lineno = 0;
    std::vector<std::pair<long long, std::string>> rows;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = strip_comment(raw);
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string a, b, extra;
        if (!(ls >> a >> b) || (ls >> extra)) throw FormatError("expected two fields", lineno);
        if (kind.empty()) {
            if (a != "colouring" && a != "generalised") throw FormatError("expected 'colouring k' or 'generalised m'", lineno);
            kind = a;
            try {
                size = std::stoll(b);
            } catch (const std::exception&) {
                throw FormatError("bad size '" + b + "'", lineno);
            }
            if (size < 1 || (kind == "generalised" && size > 63)) throw FormatError("size out of range", lineno);
            continue;
        }
        long long facet = -1;
        try {
            std::size_t pos = 0;
            facet = std::stoll(a, &pos);
            if (pos != a.size()) facet = -1;
        } catch (const std::exception&) {
        }
        if (facet < 0 || facet != static_cast<long long>(rows.size()))
            throw FormatError("facets must be listed in order from 0", lineno);
        rows.emplace_back(lineno, b);
    }
    if (kind.empty()) throw FormatError("empty colouring file");

    ColouringFile out;
    if (kind == "colouring") {
        Colouring c{static_cast<int>(size), {}};
        for (const auto& [ln, v] : rows) {
            std::size_t pos = 0;
            int colour = 0;
            try {
                colour = std::stoi(v, &pos);
            } catch (const std::exception&) {
                pos = 0;
            }
            if (pos != v.size() || colour < 1 || colour > c.k) throw FormatError("colour must be in 1.." + std::to_string(c.k), static_cast<int>(ln));
            c.colour.push_back(colour);
        }
        out.generalised = lift(c);
        out.plain = std::move(c);
    } else {
        out.generalised.m = static_cast<int>(size);
        for (const auto& [ln, v] : rows) {
            if (static_cast<long long>(v.size()) != size || v.find_first_not_of("01") != std::string::npos)
                throw FormatError("bit vector must have " + std::to_string(size) + " binary digits", static_cast<int>(ln));
            std::uint64_t bits = 0;
            for (std::size_t i = 0; i < v.size(); ++i)
                if (v[i] == '1') bits |= std::uint64_t{1} << i;
            if (bits == 0) throw FormatError("zero vector", static_cast<int>(ln));
            out.generalised.image.push_back(bits);
        }
    }
    return out;
}

ColouringFile read_colouring_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path);
    return read_colouring(in);
}

void write_colouring(std::ostream& out, const Colouring& c) {
    out << "colouring " << c.k << "\n";
    for (std::size_t f = 0; f < c.colour.size(); ++f) out << f << " " << c.colour[f] << "\n";
}

void write_colouring(std::ostream& out, const GeneralisedColouring& rho) {
    out << "generalised " << rho.m << "\n";
    for (std::size_t f = 0; f < rho.image.size(); ++f) {
        out << f << " ";
        for (int i = 0; i < rho.m; ++i) out << ((rho.image[f] >> i) & 1);
        out << "\n";
    }
}

}  // namespace corners
