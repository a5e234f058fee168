#include "corners/lspace.hpp"

#include "corners/error.hpp"

#include <algorithm>
#include <functional>
#include <istream>
#include <numeric>
#include <ostream>
#include <regex>
#include <set>
#include <sstream>

namespace corners {

namespace {

using i128 = __int128;
using Vec = std::pair<long long, long long>;  // p mu + q lambda

i128 det(Vec a, Vec b) { return i128{a.first} * b.second - i128{a.second} * b.first; }

long long floor_div(i128 a, i128 b) {
    i128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return static_cast<long long>(q);
}

// x a + y b = gcd(a, b) >= 0
long long ext_gcd(long long a, long long b, long long& x, long long& y) {
    long long old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        const long long q = old_r / r;
        std::tie(old_r, r) = std::pair{r, old_r - q * r};
        std::tie(old_s, s) = std::pair{s, old_s - q * s};
        std::tie(old_t, t) = std::pair{t, old_t - q * t};
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    x = old_s;
    y = old_t;
    return old_r;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

long long parse_int(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(s, &pos);
        if (pos == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw Error("bad integer in " + what + ": '" + s + "'");
}

struct Kernel {
    Vec direction;  // primitive
    Vec step;  // generator of the kernel: order * direction
    long long order;  // torsion order of iota(direction)
    long long g;  // gcd of the phi coordinates
};

Kernel kernel_of(const IotaMap& iota) {
    iota.validate();
    const long long m1 = iota.mu.phi, m2 = iota.lambda.phi;
    const long long g = std::gcd(m1, m2);
    const Vec w{m2 / g, -m1 / g};
    const long long o = iota.group.torsion_order(iota.apply(w.first, w.second));
    return {w, {o * w.first, o * w.second}, o, g};
}

Vec as_vec(const Slope& s) { return {s.p, s.q}; }

}  // namespace

// ------------------------------------------------------------------ slopes

Slope Slope::make(long long p, long long q) {
    if (p == 0 && q == 0) throw Error("slope 0/0 is not defined");
    const long long g = std::gcd(p, q);
    p /= g;
    q /= g;
    if (q < 0 || (q == 0 && p < 0)) {
        p = -p;
        q = -q;
    }
    return {p, q};
}

Slope Slope::parse(const std::string& text) {
    const auto slash = text.find('/');
    if (slash == std::string::npos) throw Error("slope must be written p/q: '" + text + "'");
    return make(parse_int(trim(text.substr(0, slash)), "slope"), parse_int(trim(text.substr(slash + 1)), "slope"));
}

std::string Slope::str() const { return std::to_string(p) + "/" + std::to_string(q); }

int compare_slopes(const Slope& a, const Slope& b) {
    if (a.q == 0 || b.q == 0) return (a.q == 0) - (b.q == 0);
    const i128 l = i128{a.p} * b.q, r = i128{b.p} * a.q;
    return (l > r) - (l < r);
}

// ------------------------------------------------------------------ groups

GroupElement AbGroup::reduce(GroupElement e) const {
    if (e.t.size() != torsion.size()) throw Error("group element has the wrong number of torsion coordinates");
    for (std::size_t i = 0; i < torsion.size(); ++i) e.t[i] = ((e.t[i] % torsion[i]) + torsion[i]) % torsion[i];
    return e;
}

GroupElement AbGroup::add(const GroupElement& a, const GroupElement& b) const {
    GroupElement r = a;
    r.phi += b.phi;
    for (std::size_t i = 0; i < r.t.size(); ++i) r.t[i] += b.t.at(i);
    return reduce(r);
}

GroupElement AbGroup::sub(const GroupElement& a, const GroupElement& b) const { return add(a, scale(b, -1)); }

GroupElement AbGroup::scale(const GroupElement& a, long long k) const {
    GroupElement r = a;
    r.phi *= k;
    for (std::size_t i = 0; i < r.t.size(); ++i) r.t[i] = (r.t[i] % torsion.at(i)) * (k % torsion[i]);
    return reduce(r);
}

long long AbGroup::torsion_order(const GroupElement& a) const {
    long long o = 1;
    for (std::size_t i = 0; i < torsion.size(); ++i) o = std::lcm(o, torsion[i] / std::gcd(torsion[i], a.t.at(i)));
    return o;
}

long long AbGroup::torsion_size() const {
    long long n = 1;
    for (long long t : torsion) n *= t;
    return n;
}

std::vector<GroupElement> AbGroup::with_phi(long long phi) const {
    std::vector<GroupElement> out;
    GroupElement e{phi, std::vector<long long>(torsion.size(), 0)};
    while (true) {
        out.push_back(e);
        int i = static_cast<int>(torsion.size()) - 1;
        while (i >= 0 && ++e.t[i] == torsion[i]) e.t[i--] = 0;
        if (i < 0) break;
    }
    return out;
}

AbGroup AbGroup::parse(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty() || s[0] != 'Z' || (s.size() > 1 && s[1] != '+')) throw Error("group must start with Z: '" + text + "'");
    AbGroup g;
    std::size_t at = 1;
    while (at < s.size()) {
        if (s.compare(at, 3, "+Z/") != 0) throw Error("bad group summand in '" + text + "'");
        at += 3;
        const auto next = s.find('+', at);
        const long long t = parse_int(s.substr(at, next - at), "group");
        if (t < 2) throw Error("torsion factors must be at least 2: '" + text + "'");
        g.torsion.push_back(t);
        at = next == std::string::npos ? s.size() : next;
    }
    return g;
}

std::string AbGroup::str() const {
    std::string s = "Z";
    for (long long t : torsion) s += "+Z/" + std::to_string(t);
    return s;
}

GroupElement AbGroup::parse_element(const std::string& text) const {
    const std::string s = trim(text);
    const auto br = s.find('[');
    GroupElement e;
    e.phi = parse_int(s.substr(0, br), "group element");
    if (br != std::string::npos) {
        if (s.back() != ']') throw Error("bad group element '" + text + "'");
        std::stringstream in(s.substr(br + 1, s.size() - br - 2));
        std::string part;
        while (std::getline(in, part, ',')) e.t.push_back(parse_int(trim(part), "group element"));
    }
    if (e.t.size() != torsion.size())
        throw Error("group element '" + text + "' needs " + std::to_string(torsion.size()) + " torsion coordinates");
    return reduce(e);
}

std::string AbGroup::str(const GroupElement& e) const {
    std::string s = std::to_string(e.phi);
    if (!e.t.empty()) {
        s += "[";
        for (std::size_t i = 0; i < e.t.size(); ++i) s += (i ? "," : "") + std::to_string(e.t[i]);
        s += "]";
    }
    return s;
}

void TorsionData::validate() const {
    if (horizon < 0) throw Error("torsion horizon must be non-negative");
    if (!std::is_sorted(zeros.begin(), zeros.end()) || std::adjacent_find(zeros.begin(), zeros.end()) != zeros.end())
        throw Error("torsion zero set must be sorted and without repeats");
    const GroupElement zero{0, std::vector<long long>(group.torsion.size(), 0)};
    for (const auto& z : zeros) {
        if (group.reduce(z) != z) throw Error("torsion zero " + group.str(z) + " is not reduced");
        if (z.phi < 0 || z.phi > horizon)
            throw Error("torsion zero " + group.str(z) + " lies outside [0, horizon]");
        if (z == zero) throw Error("the torsion coefficient of 0 must be nonzero");
    }
}

bool TorsionData::in_support(const GroupElement& h) const {
    return h.phi >= 0 && !std::binary_search(zeros.begin(), zeros.end(), h);
}

GroupElement IotaMap::apply(long long p, long long q) const {
    return group.add(group.scale(mu, p), group.scale(lambda, q));
}

void IotaMap::validate() const {
    if (group.reduce(mu) != mu || group.reduce(lambda) != lambda) throw Error("iota images must be reduced group elements");
    if (mu.phi == 0 && lambda.phi == 0) throw Error("iota has a rank-two kernel: not a rational homology solid torus");
}

Slope longitude(const IotaMap& iota) {
    const Kernel k = kernel_of(iota);
    return Slope::make(k.direction.first, k.direction.second);
}

PreimageCosets preimage(const IotaMap& iota, const GroupElement& e) {
    const Kernel k = kernel_of(iota);
    PreimageCosets out;
    out.step = k.step;
    if (e.phi % k.g != 0) return out;
    long long x, y;
    ext_gcd(iota.mu.phi, iota.lambda.phi, x, y);
    const Vec v0{x * (e.phi / k.g), y * (e.phi / k.g)};
    const GroupElement target = iota.group.reduce(e);
    for (long long s = 0; s < k.order; ++s) {
        const Vec v{v0.first + s * k.direction.first, v0.second + s * k.direction.second};
        if (iota.apply(v.first, v.second) == target) out.bases.push_back(v);
    }
    return out;
}

std::vector<GroupElement> d_tau_positive(const TorsionData& tau, const IotaMap& iota) {
    tau.validate();
    iota.validate();
    if (!(tau.group == iota.group)) throw Error("torsion and iota live in different groups");
    std::set<GroupElement> out;
    for (const auto& x : tau.zeros) {
        if (x.phi <= 0) continue;
        for (long long yphi = 0; yphi < x.phi; ++yphi)
            for (const auto& y : tau.group.with_phi(yphi))
                if (tau.in_support(y)) out.insert(tau.group.sub(x, y));
    }
    std::vector<GroupElement> d;
    for (const auto& e : out)
        if (!preimage(iota, e).bases.empty()) d.push_back(e);
    return d;
}

// ------------------------------------------------------------------ intervals

namespace {

// Cyclic order on the slope circle: walking upward from x, y comes before z.
bool cyclic(const Slope& x, const Slope& y, const Slope& z) {
    const int xy = compare_slopes(x, y), yz = compare_slopes(y, z), zx = compare_slopes(z, x);
    return (xy < 0 && yz < 0) || (yz < 0 && zx < 0) || (zx < 0 && xy < 0);
}

}  // namespace

std::string SlopeInterval::str() const {
    if (complement_of_longitude) return "all slopes but " + longitude.str();
    return "[" + a.str() + ", " + b.str() + "] through " + witness.str();
}

bool slope_in_interval(const Slope& s, const SlopeInterval& in) {
    if (in.complement_of_longitude) return !(s == in.longitude);
    if (s == in.a || s == in.b) return true;
    if (in.a == in.b) return false;
    return cyclic(in.a, in.witness, in.b) ? cyclic(in.a, s, in.b) : cyclic(in.b, s, in.a);
}

CandidateIntervals candidate_intervals(const TorsionData& tau, const IotaMap& iota, const Slope& target) {
    CandidateIntervals out;
    const Kernel k = kernel_of(iota);
    out.longitude = Slope::make(k.direction.first, k.direction.second);
    if (target == out.longitude) throw Error("target slope " + target.str() + " is the homological longitude");
    out.d = d_tau_positive(tau, iota);
    if (out.d.empty()) {
        out.intervals.push_back({true, target, target, target, out.longitude});
        return out;
    }

    // Directions are flipped into the open half-plane left of the longitude, where
    // det(u, v) > 0 means u comes first when rotating away from the longitude.
    const Vec l = k.direction;
    auto normal = [&](Vec u) { return det(l, u) < 0 ? Vec{-u.first, -u.second} : u; };
    const Vec t = normal(as_vec(target));

    // Along a coset v0 + j K the direction rotates monotonically from the longitude
    // back to it, so the neighbours of t on that coset sit at floor/ceil of the
    // parameter where v0 + j K is parallel to t.
    std::optional<Vec> lower, upper;
    for (const auto& e : out.d) {
        const auto pre = preimage(iota, e);
        const Vec kv = pre.step;
        for (const Vec& v0 : pre.bases) {
            const i128 num = -det(v0, t), den = det(kv, t);
            const long long lo = floor_div(num, den);
            for (long long j = lo - 1; j <= lo + 2; ++j) {
                const Vec c = normal({v0.first + j * kv.first, v0.second + j * kv.second});
                const i128 side = det(c, t);
                if (side == 0) {
                    out.target_in_preimage = true;
                } else if (side > 0) {
                    if (!lower || det(*lower, c) > 0) lower = c;
                } else {
                    if (!upper || det(c, *upper) > 0) upper = c;
                }
            }
        }
    }
    if (!lower || !upper) throw Error("internal: candidate interval without both neighbours");
    const Slope a = Slope::make(lower->first, lower->second);
    const Slope b = Slope::make(upper->first, upper->second);
    if (!out.target_in_preimage) {
        out.intervals.push_back({false, a, b, target, out.longitude});
    } else {
        const Slope wa = Slope::make(lower->first + t.first, lower->second + t.second);
        const Slope wb = Slope::make(t.first + upper->first, t.second + upper->second);
        out.intervals.push_back({false, a, target, wa, out.longitude});
        out.intervals.push_back({false, target, b, wb, out.longitude});
    }
    return out;
}

// ------------------------------------------------------------------ certificates

std::string qhs_label(const std::string& log_label) { return "M" + log_label; }
std::string qht_label(const std::string& log_label) { return "T" + log_label; }

int Certificate::find(const std::string& label) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].label == label) return static_cast<int>(i);
    return -1;
}

void Certificate::validate() const {
    if (root < 0 || root >= static_cast<int>(nodes.size())) throw Error("certificate has no root");
    if (nodes[root].kind != CertNode::Kind::qhs || nodes[root].parent != -1)
        throw Error("certificate root must be a rational homology sphere without parent");
    std::set<std::string> labels;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto& n = nodes[i];
        if (!labels.insert(n.label).second) throw Error("duplicate node label " + n.label);
        if (static_cast<int>(i) != root && (n.parent < 0 || n.parent >= static_cast<int>(nodes.size())))
            throw Error("node " + n.label + " has no parent");
        for (int c : n.children) {
            if (c < 0 || c >= static_cast<int>(nodes.size()) || nodes[c].parent != static_cast<int>(i))
                throw Error("node " + n.label + " has an inconsistent child link");
            if (nodes[c].kind == n.kind) throw Error("node " + nodes[c].label + " does not alternate QHS and QHT");
        }
        if (n.kind == CertNode::Kind::qhs && static_cast<int>(i) != root && !n.slope && !n.implicit)
            throw Error("node " + n.label + " has no filling slope");
        if (n.kind == CertNode::Kind::qhs && n.slope && n.slope->is_infinity())
            throw Error("node " + n.label + " is the 1/0 filling, which gives back the parent");
    }
    // Every node reaches the root without revisiting.
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        int at = static_cast<int>(i);
        std::size_t steps = 0;
        while (at != root) {
            at = nodes[at].parent;
            if (at < 0 || ++steps > nodes.size()) throw Error("node " + nodes[i].label + " is not connected to the root");
        }
    }
}

namespace {

class LogBuilder {
public:
    Certificate c;

    int qhs(const std::string& log_label, bool create_implicit) {
        const int at = c.find(qhs_label(log_label));
        if (at >= 0 || !create_implicit) return at;
        CertNode n;
        n.kind = CertNode::Kind::qhs;
        n.label = qhs_label(log_label);
        n.implicit = true;
        if (log_label.empty()) return add(n, -1);
        auto [owner, branch] = split(log_label);
        n.branch = branch;
        return add(n, qht(owner));
    }

    int qht(const std::string& owner) {
        const int at = c.find(qht_label(owner));
        if (at >= 0) return at;
        CertNode n;
        n.kind = CertNode::Kind::qht;
        n.label = qht_label(owner);
        n.implicit = true;
        return add(n, qhs(owner, true));
    }

    int add(CertNode n, int parent) {
        n.parent = parent;
        c.nodes.push_back(std::move(n));
        const int id = static_cast<int>(c.nodes.size()) - 1;
        if (parent >= 0) c.nodes[parent].children.push_back(id);
        else c.root = id;
        return id;
    }

    // "22111A1" -> owner "22111", branch 'A'
    static std::pair<std::string, std::optional<char>> split(const std::string& label) {
        std::string parent = label.substr(0, label.size() - 1);
        std::optional<char> branch;
        if (!parent.empty() && (parent.back() == 'A' || parent.back() == 'B')) {
            branch = parent.back();
            parent.pop_back();
        }
        return {parent, branch};
    }
};

}  // namespace

Certificate parse_log(std::istream& in) {
    static const std::regex line_re(R"(^([0-9AB]*): (.*)$)");
    static const std::regex root_re(R"(^M has volume (\S+) and homology (.+)$)");
    static const std::regex drill_re(R"(^Computing Turaev torsion drilling\.\.\.$)");
    static const std::regex volume_re(R"(^T([0-9AB]*)(\((-?\d+), (-?\d+)\)) has volume (\S+) and homology (.+)$)");
    static const std::regex fill_re(
        R"(^The manifold T([0-9AB]*) filled with (\((-?\d+), (-?\d+)\)) is \[([^\]]+)\], its L-space value is (-?\d+)$)");
    static const std::regex known_re(
        R"(^T([0-9AB]*)(\((-?\d+), (-?\d+)\)) is (\S+), whose L-space value is known to be (-?\d+)$)");
    static const std::regex double_re(R"(^Double interval\.\.$)");

    LogBuilder b;
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = trim(raw);
        if (line.empty()) continue;
        if (line == "Inizializing..." || line == "Initializing...") {
            b.c.log_header = true;
            continue;
        }
        if (line == "True" || line == "False") {
            b.c.logged_result = line == "True";
            continue;
        }
        std::smatch m, body;
        if (!std::regex_match(line, m, line_re)) throw FormatError("unrecognised log line", lineno);
        const std::string label = m[1];
        const std::string rest = m[2];

        auto new_filling = [&](const std::string& owner_text, const std::smatch& mm) {
            if (label.empty()) throw FormatError("a filled manifold needs a nonempty label", lineno);
            if (b.c.find(qhs_label(label)) >= 0) throw FormatError("node " + label + " appears twice", lineno);
            auto [owner, branch] = LogBuilder::split(label);
            if (owner_text != owner)
                throw FormatError("node " + label + " is filled from T" + owner_text + ", expected T" + owner, lineno);
            CertNode n;
            n.kind = CertNode::Kind::qhs;
            n.label = qhs_label(label);
            n.branch = branch;
            n.filling_text = mm[2];
            try {
                n.slope = Slope::make(std::stoll(mm[3].str()), std::stoll(mm[4].str()));
            } catch (const Error& e) {
                throw FormatError(e.what(), lineno);
            }
            return b.add(n, b.qht(owner));
        };

        if (std::regex_match(rest, body, root_re)) {
            if (!label.empty()) throw FormatError("only the root line has an empty label", lineno);
            if (b.c.find(qhs_label("")) >= 0) throw FormatError("root appears twice", lineno);
            CertNode n;
            n.label = qhs_label("");
            n.volume = body[1];
            n.homology = body[2];
            n.line = CertNode::Line::volume;
            b.add(n, -1);
        } else if (std::regex_match(rest, body, drill_re)) {
            const int owner = b.qhs(label, true);
            const int t = b.qht(label);
            b.c.nodes[t].implicit = false;
            (void)owner;
        } else if (std::regex_match(rest, body, double_re)) {
            const int t = b.c.find(qht_label(label));
            if (t < 0) throw FormatError("double interval before the drilling of " + label, lineno);
            b.c.nodes[t].double_interval = true;
        } else if (std::regex_match(rest, body, volume_re)) {
            const int id = new_filling(body[1], body);
            b.c.nodes[id].volume = body[5];
            b.c.nodes[id].homology = body[6];
            b.c.nodes[id].line = CertNode::Line::volume;
        } else if (std::regex_match(rest, body, fill_re)) {
            const int id = new_filling(body[1], body);
            b.c.nodes[id].census = body[5];
            b.c.nodes[id].claimed_value = std::stoi(body[6].str());
            b.c.nodes[id].line = CertNode::Line::census_fill;
        } else if (std::regex_match(rest, body, known_re)) {
            const int id = b.c.find(qhs_label(label));
            if (id < 0 || b.c.nodes[id].line != CertNode::Line::volume)
                throw FormatError("census identification of " + label + " before its volume line", lineno);
            auto& n = b.c.nodes[id];
            if (n.filling_text != body[2].str()) throw FormatError("filling of " + label + " changed between lines", lineno);
            n.census = body[5];
            n.claimed_value = std::stoi(body[6].str());
        } else {
            throw FormatError("unrecognised log line", lineno);
        }
    }
    if (b.c.root < 0) throw Error("no root");
    b.c.validate();
    return b.c;
}

void print_log(std::ostream& out, const Certificate& c) {
    if (c.log_header) out << "Inizializing...\n";
    std::function<void(int)> visit = [&](int id) {
        const auto& n = c.nodes[id];
        const std::string label = n.label.substr(1);
        if (n.kind == CertNode::Kind::qhs) {
            if (!n.implicit) {
                const std::string owner = n.parent >= 0 ? c.nodes[n.parent].label : "";
                if (id == c.root) {
                    out << ": M has volume " << n.volume << " and homology " << n.homology << "\n";
                } else if (n.line == CertNode::Line::census_fill) {
                    out << label << ": The manifold " << owner << " filled with " << n.filling_text << " is [" << *n.census
                        << "], its L-space value is " << *n.claimed_value << "\n";
                } else {
                    out << label << ": " << owner << n.filling_text << " has volume " << n.volume << " and homology "
                        << n.homology << "\n";
                    if (n.census)
                        out << label << ": " << owner << n.filling_text << " is " << *n.census
                            << ", whose L-space value is known to be " << *n.claimed_value << "\n";
                }
            }
        } else if (!n.implicit) {
            out << label << ": Computing Turaev torsion drilling...\n";
            if (n.double_interval) out << label << ": Double interval..\n";
        }
        for (int ch : n.children) visit(ch);
    };
    visit(c.root);
    if (c.logged_result) out << "\n" << (*c.logged_result ? "True" : "False") << "\n";
}

// ------------------------------------------------------------------ certificate files

namespace {

std::map<std::string, std::string> key_values(std::istringstream& in, int lineno, std::vector<std::string>& flags) {
    std::map<std::string, std::string> kv;
    std::string tok;
    while (in >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) {
            flags.push_back(tok);
            continue;
        }
        if (!kv.emplace(tok.substr(0, eq), tok.substr(eq + 1)).second)
            throw FormatError("repeated key " + tok.substr(0, eq), lineno);
    }
    return kv;
}

std::string take(std::map<std::string, std::string>& kv, const std::string& key, int lineno) {
    auto it = kv.find(key);
    if (it == kv.end()) throw FormatError("missing " + key + "=", lineno);
    std::string v = it->second;
    kv.erase(it);
    return v;
}

}  // namespace

Certificate read_certificate(std::istream& in) {
    Certificate c;
    std::string raw;
    int lineno = 0;
    bool header = false;
    while (std::getline(in, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string kind, label;
        ls >> kind;
        if (!header) {
            std::string version;
            ls >> version;
            if (kind != "certificate" || version != "1") throw FormatError("expected 'certificate 1'", lineno);
            header = true;
            continue;
        }
        if (!(ls >> label)) throw FormatError("missing node label", lineno);
        if (c.find(label) >= 0) throw FormatError("duplicate node label " + label, lineno);
        std::vector<std::string> flags;
        auto kv = key_values(ls, lineno, flags);
        CertNode n;
        n.label = label;
        int parent = -1;
        try {
            if (kind == "qhs") {
                n.kind = CertNode::Kind::qhs;
                if (kv.count("from")) {
                    const std::string from = take(kv, "from", lineno);
                    parent = c.find(from);
                    if (parent < 0 || c.nodes[parent].kind != CertNode::Kind::qht)
                        throw FormatError("unknown QHT " + from, lineno);
                    n.slope = Slope::parse(take(kv, "slope", lineno));
                } else if (c.root >= 0) {
                    throw FormatError("second root " + label, lineno);
                }
                if (kv.count("branch")) {
                    const std::string br = take(kv, "branch", lineno);
                    if (br != "A" && br != "B") throw FormatError("branch must be A or B", lineno);
                    n.branch = br[0];
                }
                if (kv.count("census")) n.census = take(kv, "census", lineno);
                if (kv.count("value")) n.claimed_value = static_cast<int>(parse_int(take(kv, "value", lineno), "value"));
            } else if (kind == "qht") {
                n.kind = CertNode::Kind::qht;
                const std::string from = take(kv, "from", lineno);
                parent = c.find(from);
                if (parent < 0 || c.nodes[parent].kind != CertNode::Kind::qhs)
                    throw FormatError("unknown QHS " + from, lineno);
                const AbGroup g = AbGroup::parse(take(kv, "group", lineno));
                IotaMap iota{g, g.parse_element(take(kv, "mu", lineno)), g.parse_element(take(kv, "lambda", lineno))};
                TorsionData tau{g, {}, parse_int(take(kv, "horizon", lineno), "horizon")};
                std::stringstream zs(take(kv, "zeros", lineno));
                std::string z;
                while (std::getline(zs, z, ';'))
                    if (!trim(z).empty()) tau.zeros.push_back(g.parse_element(z));
                std::sort(tau.zeros.begin(), tau.zeros.end());
                tau.zeros.erase(std::unique(tau.zeros.begin(), tau.zeros.end()), tau.zeros.end());
                tau.validate();
                iota.validate();
                n.torsion = tau;
                n.iota = iota;
                for (const auto& f : flags)
                    if (f == "double") n.double_interval = true;
                    else throw FormatError("unknown flag " + f, lineno);
                flags.clear();
            } else {
                throw FormatError("unknown record '" + kind + "'", lineno);
            }
        } catch (const FormatError&) {
            throw;
        } catch (const Error& e) {
            throw FormatError(e.what(), lineno);
        }
        if (!kv.empty()) throw FormatError("unknown key " + kv.begin()->first, lineno);
        if (!flags.empty()) throw FormatError("unknown flag " + flags.front(), lineno);
        n.parent = parent;
        c.nodes.push_back(std::move(n));
        const int id = static_cast<int>(c.nodes.size()) - 1;
        if (parent >= 0) c.nodes[parent].children.push_back(id);
        else c.root = id;
    }
    if (!header) throw FormatError("empty certificate");
    if (c.root < 0) throw Error("no root");
    c.validate();
    return c;
}

void write_certificate(std::ostream& out, const Certificate& c) {
    out << "certificate 1\n";
    std::function<void(int)> visit = [&](int id) {
        const auto& n = c.nodes[id];
        if (n.kind == CertNode::Kind::qhs) {
            out << "qhs " << n.label;
            if (n.parent >= 0) out << " from=" << c.nodes[n.parent].label << " slope=" << n.slope->str();
            if (n.branch) out << " branch=" << *n.branch;
            if (n.census) out << " census=" << *n.census;
            if (n.claimed_value) out << " value=" << *n.claimed_value;
        } else {
            if (!n.torsion || !n.iota) throw Error("node " + n.label + " has no torsion payload to write");
            const AbGroup& g = n.iota->group;
            out << "qht " << n.label << " from=" << c.nodes[n.parent].label << " group=" << g.str()
                << " mu=" << g.str(n.iota->mu) << " lambda=" << g.str(n.iota->lambda)
                << " horizon=" << n.torsion->horizon << " zeros=";
            for (std::size_t i = 0; i < n.torsion->zeros.size(); ++i) out << (i ? ";" : "") << g.str(n.torsion->zeros[i]);
            if (n.double_interval) out << " double";
        }
        out << "\n";
        for (int ch : n.children) visit(ch);
    };
    visit(c.root);
}

Census Census::read(std::istream& in) {
    Census c;
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string name, value, extra;
        if (!(ls >> name >> value) || (ls >> extra)) throw FormatError("census lines are 'name value'", lineno);
        if (lineno == 1 && name == "name" && value == "value") continue;
        bool v;
        if (value == "1") v = true;
        else if (value == "0" || value == "-1") v = false;
        else throw FormatError("census value must be 1, 0 or -1", lineno);
        auto [it, fresh] = c.values.emplace(name, v);
        if (!fresh && it->second != v) throw FormatError("census contradiction for " + name, lineno);
    }
    return c;
}

std::optional<bool> Census::lookup(const std::string& name) const {
    auto it = values.find(name);
    if (it == values.end()) return std::nullopt;
    return it->second;
}

// ------------------------------------------------------------------ verification

std::string verdict_name(Verdict v, CertNode::Kind kind) {
    if (kind == CertNode::Kind::qht) return v == Verdict::verified ? "FLOER-SIMPLE" : "UNPROVEN";
    switch (v) {
        case Verdict::verified: return "VERIFIED-L";
        case Verdict::refuted: return "REFUTED";
        default: return "UNPROVEN";
    }
}

namespace {

class Verifier {
public:
    Verifier(const Certificate& c, const Census& census) : c_(c), census_(census) { r_.nodes.resize(c.nodes.size()); }

    VerificationReport run() {
        c_.validate();
        r_.root = qhs(c_.root);
        for (const auto& n : c_.nodes) {
            if (!n.census || !n.claimed_value) continue;
            auto v = census_.lookup(*n.census);
            if (v && *v != (*n.claimed_value == 1))
                r_.census_mismatches.push_back(n.label + " logs " + *n.census + " as " + std::to_string(*n.claimed_value) +
                                               " but the census says " + (*v ? "1" : "0"));
        }
        return r_;
    }

private:
    Verdict qhs(int id) {
        const auto& n = c_.nodes[id];
        auto& out = r_.nodes[id];
        std::string reasons;
        if (n.census) {
            if (auto v = census_.lookup(*n.census)) {
                for (int ch : n.children) qht(ch);
                out.verdict = *v ? Verdict::verified : Verdict::refuted;
                out.reason = "census: " + *n.census + (*v ? " is an L-space" : " is not an L-space");
                return out.verdict;
            }
            reasons = *n.census + " not in census";
        }
        for (int ch : n.children) {
            if (qht(ch) == Verdict::verified) {
                out.verdict = Verdict::verified;
                out.reason = "1/0 filling of Floer simple " + c_.nodes[ch].label;
                return out.verdict;
            }
            reasons += (reasons.empty() ? "" : "; ") + c_.nodes[ch].label + ": " + r_.nodes[ch].reason;
        }
        out.verdict = Verdict::unproven;
        out.reason = reasons.empty() ? "no census entry and no drilling" : reasons;
        return out.verdict;
    }

    Verdict qht(int id) {
        const auto& n = c_.nodes[id];
        auto& out = r_.nodes[id];
        for (int ch : n.children) qhs(ch);
        if (!n.torsion || !n.iota) {
            out.reason = "no torsion data";
            return out.verdict = Verdict::unproven;
        }
        const Slope target = Slope::make(1, 0);
        if (longitude(*n.iota) == target) {
            out.reason = "target 1/0 is the homological longitude";
            return out.verdict = Verdict::unproven;
        }
        out.intervals = candidate_intervals(*n.torsion, *n.iota, target);
        const auto& ci = *out.intervals;
        if (n.double_interval != (ci.intervals.size() == 2)) {
            out.reason = "double-interval marker disagrees with the torsion data";
            return out.verdict = Verdict::unproven;
        }
        std::string failure;
        for (const auto& interval : ci.intervals) {
            std::vector<Slope> verified;
            std::string refuted, unproven;
            for (int ch : n.children) {
                const auto& child = c_.nodes[ch];
                if (!slope_in_interval(*child.slope, interval)) continue;
                const Verdict v = r_.nodes[ch].verdict;
                if (v == Verdict::verified) {
                    if (std::find(verified.begin(), verified.end(), *child.slope) == verified.end())
                        verified.push_back(*child.slope);
                } else if (v == Verdict::refuted && refuted.empty()) {
                    refuted = child.label;
                } else if (v == Verdict::unproven && unproven.empty()) {
                    unproven = child.label + ": " + r_.nodes[ch].reason;
                }
            }
            if (refuted.empty() && verified.size() >= 2) {
                out.reason = interval.str() + " holds L-space fillings " + verified[0].str() + " and " + verified[1].str();
                return out.verdict = Verdict::verified;
            }
            std::string why;
            if (!refuted.empty()) {
                why = "census refutes " + refuted + " inside " + interval.str();
            } else {
                for (int ch : n.children) {
                    const auto& child = c_.nodes[ch];
                    if (r_.nodes[ch].verdict == Verdict::verified &&
                        std::none_of(ci.intervals.begin(), ci.intervals.end(),
                                     [&](const SlopeInterval& in) { return slope_in_interval(*child.slope, in); })) {
                        why = "slope " + child.slope->str() + " of " + child.label + " not in interval " + interval.str();
                        break;
                    }
                }
                if (why.empty()) {
                    why = "Floer simplicity not established: " + std::to_string(verified.size()) +
                          " L-space filling(s) in " + interval.str();
                    if (!unproven.empty()) why += "; " + unproven;
                }
            }
            failure += (failure.empty() ? "" : " | ") + why;
        }
        out.reason = failure;
        return out.verdict = Verdict::unproven;
    }

    const Certificate& c_;
    const Census& census_;
    VerificationReport r_;
};

}  // namespace

VerificationReport verify_certificate(const Certificate& c, const Census& census) { return Verifier(c, census).run(); }

void write_verdict_tree(std::ostream& out, const Certificate& c, const VerificationReport& r) {
    out << "root: " << verdict_name(r.root, CertNode::Kind::qhs) << "\n";
    std::function<void(int, int)> visit = [&](int id, int depth) {
        const auto& n = c.nodes[id];
        out << std::string(2 * depth, ' ') << n.label;
        if (n.slope) out << " [" << n.slope->str() << "]";
        out << ": " << verdict_name(r.nodes[id].verdict, n.kind);
        if (!r.nodes[id].reason.empty()) out << " (" << r.nodes[id].reason << ")";
        out << "\n";
        for (int ch : n.children) visit(ch, depth + 1);
    };
    visit(c.root, 0);
    for (const auto& m : r.census_mismatches) out << "census mismatch: " << m << "\n";
}

}  // namespace corners
