#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace corners {

/// A slope p/q on the boundary torus: coprime, with q > 0 or (p, q) = (1, 0).
struct Slope {
    long long p = 1;
    long long q = 0;

    /// Reduces (p, q) and fixes the sign. Throws Error for (0, 0).
    static Slope make(long long p, long long q);
    /// "p/q"; "1/0" and "-1/0" both give infinity.
    static Slope parse(const std::string& text);
    std::string str() const;
    bool is_infinity() const { return q == 0; }
    bool operator==(const Slope&) const = default;
};

/// Position on the circle Q u {inf}: negative, zero or positive.
int compare_slopes(const Slope& a, const Slope& b);

/// Element of Z + T: the free coordinate phi and torsion coordinates.
struct GroupElement {
    long long phi = 0;
    std::vector<long long> t;
    auto operator<=>(const GroupElement&) const = default;
};

/// Z + Z/t_1 + ... + Z/t_r.
struct AbGroup {
    std::vector<long long> torsion;  // each factor >= 2

    /// Reduces torsion coordinates into [0, t_i). Throws Error on a length mismatch.
    GroupElement reduce(GroupElement e) const;
    GroupElement add(const GroupElement& a, const GroupElement& b) const;
    GroupElement sub(const GroupElement& a, const GroupElement& b) const;
    GroupElement scale(const GroupElement& a, long long k) const;
    /// Order of the torsion part (1 for the zero torsion vector).
    long long torsion_order(const GroupElement& a) const;
    long long torsion_size() const;
    /// Every element with the given phi, torsion coordinates in lexicographic order.
    std::vector<GroupElement> with_phi(long long phi) const;

    /// "Z", "Z+Z/2+Z/8".
    static AbGroup parse(const std::string& text);
    std::string str() const;
    /// "5" or "5[1,0]".
    GroupElement parse_element(const std::string& text) const;
    std::string str(const GroupElement& e) const;
    bool operator==(const AbGroup&) const = default;
};

/// Turaev-simple torsion: coefficient 0 exactly on `zeros` and on phi < 0, 1 elsewhere.
struct TorsionData {
    AbGroup group;
    std::vector<GroupElement> zeros;  // sorted, unique
    long long horizon = 0;

    /// Throws Error unless every zero has 0 <= phi <= horizon and the zero element has coefficient 1.
    void validate() const;
    bool in_support(const GroupElement& h) const;
};

/// The inclusion map H_1(boundary) = Z mu + Z lambda -> H_1(Y).
struct IotaMap {
    AbGroup group;
    GroupElement mu;
    GroupElement lambda;

    GroupElement apply(long long p, long long q) const;
    /// Throws Error unless the kernel has rank one.
    void validate() const;
};

/// Primitive direction of the kernel of iota, as a slope.
Slope longitude(const IotaMap& iota);

/// Positive differences x - y with x off the support, y in it and phi(x) > phi(y),
/// restricted to the image of iota. Sorted.
std::vector<GroupElement> d_tau_positive(const TorsionData& tau, const IotaMap& iota);

/// Lattice points p mu + q lambda mapping to e: base + Z * step for each base.
struct PreimageCosets {
    std::vector<std::pair<long long, long long>> bases;
    std::pair<long long, long long> step{0, 0};  // kernel generator
};
PreimageCosets preimage(const IotaMap& iota, const GroupElement& e);

/// Closed arc of slopes from `a` to `b` through `witness`, or every slope but the longitude.
struct SlopeInterval {
    bool complement_of_longitude = false;
    Slope a;
    Slope b;
    Slope witness;
    Slope longitude;

    std::string str() const;
};

bool slope_in_interval(const Slope& s, const SlopeInterval& interval);

struct CandidateIntervals {
    Slope longitude;
    std::vector<GroupElement> d;  // D^tau_{>0}
    /// One interval, or two sharing the target when the target is itself a preimage slope.
    std::vector<SlopeInterval> intervals;
    bool target_in_preimage = false;
};

/// Throws Error when target is the longitude.
CandidateIntervals candidate_intervals(const TorsionData& tau, const IotaMap& iota, const Slope& target);

// ------------------------------------------------------------------ certificates

/// A node of a drilling-filling tree. QHS nodes are filled from their parent QHT
/// (the root has none); QHT nodes are drilled from their parent QHS.
struct CertNode {
    enum class Kind { qhs, qht };
    enum class Line { none, volume, census_fill };  // how a QHS appears in a log

    Kind kind = Kind::qhs;
    std::string label;  // "M12", "T12"
    int parent = -1;
    std::vector<int> children;
    bool implicit = false;  // ancestor missing from a log fragment

    // QHS
    std::optional<Slope> slope;  // filling slope from the parent QHT
    std::optional<char> branch;  // 'A' or 'B' under a double interval
    std::optional<std::string> census;
    std::optional<int> claimed_value;  // as logged: 1 or -1
    std::string volume;
    std::string homology;
    Line line = Line::none;
    std::string filling_text;  // "(h, k)" exactly as logged

    // QHT
    std::optional<TorsionData> torsion;
    std::optional<IotaMap> iota;
    bool double_interval = false;
};

struct Certificate {
    std::vector<CertNode> nodes;
    int root = -1;
    bool log_header = false;  // the log opened with its initialisation line
    std::optional<bool> logged_result;

    int find(const std::string& label) const;  // -1 if absent
    /// Throws Error on cycles, dangling links, or QHS/QHT alternation violations.
    void validate() const;
};

/// Log label ("22111A1") to node labels: QHS "M" + label, QHT "T" + label.
std::string qhs_label(const std::string& log_label);
std::string qht_label(const std::string& log_label);

/// Transcript format of the search script. Fragments get implicit ancestors.
/// Throws FormatError with the line number on anything unrecognised, and Error("no root")
/// on empty input.
Certificate parse_log(std::istream& in);
void print_log(std::ostream& out, const Certificate& c);

/// Certificate file format (docs/formats.md).
Certificate read_certificate(std::istream& in);
void write_certificate(std::ostream& out, const Certificate& c);

/// name -> is an L-space. Lines "name value" with value 1 (true), 0 or -1 (false).
struct Census {
    std::map<std::string, bool> values;

    /// Throws FormatError on malformed lines and on a name given both values.
    static Census read(std::istream& in);
    std::optional<bool> lookup(const std::string& name) const;
};

enum class Verdict { verified, refuted, unproven };
std::string verdict_name(Verdict v, CertNode::Kind kind);

struct NodeVerdict {
    Verdict verdict = Verdict::unproven;
    std::string reason;
    std::optional<CandidateIntervals> intervals;  // QHT nodes with payloads
};

struct VerificationReport {
    std::vector<NodeVerdict> nodes;  // indexed like the certificate
    Verdict root = Verdict::unproven;
    /// Logged census values that disagree with the census table.
    std::vector<std::string> census_mismatches;
};

VerificationReport verify_certificate(const Certificate& c, const Census& census);
/// One line per node, indented by depth: "M12: VERIFIED-L (reason)".
void write_verdict_tree(std::ostream& out, const Certificate& c, const VerificationReport& r);

}  // namespace corners
