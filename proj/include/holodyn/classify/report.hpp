#pragma once

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace holodyn {

enum class Verdict { Yes, No, Unknown };

inline std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Yes: return "Yes";
        case Verdict::No: return "No";
        case Verdict::Unknown: return "Unknown";
    }
    return "Unknown";
}

enum class Property { Supercyclic, Hypercyclic, Mixing, WeakMixing, Chaotic, FrequentlyHypercyclic, SatisfiesFHC };

inline constexpr std::array<Property, 7> kProperties = {
    Property::Supercyclic, Property::Hypercyclic,           Property::Mixing,      Property::WeakMixing,
    Property::Chaotic,     Property::FrequentlyHypercyclic, Property::SatisfiesFHC};

inline std::string_view to_string(Property p) {
    switch (p) {
        case Property::Supercyclic: return "supercyclic";
        case Property::Hypercyclic: return "hypercyclic";
        case Property::Mixing: return "mixing";
        case Property::WeakMixing: return "weak_mixing";
        case Property::Chaotic: return "chaotic";
        case Property::FrequentlyHypercyclic: return "frequently_hypercyclic";
        case Property::SatisfiesFHC: return "satisfies_FHC";
    }
    return "";
}

/// One decision step: the rule applied, the condition checked, and whether it held.
struct Justification {
    std::string rule;
    std::string condition;
    bool met = false;
};

struct ClassificationReport {
    std::map<Property, Verdict> status;
    std::vector<Justification> justification;
    std::map<std::string, double> quantities;  // k, |a|, residuals, indices
    std::vector<std::string> witnesses;        // witness file names, filled by the CLI
    std::vector<std::string> audit;            // closure conflicts; empty on a consistent report
    std::string reason;                        // why anything is Unknown

    ClassificationReport() {
        for (Property p : kProperties) status[p] = Verdict::Unknown;
    }

    Verdict operator[](Property p) const { return status.at(p); }

    void set_all(Verdict v) {
        for (Property p : kProperties) status[p] = v;
    }

    void note(std::string rule, std::string condition, bool met) {
        justification.push_back({std::move(rule), std::move(condition), met});
    }

    void unknown(const std::string& why) {
        if (!reason.empty()) reason += "; ";
        reason += why;
    }
};

namespace detail {

struct Implication {
    Property from;
    Property to;
};

// p => q: Yes flows forward, No flows backward.
inline constexpr std::array<Implication, 10> kImplications = {{
    {Property::SatisfiesFHC, Property::Mixing},
    {Property::SatisfiesFHC, Property::Chaotic},
    {Property::SatisfiesFHC, Property::FrequentlyHypercyclic},
    {Property::Mixing, Property::WeakMixing},
    {Property::WeakMixing, Property::Hypercyclic},
    {Property::Hypercyclic, Property::Mixing},
    {Property::Hypercyclic, Property::Supercyclic},
    {Property::Chaotic, Property::Hypercyclic},
    {Property::FrequentlyHypercyclic, Property::Hypercyclic},
    {Property::Mixing, Property::Hypercyclic},
}};

}  // namespace detail

/// Propagates Yes along implications and No against them until stable. Unknown entries
/// are filled; a forced value that contradicts a decided one is recorded in `audit`.
inline void apply_closure(ClassificationReport& r) {
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& [from, to] : detail::kImplications) {
            Verdict& a = r.status[from];
            Verdict& b = r.status[to];
            if (a == Verdict::Yes && b == Verdict::Unknown) {
                b = Verdict::Yes;
                r.note("closure", std::string(to_string(from)) + " implies " + std::string(to_string(to)), true);
                changed = true;
            } else if (b == Verdict::No && a == Verdict::Unknown) {
                a = Verdict::No;
                r.note("closure", "not " + std::string(to_string(to)) + " implies not " + std::string(to_string(from)),
                       true);
                changed = true;
            }
        }
    }
    for (const auto& [from, to] : detail::kImplications)
        if (r.status[from] == Verdict::Yes && r.status[to] == Verdict::No)
            r.audit.push_back(std::string(to_string(from)) + " is Yes but " + std::string(to_string(to)) + " is No");
}

/// Closure conflicts of a report, without modifying it.
inline std::vector<std::string> audit(const ClassificationReport& r) {
    std::vector<std::string> out;
    for (const auto& [from, to] : detail::kImplications)
        if (r[from] == Verdict::Yes && r[to] == Verdict::No)
            out.push_back(std::string(to_string(from)) + " is Yes but " + std::string(to_string(to)) + " is No");
    return out;
}

}  // namespace holodyn
