#pragma once

#include <string>
#include <utility>
#include <vector>

namespace wslab {

// Approx marks judgements made from sampled or heuristic evidence (no
// exhaustive certificate), as opposed to measured pass/fail.
enum class Verdict { Pass, Fail, Approx };

inline std::string verdict_tag(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Approx: return "approx";
    }
    return "?";
}

struct CheckEntry {
    std::string condition;
    Verdict verdict = Verdict::Pass;
    // ordered so reports serialize deterministically
    std::vector<std::pair<std::string, double>> measured;
    std::string note;
};

struct CheckReport {
    std::string scenario;
    std::vector<CheckEntry> entries;

    Verdict overall() const {
        bool approx = false;
        for (const auto& e : entries) {
            if (e.verdict == Verdict::Fail) return Verdict::Fail;
            if (e.verdict == Verdict::Approx) approx = true;
        }
        return approx ? Verdict::Approx : Verdict::Pass;
    }
    CheckEntry& add(const std::string& condition, Verdict v) {
        entries.push_back({condition, v, {}, ""});
        return entries.back();
    }
    const CheckEntry* find(const std::string& condition) const {
        for (const auto& e : entries)
            if (e.condition == condition) return &e;
        return nullptr;
    }
};

} // namespace wslab
