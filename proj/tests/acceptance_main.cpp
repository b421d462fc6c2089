// Acceptance gate: runs every criterion at its pinned tolerance and prints
// one pass/fail line per criterion (with per-check detail lines underneath).
// Exits nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <string>

#include "funnel/verify.hpp"

int main() {
    const char* names[] = {
        "closed-form containment (y'=y vs exp oracle)",
        "funnel completeness (all-2 gadget, budgets 8/16/64)",
        "gadget sign forcing (10 randomized forced instances)",
        "decoder round-trip (20 randomized stream lists)",
        "scaling identity (cells m=0,1,2)",
        "extension loop (blow-up confinement and step bounds)",
        "interval soundness (10^5 randomized checks)",
        "determinism (byte-identical artifacts across thread counts)",
    };
    int failures = 0;
    for (int k = 1; k <= 8; ++k) {
        auto t0 = std::chrono::steady_clock::now();
        auto results = funnel::verify::acceptance_criterion(k);
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool pass = true;
        for (const auto& r : results) pass = pass && r.pass;
        std::printf("[%s] criterion %d: %s (%.1f s)\n", pass ? "PASS" : "FAIL", k, names[k - 1],
                    secs);
        for (const auto& r : results)
            std::printf("        %s %s%s%s\n", r.pass ? "ok  " : "FAIL", r.name.c_str(),
                        r.detail.empty() ? "" : " -- ", r.detail.c_str());
        if (!pass) ++failures;
    }
    if (failures) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
