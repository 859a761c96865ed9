#pragma once

#include <string>
#include <vector>

#include "affdim/spectrum.hpp"
#include "affdim/svf.hpp"

namespace affdim {

enum class DimFamily { ossStableGraph, ossStableRange, levyGraph, levyRange };

struct ValidityFlag {
    std::string name;
    bool satisfied = true;
};

struct DimensionFormulaResult {
    double value = 0.0;
    DimFamily family{};
    int branchIndex = 0;        // ell of the fired case
    std::string branchCase;     // which case fired
    bool applicable = true;     // false when the published case split is silent
    std::string note;
    std::vector<ValidityFlag> validity;
};

// Graph dimension of operator-self-similar stable fields. Two branches over
// the expanded lambda list resp. the reversed distinct a list; algebraically
// identical to s_closed_graph for every spectrum.
DimensionFormulaResult graph_dim_oss_stable(const SpectrumSummary& spec);

// Range dimension of the same family: m when sum(lambda) < q, otherwise the
// interior branch; identical to s_closed_range.
DimensionFormulaResult range_dim_oss_stable(const SpectrumSummary& spec);

// Graph/range dimension of operator semistable Levy processes (d = 1, q = 1).
// With m = 1 there is no second eigenvalue real part; the else-branch factor
// max(1/lambda_2, 1) is taken as 1, which reproduces the scalar stable value.
DimensionFormulaResult graph_dim_semistable_levy(const SpectrumSummary& spec);

// The published range case split is silent for 1/lambda_1 > m_1 >= 2; such
// inputs are reported as not applicable rather than guessed.
DimensionFormulaResult range_dim_semistable_levy(const SpectrumSummary& spec);

struct IdentityCheck {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double diff = 0.0;
    bool pass = true;
    std::string note;
};

struct IdentityReport {
    SpectrumSummary spec;
    SValResult graph;
    SValResult range;
    std::vector<IdentityCheck> checks;
    bool allPass = true;
};

// Cross-checks the family formulas against the singular-value-function closed
// forms, plus the graph-equals-range equality when lambda_p <= a_1.
IdentityReport identity_suite(const ExponentPair& pair);
IdentityReport identity_suite(const SpectrumSummary& spec);

}  // namespace affdim
