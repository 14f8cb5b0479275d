#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ddh/dstructure.hpp"
#include "ddh/hensel.hpp"

namespace ddh {

// A single-element structure extension: given a D-structure on the subfield K
// generated by the declared generators, an element a of the ambient field, a
// caller-asserted characteristic set for its differential ideal over K (or a
// transcendence declaration), and prescribed residue targets sigma_i(a), find
// an element b of B (x) L whose factor components solve the transported
// systems and whose residues are the targets.
struct ExtensionRequest {
    DStructure structure;
    FieldElem a;
    // Characteristic set of the differential ideal of a over K; empty optional
    // declares a differentially transcendental.
    std::optional<std::vector<PolyQ>> charset;
    // One prescribed residue per local factor; the factor carrying the
    // distinguished projection must receive a itself (sigma_0 = id).
    std::vector<FieldElem> targets;

    // Checks all request invariants; throws PreconditionFailed.
    void validate() const;
};

struct ExtensionResult {
    DFieldElem b;
    bool exact;
    std::vector<std::string> notes;
};

ExtensionResult extend_to_element(const ExtensionRequest& req, const SolverStrategy& solver);

}  // namespace ddh
