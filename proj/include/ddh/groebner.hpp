#pragma once

#include <map>
#include <vector>

#include "ddh/field.hpp"

namespace ddh {

// Small Buchberger kernel over the coefficient field, used for algebraic ideal
// membership (with saturation via an auxiliary Rabinowitsch variable).
// Variables are plain indices 0..nvars-1; the order is degrevlex.
class GroebnerEngine {
public:
    using Mono = std::vector<int>;
    using GPoly = std::map<Mono, FieldElem>;  // keys compared by degrevlex below

    GroebnerEngine(int nvars, long step_budget);

    void add_generator(GPoly p);

    // Runs Buchberger; returns false if the step budget was exhausted.
    bool compute();

    GPoly normal_form(GPoly p) const;
    bool reduces_to_zero(const GPoly& p) const;
    bool budget_exhausted() const { return exhausted_; }

    static bool degrevlex_less(const Mono& a, const Mono& b);

private:
    int nvars_;
    long budget_;
    bool exhausted_ = false;
    bool computed_ = false;
    std::vector<GPoly> basis_;

    static const Mono& leading_mono(const GPoly& p);
    GPoly reduce(GPoly p, long* steps) const;
};

}  // namespace ddh
