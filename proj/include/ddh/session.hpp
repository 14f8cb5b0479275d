#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ddh/axiom.hpp"
#include "ddh/extend.hpp"
#include "ddh/parser.hpp"

namespace ddh {

struct SessionError : std::runtime_error {
    explicit SessionError(const std::string& what) : std::runtime_error(what) {}
};

// A session file declares the coefficient field, finite algebras, D-structures,
// and named polynomial sets, plus an optional list of commands:
//   {
//     "field": {"derivations": 1, "generators": 1},
//     "algebras": {"B": {"product": [2]}},
//     "structures": {"S": {"algebra": "B", "images": [["t1", "1"]]}},
//     "sets": {
//       "L":  {"polys": ["d1 x1 - x1"]},
//       "G":  {"polys": ["d1 x1_0 - 1", "d1 x1_1"], "prolonged": 1},
//       "S1": {"polys": ["x1 * d1 x1 - t1 - e1"], "algebra": "B"}
//     },
//     "commands": [{"op": "reduce", "set": "L", "poly": "d1^2 x1"}]
//   }
// Algebras may also be given by structure constants:
//   {"table": [[[..],..],..], "idempotents": [[..],..]}
class Session {
public:
    static Session load(const std::string& path);
    static Session from_json(const nlohmann::json& doc);

    const FieldConfig& field() const { return fc_; }
    const FiniteAlgebra::Ptr& algebra(const std::string& name) const;
    const DStructure& structure(const std::string& name) const;

    struct PolySet {
        std::vector<std::string> texts;
        std::optional<int> ell;           // declared over prolonged variables
        std::optional<std::string> algebra;  // algebra-valued coefficients
    };
    const PolySet& set_decl(const std::string& name) const;
    std::vector<PolyQ> polys(const std::string& name) const;
    std::vector<PolyR> polys_r(const std::string& name) const;

    const std::vector<nlohmann::json>& commands() const { return commands_; }

private:
    FieldConfig fc_;
    std::map<std::string, FiniteAlgebra::Ptr> algebras_;
    std::map<std::string, DStructure> structures_;
    std::map<std::string, PolySet> sets_;
    std::vector<nlohmann::json> commands_;
};

// Exit-code conventions shared by the CLI:
//   0 all checks pass, 1 a check failed, 2 input/parse error,
//   3 resource limit or solver bound reached.
enum ExitCode { kPass = 0, kCheckFailed = 1, kInputError = 2, kResourceBound = 3 };

// Executes one command object, writing its report; returns an ExitCode value.
int run_command(const Session& s, const nlohmann::json& cmd, std::ostream& out);

// Executes the session's command list in order; returns the most severe code
// (input errors dominate, then resource bounds, then check failures).
int run_session(const Session& s, std::ostream& out);

}  // namespace ddh
