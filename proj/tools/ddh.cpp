#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ddh/session.hpp"

namespace {

using ddh::Session;
using nlohmann::json;

// Split "a|b|c" into its pieces; used for multi-valued flags.
std::vector<std::string> split_bar(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, '|')) out.push_back(item);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ddh: exact differential-algebra toolkit"};
    app.require_subcommand(0, 1);

    std::string session_path, field_spec, out_path;
    app.add_option("--session", session_path, "session file (JSON)");
    app.add_option("--field", field_spec,
                   "inline field declaration 'derivations=<m>,generators=<s>' "
                   "when no session file is given");
    app.add_option("--out", out_path, "write reports to this file instead of stdout");

    json cmd;
    std::string set_name, poly_text, structure_name, system_name, point_text,
        solver_spec, element_text, charset_name, targets_spec, lambda_name,
        gamma_name;
    std::vector<std::string> witness_specs, point_coords;
    long budget = 200000;
    int factor = 0, samples = 40, prolonged = -1;

    auto* rank = app.add_subcommand("rank", "list indeterminates by rank; show leader");
    rank->add_option("--poly", poly_text, "polynomial")->required();
    rank->add_option("--prolonged", prolonged, "interpret x<i>_<j> variables (ell)");

    auto* reduce = app.add_subcommand("reduce", "Ritt remainder with certificate");
    reduce->add_option("--set", set_name, "autoreduced set")->required();
    reduce->add_option("--poly", poly_text, "polynomial to reduce")->required();

    auto* coherent = app.add_subcommand("coherent", "coherence check with witness");
    coherent->add_option("--set", set_name, "autoreduced set")->required();
    coherent->add_option("--budget", budget, "saturation step budget");

    auto* member = app.add_subcommand("member", "ideal membership via zero remainder");
    member->add_option("--set", set_name, "characteristic set")->required();
    member->add_option("--poly", poly_text, "candidate member")->required();

    auto* prolong = app.add_subcommand("prolong", "coordinate components of a set");
    prolong->add_option("--set", set_name, "autoreduced set")->required();
    prolong->add_option("--structure", structure_name, "operator structure")->required();

    auto* nab = app.add_subcommand("nabla", "canonical section of a point");
    nab->add_option("--structure", structure_name, "operator structure")->required();
    nab->add_option("--point", point_coords, "coordinate expressions")->required();

    auto* pih = app.add_subcommand("pihat", "factor projection of a prolonged point");
    pih->add_option("--structure", structure_name, "operator structure")->required();
    pih->add_option("--factor", factor, "local factor index");
    pih->add_option("--point", point_coords, "prolonged coordinates")->required();

    auto* lift = app.add_subcommand("lift", "Hensel lift of a residue point");
    lift->add_option("--system", system_name, "algebra-valued system")->required();
    lift->add_option("--point", point_text, "residue point")->required();
    lift->add_option("--solver", solver_spec,
                     "exact:deg=<D> or jet:point=<p|..>,order=<N>")
        ->required();

    auto* extend = app.add_subcommand("extend", "extend a structure to an element");
    extend->add_option("--structure", structure_name, "operator structure")->required();
    extend->add_option("--element", element_text, "element to extend to")->required();
    extend->add_option("--charset", charset_name, "characteristic set (omit if transcendental)");
    extend->add_option("--targets", targets_spec, "per-factor targets 'a1|a2|..'")->required();
    extend->add_option("--solver", solver_spec,
                       "exact:deg=<D> or jet:point=<p|..>,order=<N>")
        ->required();

    auto* chks = app.add_subcommand("check-structure", "verify operator-structure laws");
    chks->add_option("--structure", structure_name, "operator structure")->required();
    chks->add_option("--samples", samples, "randomized sample count");

    auto* chka = app.add_subcommand("check-axiom3", "geometric-axiom condition report");
    chka->add_option("--lambda", lambda_name, "base set Lambda")->required();
    chka->add_option("--gamma", gamma_name, "prolonged set Gamma")->required();
    chka->add_option("--structure", structure_name, "operator structure")->required();
    chka->add_option("--witness", witness_specs, "witness point 'a1|a2|..' (repeatable)");

    app.add_subcommand("run", "execute the session's command list");

    CLI11_PARSE(app, argc, argv);

    std::ofstream out_file;
    std::ostream* out = &std::cout;
    if (!out_path.empty()) {
        out_file.open(out_path);
        if (!out_file) {
            std::cerr << "error: cannot open " << out_path << "\n";
            return ddh::kInputError;
        }
        out = &out_file;
    }

    try {
        json doc;
        if (!session_path.empty()) {
            // load() below re-parses; here we only need the declarations
        } else if (!field_spec.empty()) {
            int m = 0, s = 0;
            std::stringstream ss(field_spec);
            std::string item;
            while (std::getline(ss, item, ',')) {
                size_t eq = item.find('=');
                if (eq == std::string::npos) throw ddh::SessionError("bad --field spec");
                std::string key = item.substr(0, eq);
                int val = std::stoi(item.substr(eq + 1));
                if (key == "derivations") m = val;
                else if (key == "generators") s = val;
                else throw ddh::SessionError("bad --field key '" + key + "'");
            }
            doc = json{{"field", {{"derivations", m}, {"generators", s}}}};
        } else {
            std::cerr << "error: provide --session or --field\n";
            return ddh::kInputError;
        }

        Session s = session_path.empty() ? Session::from_json(doc)
                                         : Session::load(session_path);

        if (app.got_subcommand("run") || app.get_subcommands().empty()) {
            return ddh::run_session(s, *out);
        }

        if (rank->parsed()) {
            cmd = {{"op", "rank"}, {"poly", poly_text}};
            if (prolonged >= 0) cmd["prolonged"] = prolonged;
        } else if (reduce->parsed()) {
            cmd = {{"op", "reduce"}, {"set", set_name}, {"poly", poly_text}};
        } else if (coherent->parsed()) {
            cmd = {{"op", "coherent"}, {"set", set_name}, {"budget", budget}};
        } else if (member->parsed()) {
            cmd = {{"op", "member"}, {"set", set_name}, {"poly", poly_text}};
        } else if (prolong->parsed()) {
            cmd = {{"op", "prolong"}, {"set", set_name}, {"structure", structure_name}};
        } else if (nab->parsed()) {
            cmd = {{"op", "nabla"}, {"structure", structure_name}, {"point", point_coords}};
        } else if (pih->parsed()) {
            cmd = {{"op", "pihat"},
                   {"structure", structure_name},
                   {"factor", factor},
                   {"point", point_coords}};
        } else if (lift->parsed()) {
            cmd = {{"op", "lift"},
                   {"system", system_name},
                   {"point", point_text},
                   {"solver", solver_spec}};
        } else if (extend->parsed()) {
            cmd = {{"op", "extend"},
                   {"structure", structure_name},
                   {"element", element_text},
                   {"targets", split_bar(targets_spec)},
                   {"solver", solver_spec}};
            if (!charset_name.empty()) cmd["charset"] = charset_name;
        } else if (chks->parsed()) {
            cmd = {{"op", "check-structure"},
                   {"structure", structure_name},
                   {"samples", samples}};
        } else if (chka->parsed()) {
            cmd = {{"op", "check-axiom3"},
                   {"lambda", lambda_name},
                   {"gamma", gamma_name},
                   {"structure", structure_name}};
            if (!witness_specs.empty()) {
                json ws = json::array();
                for (auto& w : witness_specs) ws.push_back(split_bar(w));
                cmd["witnesses"] = ws;
            }
        }

        return ddh::run_command(s, cmd, *out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ddh::kInputError;
    }
}
