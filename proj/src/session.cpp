#include "ddh/session.hpp"

#include <fstream>
#include <sstream>

namespace ddh {

using nlohmann::json;

namespace {

mpq_class rational_of(const json& v) {
    if (v.is_number_integer()) return mpq_class(v.get<long>());
    if (v.is_string()) {
        mpq_class q(v.get<std::string>());
        q.canonicalize();
        return q;
    }
    throw SessionError("expected an integer or a rational string");
}

std::string need_string(const json& cmd, const std::string& key) {
    if (!cmd.contains(key) || !cmd[key].is_string())
        throw SessionError("command needs a string field '" + key + "'");
    return cmd[key].get<std::string>();
}

FieldElem scalar_of(const std::string& text, const FieldConfig& fc,
                    std::optional<int> ell = std::nullopt) {
    PolyQ p = parse_poly(text, fc, ell);
    if (!p.in_ring()) throw SessionError("expected a field element, got '" + text + "'");
    return p.ring_value();
}

std::vector<FieldElem> point_of(const json& arr, const FieldConfig& fc) {
    if (!arr.is_array()) throw SessionError("expected an array of coordinate expressions");
    std::vector<FieldElem> p;
    for (auto& v : arr) p.push_back(scalar_of(v.get<std::string>(), fc));
    return p;
}

SolverStrategy solver_of(const std::string& text) {
    auto bad = [&]() -> SolverStrategy {
        throw SessionError("malformed solver spec '" + text +
                           "' (use exact:deg=<D> or jet:point=<p|..>,order=<N>)");
    };
    size_t colon = text.find(':');
    if (colon == std::string::npos) return bad();
    std::string kind = text.substr(0, colon);
    std::map<std::string, std::string> kv;
    std::stringstream rest(text.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
        size_t eq = item.find('=');
        if (eq == std::string::npos) return bad();
        kv[item.substr(0, eq)] = item.substr(eq + 1);
    }
    if (kind == "exact") {
        if (!kv.count("deg")) return bad();
        return SolverStrategy::exact_ansatz(std::stoi(kv.at("deg")));
    }
    if (kind == "jet") {
        if (!kv.count("point") || !kv.count("order")) return bad();
        std::vector<mpq_class> pt;
        std::stringstream ps(kv.at("point"));
        std::string c;
        while (std::getline(ps, c, '|')) {
            mpq_class q(c);
            q.canonicalize();
            pt.push_back(q);
        }
        return SolverStrategy::jet(std::move(pt), std::stoi(kv.at("order")));
    }
    return bad();
}

std::string local_str(const LocalElem& b) {
    if (b.is_scalar()) return b.scalar().str();
    std::ostringstream os;
    bool first = true;
    for (size_t j = 0; j < b.coords().size(); ++j) {
        const FieldElem& c = b.coords()[j];
        if (c.is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        bool wrap = c.num().terms().size() > 1 || c.den() != QPoly(mpq_class(1));
        if (j == 0) {
            os << (wrap ? "(" + c.str() + ")" : c.str());
        } else if (c.is_one()) {
            os << "e" << j;
        } else {
            os << (wrap ? "(" + c.str() + ")" : c.str()) << "*e" << j;
        }
    }
    return first ? "0" : os.str();
}

std::string field_list(const std::vector<FieldElem>& v) {
    std::ostringstream os;
    for (size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i].str();
    return os.str();
}

}  // namespace

// --- loading ---------------------------------------------------------------

Session Session::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SessionError("cannot open session file " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw SessionError(std::string("invalid session file: ") + e.what());
    }
    return from_json(doc);
}

Session Session::from_json(const json& doc) {
    Session s;
    try {
        if (!doc.contains("field")) throw SessionError("session needs a 'field' block");
        s.fc_.m = doc["field"].value("derivations", 0);
        s.fc_.s = doc["field"].value("generators", 0);
        if (s.fc_.m < 0 || s.fc_.s < 0) throw SessionError("negative field parameters");

        const json algebras = doc.value("algebras", json::object());
        for (auto& [name, a] : algebras.items()) {
            if (a.contains("product")) {
                s.algebras_[name] = FiniteAlgebra::product(a["product"].get<std::vector<int>>());
            } else if (a.contains("table")) {
                std::vector<std::vector<Coords>> c;
                for (auto& row : a["table"]) {
                    c.emplace_back();
                    for (auto& cell : row) {
                        Coords v;
                        for (auto& x : cell) v.push_back(rational_of(x));
                        c.back().push_back(std::move(v));
                    }
                }
                std::optional<std::vector<Coords>> hints;
                if (a.contains("idempotents")) {
                    hints.emplace();
                    for (auto& u : a["idempotents"]) {
                        Coords v;
                        for (auto& x : u) v.push_back(rational_of(x));
                        hints->push_back(std::move(v));
                    }
                }
                s.algebras_[name] = FiniteAlgebra::from_structure(std::move(c), hints);
            } else {
                throw SessionError("algebra '" + name + "' needs 'product' or 'table'");
            }
        }

        const json structures = doc.value("structures", json::object());
        for (auto& [name, d] : structures.items()) {
            const FiniteAlgebra::Ptr& alg = s.algebra(need_string(d, "algebra"));
            std::vector<DFieldElem> images;
            for (auto& img : d["images"]) {
                DFieldElem e(alg);
                if ((int)img.size() != alg->dim())
                    throw SessionError("structure '" + name +
                                       "': image coordinate count mismatch");
                for (int j = 0; j < alg->dim(); ++j)
                    e[j] = scalar_of(img[j].get<std::string>(), s.fc_);
                images.push_back(std::move(e));
            }
            s.structures_.emplace(name, DStructure(alg, s.fc_, std::move(images)));
        }

        const json sets = doc.value("sets", json::object());
        for (auto& [name, d] : sets.items()) {
            PolySet ps;
            for (auto& p : d["polys"]) ps.texts.push_back(p.get<std::string>());
            if (d.contains("prolonged")) ps.ell = d["prolonged"].get<int>();
            if (d.contains("algebra")) {
                ps.algebra = d["algebra"].get<std::string>();
                s.algebra(*ps.algebra);  // must resolve
            }
            s.sets_[name] = std::move(ps);
        }

        const json commands = doc.value("commands", json::array());
        for (auto& c : commands) s.commands_.push_back(c);
    } catch (const json::exception& e) {
        throw SessionError(std::string("invalid session file: ") + e.what());
    }
    return s;
}

const FiniteAlgebra::Ptr& Session::algebra(const std::string& name) const {
    auto it = algebras_.find(name);
    if (it == algebras_.end()) throw SessionError("unknown algebra '" + name + "'");
    return it->second;
}

const DStructure& Session::structure(const std::string& name) const {
    auto it = structures_.find(name);
    if (it == structures_.end()) throw SessionError("unknown structure '" + name + "'");
    return it->second;
}

const Session::PolySet& Session::set_decl(const std::string& name) const {
    auto it = sets_.find(name);
    if (it == sets_.end()) throw SessionError("unknown set '" + name + "'");
    return it->second;
}

std::vector<PolyQ> Session::polys(const std::string& name) const {
    const PolySet& ps = set_decl(name);
    if (ps.algebra)
        throw SessionError("set '" + name + "' has algebra coefficients; not usable here");
    std::vector<PolyQ> r;
    for (auto& t : ps.texts) r.push_back(parse_poly(t, fc_, ps.ell));
    return r;
}

std::vector<PolyR> Session::polys_r(const std::string& name) const {
    const PolySet& ps = set_decl(name);
    ParseContext ctx{fc_, ps.ell, ps.algebra ? algebra(*ps.algebra) : nullptr};
    std::vector<PolyR> r;
    for (auto& t : ps.texts) r.push_back(parse_poly_r(t, ctx));
    return r;
}

// --- command execution -----------------------------------------------------

namespace {

int cmd_rank(const Session& s, const json& cmd, std::ostream& out) {
    std::optional<int> ell;
    if (cmd.contains("prolonged")) ell = cmd["prolonged"].get<int>();
    PolyQ p = parse_poly(need_string(cmd, "poly"), s.field(), ell);
    VarNamer namer = ell ? prolonged_namer(*ell) : default_var_name;
    if (p.in_ring()) {
        out << "constant: " << (p.is_zero() ? "0" : p.ring_value().str()) << "\n";
        return kPass;
    }
    auto indets = p.indeterminates();
    out << "indeterminates (ascending rank): ";
    bool first = true;
    for (auto& u : indets) {
        out << (first ? "" : " < ") << indet_str(u, namer);
        first = false;
    }
    out << "\nleader: " << indet_str(p.leader(), namer) << " (degree " << p.degree()
        << ")\n";
    return kPass;
}

int cmd_reduce(const Session& s, const json& cmd, std::ostream& out) {
    const std::string name = need_string(cmd, "set");
    auto set = AutoreducedSet::validate(s.polys(name));
    std::optional<int> ell = s.set_decl(name).ell;
    PolyQ p = parse_poly(need_string(cmd, "poly"), s.field(), ell);
    auto cert = ritt_remainder(p, set);
    out << cert.report(set, ell ? prolonged_namer(*ell) : default_var_name);
    return kPass;
}

int cmd_coherent(const Session& s, const json& cmd, std::ostream& out) {
    const std::string name = need_string(cmd, "set");
    auto set = AutoreducedSet::validate(s.polys(name));
    long budget = cmd.value("budget", 200000L);
    std::optional<int> ell = s.set_decl(name).ell;
    VarNamer namer = ell ? prolonged_namer(*ell) : default_var_name;
    auto rep = check_coherent(set, budget);
    switch (rep.status) {
        case CoherenceReport::Status::Coherent:
            out << "coherent\n";
            return kPass;
        case CoherenceReport::Status::Incoherent:
            out << "incoherent";
            if (rep.witness_pair)
                out << " (pair " << rep.witness_pair->first << ","
                    << rep.witness_pair->second << ")";
            if (rep.witness) out << "; witness: " << rep.witness->str(namer);
            out << "\n";
            return kCheckFailed;
        default:
            out << "inconclusive: " << rep.note << "\n";
            return kResourceBound;
    }
}

int cmd_member(const Session& s, const json& cmd, std::ostream& out) {
    const std::string name = need_string(cmd, "set");
    auto set = AutoreducedSet::validate(s.polys(name));
    std::optional<int> ell = s.set_decl(name).ell;
    PolyQ p = parse_poly(need_string(cmd, "poly"), s.field(), ell);
    auto cert = ritt_remainder(p, set);
    VarNamer namer = ell ? prolonged_namer(*ell) : default_var_name;
    if (cert.remainder.is_zero()) {
        out << "member (zero remainder)\n";
        return kPass;
    }
    out << "not a member: remainder " << cert.remainder.str(namer) << "\n";
    return kCheckFailed;
}

int cmd_prolong(const Session& s, const json& cmd, std::ostream& out) {
    auto set = AutoreducedSet::validate(s.polys(need_string(cmd, "set")));
    const DStructure& st = s.structure(need_string(cmd, "structure"));
    auto ps = tau_generators(set, st);
    int ell = st.algebra()->dim() - 1;
    VarNamer namer = prolonged_namer(ell);
    for (size_t i = 0; i < ps.components.size(); ++i) {
        out << "element " << i << ": " << ps.source[i].str() << "\n";
        for (size_t j = 0; j < ps.components[i].size(); ++j)
            out << "  component " << j << ": " << ps.components[i][j].str(namer) << "\n";
    }
    out << "note: " << ps.note << "\n";
    return kPass;
}

int cmd_nabla(const Session& s, const json& cmd, std::ostream& out) {
    const DStructure& st = s.structure(need_string(cmd, "structure"));
    auto a = point_of(cmd.at("point"), s.field());
    out << "nabla(a) = (" << field_list(nabla(a, st)) << ")\n";
    return kPass;
}

int cmd_pihat(const Session& s, const json& cmd, std::ostream& out) {
    const DStructure& st = s.structure(need_string(cmd, "structure"));
    int factor = cmd.value("factor", 0);
    auto abar = point_of(cmd.at("point"), s.field());
    out << "pihat_" << factor << "(abar) = (" << field_list(pihat(factor, abar, st))
        << ")\n";
    return kPass;
}

int cmd_lift(const Session& s, const json& cmd, std::ostream& out) {
    const std::string name = need_string(cmd, "system");
    const Session::PolySet& decl = s.set_decl(name);
    if (!decl.algebra)
        throw SessionError("set '" + name + "' must declare an algebra for lifting");
    auto lambda = s.polys_r(name);
    FieldElem a = scalar_of(need_string(cmd, "point"), s.field());
    SolverStrategy solver = solver_of(need_string(cmd, "solver"));
    auto r = lift_nonlocal(lambda, a, s.algebra(*decl.algebra), s.field(), solver);
    out << "b = " << local_str(r.b) << "\n";
    out << (r.exact ? "exact\n" : "truncated\n");
    return kPass;
}

int cmd_extend(const Session& s, const json& cmd, std::ostream& out) {
    ExtensionRequest req{s.structure(need_string(cmd, "structure")),
                         scalar_of(need_string(cmd, "element"), s.field()),
                         std::nullopt,
                         {}};
    if (cmd.contains("charset") && !cmd["charset"].is_null())
        req.charset = s.polys(cmd["charset"].get<std::string>());
    for (auto& t : cmd.at("targets")) req.targets.push_back(scalar_of(t.get<std::string>(), s.field()));
    SolverStrategy solver = solver_of(need_string(cmd, "solver"));
    auto r = extend_to_element(req, solver);
    out << "b = (" << field_list(r.b.coeffs()) << ")\n";
    for (auto& n : r.notes) out << n << "\n";
    out << (r.exact ? "exact\n" : "truncated\n");
    return kPass;
}

int cmd_check_structure(const Session& s, const json& cmd, std::ostream& out) {
    const DStructure& st = s.structure(need_string(cmd, "structure"));
    auto rep = st.check_structure(cmd.value("samples", 40));
    for (auto& n : rep.notes) out << n << "\n";
    if (!rep.pass) out << "counterexample: " << rep.counterexample << "\n";
    out << (rep.pass ? "PASS" : "FAIL") << "\n";
    return rep.pass ? kPass : kCheckFailed;
}

int cmd_check_axiom3(const Session& s, const json& cmd, std::ostream& out) {
    auto lam = VStar::of(AutoreducedSet::validate(s.polys(need_string(cmd, "lambda"))));
    auto gam = VStar::of(AutoreducedSet::validate(s.polys(need_string(cmd, "gamma"))));
    const DStructure& st = s.structure(need_string(cmd, "structure"));
    bool pass = true;
    auto ri = check_condition_i(lam, gam, st);
    out << "condition (i):\n" << ri.str();
    pass = pass && ri.pass;
    if (cmd.contains("witnesses")) {
        for (auto& w : cmd["witnesses"]) {
            auto a = point_of(w, s.field());
            auto rw = check_witness(a, lam, gam, st);
            out << "witness (" << field_list(a) << "):\n" << rw.str();
            pass = pass && rw.pass;
        }
    }
    return pass ? kPass : kCheckFailed;
}

int severity_rank(int code) {
    switch (code) {
        case kPass: return 0;
        case kCheckFailed: return 1;
        case kResourceBound: return 2;
        default: return 3;  // input errors dominate
    }
}

}  // namespace

int run_command(const Session& s, const json& cmd, std::ostream& out) {
    try {
        std::string op = need_string(cmd, "op");
        if (op == "rank") return cmd_rank(s, cmd, out);
        if (op == "reduce") return cmd_reduce(s, cmd, out);
        if (op == "coherent") return cmd_coherent(s, cmd, out);
        if (op == "member") return cmd_member(s, cmd, out);
        if (op == "prolong") return cmd_prolong(s, cmd, out);
        if (op == "nabla") return cmd_nabla(s, cmd, out);
        if (op == "pihat") return cmd_pihat(s, cmd, out);
        if (op == "lift") return cmd_lift(s, cmd, out);
        if (op == "extend") return cmd_extend(s, cmd, out);
        if (op == "check-structure") return cmd_check_structure(s, cmd, out);
        if (op == "check-axiom3") return cmd_check_axiom3(s, cmd, out);
        throw SessionError("unknown command op '" + op + "'");
    } catch (const NoSolutionFoundAtBound& e) {
        out << "resource bound: " << e.what() << "\n";
        return kResourceBound;
    } catch (const SolverFailed& e) {
        out << "resource bound: " << e.what() << "\n";
        return kResourceBound;
    } catch (const PreconditionFailed& e) {
        out << "check failed: " << e.what() << "\n";
        return kCheckFailed;
    } catch (const DenominatorNotUnit& e) {
        out << "check failed: " << e.what() << "\n";
        return kCheckFailed;
    } catch (const NotAUnit& e) {
        out << "check failed: " << e.what() << "\n";
        return kCheckFailed;
    } catch (const json::exception& e) {
        out << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        // parse errors, invalid sets, bad session references
        out << "error: " << e.what() << "\n";
        return kInputError;
    }
}

int run_session(const Session& s, std::ostream& out) {
    int worst = kPass;
    for (size_t i = 0; i < s.commands().size(); ++i) {
        out << "== command " << i << " ==\n";
        int code = run_command(s, s.commands()[i], out);
        if (severity_rank(code) > severity_rank(worst)) worst = code;
    }
    return worst;
}

}  // namespace ddh
