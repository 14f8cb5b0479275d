#include "ddh/qpoly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace ddh {

namespace {

// lex compare helpers on exponent vectors happen through std::map's key order

bool exps_divides(const QPoly::Exps& a, const QPoly::Exps& b) {
    // does t^a divide t^b
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

QPoly::Exps exps_sub(const QPoly::Exps& b, const QPoly::Exps& a) {
    QPoly::Exps r(b);
    for (size_t i = 0; i < a.size(); ++i) r[i] -= a[i];
    return r;
}

}  // namespace

QPoly::QPoly(const mpq_class& c) {
    if (c != 0) terms_[Exps{}] = c;
}

QPoly QPoly::var(int j, int s) {
    if (j < 1 || j > s) throw std::out_of_range("QPoly::var: index out of range");
    Exps e(s, 0);
    e[j - 1] = 1;
    return monomial(1, e);
}

QPoly QPoly::monomial(const mpq_class& c, const Exps& e) {
    QPoly p;
    if (c != 0) {
        Exps key = e;
        while (!key.empty() && key.back() == 0) key.pop_back();
        // normalize trailing zeros away so t1 in Q(t1) and Q(t1,t2) compare equal
        p.terms_[key] = c;
    }
    return p;
}

void QPoly::set_term(const Exps& e, const mpq_class& c) {
    Exps key = e;
    while (!key.empty() && key.back() == 0) key.pop_back();
    if (c == 0)
        terms_.erase(key);
    else
        terms_[key] = c;
}

bool QPoly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

const mpq_class& QPoly::constant_term() const {
    static const mpq_class zero(0);
    auto it = terms_.find(Exps{});
    return it == terms_.end() ? zero : it->second;
}

int QPoly::nvars() const {
    int n = 0;
    for (auto& [e, c] : terms_) n = std::max<int>(n, (int)e.size());
    return n;
}

int QPoly::degree(int j) const {
    int d = 0;
    for (auto& [e, c] : terms_)
        if ((int)e.size() >= j) d = std::max(d, e[j - 1]);
    return d;
}

int QPoly::total_degree() const {
    int d = 0;
    for (auto& [e, c] : terms_) {
        int s = 0;
        for (int x : e) s += x;
        d = std::max(d, s);
    }
    return d;
}

QPoly QPoly::operator+(const QPoly& o) const {
    QPoly r(*this);
    for (auto& [e, c] : o.terms_) {
        auto it = r.terms_.find(e);
        if (it == r.terms_.end()) {
            r.terms_[e] = c;
        } else {
            it->second += c;
            if (it->second == 0) r.terms_.erase(it);
        }
    }
    return r;
}

QPoly QPoly::operator-() const {
    QPoly r(*this);
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
}

QPoly QPoly::operator-(const QPoly& o) const { return *this + (-o); }

QPoly QPoly::operator*(const QPoly& o) const {
    QPoly r;
    for (auto& [ea, ca] : terms_) {
        for (auto& [eb, cb] : o.terms_) {
            Exps e(std::max(ea.size(), eb.size()), 0);
            for (size_t i = 0; i < ea.size(); ++i) e[i] += ea[i];
            for (size_t i = 0; i < eb.size(); ++i) e[i] += eb[i];
            auto it = r.terms_.find(e);
            if (it == r.terms_.end()) {
                mpq_class p = ca * cb;
                if (p != 0) r.terms_[e] = p;
            } else {
                it->second += ca * cb;
                if (it->second == 0) r.terms_.erase(it);
            }
        }
    }
    return r;
}

QPoly QPoly::operator*(const mpq_class& c) const {
    QPoly r;
    if (c == 0) return r;
    r.terms_ = terms_;
    for (auto& [e, cc] : r.terms_) cc *= c;
    return r;
}

QPoly QPoly::derive(int j) const {
    QPoly r;
    for (auto& [e, c] : terms_) {
        if ((int)e.size() < j || e[j - 1] == 0) continue;
        Exps d = e;
        mpq_class nc = c * e[j - 1];
        d[j - 1] -= 1;
        r.set_term(d, nc);
    }
    return r;
}

mpq_class QPoly::eval(const std::vector<mpq_class>& point) const {
    mpq_class acc(0);
    for (auto& [e, c] : terms_) {
        mpq_class term = c;
        for (size_t i = 0; i < e.size(); ++i) {
            if ((int)i >= (int)point.size() && e[i] > 0)
                throw std::invalid_argument("QPoly::eval: point has too few coordinates");
            for (int k = 0; k < e[i]; ++k) term *= point[i];
        }
        acc += term;
    }
    return acc;
}

const mpq_class& QPoly::leading_coeff() const {
    if (terms_.empty()) throw std::logic_error("leading_coeff of zero polynomial");
    return terms_.rbegin()->second;
}

const QPoly::Exps& QPoly::leading_exps() const {
    if (terms_.empty()) throw std::logic_error("leading_exps of zero polynomial");
    return terms_.rbegin()->first;
}

QPoly QPoly::scaled(const mpq_class& c) const {
    if (c == 0) throw std::invalid_argument("QPoly::scaled: division by zero");
    QPoly r(*this);
    for (auto& [e, cc] : r.terms_) cc /= c;
    return r;
}

bool QPoly::try_divide(const QPoly& d, QPoly& q) const {
    if (d.is_zero()) return false;
    QPoly r(*this), quot;
    while (!r.is_zero()) {
        const Exps& re = r.leading_exps();
        const Exps& de = d.leading_exps();
        Exps rep = re, dep = de;
        size_t n = std::max(rep.size(), dep.size());
        rep.resize(n, 0);
        dep.resize(n, 0);
        if (!exps_divides(dep, rep)) return false;
        QPoly t = monomial(r.leading_coeff() / d.leading_coeff(), exps_sub(rep, dep));
        quot = quot + t;
        r = r - t * d;
    }
    q = quot;
    return true;
}

namespace {

// Univariate view in variable j (1-based): coefficients by degree, variable j zeroed out.
std::vector<QPoly> univ_coeffs(const QPoly& p, int j) {
    std::vector<QPoly> cs(p.degree(j) + 1);
    for (auto& [e, c] : p.terms()) {
        int d = ((int)e.size() >= j) ? e[j - 1] : 0;
        QPoly::Exps rest = e;
        if ((int)rest.size() >= j) rest[j - 1] = 0;
        cs[d] = cs[d] + QPoly::monomial(c, rest);
    }
    return cs;
}

QPoly from_univ(const std::vector<QPoly>& cs, int j) {
    QPoly r;
    for (size_t d = 0; d < cs.size(); ++d) {
        QPoly xd = QPoly(mpq_class(1));
        if (d > 0) {
            QPoly::Exps e(j, 0);
            e[j - 1] = (int)d;
            xd = QPoly::monomial(1, e);
        }
        r = r + cs[d] * xd;
    }
    return r;
}


// rational content: gcd of numerators over lcm of denominators; dividing by it
// leaves integer coefficients with gcd 1
mpq_class rational_content(const QPoly& p) {
    mpz_class g(0), l(1);
    for (auto& [e, c] : p.terms()) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num().get_mpz_t());
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den().get_mpz_t());
    }
    return mpq_class(g, l);
}

QPoly primitive_q(const QPoly& p) {
    if (p.is_zero()) return p;
    return p.scaled(rational_content(p));
}

int main_var(const QPoly& p) {
    int best = 0;
    for (auto& [e, c] : p.terms())
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i] > 0) best = std::max<int>(best, (int)i + 1);
    return best;
}

QPoly content_wrt(const std::vector<QPoly>& cs) {
    QPoly g;
    for (auto& c : cs) {
        if (c.is_zero()) continue;
        g = QPoly::gcd(g, primitive_q(c));
        if (g.is_constant()) break;
    }
    return g;
}

// pseudo-remainder of a by b in variable j; both nonzero, deg_j(a) >= deg_j(b)
QPoly pseudo_rem(QPoly a, const QPoly& b, int j) {
    int db = b.degree(j);
    std::vector<QPoly> bc = univ_coeffs(b, j);
    QPoly lb = bc[db];
    while (!a.is_zero() && a.degree(j) >= db) {
        int da = a.degree(j);
        std::vector<QPoly> ac = univ_coeffs(a, j);
        QPoly la = ac[da];
        QPoly::Exps e(j, 0);
        e[j - 1] = da - db;
        a = primitive_q(a * lb - b * la * QPoly::monomial(1, e));
        if (a.degree(j) >= da && !a.is_zero())
            throw std::logic_error("pseudo_rem failed to decrease degree");
    }
    return a;
}

}  // namespace

QPoly QPoly::gcd(const QPoly& a, const QPoly& b) {
    if (a.is_zero() && b.is_zero()) return QPoly();
    if (a.is_zero()) return b.scaled(b.leading_coeff());
    if (b.is_zero()) return a.scaled(a.leading_coeff());
    if (a.is_constant() || b.is_constant()) return QPoly(mpq_class(1));

    int j = std::max(main_var(a), main_var(b));
    int da = a.degree(j), db = b.degree(j);
    if (da == 0 || db == 0) {
        // j occurs in only one of them: gcd has no t_j; recurse on coefficients
        const QPoly& withj = (da > 0) ? a : b;
        const QPoly& other = (da > 0) ? b : a;
        QPoly c = content_wrt(univ_coeffs(withj, j));
        QPoly g = gcd(c, other);
        return g.scaled(g.leading_coeff());
    }

    // primitive PRS in variable j
    QPoly ca = content_wrt(univ_coeffs(a, j));
    QPoly cb = content_wrt(univ_coeffs(b, j));
    QPoly cg = gcd(ca, cb);

    QPoly pa, pb;
    if (!a.try_divide(ca, pa) || !b.try_divide(cb, pb))
        throw std::logic_error("content division failed");
    pa = primitive_q(pa);
    pb = primitive_q(pb);
    if (pa.degree(j) < pb.degree(j)) std::swap(pa, pb);
    while (true) {
        QPoly r = pseudo_rem(pa, pb, j);
        if (r.is_zero()) break;
        if (r.degree(j) == 0 || main_var(r) < j) {
            // nontrivial constant (in t_j) remainder: primitive gcd is 1 in t_j
            pb = QPoly(mpq_class(1));
            break;
        }
        QPoly cr = content_wrt(univ_coeffs(r, j));
        QPoly pr;
        if (!r.try_divide(cr, pr)) throw std::logic_error("content division failed");
        pa = pb;
        pb = primitive_q(pr);
    }
    QPoly cpb = content_wrt(univ_coeffs(pb, j));
    QPoly prim;
    if (!pb.try_divide(cpb, prim)) throw std::logic_error("content division failed");
    QPoly g = cg * prim;
    return g.scaled(g.leading_coeff());
}

std::string QPoly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // highest term first
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        mpq_class cc = c;
        if (first) {
            if (cc < 0) {
                os << "-";
                cc = -cc;
            }
        } else {
            os << (cc < 0 ? " - " : " + ");
            if (cc < 0) cc = -cc;
        }
        first = false;
        bool any_var = false;
        for (int x : e)
            if (x > 0) any_var = true;
        std::ostringstream vars;
        bool fv = true;
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (!fv) vars << "*";
            fv = false;
            vars << "t" << (i + 1);
            if (e[i] > 1) vars << "^" << e[i];
        }
        if (!any_var) {
            os << cc;
        } else if (cc == 1) {
            os << vars.str();
        } else {
            os << cc << "*" << vars.str();
        }
    }
    return os.str();
}

}  // namespace ddh
