#pragma once

// Half-diagrams of the periodic Temperley-Lieb algebra on L sites of the cut
// annulus.  Sites are numbered 0..L-1 left to right; the cutline sits in the
// gap between site L-1 and site 0.  An arch {u<v} carries a parity bit: 0 if
// it is drawn directly (covering gaps u..v-1), 1 if it passes through the cut
// (covering gaps v..L-1 and 0..u-1).  Legs run down to the inner boundary and
// carry cyclic labels 1..2m stored as a rotation class.

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace looplab {

template <class S>
struct LoopWeights {
    S n, n_tilde;
    bool special_line() const { return n == n_tilde; }
};

enum class Module { W, What0, Wle1 };

struct LinkState {
    int L = 0;
    std::vector<int> partner;        // paired site, or -1 for a leg
    std::vector<std::uint8_t> par;   // arch passes through the cut
    int label_offset = 0;            // leg-label rotation class, 0 <= q < m

    int legs() const {
        return static_cast<int>(std::count(partner.begin(), partner.end(), -1));
    }
    auto key() const { return std::tie(L, partner, par, label_offset); }
    bool operator==(const LinkState& o) const { return key() == o.key(); }
    bool operator!=(const LinkState& o) const { return key() != o.key(); }
    bool operator<(const LinkState& o) const { return key() < o.key(); }

    std::string encode() const {
        std::string s;
        for (int i = 0; i < L; ++i) {
            if (!s.empty()) s += ' ';
            if (partner[i] < 0)
                s += '|';
            else
                s += std::to_string(partner[i]) + (par[i] ? "~" : "");
        }
        if (legs() >= 4) s += " q" + std::to_string(label_offset);
        return s;
    }
};

template <class S>
using SparseVec = std::map<LinkState, S>;

// ---- basis enumeration -----------------------------------------------------

// Cyclic nearest matching of the marked "opener" sites to non-opener sites:
// every opener ends up matched (there is a surplus of non-openers), leftover
// non-openers become legs.  This enumerates each valid state exactly once.
inline LinkState state_from_openers(int L, const std::vector<char>& opener) {
    LinkState s;
    s.L = L;
    s.partner.assign(L, -1);
    s.par.assign(L, 0);
    std::vector<int> stack;
    std::vector<int> free_closers;
    for (int i = 0; i < L; ++i) {
        if (opener[i]) {
            stack.push_back(i);
        } else if (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            s.partner[u] = i;
            s.partner[i] = u;
        } else {
            free_closers.push_back(i);
        }
    }
    // remaining openers wrap through the cut, innermost first
    for (std::size_t t = 0; t < stack.size(); ++t) {
        int u = stack[stack.size() - 1 - t];
        int v = free_closers[t];
        s.partner[u] = v;
        s.partner[v] = u;
        s.par[u] = s.par[v] = 1;
    }
    return s;
}

inline long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

// states with 2*ell legs (label rotation class 0); dim = binomial(L, L/2-ell)
inline std::vector<LinkState> enumerate_basis(int L, int ell) {
    if (L <= 0 || L % 2 != 0) throw std::domain_error("enumerate_basis: L must be even");
    if (ell < 0 || ell > L / 2) throw std::domain_error("enumerate_basis: bad leg count");
    int nopen = L / 2 - ell;
    std::vector<LinkState> out;
    std::vector<char> sel(L, 0);
    std::vector<int> idx(nopen);
    for (int i = 0; i < nopen; ++i) idx[i] = i;
    while (true) {
        std::fill(sel.begin(), sel.end(), 0);
        for (int i : idx) sel[i] = 1;
        out.push_back(state_from_openers(L, sel));
        // next combination
        int i = nopen - 1;
        while (i >= 0 && idx[i] == L - nopen + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < nopen; ++j) idx[j] = idx[j - 1] + 1;
        if (nopen == 0) break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

// zero-leg reduced states: planar pairings with no cut decoration
inline std::vector<LinkState> enumerate_reduced_basis(int L) {
    std::vector<LinkState> out;
    for (const LinkState& s : enumerate_basis(L, 0)) {
        bool flat = true;
        for (auto p : s.par) flat = flat && (p == 0);
        if (flat) out.push_back(s);
    }
    return out;
}

// all leg-label rotation classes of the 2m-leg states (dim m * binomial)
inline std::vector<LinkState> enumerate_labeled_basis(int L, int m) {
    std::vector<LinkState> out;
    for (const LinkState& s : enumerate_basis(L, m))
        for (int q = 0; q < std::max(1, m); ++q) {
            LinkState t = s;
            t.label_offset = q;
            out.push_back(t);
        }
    std::sort(out.begin(), out.end());
    return out;
}

// ---- leg labels -------------------------------------------------------------

inline std::vector<int> leg_sites(const LinkState& s) {
    std::vector<int> v;
    for (int i = 0; i < s.L; ++i)
        if (s.partner[i] < 0) v.push_back(i);
    return v;
}

// label of the i-th leg (ascending site order): labels are a cyclic rotation
// of 1..2m, and site parity fixes label parity, so only even rotations occur
inline std::vector<int> leg_labels(const LinkState& s) {
    std::vector<int> sites = leg_sites(s);
    int twom = static_cast<int>(sites.size());
    std::vector<int> lab(twom);
    if (twom == 0) return lab;
    int r = sites[0] % 2;
    for (int i = 0; i < twom; ++i) lab[i] = (i + 2 * s.label_offset + r) % twom + 1;
    return lab;
}

inline int offset_from_labels(const std::vector<int>& sites, const std::vector<int>& labels) {
    int twom = static_cast<int>(sites.size());
    if (twom == 0) return 0;
    int r = sites[0] % 2;
    int q2 = ((labels[0] - 1 - r) % twom + twom) % twom;
    if (q2 % 2 != 0) throw std::domain_error("offset_from_labels: label parity mismatch");
    return q2 / 2;
}

// ---- cut-crossing geometry ---------------------------------------------------

// does the arch {u<v} with parity p cover the gap g (between sites g and g+1)?
inline bool arch_covers_gap(int u, int v, int p, int g) {
    bool direct = (g >= u && g < v);
    return p == 0 ? direct : !direct;
}

// ---- generator action --------------------------------------------------------

namespace detail {

struct GenResult {
    LinkState state;
    int loop = 0;          // 0 none, 1 contractible, 2 non-contractible
    int contraction = 0;   // +-1 when two legs were contracted (module Wle1)
    bool zero = false;     // leg contraction in a pure W_ell module
};

// cap sites for e_j (1-based j; j = L is the wrap generator)
inline GenResult apply_ej_core(const LinkState& a, int j, Module module) {
    const int L = a.L;
    if (j < 1 || j > L) throw std::domain_error("apply_ej: bad generator index");
    const int u = j - 1, v = j % L;
    const int cp = (j == L) ? 1 : 0;
    GenResult res;
    LinkState& s = res.state;
    s = a;

    const bool uleg = a.partner[u] < 0, vleg = a.partner[v] < 0;
    if (!uleg && a.partner[u] == v) {
        // closed loop: contractible iff the arch and the cap cancel their
        // cut crossings
        res.loop = (a.par[u] == cp) ? 1 : 2;
        s.par[u] = s.par[v] = static_cast<std::uint8_t>(cp);
    } else if (!uleg && !vleg) {
        int x = a.partner[u], y = a.partner[v];
        int q = (a.par[u] ^ a.par[v] ^ cp) & 1;
        s.partner[x] = y;
        s.partner[y] = x;
        s.par[x] = s.par[y] = static_cast<std::uint8_t>(q);
        s.partner[u] = v;
        s.partner[v] = u;
        s.par[u] = s.par[v] = static_cast<std::uint8_t>(cp);
    } else if (uleg != vleg) {
        // a leg moves across the neighbouring arch, keeping its label
        int legsite = uleg ? u : v, archsite = uleg ? v : u;
        int x = a.partner[archsite];
        std::vector<int> sites = leg_sites(a), labels = leg_labels(a);
        std::vector<std::pair<int, int>> sl;
        for (std::size_t i = 0; i < sites.size(); ++i) {
            int site = (sites[i] == legsite) ? x : sites[i];
            sl.emplace_back(site, labels[i]);
        }
        std::sort(sl.begin(), sl.end());
        s.partner[x] = -1;
        s.par[x] = 0;
        s.partner[u] = v;
        s.partner[v] = u;
        s.par[u] = s.par[v] = static_cast<std::uint8_t>(cp);
        std::vector<int> ns, nl;
        for (auto& p : sl) {
            ns.push_back(p.first);
            nl.push_back(p.second);
        }
        s.label_offset = offset_from_labels(ns, nl);
    } else {
        // both cap sites carry legs
        if (module == Module::Wle1 && a.legs() == 2) {
            res.contraction = (u % 2 == 0) ? 1 : -1;  // epsilon_j = (-1)^(j+1)
            s.partner[u] = v;
            s.partner[v] = u;
            s.par[u] = s.par[v] = static_cast<std::uint8_t>(cp);
            s.label_offset = 0;
        } else {
            res.zero = true;
        }
    }
    if (module == Module::What0)
        for (auto& p : s.par) p = 0;
    return res;
}

}  // namespace detail

template <class S>
SparseVec<S> apply_generator(const LinkState& a, int j, const LoopWeights<S>& w,
                             Module module = Module::W) {
    if (module == Module::What0 && !w.special_line())
        throw std::domain_error("apply_generator: reduced module needs n = n_tilde");
    if (module == Module::Wle1 && a.legs() > 2)
        throw std::domain_error("apply_generator: mixed module holds 0- and 2-leg states");
    detail::GenResult r = detail::apply_ej_core(a, j, module);
    SparseVec<S> out;
    if (r.zero) return out;
    S coeff = S(1);
    if (r.loop == 1) coeff = w.n;
    if (r.loop == 2) coeff = w.n_tilde;
    if (r.contraction != 0) coeff = S(r.contraction);
    out[r.state] = coeff;
    return out;
}

template <class S>
SparseVec<S> apply_generator(const SparseVec<S>& vec, int j, const LoopWeights<S>& w,
                             Module module = Module::W) {
    SparseVec<S> out;
    for (const auto& [st, c] : vec)
        for (const auto& [t, d] : apply_generator(st, j, w, module)) {
            out[t] += c * d;
            if (out[t] == S(0)) out.erase(t);
        }
    return out;
}

// ---- translation and leg rotation ---------------------------------------------

inline LinkState apply_tau(const LinkState& a) {
    LinkState s;
    s.L = a.L;
    s.partner.assign(a.L, -1);
    s.par.assign(a.L, 0);
    for (int i = 0; i < a.L; ++i) {
        if (a.partner[i] < 0) continue;
        int u = i, v = a.partner[i];
        if (u > v) continue;
        // rotated arch crosses the cut iff the old one covered gap L-2
        int np = arch_covers_gap(u, v, a.par[u], a.L - 2) ? 1 : 0;
        int nu = (u + 1) % a.L, nv = (v + 1) % a.L;
        s.partner[nu] = nv;
        s.partner[nv] = nu;
        s.par[nu] = s.par[nv] = static_cast<std::uint8_t>(np);
    }
    // legs shift one site; their labels shift by one to keep label parity
    std::vector<int> sites = leg_sites(a), labels = leg_labels(a);
    int twom = static_cast<int>(sites.size());
    if (twom > 0) {
        std::vector<std::pair<int, int>> sl;
        for (int i = 0; i < twom; ++i)
            sl.emplace_back((sites[i] + 1) % a.L, labels[i] % twom + 1);
        std::sort(sl.begin(), sl.end());
        std::vector<int> ns, nl;
        for (auto& p : sl) {
            ns.push_back(p.first);
            nl.push_back(p.second);
        }
        s.label_offset = offset_from_labels(ns, nl);
    }
    return s;
}

inline LinkState apply_tau(const LinkState& a, Module module) {
    LinkState s = apply_tau(a);
    if (module == Module::What0)
        for (auto& p : s.par) p = 0;
    return s;
}

// In the mixed module the legs-to-arch contraction carries the sign (-1)^(j+1),
// which shifts under rotation; tau therefore acts with an extra -1 on the
// two-leg sector so that tau e_j tau^-1 = e_{j+1} keeps holding there.
inline int tau_sign(const LinkState& a, Module module) {
    return (module == Module::Wle1 && a.legs() == 2) ? -1 : 1;
}

template <class S>
SparseVec<S> apply_tau(const SparseVec<S>& v, Module module = Module::W) {
    SparseVec<S> out;
    for (const auto& [st, c] : v)
        out[apply_tau(st, module)] += c * S(tau_sign(st, module));
    return out;
}

inline LinkState leg_rotation_R(const LinkState& a) {
    int m = a.legs() / 2;
    if (m < 1) throw std::domain_error("leg_rotation_R: no legs");
    LinkState s = a;
    s.label_offset = (a.label_offset + 1) % m;
    return s;
}

// ---- bilinear forms -------------------------------------------------------------

namespace detail {

struct GluingTrace {
    int n_contractible = 0, n_noncontractible = 0;
    bool a_selfjoin = false, b_selfjoin = false;
    int a_par = 0, b_par = 0;       // cut crossings of the self-joining strands (mod 2)
    int a_minsite = 0, b_minsite = 0;
};

// trace the strands of the gluing g(a,b); arches contribute +-1 winding when
// traversed through the cut (from the western endpoint: -1, from the eastern: +1)
inline GluingTrace trace_gluing(const LinkState& a, const LinkState& b) {
    if (a.L != b.L) throw std::domain_error("trace_gluing: size mismatch");
    const int L = a.L;
    GluingTrace g;
    auto step = [L](const LinkState& s, int site, int& wind, int& par) {
        int t = s.partner[site];
        if (s.par[site]) {
            par ^= 1;
            wind += (site < t) ? -1 : +1;
        }
        return t;
    };
    std::vector<char> avis(L, 0), bvis(L, 0);
    // open strands start at legs
    for (int side = 0; side < 2; ++side) {
        const LinkState& start_state = side == 0 ? a : b;
        for (int s0 = 0; s0 < L; ++s0) {
            if (start_state.partner[s0] >= 0) continue;
            std::vector<char>& svis = side == 0 ? avis : bvis;
            if (svis[s0]) continue;
            svis[s0] = 1;
            int par = 0, wind = 0, site = s0;
            int cur = side;  // 0: next traversal on b, 1: next on a  (leg passes through)
            while (true) {
                const LinkState& nxt = (cur == 0) ? b : a;
                std::vector<char>& nvis = (cur == 0) ? bvis : avis;
                if (nxt.partner[site] < 0) {
                    nvis[site] = 1;
                    // strand ends on a leg of the other diagram: same side as start?
                    if (cur != side) {
                        if (side == 0) {
                            g.a_selfjoin = true;
                            g.a_par ^= (par & 1);
                            g.a_minsite = std::min(s0, site);
                        } else {
                            g.b_selfjoin = true;
                            g.b_par ^= (par & 1);
                            g.b_minsite = std::min(s0, site);
                        }
                    }
                    break;
                }
                nvis[site] = 1;
                site = step(nxt, site, wind, par);
                nvis[site] = 1;
                cur ^= 1;
            }
        }
    }
    // closed loops through the remaining arches
    for (int s0 = 0; s0 < L; ++s0) {
        if (avis[s0] || a.partner[s0] < 0) continue;
        int wind = 0, par = 0, site = s0, cur = 1;
        while (true) {
            const LinkState& nxt = (cur == 0) ? b : a;
            std::vector<char>& nvis = (cur == 0) ? bvis : avis;
            nvis[site] = 1;
            site = step(nxt, site, wind, par);
            nvis[site] = 1;
            cur ^= 1;
            if (site == s0 && cur == 1) break;
        }
        if (wind == 0)
            ++g.n_contractible;
        else
            ++g.n_noncontractible;
    }
    return g;
}

}  // namespace detail

template <class S>
S power(S x, int k) {
    S r(1);
    for (int i = 0; i < k; ++i) r = r * x;
    return r;
}

// bilinear form on W: zero whenever the gluing joins two legs of one state
template <class S>
S gram(const LinkState& a, const LinkState& b, const LoopWeights<S>& w) {
    detail::GluingTrace g = detail::trace_gluing(a, b);
    if (g.a_selfjoin || g.b_selfjoin) return S(0);
    return power(w.n, g.n_contractible) * power(w.n_tilde, g.n_noncontractible);
}

// bilinear form on W_{<=1}: self-joined legs contribute the sign
// sigma = (-1)^(p_ab + j_a + 1) with j_a the smaller 1-based leg site
template <class S>
S gram_mixed(const LinkState& a, const LinkState& b, const LoopWeights<S>& w) {
    if (a.legs() > 2 || b.legs() > 2)
        throw std::domain_error("gram_mixed: defined on 0- and 2-leg states");
    detail::GluingTrace g = detail::trace_gluing(a, b);
    int sgn = 1;
    if (g.a_selfjoin && (g.a_par + g.a_minsite) % 2 != 0) sgn = -sgn;
    if (g.b_selfjoin && (g.b_par + g.b_minsite) % 2 != 0) sgn = -sgn;
    return S(sgn) * power(w.n, g.n_contractible) * power(w.n_tilde, g.n_noncontractible);
}

template <class S>
S gram(const SparseVec<S>& x, const SparseVec<S>& y, const LoopWeights<S>& w) {
    S r(0);
    for (const auto& [a, ca] : x)
        for (const auto& [b, cb] : y) r += ca * cb * gram(a, b, w);
    return r;
}

template <class S>
S gram_mixed(const SparseVec<S>& x, const SparseVec<S>& y, const LoopWeights<S>& w) {
    S r(0);
    for (const auto& [a, ca] : x)
        for (const auto& [b, cb] : y) r += ca * cb * gram_mixed(a, b, w);
    return r;
}

// ---- the map phi: W_1 -> W_0 --------------------------------------------------

template <class S>
SparseVec<S> phi_map(const LinkState& a) {
    std::vector<int> sites = leg_sites(a);
    if (sites.size() != 2) throw std::domain_error("phi_map: state must have two legs");
    int j = sites[0], k = sites[1];
    LinkState even = a, odd = a;
    even.partner[j] = k;
    even.partner[k] = j;
    even.par[j] = even.par[k] = 0;
    even.label_offset = 0;
    odd = even;
    odd.par[j] = odd.par[k] = 1;
    S half = S(1) / S(2);
    S coeff = (j % 2 == 0) ? half : -half;  // (-1)^(j+1)/2 with 1-based j
    SparseVec<S> out;
    out[even] = coeff;
    out[odd] = -coeff;
    return out;
}

template <class S>
SparseVec<S> phi_map(const SparseVec<S>& vec) {
    SparseVec<S> out;
    for (const auto& [st, c] : vec)
        for (const auto& [t, d] : phi_map<S>(st)) {
            out[t] += c * d;
            if (out[t] == S(0)) out.erase(t);
        }
    return out;
}

// ---- decomposition W_0 = What_0 (+) Im phi  (n = n_tilde) ----------------------

// projector onto the parity-free subspace along Im phi: successively flips the
// outermost odd arch, each flip differing from the original by an element of
// Im phi; the net effect maps a state to its all-even version
inline LinkState project_reduced(const LinkState& a) {
    if (a.legs() != 0) throw std::domain_error("project_reduced: zero-leg states only");
    LinkState s = a;
    for (auto& p : s.par) p = 0;
    return s;
}

// the W_1 preimage: a = project_reduced(a) + phi(decompose_W0_legpart(a))
template <class S>
SparseVec<S> decompose_W0_legpart(const LinkState& a) {
    SparseVec<S> out;
    LinkState cur = a;
    while (true) {
        // odd arches are nested around the cut; the outermost one has the
        // largest west endpoint, and its legs are not enclosed by anything
        int j = -1, k = -1;
        for (int i = cur.L - 1; i >= 0 && j < 0; --i)
            if (cur.partner[i] > i && cur.par[i]) {
                j = i;
                k = cur.partner[i];
            }
        if (j < 0) break;
        LinkState legs = cur;
        legs.partner[j] = legs.partner[k] = -1;
        legs.par[j] = legs.par[k] = 0;
        S c = (j % 2 == 0) ? S(-2) : S(2);  // 2(-1)^j with 1-based j
        out[legs] += c;
        if (out[legs] == S(0)) out.erase(legs);
        cur.par[j] = cur.par[k] = 0;
    }
    return out;
}

// ---- dense operators over an arbitrary scalar ----------------------------------

struct BasisIndex {
    std::vector<LinkState> states;
    std::map<LinkState, int> index;
    explicit BasisIndex(std::vector<LinkState> v) : states(std::move(v)) {
        for (int i = 0; i < static_cast<int>(states.size()); ++i) index[states[i]] = i;
    }
    int size() const { return static_cast<int>(states.size()); }
};

template <class S>
struct DenseOp {
    int n = 0;
    std::vector<S> a;  // row-major
    explicit DenseOp(int n_) : n(n_), a(static_cast<std::size_t>(n_) * n_, S(0)) {}
    S& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
    const S& at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
    DenseOp operator*(const DenseOp& o) const {
        DenseOp r(n);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                const S& x = at(i, k);
                if (x == S(0)) continue;
                for (int j = 0; j < n; ++j) r.at(i, j) += x * o.at(k, j);
            }
        return r;
    }
    DenseOp operator+(const DenseOp& o) const {
        DenseOp r(n);
        for (std::size_t i = 0; i < a.size(); ++i) r.a[i] = a[i] + o.a[i];
        return r;
    }
    DenseOp operator-(const DenseOp& o) const {
        DenseOp r(n);
        for (std::size_t i = 0; i < a.size(); ++i) r.a[i] = a[i] - o.a[i];
        return r;
    }
    DenseOp scaled(const S& c) const {
        DenseOp r(n);
        for (std::size_t i = 0; i < a.size(); ++i) r.a[i] = c * a[i];
        return r;
    }
    bool operator==(const DenseOp& o) const { return a == o.a; }
    static DenseOp identity(int n_) {
        DenseOp r(n_);
        for (int i = 0; i < n_; ++i) r.at(i, i) = S(1);
        return r;
    }
};

template <class S, class Fn>
DenseOp<S> op_matrix(const BasisIndex& basis, Fn&& apply) {
    DenseOp<S> m(basis.size());
    for (int col = 0; col < basis.size(); ++col) {
        SparseVec<S> v = apply(basis.states[col]);
        for (const auto& [st, c] : v) {
            auto it = basis.index.find(st);
            if (it == basis.index.end()) throw std::domain_error("op_matrix: image leaves basis");
            m.at(it->second, col) += c;
        }
    }
    return m;
}

template <class S>
DenseOp<S> generator_matrix(const BasisIndex& basis, int j, const LoopWeights<S>& w,
                            Module module = Module::W) {
    return op_matrix<S>(basis,
                        [&](const LinkState& s) { return apply_generator(s, j, w, module); });
}

template <class S>
DenseOp<S> tau_matrix(const BasisIndex& basis, Module module = Module::W) {
    return op_matrix<S>(basis, [&](const LinkState& s) {
        SparseVec<S> v;
        v[apply_tau(s, module)] = S(tau_sign(s, module));
        return v;
    });
}

template <class S>
DenseOp<S> hamiltonian_matrix(const BasisIndex& basis, const LoopWeights<S>& w,
                              Module module = Module::W) {
    DenseOp<S> h(basis.size());
    int L = basis.states.empty() ? 0 : basis.states[0].L;
    for (int j = 1; j <= L; ++j) h = h - generator_matrix(basis, j, w, module);
    return h;
}

// basis of the mixed module: all 0-leg states followed by all 2-leg states
inline std::vector<LinkState> enumerate_mixed_basis(int L) {
    std::vector<LinkState> v = enumerate_basis(L, 0);
    std::vector<LinkState> w1 = enumerate_basis(L, 1);
    v.insert(v.end(), w1.begin(), w1.end());
    return v;
}

}  // namespace looplab
