#pragma once

#include "torus/envelope.hpp"
#include "torus/space_tag.hpp"
#include "torus/torus_operator.hpp"
#include "torus/trig_series.hpp"

#include <optional>
#include <string>
#include <vector>

namespace torus {

/// The linear section {u : |u_k| <= C w(k) for all k} generated by w.
/// Limit leaves in the generator denote the corresponding limit spaces.
struct Section {
    EnvelopeExpr generator;

    std::string str() const { return generator.str(); }
    friend bool operator==(const Section&, const Section&) = default;
};

/// H^m -> atom(-m/2), l1(|k_i|!) -> c_i = -1, l1*(|k_i|!) -> c_i = 1, the rest
/// to limit leaves.
Section section_from_tag(const SpaceTag& tag);

/// e1 / e2 bounded on Z^2. Exact.
bool atom_leq(const AtomEnvelope& e1, const AtomEnvelope& e2);
/// e1(k) <= e2(k) at every k: every component of e1 is <= that of e2.
bool atom_pointwise_leq(const AtomEnvelope& e1, const AtomEnvelope& e2);

/// MAX / MIN nodes, flattened, with children sorted by their text form and
/// leaves dropped only when another leaf dominates them everywhere, so that
/// pointwise values never change.
Section section_sup(const Section& s1, const Section& s2);
Section section_inf(const Section& s1, const Section& s2);

enum class Comparison { Yes, No, HeuristicYes, HeuristicNo, Unknown };

std::string to_string(Comparison c);

/// s1 contained in s2. Decided symbolically when the tree shapes allow it;
/// otherwise the generator ratio is probed on growing boxes (HEURISTIC), and
/// Unknown is returned when limit leaves block probing.
Comparison section_leq(const Section& s1, const Section& s2, long probe_radius = 32);

struct MoreRegularResult {
    bool yes = false;                     ///< |u_k| <= C |v_k| on the box
    Rational c_sq;                        ///< exact max |u_k / v_k|^2 over the box
    Rational c;                           ///< rational upper bound for the minimal C
    bool non_stabilizing = false;         ///< the inner half box needs a smaller C
    std::optional<LatticeIndex> witness;  ///< v_k = 0 != u_k
};

/// Box-restricted test of u <= v. Both series must be complete on the box.
MoreRegularResult more_regular(const TrigSeries& u, const TrigSeries& v, const Box& box);

struct DualMembership {
    bool summable_trend = false;
    double tail_slope = 0;               ///< log-log slope of the per-shell increments
    std::vector<double> partial_sums;    ///< sum over max(|k1|,|k2|) <= s of |u_k| w(k)
};

/// HEURISTIC: does sum |u_k| w(k) stay bounded as the box grows? The generator
/// must be free of limit leaves; u must be complete on the box.
DualMembership dual_membership(const TrigSeries& u, const Section& s, const Box& box);

/// Image of a section under L. Atom leaves map to
/// (a + d/2 + (|c1| s1 + |c2| s2)/2, b1, b2, c1, c2), d = max deg P_n; this
/// bounds sum_n |P_n(k-n)| w(k-n) up to a constant.
Section operator_image(const TorusOperator& l, const Section& s);

/// log of sum_n |P_n(k-n)| w(k-n), the pointwise image generator.
double derived_image_log(const TorusOperator& l, const EnvelopeExpr& w, const LatticeIndex& k);

enum class Provenance { Exact, PaperClaim, Empirical };

std::string to_string(Provenance p);

struct SolutionSection {
    Section section;
    Provenance provenance = Provenance::Exact;
    std::optional<SpaceTag> containment;  ///< asserted enclosing space
    std::string note;
};

/// Largest section of solutions of L u = G. Constant coefficients divide by the
/// certified lower bound of |P_0|; the Mizohata operator gets the factorial
/// class; other operators are sampled by solving on a box (EMPIRICAL).
/// Raises ContractViolation when the non-degeneracy condition fails (except for Mizohata,
/// which is handled by its own recurrence).
SolutionSection solution_section(const TorusOperator& l, const Section& g);

}  // namespace torus
