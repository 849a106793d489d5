//! Embeddings of the parts into the rational projective line, the right
//! action of rational 2x2 determinant-one matrices on them, the symplectic
//! weights attached to arrows, and the per-part rescaling cocycles of the
//! action, computed both by the closed-form case analysis and by an
//! independent normal-form construction.

use num::{One, Zero};
use thiserror::Error;

use crate::quiver::{ArrowId, PartId, QuiverData};
use crate::scalars::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProjectiveError {
    #[error("embedding must be injective: parts {0} and {1} share a point")]
    NotInjective(usize, usize),
    #[error("embedding must assign a point to each of the {expected} parts, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("group element must have determinant one")]
    NotUnimodular,
    #[error("presentation inconsistent with the embedding: {0}")]
    PresentationMismatch(String),
}

/// A point of the rational projective line, normalised: either a finite
/// rational value `[p : 1]` or the point at infinity `[1 : 0]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProjPoint {
    Finite(Rational),
    Infinity,
}

impl ProjPoint {
    pub fn finite(x: Rational) -> Self {
        ProjPoint::Finite(x)
    }

    /// Normalise homogeneous coordinates `[p : q]`; `(0, 0)` is not a
    /// projective point.
    pub fn from_homogeneous(p: Rational, q: Rational) -> Option<Self> {
        if q.is_zero() {
            if p.is_zero() {
                None
            } else {
                Some(ProjPoint::Infinity)
            }
        } else {
            Some(ProjPoint::Finite(p / q))
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ProjPoint::Infinity)
    }

    pub fn as_finite(&self) -> Option<&Rational> {
        match self {
            ProjPoint::Finite(x) => Some(x),
            ProjPoint::Infinity => None,
        }
    }
}

impl std::fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ProjPoint::Finite(x) => write!(f, "{x}"),
            ProjPoint::Infinity => write!(f, "inf"),
        }
    }
}

/// A 2x2 rational matrix `(a b; c d)` with `ad - bc = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupElement {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
}

impl GroupElement {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Result<Self, ProjectiveError> {
        let det = &a * &d - &b * &c;
        if !det.is_one() {
            return Err(ProjectiveError::NotUnimodular);
        }
        Ok(GroupElement { a, b, c, d })
    }

    pub fn identity() -> Self {
        GroupElement {
            a: Rational::one(),
            b: Rational::zero(),
            c: Rational::zero(),
            d: Rational::one(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_one()
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &GroupElement) -> GroupElement {
        GroupElement {
            a: &self.a * &other.a + &self.b * &other.c,
            b: &self.a * &other.b + &self.b * &other.d,
            c: &self.c * &other.a + &self.d * &other.c,
            d: &self.c * &other.b + &self.d * &other.d,
        }
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            a: self.d.clone(),
            b: -self.b.clone(),
            c: -self.c.clone(),
            d: self.a.clone(),
        }
    }
}

/// The right action on a projective point.
///
/// Writing the point as `[p : q] = [-beta : alpha]`, the group element
/// `(a b; c d)` sends it to `[-(b alpha + d beta) : a alpha + c beta]`, so
/// the point at infinity goes to `[-d : c]`, and a finite point `x` goes
/// to `(d x - b)/(a - c x)`, or to infinity when `a = c x`. Determinant
/// one guarantees the image is always defined.
pub fn act_on_point(g: &GroupElement, p: &ProjPoint) -> ProjPoint {
    match p {
        ProjPoint::Infinity => {
            // [p : q] = [1 : 0], so the image is [d : -c]
            ProjPoint::from_homogeneous(g.d.clone(), -g.c.clone()).expect("det one")
        }
        ProjPoint::Finite(x) => {
            // [p : q] = [x : 1], so the image is [d x - b : a - c x]
            let num = &g.d * x - &g.b;
            let den = &g.a - &(&g.c * x);
            ProjPoint::from_homogeneous(num, den).expect("det one")
        }
    }
}

/// An injective map from the parts of a quiver to the projective line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    points: Vec<ProjPoint>,
}

impl Embedding {
    pub fn new(points: Vec<ProjPoint>) -> Result<Self, ProjectiveError> {
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                if points[i] == points[j] {
                    return Err(ProjectiveError::NotInjective(i, j));
                }
            }
        }
        Ok(Embedding { points })
    }

    pub fn for_quiver(q: &QuiverData, points: Vec<ProjPoint>) -> Result<Self, ProjectiveError> {
        if points.len() != q.num_parts() {
            return Err(ProjectiveError::WrongLength {
                expected: q.num_parts(),
                got: points.len(),
            });
        }
        Self::new(points)
    }

    pub fn num_parts(&self) -> usize {
        self.points.len()
    }

    pub fn point(&self, p: PartId) -> &ProjPoint {
        &self.points[p.0]
    }

    /// The part sitting at infinity, if any.
    pub fn infinite_part(&self) -> Option<PartId> {
        self.points.iter().position(ProjPoint::is_infinite).map(PartId)
    }

    /// The right action applied pointwise; injectivity is preserved.
    pub fn act(&self, g: &GroupElement) -> Embedding {
        Embedding {
            points: self.points.iter().map(|p| act_on_point(g, p)).collect(),
        }
    }
}

/// Symplectic weight of an arrow: `1/(a_t - a_s)` when both endpoint
/// parts are finite (t the target part, s the source part), `1` when the
/// source part sits at infinity, `-1` when the target part does. The
/// weight is antisymmetric under the opposite-arrow involution.
pub fn epsilon(q: &QuiverData, emb: &Embedding, arrow: ArrowId) -> Rational {
    let s = emb.point(q.part_of(q.source(arrow)));
    let t = emb.point(q.part_of(q.target(arrow)));
    match (t, s) {
        (ProjPoint::Finite(at), ProjPoint::Finite(as_)) => {
            let diff = at - as_;
            debug_assert!(!diff.is_zero(), "embedding is injective");
            Rational::one() / diff
        }
        (_, ProjPoint::Infinity) => Rational::one(),
        (ProjPoint::Infinity, _) => -Rational::one(),
    }
}

/// Which branch of the case analysis computed a cocycle value; used by the
/// fault-injection hook to perturb exactly one branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EtaBranch {
    /// No part at infinity, before or after the action.
    GenericGeneric,
    /// No part at infinity before, one part sent there.
    GenericToDegenerate,
    /// A part at infinity before, none after.
    DegenerateToGeneric,
    /// Part at infinity fixed (lower-left entry zero).
    DegenerateFixed,
    /// Parts at infinity swapped (infinity moves away, a finite part
    /// arrives there).
    DegenerateSwap,
}

/// The per-part rescaling factor of the action, by the exhaustive case
/// analysis. Returns the value together with the branch that produced it.
///
/// With `g = (a b; c d)` and `x_i` the finite value of part `i`:
/// - no part at infinity, `a != c x_j` for all `j`: `1/(a - c x_i)`;
/// - no part at infinity, `a = c x_j`: part `j` gets `1/(b - d x_j)`,
///   the rest `1/(a - c x_i)`;
/// - a part at infinity and `c = 0`: that part gets `a`, the rest `d`;
/// - a part at infinity, `c != 0`, `a = c x_j`: infinity gets `1/c`,
///   part `j` gets `1/(b - d x_j)`, the rest `1/(a - c x_i)`;
/// - a part at infinity, `c != 0`, no such `j`: infinity gets `1/c`, the
///   rest `1/(a - c x_i)`.
pub fn eta_with_branch(g: &GroupElement, emb: &Embedding, part: PartId) -> (Rational, EtaBranch) {
    let inf_part = emb.infinite_part();
    // the finite part sent to infinity, if any
    let swapped = (0..emb.num_parts()).map(PartId).find(|&p| {
        emb.point(p)
            .as_finite()
            .map(|x| g.a == &g.c * x)
            .unwrap_or(false)
    });

    let generic = |p: PartId| -> Rational {
        let x = emb.point(p).as_finite().expect("finite part");
        Rational::one() / (&g.a - &(&g.c * x))
    };
    let exceptional = |p: PartId| -> Rational {
        let x = emb.point(p).as_finite().expect("finite part");
        Rational::one() / (&g.b - &(&g.d * x))
    };

    match inf_part {
        None => match swapped {
            None => (generic(part), EtaBranch::GenericGeneric),
            Some(j) => {
                let v = if part == j {
                    exceptional(part)
                } else {
                    generic(part)
                };
                (v, EtaBranch::GenericToDegenerate)
            }
        },
        Some(infp) => {
            if g.c.is_zero() {
                let v = if part == infp {
                    g.a.clone()
                } else {
                    g.d.clone()
                };
                (v, EtaBranch::DegenerateFixed)
            } else if let Some(j) = swapped {
                let v = if part == infp {
                    Rational::one() / &g.c
                } else if part == j {
                    exceptional(part)
                } else {
                    generic(part)
                };
                (v, EtaBranch::DegenerateSwap)
            } else {
                let v = if part == infp {
                    Rational::one() / &g.c
                } else {
                    generic(part)
                };
                (v, EtaBranch::DegenerateToGeneric)
            }
        }
    }
}

/// The per-part rescaling factor of the action (case-analysis value).
pub fn eta(g: &GroupElement, emb: &Embedding, part: PartId) -> Rational {
    eta_with_branch(g, emb, part).0
}

/// Per-node eigenvalue pairs presenting the embedding: node `i` carries
/// `(alpha_i, beta_i) != (0, 0)` with `[-beta_i : alpha_i]` equal to the
/// point of its part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalPresentation {
    pairs: Vec<(Rational, Rational)>,
    dims: Vec<usize>,
}

impl DiagonalPresentation {
    pub fn new(
        q: &QuiverData,
        emb: &Embedding,
        pairs: Vec<(Rational, Rational)>,
    ) -> Result<Self, ProjectiveError> {
        if pairs.len() != q.num_nodes() {
            return Err(ProjectiveError::PresentationMismatch(format!(
                "expected {} eigenvalue pairs, got {}",
                q.num_nodes(),
                pairs.len()
            )));
        }
        for n in q.nodes() {
            let (alpha, beta) = &pairs[n.0];
            let point = ProjPoint::from_homogeneous(-beta.clone(), alpha.clone()).ok_or_else(
                || {
                    ProjectiveError::PresentationMismatch(format!(
                        "node {} has alpha = beta = 0",
                        q.label(n)
                    ))
                },
            )?;
            if &point != emb.point(q.part_of(n)) {
                return Err(ProjectiveError::PresentationMismatch(format!(
                    "node {} presents {} but its part embeds at {}",
                    q.label(n),
                    point,
                    emb.point(q.part_of(n))
                )));
            }
        }
        Ok(DiagonalPresentation {
            pairs,
            dims: q.nodes().map(|n| q.dim(n)).collect(),
        })
    }

    /// Canonical presentation: `(1, -x)` on finite parts, `(0, 1)` at
    /// infinity.
    pub fn canonical(q: &QuiverData, emb: &Embedding) -> Self {
        let pairs = q
            .nodes()
            .map(|n| match emb.point(q.part_of(n)) {
                ProjPoint::Finite(x) => (Rational::one(), -x.clone()),
                ProjPoint::Infinity => (Rational::zero(), Rational::one()),
            })
            .collect();
        DiagonalPresentation {
            pairs,
            dims: q.nodes().map(|n| q.dim(n)).collect(),
        }
    }

    pub fn pair(&self, node: usize) -> &(Rational, Rational) {
        &self.pairs[node]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
}

/// Independent computation of the rescaling factors via normal forms.
///
/// Builds the normalisation factor of each node before and after the
/// action (reciprocal of `beta` on the part at infinity, reciprocal of
/// `alpha` elsewhere), transforms the eigenvalue pairs by
/// `alpha' = a alpha + c beta`, `beta' = b alpha + d beta`, and returns
/// the per-part diagonal of new-normalisation times old-inverse. Must
/// agree with [`eta`] on every part.
pub fn eta_via_normalisation(
    g: &GroupElement,
    q: &QuiverData,
    emb: &Embedding,
    pres: &DiagonalPresentation,
) -> Result<Vec<Rational>, ProjectiveError> {
    // validate consistency with the embedding
    let pres = DiagonalPresentation::new(q, emb, pres.pairs.clone())?;

    let norm_factor = |alpha: &Rational, beta: &Rational| -> Rational {
        if alpha.is_zero() {
            Rational::one() / beta
        } else {
            Rational::one() / alpha
        }
    };

    let mut per_part: Vec<Option<Rational>> = vec![None; q.num_parts()];
    for n in q.nodes() {
        let (alpha, beta) = pres.pair(n.0);
        let n_before = norm_factor(alpha, beta);
        let alpha_after = &g.a * alpha + &g.c * beta;
        let beta_after = &g.b * alpha + &g.d * beta;
        debug_assert!(
            !(alpha_after.is_zero() && beta_after.is_zero()),
            "unimodular action preserves nonzero pairs"
        );
        let n_after = norm_factor(&alpha_after, &beta_after);
        let e = n_after / n_before;
        let slot = &mut per_part[q.part_of(n).0];
        match slot {
            None => *slot = Some(e),
            Some(prev) => {
                if *prev != e {
                    return Err(ProjectiveError::PresentationMismatch(format!(
                        "nodes of part {} normalise inconsistently",
                        q.part_of(n).0
                    )));
                }
            }
        }
    }
    Ok(per_part
        .into_iter()
        .map(|v| v.expect("every part has a node"))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{rat, rat_int};
    use std::collections::BTreeMap;

    fn g(a: i64, b: i64, c: i64, d: i64) -> GroupElement {
        GroupElement::new(rat_int(a), rat_int(b), rat_int(c), rat_int(d)).unwrap()
    }

    fn g_rat(a: Rational, b: Rational, c: Rational, d: Rational) -> GroupElement {
        GroupElement::new(a, b, c, d).unwrap()
    }

    fn fin(x: i64) -> ProjPoint {
        ProjPoint::Finite(rat_int(x))
    }

    fn two_part_quiver(dims: usize) -> QuiverData {
        let parts = vec![vec!["inf".to_string()], vec!["1".to_string()]];
        let dmap: BTreeMap<String, usize> =
            parts.iter().flatten().map(|l| (l.clone(), dims)).collect();
        QuiverData::k_partite(&parts, &dmap).unwrap()
    }

    #[test]
    fn action_examples() {
        let id = GroupElement::identity();
        assert_eq!(act_on_point(&id, &fin(5)), fin(5));
        assert_eq!(act_on_point(&id, &ProjPoint::Infinity), ProjPoint::Infinity);

        // (0 1; -1 0) sends 0 to infinity: alpha = 1, beta = 0 in the
        // homogeneous formula
        let w = g(0, 1, -1, 0);
        assert_eq!(act_on_point(&w, &fin(0)), ProjPoint::Infinity);

        // any element with c != 0 sends infinity to -d/c
        let h = g(2, 1, 1, 1);
        assert_eq!(
            act_on_point(&h, &ProjPoint::Infinity),
            ProjPoint::Finite(rat(-1, 1))
        );
    }

    #[test]
    fn action_composition_is_right_action() {
        let g1 = g(1, 2, 0, 1);
        let g2 = g(3, 1, 2, 1);
        let pts = [fin(0), fin(7), ProjPoint::Infinity, fin(-3)];
        for p in &pts {
            let lhs = act_on_point(&g2, &act_on_point(&g1, p));
            let rhs = act_on_point(&g1.mul(&g2), p);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn epsilon_conventions() {
        // star: part 0 = [inf], part 1 = [1]; nodes inf, 1
        let q = two_part_quiver(1);
        let emb = Embedding::for_quiver(&q, vec![ProjPoint::Infinity, fin(4)]).unwrap();
        let ninf = q.node_by_label("inf").unwrap();
        let n1 = q.node_by_label("1").unwrap();
        let from_inf = q.arrow_between(ninf, n1).unwrap();
        let into_inf = q.arrow_between(n1, ninf).unwrap();
        assert_eq!(epsilon(&q, &emb, from_inf), rat_int(1));
        assert_eq!(epsilon(&q, &emb, into_inf), rat_int(-1));

        // finite-finite: arrow from the node at 5 into the node at 2 has
        // weight 1/(2-5) = -1/3
        let parts = vec![vec!["a".to_string()], vec!["b".to_string()]];
        let dmap: BTreeMap<String, usize> =
            parts.iter().flatten().map(|l| (l.clone(), 1)).collect();
        let q2 = QuiverData::k_partite(&parts, &dmap).unwrap();
        let emb2 = Embedding::for_quiver(&q2, vec![fin(2), fin(5)]).unwrap();
        let na = q2.node_by_label("a").unwrap();
        let nb = q2.node_by_label("b").unwrap();
        let b_to_a = q2.arrow_between(nb, na).unwrap();
        assert_eq!(epsilon(&q2, &emb2, b_to_a), rat(1, -3));
    }

    #[test]
    fn epsilon_antisymmetry() {
        let parts = vec![
            vec!["inf".to_string()],
            vec!["x".to_string()],
            vec!["y".to_string()],
        ];
        let dmap: BTreeMap<String, usize> =
            parts.iter().flatten().map(|l| (l.clone(), 1)).collect();
        let q = QuiverData::k_partite(&parts, &dmap).unwrap();
        let emb = Embedding::for_quiver(&q, vec![ProjPoint::Infinity, fin(2), fin(-1)]).unwrap();
        for a in q.arrows() {
            let e = epsilon(&q, &emb, a);
            let eo = epsilon(&q, &emb, q.opposite(a));
            assert!((e + eo).is_zero());
        }
    }

    #[test]
    fn eta_identity_is_one() {
        let q = two_part_quiver(1);
        let emb = Embedding::for_quiver(&q, vec![ProjPoint::Infinity, fin(3)]).unwrap();
        let id = GroupElement::identity();
        for p in 0..q.num_parts() {
            assert_eq!(eta(&id, &emb, PartId(p)), rat_int(1));
        }
    }

    #[test]
    fn eta_diagonal_on_degenerate() {
        // part at infinity, c = 0, g = (2 0; 0 1/2): infinity scales by 2,
        // finite parts by 1/2
        let q = two_part_quiver(1);
        let emb = Embedding::for_quiver(&q, vec![ProjPoint::Infinity, fin(3)]).unwrap();
        let gd = g_rat(rat_int(2), rat_int(0), rat_int(0), rat(1, 2));
        let infp = emb.infinite_part().unwrap();
        assert_eq!(eta(&gd, &emb, infp), rat_int(2));
        assert_eq!(eta(&gd, &emb, PartId(1)), rat(1, 2));
    }

    #[test]
    fn eta_generic_case_value() {
        // all parts finite, g = (1 0; 1 1), part at 3: 1/(1 - 3) = -1/2
        let parts = vec![vec!["a".to_string()], vec!["b".to_string()]];
        let dmap: BTreeMap<String, usize> =
            parts.iter().flatten().map(|l| (l.clone(), 1)).collect();
        let q = QuiverData::k_partite(&parts, &dmap).unwrap();
        let emb = Embedding::for_quiver(&q, vec![fin(3), fin(5)]).unwrap();
        let gl = g(1, 0, 1, 1);
        assert_eq!(eta(&gl, &emb, PartId(0)), rat(-1, 2));
    }

    #[test]
    fn eta_swap_case_via_normalisation() {
        // embedding {inf, 0}, g = (0 1; -1 0): infinity and 0 swap;
        // infinity scales by 1/c = -1, the node at 0 by 1/(b - d*0) = 1
        let q = two_part_quiver(1);
        let emb = Embedding::for_quiver(&q, vec![ProjPoint::Infinity, fin(0)]).unwrap();
        let w = g(0, 1, -1, 0);
        assert_eq!(eta(&w, &emb, PartId(0)), rat_int(-1));
        assert_eq!(eta(&w, &emb, PartId(1)), rat_int(1));

        let pres = DiagonalPresentation::canonical(&q, &emb);
        let by_norm = eta_via_normalisation(&w, &q, &emb, &pres).unwrap();
        assert_eq!(by_norm, vec![rat_int(-1), rat_int(1)]);
    }

    #[test]
    fn eta_via_normalisation_identity() {
        let q = two_part_quiver(2);
        let emb = Embedding::for_quiver(&q, vec![ProjPoint::Infinity, fin(2)]).unwrap();
        let pres = DiagonalPresentation::canonical(&q, &emb);
        let vals = eta_via_normalisation(&GroupElement::identity(), &q, &emb, &pres).unwrap();
        assert!(vals.iter().all(One::is_one));
    }

    #[test]
    fn mismatched_presentation_rejected() {
        let q = two_part_quiver(1);
        let emb = Embedding::for_quiver(&q, vec![ProjPoint::Infinity, fin(2)]).unwrap();
        // wrong point for node "1"
        let pairs = vec![(rat_int(0), rat_int(1)), (rat_int(1), rat_int(5))];
        assert!(matches!(
            DiagonalPresentation::new(&q, &emb, pairs),
            Err(ProjectiveError::PresentationMismatch(_))
        ));
    }

    #[test]
    fn injectivity_enforced() {
        assert!(matches!(
            Embedding::new(vec![fin(1), fin(1)]),
            Err(ProjectiveError::NotInjective(0, 1))
        ));
    }
}
