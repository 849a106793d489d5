//! Hamiltonian reduction at scalar orbits: ideal generators, exact
//! degree-truncated two-sided ideal membership with certificates,
//! invariant testing, and the constant-shift solver for reduced
//! pullbacks.
//!
//! Membership is decided by exact linear algebra over the scalar field:
//! the query is expanded over the span of `m1 * g * m2` with monomial
//! cofactors and total degree at most the bound. A returned certificate
//! re-multiplies to the query on the nose; a negative answer only says
//! the span up to the bound does not contain it.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::context::QuiverContext;
use crate::moment::{classical_comoment, quantum_comoment_local, LieBasisElement};
use crate::par;
use crate::projective::GroupElement;
use crate::quiver::NodeId;
use crate::scalars::Scalar;
use crate::symmetry::{classical_pullback, weyl_pullback};
use crate::weyl::{
    poisson_bracket, rees_commutator, rees_product, weyl_commutator, weyl_product, Generator,
    PolyElement, ReesElement, WeylElement, Word,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("degree bound {bound} is below the degree {degree} of the query")]
    DegreeBoundTooSmall { bound: usize, degree: usize },
    #[error("orbit must assign a scalar to node {0}")]
    MissingOrbitScalar(String),
}

/// Which layer of the reduction is being worked in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Classical,
    Quantum,
    Rees,
}

/// A point orbit: one scalar per node, meaning the block-scalar value of
/// the moment level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitSpec {
    scalars: BTreeMap<NodeId, Scalar>,
}

impl OrbitSpec {
    pub fn new(scalars: BTreeMap<NodeId, Scalar>) -> Self {
        OrbitSpec { scalars }
    }

    /// The zero orbit on every node of the context's quiver.
    pub fn zero(ctx: &QuiverContext) -> Self {
        OrbitSpec {
            scalars: ctx.quiver().nodes().map(|n| (n, Scalar::zero())).collect(),
        }
    }

    pub fn scalar(&self, n: NodeId) -> Scalar {
        self.scalars.get(&n).cloned().unwrap_or_else(Scalar::zero)
    }
}

/// An element of whichever algebra the reduction kind works in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Element {
    Poly(PolyElement),
    Weyl(WeylElement),
    Rees(ReesElement),
}

impl Element {
    pub fn is_zero(&self) -> bool {
        match self {
            Element::Poly(x) => x.is_zero(),
            Element::Weyl(x) => x.is_zero(),
            Element::Rees(x) => x.is_zero(),
        }
    }

    fn kind(&self) -> Kind {
        match self {
            Element::Poly(_) => Kind::Classical,
            Element::Weyl(_) => Kind::Quantum,
            Element::Rees(_) => Kind::Rees,
        }
    }

    fn sub(&self, other: &Element) -> Element {
        match (self, other) {
            (Element::Poly(a), Element::Poly(b)) => Element::Poly(a.sub(b)),
            (Element::Weyl(a), Element::Weyl(b)) => Element::Weyl(a.sub(b)),
            (Element::Rees(a), Element::Rees(b)) => Element::Rees(a.sub(b)),
            _ => panic!("mixed reduction kinds"),
        }
    }

    fn scale(&self, c: &Scalar) -> Element {
        match self {
            Element::Poly(a) => Element::Poly(a.scale(c)),
            Element::Weyl(a) => Element::Weyl(a.scale(c)),
            Element::Rees(a) => Element::Rees(a.scale(c)),
        }
    }

    fn add(&self, other: &Element) -> Element {
        match (self, other) {
            (Element::Poly(a), Element::Poly(b)) => Element::Poly(a.add(b)),
            (Element::Weyl(a), Element::Weyl(b)) => Element::Weyl(a.add(b)),
            (Element::Rees(a), Element::Rees(b)) => Element::Rees(a.add(b)),
            _ => panic!("mixed reduction kinds"),
        }
    }

    fn mul(&self, ctx: &QuiverContext, other: &Element) -> Element {
        match (self, other) {
            (Element::Poly(a), Element::Poly(b)) => Element::Poly(a.mul(b)),
            (Element::Weyl(a), Element::Weyl(b)) => Element::Weyl(weyl_product(ctx, a, b)),
            (Element::Rees(a), Element::Rees(b)) => Element::Rees(rees_product(ctx, a, b)),
            _ => panic!("mixed reduction kinds"),
        }
    }

    /// Total degree: word length for the polynomial and Weyl layers,
    /// grade for the graded layer.
    pub fn degree(&self) -> usize {
        match self {
            Element::Poly(x) => x.order(),
            Element::Weyl(x) => x.order(),
            Element::Rees(x) => x.max_grade(),
        }
    }

    /// Decompose into basis keys (grade, word) with coefficients.
    fn basis_terms(&self) -> Vec<((usize, Word), Scalar)> {
        match self {
            Element::Poly(x) => x
                .terms()
                .map(|(w, c)| ((0, w.clone()), c.clone()))
                .collect(),
            Element::Weyl(x) => x
                .terms()
                .map(|(w, c)| ((0, w.clone()), c.clone()))
                .collect(),
            Element::Rees(x) => {
                let mut out = Vec::new();
                for (k, part) in x.parts() {
                    for (w, c) in part.terms() {
                        out.push(((k, w.clone()), c.clone()));
                    }
                }
                out
            }
        }
    }

    pub fn to_text(&self, q: &crate::quiver::QuiverData, params: &crate::scalars::Parameters) -> String {
        match self {
            Element::Poly(x) => x.to_text(q, params),
            Element::Weyl(x) => x.to_text(q, params),
            Element::Rees(x) => x.to_text(q, params),
        }
    }
}

/// The shifted comoment generators of the orbit ideal: for every node and
/// matrix unit, the comoment image minus the orbit scalar on the
/// diagonal. In the graded layer the comoment sits at grade two with the
/// constant at grade zero.
pub fn ideal_generators(ctx: &QuiverContext, orbit: &OrbitSpec, kind: Kind) -> Vec<Element> {
    let mut out = Vec::new();
    for lam in LieBasisElement::all(ctx) {
        let shift = if lam.row == lam.col {
            orbit.scalar(lam.node)
        } else {
            Scalar::zero()
        };
        let gen = match kind {
            Kind::Classical => {
                let mut g = classical_comoment(ctx, &lam);
                g = g.sub(&PolyElement::scalar(shift));
                Element::Poly(g)
            }
            Kind::Quantum => {
                let mut g = quantum_comoment_local(ctx, &lam);
                g = g.sub(&WeylElement::scalar(shift));
                Element::Weyl(g)
            }
            Kind::Rees => {
                let g = ReesElement::from_part(2, quantum_comoment_local(ctx, &lam))
                    .expect("comoment has order two")
                    .sub(&ReesElement::scalar(shift));
                Element::Rees(g)
            }
        };
        out.push(gen);
    }
    out
}

/// A certificate expressing a query as a two-sided combination of ideal
/// generators, or the statement that no combination exists within the
/// searched span.
#[derive(Debug, Clone)]
pub enum MembershipCertificate {
    Found {
        /// Triples `(left cofactor, generator index, right cofactor)`
        /// with scalar coefficients folded into the left cofactor.
        terms: Vec<(Element, usize, Element)>,
    },
    NotFoundUpTo(usize),
}

impl MembershipCertificate {
    pub fn is_found(&self) -> bool {
        matches!(self, MembershipCertificate::Found { .. })
    }

    /// Re-multiply the certificate against the generators; sound
    /// certificates reproduce the query exactly.
    pub fn re_multiply(&self, ctx: &QuiverContext, generators: &[Element]) -> Option<Element> {
        match self {
            MembershipCertificate::NotFoundUpTo(_) => None,
            MembershipCertificate::Found { terms } => {
                let mut acc: Option<Element> = None;
                for (p, s, q) in terms {
                    let prod = p.mul(ctx, &generators[*s]).mul(ctx, q);
                    acc = Some(match acc {
                        None => prod,
                        Some(a) => a.add(&prod),
                    });
                }
                acc
            }
        }
    }
}

/// All monomial elements of the kind with degree (word length, or grade
/// in the graded layer) up to `d`.
fn monomials_up_to(ctx: &QuiverContext, d: usize, kind: Kind) -> Vec<(usize, Word)> {
    let q = ctx.quiver();
    let mut gens: Vec<Generator> = Vec::new();
    for a in q.arrows() {
        for r in 0..q.dim(q.target(a)) {
            for c in 0..q.dim(q.source(a)) {
                gens.push(Generator::new(a, r, c));
            }
        }
    }
    // sorted multisets of generators, i.e. nondecreasing words
    let mut words: Vec<Word> = vec![Word::new()];
    let mut frontier: Vec<Word> = vec![Word::new()];
    for _ in 0..d {
        let mut next: Vec<Word> = Vec::new();
        for w in &frontier {
            let start = w
                .last()
                .map(|g| gens.binary_search(g).expect("generator enumerated"))
                .unwrap_or(0);
            for g in &gens[start..] {
                let mut nw = w.clone();
                nw.push(*g);
                next.push(nw);
            }
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }
    match kind {
        Kind::Classical | Kind::Quantum => words.into_iter().map(|w| (0, w)).collect(),
        // graded layer: a word of length n may sit at any grade from n to d
        Kind::Rees => {
            let mut out = Vec::new();
            for w in words {
                for k in w.len()..=d {
                    out.push((k, w.clone()));
                }
            }
            out
        }
    }
}

fn monomial_element(kind: Kind, grade: usize, w: &Word) -> Element {
    match kind {
        Kind::Classical => Element::Poly(PolyElement::from_word(w.clone(), Scalar::one())),
        Kind::Quantum => Element::Weyl(WeylElement::from_word(w.clone(), Scalar::one())),
        Kind::Rees => Element::Rees(
            ReesElement::from_part(grade, WeylElement::from_word(w.clone(), Scalar::one()))
                .expect("word length bounded by grade"),
        ),
    }
}

/// Online column reduction: a pivot per leading basis key, each column
/// carrying the provenance combination that produced it.
struct Eliminator {
    pivots: Vec<((usize, Word), BTreeMap<(usize, Word), Scalar>, Vec<(usize, Scalar)>)>,
}

impl Eliminator {
    fn new() -> Self {
        Eliminator { pivots: Vec::new() }
    }

    /// Reduce a vector against the pivots, tracking the combination of
    /// original columns used. Pivots are processed from the largest
    /// leading key down, so entries introduced below a pivot's lead are
    /// still eliminated later in the pass.
    fn reduce(
        &self,
        mut vec: BTreeMap<(usize, Word), Scalar>,
        mut combo: Vec<(usize, Scalar)>,
    ) -> (BTreeMap<(usize, Word), Scalar>, Vec<(usize, Scalar)>) {
        for (key, pvec, pcombo) in self.pivots.iter().rev() {
            if let Some(c) = vec.get(key).cloned() {
                if c.is_zero() {
                    vec.remove(key);
                    continue;
                }
                // vec -= c * pivot  (pivot is normalised to 1 at key)
                for (k, v) in pvec {
                    let cur = vec.remove(k).unwrap_or_else(Scalar::zero);
                    let nv = &cur - &(&c * v);
                    if !nv.is_zero() {
                        vec.insert(k.clone(), nv);
                    }
                }
                for (idx, v) in pcombo {
                    combo.push((*idx, -&(&c * v)));
                }
            }
        }
        (vec, combo)
    }

    /// Install a reduced nonzero vector as a new pivot, normalising its
    /// leading entry to one.
    fn install(
        &mut self,
        vec: BTreeMap<(usize, Word), Scalar>,
        combo: Vec<(usize, Scalar)>,
    ) {
        let (key, lead) = vec.iter().next_back().expect("nonzero").clone();
        let key = key.clone();
        let lead = lead.clone();
        let inv = lead.inverse().expect("nonzero leading entry");
        let vec: BTreeMap<(usize, Word), Scalar> =
            vec.into_iter().map(|(k, v)| (k, &v * &inv)).collect();
        let combo = combo.into_iter().map(|(i, v)| (i, &v * &inv)).collect();
        self.pivots.push((key, vec, combo));
        // keep pivots ordered by leading key for deterministic reduction
        self.pivots.sort_by(|a, b| a.0.cmp(&b.0));
    }
}

fn collect_combo(combo: Vec<(usize, Scalar)>) -> BTreeMap<usize, Scalar> {
    let mut out: BTreeMap<usize, Scalar> = BTreeMap::new();
    for (i, c) in combo {
        let cur = out.remove(&i).unwrap_or_else(Scalar::zero);
        let nv = &cur + &c;
        if !nv.is_zero() {
            out.insert(i, nv);
        }
    }
    out
}

struct SpanColumn {
    left: (usize, Word),
    gen_index: usize,
    right: (usize, Word),
    value: BTreeMap<(usize, Word), Scalar>,
}

/// Decide membership of `x` in the two-sided ideal spanned by the
/// generators with monomial cofactors of total degree at most `bound`,
/// with an optional free constant: when `solve_constant` is set the
/// solver finds `c` with `x - c` in the span.
fn solve_in_span(
    ctx: &QuiverContext,
    x: &Element,
    generators: &[Element],
    bound: usize,
    kind: Kind,
    solve_constant: bool,
) -> Result<(Option<Scalar>, MembershipCertificate), ReductionError> {
    if x.degree() > bound {
        return Err(ReductionError::DegreeBoundTooSmall {
            bound,
            degree: x.degree(),
        });
    }

    let gen_degree: Vec<usize> = generators.iter().map(Element::degree).collect();
    let min_gen_degree = gen_degree.iter().copied().min().unwrap_or(0);
    let cofactor_budget = bound.saturating_sub(min_gen_degree);
    let monomials = monomials_up_to(ctx, cofactor_budget, kind);

    // assemble candidate columns; normal ordering of each product is the
    // expensive part and is data-parallel over the span
    let mut tasks: Vec<(usize, usize, usize)> = Vec::new(); // (left, gen, right)
    for (li, (lg, lw)) in monomials.iter().enumerate() {
        for (gi, gd) in gen_degree.iter().enumerate() {
            for (ri, (rg, rw)) in monomials.iter().enumerate() {
                let degree = match kind {
                    Kind::Rees => lg + gd + rg,
                    _ => lw.len() + gd + rw.len(),
                };
                if degree <= bound {
                    tasks.push((li, gi, ri));
                }
                let _ = (lg, rg);
            }
        }
    }

    let columns: Vec<SpanColumn> = par::map_collect(&tasks, |&(li, gi, ri)| {
        let (lg, lw) = &monomials[li];
        let (rg, rw) = &monomials[ri];
        let left = monomial_element(kind, *lg, lw);
        let right = monomial_element(kind, *rg, rw);
        let value = left.mul(ctx, &generators[gi]).mul(ctx, &right);
        SpanColumn {
            left: (*lg, lw.clone()),
            gen_index: gi,
            right: (*rg, rw.clone()),
            value: value.basis_terms().into_iter().collect(),
        }
    });

    // online elimination with early exit once the target reduces to zero
    let mut elim = Eliminator::new();
    let target: BTreeMap<(usize, Word), Scalar> = x.basis_terms().into_iter().collect();

    // the free constant is one more column: the unit basis vector
    let constant_col = solve_constant.then(|| {
        let mut v = BTreeMap::new();
        v.insert((0usize, Word::new()), Scalar::one());
        v
    });

    let finish = |elim: &Eliminator,
                  columns: &[SpanColumn]|
     -> Option<(Option<Scalar>, MembershipCertificate)> {
        let (residual, combo) = elim.reduce(target.clone(), Vec::new());
        if !residual.is_empty() {
            return None;
        }
        // target = sum of columns with the negated combination
        let combo = collect_combo(combo);
        let mut constant = Scalar::zero();
        let mut terms = Vec::new();
        for (idx, coeff) in combo {
            let coeff = -&coeff;
            if coeff.is_zero() {
                continue;
            }
            if idx == usize::MAX {
                constant = coeff;
                continue;
            }
            let col = &columns[idx];
            let left = monomial_element(kind, col.left.0, &col.left.1).scale(&coeff);
            let right = monomial_element(kind, col.right.0, &col.right.1);
            terms.push((left, col.gen_index, right));
        }
        Some((
            solve_constant.then_some(constant),
            MembershipCertificate::Found { terms },
        ))
    };

    if let Some(v) = constant_col {
        let (vec, combo) = elim.reduce(v, vec![(usize::MAX, Scalar::one())]);
        if !vec.is_empty() {
            elim.install(vec, combo);
        }
    }
    if let Some(found) = finish(&elim, &columns) {
        return Ok(found);
    }
    for (idx, col) in columns.iter().enumerate() {
        if col.value.is_empty() {
            continue;
        }
        let (vec, combo) = elim.reduce(col.value.clone(), vec![(idx, Scalar::one())]);
        if vec.is_empty() {
            continue;
        }
        elim.install(vec, combo);
        if let Some(found) = finish(&elim, &columns) {
            return Ok(found);
        }
    }
    Ok((None, MembershipCertificate::NotFoundUpTo(bound)))
}

/// Membership of `x` in the orbit ideal up to the degree bound.
pub fn ideal_membership(
    ctx: &QuiverContext,
    x: &Element,
    orbit: &OrbitSpec,
    bound: usize,
    kind: Kind,
) -> Result<MembershipCertificate, ReductionError> {
    assert_eq!(x.kind(), kind, "query element of the wrong layer");
    let generators = ideal_generators(ctx, orbit, kind);
    let (_, cert) = solve_in_span(ctx, x, &generators, bound, kind, false)?;
    Ok(cert)
}

/// Is the element invariant: does its bracket with every comoment image
/// vanish exactly?
pub fn is_invariant(ctx: &QuiverContext, x: &Element) -> bool {
    for lam in LieBasisElement::all(ctx) {
        let vanishes = match x {
            Element::Poly(f) => poisson_bracket(ctx, &classical_comoment(ctx, &lam), f).is_zero(),
            Element::Weyl(f) => {
                weyl_commutator(ctx, &quantum_comoment_local(ctx, &lam), f).is_zero()
            }
            Element::Rees(f) => {
                let mu = ReesElement::from_part(2, quantum_comoment_local(ctx, &lam))
                    .expect("order two");
                rees_commutator(ctx, &mu, f).is_zero()
            }
        };
        if !vanishes {
            return false;
        }
    }
    true
}

/// Outcome of the constant-shift solve.
#[derive(Debug, Clone)]
pub enum ShiftResult {
    Found {
        constant: Scalar,
        certificate: MembershipCertificate,
    },
    NotFound(usize),
}

/// Solve for the constant by which the pullback of an invariant element
/// differs from the element itself, modulo the orbit ideal up to the
/// degree bound.
///
/// Computes the difference `pullback(g)(x) - x`, then finds a scalar `c`
/// and a certificate with `difference - c` in the truncated ideal span.
pub fn reduced_shift(
    ctx: &QuiverContext,
    g: &GroupElement,
    x: &Element,
    orbit: &OrbitSpec,
    bound: usize,
) -> Result<ShiftResult, ReductionError> {
    let kind = x.kind();
    let ctx_g = ctx.acted(g);
    // the element is a formula over the quiver; its pullback from the
    // transformed embedding lands back at the original one
    let pulled = match x {
        Element::Poly(f) => Element::Poly(classical_pullback(ctx, g, f)),
        Element::Weyl(f) => Element::Weyl(weyl_pullback(ctx, g, f)),
        Element::Rees(f) => Element::Rees(crate::symmetry::quantum_pullback(ctx, g, f)),
    };
    let _ = ctx_g;
    let delta = pulled.sub(x);
    let generators = ideal_generators(ctx, orbit, kind);
    let (constant, cert) = solve_in_span(ctx, &delta, &generators, bound, kind, true)?;
    match constant {
        Some(c) if cert.is_found() => Ok(ShiftResult::Found {
            constant: c,
            certificate: cert,
        }),
        _ => Ok(ShiftResult::NotFound(bound)),
    }
}

/// Verify a found certificate against the orbit ideal: the terms must
/// re-multiply exactly to the query.
pub fn verify_certificate(
    ctx: &QuiverContext,
    query: &Element,
    orbit: &OrbitSpec,
    kind: Kind,
    cert: &MembershipCertificate,
) -> bool {
    let generators = ideal_generators(ctx, orbit, kind);
    match cert {
        MembershipCertificate::NotFoundUpTo(_) => false,
        MembershipCertificate::Found { terms } if terms.is_empty() => query.is_zero(),
        _ => match cert.re_multiply(ctx, &generators) {
            None => false,
            Some(total) => total.sub(query).is_zero(),
        },
    }
}
