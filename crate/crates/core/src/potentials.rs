//! Traces of cycles: commutative traces of oriented cycles, quantum
//! traces of anchored cycles with values in the Weyl algebra, the graded
//! `h`-deformed trace, and the anchor-averaging quantisation of
//! potentials.


use crate::context::QuiverContext;
use crate::quiver::{AnchoredCycle, ArrowId, Cycle, NodeId, Potential, QuiverError};
use crate::scalars::{rat, Rational, Scalar};
use crate::weyl::{
    rees_product, weyl_product, Generator, PolyElement, ReesElement, WeylElement, WeylError,
};

/// The matrix of coordinate functions of one arrow, with entries in
/// either algebra.
fn arrow_matrix<T, F>(ctx: &QuiverContext, a: ArrowId, entry: F) -> Vec<Vec<T>>
where
    F: Fn(Generator) -> T,
{
    let q = ctx.quiver();
    let rows = q.dim(q.target(a));
    let cols = q.dim(q.source(a));
    (0..rows)
        .map(|r| (0..cols).map(|c| entry(Generator::new(a, r, c))).collect())
        .collect()
}

fn mat_mul_weyl(
    ctx: &QuiverContext,
    x: &[Vec<WeylElement>],
    y: &[Vec<WeylElement>],
) -> Vec<Vec<WeylElement>> {
    let rows = x.len();
    let inner = y.len();
    let cols = y[0].len();
    (0..rows)
        .map(|r| {
            (0..cols)
                .map(|c| {
                    let mut acc = WeylElement::zero();
                    for m in 0..inner {
                        acc = acc.add(&weyl_product(ctx, &x[r][m], &y[m][c]));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn mat_mul_poly(x: &[Vec<PolyElement>], y: &[Vec<PolyElement>]) -> Vec<Vec<PolyElement>> {
    let rows = x.len();
    let inner = y.len();
    let cols = y[0].len();
    (0..rows)
        .map(|r| {
            (0..cols)
                .map(|c| {
                    let mut acc = PolyElement::zero();
                    for m in 0..inner {
                        acc = acc.add(&x[r][m].mul(&y[m][c]));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// The commutative trace of an oriented cycle: the trace of the product
/// of its coordinate matrices. Independent of the rotation chosen.
pub fn classical_trace(ctx: &QuiverContext, c: &Cycle) -> PolyElement {
    let arrows = c.arrows();
    // arrows are stored in application order, so the first one is the
    // rightmost factor of the matrix product
    let mut m = arrow_matrix(ctx, arrows[0], PolyElement::generator);
    for &a in &arrows[1..] {
        m = mat_mul_poly(&arrow_matrix(ctx, a, PolyElement::generator), &m);
    }
    let mut tr = PolyElement::zero();
    for (k, row) in m.iter().enumerate() {
        tr = tr.add(&row[k]);
    }
    tr
}

/// The quantum trace of an anchored cycle: the trace of the product of
/// quantised coordinate matrices, multiplied entrywise with the Weyl
/// product, the anchor applied first. Invariant under admissible
/// permutations (which is why anchored cycles are kept in canonical
/// form), and its top symbol is the commutative trace.
pub fn quantum_trace(ctx: &QuiverContext, c: &AnchoredCycle) -> WeylElement {
    let arrows = c.arrows();
    // the anchor is applied first: rightmost in the matrix product
    let mut m = arrow_matrix(ctx, arrows[0], WeylElement::generator);
    for &a in &arrows[1..] {
        m = mat_mul_weyl(ctx, &arrow_matrix(ctx, a, WeylElement::generator), &m);
    }
    let mut tr = WeylElement::zero();
    for (k, row) in m.iter().enumerate() {
        tr = tr.add(&row[k]);
    }
    tr
}

/// The `h`-deformed quantum trace: the quantum trace placed at grade
/// equal to the cycle length.
pub fn quantum_trace_hbar(ctx: &QuiverContext, c: &AnchoredCycle) -> Result<ReesElement, WeylError> {
    ReesElement::from_part(c.len(), quantum_trace(ctx, c))
}

/// Occurrence-counted degree of each node in a cycle viewed as a
/// sub-multigraph: every arrow occurrence contributes to both endpoints.
fn node_degrees(ctx: &QuiverContext, c: &Cycle) -> Vec<(NodeId, usize)> {
    let q = ctx.quiver();
    let mut deg: std::collections::BTreeMap<NodeId, usize> = std::collections::BTreeMap::new();
    for &a in c.arrows() {
        *deg.entry(q.source(a)).or_default() += 1;
        *deg.entry(q.target(a)).or_default() += 1;
    }
    deg.into_iter().collect()
}

/// The quantisation of a single cycle: anchor at every arrow leaving a
/// node of maximal degree, weighted by `2 / (max degree * number of
/// maximal nodes)` so that forgetting anchors recovers the cycle.
pub fn quantize_cycle(ctx: &QuiverContext, c: &Cycle) -> Result<Potential<AnchoredCycle>, QuiverError> {
    let q = ctx.quiver();
    let degrees = node_degrees(ctx, c);
    let max_deg = degrees.iter().map(|&(_, d)| d).max().expect("nonempty");
    let maximal: Vec<NodeId> = degrees
        .iter()
        .filter(|&&(_, d)| d == max_deg)
        .map(|&(n, _)| n)
        .collect();
    let weight = rat(2, (max_deg * maximal.len()) as i64);

    let arrows = c.arrows();
    let mut out = Potential::new();
    for (pos, &a) in arrows.iter().enumerate() {
        if maximal.contains(&q.source(a)) {
            let rotated: Vec<ArrowId> = (0..arrows.len())
                .map(|i| arrows[(i + pos) % arrows.len()])
                .collect();
            let anchored = AnchoredCycle::new(q, rotated)?;
            out.add_term(anchored, Scalar::from_rational(weight.clone()));
        }
    }
    Ok(out)
}

/// Quantise a potential cycle by cycle, by linearity.
pub fn quantize_potential(
    ctx: &QuiverContext,
    p: &Potential<Cycle>,
) -> Result<Potential<AnchoredCycle>, QuiverError> {
    let mut out = Potential::new();
    for (cycle, coeff) in p.terms() {
        for (anchored, w) in quantize_cycle(ctx, cycle)?.terms() {
            out.add_term(anchored.clone(), coeff * w);
        }
    }
    Ok(out)
}

/// Evaluate a classical potential to its trace polynomial.
pub fn classical_potential_trace(ctx: &QuiverContext, p: &Potential<Cycle>) -> PolyElement {
    let mut acc = PolyElement::zero();
    for (cycle, coeff) in p.terms() {
        acc = acc.add(&classical_trace(ctx, cycle).scale(coeff));
    }
    acc
}

/// Evaluate a quantum potential to its graded trace: each anchored cycle
/// contributes its quantum trace at grade equal to its length.
pub fn quantum_potential_trace_hbar(
    ctx: &QuiverContext,
    p: &Potential<AnchoredCycle>,
) -> Result<ReesElement, WeylError> {
    let mut acc = ReesElement::zero();
    for (cycle, coeff) in p.terms() {
        acc = acc.add(&quantum_trace_hbar(ctx, cycle)?.scale(coeff));
    }
    Ok(acc)
}

/// Total weight per underlying cycle of a quantum potential: forgetting
/// anchors must recover the classical potential.
pub fn forget_anchors(p: &Potential<AnchoredCycle>) -> Potential<Cycle> {
    let mut out = Potential::new();
    for (anchored, coeff) in p.terms() {
        out.add_term(anchored.unanchored(), coeff.clone());
    }
    out
}

/// The scaling factor picked up by the trace of a cycle under the
/// pullback action: the product over the cycle's arrows of the cocycle
/// value at the target part.
pub fn cycle_eta(
    ctx: &QuiverContext,
    g: &crate::projective::GroupElement,
    arrows: &[ArrowId],
) -> Rational {
    let mut acc = Rational::from_integer(1.into());
    for &a in arrows {
        acc *= ctx.eta_node(g, ctx.quiver().target(a));
    }
    acc
}

/// `rees_product` of a list, left to right; used by tests and benches.
pub fn rees_product_all(ctx: &QuiverContext, xs: &[ReesElement]) -> ReesElement {
    let mut it = xs.iter();
    let mut acc = match it.next() {
        Some(x) => x.clone(),
        None => return ReesElement::scalar(Scalar::one()),
    };
    for x in it {
        acc = rees_product(ctx, &acc, x);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::{Embedding, ProjPoint};
    use crate::quiver::QuiverData;
    use crate::scalars::rat_int;
    use crate::weyl::{bernstein_order, symbol, weyl_commutator, Word};
    use std::collections::BTreeMap;
    use std::sync::Arc;

    fn pair_ctx(d0: usize, d1: usize) -> QuiverContext {
        let parts = vec![vec!["a".to_string()], vec!["b".to_string()]];
        let mut dims = BTreeMap::new();
        dims.insert("a".to_string(), d0);
        dims.insert("b".to_string(), d1);
        let q = QuiverData::k_partite(&parts, &dims).unwrap();
        let emb = Embedding::for_quiver(
            &q,
            vec![ProjPoint::Finite(rat_int(0)), ProjPoint::Finite(rat_int(2))],
        )
        .unwrap();
        QuiverContext::new(Arc::new(q), emb)
    }

    fn star_ctx(dims: &[usize]) -> QuiverContext {
        let peripherals: Vec<String> = (1..dims.len()).map(|i| format!("p{i}")).collect();
        let parts = vec![vec!["inf".to_string()], peripherals];
        let mut dmap = BTreeMap::new();
        dmap.insert("inf".to_string(), dims[0]);
        for (i, d) in dims.iter().enumerate().skip(1) {
            dmap.insert(format!("p{i}"), *d);
        }
        let q = QuiverData::k_partite(&parts, &dmap).unwrap();
        let emb =
            Embedding::for_quiver(&q, vec![ProjPoint::Infinity, ProjPoint::Finite(rat_int(0))])
                .unwrap();
        QuiverContext::new(Arc::new(q), emb)
    }

    fn two_cycle(ctx: &QuiverContext) -> Cycle {
        let q = ctx.quiver();
        let alpha = q
            .arrow_between(q.node_by_label("a").unwrap(), q.node_by_label("b").unwrap())
            .unwrap();
        Cycle::new(q, vec![alpha, q.opposite(alpha)]).unwrap()
    }

    #[test]
    fn classical_trace_two_cycle_scalar_dims() {
        let ctx = pair_ctx(1, 1);
        let tr = classical_trace(&ctx, &two_cycle(&ctx));
        assert_eq!(tr.num_terms(), 1);
        let (w, c) = tr.terms().next().unwrap();
        assert_eq!(w.len(), 2);
        assert_eq!(c, &Scalar::one());
    }

    /// Matrix-product oracle: expand the trace by summing over index
    /// paths directly.
    #[test]
    fn classical_trace_matches_index_sum() {
        let ctx = pair_ctx(2, 2);
        let q = ctx.quiver();
        let alpha = q
            .arrow_between(q.node_by_label("a").unwrap(), q.node_by_label("b").unwrap())
            .unwrap();
        let opp = q.opposite(alpha);
        let c = Cycle::new(q, vec![alpha, opp]).unwrap();
        let got = classical_trace(&ctx, &c);

        // Tr(B_opp B_alpha) = sum_{k,m} B_opp^{km} B_alpha^{mk}
        let mut expect = PolyElement::zero();
        for k in 0..2 {
            for m in 0..2 {
                let mut w = Word::new();
                w.push(Generator::new(opp, k, m));
                w.push(Generator::new(alpha, m, k));
                expect = expect.add(&PolyElement::from_word(w, Scalar::one()));
            }
        }
        assert_eq!(got, expect);
    }

    #[test]
    fn classical_trace_rotation_invariant() {
        let ctx = star_ctx(&[2, 1, 1]);
        let q = ctx.quiver();
        let c = q.node_by_label("inf").unwrap();
        let p1 = q.node_by_label("p1").unwrap();
        let p2 = q.node_by_label("p2").unwrap();
        let walk = vec![
            q.arrow_between(c, p1).unwrap(),
            q.arrow_between(p1, c).unwrap(),
            q.arrow_between(c, p2).unwrap(),
            q.arrow_between(p2, c).unwrap(),
        ];
        let c1 = Cycle::new(q, walk.clone()).unwrap();
        let rotated: Vec<_> = (0..4).map(|i| walk[(i + 1) % 4]).collect();
        let c2 = Cycle::new(q, rotated).unwrap();
        assert_eq!(classical_trace(&ctx, &c1), classical_trace(&ctx, &c2));
    }

    #[test]
    fn quantum_trace_admissible_invariance() {
        // the two degenerate-4-cycle anchorings out of the centre give the
        // same canonical cycle hence the same trace; the non-admissible
        // rotation differs
        let ctx = star_ctx(&[1, 1, 1]);
        let q = ctx.quiver();
        let c = q.node_by_label("inf").unwrap();
        let p1 = q.node_by_label("p1").unwrap();
        let p2 = q.node_by_label("p2").unwrap();
        let walk = vec![
            q.arrow_between(c, p1).unwrap(),
            q.arrow_between(p1, c).unwrap(),
            q.arrow_between(c, p2).unwrap(),
            q.arrow_between(p2, c).unwrap(),
        ];
        let a1 = AnchoredCycle::new(q, walk.clone()).unwrap();
        let swapped: Vec<_> = (0..4).map(|i| walk[(i + 2) % 4]).collect();
        let a2 = AnchoredCycle::new(q, swapped).unwrap();
        assert_eq!(a1, a2);
        assert_eq!(quantum_trace(&ctx, &a1), quantum_trace(&ctx, &a2));
    }

    #[test]
    fn quantum_trace_anchor_dependence_is_the_commutator() {
        // two-cycle traced from either anchor: the difference is the sum
        // of entry commutators, a rational multiple of the identity
        let ctx = pair_ctx(2, 2);
        let q = ctx.quiver();
        let alpha = q
            .arrow_between(q.node_by_label("a").unwrap(), q.node_by_label("b").unwrap())
            .unwrap();
        let opp = q.opposite(alpha);
        let anchored_at_alpha = AnchoredCycle::new(q, vec![alpha, opp]).unwrap();
        let anchored_at_opp = AnchoredCycle::new(q, vec![opp, alpha]).unwrap();
        let t1 = quantum_trace(&ctx, &anchored_at_alpha);
        let t2 = quantum_trace(&ctx, &anchored_at_opp);

        // oracle: Tr(XY) - Tr(YX) = sum_{k,m} [X_{km}, Y_{mk}]
        let mut oracle = WeylElement::zero();
        for k in 0..2 {
            for m in 0..2 {
                let x = WeylElement::generator(Generator::new(opp, k, m));
                let y = WeylElement::generator(Generator::new(alpha, m, k));
                oracle = oracle.add(&weyl_commutator(&ctx, &x, &y));
            }
        }
        assert_eq!(t1.sub(&t2), oracle);
        // and that is eps(alpha*)^-1 * (2*2) times the unit
        let expect = WeylElement::scalar(Scalar::from_rational(
            ctx.eps_inv(opp).clone() * rat_int(4),
        ));
        assert_eq!(oracle, expect);
    }

    #[test]
    fn quantum_trace_symbol_is_classical_trace() {
        let ctx = star_ctx(&[2, 1, 1]);
        let q = ctx.quiver();
        let c = q.node_by_label("inf").unwrap();
        let p1 = q.node_by_label("p1").unwrap();
        let p2 = q.node_by_label("p2").unwrap();
        let walk = vec![
            q.arrow_between(c, p1).unwrap(),
            q.arrow_between(p1, c).unwrap(),
            q.arrow_between(c, p2).unwrap(),
            q.arrow_between(p2, c).unwrap(),
        ];
        let anchored = AnchoredCycle::new(q, walk.clone()).unwrap();
        let cyc = Cycle::new(q, walk).unwrap();
        let qt = quantum_trace(&ctx, &anchored);
        assert_eq!(
            symbol(&qt, 4).unwrap(),
            classical_trace(&ctx, &cyc),
            "top symbol of the quantum trace"
        );
        // and through the graded layer
        let rees = quantum_trace_hbar(&ctx, &anchored).unwrap();
        assert_eq!(rees.max_grade(), 4);
        assert!(bernstein_order(&rees.part(4)) <= 4);
        assert_eq!(
            crate::weyl::semiclassical_limit(&rees),
            classical_trace(&ctx, &cyc)
        );
    }

    #[test]
    fn quantization_weights() {
        // 2-cycle: half(anchor + opposite anchor)
        let ctx = pair_ctx(1, 1);
        let q2 = quantize_cycle(&ctx, &two_cycle(&ctx)).unwrap();
        // both anchors are admissibly inequivalent for a 2-cycle, so two
        // terms of one half each
        assert_eq!(q2.len(), 2);
        for (_, c) in q2.terms() {
            assert_eq!(c, &Scalar::from_rational(rat(1, 2)));
        }

        // degenerate 4-cycle: single representative with coefficient 1
        let sctx = star_ctx(&[1, 1, 1]);
        let q = sctx.quiver();
        let c = q.node_by_label("inf").unwrap();
        let p1 = q.node_by_label("p1").unwrap();
        let p2 = q.node_by_label("p2").unwrap();
        let walk = vec![
            q.arrow_between(c, p1).unwrap(),
            q.arrow_between(p1, c).unwrap(),
            q.arrow_between(c, p2).unwrap(),
            q.arrow_between(p2, c).unwrap(),
        ];
        let cyc = Cycle::new(q, walk.clone()).unwrap();
        let qd = quantize_cycle(&sctx, &cyc).unwrap();
        assert_eq!(qd.len(), 1);
        let (anchored, coeff) = qd.terms().next().unwrap();
        assert_eq!(coeff, &Scalar::one());
        assert_eq!(q.source(anchored.anchor()), c, "anchored out of the centre");

        // triangle: three equivalent anchors, coefficient 1 on the same
        // canonical form
        let parts = vec![
            vec!["a".to_string()],
            vec!["b".to_string()],
            vec!["c".to_string()],
        ];
        let dims: BTreeMap<String, usize> =
            parts.iter().flatten().map(|l| (l.clone(), 1)).collect();
        let qt = QuiverData::k_partite(&parts, &dims).unwrap();
        let emb = Embedding::for_quiver(
            &qt,
            vec![
                ProjPoint::Finite(rat_int(0)),
                ProjPoint::Finite(rat_int(1)),
                ProjPoint::Finite(rat_int(3)),
            ],
        )
        .unwrap();
        let tctx = QuiverContext::new(Arc::new(qt), emb);
        let q = tctx.quiver();
        let (na, nb, nc) = (
            q.node_by_label("a").unwrap(),
            q.node_by_label("b").unwrap(),
            q.node_by_label("c").unwrap(),
        );
        let tri = Cycle::new(
            q,
            vec![
                q.arrow_between(na, nb).unwrap(),
                q.arrow_between(nb, nc).unwrap(),
                q.arrow_between(nc, na).unwrap(),
            ],
        )
        .unwrap();
        let qtri = quantize_cycle(&tctx, &tri).unwrap();
        assert_eq!(qtri.len(), 1);
        assert_eq!(qtri.terms().next().unwrap().1, &Scalar::one());

        // simple 4-cycle in a 2+2 quiver: weight 1/4, four equivalent
        // anchors, total coefficient 1
        let parts = vec![
            vec!["x1".to_string(), "x2".to_string()],
            vec!["y1".to_string(), "y2".to_string()],
        ];
        let dims: BTreeMap<String, usize> =
            parts.iter().flatten().map(|l| (l.clone(), 1)).collect();
        let qs = QuiverData::k_partite(&parts, &dims).unwrap();
        let emb = Embedding::for_quiver(
            &qs,
            vec![ProjPoint::Finite(rat_int(0)), ProjPoint::Finite(rat_int(1))],
        )
        .unwrap();
        let sctx2 = QuiverContext::new(Arc::new(qs), emb);
        let q = sctx2.quiver();
        let (x1, y1, x2, y2) = (
            q.node_by_label("x1").unwrap(),
            q.node_by_label("y1").unwrap(),
            q.node_by_label("x2").unwrap(),
            q.node_by_label("y2").unwrap(),
        );
        let four = Cycle::new(
            q,
            vec![
                q.arrow_between(x1, y1).unwrap(),
                q.arrow_between(y1, x2).unwrap(),
                q.arrow_between(x2, y2).unwrap(),
                q.arrow_between(y2, x1).unwrap(),
            ],
        )
        .unwrap();
        let qf = quantize_cycle(&sctx2, &four).unwrap();
        assert_eq!(qf.len(), 1);
        assert_eq!(qf.terms().next().unwrap().1, &Scalar::one());
    }

    #[test]
    fn forgetting_anchors_recovers_coefficients() {
        let ctx = star_ctx(&[2, 1, 1]);
        let q = ctx.quiver();
        let mut p = Potential::new();
        for c in crate::quiver::enumerate_isomonodromy_cycles(q) {
            p.add_term(c, Scalar::from_int(3));
        }
        let quantised = quantize_potential(&ctx, &p).unwrap();
        let back = forget_anchors(&quantised);
        assert_eq!(back, p);
    }
}
