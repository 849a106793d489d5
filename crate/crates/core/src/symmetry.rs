//! The pullback action of the projective-line symmetry group on the
//! coordinate algebras.
//!
//! On the commutative ring the pullback scales the coordinate of each
//! arrow by the cocycle value of the arrow's target part and extends
//! multiplicatively. On the Weyl algebra and its graded layer the same
//! word-scaling formula defines an algebra morphism from the product at
//! the transformed embedding to the product at the original one; that it
//! is a morphism is a consequence of the compatibility between arrow
//! weights and cocycle values, and is verified by tests rather than
//! assumed.

use crate::context::QuiverContext;
use crate::projective::GroupElement;
use crate::scalars::{Rational, Scalar};
use crate::weyl::{PolyElement, ReesElement, WeylElement, Word};

/// The scaling factor of one normal word: the product of cocycle values
/// of the target parts of its letters.
fn word_eta(ctx: &QuiverContext, g: &GroupElement, w: &Word) -> Rational {
    let mut acc = Rational::from_integer(1.into());
    for gen in w {
        acc *= ctx.eta_node(g, ctx.quiver().target(gen.arrow));
    }
    acc
}

/// Pullback on the commutative ring at the context's embedding.
pub fn classical_pullback(ctx: &QuiverContext, g: &GroupElement, f: &PolyElement) -> PolyElement {
    let mut out = PolyElement::zero();
    for (w, c) in f.terms() {
        let eta = word_eta(ctx, g, w);
        out = out.add(&PolyElement::from_word(
            w.clone(),
            c * &Scalar::from_rational(eta),
        ));
    }
    out
}

/// Pullback on the Weyl algebra: scales each normal word. As a map it
/// sends the product at the transformed embedding to the product at the
/// context's embedding.
pub fn weyl_pullback(ctx: &QuiverContext, g: &GroupElement, x: &WeylElement) -> WeylElement {
    let mut out = WeylElement::zero();
    for (w, c) in x.terms() {
        let eta = word_eta(ctx, g, w);
        out = out.add(&WeylElement::from_word(
            w.clone(),
            c * &Scalar::from_rational(eta),
        ));
    }
    out
}

/// Pullback on the graded layer, gradewise.
pub fn quantum_pullback(ctx: &QuiverContext, g: &GroupElement, x: &ReesElement) -> ReesElement {
    let mut out = ReesElement::zero();
    for (k, part) in x.parts() {
        let mapped = weyl_pullback(ctx, g, part);
        out = out.add(&ReesElement::from_part(k, mapped).expect("word lengths unchanged"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::{Embedding, ProjPoint};
    use crate::quiver::QuiverData;
    use crate::scalars::{rat, rat_int};
    use crate::weyl::{poisson_bracket, weyl_product, Generator};
    use std::collections::BTreeMap;
    use std::sync::Arc;

    fn ctx_with_points(points: Vec<ProjPoint>, dims: usize) -> QuiverContext {
        let parts: Vec<Vec<String>> = (0..points.len()).map(|i| vec![format!("n{i}")]).collect();
        let dmap: BTreeMap<String, usize> =
            parts.iter().flatten().map(|l| (l.clone(), dims)).collect();
        let q = QuiverData::k_partite(&parts, &dmap).unwrap();
        let emb = Embedding::for_quiver(&q, points).unwrap();
        QuiverContext::new(Arc::new(q), emb)
    }

    fn g(a: i64, b: i64, c: i64, d: i64) -> GroupElement {
        GroupElement::new(rat_int(a), rat_int(b), rat_int(c), rat_int(d)).unwrap()
    }

    #[test]
    fn identity_pullback_is_identity() {
        let ctx = ctx_with_points(vec![ProjPoint::Infinity, ProjPoint::Finite(rat_int(2))], 2);
        let q = ctx.quiver();
        let a0 = q.arrows().next().unwrap();
        let f = PolyElement::generator(Generator::new(a0, 0, 1));
        assert_eq!(
            classical_pullback(&ctx, &GroupElement::identity(), &f),
            f
        );
    }

    #[test]
    fn monomial_scaling() {
        // a monomial scales by the product of target-part cocycle values
        let ctx = ctx_with_points(
            vec![ProjPoint::Finite(rat_int(1)), ProjPoint::Finite(rat_int(4))],
            1,
        );
        let q = ctx.quiver();
        let gl = g(1, 0, 1, 1);
        let a01 = q.arrow_between(q.nodes().next().unwrap(), q.nodes().nth(1).unwrap()).unwrap();
        let a10 = q.opposite(a01);
        let mono = PolyElement::generator(Generator::new(a01, 0, 0))
            .mul(&PolyElement::generator(Generator::new(a10, 0, 0)));
        let pulled = classical_pullback(&ctx, &gl, &mono);
        let eta0 = ctx.eta_node(&gl, q.source(a01));
        let eta1 = ctx.eta_node(&gl, q.target(a01));
        assert_eq!(pulled, mono.scale_rational(&(eta0 * eta1)));
    }

    #[test]
    fn classical_composition_law() {
        // pullback at the product factors through the pullback at the
        // transformed embedding
        let ctx = ctx_with_points(
            vec![
                ProjPoint::Infinity,
                ProjPoint::Finite(rat_int(0)),
                ProjPoint::Finite(rat_int(3)),
            ],
            1,
        );
        let q = ctx.quiver();
        let g1 = g(2, 1, 1, 1);
        let g2 = g(1, -1, 1, 0);
        let ctx_g1 = ctx.acted(&g1);
        let mut f = PolyElement::zero();
        for a in q.arrows() {
            f = f.add(&PolyElement::generator(Generator::new(a, 0, 0)));
        }
        let f = f.mul(&f);
        let lhs = classical_pullback(&ctx, &g1.mul(&g2), &f);
        let rhs = classical_pullback(&ctx, &g1, &classical_pullback(&ctx_g1, &g2, &f));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn pullback_is_poisson() {
        // bracket at the original embedding of pullbacks equals pullback
        // of the bracket at the transformed embedding
        let ctx = ctx_with_points(
            vec![ProjPoint::Infinity, ProjPoint::Finite(rat(1, 2))],
            2,
        );
        let q = ctx.quiver();
        let gl = g(3, 1, 2, 1);
        let ctx_g = ctx.acted(&gl);
        let a01 = q.arrows().next().unwrap();
        let a10 = q.opposite(a01);
        let f = PolyElement::generator(Generator::new(a01, 0, 1))
            .mul(&PolyElement::generator(Generator::new(a10, 1, 0)));
        let h = PolyElement::generator(Generator::new(a10, 1, 0));
        let lhs = poisson_bracket(
            &ctx,
            &classical_pullback(&ctx, &gl, &f),
            &classical_pullback(&ctx, &gl, &h),
        );
        let rhs = classical_pullback(&ctx, &gl, &poisson_bracket(&ctx_g, &f, &h));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn weyl_pullback_is_algebra_morphism() {
        // pullback of the product at the transformed embedding equals the
        // product of pullbacks at the original embedding
        let ctx = ctx_with_points(
            vec![ProjPoint::Infinity, ProjPoint::Finite(rat_int(1))],
            2,
        );
        let q = ctx.quiver();
        let gl = g(1, 2, 1, 3);
        let ctx_g = ctx.acted(&gl);
        let a01 = q.arrows().next().unwrap();
        let a10 = q.opposite(a01);
        for (x, y) in [
            (
                WeylElement::generator(Generator::new(a10, 0, 1)),
                WeylElement::generator(Generator::new(a01, 1, 0)),
            ),
            (
                WeylElement::generator(Generator::new(a01, 1, 1)),
                WeylElement::generator(Generator::new(a10, 1, 1)),
            ),
        ] {
            let lhs = weyl_pullback(&ctx, &gl, &weyl_product(&ctx_g, &x, &y));
            let rhs = weyl_product(
                &ctx,
                &weyl_pullback(&ctx, &gl, &x),
                &weyl_pullback(&ctx, &gl, &y),
            );
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn quantum_pullback_intertwines_semiclassical_limit() {
        let ctx = ctx_with_points(
            vec![ProjPoint::Finite(rat_int(0)), ProjPoint::Finite(rat_int(5))],
            2,
        );
        let q = ctx.quiver();
        let gl = g(0, 1, -1, 0);
        let a01 = q.arrows().next().unwrap();
        let a10 = q.opposite(a01);
        let w1 = WeylElement::generator(Generator::new(a10, 0, 0));
        let w2 = WeylElement::generator(Generator::new(a01, 0, 0));
        let x = ReesElement::from_parts([
            (1, w1),
            (2, weyl_product(&ctx, &w2.clone(), &w2)),
        ])
        .unwrap();
        let lhs = crate::weyl::semiclassical_limit(&quantum_pullback(&ctx, &gl, &x));
        let rhs = classical_pullback(&ctx, &gl, &crate::weyl::semiclassical_limit(&x));
        assert_eq!(lhs, rhs);
    }
}
