//! Classical and quantum comoment maps for the base-change action of the
//! product of general linear groups attached to the nodes.
//!
//! The classical comoment sends a matrix-unit coordinate of the node
//! algebra to the weighted quadratic expression over incoming arrows; its
//! quantisation is the symmetrised Weyl product of the same pairs. Local
//! images at distinct nodes commute, so the product of local images
//! defines the global comoment. The grade-two placement in the `h`-layer
//! gives the deformed version.

use crate::context::QuiverContext;
use crate::quiver::NodeId;
use crate::scalars::{rat, Scalar};
use crate::weyl::{
    weyl_product, Generator, PolyElement, ReesElement, WeylElement, WeylError, Word,
};

/// A matrix-unit coordinate on the node algebra: row `k`, column `l` of
/// the copy of the general linear Lie algebra at `node`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LieBasisElement {
    pub node: NodeId,
    pub row: usize,
    pub col: usize,
}

impl LieBasisElement {
    pub fn new(node: NodeId, row: usize, col: usize) -> Self {
        LieBasisElement { node, row, col }
    }

    /// All basis elements of every node algebra, in a fixed order.
    pub fn all(ctx: &QuiverContext) -> Vec<LieBasisElement> {
        let q = ctx.quiver();
        let mut out = Vec::new();
        for n in q.nodes() {
            for k in 0..q.dim(n) {
                for l in 0..q.dim(n) {
                    out.push(LieBasisElement::new(n, k, l));
                }
            }
        }
        out
    }
}

/// The classical comoment of one matrix unit: the sum over arrows into
/// the node of the arrow weight times the row-column pairing with the
/// opposite arrow.
pub fn classical_comoment(ctx: &QuiverContext, lam: &LieBasisElement) -> PolyElement {
    let q = ctx.quiver();
    let mut out = PolyElement::zero();
    for a in q.arrows_into(lam.node) {
        let opp = q.opposite(a);
        let inner = q.dim(q.source(a));
        for m in 0..inner {
            let mut w = Word::new();
            w.push(Generator::new(a, lam.row, m));
            w.push(Generator::new(opp, m, lam.col));
            out = out.add(&PolyElement::from_word(
                w,
                Scalar::from_rational(ctx.eps(a).clone()),
            ));
        }
    }
    out
}

/// The quantum comoment of one matrix unit: one half the weighted sum of
/// the two orderings of each pairing, a filtered quantisation of the
/// classical comoment.
pub fn quantum_comoment_local(ctx: &QuiverContext, lam: &LieBasisElement) -> WeylElement {
    let q = ctx.quiver();
    let mut out = WeylElement::zero();
    let half = Scalar::from_rational(rat(1, 2));
    for a in q.arrows_into(lam.node) {
        let opp = q.opposite(a);
        let inner = q.dim(q.source(a));
        let eps = Scalar::from_rational(ctx.eps(a).clone());
        for m in 0..inner {
            let x = WeylElement::generator(Generator::new(a, lam.row, m));
            let y = WeylElement::generator(Generator::new(opp, m, lam.col));
            let sym = weyl_product(ctx, &x, &y).add(&weyl_product(ctx, &y, &x));
            out = out.add(&sym.scale(&(&eps * &half)));
        }
    }
    out
}

/// The global quantum comoment of a word of matrix units: the product of
/// the local images, taken left to right. Well defined because local
/// images at distinct nodes commute.
pub fn quantum_comoment_global(ctx: &QuiverContext, word: &[LieBasisElement]) -> WeylElement {
    let mut acc = WeylElement::one();
    for lam in word {
        acc = weyl_product(ctx, &acc, &quantum_comoment_local(ctx, lam));
    }
    acc
}

/// The deformed comoment: the quantum comoment placed at grade two, the
/// commutator depth of the word-length filtration.
pub fn deformed_comoment(ctx: &QuiverContext, lam: &LieBasisElement) -> Result<ReesElement, WeylError> {
    ReesElement::from_part(2, quantum_comoment_local(ctx, lam))
}

/// The bracket of the node Lie algebra transported to matrix units by the
/// trace pairing: a formal combination returned as index pairs with
/// signs.
///
/// With the trace pairing identifying the unit `e_{lk}` with the
/// coordinate at `(k, l)`, the bracket of coordinates reads
/// `[x_{kl}, x_{k'l'}] = d(k, l') x_{k'l} - d(k', l) x_{kl'}`.
pub fn lie_bracket(
    x: &LieBasisElement,
    y: &LieBasisElement,
) -> Vec<(LieBasisElement, Scalar)> {
    assert_eq!(x.node, y.node, "bracket of distinct node algebras is zero");
    let mut out = Vec::new();
    if x.row == y.col {
        out.push((
            LieBasisElement::new(x.node, y.row, x.col),
            Scalar::one(),
        ));
    }
    if y.row == x.col {
        out.push((
            LieBasisElement::new(x.node, x.row, y.col),
            -&Scalar::one(),
        ));
    }
    out
}
