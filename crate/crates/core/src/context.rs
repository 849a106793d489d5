//! Shared per-computation context: a quiver together with an embedding of
//! its parts, the cached symplectic weights of every arrow, and an
//! optional injected fault for mutation-style testing of the verification
//! surface.

use std::sync::Arc;

use num::One;

use crate::projective::{self, Embedding, EtaBranch, GroupElement};
use crate::quiver::{ArrowId, NodeId, PartId, QuiverData};
use crate::scalars::Rational;

pub use crate::projective::EtaBranch as Branch;

/// A deliberate single-point perturbation of the verification surface.
/// Used to confirm that the identity checks actually fail when the
/// underlying data is wrong.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Fault {
    /// Flip the sign of the cached weight of one arrow (its opposite is
    /// left alone, breaking antisymmetry).
    FlipEpsSign(ArrowId),
    /// Multiply by two every cocycle value computed through the given
    /// case branch.
    ScaleEtaBranch(EtaBranch),
}

/// Quiver, embedding and cached arrow weights, shared read-only by all
/// algebra operations.
#[derive(Debug, Clone)]
pub struct QuiverContext {
    quiver: Arc<QuiverData>,
    embedding: Embedding,
    eps: Vec<Rational>,
    eps_inv: Vec<Rational>,
    fault: Option<Fault>,
}

impl QuiverContext {
    pub fn new(quiver: Arc<QuiverData>, embedding: Embedding) -> Self {
        Self::with_fault(quiver, embedding, None)
    }

    pub fn with_fault(quiver: Arc<QuiverData>, embedding: Embedding, fault: Option<Fault>) -> Self {
        let mut eps: Vec<Rational> = quiver
            .arrows()
            .map(|a| projective::epsilon(&quiver, &embedding, a))
            .collect();
        if let Some(Fault::FlipEpsSign(arrow)) = &fault {
            eps[arrow.0] = -eps[arrow.0].clone();
        }
        let eps_inv = eps.iter().map(|e| Rational::one() / e).collect();
        QuiverContext {
            quiver,
            embedding,
            eps,
            eps_inv,
            fault,
        }
    }

    pub fn quiver(&self) -> &QuiverData {
        &self.quiver
    }

    pub fn quiver_arc(&self) -> Arc<QuiverData> {
        Arc::clone(&self.quiver)
    }

    pub fn embedding(&self) -> &Embedding {
        &self.embedding
    }

    pub fn fault(&self) -> Option<&Fault> {
        self.fault.as_ref()
    }

    /// Cached symplectic weight of an arrow.
    pub fn eps(&self, a: ArrowId) -> &Rational {
        &self.eps[a.0]
    }

    /// Cached reciprocal weight of an arrow.
    pub fn eps_inv(&self, a: ArrowId) -> &Rational {
        &self.eps_inv[a.0]
    }

    /// The cocycle value of a part, honouring an injected fault.
    pub fn eta_part(&self, g: &GroupElement, part: PartId) -> Rational {
        let (value, branch) = projective::eta_with_branch(g, &self.embedding, part);
        match &self.fault {
            Some(Fault::ScaleEtaBranch(b)) if *b == branch => value * Rational::from_integer(2.into()),
            _ => value,
        }
    }

    /// The cocycle value of the part containing a node.
    pub fn eta_node(&self, g: &GroupElement, node: NodeId) -> Rational {
        self.eta_part(g, self.quiver.part_of(node))
    }

    /// The context at the transformed embedding, carrying the fault over.
    pub fn acted(&self, g: &GroupElement) -> QuiverContext {
        QuiverContext::with_fault(
            Arc::clone(&self.quiver),
            self.embedding.act(g),
            self.fault.clone(),
        )
    }
}
