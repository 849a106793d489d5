//! Time-dependent Hamiltonian systems over a quiver: potentials with
//! rational-function coefficients attached to per-node times, their
//! quantisation, and the strong-flatness checker (pairwise symmetry of
//! time derivatives and vanishing of brackets, both exact).
//!
//! The built-in system is the Schlesinger family on a star quiver whose
//! centre part sits at infinity: the Hamiltonian of peripheral node `i`
//! is the sum over other peripheral nodes `j` of the trace of the
//! degenerate 4-cycle through `i` and `j`, weighted by the reciprocal
//! time difference.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::context::QuiverContext;
use crate::par;
use crate::potentials::{
    classical_potential_trace, quantize_potential, quantum_potential_trace_hbar,
};
use crate::quiver::{AnchoredCycle, Cycle, NodeId, Potential, QuiverError};
use crate::scalars::{ParamId, Parameters, Scalar};
use crate::weyl::{poisson_bracket, rees_commutator, PolyElement, ReesElement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemsError {
    #[error("unsupported quiver shape: {0}")]
    UnsupportedShape(String),
    #[error("potential of time {0} uses a cycle that is not an isomonodromy cycle")]
    NotAnIsomonodromyCycle(String),
    #[error("quiver error: {0}")]
    Quiver(#[from] QuiverError),
    #[error("order violation: {0}")]
    Weyl(#[from] crate::weyl::WeylError),
}

/// A time-dependent Hamiltonian system: a time parameter per selected
/// node, and per time a classical potential supported on isomonodromy
/// cycles.
#[derive(Debug, Clone)]
pub struct HamiltonianSystem {
    times: Vec<(NodeId, ParamId)>,
    potentials: Vec<Potential<Cycle>>,
    params: Parameters,
}

impl HamiltonianSystem {
    /// Build from explicit per-time potentials; every cycle must be an
    /// isomonodromy cycle of the quiver.
    pub fn new(
        ctx: &QuiverContext,
        params: Parameters,
        entries: Vec<(NodeId, ParamId, Potential<Cycle>)>,
    ) -> Result<Self, SystemsError> {
        let allowed: std::collections::BTreeSet<Cycle> =
            crate::quiver::enumerate_isomonodromy_cycles(ctx.quiver())
                .into_iter()
                .collect();
        for (node, _, pot) in &entries {
            for (cycle, _) in pot.terms() {
                if !allowed.contains(cycle) {
                    return Err(SystemsError::NotAnIsomonodromyCycle(
                        ctx.quiver().label(*node).to_owned(),
                    ));
                }
            }
        }
        let mut times = Vec::new();
        let mut potentials = Vec::new();
        for (node, param, pot) in entries {
            times.push((node, param));
            potentials.push(pot);
        }
        Ok(HamiltonianSystem {
            times,
            potentials,
            params,
        })
    }

    pub fn params(&self) -> &Parameters {
        &self.params
    }

    pub fn times(&self) -> &[(NodeId, ParamId)] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn potential(&self, idx: usize) -> &Potential<Cycle> {
        &self.potentials[idx]
    }

    /// The classical Hamiltonian of one time: the trace of its potential.
    pub fn classical_hamiltonian(&self, ctx: &QuiverContext, idx: usize) -> PolyElement {
        classical_potential_trace(ctx, &self.potentials[idx])
    }

    /// The quantised potential of one time.
    pub fn quantum_potential(
        &self,
        ctx: &QuiverContext,
        idx: usize,
    ) -> Result<Potential<AnchoredCycle>, SystemsError> {
        Ok(quantize_potential(ctx, &self.potentials[idx])?)
    }

    /// The quantum Hamiltonian of one time: the graded trace of the
    /// quantised potential.
    pub fn quantum_hamiltonian(
        &self,
        ctx: &QuiverContext,
        idx: usize,
    ) -> Result<ReesElement, SystemsError> {
        Ok(quantum_potential_trace_hbar(
            ctx,
            &self.quantum_potential(ctx, idx)?,
        )?)
    }

    /// Perturb one potential coefficient (multiply by the given factor);
    /// used to validate that the flatness checker actually fails on a
    /// broken system.
    pub fn perturb_coefficient(&mut self, idx: usize, factor: Scalar) {
        let old = std::mem::take(&mut self.potentials[idx]);
        let mut new = Potential::new();
        let mut first = true;
        for (cycle, coeff) in old.terms() {
            if first {
                new.add_term(cycle.clone(), coeff * &factor);
                first = false;
            } else {
                new.add_term(cycle.clone(), coeff.clone());
            }
        }
        self.potentials[idx] = new;
    }
}

/// Build the Schlesinger system on a star quiver: the quiver must have
/// exactly two parts, a single centre node in the part at infinity and
/// the peripheral nodes in one finite part. Each peripheral node carries
/// a time parameter named after it.
pub fn build_schlesinger(ctx: &QuiverContext) -> Result<HamiltonianSystem, SystemsError> {
    let q = ctx.quiver();
    if q.num_parts() != 2 {
        return Err(SystemsError::UnsupportedShape(format!(
            "expected two parts, got {}",
            q.num_parts()
        )));
    }
    let inf_part = ctx.embedding().infinite_part().ok_or_else(|| {
        SystemsError::UnsupportedShape("the centre part must sit at infinity".into())
    })?;
    let centre_nodes = q.part_nodes(inf_part);
    if centre_nodes.len() != 1 {
        return Err(SystemsError::UnsupportedShape(format!(
            "the part at infinity must hold a single centre node, got {}",
            centre_nodes.len()
        )));
    }
    let centre = centre_nodes[0];
    let peripheral: Vec<NodeId> = q.nodes().filter(|&n| n != centre).collect();

    let mut params = Parameters::none();
    let time_ids: Vec<ParamId> = peripheral
        .iter()
        .map(|&n| params.declare(&format!("t_{}", q.label(n))))
        .collect();

    let mut entries = Vec::new();
    for (i, &ni) in peripheral.iter().enumerate() {
        let mut pot = Potential::new();
        for (j, &nj) in peripheral.iter().enumerate() {
            if i == j {
                continue;
            }
            let cycle = Cycle::new(
                q,
                vec![
                    q.arrow_between(centre, ni).expect("star edge"),
                    q.arrow_between(ni, centre).expect("star edge"),
                    q.arrow_between(centre, nj).expect("star edge"),
                    q.arrow_between(nj, centre).expect("star edge"),
                ],
            )?;
            let dt = &Scalar::var(time_ids[i]) - &Scalar::var(time_ids[j]);
            pot.add_term(cycle, Scalar::one().div(&dt).expect("distinct times"));
        }
        entries.push((ni, time_ids[i], pot));
    }
    HamiltonianSystem::new(ctx, params, entries)
}

/// Outcome of one pairwise flatness check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairReport {
    pub i: usize,
    pub j: usize,
    /// Symmetry of mixed time derivatives.
    pub derivative_symmetric: bool,
    /// Vanishing of the bracket (Poisson bracket or commutator).
    pub bracket_vanishes: bool,
    /// Rendered offending element on failure.
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatnessReport {
    pub pairs: Vec<PairReport>,
}

impl FlatnessReport {
    pub fn all_pass(&self) -> bool {
        self.pairs
            .iter()
            .all(|p| p.derivative_symmetric && p.bracket_vanishes)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlatnessKind {
    Classical,
    Quantum,
}

/// Check strong flatness: for every pair of times, the mixed derivative
/// difference and the bracket must vanish exactly. Pairs are checked
/// independently (in parallel when enabled) and reported individually.
pub fn check_flatness(
    ctx: &QuiverContext,
    sys: &HamiltonianSystem,
    kind: FlatnessKind,
) -> Result<FlatnessReport, SystemsError> {
    let n = sys.len();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            pairs.push((i, j));
        }
    }

    let reports: Vec<Result<PairReport, SystemsError>> = match kind {
        FlatnessKind::Classical => {
            let hams: Vec<PolyElement> = (0..n)
                .map(|i| sys.classical_hamiltonian(ctx, i))
                .collect();
            par::map_collect(&pairs, |&(i, j)| {
                let ti = sys.times[i].1;
                let tj = sys.times[j].1;
                let dij = hams[i].map_coefficients(|c| c.partial(tj));
                let dji = hams[j].map_coefficients(|c| c.partial(ti));
                let sym = dij.sub(&dji);
                let bracket = poisson_bracket(ctx, &hams[i], &hams[j]);
                Ok(pair_report(
                    ctx,
                    sys,
                    i,
                    j,
                    sym.is_zero(),
                    bracket.is_zero(),
                    || {
                        if !sym.is_zero() {
                            sym.to_text(ctx.quiver(), &sys.params)
                        } else {
                            bracket.to_text(ctx.quiver(), &sys.params)
                        }
                    },
                ))
            })
        }
        FlatnessKind::Quantum => {
            let hams: Vec<Result<ReesElement, SystemsError>> = (0..n)
                .map(|i| sys.quantum_hamiltonian(ctx, i))
                .collect();
            let mut ready = Vec::with_capacity(n);
            for h in hams {
                ready.push(h?);
            }
            let hams = ready;
            par::map_collect(&pairs, |&(i, j)| {
                let ti = sys.times[i].1;
                let tj = sys.times[j].1;
                let dij = hams[i].map_coefficients(|c| c.partial(tj));
                let dji = hams[j].map_coefficients(|c| c.partial(ti));
                let sym = dij.sub(&dji);
                let bracket = rees_commutator(ctx, &hams[i], &hams[j]);
                Ok(pair_report(
                    ctx,
                    sys,
                    i,
                    j,
                    sym.is_zero(),
                    bracket.is_zero(),
                    || {
                        if !sym.is_zero() {
                            sym.to_text(ctx.quiver(), &sys.params)
                        } else {
                            bracket.to_text(ctx.quiver(), &sys.params)
                        }
                    },
                ))
            })
        }
    };

    let mut out = Vec::with_capacity(reports.len());
    for r in reports {
        out.push(r?);
    }
    Ok(FlatnessReport { pairs: out })
}

fn pair_report(
    _ctx: &QuiverContext,
    _sys: &HamiltonianSystem,
    i: usize,
    j: usize,
    derivative_symmetric: bool,
    bracket_vanishes: bool,
    witness: impl FnOnce() -> String,
) -> PairReport {
    let witness = if derivative_symmetric && bracket_vanishes {
        None
    } else {
        Some(witness())
    };
    PairReport {
        i,
        j,
        derivative_symmetric,
        bracket_vanishes,
        witness,
    }
}

/// Convenience: build a star-quiver context (centre at infinity, one
/// finite part for the peripherals) with the given dimensions.
pub fn star_context(
    centre_dim: usize,
    peripheral_dims: &[usize],
    finite_point: Scalar,
) -> Result<QuiverContext, SystemsError> {
    use crate::projective::{Embedding, ProjPoint};
    use crate::quiver::QuiverData;
    let peripherals: Vec<String> = (1..=peripheral_dims.len())
        .map(|i| format!("p{i}"))
        .collect();
    let parts = vec![vec!["inf".to_string()], peripherals.clone()];
    let mut dims: BTreeMap<String, usize> = BTreeMap::new();
    dims.insert("inf".into(), centre_dim);
    for (label, d) in peripherals.iter().zip(peripheral_dims) {
        dims.insert(label.clone(), *d);
    }
    let q = QuiverData::k_partite(&parts, &dims)?;
    let point = finite_point
        .as_rational()
        .ok_or_else(|| SystemsError::UnsupportedShape("finite point must be rational".into()))?;
    let emb = Embedding::for_quiver(&q, vec![ProjPoint::Infinity, ProjPoint::Finite(point)])
        .map_err(|e| SystemsError::UnsupportedShape(e.to_string()))?;
    Ok(QuiverContext::new(std::sync::Arc::new(q), emb))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat_int;
    use crate::weyl::semiclassical_limit;

    fn schlesinger(centre: usize, peripherals: &[usize]) -> (QuiverContext, HamiltonianSystem) {
        let ctx = star_context(centre, peripherals, Scalar::from_int(0)).unwrap();
        let sys = build_schlesinger(&ctx).unwrap();
        (ctx, sys)
    }

    #[test]
    fn single_peripheral_system_is_empty() {
        let (ctx, sys) = schlesinger(1, &[1]);
        assert_eq!(sys.len(), 1);
        assert!(sys.classical_hamiltonian(&ctx, 0).is_zero());
        let report = check_flatness(&ctx, &sys, FlatnessKind::Classical).unwrap();
        assert!(report.pairs.is_empty() && report.all_pass(), "vacuous pass");
    }

    #[test]
    fn two_peripheral_hamiltonians_are_opposite() {
        // with two peripherals the potentials share the one degenerate
        // 4-cycle; the coefficients are antisymmetric in the times
        let (ctx, sys) = schlesinger(1, &[1, 1]);
        let h1 = sys.classical_hamiltonian(&ctx, 0);
        let h2 = sys.classical_hamiltonian(&ctx, 1);
        assert_eq!(h1, h2.neg());
        assert!(!h1.is_zero());
    }

    /// Expansion oracle for three peripherals, scalar dims: write the
    /// Hamiltonian directly as a sum over matrix coordinates.
    #[test]
    fn three_peripheral_expansion() {
        let (ctx, sys) = schlesinger(1, &[1, 1, 1]);
        let q = ctx.quiver();
        let centre = q.node_by_label("inf").unwrap();
        let h1 = sys.classical_hamiltonian(&ctx, 0);

        let mut expect = PolyElement::zero();
        let p1 = q.node_by_label("p1").unwrap();
        for (j, tj) in [("p2", 1usize), ("p3", 2usize)] {
            let nj = q.node_by_label(j).unwrap();
            let coeff = Scalar::one()
                .div(&(&Scalar::var(ParamId(0)) - &Scalar::var(ParamId(tj))))
                .unwrap();
            // trace of the degenerate 4-cycle: in scalar dims it is the
            // product of the four coordinates
            let mut term = PolyElement::one();
            for a in [
                q.arrow_between(centre, p1).unwrap(),
                q.arrow_between(p1, centre).unwrap(),
                q.arrow_between(centre, nj).unwrap(),
                q.arrow_between(nj, centre).unwrap(),
            ] {
                term = term.mul(&PolyElement::generator(crate::weyl::Generator::new(
                    a, 0, 0,
                )));
            }
            expect = expect.add(&term.scale(&coeff));
        }
        assert_eq!(h1, expect);
    }

    #[test]
    fn schlesinger_shape_validation() {
        // centre not at infinity
        let ctx = {
            use crate::projective::{Embedding, ProjPoint};
            use crate::quiver::QuiverData;
            let parts = vec![vec!["c".to_string()], vec!["p1".to_string()]];
            let dims: BTreeMap<String, usize> =
                parts.iter().flatten().map(|l| (l.clone(), 1)).collect();
            let q = QuiverData::k_partite(&parts, &dims).unwrap();
            let emb = Embedding::for_quiver(
                &q,
                vec![
                    ProjPoint::Finite(rat_int(0)),
                    ProjPoint::Finite(rat_int(1)),
                ],
            )
            .unwrap();
            QuiverContext::new(std::sync::Arc::new(q), emb)
        };
        assert!(matches!(
            build_schlesinger(&ctx),
            Err(SystemsError::UnsupportedShape(_))
        ));
    }

    #[test]
    fn quantisation_fidelity() {
        let (ctx, sys) = schlesinger(2, &[1, 1, 1]);
        for i in 0..sys.len() {
            let h = sys.classical_hamiltonian(&ctx, i);
            let hq = sys.quantum_hamiltonian(&ctx, i).unwrap();
            assert_eq!(semiclassical_limit(&hq), h, "time {i}");
        }
    }

    #[test]
    fn classical_flatness_small() {
        let (ctx, sys) = schlesinger(1, &[1, 1, 1]);
        let report = check_flatness(&ctx, &sys, FlatnessKind::Classical).unwrap();
        assert!(report.all_pass(), "{:?}", report);
    }

    #[test]
    fn quantum_flatness_small() {
        let (ctx, sys) = schlesinger(1, &[1, 1, 1]);
        let report = check_flatness(&ctx, &sys, FlatnessKind::Quantum).unwrap();
        assert!(report.all_pass(), "{:?}", report);
    }

    #[test]
    fn broken_system_fails_with_witness() {
        let (ctx, mut sys) = schlesinger(1, &[1, 1, 1]);
        sys.perturb_coefficient(0, Scalar::from_int(2));
        let report = check_flatness(&ctx, &sys, FlatnessKind::Classical).unwrap();
        assert!(!report.all_pass());
        assert!(report
            .pairs
            .iter()
            .any(|p| p.witness.is_some()),
            "a witness is printed on failure");
    }
}
