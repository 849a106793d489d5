//! Sparse multivariate polynomials over the rationals.
//!
//! Monomials store exponent vectors with trailing zeros trimmed, so a
//! polynomial does not need to know how many parameters are declared
//! globally; constants work in any parameter context. The term order is
//! graded lexicographic on parameter index.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Signed, Zero};
use smallvec::SmallVec;

use super::{ParamId, Rational};

/// A power product of time parameters; exponent vector with trailing
/// zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: SmallVec<[u16; 4]>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(id: ParamId) -> Self {
        Self::var_pow(id, 1)
    }

    pub fn var_pow(id: ParamId, e: u16) -> Self {
        let mut exps = SmallVec::new();
        if e > 0 {
            exps.resize(id.0 + 1, 0);
            exps[id.0] = e;
        }
        Monomial { exps }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| u32::from(e)).sum()
    }

    pub fn exponent(&self, id: ParamId) -> u16 {
        self.exps.get(id.0).copied().unwrap_or(0)
    }

    /// Largest parameter index with nonzero exponent.
    pub fn max_var(&self) -> Option<ParamId> {
        if self.exps.is_empty() {
            None
        } else {
            Some(ParamId(self.exps.len() - 1))
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.exps.len().max(other.exps.len());
        let mut exps = SmallVec::with_capacity(n);
        for i in 0..n {
            let a = self.exps.get(i).copied().unwrap_or(0);
            let b = other.exps.get(i).copied().unwrap_or(0);
            exps.push(a + b);
        }
        Monomial { exps }
    }

    /// Componentwise quotient, if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if other.exps.len() > self.exps.len() {
            return None;
        }
        let mut exps: SmallVec<[u16; 4]> = SmallVec::with_capacity(self.exps.len());
        for i in 0..self.exps.len() {
            let a = self.exps[i];
            let b = other.exps.get(i).copied().unwrap_or(0);
            if b > a {
                return None;
            }
            exps.push(a - b);
        }
        let mut m = Monomial { exps };
        m.trim();
        Some(m)
    }

    fn trim(&mut self) {
        while self.exps.last() == Some(&0) {
            self.exps.pop();
        }
    }

    pub fn iter_vars(&self) -> impl Iterator<Item = (ParamId, u16)> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| (ParamId(i), e))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        // graded lexicographic: total degree first, then exponent of the
        // earliest parameter decides
        self.degree().cmp(&other.degree()).then_with(|| {
            let n = self.exps.len().max(other.exps.len());
            for i in 0..n {
                let a = self.exps.get(i).copied().unwrap_or(0);
                let b = other.exps.get(i).copied().unwrap_or(0);
                match a.cmp(&b) {
                    Ordering::Equal => continue,
                    ord => return ord,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial over [`Rational`], stored with no zero
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn one() -> Self {
        MPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        MPoly { terms }
    }

    pub fn var(id: ParamId) -> Self {
        MPoly::from_term(Monomial::var(id), Rational::one())
    }

    pub fn from_term(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = MPoly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Monomial::one())
                .map(num::One::is_one)
                .unwrap_or(false)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one())
    }

    /// The constant term.
    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::one())
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Leading term under the graded-lexicographic order.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.mul(m), c.clone()))
                .collect(),
        }
    }

    /// Largest parameter index appearing, if any.
    pub fn max_var(&self) -> Option<ParamId> {
        self.terms
            .keys()
            .filter_map(Monomial::max_var)
            .max_by_key(|p| p.0)
    }

    /// Formal partial derivative.
    pub fn derivative(&self, v: ParamId) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            let lower = m.div(&Monomial::var(v)).expect("exponent checked");
            out.add_term(lower, c * Rational::from_integer(i64::from(e).into()));
        }
        out
    }

    /// Evaluate at a full assignment; parameters beyond the slice length
    /// must not appear.
    pub fn evaluate(&self, assignment: &[Rational]) -> Option<Rational> {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (v, e) in m.iter_vars() {
                let x = assignment.get(v.0)?;
                for _ in 0..e {
                    term *= x;
                }
            }
            acc += term;
        }
        Some(acc)
    }

    /// Exact division; `None` if `other` does not divide `self`.
    pub fn div_exact(&self, other: &MPoly) -> Option<MPoly> {
        if other.is_zero() {
            return None;
        }
        let mut rem = self.clone();
        let mut quot = MPoly::zero();
        let (lm, lc) = other.leading().expect("nonzero");
        let (lm, lc) = (lm.clone(), lc.clone());
        while !rem.is_zero() {
            let (rm, rc) = rem.leading().expect("nonzero");
            let qm = rm.div(&lm)?;
            let qc = rc / &lc;
            let t = MPoly::from_term(qm, qc);
            rem = &rem - &(&t * other);
            quot = &quot + &t;
        }
        Some(quot)
    }

    /// Monic normalisation: divide by the leading coefficient. Zero stays
    /// zero.
    pub fn monic(&self) -> MPoly {
        match self.leading() {
            None => MPoly::zero(),
            Some((_, lc)) => {
                let inv = Rational::one() / lc;
                self.scale(&inv)
            }
        }
    }

    /// Greatest common divisor, normalised monic. `gcd(0, g) = monic(g)`.
    pub fn gcd(&self, other: &MPoly) -> MPoly {
        gcd_mpoly(self, other).monic()
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

// -- multivariate gcd via primitive pseudo-remainder sequences ------------

/// View of a polynomial as univariate in `v` with `MPoly` coefficients.
fn univariate_in(p: &MPoly, v: ParamId) -> BTreeMap<u16, MPoly> {
    let mut coeffs: BTreeMap<u16, MPoly> = BTreeMap::new();
    for (m, c) in p.terms() {
        let e = m.exponent(v);
        let rest = m.div(&Monomial::var_pow(v, e)).expect("own exponent");
        coeffs
            .entry(e)
            .or_insert_with(MPoly::zero)
            .add_term(rest, c.clone());
    }
    coeffs.retain(|_, c| !c.is_zero());
    coeffs
}

fn from_univariate(coeffs: &BTreeMap<u16, MPoly>, v: ParamId) -> MPoly {
    let mut out = MPoly::zero();
    for (e, c) in coeffs {
        out = &out + &c.mul_monomial(&Monomial::var_pow(v, *e));
    }
    out
}

fn uni_degree(coeffs: &BTreeMap<u16, MPoly>) -> u16 {
    coeffs.keys().next_back().copied().unwrap_or(0)
}

fn uni_leading(coeffs: &BTreeMap<u16, MPoly>) -> MPoly {
    coeffs
        .values()
        .next_back()
        .cloned()
        .unwrap_or_else(MPoly::zero)
}

/// Content of `p` with respect to `v`: gcd of the univariate coefficients.
fn content_in(p: &MPoly, v: ParamId) -> MPoly {
    let coeffs = univariate_in(p, v);
    let mut acc = MPoly::zero();
    for c in coeffs.values() {
        acc = gcd_mpoly(&acc, c);
        if acc.is_constant() && !acc.is_zero() {
            return MPoly::one();
        }
    }
    acc.monic()
}

/// Pseudo-remainder of `a` by `b`, both as univariate coefficient maps.
/// Requires `deg a >= deg b` and `b` nonzero.
fn pseudo_rem(a: &BTreeMap<u16, MPoly>, b: &BTreeMap<u16, MPoly>) -> BTreeMap<u16, MPoly> {
    let db = uni_degree(b);
    let lb = uni_leading(b);
    let mut r = a.clone();
    while !r.is_empty() && uni_degree(&r) >= db {
        let dr = uni_degree(&r);
        let lr = uni_leading(&r);
        // r <- lb*r - lr * x^(dr-db) * b
        let mut next: BTreeMap<u16, MPoly> = BTreeMap::new();
        for (e, c) in &r {
            let scaled = c * &lb;
            if !scaled.is_zero() {
                next.insert(*e, scaled);
            }
        }
        for (e, c) in b {
            let shifted = e + (dr - db);
            let sub = c * &lr;
            let entry = next.entry(shifted).or_insert_with(MPoly::zero);
            *entry = &*entry - &sub;
        }
        next.retain(|_, c| !c.is_zero());
        // the top term cancels by construction
        debug_assert!(next.is_empty() || uni_degree(&next) < dr);
        r = next;
    }
    r
}

fn gcd_mpoly(f: &MPoly, g: &MPoly) -> MPoly {
    if f.is_zero() {
        return g.clone();
    }
    if g.is_zero() {
        return f.clone();
    }
    if f.is_constant() || g.is_constant() {
        return MPoly::one();
    }
    let v = f.max_var().max(g.max_var()).expect("nonconstant");

    let cf = content_in(f, v);
    let cg = content_in(g, v);
    let c = gcd_mpoly(&cf, &cg);

    let pf = f.div_exact(&cf).expect("content divides");
    let pg = g.div_exact(&cg).expect("content divides");

    let (mut a, mut b) = if uni_degree(&univariate_in(&pf, v)) >= uni_degree(&univariate_in(&pg, v))
    {
        (univariate_in(&pf, v), univariate_in(&pg, v))
    } else {
        (univariate_in(&pg, v), univariate_in(&pf, v))
    };

    while !b.is_empty() {
        if uni_degree(&b) == 0 {
            // coprime as univariate polynomials in v
            return c;
        }
        let r = pseudo_rem(&a, &b);
        let r_poly = from_univariate(&r, v);
        let r_prim = if r_poly.is_zero() {
            BTreeMap::new()
        } else {
            let cont = content_in(&r_poly, v);
            univariate_in(&r_poly.div_exact(&cont).expect("content divides"), v)
        };
        a = b;
        b = r_prim;
    }

    let g_v = from_univariate(&a, v);
    let g_prim = {
        let cont = content_in(&g_v, v);
        g_v.div_exact(&cont).expect("content divides")
    };
    &c * &g_prim
}

/// Sign of the leading coefficient, used to normalise printed output.
pub(crate) fn leading_is_negative(p: &MPoly) -> bool {
    p.leading().map(|(_, c)| c.is_negative()).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{rat, rat_int};

    fn t(i: usize) -> MPoly {
        MPoly::var(ParamId(i))
    }

    #[test]
    fn grlex_order() {
        let one = Monomial::one();
        let t1 = Monomial::var(ParamId(0));
        let t2 = Monomial::var(ParamId(1));
        let t1t2 = t1.mul(&t2);
        let t1sq = Monomial::var_pow(ParamId(0), 2);
        assert!(one < t1);
        assert!(t2 < t1);
        assert!(t1t2 < t1sq);
        assert!(t1 < t1t2);
    }

    #[test]
    fn monomial_trim_roundtrip() {
        let m = Monomial::var_pow(ParamId(2), 0);
        assert!(m.is_one());
        let m = Monomial::var(ParamId(2));
        let q = m.div(&Monomial::var(ParamId(2))).unwrap();
        assert!(q.is_one());
    }

    #[test]
    fn arithmetic_and_division() {
        // (t1^2 - t2^2) / (t1 - t2) = t1 + t2
        let num = &(&t(0) * &t(0)) - &(&t(1) * &t(1));
        let den = &t(0) - &t(1);
        let q = num.div_exact(&den).unwrap();
        assert_eq!(q, &t(0) + &t(1));
        // non-divisible
        assert!(t(0).div_exact(&den).is_none());
    }

    #[test]
    fn gcd_shared_factor() {
        let d = &t(0) - &t(1);
        let f = &d * &(&t(0) + &t(1));
        let g = &d * &MPoly::constant(rat(3, 2));
        let got = f.gcd(&g);
        assert_eq!(got, d.monic());
    }

    #[test]
    fn gcd_coprime_is_one() {
        let f = &t(0) + &MPoly::one();
        let g = &t(1) + &MPoly::constant(rat_int(2));
        assert_eq!(f.gcd(&g), MPoly::one());
    }

    #[test]
    fn gcd_three_vars() {
        let d = &(&t(0) * &t(1)) + &t(2);
        let f = &d * &(&t(0) + &t(2));
        let g = &d * &d;
        assert_eq!(f.gcd(&g), d.monic());
        assert!(f.div_exact(&f.gcd(&g)).is_some());
    }

    #[test]
    fn derivative_and_eval() {
        // d/dt1 (t1^2 t2) = 2 t1 t2
        let p = &(&t(0) * &t(0)) * &t(1);
        let dp = p.derivative(ParamId(0));
        assert_eq!(dp, (&(&t(0) * &t(1))).scale(&rat_int(2)));
        let v = p.evaluate(&[rat_int(3), rat_int(5)]).unwrap();
        assert_eq!(v, rat_int(45));
    }
}
