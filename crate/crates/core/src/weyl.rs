//! The coordinate algebras of a quiver representation space: the
//! commutative polynomial ring, the Weyl algebra with normal-ordered
//! arithmetic, the word-length (Bernstein) filtration, and the graded
//! `h`-layer with its semiclassical limit.
//!
//! Generators are the matrix-entry coordinates of the arrows. A global
//! total order on generators (arrow id, then row, then column) fixes the
//! normal form: every word is stored sorted nondecreasingly. All
//! commutators of generators are scalars, so sorting a word only ever
//! produces scalar correction terms and shorter words.

use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;
use thiserror::Error;

use crate::context::QuiverContext;
use crate::quiver::ArrowId;
use crate::scalars::{Parameters, Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeylError {
    #[error("element has order {order}, exceeding the requested degree {degree}")]
    OrderViolation { order: usize, degree: usize },
    #[error("generator indices out of range for the quiver dimensions")]
    BadIndices,
}

/// A matrix-entry coordinate of one arrow: row index in the target
/// dimension, column index in the source dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    pub arrow: ArrowId,
    pub row: u16,
    pub col: u16,
}

impl Generator {
    pub fn new(arrow: ArrowId, row: usize, col: usize) -> Self {
        Generator {
            arrow,
            row: row as u16,
            col: col as u16,
        }
    }

    pub fn checked(
        ctx: &QuiverContext,
        arrow: ArrowId,
        row: usize,
        col: usize,
    ) -> Result<Self, WeylError> {
        let q = ctx.quiver();
        if row >= q.dim(q.target(arrow)) || col >= q.dim(q.source(arrow)) {
            return Err(WeylError::BadIndices);
        }
        Ok(Self::new(arrow, row, col))
    }
}

/// A product of generators. Sorted nondecreasingly it is simultaneously
/// the normal form of a Weyl-algebra word and a commutative monomial.
pub type Word = SmallVec<[Generator; 6]>;

fn sorted(mut w: Word) -> Word {
    w.sort();
    w
}

/// The scalar commutator of two generators: nonzero exactly when they sit
/// on opposite arrows with transposed indices, in which case it is the
/// reciprocal weight of the first one's arrow.
fn commutator(ctx: &QuiverContext, x: Generator, y: Generator) -> Option<Rational> {
    if ctx.quiver().opposite(x.arrow) == y.arrow && x.row == y.col && x.col == y.row {
        Some(ctx.eps_inv(x.arrow).clone())
    } else {
        None
    }
}

// -- shared term-map plumbing ---------------------------------------------

fn add_term(terms: &mut BTreeMap<Word, Scalar>, w: Word, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match terms.entry(w) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let sum = &*e.get() + &c;
            if sum.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = sum;
            }
        }
    }
}

fn fmt_word(q: &crate::quiver::QuiverData, w: &Word, out: &mut String) {
    for (i, g) in w.iter().enumerate() {
        if i > 0 {
            out.push('*');
        }
        out.push_str(&format!(
            "B[{};{},{}]",
            q.arrow_label(g.arrow),
            g.row + 1,
            g.col + 1
        ));
    }
}

fn fmt_terms(
    q: &crate::quiver::QuiverData,
    params: &Parameters,
    terms: &BTreeMap<Word, Scalar>,
) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (w, c)) in terms.iter().enumerate() {
        if i > 0 {
            out.push_str(" + ");
        }
        let coeff = c.to_text(params);
        if w.is_empty() {
            out.push_str(&coeff);
            continue;
        }
        if coeff != "1" {
            let needs_parens = coeff.contains(['+', '-', '/', '*']);
            if needs_parens {
                out.push('(');
                out.push_str(&coeff);
                out.push(')');
            } else {
                out.push_str(&coeff);
            }
            out.push('*');
        }
        fmt_word(q, w, &mut out);
    }
    out
}

/// Element of the commutative polynomial ring on the representation
/// space: monomials (sorted words) with [`Scalar`] coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PolyElement {
    terms: BTreeMap<Word, Scalar>,
}

/// Element of the Weyl algebra in normal form: sorted words with
/// [`Scalar`] coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WeylElement {
    terms: BTreeMap<Word, Scalar>,
}

macro_rules! common_element_impl {
    ($ty:ident) => {
        impl $ty {
            pub fn zero() -> Self {
                Self::default()
            }

            pub fn one() -> Self {
                Self::scalar(Scalar::one())
            }

            pub fn scalar(c: Scalar) -> Self {
                let mut terms = BTreeMap::new();
                if !c.is_zero() {
                    terms.insert(Word::new(), c);
                }
                $ty { terms }
            }

            pub fn generator(g: Generator) -> Self {
                Self::from_word([g].into_iter().collect(), Scalar::one())
            }

            /// Single term; the word is sorted on entry.
            pub fn from_word(w: Word, c: Scalar) -> Self {
                let mut terms = BTreeMap::new();
                if !c.is_zero() {
                    terms.insert(sorted(w), c);
                }
                $ty { terms }
            }

            pub fn is_zero(&self) -> bool {
                self.terms.is_empty()
            }

            pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
                self.terms.iter()
            }

            pub fn num_terms(&self) -> usize {
                self.terms.len()
            }

            pub fn coefficient(&self, w: &Word) -> Scalar {
                self.terms.get(w).cloned().unwrap_or_else(Scalar::zero)
            }

            pub fn add(&self, other: &Self) -> Self {
                let mut terms = self.terms.clone();
                for (w, c) in &other.terms {
                    add_term(&mut terms, w.clone(), c.clone());
                }
                $ty { terms }
            }

            pub fn sub(&self, other: &Self) -> Self {
                let mut terms = self.terms.clone();
                for (w, c) in &other.terms {
                    add_term(&mut terms, w.clone(), -c);
                }
                $ty { terms }
            }

            pub fn neg(&self) -> Self {
                $ty {
                    terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
                }
            }

            pub fn scale(&self, c: &Scalar) -> Self {
                if c.is_zero() {
                    return Self::zero();
                }
                $ty {
                    terms: self
                        .terms
                        .iter()
                        .map(|(w, x)| (w.clone(), x * c))
                        .collect(),
                }
            }

            pub fn scale_rational(&self, c: &Rational) -> Self {
                self.scale(&Scalar::from_rational(c.clone()))
            }

            /// Apply a map to every coefficient (used for formal partial
            /// derivatives of time-dependent elements).
            pub fn map_coefficients(&self, f: impl Fn(&Scalar) -> Scalar) -> Self {
                let mut terms = BTreeMap::new();
                for (w, c) in &self.terms {
                    add_term(&mut terms, w.clone(), f(c));
                }
                $ty { terms }
            }

            /// Maximal word length with nonzero coefficient; 0 for the
            /// zero element.
            pub fn order(&self) -> usize {
                self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
            }

            pub fn to_text(&self, q: &crate::quiver::QuiverData, params: &Parameters) -> String {
                fmt_terms(q, params, &self.terms)
            }
        }
    };
}

common_element_impl!(PolyElement);
common_element_impl!(WeylElement);

impl PolyElement {
    /// Commutative product.
    pub fn mul(&self, other: &PolyElement) -> PolyElement {
        let mut terms = BTreeMap::new();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let mut w: Word = w1.clone();
                w.extend(w2.iter().copied());
                add_term(&mut terms, sorted(w), c1 * c2);
            }
        }
        PolyElement { terms }
    }

    /// The degree-`k` homogeneous part.
    pub fn homogeneous_part(&self, k: usize) -> PolyElement {
        PolyElement {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() == k)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }
}

impl WeylElement {
    /// Reinterpret a commutative polynomial as the normal-ordered element
    /// with the same sorted words (the coordinate-wise quantisation of the
    /// monomial basis).
    pub fn from_poly(p: &PolyElement) -> WeylElement {
        WeylElement {
            terms: p.terms.clone(),
        }
    }

    /// Read the words of a normal form as commutative monomials.
    pub fn as_poly(&self) -> PolyElement {
        PolyElement {
            terms: self.terms.clone(),
        }
    }
}

/// Normal-order a word, producing its expansion over sorted words.
/// Adjacent out-of-order generators are swapped, each swap contributing
/// the scalar commutator times the word with the pair deleted.
fn normal_order(ctx: &QuiverContext, word: Word, coeff: Scalar) -> BTreeMap<Word, Scalar> {
    let mut out: BTreeMap<Word, Scalar> = BTreeMap::new();
    let mut stack: Vec<(Word, Scalar)> = vec![(word, coeff)];
    'outer: while let Some((w, c)) = stack.pop() {
        if c.is_zero() {
            continue;
        }
        for p in 0..w.len().saturating_sub(1) {
            if w[p] > w[p + 1] {
                let mut swapped = w.clone();
                swapped.swap(p, p + 1);
                if let Some(k) = commutator(ctx, w[p], w[p + 1]) {
                    let mut shorter = w.clone();
                    shorter.remove(p + 1);
                    shorter.remove(p);
                    stack.push((shorter, c.scale_rational(&k)));
                }
                stack.push((swapped, c));
                continue 'outer;
            }
        }
        add_term(&mut out, w, c);
    }
    out
}

/// The noncommutative product of the Weyl algebra at the context's
/// embedding, with the result in normal form.
pub fn weyl_product(ctx: &QuiverContext, x: &WeylElement, y: &WeylElement) -> WeylElement {
    let mut terms = BTreeMap::new();
    for (w1, c1) in &x.terms {
        for (w2, c2) in &y.terms {
            let mut w: Word = w1.clone();
            w.extend(w2.iter().copied());
            for (nw, nc) in normal_order(ctx, w, c1 * c2) {
                add_term(&mut terms, nw, nc);
            }
        }
    }
    WeylElement { terms }
}

/// Commutator `x*y - y*x` in the Weyl algebra.
pub fn weyl_commutator(ctx: &QuiverContext, x: &WeylElement, y: &WeylElement) -> WeylElement {
    weyl_product(ctx, x, y).sub(&weyl_product(ctx, y, x))
}

/// The Poisson bracket of the coordinate ring: on generators it is the
/// reciprocal arrow weight pairing opposite matrix entries, extended as a
/// biderivation.
pub fn poisson_bracket(ctx: &QuiverContext, f: &PolyElement, g: &PolyElement) -> PolyElement {
    let mut terms = BTreeMap::new();
    for (w1, c1) in &f.terms {
        for (w2, c2) in &g.terms {
            let c = c1 * c2;
            for i in 0..w1.len() {
                for j in 0..w2.len() {
                    if let Some(k) = commutator(ctx, w1[i], w2[j]) {
                        let mut rest: Word = w1.clone();
                        rest.remove(i);
                        for (jj, gen) in w2.iter().enumerate() {
                            if jj != j {
                                rest.push(*gen);
                            }
                        }
                        add_term(&mut terms, sorted(rest), c.scale_rational(&k));
                    }
                }
            }
        }
    }
    PolyElement { terms }
}

/// Bernstein order of an element: maximal word length (0 for zero).
pub fn bernstein_order(x: &WeylElement) -> usize {
    x.order()
}

/// The degree-`k` principal symbol: the homogeneous part of word length
/// exactly `k`, read as a commutative polynomial. Errors when the element
/// has order above `k`.
pub fn symbol(x: &WeylElement, k: usize) -> Result<PolyElement, WeylError> {
    let order = bernstein_order(x);
    if order > k {
        return Err(WeylError::OrderViolation { order, degree: k });
    }
    Ok(PolyElement {
        terms: x
            .terms
            .iter()
            .filter(|(w, _)| w.len() == k)
            .map(|(w, c)| (w.clone(), c.clone()))
            .collect(),
    })
}

/// Element of the graded `h`-layer: a finite sum of Weyl elements `f_k`
/// at grades `k`, with `order(f_k) <= k`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ReesElement {
    grades: BTreeMap<usize, WeylElement>,
}

impl ReesElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The grade-one element `h`.
    pub fn hbar() -> Self {
        Self::from_part(1, WeylElement::one()).expect("order zero")
    }

    pub fn scalar(c: Scalar) -> Self {
        Self::from_part(0, WeylElement::scalar(c)).expect("order zero")
    }

    /// Place a Weyl element at a grade; the grade must dominate its
    /// order.
    pub fn from_part(grade: usize, f: WeylElement) -> Result<Self, WeylError> {
        let order = bernstein_order(&f);
        if order > grade {
            return Err(WeylError::OrderViolation {
                order,
                degree: grade,
            });
        }
        let mut grades = BTreeMap::new();
        if !f.is_zero() {
            grades.insert(grade, f);
        }
        Ok(ReesElement { grades })
    }

    pub fn from_parts(
        parts: impl IntoIterator<Item = (usize, WeylElement)>,
    ) -> Result<Self, WeylError> {
        let mut out = ReesElement::zero();
        for (grade, f) in parts {
            out = out.add(&Self::from_part(grade, f)?);
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.grades.is_empty()
    }

    pub fn part(&self, grade: usize) -> WeylElement {
        self.grades.get(&grade).cloned().unwrap_or_default()
    }

    pub fn parts(&self) -> impl Iterator<Item = (usize, &WeylElement)> {
        self.grades.iter().map(|(k, f)| (*k, f))
    }

    pub fn max_grade(&self) -> usize {
        self.grades.keys().next_back().copied().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut grades = self.grades.clone();
        for (k, f) in &other.grades {
            let entry = grades.entry(*k).or_default();
            *entry = entry.add(f);
            if entry.is_zero() {
                grades.remove(k);
            }
        }
        ReesElement { grades }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        ReesElement {
            grades: self.grades.iter().map(|(k, f)| (*k, f.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        ReesElement {
            grades: self.grades.iter().map(|(k, f)| (*k, f.scale(c))).collect(),
        }
    }

    pub fn map_coefficients(&self, f: impl Fn(&Scalar) -> Scalar) -> Self {
        let mut grades = BTreeMap::new();
        for (k, part) in &self.grades {
            let mapped = part.map_coefficients(&f);
            if !mapped.is_zero() {
                grades.insert(*k, mapped);
            }
        }
        ReesElement { grades }
    }

    /// Multiply by `h^n` (shift every grade up).
    pub fn shift_up(&self, n: usize) -> Self {
        ReesElement {
            grades: self
                .grades
                .iter()
                .map(|(k, f)| (*k + n, f.clone()))
                .collect(),
        }
    }

    /// Divide by `h^n`; each part must remain at a grade dominating its
    /// order.
    pub fn shift_down(&self, n: usize) -> Result<Self, WeylError> {
        let mut grades = BTreeMap::new();
        for (k, f) in &self.grades {
            let order = bernstein_order(f);
            if *k < n || order > k - n {
                return Err(WeylError::OrderViolation {
                    order,
                    degree: k.saturating_sub(n),
                });
            }
            grades.insert(k - n, f.clone());
        }
        Ok(ReesElement { grades })
    }

    pub fn to_text(&self, q: &crate::quiver::QuiverData, params: &Parameters) -> String {
        if self.grades.is_empty() {
            return "0".into();
        }
        self.grades
            .iter()
            .map(|(k, f)| {
                let inner = f.to_text(q, params);
                match k {
                    0 => inner,
                    1 => format!("({inner})*h"),
                    _ => format!("({inner})*h^{k}"),
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// The graded product: grade `k` times grade `l` lands in grade `k + l`
/// with the Weyl product of the parts. Filtration subadditivity keeps the
/// order constraint satisfied automatically.
pub fn rees_product(ctx: &QuiverContext, x: &ReesElement, y: &ReesElement) -> ReesElement {
    let mut out = ReesElement::zero();
    for (k, f) in x.parts() {
        for (l, g) in y.parts() {
            let prod = weyl_product(ctx, f, g);
            out = out.add(&ReesElement::from_part(k + l, prod).expect("filtration subadditive"));
        }
    }
    out
}

/// Commutator in the graded layer.
pub fn rees_commutator(ctx: &QuiverContext, x: &ReesElement, y: &ReesElement) -> ReesElement {
    rees_product(ctx, x, y).sub(&rees_product(ctx, y, x))
}

/// The semiclassical limit: gradewise top symbol, summed. Vanishes on
/// multiples of `h`.
pub fn semiclassical_limit(x: &ReesElement) -> PolyElement {
    let mut out = PolyElement::zero();
    for (k, f) in x.parts() {
        out = out.add(&symbol(f, k).expect("order constraint is an invariant"));
    }
    out
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B[a{};{},{}]", self.arrow.0, self.row + 1, self.col + 1)
    }
}

// -- text fixtures ---------------------------------------------------------

/// Parse a sum of `coeff*B[src->tgt;k,l]*...` terms as written by
/// [`WeylElement::to_text`]; coefficients are scalar expressions, indices
/// one-based. Intended for test fixtures.
pub fn parse_element(
    input: &str,
    q: &crate::quiver::QuiverData,
    params: &Parameters,
) -> Result<WeylElement, String> {
    let mut terms: BTreeMap<Word, Scalar> = BTreeMap::new();
    let input = input.trim();
    if input == "0" {
        return Ok(WeylElement::zero());
    }
    for piece in split_top_level(input)? {
        let (coeff_text, word_text) = split_coeff(&piece);
        let coeff = if coeff_text.is_empty() {
            Scalar::one()
        } else {
            crate::scalars::parse_scalar(&coeff_text, params).map_err(|e| e.to_string())?
        };
        let mut word = Word::new();
        for factor in word_text.split('*').filter(|s| !s.trim().is_empty()) {
            let factor = factor.trim();
            let inner = factor
                .strip_prefix("B[")
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| format!("bad factor {factor:?}"))?;
            let (label, indices) = inner
                .rsplit_once(';')
                .ok_or_else(|| format!("bad factor {factor:?}"))?;
            let arrow = q
                .arrow_by_label(label)
                .ok_or_else(|| format!("unknown arrow {label:?}"))?;
            let (row, col) = indices
                .split_once(',')
                .ok_or_else(|| format!("bad indices in {factor:?}"))?;
            let row: usize = row.trim().parse().map_err(|_| "bad row index".to_string())?;
            let col: usize = col.trim().parse().map_err(|_| "bad col index".to_string())?;
            if row == 0 || col == 0 {
                return Err("indices are one-based".into());
            }
            word.push(Generator::new(arrow, row - 1, col - 1));
        }
        add_term(&mut terms, sorted(word), coeff);
    }
    Ok(WeylElement { terms })
}

/// Split a sum at top-level `+` (terms may contain parenthesised signs).
fn split_top_level(s: &str) -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth = depth.checked_sub(1).ok_or("unbalanced parentheses")?;
                cur.push(ch);
            }
            '+' if depth == 0 => {
                out.push(cur.trim().to_string());
                cur = String::new();
            }
            _ => cur.push(ch),
        }
    }
    if depth != 0 {
        return Err("unbalanced parentheses".into());
    }
    out.push(cur.trim().to_string());
    out.retain(|p| !p.is_empty());
    Ok(out)
}

/// Split one term into its scalar-coefficient prefix and the `B[...]`
/// word.
fn split_coeff(term: &str) -> (String, String) {
    match term.find("B[") {
        None => (term.to_string(), String::new()),
        Some(0) => (String::new(), term.to_string()),
        Some(idx) => {
            let coeff = term[..idx].trim().trim_end_matches('*').trim();
            (coeff.to_string(), term[idx..].to_string())
        }
    }
}
