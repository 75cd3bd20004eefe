//! The free associative algebra on a small ordered alphabet, truncated
//! exp/log, the right-factor derivatives, the signed reversal, and the two
//! trace quotients (cyclic words, and cyclic words modulo signed reversal).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalars::{Rational, Scalar};

// ---- Alphabet ----

/// Ordered alphabet shared by all polynomials of one computation.
///
/// Letters are addressed by index; names are only used for I/O. Clones are
/// cheap (shared storage), equality compares the letter lists.
#[derive(Clone, Eq)]
pub struct Alphabet {
    letters: Arc<Vec<String>>,
}

impl Alphabet {
    pub fn new<S: Into<String>, I: IntoIterator<Item = S>>(letters: I) -> Self {
        let letters: Vec<String> = letters.into_iter().map(Into::into).collect();
        assert!(
            !letters.is_empty() && letters.len() <= 8,
            "alphabet size must be 1..=8"
        );
        Alphabet {
            letters: Arc::new(letters),
        }
    }

    /// The default two-letter alphabet, x < y.
    pub fn xy() -> Self {
        Alphabet::new(["x", "y"])
    }

    /// Generators t13 < t23 of the middle factor of the t4 decomposition.
    pub fn t4_middle() -> Self {
        Alphabet::new(["t13", "t23"])
    }

    /// Generators t14 < t24 < t34 of the inner ideal of the t4 decomposition.
    pub fn t4_inner() -> Self {
        Alphabet::new(["t14", "t24", "t34"])
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn name(&self, letter: u8) -> &str {
        &self.letters[letter as usize]
    }

    pub fn index_of(&self, name: &str) -> Option<u8> {
        self.letters.iter().position(|l| l == name).map(|i| i as u8)
    }
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.letters, &other.letters) || self.letters == other.letters
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alphabet{:?}", self.letters)
    }
}

// ---- Word ----

/// A word over an alphabet, stored as letter indices. `Ord` is plain
/// lexicographic order on the index sequences.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(letters: Vec<u8>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: u8) -> Self {
        Word(vec![l])
    }

    /// The word l^n.
    pub fn power(l: u8, n: usize) -> Self {
        Word(vec![l; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        let mut v = self.0.clone();
        v.reverse();
        Word(v)
    }

    pub fn count_letter(&self, l: u8) -> usize {
        self.0.iter().filter(|&&c| c == l).count()
    }

    /// Lexicographically least rotation.
    pub fn min_rotation(&self) -> Word {
        if self.0.len() <= 1 {
            return self.clone();
        }
        let n = self.0.len();
        let mut best = self.clone();
        let mut cur = self.0.clone();
        for _ in 1..n {
            cur.rotate_left(1);
            if cur[..] < best.0[..] {
                best = Word(cur.clone());
            }
        }
        best
    }

    /// A word is Lyndon when it is strictly smaller than all of its proper
    /// rotations.
    pub fn is_lyndon(&self) -> bool {
        let n = self.0.len();
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let mut cur = self.0.clone();
        for _ in 1..n {
            cur.rotate_left(1);
            if cur[..] <= self.0[..] {
                return false;
            }
        }
        true
    }

    /// Render with the alphabet's letter names.
    pub fn render(&self, alphabet: &Alphabet) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        self.0.iter().map(|&l| alphabet.name(l)).collect()
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w{:?}", self.0)
    }
}

// ---- AssocPoly ----

/// Element of the free associative algebra: a finite map word -> coefficient
/// with no stored zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct AssocPoly<C: Scalar> {
    alphabet: Alphabet,
    terms: BTreeMap<Word, C>,
}

impl<C: Scalar> AssocPoly<C> {
    pub fn zero(alphabet: Alphabet) -> Self {
        AssocPoly {
            alphabet,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(alphabet: Alphabet, word: Word, coeff: C) -> Self {
        let mut p = AssocPoly::zero(alphabet);
        p.add_term(word, coeff);
        p
    }

    pub fn letter(alphabet: Alphabet, l: u8, coeff: C) -> Self {
        assert!((l as usize) < alphabet.len(), "letter out of range");
        AssocPoly::monomial(alphabet, Word::letter(l), coeff)
    }

    pub fn constant(alphabet: Alphabet, c: C) -> Self {
        AssocPoly::monomial(alphabet, Word::empty(), c)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, word: &Word) -> C {
        self.terms.get(word).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&Word::empty())
    }

    /// Total degree of the highest term, None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::len).max()
    }

    pub fn add_term(&mut self, word: Word, coeff: C) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&coeff);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn check_compatible(&self, other: &Self) {
        assert!(
            self.alphabet == other.alphabet,
            "alphabet mismatch: {:?} vs {:?}",
            self.alphabet,
            other.alphabet
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| c.neg())
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return AssocPoly::zero(self.alphabet.clone());
        }
        self.map_coeffs(|x| x.mul(c))
    }

    fn map_coeffs(&self, f: impl Fn(&C) -> C) -> Self {
        let mut out = AssocPoly::zero(self.alphabet.clone());
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c));
        }
        out
    }

    /// Concatenation product, bilinear over the coefficients.
    pub fn mul(&self, other: &Self) -> Self {
        self.mul_trunc(other, usize::MAX)
    }

    /// Product with terms above `max_deg` discarded eagerly.
    pub fn mul_trunc(&self, other: &Self, max_deg: usize) -> Self {
        self.check_compatible(other);
        let mut out = AssocPoly::zero(self.alphabet.clone());
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                if wa.len() + wb.len() > max_deg {
                    continue;
                }
                out.add_term(wa.concat(wb), ca.mul(cb));
            }
        }
        out
    }

    /// Keep only terms of total degree `n`.
    pub fn homogeneous_part(&self, n: usize) -> Self {
        let mut out = AssocPoly::zero(self.alphabet.clone());
        for (w, c) in &self.terms {
            if w.len() == n {
                out.add_term(w.clone(), c.clone());
            }
        }
        out
    }

    /// Drop all terms above total degree `max_deg`.
    pub fn truncate(&self, max_deg: usize) -> Self {
        let mut out = AssocPoly::zero(self.alphabet.clone());
        for (w, c) in &self.terms {
            if w.len() <= max_deg {
                out.add_term(w.clone(), c.clone());
            }
        }
        out
    }

    /// Right-factor derivative: keep the words ending in `letter` and strip
    /// that final letter.
    pub fn right_derivative(&self, letter: u8) -> Self {
        let mut out = AssocPoly::zero(self.alphabet.clone());
        for (w, c) in &self.terms {
            if let Some((&last, head)) = w.letters().split_last() {
                if last == letter {
                    out.add_term(Word::new(head.to_vec()), c.clone());
                }
            }
        }
        out
    }

    /// Unique decomposition a = a0 + a1 x + a2 y over the two-letter
    /// alphabet: the constant term and the two right-factor derivatives.
    pub fn decompose(&self) -> (C, Self, Self) {
        assert_eq!(self.alphabet.len(), 2, "decompose requires a 2-letter alphabet");
        (
            self.constant_term(),
            self.right_derivative(0),
            self.right_derivative(1),
        )
    }

    /// Signed reversal: each word reversed and scaled by (-1)^length.
    pub fn transpose(&self) -> Self {
        let mut out = AssocPoly::zero(self.alphabet.clone());
        for (w, c) in &self.terms {
            let signed = if w.len() % 2 == 1 { c.neg() } else { c.clone() };
            out.add_term(w.reversed(), signed);
        }
        out
    }
}

impl AssocPoly<Rational> {
    /// Truncated exponential of a polynomial with zero constant term.
    pub fn exp_trunc(&self, max_deg: usize) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::ConstantTermViolation(
                "exp requires zero constant term",
            ));
        }
        let mut out = AssocPoly::constant(self.alphabet.clone(), Rational::one());
        let mut power = out.clone();
        let mut factorial = Rational::one();
        for k in 1..=max_deg {
            power = power.mul_trunc(self, max_deg);
            if power.is_zero() {
                break;
            }
            factorial = factorial.mul(&Rational::from_int(k as i64));
            out = out.add(&power.scale(&factorial.inv()));
        }
        Ok(out)
    }

    /// Truncated logarithm of a polynomial with constant term 1.
    pub fn log_trunc(&self, max_deg: usize) -> Result<Self> {
        if self.constant_term() != Rational::one() {
            return Err(Error::ConstantTermViolation("log requires constant term 1"));
        }
        let u = self.sub(&AssocPoly::constant(self.alphabet.clone(), Rational::one()));
        let mut out = AssocPoly::zero(self.alphabet.clone());
        let mut power = AssocPoly::constant(self.alphabet.clone(), Rational::one());
        for k in 1..=max_deg {
            power = power.mul_trunc(&u, max_deg);
            if power.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            out = out.add(&power.scale(&Rational::new(sign, k as i64)));
        }
        Ok(out)
    }
}

impl<C: Scalar> fmt::Display for AssocPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms.iter().map(|(w, c)| (w.render(&self.alphabet), c)))
    }
}

impl<C: Scalar> fmt::Debug for AssocPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Shared "c1*m1 + c2*m2 - ..." rendering; monomial strings come in already
/// formatted.
pub(crate) fn write_terms<'a, C: Scalar + 'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (String, &'a C)>,
) -> fmt::Result {
    let mut first = true;
    let mut any = false;
    for (mono, coeff) in terms {
        any = true;
        let s = coeff.to_string();
        let (sign, mag) = match s.strip_prefix('-') {
            Some(rest) => ("-", rest.to_string()),
            None => ("+", s),
        };
        if first {
            if sign == "-" {
                write!(f, "-")?;
            }
            first = false;
        } else if sign == "-" {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        if mono == "1" {
            write!(f, "{mag}")?;
        } else if mag == "1" {
            write!(f, "{mono}")?;
        } else {
            write!(f, "{mag}*{mono}")?;
        }
    }
    if !any {
        write!(f, "0")?;
    }
    Ok(())
}

// ---- Trace quotients ----

/// Element of the space of cyclic words: keys are the lexicographically
/// least rotations.
#[derive(Clone, PartialEq, Eq)]
pub struct TraceElement<C: Scalar> {
    alphabet: Alphabet,
    terms: BTreeMap<Word, C>,
}

impl<C: Scalar> TraceElement<C> {
    pub fn zero(alphabet: Alphabet) -> Self {
        TraceElement {
            alphabet,
            terms: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &C)> {
        self.terms.iter()
    }

    fn add_class(&mut self, canonical: Word, coeff: C) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(canonical) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&coeff);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert!(self.alphabet == other.alphabet, "alphabet mismatch");
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_class(w.clone(), c.neg());
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = TraceElement::zero(self.alphabet.clone());
        for (w, k) in &self.terms {
            out.add_class(w.clone(), k.mul(c));
        }
        out
    }
}

impl<C: Scalar> fmt::Display for TraceElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(
            f,
            self.terms.iter().map(|(w, c)| (format!("({})", w.render(&self.alphabet)), c)),
        )
    }
}

impl<C: Scalar> fmt::Debug for TraceElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Projection to cyclic words; kills ab - ba. Defined on the augmentation
/// ideal only.
pub fn cyclic_trace<C: Scalar>(a: &AssocPoly<C>) -> Result<TraceElement<C>> {
    if !a.constant_term().is_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    let mut out = TraceElement::zero(a.alphabet().clone());
    for (w, c) in a.terms() {
        out.add_class(w.min_rotation(), c.clone());
    }
    Ok(out)
}

/// Element of the quotient of cyclic words by the signed reversal.
///
/// Keys are the least word among all rotations of the word and of its
/// reversal; the representative's sign is folded into the coefficient.
/// Classes fixed by the reversal with odd length are 2-torsion and vanish
/// (odd characteristic or Q throughout).
#[derive(Clone, PartialEq, Eq)]
pub struct QuadTraceElement<C: Scalar> {
    inner: TraceElement<C>,
}

impl<C: Scalar> QuadTraceElement<C> {
    pub fn zero(alphabet: Alphabet) -> Self {
        QuadTraceElement {
            inner: TraceElement::zero(alphabet),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &C)> {
        self.inner.terms()
    }

    pub fn sub(&self, other: &Self) -> Self {
        QuadTraceElement {
            inner: self.inner.sub(&other.inner),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        QuadTraceElement {
            inner: self.inner.scale(c),
        }
    }

    /// The quotient map factors through the cyclic projection.
    pub fn from_cyclic(t: &TraceElement<C>) -> Self {
        let mut out = QuadTraceElement::zero(t.alphabet.clone());
        for (w, c) in t.terms() {
            let own = w.min_rotation();
            let rev = w.reversed().min_rotation();
            let len_sign_neg = w.len() % 2 == 1;
            match own.cmp(&rev) {
                std::cmp::Ordering::Less => out.inner.add_class(own, c.clone()),
                std::cmp::Ordering::Greater => {
                    let signed = if len_sign_neg { c.neg() } else { c.clone() };
                    out.inner.add_class(rev, signed);
                }
                std::cmp::Ordering::Equal => {
                    // Self-paired class: tr(w) = (-1)^len tr(w), so odd
                    // lengths are 2-torsion and drop.
                    if !len_sign_neg {
                        out.inner.add_class(own, c.clone());
                    }
                }
            }
        }
        out
    }
}

impl<C: Scalar> fmt::Display for QuadTraceElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.inner)
    }
}

impl<C: Scalar> fmt::Debug for QuadTraceElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Projection to the signed-reversal quotient of the cyclic words.
pub fn quadratic_trace<C: Scalar>(a: &AssocPoly<C>) -> Result<QuadTraceElement<C>> {
    Ok(QuadTraceElement::from_cyclic(&cyclic_trace(a)?))
}

/// Serializable form of one polynomial term, shared by the JSON dumps.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermWire<C> {
    pub word: String,
    pub coeff: C,
}

impl<C: Scalar + Serialize> AssocPoly<C> {
    pub fn to_wire(&self) -> Vec<TermWire<C>> {
        self.terms
            .iter()
            .map(|(w, c)| TermWire {
                word: w.render(&self.alphabet),
                coeff: c.clone(),
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::FpScalar;
    use proptest::prelude::*;

    fn xy() -> Alphabet {
        Alphabet::xy()
    }

    fn x() -> AssocPoly<Rational> {
        AssocPoly::letter(xy(), 0, Rational::one())
    }

    fn y() -> AssocPoly<Rational> {
        AssocPoly::letter(xy(), 1, Rational::one())
    }

    fn w(s: &str) -> Word {
        Word::new(
            s.chars()
                .map(|c| match c {
                    'x' => 0u8,
                    'y' => 1,
                    _ => panic!("bad letter"),
                })
                .collect(),
        )
    }

    #[test]
    fn product_examples() {
        assert_eq!(x().mul(&y()), AssocPoly::monomial(xy(), w("xy"), Rational::one()));
        let s = x().add(&y());
        let sq = s.mul(&s);
        for word in ["xx", "xy", "yx", "yy"] {
            assert_eq!(sq.coeff(&w(word)), Rational::one());
        }
        assert_eq!(sq.num_terms(), 4);
        // (xy - yx) * x = xyx - yxx
        let comm = x().mul(&y()).sub(&y().mul(&x()));
        let prod = comm.mul(&x());
        assert_eq!(prod.coeff(&w("xyx")), Rational::one());
        assert_eq!(prod.coeff(&w("yxx")), Rational::from_int(-1));
        assert_eq!(prod.num_terms(), 2);
    }

    #[test]
    fn exp_log_examples() {
        let e = x().exp_trunc(3).unwrap();
        assert_eq!(e.coeff(&Word::empty()), Rational::one());
        assert_eq!(e.coeff(&w("x")), Rational::one());
        assert_eq!(e.coeff(&w("xx")), Rational::new(1, 2));
        assert_eq!(e.coeff(&w("xxx")), Rational::new(1, 6));
        assert_eq!(e.num_terms(), 4);

        let one_plus_x = AssocPoly::constant(xy(), Rational::one()).add(&x());
        let l = one_plus_x.log_trunc(2).unwrap();
        assert_eq!(l.coeff(&w("x")), Rational::one());
        assert_eq!(l.coeff(&w("xx")), Rational::new(-1, 2));
        assert_eq!(l.num_terms(), 2);

        // log(e^x e^y) through degree 2 is x + y + (xy - yx)/2.
        let prod = x().exp_trunc(4).unwrap().mul_trunc(&y().exp_trunc(4).unwrap(), 4);
        let z = prod.log_trunc(2).unwrap();
        assert_eq!(z.coeff(&w("x")), Rational::one());
        assert_eq!(z.coeff(&w("y")), Rational::one());
        assert_eq!(z.coeff(&w("xy")), Rational::new(1, 2));
        assert_eq!(z.coeff(&w("yx")), Rational::new(-1, 2));
    }

    #[test]
    fn exp_rejects_constant_term() {
        let p = AssocPoly::constant(xy(), Rational::one());
        assert!(matches!(p.exp_trunc(3), Err(Error::ConstantTermViolation(_))));
        assert!(matches!(x().log_trunc(3), Err(Error::ConstantTermViolation(_))));
    }

    #[test]
    fn decompose_examples() {
        // [x,y] -> (0, -y, x)
        let comm = x().mul(&y()).sub(&y().mul(&x()));
        let (c0, dx, dy) = comm.decompose();
        assert!(c0.is_zero());
        assert_eq!(dx, y().neg());
        assert_eq!(dy, x());

        let xyx = AssocPoly::monomial(xy(), w("xyx"), Rational::one());
        let (c0, dx, dy) = xyx.decompose();
        assert!(c0.is_zero());
        assert_eq!(dx, AssocPoly::monomial(xy(), w("xy"), Rational::one()));
        assert!(dy.is_zero());

        let one_plus_x = AssocPoly::constant(xy(), Rational::one()).add(&x());
        let (c0, dx, dy) = one_plus_x.decompose();
        assert_eq!(c0, Rational::one());
        assert_eq!(dx, AssocPoly::constant(xy(), Rational::one()));
        assert!(dy.is_zero());
    }

    #[test]
    fn transpose_examples() {
        let xy_m = AssocPoly::monomial(xy(), w("xy"), Rational::one());
        assert_eq!(xy_m.transpose(), AssocPoly::monomial(xy(), w("yx"), Rational::one()));
        let xxy = AssocPoly::monomial(xy(), w("xxy"), Rational::one());
        assert_eq!(
            xxy.transpose(),
            AssocPoly::monomial(xy(), w("yxx"), Rational::from_int(-1))
        );
    }

    #[test]
    fn cyclic_trace_examples() {
        let yx = AssocPoly::monomial(xy(), w("yx"), Rational::one());
        let t = cyclic_trace(&yx).unwrap();
        assert_eq!(t.terms().next().unwrap().0, &w("xy"));

        let comm = x().mul(&y()).sub(&y().mul(&x()));
        assert!(cyclic_trace(&comm).unwrap().is_zero());

        let sum = AssocPoly::monomial(xy(), w("xxy"), Rational::one())
            .add(&AssocPoly::monomial(xy(), w("xyx"), Rational::one()))
            .add(&AssocPoly::monomial(xy(), w("yxx"), Rational::one()));
        let t = cyclic_trace(&sum).unwrap();
        let (word, coeff) = t.terms().next().unwrap();
        assert_eq!(word, &w("xxy"));
        assert_eq!(coeff, &Rational::from_int(3));
    }

    #[test]
    fn cyclic_trace_rejects_constants() {
        let p = AssocPoly::constant(xy(), Rational::one());
        assert_eq!(cyclic_trace(&p), Err(Error::NonzeroConstantTerm));
    }

    #[test]
    fn quadratic_trace_examples() {
        let xy_m = AssocPoly::monomial(xy(), w("xy"), Rational::one());
        let q = quadratic_trace(&xy_m).unwrap();
        let (word, coeff) = q.terms().next().unwrap();
        assert_eq!(word, &w("xy"));
        assert_eq!(coeff, &Rational::one());

        // (xxy)^T = -yxx which is a rotation of xxy: 2-torsion, so zero.
        let xxy = AssocPoly::monomial(xy(), w("xxy"), Rational::one());
        assert!(quadratic_trace(&xxy).unwrap().is_zero());

        // x^2 + y^2 - (x+y)^2 = -(xy + yx) -> -2 (xy).
        let s = x().add(&y());
        let p = x().mul(&x()).add(&y().mul(&y())).sub(&s.mul(&s));
        let q = quadratic_trace(&p).unwrap();
        let (word, coeff) = q.terms().next().unwrap();
        assert_eq!(word, &w("xy"));
        assert_eq!(coeff, &Rational::from_int(-2));
        assert_eq!(q.terms().count(), 1);
    }

    #[test]
    fn quadratic_trace_over_fp() {
        let p = 5;
        let one = FpScalar::new(1, p);
        let xxy = AssocPoly::monomial(xy(), w("xxy"), one);
        assert!(quadratic_trace(&xxy).unwrap().is_zero());
    }

    #[test]
    fn display_format() {
        let p = AssocPoly::monomial(xy(), w("xy"), Rational::new(1, 2))
            .add(&AssocPoly::monomial(xy(), w("yx"), Rational::new(-1, 2)));
        assert_eq!(p.to_string(), "1/2*xy - 1/2*yx");
        assert_eq!(AssocPoly::<Rational>::zero(xy()).to_string(), "0");
        assert_eq!(x().add(&y()).to_string(), "x + y");
    }

    fn arb_poly(max_deg: usize) -> impl Strategy<Value = AssocPoly<Rational>> {
        prop::collection::vec(
            (
                prop::collection::vec(0u8..2, 0..=max_deg),
                -6i64..6,
                1i64..5,
            ),
            0..6,
        )
        .prop_map(|terms| {
            let mut p = AssocPoly::zero(Alphabet::xy());
            for (letters, n, d) in terms {
                p.add_term(Word::new(letters), Rational::new(n, d));
            }
            p
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn mul_is_associative(a in arb_poly(4), b in arb_poly(4), c in arb_poly(4)) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }

        #[test]
        fn mul_is_unital(a in arb_poly(5)) {
            let one = AssocPoly::constant(Alphabet::xy(), Rational::one());
            prop_assert_eq!(a.mul(&one), a.clone());
            prop_assert_eq!(one.mul(&a), a);
        }

        #[test]
        fn transpose_is_antiautomorphism(a in arb_poly(4), b in arb_poly(4)) {
            prop_assert_eq!(a.mul(&b).transpose(), b.transpose().mul(&a.transpose()));
            prop_assert_eq!(a.transpose().transpose(), a);
        }

        #[test]
        fn decompose_reconstructs(a in arb_poly(6)) {
            let (c0, a1, a2) = a.decompose();
            let x = AssocPoly::letter(Alphabet::xy(), 0, Rational::one());
            let y = AssocPoly::letter(Alphabet::xy(), 1, Rational::one());
            let rebuilt = AssocPoly::constant(Alphabet::xy(), c0)
                .add(&a1.mul(&x))
                .add(&a2.mul(&y));
            prop_assert_eq!(rebuilt, a);
        }

        #[test]
        fn trace_kills_commutators(a in arb_poly(3), b in arb_poly(3)) {
            let comm = a.mul(&b).sub(&b.mul(&a));
            let comm = comm.sub(&AssocPoly::constant(Alphabet::xy(), comm.constant_term()));
            prop_assert!(cyclic_trace(&comm).unwrap().is_zero());
            prop_assert!(quadratic_trace(&comm).unwrap().is_zero());
        }

        #[test]
        fn exp_log_inverse(a in arb_poly(3)) {
            let a = a.sub(&AssocPoly::constant(Alphabet::xy(), a.constant_term()));
            let n = 5;
            let back = a.exp_trunc(n).unwrap().log_trunc(n).unwrap();
            prop_assert_eq!(back, a);
        }
    }
}
