//! Free Lie algebra in the Lyndon basis: bracketing trees, the embedding
//! tau into the associative algebra, conversion back by triangular
//! elimination, the Dynkin certificate, substitution homomorphisms, and
//! graded series.
//!
//! All Lie arithmetic goes through tau-expansion: the bracket is computed
//! associatively and converted back, so there is exactly one conversion
//! path to get right.

mod parse;

pub use parse::{parse_lie, parse_lie_fp};

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::scalars::{scale_int, FpScalar, Rational, Scalar};
use crate::words::{write_terms, Alphabet, AssocPoly, Word};

// ---- Lyndon words and bracketings ----

/// All Lyndon words of length `n` over `k` letters, in lexicographic order
/// (Duval's generation).
pub fn lyndon_words(k: usize, n: usize) -> Vec<Word> {
    assert!(n >= 1 && k >= 1);
    let mut out = Vec::new();
    let mut w = vec![0u8];
    loop {
        if w.len() == n {
            out.push(Word::new(w.clone()));
        }
        // Extend periodically to length n, then increment the last letter.
        let m = w.len();
        while w.len() < n {
            let c = w[w.len() % m];
            w.push(c);
        }
        while let Some(&last) = w.last() {
            if last as usize == k - 1 {
                w.pop();
            } else {
                break;
            }
        }
        if w.is_empty() {
            return out;
        }
        *w.last_mut().expect("nonempty") += 1;
    }
}

/// Binary bracketing tree over letter indices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum BracketTree {
    Leaf(u8),
    Node(Box<BracketTree>, Box<BracketTree>),
}

/// Standard factorization of a Lyndon word of length >= 2: the right factor
/// is the longest proper suffix that is Lyndon.
pub fn standard_factorization(w: &Word) -> (Word, Word) {
    let letters = w.letters();
    assert!(letters.len() >= 2, "factorization needs length >= 2");
    for i in 1..letters.len() {
        let suffix = Word::new(letters[i..].to_vec());
        if suffix.is_lyndon() {
            return (Word::new(letters[..i].to_vec()), suffix);
        }
    }
    unreachable!("every Lyndon word of length >= 2 has a Lyndon proper suffix");
}

/// The bracketing of a Lyndon word obtained by recursive standard
/// factorization.
pub fn standard_bracketing(w: &Word) -> BracketTree {
    debug_assert!(w.is_lyndon(), "not a Lyndon word: {w:?}");
    if w.len() == 1 {
        return BracketTree::Leaf(w.letters()[0]);
    }
    let (u, v) = standard_factorization(w);
    BracketTree::Node(
        Box::new(standard_bracketing(&u)),
        Box::new(standard_bracketing(&v)),
    )
}

/// A Lyndon word together with its standard bracketing.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LyndonMonomial {
    pub word: Word,
    pub bracketing: BracketTree,
}

/// Lyndon basis of the degree-`n` component of the free Lie algebra.
pub fn lyndon_basis(alphabet: &Alphabet, n: usize) -> Vec<LyndonMonomial> {
    lyndon_words(alphabet.len(), n)
        .into_iter()
        .map(|word| {
            let bracketing = standard_bracketing(&word);
            LyndonMonomial { word, bracketing }
        })
        .collect()
}

/// Dimension of the degree-`n` component over `k` letters by the Witt
/// formula (1/n) sum_{d | n} mu(d) k^(n/d).
pub fn witt_dimension(k: usize, n: usize) -> usize {
    assert!(n >= 1);
    let mut total: i64 = 0;
    for d in 1..=n {
        if n % d == 0 {
            total += mobius(d) * (k as i64).pow((n / d) as u32);
        }
    }
    assert!(total >= 0 && total % n as i64 == 0);
    (total / n as i64) as usize
}

fn mobius(n: usize) -> i64 {
    let mut n = n;
    let mut primes = 0;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            primes += 1;
        }
        d += 1;
    }
    if n > 1 {
        primes += 1;
    }
    if primes % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Integer-coefficient expansion of the standard bracketing of a Lyndon
/// word in the associative algebra, memoized globally (the expansion
/// depends only on the index word, not on the alphabet's names).
fn bracketing_expansion(word: &Word) -> Arc<Vec<(Word, i64)>> {
    static CACHE: OnceLock<Mutex<HashMap<Word, Arc<Vec<(Word, i64)>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().expect("cache lock").get(word) {
        return Arc::clone(hit);
    }
    let tree = standard_bracketing(word);
    let map = expand_tree(&tree);
    let arc = Arc::new(map.into_iter().collect::<Vec<_>>());
    cache
        .lock()
        .expect("cache lock")
        .insert(word.clone(), Arc::clone(&arc));
    arc
}

fn expand_tree(tree: &BracketTree) -> BTreeMap<Word, i64> {
    match tree {
        BracketTree::Leaf(l) => {
            let mut m = BTreeMap::new();
            m.insert(Word::letter(*l), 1);
            m
        }
        BracketTree::Node(l, r) => {
            let a = expand_tree(l);
            let b = expand_tree(r);
            let mut out: BTreeMap<Word, i64> = BTreeMap::new();
            for (wa, ca) in &a {
                for (wb, cb) in &b {
                    add_int_term(&mut out, wa.concat(wb), ca * cb);
                    add_int_term(&mut out, wb.concat(wa), -(ca * cb));
                }
            }
            out
        }
    }
}

fn add_int_term(map: &mut BTreeMap<Word, i64>, w: Word, c: i64) {
    if c == 0 {
        return;
    }
    match map.entry(w) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() = e.get().checked_add(c).expect("coefficient overflow");
            if *e.get() == 0 {
                e.remove();
            }
        }
    }
}

/// Structure constants of the Lyndon basis: the bracket of two basis
/// monomials as an integer combination of basis monomials, memoized
/// globally.
///
/// Rewriting rule: for Lyndon u < v the concatenation uv is Lyndon; if its
/// standard factorization is (u, v) the bracket is the basis monomial uv,
/// otherwise u = u1 u2 (standard) and
/// [u, v] = [u1, [u2, v]] - [u2, [u1, v]]. A depth guard falls back to the
/// elimination route for any pathological rewriting chain.
fn lyndon_pair_bracket(u: &Word, v: &Word) -> (i64, Arc<Vec<(Word, i64)>>) {
    lyndon_pair_bracket_at(u, v, 0)
}

fn lyndon_pair_bracket_at(u: &Word, v: &Word, depth: usize) -> (i64, Arc<Vec<(Word, i64)>>) {
    static EMPTY: OnceLock<Arc<Vec<(Word, i64)>>> = OnceLock::new();
    static CACHE: OnceLock<Mutex<HashMap<(Word, Word), Arc<Vec<(Word, i64)>>>>> = OnceLock::new();
    match u.cmp(v) {
        std::cmp::Ordering::Equal => {
            return (1, Arc::clone(EMPTY.get_or_init(|| Arc::new(Vec::new()))))
        }
        std::cmp::Ordering::Greater => {
            let (sign, exp) = lyndon_pair_bracket_at(v, u, depth);
            return (-sign, exp);
        }
        std::cmp::Ordering::Less => {}
    }
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().expect("cache lock").get(&(u.clone(), v.clone())) {
        return (1, Arc::clone(hit));
    }
    let expansion: Vec<(Word, i64)> = if depth > 10_000 {
        pair_bracket_by_elimination(u, v)
    } else {
        let uv = u.concat(v);
        debug_assert!(uv.is_lyndon());
        let (p, _) = standard_factorization(&uv);
        if &p == u {
            vec![(uv, 1)]
        } else {
            // u is composite here: a single-letter left factor always
            // yields the standard factorization (u, v) directly.
            let (u1, u2) = standard_factorization(u);
            let mut acc: BTreeMap<Word, i64> = BTreeMap::new();
            for (outer_sign, left, right) in [(1i64, &u1, &u2), (-1i64, &u2, &u1)] {
                let (s_inner, inner) = lyndon_pair_bracket_at(right, v, depth + 1);
                for (w, m) in inner.iter() {
                    let (s_outer, outer) = lyndon_pair_bracket_at(left, w, depth + 1);
                    let factor = outer_sign
                        .checked_mul(s_inner)
                        .and_then(|f| f.checked_mul(s_outer))
                        .and_then(|f| f.checked_mul(*m))
                        .expect("coefficient overflow");
                    for (w2, m2) in outer.iter() {
                        add_int_term(
                            &mut acc,
                            w2.clone(),
                            factor.checked_mul(*m2).expect("coefficient overflow"),
                        );
                    }
                }
            }
            acc.into_iter().collect()
        }
    };
    let arc = Arc::new(expansion);
    cache
        .lock()
        .expect("cache lock")
        .insert((u.clone(), v.clone()), Arc::clone(&arc));
    (1, arc)
}

/// Crate-internal view of the structure constants with the ordering sign
/// applied.
pub(crate) fn pair_structure_constants(u: &Word, v: &Word) -> Vec<(Word, i64)> {
    let (sign, exp) = lyndon_pair_bracket(u, v);
    exp.iter().map(|(w, m)| (w.clone(), sign * m)).collect()
}

/// Integer-coefficient bracket of two basis monomials through the
/// associative commutator and triangular elimination.
fn pair_bracket_by_elimination(u: &Word, v: &Word) -> Vec<(Word, i64)> {
    let eu = bracketing_expansion(u);
    let ev = bracketing_expansion(v);
    let mut rem: BTreeMap<Word, i64> = BTreeMap::new();
    for (wu, cu) in eu.iter() {
        for (wv, cv) in ev.iter() {
            let c = cu.checked_mul(*cv).expect("coefficient overflow");
            add_int_term(&mut rem, wu.concat(wv), c);
            add_int_term(&mut rem, wv.concat(wu), -c);
        }
    }
    let mut out: Vec<(Word, i64)> = Vec::new();
    while let Some((w, c)) = rem.pop_first() {
        if c == 0 {
            continue;
        }
        debug_assert!(w.is_lyndon(), "commutator must be a Lie element");
        for (word, m) in bracketing_expansion(&w).iter() {
            if word != &w {
                add_int_term(&mut rem, word.clone(), -c * m);
            }
        }
        out.push((w, c));
    }
    out
}

// ---- LiePoly ----

/// Element of the free Lie algebra, stored as Lyndon-basis coordinates.
#[derive(Clone, PartialEq, Eq)]
pub struct LiePoly<C: Scalar> {
    alphabet: Alphabet,
    terms: BTreeMap<Word, C>,
}

impl<C: Scalar> LiePoly<C> {
    pub fn zero(alphabet: Alphabet) -> Self {
        LiePoly {
            alphabet,
            terms: BTreeMap::new(),
        }
    }

    /// Basis monomial for a Lyndon word.
    pub fn monomial(alphabet: Alphabet, word: Word, coeff: C) -> Self {
        assert!(word.is_lyndon(), "not a Lyndon word: {word:?}");
        let mut p = LiePoly::zero(alphabet);
        p.add_term(word, coeff);
        p
    }

    pub fn generator(alphabet: Alphabet, letter: u8, coeff: C) -> Self {
        assert!((letter as usize) < alphabet.len(), "letter out of range");
        LiePoly::monomial(alphabet, Word::letter(letter), coeff)
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

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::len).max()
    }

    pub fn is_homogeneous(&self, n: usize) -> bool {
        self.terms.keys().all(|w| w.len() == n)
    }

    pub(crate) fn add_term(&mut self, word: Word, coeff: C) {
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

    pub fn add(&self, other: &Self) -> Self {
        assert!(self.alphabet == other.alphabet, "alphabet mismatch");
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
            return LiePoly::zero(self.alphabet.clone());
        }
        self.map_coeffs(|x| x.mul(c))
    }

    pub fn map_coeffs(&self, f: impl Fn(&C) -> C) -> Self {
        let mut out = LiePoly::zero(self.alphabet.clone());
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c));
        }
        out
    }

    pub fn homogeneous_part(&self, n: usize) -> Self {
        let mut out = LiePoly::zero(self.alphabet.clone());
        for (w, c) in &self.terms {
            if w.len() == n {
                out.add_term(w.clone(), c.clone());
            }
        }
        out
    }

    /// Expansion in the associative algebra.
    pub fn tau(&self) -> AssocPoly<C> {
        let mut out = AssocPoly::zero(self.alphabet.clone());
        for (w, c) in &self.terms {
            for (word, m) in bracketing_expansion(w).iter() {
                out.add_term(word.clone(), scale_int(c, *m));
            }
        }
        out
    }

    /// Lie bracket, expanded through the memoized structure constants of
    /// the Lyndon basis.
    pub fn bracket(&self, other: &Self) -> Self {
        assert!(self.alphabet == other.alphabet, "alphabet mismatch");
        let mut out = LiePoly::zero(self.alphabet.clone());
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let c = c1.mul(c2);
                if c.is_zero() {
                    continue;
                }
                let (sign, expansion) = lyndon_pair_bracket(w1, w2);
                for (word, m) in expansion.iter() {
                    out.add_term(word.clone(), scale_int(&c, sign * m));
                }
            }
        }
        out
    }

    /// Independent bracket route: commutator in the associative algebra,
    /// converted back by triangular elimination. Used to cross-check the
    /// structure-constant path.
    pub fn bracket_via_elimination(&self, other: &Self) -> Self {
        assert!(self.alphabet == other.alphabet, "alphabet mismatch");
        let ta = self.tau();
        let tb = other.tau();
        let comm = ta.mul(&tb).sub(&tb.mul(&ta));
        lie_from_assoc(&comm).expect("bracket of Lie elements is a Lie element")
    }

    /// k-fold bracket [u, [u, ... [u, v]]].
    pub fn ad_apply(&self, k: usize, v: &Self) -> Self {
        let mut out = v.clone();
        for _ in 0..k {
            out = self.bracket(&out);
        }
        out
    }

    /// Minimal number of letter-1 occurrences over the monomials of the
    /// tau-expansion; None (infinite) for the zero polynomial.
    pub fn depth(&self) -> Option<usize> {
        assert_eq!(self.alphabet.len(), 2, "depth is defined over a 2-letter alphabet");
        self.tau().terms().map(|(w, _)| w.count_letter(1)).min()
    }
}

impl<C: Scalar> fmt::Display for LiePoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(
            f,
            self.terms
                .iter()
                .map(|(w, c)| (bracket_string(w, &self.alphabet), c)),
        )
    }
}

impl<C: Scalar> fmt::Debug for LiePoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Render a Lyndon word's standard bracketing as `[x,[x,y]]`.
pub fn bracket_string(w: &Word, alphabet: &Alphabet) -> String {
    fn go(t: &BracketTree, alphabet: &Alphabet, out: &mut String) {
        match t {
            BracketTree::Leaf(l) => out.push_str(alphabet.name(*l)),
            BracketTree::Node(a, b) => {
                out.push('[');
                go(a, alphabet, out);
                out.push(',');
                go(b, alphabet, out);
                out.push(']');
            }
        }
    }
    let mut s = String::new();
    go(&standard_bracketing(w), alphabet, &mut s);
    s
}

// ---- Conversion from the associative algebra ----

/// Inverse of tau on its image, by triangular elimination against the
/// Lyndon basis: the expansion of a Lyndon word's bracketing is that word
/// plus lexicographically larger words, so within each homogeneous
/// component the least remaining word must be Lyndon and its coefficient
/// is a basis coordinate.
pub fn lie_from_assoc<C: Scalar>(a: &AssocPoly<C>) -> Result<LiePoly<C>> {
    if !a.constant_term().is_zero() {
        return Err(Error::NotLieElement("1".to_string()));
    }
    let mut out = LiePoly::zero(a.alphabet().clone());
    let degrees: std::collections::BTreeSet<usize> = a.terms().map(|(w, _)| w.len()).collect();
    for n in degrees {
        let mut rem: BTreeMap<Word, C> = a
            .terms()
            .filter(|(w, _)| w.len() == n)
            .map(|(w, c)| (w.clone(), c.clone()))
            .collect();
        while let Some((w, c)) = rem.pop_first() {
            if c.is_zero() {
                continue;
            }
            if !w.is_lyndon() {
                return Err(Error::NotLieElement(w.render(a.alphabet())));
            }
            for (word, m) in bracketing_expansion(&w).iter() {
                if word == &w {
                    continue; // leading term, coefficient 1, already popped
                }
                let delta = scale_int(&c, *m).neg();
                if delta.is_zero() {
                    continue;
                }
                match rem.entry(word.clone()) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(delta);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let sum = e.get().add(&delta);
                        if sum.is_zero() {
                            e.remove();
                        } else {
                            *e.get_mut() = sum;
                        }
                    }
                }
            }
            out.add_term(w, c);
        }
    }
    Ok(out)
}

/// Dynkin-Specht-Wever certificate: for homogeneous `a` of degree n, the
/// left-bracketing map delta satisfies delta(a) = n a exactly when a is in
/// the image of the free Lie algebra (in characteristic 0; the identity
/// delta(tau u) = n tau u holds over any ring).
pub fn is_lie_dynkin<C: Scalar>(a: &AssocPoly<C>) -> bool {
    if a.is_zero() {
        return true;
    }
    let n = a.degree().expect("nonzero");
    assert!(
        a.terms().all(|(w, _)| w.len() == n) && n >= 1,
        "dynkin test needs a homogeneous polynomial of degree >= 1"
    );
    let mut delta = AssocPoly::zero(a.alphabet().clone());
    for (w, c) in a.terms() {
        let letters = w.letters();
        // Left-bracketing [...[[w1,w2],w3]...,wn], expanded associatively.
        let mut e = AssocPoly::letter(a.alphabet().clone(), letters[0], c.clone());
        for &l in &letters[1..] {
            let mut shifted = AssocPoly::zero(a.alphabet().clone());
            for (we, ce) in e.terms() {
                shifted.add_term(we.concat(&Word::letter(l)), ce.clone());
                shifted.add_term(Word::letter(l).concat(we), ce.neg());
            }
            e = shifted;
        }
        delta = delta.add(&e);
    }
    let mut n_times_a = AssocPoly::zero(a.alphabet().clone());
    for (w, c) in a.terms() {
        n_times_a.add_term(w.clone(), scale_int(c, n as i64));
    }
    delta == n_times_a
}

// ---- Substitution ----

/// Carrier of a Lie algebra over the scalar field `C`, the target of
/// substitution homomorphisms.
pub trait LieAlgebra<C: Scalar> {
    type Elem: Clone;
    fn zero(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn scale(&self, c: &C, a: &Self::Elem) -> Self::Elem;
    fn bracket(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
}

/// The free Lie algebra on `alphabet` as a substitution target.
pub struct FreeLie {
    pub alphabet: Alphabet,
}

impl<C: Scalar> LieAlgebra<C> for FreeLie {
    type Elem = LiePoly<C>;
    fn zero(&self) -> LiePoly<C> {
        LiePoly::zero(self.alphabet.clone())
    }
    fn add(&self, a: &LiePoly<C>, b: &LiePoly<C>) -> LiePoly<C> {
        a.add(b)
    }
    fn scale(&self, c: &C, a: &LiePoly<C>) -> LiePoly<C> {
        a.scale(c)
    }
    fn bracket(&self, a: &LiePoly<C>, b: &LiePoly<C>) -> LiePoly<C> {
        a.bracket(b)
    }
}

/// The unique homomorphism extension of `letter i -> images[i]` applied to
/// `u`, evaluated through the standard bracketings of its monomials.
pub fn substitute<C: Scalar, A: LieAlgebra<C>>(
    u: &LiePoly<C>,
    images: &[A::Elem],
    algebra: &A,
) -> A::Elem {
    assert_eq!(
        images.len(),
        u.alphabet.len(),
        "one image per alphabet letter required"
    );
    fn eval<C: Scalar, A: LieAlgebra<C>>(t: &BracketTree, images: &[A::Elem], alg: &A) -> A::Elem {
        match t {
            BracketTree::Leaf(l) => images[*l as usize].clone(),
            BracketTree::Node(a, b) => {
                let ea = eval::<C, A>(a, images, alg);
                let eb = eval::<C, A>(b, images, alg);
                alg.bracket(&ea, &eb)
            }
        }
    }
    let mut acc = algebra.zero();
    for (w, c) in &u.terms {
        let val = eval::<C, A>(&standard_bracketing(w), images, algebra);
        acc = algebra.add(&acc, &algebra.scale(c, &val));
    }
    acc
}

/// Reduce a rational Lie polynomial mod p coefficientwise.
pub fn lie_reduce_mod_p(u: &LiePoly<Rational>, p: u64) -> Result<LiePoly<FpScalar>> {
    let mut out = LiePoly::zero(u.alphabet().clone());
    for (w, c) in u.terms() {
        out.add_term(w.clone(), crate::scalars::reduce_mod_p(c, p)?);
    }
    Ok(out)
}

// ---- LieSeries ----

/// Graded family of homogeneous Lie polynomials for degrees 1..=N.
#[derive(Clone, PartialEq, Eq)]
pub struct LieSeries<C: Scalar> {
    alphabet: Alphabet,
    components: Vec<LiePoly<C>>, // components[i] is homogeneous of degree i+1
}

impl<C: Scalar> LieSeries<C> {
    pub fn zero(alphabet: Alphabet, truncation: usize) -> Self {
        assert!(truncation >= 1);
        LieSeries {
            components: vec![LiePoly::zero(alphabet.clone()); truncation],
            alphabet,
        }
    }

    /// Split a polynomial into homogeneous components; terms above the
    /// truncation are rejected.
    pub fn from_poly(p: &LiePoly<C>, truncation: usize) -> Self {
        let mut s = LieSeries::zero(p.alphabet().clone(), truncation);
        for (w, c) in p.terms() {
            assert!(w.len() >= 1 && w.len() <= truncation, "degree out of range");
            s.components[w.len() - 1].add_term(w.clone(), c.clone());
        }
        s
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn truncation(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, degree: usize) -> &LiePoly<C> {
        assert!(degree >= 1 && degree <= self.components.len());
        &self.components[degree - 1]
    }

    pub fn set_component(&mut self, degree: usize, p: LiePoly<C>) {
        assert!(degree >= 1 && degree <= self.components.len());
        assert!(p.is_homogeneous(degree), "component must be homogeneous");
        self.components[degree - 1] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(LiePoly::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.truncation(), other.truncation(), "truncation mismatch");
        let mut out = self.clone();
        for (i, c) in other.components.iter().enumerate() {
            out.components[i] = out.components[i].add(c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_components(|p| p.neg())
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map_components(|p| p.scale(c))
    }

    pub fn map_components(&self, f: impl Fn(&LiePoly<C>) -> LiePoly<C>) -> Self {
        LieSeries {
            alphabet: self.alphabet.clone(),
            components: self.components.iter().map(f).collect(),
        }
    }

    /// Degreewise bracket [self, other] truncated to the common bound.
    pub fn bracket_series(&self, other: &Self) -> Self {
        assert_eq!(self.truncation(), other.truncation(), "truncation mismatch");
        let n = self.truncation();
        let mut out = LieSeries::zero(self.alphabet.clone(), n);
        for da in 1..=n {
            if self.component(da).is_zero() {
                continue;
            }
            for db in 1..=n.saturating_sub(da) {
                if other.component(db).is_zero() {
                    continue;
                }
                let br = self.component(da).bracket(other.component(db));
                out.components[da + db - 1] = out.components[da + db - 1].add(&br);
            }
        }
        out
    }

    /// Sum of the tau-expansions of all components.
    pub fn tau_sum(&self) -> AssocPoly<C> {
        let mut out = AssocPoly::zero(self.alphabet.clone());
        for c in &self.components {
            out = out.add(&c.tau());
        }
        out
    }

    /// Sum of all components as a single (inhomogeneous) polynomial.
    pub fn sum_poly(&self) -> LiePoly<C> {
        let mut out = LiePoly::zero(self.alphabet.clone());
        for c in &self.components {
            out = out.add(c);
        }
        out
    }

    /// Minimum degree with a nonzero component.
    pub fn min_degree(&self) -> Option<usize> {
        self.components
            .iter()
            .position(|c| !c.is_zero())
            .map(|i| i + 1)
    }
}

impl<C: Scalar> fmt::Display for LieSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "deg {}: {}", i + 1, c)?;
        }
        Ok(())
    }
}

impl<C: Scalar> fmt::Debug for LieSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn xy() -> Alphabet {
        Alphabet::xy()
    }

    fn w(s: &str) -> Word {
        Word::new(s.bytes().map(|b| (b - b'x') as u8).collect())
    }

    fn gen_x() -> LiePoly<Rational> {
        LiePoly::generator(xy(), 0, Rational::one())
    }

    fn gen_y() -> LiePoly<Rational> {
        LiePoly::generator(xy(), 1, Rational::one())
    }

    #[test]
    fn lyndon_word_listing() {
        let deg2: Vec<Word> = lyndon_words(2, 2);
        assert_eq!(deg2, vec![w("xy")]);
        let deg3 = lyndon_words(2, 3);
        assert_eq!(deg3, vec![w("xxy"), w("xyy")]);
        assert_eq!(lyndon_words(2, 5).len(), 6);
        // Listing is lexicographically sorted and all words are Lyndon.
        for n in 1..=8 {
            let words = lyndon_words(2, n);
            assert!(words.windows(2).all(|p| p[0] < p[1]));
            assert!(words.iter().all(Word::is_lyndon));
        }
    }

    #[test]
    fn witt_dimensions_match_enumeration() {
        let expected = [2, 1, 2, 3, 6, 9, 18, 30, 56, 99, 186, 335];
        for n in 1..=12 {
            assert_eq!(witt_dimension(2, n), expected[n - 1], "witt at {n}");
            assert_eq!(lyndon_words(2, n).len(), expected[n - 1], "listing at {n}");
        }
        for n in 1..=6 {
            assert_eq!(lyndon_words(3, n).len(), witt_dimension(3, n));
        }
    }

    #[test]
    fn standard_factorization_examples() {
        assert_eq!(standard_factorization(&w("xy")), (w("x"), w("y")));
        assert_eq!(standard_factorization(&w("xxy")), (w("x"), w("xy")));
        assert_eq!(standard_factorization(&w("xyy")), (w("xy"), w("y")));
        assert_eq!(standard_factorization(&w("xxyy")), (w("x"), w("xyy")));
    }

    #[test]
    fn tau_examples() {
        // [x,y] -> xy - yx
        let b = gen_x().bracket(&gen_y());
        assert_eq!(b, LiePoly::monomial(xy(), w("xy"), Rational::one()));
        let t = b.tau();
        assert_eq!(t.coeff(&w("xy")), Rational::one());
        assert_eq!(t.coeff(&w("yx")), Rational::from_int(-1));
        assert_eq!(t.num_terms(), 2);

        // [x,[x,y]] -> xxy - 2xyx + yxx
        let xxy = gen_x().bracket(&b);
        assert_eq!(xxy, LiePoly::monomial(xy(), w("xxy"), Rational::one()));
        let t = xxy.tau();
        assert_eq!(t.coeff(&w("xxy")), Rational::one());
        assert_eq!(t.coeff(&w("xyx")), Rational::from_int(-2));
        assert_eq!(t.coeff(&w("yxx")), Rational::one());
        assert_eq!(t.num_terms(), 3);
    }

    #[test]
    fn bracket_is_alternating() {
        let u = gen_x().bracket(&gen_y()).add(&gen_x());
        assert!(u.bracket(&u).is_zero());
    }

    #[test]
    fn lie_from_assoc_examples() {
        let x = AssocPoly::letter(xy(), 0, Rational::one());
        let y = AssocPoly::letter(xy(), 1, Rational::one());
        let comm = x.mul(&y).sub(&y.mul(&x));
        assert_eq!(
            lie_from_assoc(&comm).unwrap(),
            LiePoly::monomial(xy(), w("xy"), Rational::one())
        );
        let sym = x.mul(&y).add(&y.mul(&x));
        assert!(matches!(lie_from_assoc(&sym), Err(Error::NotLieElement(_))));

        let mut p = AssocPoly::zero(xy());
        p.add_term(w("xxy"), Rational::one());
        p.add_term(w("xyx"), Rational::from_int(-2));
        p.add_term(w("yxx"), Rational::one());
        assert_eq!(
            lie_from_assoc(&p).unwrap(),
            LiePoly::monomial(xy(), w("xxy"), Rational::one())
        );
    }

    #[test]
    fn dynkin_examples() {
        let x = AssocPoly::letter(xy(), 0, Rational::one());
        let y = AssocPoly::letter(xy(), 1, Rational::one());
        let comm = x.mul(&y).sub(&y.mul(&x));
        assert!(is_lie_dynkin(&comm));
        assert!(!is_lie_dynkin(&x.mul(&y)));
    }

    #[test]
    fn substitute_examples() {
        // u = -[x,y], x -> y, y -> -x-y gives -[x,y] again.
        let u = LiePoly::monomial(xy(), w("xy"), Rational::from_int(-1));
        let target = FreeLie { alphabet: xy() };
        let minus_x_minus_y = gen_x().neg().add(&gen_y().neg());
        let img = substitute(&u, &[gen_y(), minus_x_minus_y], &target);
        assert_eq!(img, u);

        // Collapsing both generators to x kills the bracket.
        let v = LiePoly::monomial(xy(), w("xy"), Rational::one());
        let img = substitute(&v, &[gen_x(), gen_x()], &target);
        assert!(img.is_zero());
    }

    #[test]
    fn depth_examples() {
        let b = gen_x().bracket(&gen_y());
        let xxxy = gen_x().bracket(&gen_x().bracket(&b)); // [x,[x,[x,y]]]
        assert_eq!(xxxy.depth(), Some(1));
        let yxxy = gen_y().bracket(&gen_x().bracket(&b)); // [y,[x,[x,y]]]
        assert_eq!(yxxy.depth(), Some(2));
        assert_eq!(LiePoly::<Rational>::zero(xy()).depth(), None);
        // Depth equals the minimal letter-1 count over the Lyndon support.
        let mix = xxxy.add(&yxxy);
        assert_eq!(mix.depth(), Some(1));
    }

    #[test]
    fn ad_apply_examples() {
        assert_eq!(gen_x().ad_apply(1, &gen_y()), gen_x().bracket(&gen_y()));
        let s = gen_x().add(&gen_y());
        assert!(s.ad_apply(1, &s).is_zero());

        // ad_y^3 x is a single Lyndon monomial of degree 4; cross-check the
        // coefficient against the alternating-sum associative expansion.
        let ad3 = gen_y().ad_apply(3, &gen_x());
        assert_eq!(ad3, LiePoly::monomial(xy(), w("xyyy"), Rational::from_int(-1)));
        let mut assoc = AssocPoly::zero(xy());
        for k in 0..=3usize {
            let binom: i64 = [1, 3, 3, 1][k];
            let sign = if k % 2 == 0 { 1 } else { -1 };
            let word = Word::power(1, 3 - k).concat(&w("x")).concat(&Word::power(1, k));
            assoc.add_term(word, Rational::from_int(sign * binom));
        }
        assert_eq!(ad3.tau(), assoc);
    }

    #[test]
    fn display_and_bracket_strings() {
        assert_eq!(bracket_string(&w("xxy"), &xy()), "[x,[x,y]]");
        assert_eq!(bracket_string(&w("xyy"), &xy()), "[[x,y],y]");
        let p = LiePoly::monomial(xy(), w("xy"), Rational::new(1, 2));
        assert_eq!(p.to_string(), "1/2*[x,y]");
        let q = gen_x().add(&gen_y());
        assert_eq!(q.to_string(), "x + y");
    }

    fn arb_lie(max_deg: usize) -> impl Strategy<Value = LiePoly<Rational>> {
        let words: Vec<Word> = (1..=max_deg).flat_map(|n| lyndon_words(2, n)).collect();
        prop::collection::vec((0..words.len(), -5i64..5), 0..4).prop_map(move |picks| {
            let mut p = LiePoly::zero(Alphabet::xy());
            for (i, c) in picks {
                p.add_term(words[i].clone(), Rational::from_int(c));
            }
            p
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn jacobi_identity(u in arb_lie(3), v in arb_lie(3), t in arb_lie(3)) {
            let j = u.bracket(&v.bracket(&t))
                .add(&v.bracket(&t.bracket(&u)))
                .add(&t.bracket(&u.bracket(&v)));
            prop_assert!(j.is_zero());
        }

        #[test]
        fn tau_respects_bracket(u in arb_lie(3), v in arb_lie(3)) {
            let lhs = u.bracket(&v).tau();
            let (tu, tv) = (u.tau(), v.tau());
            prop_assert_eq!(lhs, tu.mul(&tv).sub(&tv.mul(&tu)));
        }

        #[test]
        fn bracket_routes_agree(u in arb_lie(4), v in arb_lie(4)) {
            prop_assert_eq!(u.bracket(&v), u.bracket_via_elimination(&v));
        }
    }

    #[test]
    fn structure_constants_match_elimination() {
        // Exhaustive cross-check of the rewriting route against the
        // elimination route over all basis pairs of small total degree.
        for total in 2..=8usize {
            for d1 in 1..total {
                for u in lyndon_words(2, d1) {
                    for v in lyndon_words(2, total - d1) {
                        let pu = LiePoly::monomial(xy(), u.clone(), Rational::one());
                        let pv = LiePoly::monomial(xy(), v.clone(), Rational::one());
                        assert_eq!(
                            pu.bracket(&pv),
                            pu.bracket_via_elimination(&pv),
                            "mismatch on pair ({u:?}, {v:?})"
                        );
                    }
                }
            }
        }
        for total in 2..=6usize {
            for d1 in 1..total {
                for u in lyndon_words(3, d1) {
                    for v in lyndon_words(3, total - d1) {
                        let a = Alphabet::t4_inner();
                        let pu = LiePoly::monomial(a.clone(), u.clone(), Rational::one());
                        let pv = LiePoly::monomial(a, v.clone(), Rational::one());
                        assert_eq!(
                            pu.bracket(&pv),
                            pu.bracket_via_elimination(&pv),
                            "mismatch on pair ({u:?}, {v:?})"
                        );
                    }
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn round_trip_tau(u in arb_lie(5)) {
            prop_assert_eq!(lie_from_assoc(&u.tau()).unwrap(), u);
        }

        #[test]
        fn dynkin_agrees_with_elimination(u in arb_lie(4), extra in prop::collection::vec((prop::collection::vec(0u8..2, 4), -3i64..3), 0..3)) {
            // Homogeneous degree-4 sample: a Lie part plus arbitrary words.
            let mut a = u.homogeneous_part(4).tau();
            for (letters, c) in extra {
                a.add_term(Word::new(letters), Rational::from_int(c));
            }
            if a.is_zero() { return Ok(()); }
            let dynkin = is_lie_dynkin(&a);
            let elim = lie_from_assoc(&a).is_ok();
            prop_assert_eq!(dynkin, elim);
        }

        #[test]
        fn substitution_is_homomorphism(u in arb_lie(3), v in arb_lie(3), a in -3i64..3, b in -3i64..3, c in -3i64..3, d in -3i64..3) {
            let target = FreeLie { alphabet: Alphabet::xy() };
            let gx = LiePoly::generator(Alphabet::xy(), 0, Rational::one());
            let gy = LiePoly::generator(Alphabet::xy(), 1, Rational::one());
            let img_x = gx.scale(&Rational::from_int(a)).add(&gy.scale(&Rational::from_int(b)));
            let img_y = gx.scale(&Rational::from_int(c)).add(&gy.scale(&Rational::from_int(d)));
            let images = [img_x, img_y];
            let lhs = substitute(&u.bracket(&v), &images, &target);
            let rhs = substitute(&u, &images, &target)
                .bracket(&substitute(&v, &images, &target));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
