//! Exact scalar arithmetic: arbitrary-precision rationals, prime fields,
//! p-adic valuation, Bernoulli numbers, and the Wilson/von-Staudt checks.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Coefficient interface shared by [`Rational`] and [`FpScalar`].
///
/// Only ring operations on values are required; a nullary `one` is
/// deliberately absent because a prime-field unit needs a modulus.
pub trait Scalar: Clone + PartialEq + Eq + fmt::Debug + fmt::Display {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
}

/// Multiply a scalar by a (possibly negative) machine integer via
/// double-and-add, so no embedding of integers into the field is needed.
pub fn scale_int<C: Scalar>(c: &C, n: i64) -> C {
    if n == 0 || c.is_zero() {
        return C::zero();
    }
    let neg = n < 0;
    let mut m = n.unsigned_abs();
    let mut base = c.clone();
    let mut acc = C::zero();
    while m > 0 {
        if m & 1 == 1 {
            acc = acc.add(&base);
        }
        m >>= 1;
        if m > 0 {
            base = base.add(&base);
        }
    }
    if neg {
        acc.neg()
    } else {
        acc
    }
}

// ---- Rational ----

/// Arbitrary-precision rational, always reduced, denominator > 0.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_int(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Rational(BigRational::new(num, den))
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "division by zero");
        Rational(self.0.recip())
    }

    pub fn div(&self, rhs: &Self) -> Self {
        assert!(!rhs.is_zero(), "division by zero");
        Rational(&self.0 / &rhs.0)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

impl Scalar for Rational {
    fn zero() -> Self {
        Rational(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn add(&self, rhs: &Self) -> Self {
        Rational(&self.0 + &rhs.0)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Rational(&self.0 - &rhs.0)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Rational(&self.0 * &rhs.0)
    }
    fn neg(&self) -> Self {
        Rational(-&self.0)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Rational", 2)?;
        st.serialize_field("num", &self.0.numer().to_string())?;
        st.serialize_field("den", &self.0.denom().to_string())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            num: String,
            den: String,
        }
        let raw = Raw::deserialize(d)?;
        let num: BigInt = raw.num.parse().map_err(D::Error::custom)?;
        let den: BigInt = raw.den.parse().map_err(D::Error::custom)?;
        if den.is_zero() {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(Rational(BigRational::new(num, den)))
    }
}

// ---- FpScalar ----

/// Residue in a prime field F_p with p > 2.
///
/// Zero is normalized to `{residue: 0, p: 0}` so it is a field-agnostic
/// value; every nonzero residue carries its modulus and mixed-modulus
/// arithmetic panics.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FpScalar {
    residue: u64,
    p: u64,
}

impl FpScalar {
    pub fn new(residue: u64, p: u64) -> Self {
        assert!(is_prime(p) && p > 2, "modulus must be an odd prime, got {p}");
        Self::normalized(residue % p, p)
    }

    pub fn from_i64(v: i64, p: u64) -> Self {
        assert!(is_prime(p) && p > 2, "modulus must be an odd prime, got {p}");
        let r = v.rem_euclid(p as i64) as u64;
        Self::normalized(r, p)
    }

    fn normalized(residue: u64, p: u64) -> Self {
        if residue == 0 {
            FpScalar { residue: 0, p: 0 }
        } else {
            FpScalar { residue, p }
        }
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    /// Modulus of this value; 0 for the field-agnostic zero.
    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn join_modulus(&self, rhs: &Self) -> u64 {
        match (self.p, rhs.p) {
            (0, q) => q,
            (q, 0) => q,
            (q, r) => {
                assert!(q == r, "mixed moduli {q} and {r}");
                q
            }
        }
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero in F_p");
        // Fermat: a^(p-2) mod p.
        let mut acc: u64 = 1;
        let mut base = self.residue % self.p;
        let mut e = self.p - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(acc, base, self.p);
            }
            base = mul_mod(base, base, self.p);
            e >>= 1;
        }
        Self::normalized(acc, self.p)
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

impl Scalar for FpScalar {
    fn zero() -> Self {
        FpScalar { residue: 0, p: 0 }
    }
    fn is_zero(&self) -> bool {
        self.residue == 0
    }
    fn add(&self, rhs: &Self) -> Self {
        let p = self.join_modulus(rhs);
        if p == 0 {
            return Self::zero();
        }
        Self::normalized((self.residue + rhs.residue) % p, p)
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
    fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let p = self.join_modulus(rhs);
        Self::normalized(mul_mod(self.residue, rhs.residue, p), p)
    }
    fn neg(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self::normalized(self.p - self.residue, self.p)
    }
}

impl fmt::Display for FpScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.residue)
    }
}

impl fmt::Debug for FpScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p == 0 {
            write!(f, "0")
        } else {
            write!(f, "{} (mod {})", self.residue, self.p)
        }
    }
}

// ---- p-adic valuation ----

/// p-adic valuation with the +infinity sentinel for 0, ordered so that
/// `Infinite` is the maximum (min-folds over coefficients work directly).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn is_finite(&self) -> bool {
        matches!(self, Valuation::Finite(_))
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use Valuation::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (Finite(_), Infinite) => std::cmp::Ordering::Less,
            (Infinite, Finite(_)) => std::cmp::Ordering::Greater,
            (Infinite, Infinite) => std::cmp::Ordering::Equal,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "+inf"),
        }
    }
}

/// Trial-division primality; inputs here are tiny.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn big_valuation(n: &BigInt, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut v = 0i64;
    let mut cur = n.abs();
    loop {
        let (q, r) = cur.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        v += 1;
        cur = q;
    }
}

/// v_p(q): the exponent of p in q, `Infinite` for q = 0.
pub fn p_valuation(q: &Rational, p: u64) -> Valuation {
    assert!(is_prime(p), "p must be prime, got {p}");
    if q.is_zero() {
        return Valuation::Infinite;
    }
    Valuation::Finite(big_valuation(q.numer(), p) - big_valuation(q.denom(), p))
}

/// Image of a p-integral rational in F_p.
pub fn reduce_mod_p(q: &Rational, p: u64) -> Result<FpScalar> {
    assert!(is_prime(p) && p > 2, "p must be an odd prime, got {p}");
    if q.is_zero() {
        return Ok(FpScalar::zero());
    }
    if p_valuation(q, p) < Valuation::Finite(0) {
        return Err(Error::NegativeValuation { p });
    }
    let pb = BigInt::from(p);
    let num = q.numer().mod_floor(&pb);
    let den = q.denom().mod_floor(&pb);
    let num = u64::try_from(&num).expect("residue fits in u64");
    let den = u64::try_from(&den).expect("residue fits in u64");
    debug_assert!(den != 0);
    let num = FpScalar::normalized(num, p);
    if num.is_zero() {
        return Ok(FpScalar::zero());
    }
    Ok(num.mul(&FpScalar::normalized(den, p).inv()))
}

// ---- Bernoulli numbers ----

/// m-th Bernoulli number in the B(1) = +1/2 convention, i.e. the
/// coefficients of t/(1 - e^(-t)) = sum B_m t^m / m!.
///
/// Even-index values agree with the classical sequence, which is all the
/// von Staudt check uses.
pub fn bernoulli(m: usize) -> Rational {
    // Recurrence sum_{k=0..m} C(m+1, k) B_k = m + 1 for this convention.
    let mut table: Vec<BigRational> = Vec::with_capacity(m + 1);
    for n in 0..=m {
        let mut acc = BigRational::from_integer(BigInt::from(n as i64 + 1));
        let mut binom = BigInt::one(); // C(n+1, k) built incrementally
        for (k, b) in table.iter().enumerate().take(n) {
            acc -= BigRational::from_integer(binom.clone()) * b;
            binom = &binom * BigInt::from((n + 1 - k) as i64) / BigInt::from(k as i64 + 1);
        }
        acc /= BigRational::from_integer(BigInt::from(n as i64 + 1));
        table.push(acc);
    }
    Rational(table.pop().expect("table is nonempty"))
}

// ---- Number-theory lemma checks ----

/// Outcome of the von Staudt test for one (p, m) pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StaudtReport {
    pub p: u64,
    pub m: usize,
    /// Whether (p-1) divides m.
    pub divides: bool,
    /// v_p(B_m) >= 0 in the non-dividing case, v_p(p B_m) >= 0 otherwise.
    pub p_integral: bool,
    /// p B_m mod p when (p-1) | m.
    pub residue_if_divides: Option<FpScalar>,
}

impl StaudtReport {
    /// The lemma's claim: p-integrality, and p B_m = -1 mod p when (p-1) | m.
    pub fn holds(&self) -> bool {
        self.p_integral
            && match self.residue_if_divides {
                Some(r) => r.residue() == self.p - 1,
                None => !self.divides,
            }
    }
}

pub fn staudt_check(p: u64, m: usize) -> StaudtReport {
    assert!(is_prime(p) && p > 2, "p must be an odd prime, got {p}");
    assert!(m >= 2 && m % 2 == 0, "m must be even and >= 2, got {m}");
    let b = bernoulli(m);
    let divides = m % (p as usize - 1) == 0;
    if divides {
        let pb = b.mul(&Rational::from_int(p as i64));
        let p_integral = p_valuation(&pb, p) >= Valuation::Finite(0);
        let residue = if p_integral {
            Some(reduce_mod_p(&pb, p).expect("p-integral by check"))
        } else {
            None
        };
        StaudtReport {
            p,
            m,
            divides,
            p_integral,
            residue_if_divides: residue,
        }
    } else {
        StaudtReport {
            p,
            m,
            divides,
            p_integral: p_valuation(&b, p) >= Valuation::Finite(0),
            residue_if_divides: None,
        }
    }
}

/// (p-1)! = -1 mod p, true for every prime.
pub fn wilson_check(p: u64) -> bool {
    assert!(is_prime(p), "p must be prime, got {p}");
    let mut acc: u64 = 1;
    for k in 1..p {
        acc = mul_mod(acc, k, p);
    }
    acc == p - 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(p_valuation(&q(1, 6), 3), Valuation::Finite(-1));
        assert_eq!(p_valuation(&Rational::zero(), 5), Valuation::Infinite);
        assert_eq!(p_valuation(&q(50, 3), 5), Valuation::Finite(2));
        assert_eq!(p_valuation(&q(7, 1), 7), Valuation::Finite(1));
    }

    #[test]
    #[should_panic(expected = "prime")]
    fn valuation_rejects_composite() {
        p_valuation(&q(1, 2), 6);
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(reduce_mod_p(&q(1, 6), 5).unwrap(), FpScalar::new(1, 5));
        // -1/6 mod 7: 6^{-1} = 6, so -6 = 1 mod 7.
        assert_eq!(reduce_mod_p(&q(-1, 6), 7).unwrap(), FpScalar::new(1, 7));
        assert_eq!(
            reduce_mod_p(&q(1, 3), 3),
            Err(Error::NegativeValuation { p: 3 })
        );
    }

    #[test]
    fn bernoulli_table() {
        assert_eq!(bernoulli(0), Rational::one());
        assert_eq!(bernoulli(1), q(1, 2));
        assert_eq!(bernoulli(2), q(1, 6));
        assert_eq!(bernoulli(3), Rational::zero());
        assert_eq!(bernoulli(4), q(-1, 30));
        assert_eq!(bernoulli(6), q(1, 42));
        assert_eq!(bernoulli(8), q(-1, 30));
        assert_eq!(bernoulli(12), q(-691, 2730));
    }

    #[test]
    fn odd_bernoulli_vanish() {
        for k in 1..=20 {
            assert!(bernoulli(2 * k + 1).is_zero(), "B_{} != 0", 2 * k + 1);
        }
    }

    #[test]
    fn staudt_examples() {
        // 5 B_4 = -1/6 = -1 mod 5 -> residue 4.
        let r = staudt_check(5, 4);
        assert!(r.divides && r.p_integral);
        assert_eq!(r.residue_if_divides, Some(FpScalar::new(4, 5)));
        assert!(r.holds());
        // 7 B_6 = 1/6 = -1 mod 7 -> residue 6.
        let r = staudt_check(7, 6);
        assert_eq!(r.residue_if_divides, Some(FpScalar::new(6, 7)));
        assert!(r.holds());
        // (5-1) does not divide 2: B_2 = 1/6 is 5-integral.
        let r = staudt_check(5, 2);
        assert!(!r.divides && r.p_integral && r.residue_if_divides.is_none());
        assert!(r.holds());
    }

    #[test]
    fn staudt_sweep() {
        for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
            for m in (2..=40).step_by(2) {
                assert!(staudt_check(p, m).holds(), "staudt fails at p={p}, m={m}");
            }
        }
    }

    #[test]
    fn wilson_examples() {
        assert!(wilson_check(5));
        assert!(wilson_check(3));
        assert!(wilson_check(13));
        for p in 2..=200u64 {
            if is_prime(p) {
                assert!(wilson_check(p), "wilson fails at {p}");
            }
        }
    }

    #[test]
    fn fp_zero_is_field_agnostic() {
        let z = FpScalar::new(0, 5);
        assert_eq!(z, FpScalar::zero());
        assert_eq!(z.modulus(), 0);
        let a = FpScalar::new(3, 7);
        assert_eq!(z.add(&a), a);
        assert_eq!(a.mul(&z), FpScalar::zero());
        assert_eq!(a.add(&a.neg()), FpScalar::zero());
    }

    #[test]
    fn fp_inverse() {
        for p in [3u64, 5, 7, 11, 13] {
            for r in 1..p {
                let a = FpScalar::new(r, p);
                assert_eq!(a.mul(&a.inv()), FpScalar::new(1, p));
            }
        }
    }

    #[test]
    fn scale_int_matches_repeated_add() {
        let c = q(3, 7);
        assert_eq!(scale_int(&c, 0), Rational::zero());
        assert_eq!(scale_int(&c, 5), q(15, 7));
        assert_eq!(scale_int(&c, -4), q(-12, 7));
        let f = FpScalar::new(2, 5);
        assert_eq!(scale_int(&f, 7), FpScalar::new(4, 5));
        assert_eq!(scale_int(&f, -1), FpScalar::new(3, 5));
    }

    #[test]
    fn rational_json_shape() {
        let v = serde_json::to_value(q(-3, 4)).unwrap();
        assert_eq!(v["num"], "-3");
        assert_eq!(v["den"], "4");
        let back: Rational = serde_json::from_value(v).unwrap();
        assert_eq!(back, q(-3, 4));
    }

    proptest! {
        #[test]
        fn valuation_is_additive(an in -40i64..40, ad in 1i64..40, bn in -40i64..40, bd in 1i64..40) {
            let a = q(an, ad);
            let b = q(bn, bd);
            for p in [3u64, 5, 7] {
                let va = p_valuation(&a, p);
                let vb = p_valuation(&b, p);
                let vab = p_valuation(&a.mul(&b), p);
                match (va, vb) {
                    (Valuation::Finite(x), Valuation::Finite(y)) =>
                        prop_assert_eq!(vab, Valuation::Finite(x + y)),
                    _ => prop_assert_eq!(vab, Valuation::Infinite),
                }
                // Ultrametric inequality.
                let vsum = p_valuation(&a.add(&b), p);
                prop_assert!(vsum >= va.min(vb));
            }
        }

        #[test]
        fn reduction_is_multiplicative(an in -30i64..30, ad in 1i64..30, bn in -30i64..30, bd in 1i64..30) {
            let a = q(an, ad);
            let b = q(bn, bd);
            for p in [5u64, 7] {
                if let (Ok(ra), Ok(rb), Ok(rab)) = (
                    reduce_mod_p(&a, p),
                    reduce_mod_p(&b, p),
                    reduce_mod_p(&a.mul(&b), p),
                ) {
                    prop_assert_eq!(ra.mul(&rb), rab);
                    if let Ok(rsum) = reduce_mod_p(&a.add(&b), p) {
                        prop_assert_eq!(ra.add(&rb), rsum);
                    }
                }
            }
        }
    }
}
