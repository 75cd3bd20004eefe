//! The Campbell-Hausdorff series, the one-variable operator series built
//! from Theta(t) = (1 - e^(-t))/t and R(t) = (e^t - e^(-t) - 2t)/t^2, the
//! closed-form solution (U, V, F, G) of the Kashiwara-Vergne equations,
//! residual checks for those equations at a truncation, p-adic valuation
//! profiles, and the extraction of the mod-p pair (A, B).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{lie_from_assoc, substitute, FreeLie, LiePoly, LieSeries};
use crate::scalars::{p_valuation, reduce_mod_p, FpScalar, Rational, Scalar, Valuation};
use crate::words::{
    cyclic_trace, quadratic_trace, Alphabet, AssocPoly, QuadTraceElement, TraceElement, Word,
};

// ---- Operator series ----

/// Truncated formal power series in one variable with exact rational
/// coefficients; `coeffs[k]` is the t^k coefficient.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OperatorSeries {
    coeffs: Vec<Rational>,
}

impl OperatorSeries {
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty());
        OperatorSeries { coeffs }
    }

    pub fn from_fn(truncation: usize, f: impl FnMut(usize) -> Rational) -> Self {
        OperatorSeries {
            coeffs: (0..=truncation).map(f).collect(),
        }
    }

    pub fn one(truncation: usize) -> Self {
        Self::from_fn(truncation, |k| {
            if k == 0 {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
    }

    /// e^t truncated.
    pub fn exp_t(truncation: usize) -> Self {
        let mut fact = Rational::one();
        Self::from_fn(truncation, |k| {
            if k > 0 {
                fact = fact.mul(&Rational::from_int(k as i64));
            }
            fact.inv()
        })
    }

    /// e^(-t) truncated.
    pub fn exp_neg_t(truncation: usize) -> Self {
        let e = Self::exp_t(truncation);
        Self::from_fn(truncation, |k| {
            if k % 2 == 0 {
                e.coeff(k)
            } else {
                e.coeff(k).neg()
            }
        })
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.truncation().min(other.truncation());
        Self::from_fn(n, |k| self.coeff(k).add(&other.coeff(k)))
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.truncation().min(other.truncation());
        Self::from_fn(n, |k| self.coeff(k).sub(&other.coeff(k)))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_fn(self.truncation(), |k| self.coeff(k).mul(c))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.truncation().min(other.truncation());
        let mut coeffs = vec![Rational::zero(); n + 1];
        for i in 0..=n {
            if self.coeff(i).is_zero() {
                continue;
            }
            for j in 0..=(n - i) {
                coeffs[i + j] = coeffs[i + j].add(&self.coeff(i).mul(&other.coeff(j)));
            }
        }
        OperatorSeries { coeffs }
    }

    /// Multiplicative inverse of a series with nonzero constant term.
    pub fn inverse(&self) -> Self {
        let c0 = self.coeff(0);
        assert!(!c0.is_zero(), "series has no inverse: zero constant term");
        let c0_inv = c0.inv();
        let n = self.truncation();
        let mut out = vec![Rational::zero(); n + 1];
        out[0] = c0_inv.clone();
        for k in 1..=n {
            let mut acc = Rational::zero();
            for i in 1..=k {
                acc = acc.add(&self.coeff(i).mul(&out[k - i]));
            }
            out[k] = acc.neg().mul(&c0_inv);
        }
        OperatorSeries { coeffs: out }
    }

    /// Divide by t^k; the k lowest coefficients must vanish.
    pub fn shift_down(&self, k: usize) -> Self {
        for i in 0..k {
            assert!(
                self.coeff(i).is_zero(),
                "cannot divide by t^{k}: t^{i} term present"
            );
        }
        OperatorSeries {
            coeffs: self.coeffs[k..].to_vec(),
        }
    }
}

/// The named one-variable series of the closed-form solution.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SeriesName {
    /// Theta(t) = (1 - e^(-t))/t
    Theta,
    /// 1/Theta(t) = t/(1 - e^(-t))
    ThetaInv,
    /// Theta(-t) = (e^t - 1)/t
    ThetaMinus,
    /// 1/Theta(-t) = t/(e^t - 1)
    ThetaMinusInv,
    /// R(t) = (e^t - e^(-t) - 2t)/t^2
    R,
}

pub fn named_series(name: SeriesName, truncation: usize) -> OperatorSeries {
    let pad = truncation + 2;
    let one = OperatorSeries::one(pad);
    match name {
        SeriesName::Theta => {
            let s = one.sub(&OperatorSeries::exp_neg_t(pad)).shift_down(1);
            OperatorSeries::from_fn(truncation, |k| s.coeff(k))
        }
        SeriesName::ThetaInv => named_series(SeriesName::Theta, truncation).inverse(),
        SeriesName::ThetaMinus => {
            let s = OperatorSeries::exp_t(pad).sub(&one).shift_down(1);
            OperatorSeries::from_fn(truncation, |k| s.coeff(k))
        }
        SeriesName::ThetaMinusInv => named_series(SeriesName::ThetaMinus, truncation).inverse(),
        SeriesName::R => {
            let two_t = OperatorSeries::from_fn(pad, |k| {
                if k == 1 {
                    Rational::from_int(2)
                } else {
                    Rational::zero()
                }
            });
            let s = OperatorSeries::exp_t(pad)
                .sub(&OperatorSeries::exp_neg_t(pad))
                .sub(&two_t)
                .shift_down(2);
            OperatorSeries::from_fn(truncation, |k| s.coeff(k))
        }
    }
}

/// e^t - 1, the left operator of the first equation.
fn exp_minus_one(truncation: usize) -> OperatorSeries {
    OperatorSeries::exp_t(truncation).sub(&OperatorSeries::one(truncation))
}

/// 1 - e^(-t), the right operator of the first equation.
fn one_minus_exp_neg(truncation: usize) -> OperatorSeries {
    OperatorSeries::one(truncation).sub(&OperatorSeries::exp_neg_t(truncation))
}

// ---- Campbell-Hausdorff ----

fn xy() -> Alphabet {
    Alphabet::xy()
}

fn generator_series(letter: u8, truncation: usize) -> LieSeries<Rational> {
    LieSeries::from_poly(
        &LiePoly::generator(xy(), letter, Rational::one()),
        truncation,
    )
}

/// z_1..z_N of log(e^x e^y) by the explicit double sum over block tuples
/// (i_1, j_1, ..., i_k, j_k) with i_m + j_m > 0, each degree converted to
/// the Lyndon basis.
pub fn ch_series(truncation: usize) -> Result<LieSeries<Rational>> {
    assert!(truncation >= 1);
    let alphabet = xy();
    let mut series = LieSeries::zero(alphabet.clone(), truncation);
    let factorials: Vec<u64> = {
        let mut f = vec![1u64; truncation + 1];
        for i in 1..=truncation {
            f[i] = f[i - 1] * i as u64;
        }
        f
    };
    for n in 1..=truncation {
        let mut assoc = AssocPoly::zero(alphabet.clone());
        let mut word: Vec<u8> = Vec::with_capacity(n);
        enumerate_blocks(n, 0, 1, &factorials, &mut word, &mut assoc);
        series.set_component(n, lie_from_assoc(&assoc)?);
    }
    Ok(series)
}

fn enumerate_blocks(
    remaining: usize,
    k: usize,
    denom: u64,
    factorials: &[u64],
    word: &mut Vec<u8>,
    out: &mut AssocPoly<Rational>,
) {
    if remaining == 0 {
        debug_assert!(k >= 1);
        let sign = if k % 2 == 1 { 1 } else { -1 };
        let den = (k as u64 * denom) as i64;
        out.add_term(Word::new(word.clone()), Rational::new(sign, den));
        return;
    }
    for i in 0..=remaining {
        for j in 0..=(remaining - i) {
            if i + j == 0 {
                continue;
            }
            let len_before = word.len();
            word.extend(std::iter::repeat(0u8).take(i));
            word.extend(std::iter::repeat(1u8).take(j));
            enumerate_blocks(
                remaining - i - j,
                k + 1,
                denom * factorials[i] * factorials[j],
                factorials,
                word,
                out,
            );
            word.truncate(len_before);
        }
    }
}

/// Independent route to the same series: log of the product of the two
/// truncated exponentials, converted degreewise.
pub fn ch_oracle(truncation: usize) -> Result<LieSeries<Rational>> {
    assert!(truncation >= 1);
    let alphabet = xy();
    let x = AssocPoly::letter(alphabet.clone(), 0, Rational::one());
    let y = AssocPoly::letter(alphabet.clone(), 1, Rational::one());
    let prod = x
        .exp_trunc(truncation)?
        .mul_trunc(&y.exp_trunc(truncation)?, truncation);
    let log = prod.log_trunc(truncation)?;
    let mut series = LieSeries::zero(alphabet, truncation);
    for n in 1..=truncation {
        series.set_component(n, lie_from_assoc(&log.homogeneous_part(n))?);
    }
    Ok(series)
}

// ---- Operator application and the grading ----

/// sum_k phi_k (ad u)^k applied to w, organized by total degree and
/// truncated at the series' bound.
pub fn apply_ad_series(
    phi: &OperatorSeries,
    u: &LieSeries<Rational>,
    w: &LieSeries<Rational>,
    truncation: usize,
) -> LieSeries<Rational> {
    let mut out = LieSeries::zero(w.alphabet().clone(), truncation);
    let mut power = w.clone();
    let c0 = phi.coeff(0);
    if !c0.is_zero() {
        out = out.add(&power.scale(&c0));
    }
    for k in 1..=phi.truncation() {
        power = u.bracket_series(&power);
        if power.is_zero() {
            break;
        }
        let ck = phi.coeff(k);
        if !ck.is_zero() {
            out = out.add(&power.scale(&ck));
        }
    }
    out
}

/// Inverse of (grading + 1): the degree-n component is scaled by 1/(n+1).
pub fn grading_inverse_shift(s: &LieSeries<Rational>) -> LieSeries<Rational> {
    let mut out = s.clone();
    for n in 1..=s.truncation() {
        let c = s.component(n).scale(&Rational::new(1, n as i64 + 1));
        out.set_component(n, c);
    }
    out
}

// ---- The closed-form solution ----

fn vergne_uv_with_z(
    z: &LieSeries<Rational>,
    n: usize,
) -> (LieSeries<Rational>, LieSeries<Rational>) {
    let theta = named_series(SeriesName::Theta, n);
    let theta_inv = named_series(SeriesName::ThetaInv, n);
    let theta_minus = named_series(SeriesName::ThetaMinus, n);
    let theta_minus_inv = named_series(SeriesName::ThetaMinusInv, n);
    let r = named_series(SeriesName::R, n);
    let x_s = generator_series(0, n);
    let y_s = generator_series(1, n);
    let half = Rational::new(1, 2);
    let minus_half = Rational::new(-1, 2);

    // Shared inner argument Theta(-ad z)^{-1} x + Theta(ad z)^{-1} y.
    let arg = apply_ad_series(&theta_minus_inv, z, &x_s, n)
        .add(&apply_ad_series(&theta_inv, z, &y_s, n));
    let r_arg = apply_ad_series(&r, z, &arg, n);

    let rhs_u = apply_ad_series(&theta, &x_s, &apply_ad_series(&theta_inv, z, &r_arg, n), n)
        .scale(&minus_half)
        .add(&apply_ad_series(&theta_minus, &x_s, &y_s, n).scale(&half));
    let u = grading_inverse_shift(&rhs_u);

    let rhs_v = apply_ad_series(
        &theta_minus,
        &y_s,
        &apply_ad_series(&theta_minus_inv, z, &r_arg, n),
        n,
    )
    .scale(&minus_half)
    .add(&apply_ad_series(&theta, &y_s, &x_s, n).scale(&minus_half));
    let v = grading_inverse_shift(&rhs_v);

    (u, v)
}

/// The pair (U, V) through degree N.
pub fn vergne_uv(n: usize) -> Result<(LieSeries<Rational>, LieSeries<Rational>)> {
    assert!(n >= 1);
    let z = ch_series(n)?;
    Ok(vergne_uv_with_z(&z, n))
}

fn vergne_fg_with_uv(
    u: &LieSeries<Rational>,
    v: &LieSeries<Rational>,
    n: usize,
) -> (LieSeries<Rational>, LieSeries<Rational>) {
    let theta_inv = named_series(SeriesName::ThetaInv, n);
    let theta_minus_inv = named_series(SeriesName::ThetaMinusInv, n);
    let x_s = generator_series(0, n);
    let y_s = generator_series(1, n);
    let f = apply_ad_series(&theta_minus_inv, &x_s, u, n).neg();
    // The y-side extraction mirrors the x-side under x -> -y, y -> -x, so
    // it uses Theta(ad y)^{-1}; with Theta(-ad y)^{-1} the first defining
    // equation already fails at degree 3 with residual 1/4*[[x,y],y].
    let g = apply_ad_series(&theta_inv, &y_s, v, n).neg();
    (f, g)
}

/// The solution pair (F, G) through degree N.
pub fn vergne_fg(n: usize) -> Result<(LieSeries<Rational>, LieSeries<Rational>)> {
    assert!(n >= 1);
    let z = ch_series(n)?;
    let (u, v) = vergne_uv_with_z(&z, n);
    Ok(vergne_fg_with_uv(&u, &v, n))
}

/// Everything the solution pipeline produces at one truncation.
#[derive(Clone)]
pub struct VergneSolution {
    pub n: usize,
    pub z: LieSeries<Rational>,
    pub u: LieSeries<Rational>,
    pub v: LieSeries<Rational>,
    pub f: LieSeries<Rational>,
    pub g: LieSeries<Rational>,
}

impl VergneSolution {
    pub fn compute(n: usize) -> Result<Self> {
        assert!(n >= 1);
        let z = ch_series(n)?;
        let (u, v) = vergne_uv_with_z(&z, n);
        let (f, g) = vergne_fg_with_uv(&u, &v, n);
        Ok(VergneSolution { n, z, u, v, f, g })
    }

    pub fn check_kv(&self) -> Result<KvReport> {
        check_kv_with_z(&self.f, &self.g, &self.z, self.n)
    }

    /// Mirror symmetry under x -> -y, y -> -x: V = U(sigma), G = F(sigma).
    pub fn symmetry_report(&self) -> SymmetryReport {
        SymmetryReport {
            uv_mirror: mirror_series(&self.u) == self.v,
            fg_mirror: mirror_series(&self.f) == self.g,
        }
    }
}

/// Apply the substitution x -> -y, y -> -x to every component.
pub fn mirror_series(s: &LieSeries<Rational>) -> LieSeries<Rational> {
    let target = FreeLie {
        alphabet: s.alphabet().clone(),
    };
    let gx = LiePoly::generator(s.alphabet().clone(), 0, Rational::one());
    let gy = LiePoly::generator(s.alphabet().clone(), 1, Rational::one());
    let images = [gy.neg(), gx.neg()];
    s.map_components(|p| substitute(p, &images, &target))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub uv_mirror: bool,
    pub fg_mirror: bool,
}

// ---- Residual checks for the two defining equations ----

/// Per-degree residuals of the two equations at a truncation. The pair
/// passes when the first equation's Lie residuals and the second
/// equation's quadratic-trace residuals all vanish; the cyclic-only
/// residuals are carried for information.
pub struct KvReport {
    pub eq2_residual_by_degree: Vec<LiePoly<Rational>>,
    pub eq3_residual_by_degree: Vec<QuadTraceElement<Rational>>,
    pub eq3_tilde_residual_by_degree: Vec<TraceElement<Rational>>,
}

impl KvReport {
    pub fn eq2_ok(&self) -> bool {
        self.eq2_residual_by_degree.iter().all(LiePoly::is_zero)
    }

    pub fn eq3_ok(&self) -> bool {
        self.eq3_residual_by_degree
            .iter()
            .all(QuadTraceElement::is_zero)
    }

    pub fn eq3_tilde_ok(&self) -> bool {
        self.eq3_tilde_residual_by_degree
            .iter()
            .all(TraceElement::is_zero)
    }

    pub fn all_ok(&self) -> bool {
        self.eq2_ok() && self.eq3_ok()
    }
}

/// Residuals of both equations for a candidate pair (F, G) through degree N.
pub fn check_kv(f: &LieSeries<Rational>, g: &LieSeries<Rational>, n: usize) -> Result<KvReport> {
    assert!(n >= 2);
    let z = ch_series(n)?;
    check_kv_with_z(f, g, &z, n)
}

fn check_kv_with_z(
    f: &LieSeries<Rational>,
    g: &LieSeries<Rational>,
    z: &LieSeries<Rational>,
    n: usize,
) -> Result<KvReport> {
    let alphabet = xy();
    let x_s = generator_series(0, n);
    let y_s = generator_series(1, n);

    // First equation: x + y - z - (e^(ad x) - 1)F - (1 - e^(-ad y))G.
    let em1 = exp_minus_one(n);
    let ome = one_minus_exp_neg(n);
    let lhs = x_s.add(&y_s).sub(z);
    let op = apply_ad_series(&em1, &x_s, f, n).add(&apply_ad_series(&ome, &y_s, g, n));
    let eq2 = lhs.sub(&op);
    let eq2_residual_by_degree: Vec<LiePoly<Rational>> =
        (1..=n).map(|d| eq2.component(d).clone()).collect();

    // Second equation, traced: x d_x F + y d_y G against
    // (1/2)(x/(e^x - 1) + y/(e^y - 1) - z/(e^z - 1) - 1).
    let tmi = named_series(SeriesName::ThetaMinusInv, n);
    let x_assoc = AssocPoly::letter(alphabet.clone(), 0, Rational::one());
    let y_assoc = AssocPoly::letter(alphabet.clone(), 1, Rational::one());
    let z_assoc = z.tau_sum();

    // sum_m tmi_m (x^m + y^m - z^m); the constants cancel.
    let mut rhs_assoc = AssocPoly::zero(alphabet.clone());
    for m in 1..=n {
        let c = tmi.coeff(m);
        if c.is_zero() {
            continue;
        }
        let xm = AssocPoly::monomial(alphabet.clone(), Word::power(0, m), c.clone());
        let ym = AssocPoly::monomial(alphabet.clone(), Word::power(1, m), c);
        rhs_assoc = rhs_assoc.add(&xm).add(&ym);
    }
    let mut z_pow = z_assoc.clone();
    for m in 1..=n {
        if m > 1 {
            z_pow = z_pow.mul_trunc(&z_assoc, n);
        }
        let c = tmi.coeff(m);
        if !c.is_zero() {
            rhs_assoc = rhs_assoc.sub(&z_pow.scale(&c));
        }
    }

    let half = Rational::new(1, 2);
    let mut eq3_residual_by_degree = Vec::with_capacity(n);
    let mut eq3_tilde_residual_by_degree = Vec::with_capacity(n);
    for d in 1..=n {
        let tf = f.component(d).tau();
        let tg = g.component(d).tau();
        let lhs_assoc = x_assoc
            .mul(&tf.right_derivative(0))
            .add(&y_assoc.mul(&tg.right_derivative(1)));
        let rhs_d = rhs_assoc.homogeneous_part(d);
        let quad = quadratic_trace(&lhs_assoc)?.sub(&quadratic_trace(&rhs_d)?.scale(&half));
        let tilde = cyclic_trace(&lhs_assoc)?.sub(&cyclic_trace(&rhs_d)?.scale(&half));
        eq3_residual_by_degree.push(quad);
        eq3_tilde_residual_by_degree.push(tilde);
    }

    Ok(KvReport {
        eq2_residual_by_degree,
        eq3_residual_by_degree,
        eq3_tilde_residual_by_degree,
    })
}

// ---- Valuation profile and extraction ----

/// Per-degree minimum p-adic valuation over the Lyndon coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValuationProfile {
    pub p: u64,
    /// Index d-1 holds the minimum over the degree-d component.
    pub per_degree: Vec<Valuation>,
}

impl ValuationProfile {
    pub fn at_degree(&self, d: usize) -> Valuation {
        self.per_degree[d - 1]
    }
}

pub fn valuation_profile(s: &LieSeries<Rational>, p: u64) -> ValuationProfile {
    let per_degree = (1..=s.truncation())
        .map(|d| {
            s.component(d)
                .terms()
                .map(|(_, c)| p_valuation(c, p))
                .min()
                .unwrap_or(Valuation::Infinite)
        })
        .collect();
    ValuationProfile { p, per_degree }
}

/// The degree-(p-1) extraction A = (p F_{p-1} mod p), B = (p G_{p-1} mod p).
///
/// Requires every degree-(p-1) coefficient of F and G to have valuation
/// at least -1; a violation is a hard error because the 1/p coefficient
/// would then be undefined.
pub fn extract_ab(p: u64) -> Result<(LiePoly<FpScalar>, LiePoly<FpScalar>)> {
    let sol = VergneSolution::compute(p as usize - 1)?;
    extract_ab_from(&sol, p)
}

pub fn extract_ab_from(
    sol: &VergneSolution,
    p: u64,
) -> Result<(LiePoly<FpScalar>, LiePoly<FpScalar>)> {
    assert!(
        crate::scalars::is_prime(p) && p > 2,
        "p must be an odd prime"
    );
    let d = p as usize - 1;
    assert!(sol.n >= d, "solution truncation too small");
    let a = reduce_top_degree(sol.f.component(d), p, d)?;
    let b = reduce_top_degree(sol.g.component(d), p, d)?;
    Ok((a, b))
}

fn reduce_top_degree(
    comp: &LiePoly<Rational>,
    p: u64,
    degree: usize,
) -> Result<LiePoly<FpScalar>> {
    let p_rat = Rational::from_int(p as i64);
    let mut out = LiePoly::zero(comp.alphabet().clone());
    for (w, c) in comp.terms() {
        if p_valuation(c, p) < Valuation::Finite(-1) {
            return Err(Error::ValuationViolation { p, degree });
        }
        out.add_term(w.clone(), reduce_mod_p(&c.mul(&p_rat), p)?);
    }
    Ok(out)
}
