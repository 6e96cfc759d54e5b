//! The algebras B = R + Rk with k^2 = q, their split form for q > 0, and the
//! four-dimensional Clifford container that holds every B_t at once.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The value q = k^2 that fixes the algebra.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AlgebraTag {
    pub q: f64,
}

/// Coarse type of the algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// q < 0, isomorphic to C.
    Complex,
    /// q = 0, dual numbers.
    Dual,
    /// q > 0, isomorphic to R + R.
    Split,
}

impl AlgebraTag {
    pub const COMPLEX: AlgebraTag = AlgebraTag { q: -1.0 };
    pub const DUAL: AlgebraTag = AlgebraTag { q: 0.0 };
    pub const SPLIT: AlgebraTag = AlgebraTag { q: 1.0 };

    pub fn new(q: f64) -> Self {
        AlgebraTag { q }
    }

    /// Tag of B_t, where k_t^2 = -t|t|.
    pub fn transition(t: f64) -> Self {
        AlgebraTag { q: -t * t.abs() }
    }

    pub fn regime(self) -> Regime {
        if self.q < 0.0 {
            Regime::Complex
        } else if self.q > 0.0 {
            Regime::Split
        } else {
            Regime::Dual
        }
    }

    pub fn same_as(self, other: AlgebraTag) -> bool {
        (self.q - other.q).abs() <= 1e-12 * self.q.abs().max(other.q.abs()).max(1.0)
    }

    pub fn one(self) -> BNum {
        BNum::real(self, 1.0)
    }

    pub fn zero(self) -> BNum {
        BNum::real(self, 0.0)
    }

    pub fn unit(self) -> BNum {
        BNum::new(self, 0.0, 1.0)
    }
}

/// An element re + im k of B.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BNum {
    pub re: f64,
    pub im: f64,
    #[serde(rename = "q")]
    pub tag: AlgebraTag,
}

impl BNum {
    pub fn new(tag: AlgebraTag, re: f64, im: f64) -> Self {
        BNum { re, im, tag }
    }

    pub fn real(tag: AlgebraTag, re: f64) -> Self {
        BNum { re, im: 0.0, tag }
    }

    pub fn q(&self) -> f64 {
        self.tag.q
    }

    fn check(&self, other: &BNum) -> Result<()> {
        if self.tag.same_as(other.tag) {
            Ok(())
        } else {
            Err(Error::TagMismatch(self.tag.q, other.tag.q))
        }
    }

    pub fn try_add(self, other: BNum) -> Result<BNum> {
        self.check(&other)?;
        Ok(BNum::new(self.tag, self.re + other.re, self.im + other.im))
    }

    pub fn try_sub(self, other: BNum) -> Result<BNum> {
        self.check(&other)?;
        Ok(BNum::new(self.tag, self.re - other.re, self.im - other.im))
    }

    pub fn try_mul(self, other: BNum) -> Result<BNum> {
        self.check(&other)?;
        let q = self.tag.q;
        Ok(BNum::new(
            self.tag,
            self.re * other.re + q * self.im * other.im,
            self.re * other.im + self.im * other.re,
        ))
    }

    pub fn try_div(self, other: BNum) -> Result<BNum> {
        self.check(&other)?;
        self.try_mul(other.inv()?)
    }

    pub fn conj(self) -> BNum {
        BNum::new(self.tag, self.re, -self.im)
    }

    /// z * conj(z) = re^2 - q im^2.
    pub fn sqnorm(self) -> f64 {
        self.re * self.re - self.tag.q * self.im * self.im
    }

    pub fn is_invertible(self) -> bool {
        let q = self.tag.q;
        let scale = self.re * self.re + q * q * self.im * self.im + 1.0;
        self.sqnorm().abs() >= 1e-13 * scale
    }

    pub fn inv(self) -> Result<BNum> {
        if !self.is_invertible() {
            return Err(Error::NonInvertible { re: self.re, im: self.im, q: self.tag.q });
        }
        let n = self.sqnorm();
        Ok(BNum::new(self.tag, self.re / n, -self.im / n))
    }

    pub fn scale(self, s: f64) -> BNum {
        BNum::new(self.tag, self.re * s, self.im * s)
    }

    pub fn powi(self, n: i32) -> Result<BNum> {
        let base = if n < 0 { self.inv()? } else { self };
        let mut acc = self.tag.one();
        let mut p = base;
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * p;
            }
            p = p * p;
            k >>= 1;
        }
        Ok(acc)
    }

    /// Max of |re| and |im|, the norm used for residuals.
    pub fn max_abs(self) -> f64 {
        self.re.abs().max(self.im.abs())
    }

    pub fn with_tag(self, tag: AlgebraTag) -> BNum {
        BNum::new(tag, self.re, self.im)
    }

    pub fn split(self) -> Result<SplitPair> {
        let q = self.tag.q;
        if q <= 0.0 {
            return Err(Error::UnsupportedRegime(q));
        }
        let r = q.sqrt();
        Ok(SplitPair { lambda: self.re + self.im * r, mu: self.re - self.im * r })
    }
}

impl fmt::Display for BNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:+}k", self.re, self.im)
    }
}

// The operator impls panic on mixed tags; fallible code paths use the try_ forms.
impl Add for BNum {
    type Output = BNum;
    fn add(self, rhs: BNum) -> BNum {
        self.try_add(rhs).expect("algebra tag mismatch")
    }
}

impl Sub for BNum {
    type Output = BNum;
    fn sub(self, rhs: BNum) -> BNum {
        self.try_sub(rhs).expect("algebra tag mismatch")
    }
}

impl Mul for BNum {
    type Output = BNum;
    fn mul(self, rhs: BNum) -> BNum {
        self.try_mul(rhs).expect("algebra tag mismatch")
    }
}

impl Div for BNum {
    type Output = BNum;
    fn div(self, rhs: BNum) -> BNum {
        self.try_div(rhs).expect("division by a zero divisor")
    }
}

impl Neg for BNum {
    type Output = BNum;
    fn neg(self) -> BNum {
        BNum::new(self.tag, -self.re, -self.im)
    }
}

impl Add<f64> for BNum {
    type Output = BNum;
    fn add(self, rhs: f64) -> BNum {
        BNum::new(self.tag, self.re + rhs, self.im)
    }
}

impl Sub<BNum> for f64 {
    type Output = BNum;
    fn sub(self, rhs: BNum) -> BNum {
        BNum::new(rhs.tag, self - rhs.re, -rhs.im)
    }
}

impl Mul<f64> for BNum {
    type Output = BNum;
    fn mul(self, rhs: f64) -> BNum {
        self.scale(rhs)
    }
}

/// exp(k phi) in closed form.
pub fn exp_imaginary(tag: AlgebraTag, phi: f64) -> BNum {
    let q = tag.q;
    if q < 0.0 {
        let r = (-q).sqrt();
        BNum::new(tag, (r * phi).cos(), (r * phi).sin() / r)
    } else if q > 0.0 {
        let r = q.sqrt();
        BNum::new(tag, (r * phi).cosh(), (r * phi).sinh() / r)
    } else {
        BNum::new(tag, 1.0, phi)
    }
}

/// exp(a + k phi) = e^a exp(k phi).
pub fn exp(z: BNum) -> BNum {
    exp_imaginary(z.tag, z.im).scale(z.re.exp())
}

/// Idempotent coordinates of a split-complex number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitPair {
    pub lambda: f64,
    pub mu: f64,
}

impl SplitPair {
    pub fn new(lambda: f64, mu: f64) -> Self {
        SplitPair { lambda, mu }
    }
}

pub fn split(z: BNum) -> Result<SplitPair> {
    z.split()
}

pub fn unsplit(p: SplitPair, tag: AlgebraTag) -> Result<BNum> {
    if tag.q <= 0.0 {
        return Err(Error::UnsupportedRegime(tag.q));
    }
    let r = tag.q.sqrt();
    Ok(BNum::new(tag, 0.5 * (p.lambda + p.mu), 0.5 * (p.lambda - p.mu) / r))
}

/// Element c1 + ci i + ct tau + cit i tau of the algebra <1, i, tau>,
/// i^2 = -1, tau^2 = 1, i tau = -tau i.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CliffordNum {
    pub c1: f64,
    pub ci: f64,
    pub ct: f64,
    pub cit: f64,
}

impl CliffordNum {
    pub fn new(c1: f64, ci: f64, ct: f64, cit: f64) -> Self {
        CliffordNum { c1, ci, ct, cit }
    }

    pub fn distance(self, other: CliffordNum) -> f64 {
        let d = [
            self.c1 - other.c1,
            self.ci - other.ci,
            self.ct - other.ct,
            self.cit - other.cit,
        ];
        d.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn coords(self) -> [f64; 4] {
        [self.c1, self.ci, self.ct, self.cit]
    }
}

impl Mul for CliffordNum {
    type Output = CliffordNum;
    fn mul(self, o: CliffordNum) -> CliffordNum {
        let (a1, ai, at, ait) = (self.c1, self.ci, self.ct, self.cit);
        let (b1, bi, bt, bit) = (o.c1, o.ci, o.ct, o.cit);
        // i*i = -1, t*t = 1, (it)(it) = 1, i*t = it, t*i = -it,
        // i*(it) = -t, (it)*i = t, t*(it) = -i, (it)*t = i.
        CliffordNum {
            c1: a1 * b1 - ai * bi + at * bt + ait * bit,
            ci: a1 * bi + ai * b1 - at * bit + ait * bt,
            ct: a1 * bt + at * b1 - ai * bit + ait * bi,
            cit: a1 * bit + ait * b1 + ai * bt - at * bi,
        }
    }
}

impl Add for CliffordNum {
    type Output = CliffordNum;
    fn add(self, o: CliffordNum) -> CliffordNum {
        CliffordNum::new(self.c1 + o.c1, self.ci + o.ci, self.ct + o.ct, self.cit + o.cit)
    }
}

/// Image of re + im k_t under k_t = ((1 + t|t|) i + (1 - t|t|) tau) / 2.
pub fn clifford_embed(t: f64, z: BNum) -> Result<CliffordNum> {
    let expected = AlgebraTag::transition(t);
    if !z.tag.same_as(expected) {
        return Err(Error::TagMismatch(z.tag.q, expected.q));
    }
    let s = t * t.abs();
    Ok(CliffordNum::new(z.re, z.im * (1.0 + s) / 2.0, z.im * (1.0 - s) / 2.0, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_zero_divisor_product() {
        let t = AlgebraTag::SPLIT;
        let p = BNum::new(t, 1.0, 1.0) * BNum::new(t, 1.0, -1.0);
        assert_eq!((p.re, p.im), (0.0, 0.0));
    }

    #[test]
    fn dual_product() {
        let t = AlgebraTag::DUAL;
        let p = BNum::new(t, 2.0, 3.0) * BNum::new(t, 5.0, 7.0);
        assert_eq!((p.re, p.im), (10.0, 29.0));
    }

    #[test]
    fn complex_unit_squares_to_minus_one() {
        let i = AlgebraTag::COMPLEX.unit();
        let p = i * i;
        assert_eq!((p.re, p.im), (-1.0, 0.0));
    }

    #[test]
    fn sqnorm_values() {
        assert_eq!(BNum::new(AlgebraTag::SPLIT, 3.0, 2.0).sqnorm(), 5.0);
        assert_eq!(BNum::new(AlgebraTag::COMPLEX, 3.0, 4.0).sqnorm(), 25.0);
        assert_eq!(BNum::new(AlgebraTag::SPLIT, 1.0, 1.0).sqnorm(), 0.0);
    }

    #[test]
    fn inverses() {
        let tau = AlgebraTag::SPLIT.unit();
        assert_eq!(tau.inv().unwrap(), tau);
        assert!(matches!(
            BNum::new(AlgebraTag::SPLIT, 1.0, 1.0).inv(),
            Err(Error::NonInvertible { .. })
        ));
        let w = BNum::new(AlgebraTag::DUAL, 2.0, 1.0).inv().unwrap();
        assert_eq!((w.re, w.im), (0.5, -0.25));
    }

    #[test]
    fn mixed_tags_rejected() {
        let a = AlgebraTag::SPLIT.one();
        let b = AlgebraTag::DUAL.one();
        assert!(matches!(a.try_mul(b), Err(Error::TagMismatch(..))));
        assert!(matches!(a.try_add(b), Err(Error::TagMismatch(..))));
    }

    #[test]
    fn exp_imaginary_values() {
        let e = exp_imaginary(AlgebraTag::SPLIT, 2f64.ln());
        assert!((e.re - 1.25).abs() < 1e-15 && (e.im - 0.75).abs() < 1e-15);
        let e = exp_imaginary(AlgebraTag::DUAL, -1.0);
        assert_eq!((e.re, e.im), (1.0, -1.0));
        let e = exp_imaginary(AlgebraTag::COMPLEX, std::f64::consts::PI);
        assert!((e.re + 1.0).abs() < 1e-15 && e.im.abs() < 1e-15);
    }

    #[test]
    fn split_values() {
        let t = AlgebraTag::SPLIT;
        let p = BNum::new(t, 0.5, 0.5).split().unwrap();
        assert_eq!((p.lambda, p.mu), (1.0, 0.0));
        let p = BNum::real(t, 3.5).split().unwrap();
        assert_eq!((p.lambda, p.mu), (3.5, 3.5));
        assert!(matches!(BNum::real(AlgebraTag::DUAL, 1.0).split(), Err(Error::UnsupportedRegime(_))));
        assert!(unsplit(p, AlgebraTag::COMPLEX).is_err());
    }

    #[test]
    fn clifford_embedding_values() {
        let c = clifford_embed(1.0, AlgebraTag::transition(1.0).unit()).unwrap();
        assert_eq!(c.coords(), [0.0, 1.0, 0.0, 0.0]);
        let c = clifford_embed(-1.0, AlgebraTag::transition(-1.0).unit()).unwrap();
        assert_eq!(c.coords(), [0.0, 0.0, 1.0, 0.0]);
        let c = clifford_embed(0.0, AlgebraTag::DUAL.unit()).unwrap();
        assert_eq!(c.coords(), [0.0, 0.5, 0.5, 0.0]);
        assert!(clifford_embed(0.5, AlgebraTag::SPLIT.unit()).is_err());
    }

    #[test]
    fn json_shape() {
        let z = BNum::new(AlgebraTag::SPLIT, 1.5, -2.0);
        let s = serde_json::to_string(&z).unwrap();
        assert_eq!(s, r#"{"re":1.5,"im":-2.0,"q":1.0}"#);
        let back: BNum = serde_json::from_str(&s).unwrap();
        assert_eq!(back, z);
    }
}
