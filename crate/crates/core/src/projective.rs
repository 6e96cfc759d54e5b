//! Hermitian matrices over B, the projective line P^1 B, Moebius maps,
//! cross-ratios and the validity tests for ideal tetrahedra.

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraTag, BNum, Regime};
use crate::error::{Error, Result};

/// [[x1 + x2, x3 - x4 k], [x3 + x4 k, x1 - x2]].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermMatrix {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub x4: f64,
    pub tag: AlgebraTag,
}

impl HermMatrix {
    pub fn new(tag: AlgebraTag, x1: f64, x2: f64, x3: f64, x4: f64) -> Self {
        HermMatrix { x1, x2, x3, x4, tag }
    }

    /// From the entries [[a, w], [conj w, d]] with a, d real.
    pub fn from_entries(a: f64, w: BNum, d: f64) -> Self {
        HermMatrix::new(w.tag, 0.5 * (a + d), 0.5 * (a - d), w.re, -w.im)
    }

    /// Returns (a, w, d) with the matrix equal to [[a, w], [conj w, d]].
    pub fn entries(&self) -> (f64, BNum, f64) {
        (
            self.x1 + self.x2,
            BNum::new(self.tag, self.x3, -self.x4),
            self.x1 - self.x2,
        )
    }

    pub fn det(&self) -> f64 {
        self.x1 * self.x1 - self.x2 * self.x2 - self.x3 * self.x3 + self.tag.q * self.x4 * self.x4
    }

    fn max_abs(&self) -> f64 {
        self.x1.abs().max(self.x2.abs()).max(self.x3.abs()).max(self.x4.abs())
    }
}

/// The real inner product whose quadratic form is -det.
pub fn herm_inner(x: &HermMatrix, y: &HermMatrix) -> Result<f64> {
    if !x.tag.same_as(y.tag) {
        return Err(Error::TagMismatch(x.tag.q, y.tag.q));
    }
    Ok(-x.x1 * y.x1 + x.x2 * y.x2 + x.x3 * y.x3 - x.tag.q * x.x4 * y.x4)
}

/// Homogeneous coordinates [u : v].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PB1Point {
    pub u: BNum,
    pub v: BNum,
}

impl PB1Point {
    pub fn new(u: BNum, v: BNum) -> Result<Self> {
        if !u.tag.same_as(v.tag) {
            return Err(Error::TagMismatch(u.tag.q, v.tag.q));
        }
        let p = PB1Point { u, v };
        if p.is_degenerate() {
            return Err(Error::DegeneratePoint);
        }
        Ok(p)
    }

    /// The affine point [z : 1].
    pub fn affine(z: BNum) -> Self {
        PB1Point { u: z, v: z.tag.one() }
    }

    pub fn infinity(tag: AlgebraTag) -> Self {
        PB1Point { u: tag.one(), v: tag.zero() }
    }

    pub fn tag(&self) -> AlgebraTag {
        self.u.tag
    }

    /// True when v v* vanishes.
    pub fn is_degenerate(&self) -> bool {
        let scale = self.u.max_abs().max(self.v.max_abs()).max(f64::MIN_POSITIVE);
        let tol = 1e-13 * scale * scale;
        let off = self.u * self.v.conj();
        self.u.sqnorm().abs() <= tol && self.v.sqnorm().abs() <= tol && off.max_abs() <= tol
    }

    /// Affine coordinate u v^{-1}, if v is invertible.
    pub fn to_affine(&self) -> Result<BNum> {
        if !self.v.is_invertible() {
            return Err(Error::OutsideChart);
        }
        Ok(self.u * self.v.inv()?)
    }
}

/// The Hermitian matrix v v* of a point.
pub fn point_to_herm(p: &PB1Point) -> Result<HermMatrix> {
    if p.is_degenerate() {
        return Err(Error::DegeneratePoint);
    }
    Ok(HermMatrix::from_entries(p.u.sqnorm(), p.u * p.v.conj(), p.v.sqnorm()))
}

/// True iff four points span an ideal tetrahedron: some choice of signs makes
/// every pairwise inner product negative.
pub fn simplex_valid_herm(points: &[PB1Point; 4]) -> bool {
    let mut zs = Vec::with_capacity(4);
    for p in points {
        match point_to_herm(p) {
            Ok(z) => zs.push(z),
            Err(_) => return false,
        }
    }
    let mut gram = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            gram[i][j] = match herm_inner(&zs[i], &zs[j]) {
                Ok(g) => g,
                Err(_) => return false,
            };
        }
    }
    (0..8u32).any(|mask| {
        let eps = |k: usize| if k > 0 && mask & (1 << (k - 1)) != 0 { -1.0 } else { 1.0 };
        (0..4).all(|i| {
            (i + 1..4).all(|j| {
                let tol = 1e-13 * zs[i].max_abs() * zs[j].max_abs();
                eps(i) * eps(j) * gram[i][j] < -tol
            })
        })
    })
}

/// u_k v_l - u_l v_k.
fn bracket(a: &PB1Point, b: &PB1Point) -> BNum {
    a.u * b.v - b.u * a.v
}

/// [[a, b], [c, d]] acting by [u : v] -> [a u + b v : c u + d v].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moebius {
    pub a: BNum,
    pub b: BNum,
    pub c: BNum,
    pub d: BNum,
}

impl Moebius {
    pub fn new(a: BNum, b: BNum, c: BNum, d: BNum) -> Result<Self> {
        let m = Moebius { a, b, c, d };
        for x in [b, c, d] {
            if !a.tag.same_as(x.tag) {
                return Err(Error::TagMismatch(a.tag.q, x.tag.q));
            }
        }
        if !m.det().is_invertible() {
            return Err(Error::NonInvertible { re: m.det().re, im: m.det().im, q: a.tag.q });
        }
        Ok(m)
    }

    pub fn det(&self) -> BNum {
        self.a * self.d - self.b * self.c
    }

    pub fn apply(&self, p: &PB1Point) -> PB1Point {
        PB1Point { u: self.a * p.u + self.b * p.v, v: self.c * p.u + self.d * p.v }
    }

    pub fn compose(&self, o: &Moebius) -> Moebius {
        Moebius {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }
}

/// The pairwise test for an ideal triangle, written with brackets:
/// <Z_i, Z_j> = -|[z_i, z_j]|^2 / 2, so the sign pattern must be balanced.
fn ideal_triangle(z1: &PB1Point, z2: &PB1Point, z3: &PB1Point) -> bool {
    let ds = [bracket(z1, z2), bracket(z1, z3), bracket(z2, z3)];
    if ds.iter().any(|d| !d.is_invertible()) {
        return false;
    }
    ds.iter().map(|d| d.sqnorm().signum()).product::<f64>() > 0.0
}

/// The Moebius map sending z1, z2, z3 to infinity, 0, 1.
pub fn standard_position(z1: &PB1Point, z2: &PB1Point, z3: &PB1Point) -> Result<Moebius> {
    if z1.is_degenerate() || z2.is_degenerate() || z3.is_degenerate() {
        return Err(Error::DegeneratePoint);
    }
    if !ideal_triangle(z1, z2, z3) {
        return Err(Error::NoIdealTriangle);
    }
    let d31 = bracket(z3, z1);
    let d32 = bracket(z3, z2);
    Moebius::new(d31 * z2.v, -(d31 * z2.u), d32 * z1.v, -(d32 * z1.u))
}

/// (z1, z2; z3, z4): the image of z4 under the map taking z1, z2, z3 to
/// infinity, 0, 1. Points at infinity drop out of the bracket formula.
pub fn cross_ratio(z1: &PB1Point, z2: &PB1Point, z3: &PB1Point, z4: &PB1Point) -> Result<BNum> {
    if z4.is_degenerate() {
        return Err(Error::DegeneratePoint);
    }
    standard_position(z1, z2, z3)?;
    let num = bracket(z4, z2) * bracket(z3, z1);
    let den = bracket(z4, z1) * bracket(z3, z2);
    if den.is_invertible() {
        return Ok(num * den.inv()?);
    }
    if (PB1Point { u: num, v: den }).is_degenerate() {
        Err(Error::UndefinedCrossRatio)
    } else {
        Err(Error::OutsideChart)
    }
}

/// The shape parameters (z, 1/(1 - z), (z - 1)/z) of the three edge pairs.
pub fn edge_shapes(z: BNum) -> Result<(BNum, BNum, BNum)> {
    let one_minus = 1.0 - z;
    let inv_one_minus = one_minus.inv().map_err(|_| Error::DegenerateShape)?;
    let inv_z = z.inv().map_err(|_| Error::DegenerateShape)?;
    Ok((z, inv_one_minus, -(one_minus * inv_z)))
}

pub fn shape_valid(tag: AlgebraTag, z: BNum) -> bool {
    if !tag.same_as(z.tag) {
        return false;
    }
    match tag.regime() {
        Regime::Dual => z.re.abs() > 1e-13 && (1.0 - z.re).abs() > 1e-13,
        Regime::Complex => z.is_invertible() && (1.0 - z).is_invertible(),
        Regime::Split => {
            let w = 1.0 - z;
            let thr = |x: BNum| 1e-13 * (x.re * x.re + tag.q * tag.q * x.im * x.im + 1.0);
            z.sqnorm() > thr(z) && w.sqnorm() > thr(w)
        }
    }
}

pub fn is_positively_oriented(z: BNum) -> bool {
    z.im > 0.0
}

/// Discrete dihedral angle of a shape for q >= 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AngleFlag {
    Zero,
    Pi,
}

pub fn angle_flag(tag: AlgebraTag, z: BNum) -> Result<AngleFlag> {
    if tag.q < 0.0 {
        return Err(Error::UnsupportedRegime(tag.q));
    }
    Ok(if z.re < 0.0 { AngleFlag::Pi } else { AngleFlag::Zero })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> BNum {
        BNum::new(AlgebraTag::COMPLEX, re, im)
    }

    #[test]
    fn inner_product_basics() {
        let t = AlgebraTag::COMPLEX;
        let id = HermMatrix::new(t, 1.0, 0.0, 0.0, 0.0);
        assert_eq!(herm_inner(&id, &id).unwrap(), -1.0);
        let e = HermMatrix::from_entries(1.0, t.zero(), 0.0);
        assert_eq!(herm_inner(&e, &e).unwrap(), 0.0);
        let other = HermMatrix::new(AlgebraTag::SPLIT, 1.0, 0.0, 0.0, 0.0);
        assert!(herm_inner(&id, &other).is_err());
    }

    #[test]
    fn point_matrices() {
        let t = AlgebraTag::COMPLEX;
        let h = point_to_herm(&PB1Point::infinity(t)).unwrap();
        assert_eq!(h.entries(), (1.0, t.zero(), 0.0));
        let z = c(2.0, 3.0);
        let (a, w, d) = point_to_herm(&PB1Point::affine(z)).unwrap().entries();
        assert_eq!((a, w, d), (13.0, z, 1.0));
        let s = AlgebraTag::SPLIT;
        let p = PB1Point::new(BNum::new(s, 1.0, 1.0), BNum::new(s, 1.0, -1.0)).unwrap();
        let h = point_to_herm(&p).unwrap();
        assert!(h.det().abs() < 1e-15);
        assert!(h.max_abs() > 0.0);
        assert!(PB1Point::new(BNum::new(s, 1.0, 1.0), s.zero()).is_err());
    }

    #[test]
    fn regular_tetrahedron_is_valid() {
        let t = AlgebraTag::COMPLEX;
        let pts = [
            PB1Point::infinity(t),
            PB1Point::affine(t.zero()),
            PB1Point::affine(t.one()),
            PB1Point::affine(t.unit()),
        ];
        assert!(simplex_valid_herm(&pts));
        let s = AlgebraTag::SPLIT;
        let pts = [
            PB1Point::infinity(s),
            PB1Point::affine(s.zero()),
            PB1Point::affine(s.one()),
            PB1Point::affine(BNum::new(s, 0.5, 0.5)),
        ];
        assert!(!simplex_valid_herm(&pts));
    }

    #[test]
    fn standard_positions() {
        let t = AlgebraTag::COMPLEX;
        let (inf, zero, one) =
            (PB1Point::infinity(t), PB1Point::affine(t.zero()), PB1Point::affine(t.one()));
        let m = standard_position(&inf, &zero, &one).unwrap();
        let k = m.a;
        assert!((m.d - k).max_abs() < 1e-15 && m.b.max_abs() == 0.0 && m.c.max_abs() == 0.0);
        let m = standard_position(&zero, &inf, &one).unwrap();
        assert!(m.apply(&zero).v.max_abs() == 0.0);
        assert!(m.apply(&inf).u.max_abs() == 0.0);
        let img = m.apply(&one).to_affine().unwrap();
        assert!((img - t.one()).max_abs() < 1e-15);
        assert!(m.a.max_abs() == 0.0 && m.d.max_abs() == 0.0);

        let s = AlgebraTag::SPLIT;
        let r = standard_position(
            &PB1Point::affine(s.zero()),
            &PB1Point::affine(s.one()),
            &PB1Point::affine(BNum::new(s, 1.0, 1.0)),
        );
        assert_eq!(r.unwrap_err(), Error::NoIdealTriangle);
    }

    #[test]
    fn cross_ratio_special_positions() {
        let t = AlgebraTag::COMPLEX;
        let z = c(0.3, 0.7);
        let (inf, zero, one, pz) = (
            PB1Point::infinity(t),
            PB1Point::affine(t.zero()),
            PB1Point::affine(t.one()),
            PB1Point::affine(z),
        );
        assert!((cross_ratio(&inf, &zero, &one, &pz).unwrap() - z).max_abs() < 1e-15);
        let w = cross_ratio(&one, &inf, &zero, &pz).unwrap();
        assert!((w - (1.0 - z).inv().unwrap()).max_abs() < 1e-15);
        let w = cross_ratio(&zero, &inf, &pz, &one).unwrap();
        assert!((w - z).max_abs() < 1e-15);
    }

    #[test]
    fn cross_ratio_chart_errors() {
        let s = AlgebraTag::SPLIT;
        let pts = |x: BNum| {
            (PB1Point::infinity(s), PB1Point::affine(s.zero()), PB1Point::affine(s.one()), x)
        };
        let (a, b, c3, _) = pts(s.zero());
        assert_eq!(cross_ratio(&a, &b, &c3, &a).unwrap_err(), Error::OutsideChart);
        let light = PB1Point::new(BNum::new(s, 1.0, 1.0), BNum::new(s, 1.0, -1.0)).unwrap();
        assert_eq!(cross_ratio(&a, &b, &c3, &light).unwrap_err(), Error::OutsideChart);
    }

    #[test]
    fn edge_shape_values() {
        let t = AlgebraTag::SPLIT;
        let (z, y, x) = edge_shapes(BNum::real(t, 2.0)).unwrap();
        assert_eq!((z.re, y.re, x.re), (2.0, -1.0, 0.5));
        let w = c(0.5, 3f64.sqrt() / 2.0);
        let (z, y, x) = edge_shapes(w).unwrap();
        assert!((z - y).max_abs() < 1e-15 && (z - x).max_abs() < 1e-15);
        assert_eq!(edge_shapes(t.one()).unwrap_err(), Error::DegenerateShape);
    }

    #[test]
    fn shape_validity_cases() {
        let s = AlgebraTag::SPLIT;
        assert!(!shape_valid(s, BNum::new(s, 2.0, 1.0)));
        let d = AlgebraTag::DUAL;
        let z = BNum::new(d, (1.0 - 5f64.sqrt()) / 2.0, 1.0 / (2.0 * 5f64.sqrt()));
        assert!(shape_valid(d, z) && is_positively_oriented(z));
        assert!(!shape_valid(d, BNum::new(d, 1.0, 3.0)));
        let t = AlgebraTag::COMPLEX;
        assert!(!shape_valid(t, t.one()) && shape_valid(t, c(1.0, 0.1)));
    }

    #[test]
    fn angle_flags() {
        let s = AlgebraTag::SPLIT;
        assert_eq!(angle_flag(s, BNum::real(s, -1.0)).unwrap(), AngleFlag::Pi);
        assert_eq!(angle_flag(s, BNum::real(s, 0.5)).unwrap(), AngleFlag::Zero);
        let z = crate::algebra::unsplit(crate::algebra::SplitPair::new(-2.0, -0.5), s).unwrap();
        assert_eq!(angle_flag(s, z).unwrap(), AngleFlag::Pi);
        assert!(angle_flag(AlgebraTag::COMPLEX, c(-1.0, 0.1)).is_err());
    }
}
