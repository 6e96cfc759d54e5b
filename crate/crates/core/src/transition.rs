//! Solutions of the gluing equations over a fixed algebra B_q, regeneration of
//! collapsed real solutions, paths through B_t with k_t^2 = -t|t|, tachyon
//! structures and completion types.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::algebra::{clifford_embed, exp_imaginary, unsplit, AlgebraTag, BNum, CliffordNum, Regime, SplitPair};
use crate::error::{Error, Result, StructureCheck};
use crate::projective::{edge_shapes, is_positively_oriented, shape_valid};
use crate::real_variety::{
    continue_to, dlog_monomial, follow_path, Branch, PathOptions, RealSolution, RealSolutionFile,
    TangentVector,
};
use crate::triangulation::{evaluate_monomial, GluingSystem, ShapeMonomial, Slot};
use crate::word::LRWord;

#[derive(Debug, Clone, PartialEq)]
pub struct BSolution {
    pub tag: AlgebraTag,
    pub z: Vec<BNum>,
    pub residual: f64,
    pub oriented: bool,
}

impl BSolution {
    pub fn new(sys: &GluingSystem, z: Vec<BNum>) -> Result<Self> {
        let tag = z.first().map(|x| x.tag).ok_or_else(|| Error::InvalidInput("no shapes".into()))?;
        let residual = equation_residual(sys, &z)?;
        let oriented = z.iter().all(|&w| is_positively_oriented(w));
        Ok(BSolution { tag, z, residual, oriented })
    }

    pub fn to_file(&self) -> BSolutionFile {
        BSolutionFile {
            q: self.tag.q,
            z: self.z.clone(),
            residual: self.residual,
            word: None,
            branch: None,
            oriented: Some(self.oriented),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BSolutionFile {
    pub q: f64,
    pub z: Vec<BNum>,
    pub residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<Branch>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oriented: Option<bool>,
}

impl BSolutionFile {
    pub fn shapes(&self) -> Result<Vec<BNum>> {
        let tag = AlgebraTag::new(self.q);
        self.z
            .iter()
            .map(|w| {
                if w.tag.same_as(tag) {
                    Ok(w.with_tag(tag))
                } else {
                    Err(Error::TagMismatch(w.tag.q, tag.q))
                }
            })
            .collect()
    }
}

/// max_i max(|re(g_i) - 1|, |im(g_i)|).
pub fn equation_residual(sys: &GluingSystem, z: &[BNum]) -> Result<f64> {
    let mut r: f64 = 0.0;
    for g in &sys.equations {
        let v = evaluate_monomial(g, z)?;
        r = r.max((v + -1.0).max_abs());
    }
    Ok(r)
}

/// A boundary monomial pinned to a target value.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub monomial: ShapeMonomial,
    pub target: BNum,
}

impl Constraint {
    pub fn residual(&self, z: &[BNum]) -> Result<f64> {
        let v = evaluate_monomial(&self.monomial, z)?;
        Ok((v - self.target).max_abs() / self.target.max_abs().max(1.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub require_oriented: bool,
    pub check_angles: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { tol: 1e-10, max_iter: 80, require_oriented: true, check_angles: true }
    }
}

/// The equations kept in the square system: all but the last when their
/// product is identically one.
pub fn independent_equations(sys: &GluingSystem) -> Result<Vec<ShapeMonomial>> {
    if sys.equations.len() + 1 == sys.n_tets {
        return Ok(sys.equations.clone());
    }
    if sys.equations.len() == sys.n_tets && sys.product_is_trivial() {
        return Ok(sys.equations[..sys.n_tets - 1].to_vec());
    }
    Err(Error::InvalidInput(format!(
        "{} equations in {} unknowns do not reduce to a square system with one constraint",
        sys.equations.len(),
        sys.n_tets
    )))
}

/// G(z) and dG/dz_j over B for a monomial.
fn value_and_gradient(m: &ShapeMonomial, z: &[BNum]) -> Result<(BNum, Vec<BNum>)> {
    let g = evaluate_monomial(m, z)?;
    let mut grad = vec![z[0].tag.zero(); z.len()];
    for (t, s, e) in m.terms() {
        let d = s.dlog_dz(z[t]).map_err(|_| Error::Evaluation { tet: t + 1, slot: s.as_char() })?;
        grad[t] = grad[t] + d.scale(e as f64);
    }
    Ok((g, grad.into_iter().map(|d| d * g).collect()))
}

fn merit(f: &[BNum], scales: &[f64]) -> f64 {
    f.iter().zip(scales).map(|(x, s)| x.max_abs() / s).fold(0.0, f64::max)
}

/// Newton's method over B with the 2N x 2N real form of the Jacobian.
fn newton_b(eqs: &[ShapeMonomial], c: &Constraint, seed: &[BNum], opts: &SolveOptions) -> Result<Vec<BNum>> {
    let n = seed.len();
    let tag = seed[0].tag;
    let q = tag.q;
    let mut scales = vec![1.0; n];
    scales[n - 1] = c.target.max_abs().max(1.0);
    let eval = |z: &[BNum]| -> Result<(Vec<BNum>, Vec<Vec<BNum>>)> {
        let mut f = Vec::with_capacity(n);
        let mut jac = Vec::with_capacity(n);
        for g in eqs {
            let (v, d) = value_and_gradient(g, z)?;
            f.push(v + -1.0);
            jac.push(d);
        }
        let (v, d) = value_and_gradient(&c.monomial, z)?;
        f.push(v - c.target);
        jac.push(d);
        Ok((f, jac))
    };
    let mut z = seed.to_vec();
    let (mut f, mut jac) = eval(&z)?;
    let mut res = merit(&f, &scales);
    for _ in 0..opts.max_iter {
        if res < 1e-14 {
            break;
        }
        let mut m = DMatrix::zeros(2 * n, 2 * n);
        let mut rhs = DVector::zeros(2 * n);
        for i in 0..n {
            rhs[i] = -f[i].re;
            rhs[n + i] = -f[i].im;
            for j in 0..n {
                let (p, r) = (jac[i][j].re, jac[i][j].im);
                m[(i, j)] = p;
                m[(i, n + j)] = q * r;
                m[(n + i, j)] = r;
                m[(n + i, n + j)] = p;
            }
        }
        let dz = m.lu().solve(&rhs).ok_or(Error::NoConvergence(res))?;
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let trial: Vec<BNum> = (0..n)
                .map(|j| BNum::new(tag, z[j].re + lambda * dz[j], z[j].im + lambda * dz[n + j]))
                .collect();
            if let Ok((ft, jt)) = eval(&trial) {
                let rt = merit(&ft, &scales);
                if rt.is_finite() && rt < res {
                    z = trial;
                    f = ft;
                    jac = jt;
                    res = rt;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            break;
        }
        if dz.amax() * lambda < 1e-15 * (1.0 + z.iter().map(|w| w.max_abs()).fold(0.0, f64::max)) {
            break;
        }
    }
    if res <= opts.tol {
        Ok(z)
    } else {
        Err(Error::NoConvergence(res))
    }
}

/// Real Newton for real shapes with G_i = 1 and H = target.
fn newton_real(eqs: &[ShapeMonomial], h: &ShapeMonomial, target: f64, seed: &[f64], opts: &SolveOptions) -> Result<Vec<f64>> {
    let tag = AlgebraTag::DUAL;
    let c = Constraint { monomial: h.clone(), target: BNum::real(tag, target) };
    let zs: Vec<BNum> = seed.iter().map(|&x| BNum::real(tag, x)).collect();
    // Over the dual numbers with zero imaginary parts the B-Newton step is the
    // real Newton step; the imaginary block stays identically zero.
    let out = newton_b(eqs, &c, &zs, opts)?;
    Ok(out.iter().map(|w| w.re).collect())
}

/// Apply the structure checks of a solution.
pub fn check_structure(sys: &GluingSystem, z: &[BNum], opts: &SolveOptions) -> Result<()> {
    let tag = z[0].tag;
    for (j, &w) in z.iter().enumerate() {
        if !shape_valid(tag, w) {
            return Err(Error::InvalidStructure { check: StructureCheck::ShapeValidity, index: j + 1 });
        }
    }
    if opts.require_oriented {
        if let Some(j) = z.iter().position(|&w| !is_positively_oriented(w)) {
            return Err(Error::InvalidStructure { check: StructureCheck::Orientation, index: j + 1 });
        }
    }
    if opts.check_angles {
        for (i, g) in sys.equations.iter().enumerate() {
            if !edge_angle_ok(g, z)? {
                return Err(Error::InvalidStructure { check: StructureCheck::AngleCondition, index: i + 1 });
            }
        }
    }
    Ok(())
}

fn slot_value(z: BNum, s: Slot) -> Result<BNum> {
    let (zz, y, x) = edge_shapes(z)?;
    Ok(match s {
        Slot::Z => zz,
        Slot::X => x,
        Slot::Y => y,
    })
}

/// Argument of a shape in the complex picture of B_q, q < 0.
fn arg(w: BNum) -> f64 {
    let r = (-w.tag.q).sqrt();
    (w.im * r).atan2(w.re)
}

/// Total angle around an edge: sum of arguments for q < 0, pi per shape with
/// negative real part for q >= 0.
pub fn edge_angle(g: &ShapeMonomial, z: &[BNum]) -> Result<f64> {
    let tag = z[0].tag;
    let mut total = 0.0;
    for (t, s, e) in g.terms() {
        let w = slot_value(z[t], s).map_err(|_| Error::Evaluation { tet: t + 1, slot: s.as_char() })?;
        total += e as f64
            * match tag.regime() {
                Regime::Complex => arg(w),
                _ => {
                    if w.re < 0.0 {
                        PI
                    } else {
                        0.0
                    }
                }
            };
    }
    Ok(total)
}

fn edge_angle_ok(g: &ShapeMonomial, z: &[BNum]) -> Result<bool> {
    Ok((edge_angle(g, z)? - 2.0 * PI).abs() < 1e-6)
}

fn finish(sys: &GluingSystem, c: &Constraint, z: Vec<BNum>, opts: &SolveOptions) -> Result<BSolution> {
    let eq = equation_residual(sys, &z)?;
    let cr = c.residual(&z)?;
    let residual = eq.max(cr);
    if residual > opts.tol {
        return Err(Error::NoConvergence(residual));
    }
    check_structure(sys, &z, opts)?;
    let oriented = z.iter().all(|&w| is_positively_oriented(w));
    Ok(BSolution { tag: z[0].tag, z, residual, oriented })
}

fn retag(z: &[BNum], tag: AlgebraTag, im_scale: f64) -> Vec<BNum> {
    z.iter().map(|w| BNum::new(tag, w.re, w.im * im_scale)).collect()
}

/// Solve the independent gluing equations plus one constraint over B_q, with
/// the route chosen by the sign of q.
pub fn solve_gluing(sys: &GluingSystem, c: &Constraint, seed: &[BNum], opts: &SolveOptions) -> Result<BSolution> {
    let eqs = independent_equations(sys)?;
    check_seed(sys, c, seed)?;
    let tag = seed[0].tag;
    let z = match tag.regime() {
        Regime::Complex => {
            // i <-> k / sqrt|q|.
            let r = (-tag.q).sqrt();
            let cplx = AlgebraTag::COMPLEX;
            let cc = Constraint {
                monomial: c.monomial.clone(),
                target: BNum::new(cplx, c.target.re, c.target.im * r),
            };
            let inner = SolveOptions { tol: opts.tol * 1e-2, ..*opts };
            let w = newton_b(&eqs, &cc, &retag(seed, cplx, r), &inner)?;
            retag(&w, tag, 1.0 / r)
        }
        Regime::Split => {
            let t = c.target.split()?;
            let inner = SolveOptions { tol: opts.tol * 1e-2, ..*opts };
            let pairs: Vec<SplitPair> = seed.iter().map(|w| w.split()).collect::<Result<_>>()?;
            let l0: Vec<f64> = pairs.iter().map(|p| p.lambda).collect();
            let m0: Vec<f64> = pairs.iter().map(|p| p.mu).collect();
            let l = newton_real(&eqs, &c.monomial, t.lambda, &l0, &inner)?;
            let m = newton_real(&eqs, &c.monomial, t.mu, &m0, &inner)?;
            l.iter()
                .zip(&m)
                .map(|(&a, &b)| unsplit(SplitPair::new(a, b), tag))
                .collect::<Result<Vec<_>>>()?
        }
        Regime::Dual => {
            let inner = SolveOptions { tol: opts.tol * 1e-2, ..*opts };
            let re0: Vec<f64> = seed.iter().map(|w| w.re).collect();
            let a = newton_real(&eqs, &c.monomial, c.target.re, &re0, &inner)?;
            let b = dual_parts(&eqs, &c.monomial, &a, c.target)?;
            a.iter().zip(&b).map(|(&x, &y)| BNum::new(tag, x, y)).collect()
        }
    };
    finish(sys, c, z, opts)
}

/// Sigma-parts b of a dual-number solution a + b sigma: the differentials of
/// the equations vanish on b and the constraint's differential matches the
/// target.
fn dual_parts(eqs: &[ShapeMonomial], h: &ShapeMonomial, a: &[f64], target: BNum) -> Result<Vec<f64>> {
    let n = a.len();
    let tag = AlgebraTag::DUAL;
    let z: Vec<BNum> = a.iter().map(|&x| BNum::real(tag, x)).collect();
    let mut m = DMatrix::zeros(n, n);
    let mut rhs = DVector::zeros(n);
    for (i, g) in eqs.iter().chain(std::iter::once(h)).enumerate() {
        let (v, d) = value_and_gradient(g, &z)?;
        for j in 0..n {
            m[(i, j)] = d[j].re;
        }
        rhs[i] = if i < eqs.len() { -v.im } else { target.im - v.im };
    }
    let b = m.lu().solve(&rhs).ok_or(Error::Rank { smallest: 0.0, second: 0.0 })?;
    Ok(b.iter().copied().collect())
}

/// The same system solved by Newton's method directly in B_q.
pub fn solve_gluing_direct(sys: &GluingSystem, c: &Constraint, seed: &[BNum], opts: &SolveOptions) -> Result<BSolution> {
    let eqs = independent_equations(sys)?;
    check_seed(sys, c, seed)?;
    let inner = SolveOptions { tol: opts.tol * 1e-2, ..*opts };
    let z = newton_b(&eqs, c, seed, &inner)?;
    finish(sys, c, z, opts)
}

fn check_seed(sys: &GluingSystem, c: &Constraint, seed: &[BNum]) -> Result<()> {
    if seed.len() != sys.n_tets {
        return Err(Error::InvalidInput(format!("seed has {} shapes, need {}", seed.len(), sys.n_tets)));
    }
    let tag = seed[0].tag;
    if let Some(w) = seed.iter().chain(std::iter::once(&c.target)).find(|w| !w.tag.same_as(tag)) {
        return Err(Error::TagMismatch(w.tag.q, tag.q));
    }
    for (j, &w) in seed.iter().enumerate() {
        if !shape_valid(tag, w) {
            return Err(Error::InvalidStructure { check: StructureCheck::ShapeValidity, index: j + 1 });
        }
    }
    Ok(())
}

/// Solve along a sequence of constraint targets, each solve seeded by the
/// previous solution.
pub fn solve_along(
    sys: &GluingSystem,
    monomial: &ShapeMonomial,
    targets: &[BNum],
    seed: &[BNum],
    opts: &SolveOptions,
) -> Result<BSolution> {
    let mut z = seed.to_vec();
    let mut last = None;
    for &target in targets {
        let c = Constraint { monomial: monomial.clone(), target };
        let s = solve_gluing(sys, &c, &retag(&z, target.tag, 1.0), opts)?;
        z = s.z.clone();
        last = Some(s);
    }
    last.ok_or_else(|| Error::InvalidInput("no targets".into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    H3,
    Ads,
    Hp,
}

impl std::str::FromStr for Geometry {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "h3" | "hyperbolic" => Ok(Geometry::H3),
            "ads" => Ok(Geometry::Ads),
            "hp" | "half-pipe" => Ok(Geometry::Hp),
            _ => Err(Error::InvalidInput(format!("geometry must be h3, ads or hp, got {s:?}"))),
        }
    }
}

/// A collapsed real solution of a system together with the data that
/// parameterizes its deformations: the boundary monomial and a kernel tangent.
#[derive(Debug, Clone, PartialEq)]
pub struct RealPoint {
    pub system: GluingSystem,
    pub boundary: ShapeMonomial,
    pub z: Vec<f64>,
    pub v: Vec<f64>,
}

impl RealPoint {
    pub fn from_solution(s: &RealSolution, v: &TangentVector) -> Self {
        let t = crate::triangulation::build_triangulation(&s.word);
        RealPoint { system: t.system(), boundary: s.puncture_monomial(), z: s.z.clone(), v: v.v.clone() }
    }

    fn log_h(&self) -> (f64, f64) {
        let h = self.boundary.eval_real(&self.z);
        (h.abs().ln(), h.signum())
    }

    /// d log|H| along v.
    pub fn log_h_slope(&self) -> f64 {
        dlog_monomial(&self.boundary, &self.z, &self.v)
    }

    /// Value of the boundary monomial at parameter t along the deformation
    /// with imaginary unit k of the given tag: H0 exp(k t L'), L' = d log H(v).
    pub fn target(&self, tag: AlgebraTag, t: f64) -> BNum {
        let (l0, sign) = self.log_h();
        exp_imaginary(tag, t * self.log_h_slope()).scale(sign * l0.exp())
    }
}

/// Regenerate a hyperbolic, AdS or half-pipe structure from a real point and
/// a positive tangent at parameter t > 0.
pub fn regenerate_point(p: &RealPoint, geometry: Geometry, t: f64, opts: &SolveOptions) -> Result<BSolution> {
    if !(t > 0.0) {
        return Err(Error::InvalidInput(format!("regeneration parameter must be positive, got {t}")));
    }
    let n = p.z.len();
    let eqs = independent_equations(&p.system)?;
    let sol = match geometry {
        Geometry::Hp => {
            let tag = AlgebraTag::DUAL;
            let z: Vec<BNum> = (0..n).map(|j| BNum::new(tag, p.z[j], t * p.v[j])).collect();
            let s = BSolution::new(&p.system, z)?;
            check_structure(&p.system, &s.z, opts)?;
            s
        }
        Geometry::Ads => {
            let (l0, _) = p.log_h();
            let slope = p.log_h_slope();
            let popts = PathOptions::default();
            let (a_plus, _) = continue_to(&eqs, &p.boundary, &p.z, l0 + t * slope, &popts)?;
            let (a_minus, _) = continue_to(&eqs, &p.boundary, &p.z, l0 - t * slope, &popts)?;
            let tag = AlgebraTag::SPLIT;
            let z = a_plus
                .iter()
                .zip(&a_minus)
                .map(|(&l, &m)| unsplit(SplitPair::new(l, m), tag))
                .collect::<Result<Vec<_>>>()?;
            let s = BSolution::new(&p.system, z)?;
            check_structure(&p.system, &s.z, opts)?;
            s
        }
        Geometry::H3 => {
            let tag = AlgebraTag::COMPLEX;
            let steps = (t / 0.05).ceil().max(1.0) as usize;
            let h = t / steps as f64;
            let mut prev: Vec<BNum> = p.z.iter().map(|&x| BNum::real(tag, x)).collect();
            let mut cur: Vec<BNum> = (0..n).map(|j| BNum::new(tag, p.z[j], p.v[j] * h)).collect();
            let mut out = None;
            for k in 1..=steps {
                let c = Constraint { monomial: p.boundary.clone(), target: p.target(tag, h * k as f64) };
                let seed = if k == 1 {
                    cur.clone()
                } else {
                    // Linear extrapolation from the two previous samples.
                    let e: Vec<BNum> = cur.iter().zip(&prev).map(|(&a, &b)| a + (a - b)).collect();
                    if e.iter().all(|&w| shape_valid(tag, w)) { e } else { cur.clone() }
                };
                let s = solve_gluing(&p.system, &c, &seed, opts)?;
                prev = std::mem::replace(&mut cur, s.z.clone());
                out = Some(s);
            }
            out.expect("at least one step")
        }
    };
    if residual_ok(&sol, opts) {
        Ok(sol)
    } else {
        Err(Error::NoConvergence(sol.residual))
    }
}

fn residual_ok(s: &BSolution, opts: &SolveOptions) -> bool {
    s.residual <= opts.tol
}

/// Regenerate from a point of the real variety of a punctured torus bundle.
pub fn regenerate(s: &RealSolution, v: &TangentVector, geometry: Geometry, t: f64) -> Result<BSolution> {
    regenerate_point(&RealPoint::from_solution(s, v), geometry, t, &SolveOptions::default())
}

/// One sample of a transition path.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionSample {
    pub t: f64,
    pub solution: BSolution,
    pub clifford: Vec<CliffordNum>,
    /// The constrained boundary monomial at this sample.
    pub boundary: BNum,
    pub boundary_clifford: CliffordNum,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TransitionPath {
    pub samples: Vec<TransitionSample>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("transition failed at t = {t}: {error}")]
pub struct TransitionFailure {
    pub t: f64,
    pub error: Error,
    /// Samples computed before the failure, in increasing t.
    pub partial: TransitionPath,
}

fn make_sample(t: f64, sol: BSolution, monomial: &ShapeMonomial) -> Result<TransitionSample> {
    let clifford = sol.z.iter().map(|&w| clifford_embed(t, w)).collect::<Result<Vec<_>>>()?;
    let boundary = evaluate_monomial(monomial, &sol.z)?;
    let boundary_clifford = clifford_embed(t, boundary)?;
    Ok(TransitionSample { t, solution: sol, clifford, boundary, boundary_clifford })
}

/// Solve over B_t at a single t, seeded by shapes given as (re, im) pairs.
pub fn solve_at(
    sys: &GluingSystem,
    monomial: &ShapeMonomial,
    target: &dyn Fn(f64) -> BNum,
    t: f64,
    seed: &[(f64, f64)],
    opts: &SolveOptions,
) -> Result<BSolution> {
    let tag = AlgebraTag::transition(t);
    let z: Vec<BNum> = seed.iter().map(|&(a, b)| BNum::new(tag, a, b)).collect();
    let c = Constraint { monomial: monomial.clone(), target: target(t).with_tag(tag) };
    solve_gluing(sys, &c, &z, opts)
}

fn coords(s: &BSolution) -> Vec<(f64, f64)> {
    s.z.iter().map(|w| (w.re, w.im)).collect()
}

/// Step from a solved sample at t0 to t1, subdividing when a direct step fails.
fn track(
    sys: &GluingSystem,
    monomial: &ShapeMonomial,
    target: &dyn Fn(f64) -> BNum,
    from: (f64, Vec<(f64, f64)>),
    t1: f64,
    opts: &SolveOptions,
    depth: usize,
) -> Result<BSolution> {
    match solve_at(sys, monomial, target, t1, &from.1, opts) {
        Ok(s) => Ok(s),
        Err(e) if depth == 0 => Err(e),
        Err(_) => {
            let mid = 0.5 * (from.0 + t1);
            let s = track(sys, monomial, target, from, mid, opts, depth - 1)?;
            track(sys, monomial, target, (mid, coords(&s)), t1, opts, depth - 1)
        }
    }
}

/// Sample solutions over B_t, k_t^2 = -t|t|, for each t in `ts`, continuing
/// outward from the half-pipe solution at t = 0.
pub fn transition_path(
    sys: &GluingSystem,
    monomial: &ShapeMonomial,
    target: &dyn Fn(f64) -> BNum,
    hp_seed: &[(f64, f64)],
    ts: &[f64],
    opts: &SolveOptions,
) -> std::result::Result<TransitionPath, TransitionFailure> {
    let fail = |t: f64, error: Error, partial: Vec<TransitionSample>| {
        let mut samples = partial;
        samples.sort_by(|a, b| a.t.total_cmp(&b.t));
        TransitionFailure { t, error, partial: TransitionPath { samples } }
    };
    let base = solve_at(sys, monomial, target, 0.0, hp_seed, opts).map_err(|e| fail(0.0, e, vec![]))?;
    let mut ts_sorted: Vec<f64> = ts.to_vec();
    ts_sorted.sort_by(|a, b| a.total_cmp(b));
    let mut samples: Vec<TransitionSample> = Vec::new();
    let base_coords = coords(&base);
    for dir in [1.0, -1.0] {
        let mut prev = (0.0, base_coords.clone());
        let mut side: Vec<f64> = ts_sorted.iter().copied().filter(|&t| t * dir > 0.0).collect();
        side.sort_by(|a, b| (a * dir).total_cmp(&(b * dir)));
        for t in side {
            let s = track(sys, monomial, target, prev.clone(), t, opts, 8).map_err(|e| fail(t, e, samples.clone()))?;
            prev = (t, coords(&s));
            let sample = make_sample(t, s, monomial).map_err(|e| fail(t, e, samples.clone()))?;
            samples.push(sample);
        }
    }
    if ts_sorted.contains(&0.0) {
        samples.push(make_sample(0.0, base, monomial).map_err(|e| fail(0.0, e, vec![]))?);
    }
    samples.sort_by(|a, b| a.t.total_cmp(&b.t));
    Ok(TransitionPath { samples })
}

/// Evenly spaced parameters from a to b inclusive.
pub fn linspace(a: f64, b: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![a];
    }
    (0..count)
        .map(|k| {
            let v = a + (b - a) * k as f64 / (count - 1) as f64;
            if v.abs() < 1e-15 * (a.abs() + b.abs()) {
                0.0
            } else {
                v
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum CompletionKind {
    CompleteCusp,
    /// Hyperbolic cone singularity with this cone angle.
    Cone(f64),
    /// AdS tachyon with this mass.
    Tachyon(f64),
    /// Half-pipe infinitesimal cone with this infinitesimal angle.
    InfinitesimalCone(f64),
    DenseModuli,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompletionReport {
    pub kind: CompletionKind,
    /// |H| (q < 0), the translation length exp((log|h_l| + log|h_m|)/2) (q > 0)
    /// or re H (q = 0).
    pub modulus: f64,
    /// Cone angle, boost or infinitesimal angle.
    pub angle_or_boost: f64,
    /// Rotational part of the boundary curve in radians.
    pub rotational_part: f64,
}

/// Completion type of a solution around the curve with holonomy `boundary`.
pub fn classify_completion(sol: &BSolution, boundary: &ShapeMonomial) -> Result<CompletionReport> {
    let h = evaluate_monomial(boundary, &sol.z)?;
    let rot = edge_angle(boundary, &sol.z)?;
    let near = |a: f64, b: f64| (a - b).abs() <= 1e-8 * (1.0 + b.abs());
    let report = match sol.tag.regime() {
        Regime::Complex => {
            let modulus = h.sqnorm().sqrt();
            let kind = if near(modulus, 1.0) && near(rot, 0.0) && near(h.re, 1.0) {
                CompletionKind::CompleteCusp
            } else if near(modulus, 1.0) {
                CompletionKind::Cone(rot)
            } else {
                CompletionKind::DenseModuli
            };
            CompletionReport { kind, modulus, angle_or_boost: rot, rotational_part: rot }
        }
        Regime::Split => {
            let p = h.split()?;
            let (ll, lm) = (p.lambda.abs().ln(), p.mu.abs().ln());
            let (trans, boost) = (0.5 * (ll + lm), 0.5 * (ll - lm));
            let kind = if near(rot, 2.0 * PI) && near(trans, 0.0) {
                CompletionKind::Tachyon(boost)
            } else if near(rot, 0.0) && near(trans, 0.0) && near(boost, 0.0) && p.lambda > 0.0 {
                CompletionKind::CompleteCusp
            } else {
                CompletionKind::DenseModuli
            };
            CompletionReport { kind, modulus: trans.exp(), angle_or_boost: boost, rotational_part: rot }
        }
        Regime::Dual => {
            let angle = h.im / h.re;
            let kind = if near(rot, 2.0 * PI) && near(h.re, 1.0) {
                CompletionKind::InfinitesimalCone(angle)
            } else if near(rot, 0.0) && near(h.re, 1.0) && near(h.im, 0.0) {
                CompletionKind::CompleteCusp
            } else {
                CompletionKind::DenseModuli
            };
            CompletionReport { kind, modulus: h.re, angle_or_boost: angle, rotational_part: rot }
        }
    };
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TachyonStructure {
    pub lambda_sol: RealSolution,
    pub mu_sol: RealSolution,
    pub mass: f64,
    pub ads: BSolution,
    pub completion: CompletionReport,
}

impl TachyonStructure {
    pub fn to_file(&self) -> TachyonFile {
        let mut ads = self.ads.to_file();
        ads.word = Some(self.lambda_sol.word.to_string());
        ads.branch = Some(self.lambda_sol.branch);
        TachyonFile {
            mass: self.mass,
            lambda: self.lambda_sol.to_file(),
            mu: self.mu_sol.to_file(),
            ads,
            completion: self.completion,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TachyonFile {
    pub mass: f64,
    pub lambda: RealSolutionFile,
    pub mu: RealSolutionFile,
    pub ads: BSolutionFile,
    pub completion: CompletionReport,
}

/// AdS structure whose puncture curve is a tachyon of the given mass.
pub fn tachyon(w: &LRWord, branch: Branch, mass: f64) -> Result<TachyonStructure> {
    if !(mass < 0.0) {
        return Err(Error::OrientationImpossible(mass));
    }
    let lambda_sol = follow_path(w, branch, mass.exp())?;
    let mu_sol = follow_path(w, branch, (-mass).exp())?;
    let tag = AlgebraTag::SPLIT;
    let z = lambda_sol
        .z
        .iter()
        .zip(&mu_sol.z)
        .map(|(&l, &m)| unsplit(SplitPair::new(l, m), tag))
        .collect::<Result<Vec<_>>>()?;
    let sys = crate::triangulation::build_triangulation(w).system();
    let ads = BSolution::new(&sys, z)?;
    check_structure(&sys, &ads.z, &SolveOptions::default())?;
    let boundary = lambda_sol.puncture_monomial();
    let completion = classify_completion(&ads, &boundary)?;
    Ok(TachyonStructure { lambda_sol, mu_sol, mass, ads, completion })
}
