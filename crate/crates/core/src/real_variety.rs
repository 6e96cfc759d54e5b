//! Real solutions with positive diagonal-exchange shapes: the collapsed
//! solutions obtained from the eigenlines of the monodromy, the log-Jacobian
//! with its one-dimensional positive kernel, and continuation in H(eps).

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraTag, BNum};
use crate::error::{Error, Result};
use crate::projective::{cross_ratio, PB1Point};
use crate::triangulation::{
    boundary_monomials, build_triangulation, gluing_equations, IdealTriangulation, ShapeMonomial,
    SignCase, Slot,
};
use crate::word::LRWord;

/// Which eigen-coordinate projects the developed parallelograms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign_case(self) -> SignCase {
        match self {
            Branch::Plus => SignCase::Case1,
            Branch::Minus => SignCase::Case2,
        }
    }
}

impl std::str::FromStr for Branch {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" | "+" => Ok(Branch::Plus),
            "minus" | "-" => Ok(Branch::Minus),
            _ => Err(Error::InvalidInput(format!("branch must be plus or minus, got {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RealSolution {
    pub word: LRWord,
    pub branch: Branch,
    pub sign_case: SignCase,
    pub z: Vec<f64>,
    pub residual: f64,
}

impl RealSolution {
    /// Build from shapes, checking positivity and the sign pattern.
    pub fn new(word: LRWord, branch: Branch, z: Vec<f64>) -> Result<Self> {
        if z.len() != word.len() {
            return Err(Error::InvalidInput("shape count does not match word length".into()));
        }
        if let Some(j) = z.iter().position(|&x| !(x > 0.0)) {
            return Err(Error::InvalidStructure {
                check: crate::error::StructureCheck::ShapeValidity,
                index: j + 1,
            });
        }
        let sign_case = sign_case_of(&word, &z).ok_or(Error::InvalidStructure {
            check: crate::error::StructureCheck::AngleCondition,
            index: 0,
        })?;
        let residual = gluing_residual(&gluing_equations(&word), &z);
        Ok(RealSolution { word, branch, sign_case, z, residual })
    }

    /// The puncture monomial oriented for this solution's sign case.
    pub fn puncture_monomial(&self) -> ShapeMonomial {
        boundary_monomials(&self.word).oriented(self.sign_case)
    }

    pub fn h_eps(&self) -> f64 {
        self.puncture_monomial().eval_real(&self.z)
    }

    pub fn to_file(&self) -> RealSolutionFile {
        RealSolutionFile {
            word: self.word.to_string(),
            branch: self.branch,
            z: self.z.clone(),
            h_eps: self.h_eps(),
            residual: self.residual,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealSolutionFile {
    pub word: String,
    pub branch: Branch,
    pub z: Vec<f64>,
    #[serde(rename = "H_eps")]
    pub h_eps: f64,
    pub residual: f64,
}

impl RealSolutionFile {
    pub fn solution(&self) -> Result<RealSolution> {
        RealSolution::new(self.word.parse()?, self.branch, self.z.clone())
    }
}

/// max_j |g_j(z) - 1|.
pub fn gluing_residual(eqs: &[ShapeMonomial], z: &[f64]) -> f64 {
    eqs.iter().map(|g| (g.eval_real(z) - 1.0).abs()).fold(0.0, f64::max)
}

/// Number of negative factors in each equation, counted with multiplicity.
pub fn negative_counts(eqs: &[ShapeMonomial], z: &[f64]) -> Vec<i32> {
    eqs.iter()
        .map(|g| {
            g.terms()
                .filter(|&(t, s, _)| s.real_value(z[t]) < 0.0)
                .map(|(_, _, e)| e.abs())
                .sum()
        })
        .collect()
}

/// Every edge carries exactly two negative shapes, at a point whose diagonal
/// exchange shapes z_j are all positive.
pub fn angle_condition(t: &IdealTriangulation, s: &RealSolution) -> bool {
    s.z.len() == t.n_tets
        && s.z.iter().all(|&x| x > 0.0)
        && negative_counts(&t.system().equations, &s.z).iter().all(|&c| c == 2)
}

/// The sign case whose pattern the shapes follow, if any.
pub fn sign_case_of(w: &LRWord, z: &[f64]) -> Option<SignCase> {
    [SignCase::Case1, SignCase::Case2].into_iter().find(|&case| {
        z.iter().enumerate().all(|(j, &zj)| {
            let neg = case.negative_slot(w.label(j + 1));
            let pos = case.positive_slot(w.label(j + 1));
            zj > 0.0 && neg.real_value(zj) < 0.0 && pos.real_value(zj) > 0.0
        })
    })
}

/// Collapsed solution from projecting the developed parallelograms onto an
/// eigenline of the word matrix.
pub fn sol_solution(w: &LRWord, branch: Branch) -> Result<RealSolution> {
    let m = w.matrix();
    let [[a, b], [c, d]] = m.map(|row| row.map(|x| x as f64));
    let tr = a + d;
    if tr.abs() <= 2.0 {
        return Err(Error::NotAnosov(tr as i64));
    }
    let lp = 0.5 * (tr + (tr * tr - 4.0).sqrt());
    let lm = 1.0 / lp;
    // Left eigenvector r W = lambda r: plus uses the expanding eigenvalue.
    let lambda = match branch {
        Branch::Plus => lp,
        Branch::Minus => lm,
    };
    let r1 = [lambda - d, b];
    let r2 = [c, lambda - a];
    let norm = |v: [f64; 2]| v[0].abs().max(v[1].abs());
    let r = if norm(r1) >= norm(r2) { r1 } else { r2 };
    // rows[j] = r P_j. Iterate in the direction in which r grows, so that no
    // step cancels: forward for lambda > 1, backward from r W = lambda r.
    let n = w.len();
    let mut rows = vec![[0.0f64; 2]; n + 1];
    let apply = |v: [f64; 2], m: [[i128; 2]; 2]| {
        [v[0] * m[0][0] as f64 + v[1] * m[1][0] as f64, v[0] * m[0][1] as f64 + v[1] * m[1][1] as f64]
    };
    if lambda > 1.0 {
        rows[0] = r;
        for j in 1..=n {
            rows[j] = apply(rows[j - 1], w.letter(j as isize).matrix());
        }
    } else {
        rows[n] = [lambda * r[0], lambda * r[1]];
        for j in (0..n).rev() {
            let [[p, q], [s, t]] = w.letter(j as isize + 1).matrix();
            rows[j] = apply(rows[j + 1], [[t, -q], [-s, p]]);
        }
    }
    let tag = AlgebraTag::DUAL;
    let pt = |x: f64| PB1Point::affine(BNum::real(tag, x));
    let mut corners = Vec::with_capacity(n);
    for row in &rows[..n] {
        let [a1, a2] = *row;
        corners.push([pt(0.0), pt(a1), pt(a2), pt(a1 + a2)]);
    }
    let eqs = gluing_equations(w);
    let mut best: Option<(f64, Vec<f64>)> = None;
    for order in [[2usize, 1usize], [1, 2]] {
        let z = corners
            .iter()
            .map(|c| cross_ratio(&c[0], &c[3], &c[order[0]], &c[order[1]]).map(|x| x.re))
            .collect::<Result<Vec<f64>>>()?;
        let res = gluing_residual(&eqs, &z);
        if res < 1e-10 {
            return RealSolution::new(w.clone(), branch, z);
        }
        if best.as_ref().is_none_or(|(r0, _)| res < *r0) {
            best = Some((res, z));
        }
    }
    Err(Error::NoConvergence(best.map(|b| b.0).unwrap_or(f64::INFINITY)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogJacobian {
    /// d log g_i / d log z_j.
    pub plain: DMatrix<f64>,
    /// Same differential in the basis xi_j = d log(negative non-z shape).
    pub xi: DMatrix<f64>,
    pub c: Vec<f64>,
    pub t: Vec<f64>,
    pub z: Vec<f64>,
}

fn check_regular(z: &[f64]) -> Result<()> {
    match z.iter().position(|&x| x.abs() < 1e-14 || (x - 1.0).abs() < 1e-14) {
        Some(j) => Err(Error::SingularPoint(j + 1)),
        None => Ok(()),
    }
}

/// d log g_i / d log z_j for any system.
pub fn plain_log_jacobian(eqs: &[ShapeMonomial], z: &[f64]) -> Result<DMatrix<f64>> {
    check_regular(z)?;
    let mut j = DMatrix::zeros(eqs.len(), z.len());
    for (i, g) in eqs.iter().enumerate() {
        for (t, s, e) in g.terms() {
            j[(i, t)] += e as f64 * s.dlog_dlogz(z[t]);
        }
    }
    Ok(j)
}

/// Both forms of the log-Jacobian at a point with positive shapes.
pub fn log_jacobian(w: &LRWord, s: &RealSolution) -> Result<LogJacobian> {
    let eqs = gluing_equations(w);
    let z = &s.z;
    let plain = plain_log_jacobian(&eqs, z)?;
    let n = z.len();
    let (mut c, mut t) = (vec![0.0; n], vec![0.0; n]);
    for j in 0..n {
        if z[j] < 1.0 {
            c[j] = z[j];
            t[j] = 1.0 - z[j];
        } else {
            c[j] = 1.0 / z[j];
            t[j] = (z[j] - 1.0) / z[j];
        }
    }
    let mut xi = DMatrix::zeros(n, n);
    for (i, g) in eqs.iter().enumerate() {
        for (tet, slot, e) in g.terms() {
            let negative = if z[tet] < 1.0 { Slot::X } else { Slot::Y };
            let coeff = if slot == Slot::Z {
                -t[tet]
            } else if slot == negative {
                1.0
            } else {
                -c[tet]
            };
            xi[(i, tet)] += e as f64 * coeff;
        }
    }
    Ok(LogJacobian { plain, xi, c, t, z: z.clone() })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    /// dz_j, normalized to max |v_j| = 1 with the largest entry positive.
    pub v: Vec<f64>,
}

/// Singular values in increasing order and the right singular vector of the
/// smallest one.
fn smallest_singular(j: &DMatrix<f64>) -> (Vec<f64>, DVector<f64>) {
    let n = j.ncols();
    let square = if j.nrows() < n {
        let mut m = DMatrix::zeros(n, n);
        m.view_mut((0, 0), (j.nrows(), n)).copy_from(j);
        m
    } else {
        j.clone()
    };
    let svd = square.svd(false, true);
    let vt = svd.v_t.expect("requested v_t");
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    let sv: Vec<f64> = idx.iter().map(|&k| svd.singular_values[k]).collect();
    let kernel = vt.row(idx[0]).transpose();
    (sv, kernel)
}

/// Kernel of a log-Jacobian in dlog z coordinates, checking that it is one
/// dimensional.
pub fn log_kernel(plain: &DMatrix<f64>) -> Result<Vec<f64>> {
    let (sv, k) = smallest_singular(plain);
    let norm = sv.last().copied().unwrap_or(0.0);
    let second = if sv.len() > 1 { sv[1] } else { f64::INFINITY };
    if sv[0] > 1e-6 * norm.max(1.0) || second <= 1e-8 * norm {
        return Err(Error::Rank { smallest: sv[0], second });
    }
    Ok(k.iter().copied().collect())
}

fn normalize(v: Vec<f64>) -> Vec<f64> {
    let (mut best, mut scale) = (0.0f64, 1.0);
    for &x in &v {
        if x.abs() > best {
            best = x.abs();
            scale = x;
        }
    }
    v.into_iter().map(|x| x / scale).collect()
}

pub fn kernel_tangent(j: &LogJacobian) -> Result<TangentVector> {
    let w = log_kernel(&j.plain)?;
    Ok(TangentVector { v: normalize(w.iter().zip(&j.z).map(|(a, z)| a * z).collect()) })
}

/// Kernel of the xi-basis matrix, normalized like the tangent.
pub fn xi_kernel(j: &LogJacobian) -> Result<Vec<f64>> {
    Ok(normalize(log_kernel(&j.xi)?))
}

/// Kernel tangent dz for any system at real shapes.
pub fn tangent_of_system(eqs: &[ShapeMonomial], z: &[f64]) -> Result<TangentVector> {
    let plain = plain_log_jacobian(eqs, z)?;
    let w = log_kernel(&plain)?;
    Ok(TangentVector { v: normalize(w.iter().zip(z).map(|(a, z)| a * z).collect()) })
}

/// d log|H| along a tangent dz.
pub fn dlog_monomial(h: &ShapeMonomial, z: &[f64], v: &[f64]) -> f64 {
    h.terms()
        .map(|(t, s, e)| e as f64 * s.dlog_dlogz(z[t]) * v[t] / z[t])
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathOptions {
    pub initial_step: f64,
    pub max_step: f64,
    pub min_step: f64,
    pub max_steps: usize,
    pub newton_tol: f64,
    pub max_newton: usize,
}

impl Default for PathOptions {
    fn default() -> Self {
        PathOptions {
            initial_step: 0.1,
            max_step: 0.5,
            min_step: 1e-9,
            max_steps: 20_000,
            newton_tol: 1e-13,
            max_newton: 30,
        }
    }
}

/// Accepted points of a continuation run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PathTrace {
    pub points: Vec<Vec<f64>>,
    pub log_h: Vec<f64>,
}

struct LogSystem<'a> {
    eqs: &'a [ShapeMonomial],
    h: &'a ShapeMonomial,
    signs: Vec<f64>,
}

impl LogSystem<'_> {
    fn z(&self, u: &DVector<f64>) -> Vec<f64> {
        u.iter().zip(&self.signs).map(|(x, s)| s * x.exp()).collect()
    }

    /// Residual [log|g_i|; log|H| - target] and its Jacobian in u = log|z|.
    fn eval(&self, u: &DVector<f64>, target: f64) -> Result<(DVector<f64>, DMatrix<f64>)> {
        let z = self.z(u);
        let n = z.len();
        let mut f = DVector::zeros(self.eqs.len() + 1);
        for (i, g) in self.eqs.iter().enumerate() {
            f[i] = g.eval_real(&z).abs().ln();
        }
        f[self.eqs.len()] = self.h.eval_real(&z).abs().ln() - target;
        let mut all = self.eqs.to_vec();
        all.push(self.h.clone());
        let j = plain_log_jacobian(&all, &z)?;
        debug_assert_eq!(j.ncols(), n);
        Ok((f, j))
    }

    fn newton(&self, u0: &DVector<f64>, target: f64, opts: &PathOptions) -> Option<DVector<f64>> {
        let mut u = u0.clone();
        for _ in 0..opts.max_newton {
            let (f, j) = self.eval(&u, target).ok()?;
            if !f.iter().all(|x| x.is_finite()) {
                return None;
            }
            let du = j.lu().solve(&(-&f))?;
            u += &du;
            let step = du.amax();
            if step < opts.newton_tol {
                let (f, _) = self.eval(&u, target).ok()?;
                return (f.amax() < 1e-12).then_some(u);
            }
            if step > 5.0 {
                return None;
            }
        }
        None
    }
}

/// Same sign of z and of 1 - z in every tetrahedron.
fn same_chamber(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(&x, &y)| x.signum() == y.signum() && (1.0 - x).signum() == (1.0 - y).signum())
}

/// Continue a real solution of `eqs` (square once the H-constraint is added)
/// until log|H| reaches the target, staying inside the chamber of the start.
pub fn continue_to(
    eqs: &[ShapeMonomial],
    h: &ShapeMonomial,
    z0: &[f64],
    target_log_h: f64,
    opts: &PathOptions,
) -> Result<(Vec<f64>, PathTrace)> {
    if eqs.len() + 1 != z0.len() {
        return Err(Error::InvalidInput("need one equation fewer than unknowns".into()));
    }
    let sys = LogSystem { eqs, h, signs: z0.iter().map(|x| x.signum()).collect() };
    let mut u = DVector::from_iterator(z0.len(), z0.iter().map(|x| x.abs().ln()));
    let mut cur = h.eval_real(z0).abs().ln();
    let mut trace = PathTrace { points: vec![z0.to_vec()], log_h: vec![cur] };
    let dir = (target_log_h - cur).signum();
    let mut step = opts.initial_step;
    let mut count = 0;
    while (target_log_h - cur).abs() > 0.0 {
        count += 1;
        if count > opts.max_steps || step < opts.min_step {
            return Err(Error::ContinuationBudget { reached: cur.exp(), target: target_log_h.exp() });
        }
        let remaining = (target_log_h - cur).abs();
        let (next, last) = if remaining <= step { (target_log_h, true) } else { (cur + dir * step, false) };
        // Tangent predictor: J du = e_last.
        let (_, j) = sys.eval(&u, cur)?;
        let mut rhs = DVector::zeros(z0.len());
        rhs[z0.len() - 1] = next - cur;
        let pred = match j.lu().solve(&rhs) {
            Some(du) => &u + du,
            None => return Err(Error::Rank { smallest: 0.0, second: 0.0 }),
        };
        match sys.newton(&pred, next, opts) {
            Some(unew) if same_chamber(&sys.z(&unew), z0) => {
                u = unew;
                cur = if last { target_log_h } else { next };
                trace.points.push(sys.z(&u));
                trace.log_h.push(h.eval_real(&sys.z(&u)).abs().ln());
                step = (step * 1.5).min(opts.max_step);
            }
            _ => step *= 0.5,
        }
    }
    Ok((sys.z(&u), trace))
}

/// Continue a point of the real variety of a word to H(eps) = target.
pub fn follow_from(
    s: &RealSolution,
    target_h: f64,
    opts: &PathOptions,
) -> Result<(RealSolution, PathTrace)> {
    if !(target_h > 0.0) || !target_h.is_finite() {
        return Err(Error::InvalidInput(format!("target H must be positive, got {target_h}")));
    }
    let eqs = gluing_equations(&s.word);
    let h = s.puncture_monomial();
    let (z, trace) = continue_to(&eqs[..eqs.len() - 1], &h, &s.z, target_h.ln(), opts)?;
    let t = build_triangulation(&s.word);
    let out = RealSolution::new(s.word.clone(), s.branch, z)?;
    for p in &trace.points {
        let ok = negative_counts(&eqs, p).iter().all(|&c| c == 2) && p.iter().all(|&x| x > 0.0);
        if !ok {
            return Err(Error::InvalidStructure {
                check: crate::error::StructureCheck::AngleCondition,
                index: 0,
            });
        }
    }
    debug_assert!(angle_condition(&t, &out));
    Ok((out, trace))
}

pub fn follow_path(w: &LRWord, branch: Branch, target_h: f64) -> Result<RealSolution> {
    follow_path_traced(w, branch, target_h, &PathOptions::default()).map(|r| r.0)
}

pub fn follow_path_traced(
    w: &LRWord,
    branch: Branch,
    target_h: f64,
    opts: &PathOptions,
) -> Result<(RealSolution, PathTrace)> {
    let s = sol_solution(w, branch)?;
    follow_from(&s, target_h, opts)
}

/// H(eps)^{N/2} through the block product form.
pub fn product_form_value(s: &RealSolution) -> f64 {
    boundary_monomials(&s.word).product_form(s.sign_case).eval_real(&s.z)
}
