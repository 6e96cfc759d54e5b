use std::path::Path;

use geotrans::projective::{angle_flag, is_positively_oriented, AngleFlag};
use geotrans::real_variety::RealSolutionFile;
use geotrans::transition::{
    check_structure, classify_completion, edge_angle, BSolution, BSolutionFile, CompletionKind,
    CompletionReport, SolveOptions, TachyonFile,
};
use geotrans::triangulation::{
    boundary_monomials, build_triangulation, evaluate_monomial, GluingSystem, ShapeMonomial,
    TriangulationFile,
};
use geotrans::word::LRWord;
use geotrans::{AlgebraTag, BNum};
use serde::Serialize;
use serde_json::Value;

use crate::output::{read_json, UsageError};

#[derive(Debug, Serialize)]
pub struct Report {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub word: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    pub n_tets: usize,
    pub equation_residuals: Vec<f64>,
    pub residual: f64,
    pub edge_angles: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub angle_flags: Option<Vec<AngleFlag>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oriented: Option<bool>,
    /// "ok" or the first failed structure check.
    pub structure: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub completion: Option<CompletionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mass_error: Option<f64>,
    pub tol: f64,
    pub ok: bool,
}

pub fn verify_file(
    input: &Path,
    triangulation: Option<&Path>,
    boundary: Option<&str>,
    tol: f64,
) -> anyhow::Result<Report> {
    let value: Value = read_json(input)?;
    let has = |k: &str| value.get(k).is_some();
    if has("mass") {
        let f: TachyonFile = serde_json::from_value(value)?;
        let word: LRWord = f.lambda.word.parse()?;
        let sys = build_triangulation(&word).system();
        let monomial = boundary_monomials(&word).oriented(f.lambda.branch.sign_case());
        let mut r = solution_report("tachyon", &sys, &f.ads.shapes()?, Some(&monomial), tol)?;
        r.word = Some(word.to_string());
        let err = match r.completion.map(|c| c.kind) {
            Some(CompletionKind::Tachyon(m)) => (m - f.mass).abs(),
            _ => f64::INFINITY,
        };
        r.ok &= err <= 1e-8 * (1.0 + f.mass.abs());
        r.mass_error = Some(err);
        Ok(r)
    } else if has("q") {
        let f: BSolutionFile = serde_json::from_value(value)?;
        let (sys, monomial, word) = match (&f.word, triangulation) {
            (_, Some(p)) => {
                let t: TriangulationFile = read_json(p)?;
                let name = boundary.unwrap_or("H_eps");
                let m = if boundary.is_some() || t.boundary.contains_key(name) {
                    Some(t.boundary_monomial(name)?)
                } else {
                    None
                };
                (t.system()?, m, t.word.clone())
            }
            (Some(w), None) => {
                let word: LRWord = w.parse()?;
                let b = boundary_monomials(&word);
                let m = match f.branch {
                    Some(br) => b.oriented(br.sign_case()),
                    None => b.h_eps,
                };
                (build_triangulation(&word).system(), Some(m), Some(word.to_string()))
            }
            (None, None) => {
                return Err(UsageError("solution names no word; pass --triangulation".into()).into())
            }
        };
        let mut r = solution_report("solution", &sys, &f.shapes()?, monomial.as_ref(), tol)?;
        r.word = word;
        Ok(r)
    } else if has("H_eps") {
        let f: RealSolutionFile = serde_json::from_value(value)?;
        let word: LRWord = f.word.parse()?;
        let tag = AlgebraTag::DUAL;
        let z: Vec<BNum> = f.z.iter().map(|&x| BNum::real(tag, x)).collect();
        let sys = build_triangulation(&word).system();
        let mut r = solution_report("real-solution", &sys, &z, None, tol)?;
        r.word = Some(word.to_string());
        r.oriented = None;
        if let Err(e) = f.solution() {
            r.structure = e.to_string();
            r.ok = false;
        }
        Ok(r)
    } else if has("equations") {
        let f: TriangulationFile = serde_json::from_value(value)?;
        let sys = f.system()?;
        let trivial = sys.product_is_trivial();
        Ok(Report {
            kind: "triangulation",
            word: f.word,
            q: None,
            n_tets: sys.n_tets,
            equation_residuals: vec![],
            residual: 0.0,
            edge_angles: vec![],
            angle_flags: None,
            oriented: None,
            structure: if trivial { "ok".into() } else { "product of equations is not 1".into() },
            completion: None,
            mass_error: None,
            tol,
            ok: trivial,
        })
    } else {
        Err(UsageError("unrecognised file: expected a solution, tachyon or triangulation".into()).into())
    }
}

fn solution_report(
    kind: &'static str,
    sys: &GluingSystem,
    z: &[BNum],
    monomial: Option<&ShapeMonomial>,
    tol: f64,
) -> anyhow::Result<Report> {
    if z.len() != sys.n_tets {
        return Err(UsageError(format!("{} shapes for {} tetrahedra", z.len(), sys.n_tets)).into());
    }
    let tag = z[0].tag;
    let equation_residuals = sys
        .equations
        .iter()
        .map(|g| Ok((evaluate_monomial(g, z)? + -1.0).max_abs()))
        .collect::<geotrans::Result<Vec<_>>>()?;
    let residual = equation_residuals.iter().copied().fold(0.0, f64::max);
    let edge_angles = sys.equations.iter().map(|g| edge_angle(g, z)).collect::<geotrans::Result<Vec<_>>>()?;
    let angle_flags = if tag.q >= 0.0 {
        Some(z.iter().map(|&w| angle_flag(tag, w)).collect::<geotrans::Result<Vec<_>>>()?)
    } else {
        None
    };
    let oriented = z.iter().all(|&w| is_positively_oriented(w));
    let opts = SolveOptions { require_oriented: tag.q != 0.0 || oriented, ..Default::default() };
    let structure = match check_structure(sys, z, &opts) {
        Ok(()) => "ok".to_string(),
        Err(e) => e.to_string(),
    };
    let completion = match monomial {
        Some(m) => Some(classify_completion(&BSolution::new(sys, z.to_vec())?, m)?),
        None => None,
    };
    Ok(Report {
        kind,
        word: None,
        q: Some(tag.q),
        n_tets: sys.n_tets,
        equation_residuals,
        residual,
        edge_angles,
        angle_flags,
        oriented: Some(oriented),
        ok: residual <= 2.0 * tol && structure == "ok",
        structure,
        completion,
        mass_error: None,
        tol,
    })
}
