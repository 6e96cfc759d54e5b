//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any fails.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use geotrans::algebra::{exp_imaginary, unsplit, AlgebraTag, BNum, SplitPair};
use geotrans::error::Error;
use geotrans::projective::{cross_ratio, shape_valid, simplex_valid_herm};
use geotrans::real_variety::{
    follow_from, follow_path, follow_path_traced, gluing_residual, kernel_tangent, log_jacobian,
    negative_counts, product_form_value, sol_solution, tangent_of_system, Branch, PathOptions,
    RealSolution,
};
use geotrans::transition::{
    linspace, regenerate, regenerate_point, solve_along, solve_gluing,
    solve_gluing_direct, tachyon, transition_path, CompletionKind, Constraint, Geometry, RealPoint,
    SolveOptions,
};
use geotrans::triangulation::{build_triangulation, evaluate_monomial, figure_eight, SignCase};
use geotrans::word::{LRWord, TetLabel};
use geotrans_validation::{all_words, random_point, random_words, rng};
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn word(s: &str) -> LRWord {
    s.parse().expect("valid word")
}

/// All words with N <= 10 plus 50 random words with N <= 16.
fn word_set() -> Vec<LRWord> {
    let mut words = all_words(10);
    let mut seen: BTreeSet<String> = words.iter().map(|w| w.to_string()).collect();
    for w in random_words(50, 16, 2024) {
        if seen.insert(w.to_string()) {
            words.push(w);
        }
    }
    words
}

/// Five continuation points on either side of a Sol solution.
fn continuation_points(s0: &RealSolution) -> Result<Vec<RealSolution>, String> {
    let h0 = s0.h_eps();
    [0.25, 0.5, 2.0, 4.0, 8.0]
        .iter()
        .map(|f| follow_from(s0, h0 * f, &PathOptions::default()).map(|p| p.0).map_err(|e| format!("{}: {e}", s0.word)))
        .collect()
}

fn c1_fig8_cones() -> Outcome {
    let (sys, b) = figure_eight();
    let t = AlgebraTag::COMPLEX;
    let seed = vec![BNum::new(t, 0.5, 3f64.sqrt() / 2.0); 2];
    let mut worst: f64 = 0.0;
    for theta in [PI / 2.0, PI, 3.0 * PI / 2.0] {
        let steps = (theta / 0.1).ceil() as usize;
        let targets: Vec<BNum> = (1..=steps).map(|k| exp_imaginary(t, theta * k as f64 / steps as f64)).collect();
        let s = solve_along(&sys, &b["H_l"], &targets, &seed, &SolveOptions::default()).map_err(|e| e.to_string())?;
        // z (1 - z) = e^{i theta / 2}; take the root with positive imaginary part.
        let (c, d) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        let (re, im) = (1.0 - 4.0 * c, -4.0 * d);
        let r = (re * re + im * im).sqrt();
        let (sr, si) = (((r + re) / 2.0).sqrt(), im.signum() * ((r - re) / 2.0).sqrt());
        let roots = [((1.0 + sr) / 2.0, si / 2.0), ((1.0 - sr) / 2.0, -si / 2.0)];
        let z = roots.iter().find(|z| z.1 > 0.0).expect("one root in the upper half plane");
        let err = (s.z[0].re - z.0).abs().max((s.z[0].im - z.1).abs());
        worst = worst.max(err);
        ensure(err <= 1e-9, || format!("theta = {theta}: z1 = {:?}, closed form {z:?}", s.z[0]))?;
    }
    Ok(format!("theta in {{pi/2, pi, 3pi/2}}, max |z1 - closed form| = {worst:.1e}"))
}

fn c2_fig8_half_pipe() -> Outcome {
    let (sys, b) = figure_eight();
    let tag = AlgebraTag::DUAL;
    let seed = [BNum::new(tag, -0.5, 0.3), BNum::new(tag, 1.5, 0.3)];
    let c = Constraint { monomial: b["H_l"].clone(), target: exp_imaginary(tag, -1.0) };
    let s = solve_gluing(&sys, &c, &seed, &SolveOptions::default()).map_err(|e| e.to_string())?;
    let r5 = 5f64.sqrt();
    let expect = [((1.0 - r5) / 2.0, 1.0 / (2.0 * r5)), ((1.0 + r5) / 2.0, 1.0 / (2.0 * r5))];
    let mut worst: f64 = 0.0;
    for (z, (re, im)) in s.z.iter().zip(expect) {
        worst = worst.max((z.re - re).abs()).max((z.im - im).abs());
    }
    ensure(worst <= 1e-10, || format!("shapes {:?} off by {worst:.1e}", s.z))?;
    let h = evaluate_monomial(&b["H_l"], &s.z).map_err(|e| e.to_string())?;
    ensure((h.re - 1.0).abs() <= 1e-10 && (h.im + 1.0).abs() <= 1e-10, || format!("H(l) = {h:?}"))?;
    let literal = Constraint { monomial: b["H_l"].clone(), target: -exp_imaginary(tag, -1.0) };
    let lit = solve_gluing(&sys, &literal, &seed, &SolveOptions::default());
    Ok(format!(
        "constraint H(l) = e^(-sigma): max error {worst:.1e}, H(l) = 1 - sigma; the literal -e^(-sigma) has no solution ({})",
        lit.err().map(|e| e.code().to_string()).unwrap_or_else(|| "unexpectedly solved".into())
    ))
}

fn c3_kernel_structure() -> Outcome {
    let words = word_set();
    let (mut points, mut col_bad, mut rank_bad, mut pos_bad) = (0usize, 0usize, 0usize, 0usize);
    // Per branch: points with a diagonal entry != 2, words involved, and
    // whether every such entry sits at a hinge tetrahedron.
    let mut diag_points = [0usize; 2];
    let mut diag_words: [BTreeSet<String>; 2] = Default::default();
    let mut off_hinge = 0usize;
    for w in &words {
        for (bi, b) in [Branch::Plus, Branch::Minus].into_iter().enumerate() {
            let s0 = sol_solution(w, b).map_err(|e| format!("{w}: {e}"))?;
            let mut pts = vec![s0.clone()];
            pts.extend(continuation_points(&s0)?);
            for s in &pts {
                points += 1;
                let j = log_jacobian(w, s).map_err(|e| format!("{w}: {e}"))?;
                let n = s.z.len();
                let bad: Vec<usize> = (0..n).filter(|&k| (j.xi[(k, k)] - 2.0).abs() > 1e-12).collect();
                if !bad.is_empty() {
                    diag_points[bi] += 1;
                    diag_words[bi].insert(w.to_string());
                    off_hinge += bad.iter().filter(|&&k| !matches!(w.label(k + 1), TetLabel::RLHinge | TetLabel::LRHinge)).count();
                }
                if (0..n).any(|c| (0..n).map(|r| j.xi[(r, c)]).sum::<f64>().abs() > 1e-12) {
                    col_bad += 1;
                }
                match kernel_tangent(&j) {
                    Ok(v) => pos_bad += usize::from(!v.v.iter().all(|&x| x > 0.0)),
                    Err(_) => rank_bad += 1,
                }
            }
        }
    }
    let summary = format!(
        "{points} points on {} words x 2 branches; column sums, kernel dimension 1, positive kernel: {} failures",
        words.len(),
        col_bad + rank_bad + pos_bad
    );
    ensure(col_bad == 0 && rank_bad == 0 && pos_bad == 0 && diag_points == [0, 0], || {
        let two_block = diag_words[0].iter().all(|s| {
            let w = word(s);
            w.blocks().len() == 2 && w.blocks().contains(&1)
        });
        format!(
            "{summary}; diagonal != 2 at {} plus-branch points on {} words ({}), and at {} minus-branch points on {} words; {} of the offending entries are off the hinge tetrahedra",
            diag_points[0],
            diag_words[0].len(),
            if two_block { "all of the form R^m L or R L^n" } else { "including other words" },
            diag_points[1],
            diag_words[1].len(),
            off_hinge
        )
    })?;
    Ok(summary)
}

fn c4_sol_solutions() -> Outcome {
    let words = word_set();
    let mut worst: f64 = 0.0;
    for w in &words {
        let eqs = geotrans::triangulation::gluing_equations(w);
        for (b, case) in [(Branch::Plus, SignCase::Case1), (Branch::Minus, SignCase::Case2)] {
            let s = sol_solution(w, b).map_err(|e| format!("{w}: {e}"))?;
            let r = gluing_residual(&eqs, &s.z);
            worst = worst.max(r);
            ensure(r <= 1e-10, || format!("{w} {b:?}: residual {r:.1e}"))?;
            ensure(s.z.iter().all(|&x| x > 0.0), || format!("{w} {b:?}: nonpositive shape"))?;
            ensure(negative_counts(&eqs, &s.z).iter().all(|&c| c == 2), || format!("{w} {b:?}: angle count"))?;
            ensure(s.sign_case == case, || format!("{w} {b:?}: sign case {:?}", s.sign_case))?;
        }
    }
    Ok(format!("{} words x 2 branches, max residual {worst:.1e}", words.len()))
}

fn c5_product_formula() -> Outcome {
    let mut worst: f64 = 0.0;
    let words = random_words(10, 12, 55);
    for w in &words {
        for b in [Branch::Plus, Branch::Minus] {
            let s0 = sol_solution(w, b).map_err(|e| format!("{w}: {e}"))?;
            for f in linspace(-2.0, 2.0, 10) {
                let (s, _) = follow_from(&s0, s0.h_eps() * f.exp(), &PathOptions::default()).map_err(|e| format!("{w}: {e}"))?;
                let direct = s.h_eps().powf(s.z.len() as f64 / 2.0);
                let rel = (product_form_value(&s) / direct - 1.0).abs();
                worst = worst.max(rel);
                ensure(rel <= 1e-9, || format!("{w} {b:?}: relative error {rel:.1e}"))?;
            }
        }
    }
    Ok(format!("{} words x 20 points, max relative error {worst:.1e}", words.len()))
}

fn c6_parameterization() -> Outcome {
    let mut worst: f64 = 0.0;
    for w in [word("RL"), word("RRLLL")] {
        for b in [Branch::Plus, Branch::Minus] {
            for target in [0.1, 0.5, 2.0, 10.0] {
                let (s, trace) = follow_path_traced(&w, b, target, &PathOptions::default()).map_err(|e| format!("{w}: {e}"))?;
                worst = worst.max(s.residual);
                ensure(s.residual <= 1e-10 && (s.h_eps() / target - 1.0).abs() <= 1e-10, || {
                    format!("{w} {b:?} -> {target}: H = {}, residual {:.1e}", s.h_eps(), s.residual)
                })?;
                let up = trace.log_h.last() > trace.log_h.first();
                ensure(trace.log_h.windows(2).all(|p| if up { p[1] > p[0] } else { p[1] < p[0] }), || {
                    format!("{w} {b:?} -> {target}: H not monotone")
                })?;
            }
        }
    }
    Ok(format!("RL, RRLLL both branches, targets {{0.1, 0.5, 2, 10}} reached monotonically, max residual {worst:.1e}"))
}

fn c7_split_equivalence() -> Outcome {
    let mut r = rng(77);
    let tag = AlgebraTag::SPLIT;
    let mut worst: f64 = 0.0;
    for w in random_words(10, 10, 71) {
        let shift: f64 = r.random_range(-1.0..1.0);
        let mass: f64 = r.random_range(-2.0..-0.2);
        let path = |h: f64| follow_path(&w, Branch::Plus, h.exp()).map_err(|e| format!("{w}: {e}"));
        let (l, m) = (path(shift + mass)?, path(shift - mass)?);
        let (ls, ms) = (path(shift + mass + 0.05)?, path(shift - mass - 0.05)?);
        let seed: Vec<BNum> =
            ls.z.iter().zip(&ms.z).map(|(&a, &b)| unsplit(SplitPair::new(a, b), tag).expect("split tag")).collect();
        let target = unsplit(SplitPair::new(l.h_eps(), m.h_eps()), tag).expect("split tag");
        let c = Constraint { monomial: l.puncture_monomial(), target };
        let sys = build_triangulation(&w).system();
        let a = solve_gluing(&sys, &c, &seed, &SolveOptions::default()).map_err(|e| format!("{w}: {e}"))?;
        let d = solve_gluing_direct(&sys, &c, &seed, &SolveOptions::default()).map_err(|e| format!("{w}: {e}"))?;
        let diff = a.z.iter().zip(&d.z).map(|(x, y)| (*x - *y).max_abs()).fold(0.0, f64::max);
        worst = worst.max(diff);
        ensure(diff <= 1e-10, || format!("{w}: split and direct differ by {diff:.1e}"))?;
    }
    Ok(format!("10 random instances, max componentwise difference {worst:.1e}"))
}

fn c8_tachyons() -> Outcome {
    let mut worst: f64 = 0.0;
    let words = ["RL", "RLRL", "RRLRL"];
    for w in words.map(word) {
        for mass in [-0.25, -1.0, -4.0] {
            let t = tachyon(&w, Branch::Plus, mass).map_err(|e| format!("{w} {mass}: {e}"))?;
            ensure(t.ads.oriented && t.ads.residual <= 1e-9, || format!("{w} {mass}: not a valid oriented solution"))?;
            let CompletionKind::Tachyon(m) = t.completion.kind else {
                return Err(format!("{w} {mass}: classified as {:?}", t.completion.kind));
            };
            worst = worst.max((m - mass).abs());
            ensure((m - mass).abs() <= 1e-8, || format!("{w} {mass}: tachyon mass {m}"))?;
            ensure((t.completion.rotational_part - 2.0 * PI).abs() <= 1e-12, || {
                format!("{w} {mass}: rotational part {}", t.completion.rotational_part)
            })?;
        }
    }
    let rejected = matches!(tachyon(&word("RL"), Branch::Plus, 0.5), Err(Error::OrientationImpossible(_)));
    ensure(rejected, || "mass +0.5 accepted".into())?;
    Ok(format!("{} x masses {{-0.25, -1, -4}}: max |boost - mass| = {worst:.1e}, rotational part 2pi; mass +0.5 rejected", words.join(", ")))
}

fn c9_transition() -> Outcome {
    let (sys, b) = figure_eight();
    let h = b["H_l"].clone();
    let target = |t: f64| exp_imaginary(AlgebraTag::transition(t), -1.0);
    let seed = [(-0.6, 0.2), (1.6, 0.2)];
    let opts = SolveOptions::default();
    let path = transition_path(&sys, &h, &target, &seed, &linspace(-0.3, 0.3, 61), &opts).map_err(|e| e.to_string())?;
    ensure(path.samples.len() == 61, || format!("{} samples", path.samples.len()))?;
    let dt = 0.01;
    let mut worst_step: f64 = 0.0;
    for pair in path.samples.windows(2) {
        for j in 0..2 {
            worst_step = worst_step.max(pair[0].clifford[j].distance(pair[1].clifford[j]) / dt);
        }
    }
    ensure(worst_step <= 5.0, || format!("adjacent deviation {worst_step:.2} * dt"))?;
    let near = transition_path(&sys, &h, &target, &seed, &[-1e-3, 0.0, 1e-3], &opts).map_err(|e| e.to_string())?;
    let mut worst_near: f64 = 0.0;
    for s in [&near.samples[0], &near.samples[2]] {
        for j in 0..2 {
            worst_near = worst_near.max(s.clifford[j].distance(near.samples[1].clifford[j]));
        }
    }
    ensure(worst_near <= 1e-2, || format!("t = +-1e-3 samples {worst_near:.1e} from t = 0"))?;

    // Richardson extrapolation of (z(h) - z(0)) / h against the kernel tangent.
    let r5 = 5f64.sqrt();
    let z0 = vec![(1.0 - r5) / 2.0, (1.0 + r5) / 2.0];
    let v = tangent_of_system(&sys.equations[..1], &z0).map_err(|e| e.to_string())?;
    let fig8 = RealPoint { system: sys.clone(), boundary: h.clone(), z: z0, v: v.v.clone() };
    let rl = sol_solution(&word("RL"), Branch::Plus).map_err(|e| e.to_string())?;
    let rl_v = kernel_tangent(&log_jacobian(&word("RL"), &rl).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let mut worst_slope: f64 = 0.0;
    for geometry in [Geometry::H3, Geometry::Ads] {
        for (p, label) in [(fig8.clone(), "fig-8"), (RealPoint::from_solution(&rl, &rl_v), "RL")] {
            let d = |step: f64| -> Result<Vec<(f64, f64)>, String> {
                let s = if label == "RL" {
                    regenerate(&rl, &rl_v, geometry, step)
                } else {
                    regenerate_point(&p, geometry, step, &opts)
                }
                .map_err(|e| format!("{label} {geometry:?}: {e}"))?;
                Ok(s.z.iter().zip(&p.z).map(|(a, &b)| ((a.re - b) / step, a.im / step)).collect())
            };
            let (d1, d2) = (d(1e-2)?, d(5e-3)?);
            let scale = p.v.iter().map(|x| x.abs()).fold(0.0, f64::max);
            for j in 0..p.z.len() {
                let err = (2.0 * d2[j].0 - d1[j].0).abs().max((2.0 * d2[j].1 - d1[j].1 - p.v[j]).abs()) / scale;
                worst_slope = worst_slope.max(err);
            }
        }
    }
    ensure(worst_slope <= 1e-3, || format!("regeneration slope off by {worst_slope:.1e} relative"))?;
    Ok(format!(
        "61 samples on [-0.3, 0.3]: max adjacent deviation {worst_step:.2} * dt; t = +-1e-3 within {worst_near:.1e} of t = 0; Richardson slope error {worst_slope:.1e}"
    ))
}

fn c10_oracle() -> Outcome {
    let mut r = rng(10);
    let mut report = Vec::new();
    for tag in [AlgebraTag::COMPLEX, AlgebraTag::DUAL, AlgebraTag::SPLIT] {
        let (mut defined, mut valid) = (0, 0);
        for _ in 0..500 {
            let p = [(); 4].map(|_| random_point(&mut r, tag));
            let herm = simplex_valid_herm(&p);
            let expected = match cross_ratio(&p[0], &p[1], &p[2], &p[3]) {
                Ok(z) => shape_valid(tag, z),
                Err(Error::NoIdealTriangle) => false,
                Err(_) => continue,
            };
            defined += 1;
            valid += usize::from(herm);
            ensure(herm == expected, || format!("q = {}: disagreement at {p:?}", tag.q))?;
        }
        report.push(format!("q = {}: {defined} defined, {valid} valid", tag.q));
    }
    Ok(format!("500 tuples per regime, no disagreements ({})", report.join("; ")))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("figure-eight hyperbolic cone structures", c1_fig8_cones),
        ("figure-eight half-pipe structure", c2_fig8_half_pipe),
        ("kernel structure of the log Jacobian", c3_kernel_structure),
        ("Sol solutions", c4_sol_solutions),
        ("product formula for H(eps)", c5_product_formula),
        ("H(eps) parameterizes the component", c6_parameterization),
        ("AdS split equivalence", c7_split_equivalence),
        ("tachyon masses", c8_tachyons),
        ("transition continuity", c9_transition),
        ("Hermitian oracle equivalence", c10_oracle),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        let (status, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{status} [{:>2}] {name}: {detail} ({secs:.1}s)", k + 1);
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
