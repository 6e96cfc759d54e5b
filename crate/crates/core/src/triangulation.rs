//! Monodromy triangulations of punctured torus bundles, their edge equations
//! and boundary monomials, stored as exponent maps over the z/x/y slots.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::BNum;
use crate::error::{Error, Result};
use crate::projective::edge_shapes;
use crate::word::{Letter, LRWord, TetLabel};

/// Edge pair of a tetrahedron: z, x = (z-1)/z or y = 1/(1-z).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    Z,
    X,
    Y,
}

impl Slot {
    pub fn as_char(self) -> char {
        match self {
            Slot::Z => 'z',
            Slot::X => 'x',
            Slot::Y => 'y',
        }
    }

    fn parse(c: &str) -> Result<Slot> {
        match c {
            "z" => Ok(Slot::Z),
            "x" => Ok(Slot::X),
            "y" => Ok(Slot::Y),
            _ => Err(Error::InvalidInput(format!("unknown slot {c:?}"))),
        }
    }

    /// Value of this slot for a real shape z.
    pub fn real_value(self, z: f64) -> f64 {
        match self {
            Slot::Z => z,
            Slot::X => (z - 1.0) / z,
            Slot::Y => 1.0 / (1.0 - z),
        }
    }

    /// d log(slot) / d log z.
    pub fn dlog_dlogz(self, z: f64) -> f64 {
        match self {
            Slot::Z => 1.0,
            Slot::X => 1.0 / (z - 1.0),
            Slot::Y => z / (1.0 - z),
        }
    }

    /// d log(slot) / dz over B.
    pub fn dlog_dz(self, z: BNum) -> Result<BNum> {
        Ok(match self {
            Slot::Z => z.inv()?,
            Slot::X => (z * (z + -1.0)).inv()?,
            Slot::Y => (1.0 - z).inv()?,
        })
    }
}

/// sign * prod over (tet, slot) of slot^exponent; tets are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ShapeMonomial {
    pub sign: i8,
    pub exponents: BTreeMap<(usize, Slot), i32>,
}

impl ShapeMonomial {
    pub fn one() -> Self {
        ShapeMonomial { sign: 1, exponents: BTreeMap::new() }
    }

    pub fn from_terms(sign: i8, terms: &[(usize, Slot, i32)]) -> Self {
        let mut m = ShapeMonomial { sign, exponents: BTreeMap::new() };
        for &(t, s, e) in terms {
            m.add(t, s, e);
        }
        m
    }

    pub fn add(&mut self, tet: usize, slot: Slot, e: i32) {
        let v = self.exponents.entry((tet, slot)).or_insert(0);
        *v += e;
        if *v == 0 {
            self.exponents.remove(&(tet, slot));
        }
    }

    pub fn mul(&self, other: &ShapeMonomial) -> ShapeMonomial {
        let mut m = self.clone();
        m.sign *= other.sign;
        for (&(t, s), &e) in &other.exponents {
            m.add(t, s, e);
        }
        m
    }

    pub fn pow(&self, k: i32) -> ShapeMonomial {
        let mut m = ShapeMonomial::one();
        if k % 2 != 0 {
            m.sign = self.sign;
        }
        for (&(t, s), &e) in &self.exponents {
            m.add(t, s, e * k);
        }
        m
    }

    pub fn inverse(&self) -> ShapeMonomial {
        self.pow(-1)
    }

    pub fn max_tet(&self) -> Option<usize> {
        self.exponents.keys().map(|(t, _)| *t).max()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, Slot, i32)> + '_ {
        self.exponents.iter().map(|(&(t, s), &e)| (t, s, e))
    }

    /// Exponents of z, 1 - z and z per tet after x = -(1-z)/z, y = (1-z)^{-1}.
    /// Returns (sign, map tet -> (exp of z, exp of 1 - z)).
    pub fn reduce(&self) -> (i8, BTreeMap<usize, (i32, i32)>) {
        let mut sign = self.sign;
        let mut out: BTreeMap<usize, (i32, i32)> = BTreeMap::new();
        for (t, s, e) in self.terms() {
            let entry = out.entry(t).or_insert((0, 0));
            match s {
                Slot::Z => entry.0 += e,
                Slot::X => {
                    entry.0 -= e;
                    entry.1 += e;
                    if e % 2 != 0 {
                        sign = -sign;
                    }
                }
                Slot::Y => entry.1 -= e,
            }
        }
        out.retain(|_, v| *v != (0, 0));
        (sign, out)
    }

    /// Value at real shapes.
    pub fn eval_real(&self, z: &[f64]) -> f64 {
        self.terms()
            .map(|(t, s, e)| s.real_value(z[t]).powi(e))
            .product::<f64>()
            * self.sign as f64
    }
}

/// Value of a monomial at shapes over B. The x and y slots come from
/// edge_shapes.
pub fn evaluate_monomial(m: &ShapeMonomial, z: &[BNum]) -> Result<BNum> {
    let tag = z
        .first()
        .map(|w| w.tag)
        .ok_or_else(|| Error::InvalidInput("empty shape vector".into()))?;
    let mut acc = tag.one().scale(m.sign as f64);
    for (t, s, e) in m.terms() {
        let zt = *z
            .get(t)
            .ok_or_else(|| Error::InvalidInput(format!("monomial refers to tetrahedron {}", t + 1)))?;
        let err = Error::Evaluation { tet: t + 1, slot: s.as_char() };
        let (zz, y, x) = match s {
            Slot::Z => (zt, zt, zt),
            _ => edge_shapes(zt).map_err(|_| err.clone())?,
        };
        let base = match s {
            Slot::Z => zz,
            Slot::X => x,
            Slot::Y => y,
        };
        acc = acc * base.powi(e).map_err(|_| err.clone())?;
    }
    Ok(acc)
}

/// A set of edge equations, each required to equal 1.
#[derive(Debug, Clone, PartialEq)]
pub struct GluingSystem {
    pub n_tets: usize,
    pub equations: Vec<ShapeMonomial>,
}

impl GluingSystem {
    pub fn new(n_tets: usize, equations: Vec<ShapeMonomial>) -> Result<Self> {
        for m in &equations {
            if let Some(t) = m.max_tet() {
                if t >= n_tets {
                    return Err(Error::InvalidInput(format!(
                        "equation refers to tetrahedron {} of {}",
                        t + 1,
                        n_tets
                    )));
                }
            }
        }
        Ok(GluingSystem { n_tets, equations })
    }

    /// Formal product of all equations, reduced to z and 1 - z.
    pub fn product_is_trivial(&self) -> bool {
        let p = self.equations.iter().fold(ShapeMonomial::one(), |acc, m| acc.mul(m));
        let (sign, red) = p.reduce();
        sign == 1 && red.is_empty()
    }
}

/// Which component of the real variety a solution lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignCase {
    /// x_1 < 0.
    Case1,
    /// y_1 < 0.
    Case2,
}

impl SignCase {
    /// The slot that is negative at tetrahedra with this label.
    pub fn negative_slot(self, label: TetLabel) -> Slot {
        match (self, label) {
            (SignCase::Case1, TetLabel::LRHinge | TetLabel::LL) => Slot::X,
            (SignCase::Case1, TetLabel::RLHinge | TetLabel::RR) => Slot::Y,
            (SignCase::Case2, TetLabel::RLHinge | TetLabel::LL) => Slot::X,
            (SignCase::Case2, TetLabel::LRHinge | TetLabel::RR) => Slot::Y,
        }
    }

    pub fn positive_slot(self, label: TetLabel) -> Slot {
        match self.negative_slot(label) {
            Slot::X => Slot::Y,
            _ => Slot::X,
        }
    }
}

/// Boundary monomials of a monodromy triangulation.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryMonomials {
    /// (z_N x_1 z_2^{-1} y_1^{-1})^2.
    pub h_eps: ShapeMonomial,
    /// Product form of H(eps)^{N/2}, oriented, per sign case.
    pub product_form_case1: ShapeMonomial,
    pub product_form_case2: ShapeMonomial,
}

impl BoundaryMonomials {
    /// The puncture monomial oriented so that it decreases along the positive
    /// tangent direction: H(eps) in case 1 and its inverse in case 2.
    pub fn oriented(&self, case: SignCase) -> ShapeMonomial {
        match case {
            SignCase::Case1 => self.h_eps.clone(),
            SignCase::Case2 => self.h_eps.inverse(),
        }
    }

    pub fn product_form(&self, case: SignCase) -> &ShapeMonomial {
        match case {
            SignCase::Case1 => &self.product_form_case1,
            SignCase::Case2 => &self.product_form_case2,
        }
    }
}

/// Monodromy triangulation of a punctured torus bundle.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealTriangulation {
    pub word: LRWord,
    pub n_tets: usize,
    pub labels: Vec<TetLabel>,
    /// Edge classes as (tet, slot, exponent) lists; edge j gives equation g_j.
    pub edges: Vec<Vec<(usize, Slot, i32)>>,
    pub boundary: BoundaryMonomials,
}

impl IdealTriangulation {
    pub fn system(&self) -> GluingSystem {
        GluingSystem {
            n_tets: self.n_tets,
            equations: self
                .edges
                .iter()
                .map(|e| ShapeMonomial::from_terms(1, e))
                .collect(),
        }
    }
}

fn cyc(j: isize, n: usize) -> usize {
    (j - 1).rem_euclid(n as isize) as usize
}

/// Edge classes g_1..g_N as (tet, slot, exponent) lists with 0-based tets.
fn edge_classes(w: &LRWord) -> Vec<Vec<(usize, Slot, i32)>> {
    let n = w.len();
    let mut eqs: Vec<Vec<(usize, Slot, i32)>> = vec![Vec::new(); n];
    for j in w.hinges() {
        let j = j as isize;
        let letter = w.letter(j);
        let mut k = j;
        while w.letter(k + 1) == letter {
            k += 1;
        }
        let (fan, four) = match letter {
            Letter::R => (Slot::X, Slot::Y),
            Letter::L => (Slot::Y, Slot::X),
        };
        let g = &mut eqs[cyc(j, n)];
        g.push((cyc(j - 1, n), Slot::Z, 1));
        for i in j..=k + 1 {
            g.push((cyc(i, n), fan, 2));
        }
        g.push((cyc(k + 2, n), Slot::Z, 1));
        for q in j + 1..=k {
            eqs[cyc(q, n)] = vec![
                (cyc(q - 1, n), Slot::Z, 1),
                (cyc(q, n), four, 2),
                (cyc(q + 1, n), Slot::Z, 1),
            ];
        }
    }
    eqs
}

pub fn gluing_equations(w: &LRWord) -> Vec<ShapeMonomial> {
    edge_classes(w)
        .iter()
        .map(|e| ShapeMonomial::from_terms(1, e))
        .collect()
}

/// H(eps)^{N/2} = prod_p z_{1+M_{p+1}}^{-s_p} prod_{j=1+M_p}^{M_{p+1}} beta_j^{2M_p - 2j},
/// where beta is the positive non-z shape. Case 2 reads the reversed word with
/// tets renumbered i -> 2 - i.
fn product_form(w: &LRWord, case: SignCase) -> ShapeMonomial {
    let n = w.len();
    let letters: Vec<Letter> = match case {
        SignCase::Case1 => w.letters().to_vec(),
        SignCase::Case2 => w.reversed_letters(),
    };
    let tet_of = |i: isize| -> usize {
        match case {
            SignCase::Case1 => cyc(i, n),
            SignCase::Case2 => cyc(2 - i, n),
        }
    };
    let mut blocks: Vec<usize> = Vec::new();
    let mut prev = None;
    for &l in &letters {
        if Some(l) == prev {
            *blocks.last_mut().unwrap() += 1;
        } else {
            blocks.push(1);
        }
        prev = Some(l);
    }
    let mut hinge = vec![1isize];
    for s in &blocks {
        hinge.push(hinge.last().unwrap() + *s as isize);
    }
    let mut m = ShapeMonomial::one();
    for (p, &s) in blocks.iter().enumerate() {
        let (mp, mnext) = (hinge[p], hinge[p + 1]);
        m.add(tet_of(1 + mnext), Slot::Z, -(s as i32));
        for j in 1 + mp..=mnext {
            let t = tet_of(j);
            let beta = case.positive_slot(w.label(t + 1));
            m.add(t, beta, (2 * mp - 2 * j) as i32);
        }
    }
    m
}

pub fn boundary_monomials(w: &LRWord) -> BoundaryMonomials {
    let n = w.len();
    let h = ShapeMonomial::from_terms(
        1,
        &[(n - 1, Slot::Z, 2), (0, Slot::X, 2), (1 % n, Slot::Z, -2), (0, Slot::Y, -2)],
    );
    BoundaryMonomials {
        h_eps: h,
        product_form_case1: product_form(w, SignCase::Case1),
        product_form_case2: product_form(w, SignCase::Case2),
    }
}

pub fn build_triangulation(w: &LRWord) -> IdealTriangulation {
    let n = w.len();
    IdealTriangulation {
        word: w.clone(),
        n_tets: n,
        labels: (1..=n).map(|j| w.label(j)).collect(),
        edges: edge_classes(w),
        boundary: boundary_monomials(w),
    }
}

/// The two-tetrahedron figure-eight knot complement with its longitude and
/// meridian monomials H(l) = z1^2 (1-z1)^2 and H(m) = z2 (1-z1).
pub fn figure_eight() -> (GluingSystem, BTreeMap<String, ShapeMonomial>) {
    let eqs = vec![
        ShapeMonomial::from_terms(1, &[(0, Slot::Z, 2), (0, Slot::X, 1), (1, Slot::Z, 2), (1, Slot::X, 1)]),
        ShapeMonomial::from_terms(1, &[(0, Slot::Y, 2), (0, Slot::X, 1), (1, Slot::Y, 2), (1, Slot::X, 1)]),
    ];
    let mut boundary = BTreeMap::new();
    boundary.insert("H_l".to_string(), ShapeMonomial::from_terms(1, &[(0, Slot::Z, 2), (0, Slot::Y, -2)]));
    boundary.insert("H_m".to_string(), ShapeMonomial::from_terms(1, &[(1, Slot::Z, 1), (0, Slot::Y, -1)]));
    (GluingSystem { n_tets: 2, equations: eqs }, boundary)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonomialJson {
    pub sign: i8,
    pub exponents: BTreeMap<String, i32>,
}

impl From<&ShapeMonomial> for MonomialJson {
    fn from(m: &ShapeMonomial) -> Self {
        MonomialJson {
            sign: m.sign,
            exponents: m
                .terms()
                .map(|(t, s, e)| (format!("{}.{}", t + 1, s.as_char()), e))
                .collect(),
        }
    }
}

impl TryFrom<&MonomialJson> for ShapeMonomial {
    type Error = Error;
    fn try_from(j: &MonomialJson) -> Result<Self> {
        if j.sign != 1 && j.sign != -1 {
            return Err(Error::InvalidInput(format!("sign must be +1 or -1, got {}", j.sign)));
        }
        let mut m = ShapeMonomial { sign: j.sign, exponents: BTreeMap::new() };
        for (k, &e) in &j.exponents {
            let (t, s) = k
                .split_once('.')
                .ok_or_else(|| Error::InvalidInput(format!("bad slot key {k:?}")))?;
            let t: usize = t
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad tetrahedron index in {k:?}")))?;
            if t == 0 {
                return Err(Error::InvalidInput("tetrahedron indices start at 1".into()));
            }
            m.add(t - 1, Slot::parse(s)?, e);
        }
        Ok(m)
    }
}

/// On-disk form of a triangulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriangulationFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word: Option<String>,
    pub n_tets: usize,
    pub equations: Vec<MonomialJson>,
    #[serde(default)]
    pub boundary: BTreeMap<String, MonomialJson>,
}

impl TriangulationFile {
    pub fn from_triangulation(t: &IdealTriangulation) -> Self {
        let mut boundary = BTreeMap::new();
        boundary.insert("H_eps".to_string(), MonomialJson::from(&t.boundary.h_eps));
        boundary.insert(
            "H_eps_product_case1".to_string(),
            MonomialJson::from(&t.boundary.product_form_case1),
        );
        boundary.insert(
            "H_eps_product_case2".to_string(),
            MonomialJson::from(&t.boundary.product_form_case2),
        );
        TriangulationFile {
            word: Some(t.word.to_string()),
            n_tets: t.n_tets,
            equations: t.system().equations.iter().map(MonomialJson::from).collect(),
            boundary,
        }
    }

    pub fn from_system(sys: &GluingSystem, boundary: &BTreeMap<String, ShapeMonomial>) -> Self {
        TriangulationFile {
            word: None,
            n_tets: sys.n_tets,
            equations: sys.equations.iter().map(MonomialJson::from).collect(),
            boundary: boundary.iter().map(|(k, m)| (k.clone(), MonomialJson::from(m))).collect(),
        }
    }

    pub fn system(&self) -> Result<GluingSystem> {
        let eqs = self
            .equations
            .iter()
            .map(ShapeMonomial::try_from)
            .collect::<Result<Vec<_>>>()?;
        GluingSystem::new(self.n_tets, eqs)
    }

    pub fn boundary_monomial(&self, name: &str) -> Result<ShapeMonomial> {
        let j = self
            .boundary
            .get(name)
            .ok_or_else(|| Error::InvalidInput(format!("no boundary monomial named {name:?}")))?;
        ShapeMonomial::try_from(j)
    }
}
