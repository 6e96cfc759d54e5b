//! Words in R = [[1,1],[0,1]] and L = [[1,0],[1,1]] and the factorization of
//! Anosov matrices into such words.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    R,
    L,
}

impl Letter {
    pub fn matrix(self) -> Mat2 {
        match self {
            Letter::R => [[1, 1], [0, 1]],
            Letter::L => [[1, 0], [1, 1]],
        }
    }

    fn rank(self) -> u8 {
        match self {
            Letter::R => 0,
            Letter::L => 1,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::R => 'R',
            Letter::L => 'L',
        }
    }
}

pub type Mat2 = [[i128; 2]; 2];

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
        [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
    ]
}

const IDENTITY: Mat2 = [[1, 0], [0, 1]];

/// Kind of a tetrahedron, read from the letters on either side of it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TetLabel {
    RR,
    LL,
    /// R followed by L.
    RLHinge,
    /// L followed by R.
    LRHinge,
}

/// A cyclic word in R and L containing both letters, stored in canonical
/// rotation: the least rotation under R < L.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LRWord {
    letters: Vec<Letter>,
}

impl LRWord {
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        if !letters.contains(&Letter::R) || !letters.contains(&Letter::L) {
            return Err(Error::InvalidWord("word must contain both R and L".into()));
        }
        let n = letters.len();
        let best = (0..n)
            .map(|i| {
                let mut r = letters[i..].to_vec();
                r.extend_from_slice(&letters[..i]);
                r
            })
            .min_by(|a, b| {
                let ka: Vec<u8> = a.iter().map(|l| l.rank()).collect();
                let kb: Vec<u8> = b.iter().map(|l| l.rank()).collect();
                ka.cmp(&kb)
            })
            .expect("nonempty word");
        Ok(LRWord { letters: best })
    }

    /// R^{m1} L^{n1} ... from block lengths, starting with R.
    pub fn from_blocks(blocks: &[usize]) -> Result<Self> {
        if blocks.len() < 2 || blocks.len() % 2 != 0 || blocks.contains(&0) {
            return Err(Error::InvalidWord("need an even number of positive block lengths".into()));
        }
        let mut letters = Vec::new();
        for (p, &s) in blocks.iter().enumerate() {
            let l = if p % 2 == 0 { Letter::R } else { Letter::L };
            letters.extend(std::iter::repeat_n(l, s));
        }
        LRWord::new(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Letter j, 1-based and cyclic.
    pub fn letter(&self, j: isize) -> Letter {
        let n = self.letters.len() as isize;
        self.letters[(j - 1).rem_euclid(n) as usize]
    }

    /// Block lengths s_1..s_K; the first block is R.
    pub fn blocks(&self) -> Vec<usize> {
        let mut s: Vec<usize> = Vec::new();
        let mut prev = None;
        for &l in &self.letters {
            if Some(l) == prev {
                *s.last_mut().unwrap() += 1;
            } else {
                s.push(1);
            }
            prev = Some(l);
        }
        s
    }

    /// 1-based hinge indices M_p = 1 + s_1 + ... + s_{p-1}.
    pub fn hinges(&self) -> Vec<usize> {
        let mut m = vec![1];
        let mut acc = 1;
        let blocks = self.blocks();
        for s in &blocks[..blocks.len() - 1] {
            acc += s;
            m.push(acc);
        }
        m
    }

    /// Label of tetrahedron j (1-based): letters j-1 and j.
    pub fn label(&self, j: usize) -> TetLabel {
        match (self.letter(j as isize - 1), self.letter(j as isize)) {
            (Letter::R, Letter::R) => TetLabel::RR,
            (Letter::L, Letter::L) => TetLabel::LL,
            (Letter::R, Letter::L) => TetLabel::RLHinge,
            (Letter::L, Letter::R) => TetLabel::LRHinge,
        }
    }

    /// Product of the first s letters.
    pub fn prefix_matrix(&self, s: usize) -> Mat2 {
        self.letters[..s].iter().fold(IDENTITY, |acc, l| mat_mul(&acc, &l.matrix()))
    }

    pub fn matrix(&self) -> Mat2 {
        self.prefix_matrix(self.letters.len())
    }

    pub fn trace(&self) -> i128 {
        let m = self.matrix();
        m[0][0] + m[1][1]
    }

    /// The word read backwards, as a plain letter sequence (not canonicalized).
    pub fn reversed_letters(&self) -> Vec<Letter> {
        self.letters.iter().rev().copied().collect()
    }
}

impl fmt::Display for LRWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for LRWord {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .trim()
            .chars()
            .map(|c| match c {
                'R' | 'r' => Ok(Letter::R),
                'L' | 'l' => Ok(Letter::L),
                other => Err(Error::InvalidWord(format!("unexpected character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        LRWord::new(letters)
    }
}

fn isqrt(n: i128) -> i128 {
    let mut s = (n as f64).sqrt() as i128;
    while s * s > n {
        s -= 1;
    }
    while (s + 1) * (s + 1) <= n {
        s += 1;
    }
    s
}

/// Factor an Anosov matrix [[a, b], [c, d]] as a cyclic RL-word, using the
/// periodic continued fraction of its expanding fixed point.
pub fn factor_anosov(m: [[i64; 2]; 2]) -> Result<LRWord> {
    let [[a, b], [c, d]] = m.map(|r| r.map(|x| x as i128));
    let det = a * d - b * c;
    if det != 1 {
        return Err(Error::InvalidMatrix(det as i64));
    }
    let tr = a + d;
    if tr.abs() <= 2 {
        return Err(Error::NotAnosov(tr as i64));
    }
    let (a, d, c) = if tr < 0 { (-a, -d, -c) } else { (a, d, c) };
    let tr = tr.abs();
    let disc = tr * tr - 4;
    let s = isqrt(disc);
    // x = (p + sqrt(disc)) / q; q divides disc - p^2 = 4bc.
    let (mut p, mut q) = (a - d, 2 * c);
    let mut seen: HashMap<(i128, i128), usize> = HashMap::new();
    let mut quotients: Vec<i128> = Vec::new();
    let (start, period) = loop {
        if let Some(&start) = seen.get(&(p, q)) {
            break (start, quotients[start..].to_vec());
        }
        seen.insert((p, q), quotients.len());
        let k = if q > 0 { (p + s).div_euclid(q) } else { (-p - s - 1).div_euclid(-q) };
        quotients.push(k);
        p = k * q - p;
        q = (disc - p * p) / q;
    };
    let mut blocks: Vec<usize> = period.iter().map(|&k| k as usize).collect();
    if blocks.len() % 2 == 1 {
        blocks.extend_from_slice(&period.iter().map(|&k| k as usize).collect::<Vec<_>>());
    }
    // Even partial quotients count R's, odd ones L's.
    if start % 2 == 1 {
        blocks.rotate_left(1);
    }
    let base = LRWord::from_blocks(&blocks)?;
    let mut letters = base.letters.clone();
    for _ in 0..64 {
        let w = LRWord::new(letters.clone())?;
        let t = w.trace();
        if t == tr {
            return Ok(w);
        }
        if t > tr {
            break;
        }
        letters.extend_from_slice(&base.letters);
    }
    Err(Error::InvalidInput("continued fraction period does not close up".into()))
}

/// Parse "a,b,c,d" (row-major).
pub fn parse_matrix(s: &str) -> Result<[[i64; 2]; 2]> {
    let v = s
        .split(',')
        .map(|x| x.trim().parse::<i64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| Error::InvalidInput(format!("matrix entries: {e}")))?;
    if v.len() != 4 {
        return Err(Error::InvalidInput("matrix needs four entries a,b,c,d".into()));
    }
    Ok([[v[0], v[1]], [v[2], v[3]]])
}
