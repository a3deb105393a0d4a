use serde::{Deserialize, Serialize};

use super::GroupError;

/// A word as `(generator, exponent)` syllables.
pub type Word = Vec<(usize, i32)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleParams {
    pub p: u64,
    pub q: u64,
    pub r: u64,
    pub extended: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub generators: usize,
    pub relators: Vec<Word>,
    /// Set when the presentation is a (extended) triangle group.
    pub triangle: Option<TriangleParams>,
}

/// Free and cyclic reduction of a word.
pub fn reduce(word: &[(usize, i32)]) -> Word {
    let mut out: Word = Vec::new();
    for &(g, e) in word {
        if e == 0 {
            continue;
        }
        match out.last_mut() {
            Some((h, f)) if *h == g => {
                *f += e;
                if *f == 0 {
                    out.pop();
                }
            }
            _ => out.push((g, e)),
        }
    }
    while out.len() > 1 && out[0].0 == out[out.len() - 1].0 {
        let (_, e) = out.pop().unwrap();
        out[0].1 += e;
        if out[0].1 == 0 {
            out.remove(0);
        }
    }
    out
}

pub fn inverse(word: &[(usize, i32)]) -> Word {
    word.iter().rev().map(|&(g, e)| (g, -e)).collect()
}

impl Presentation {
    pub fn new(generators: usize, relators: Vec<Word>) -> Result<Self, GroupError> {
        let mut reduced = Vec::with_capacity(relators.len());
        for r in relators {
            if let Some(&(g, _)) = r.iter().find(|(g, _)| *g >= generators) {
                return Err(GroupError::UnknownGenerator(g));
            }
            let w = reduce(&r);
            if !w.is_empty() {
                reduced.push(w);
            }
        }
        Ok(Presentation { generators, relators: reduced, triangle: None })
    }

    /// Whether `g` squares to the identity by a relator.
    pub fn is_involution(&self, g: usize) -> bool {
        self.relators.iter().any(|r| r.len() == 1 && r[0].0 == g && r[0].1.abs() == 2)
    }

    pub(crate) fn alphabet(&self) -> Alphabet {
        Alphabet::new(self)
    }
}

/// `⟨r0, r1, r2 | r_i², (r0 r1)^p, (r1 r2)^q, (r2 r0)^r⟩` when extended,
/// otherwise `⟨x, y | x^p, y^q, (x y)^r⟩`.
pub fn triangle_presentation(p: u64, q: u64, r: u64, extended: bool) -> Result<Presentation, GroupError> {
    if p < 2 || q < 2 || r < 2 {
        return Err(GroupError::TriangleDomain { p, q, r });
    }
    let pw = |w: Word, n: u64| -> Word { w.iter().cycle().take(w.len() * n as usize).copied().collect() };
    let mut pres = if extended {
        Presentation::new(
            3,
            vec![
                vec![(0, 2)],
                vec![(1, 2)],
                vec![(2, 2)],
                pw(vec![(0, 1), (1, 1)], p),
                pw(vec![(1, 1), (2, 1)], q),
                pw(vec![(2, 1), (0, 1)], r),
            ],
        )?
    } else {
        Presentation::new(
            2,
            vec![vec![(0, p as i32)], vec![(1, q as i32)], pw(vec![(0, 1), (1, 1)], r)],
        )?
    };
    pres.triangle = Some(TriangleParams { p, q, r, extended });
    Ok(pres)
}

/// Letters of the coset tables: one per involutory generator, two
/// (generator and inverse) otherwise.
#[derive(Debug, Clone)]
pub(crate) struct Alphabet {
    pub len: usize,
    pub inv: Vec<usize>,
    /// letter for `(generator, +1)` and `(generator, -1)`
    pub forward: Vec<usize>,
    pub backward: Vec<usize>,
    /// relators as letter sequences, skipping those implied by involutions
    pub relators: Vec<Vec<usize>>,
}

impl Alphabet {
    fn new(pres: &Presentation) -> Self {
        let mut inv = Vec::new();
        let mut forward = Vec::new();
        let mut backward = Vec::new();
        for g in 0..pres.generators {
            let a = inv.len();
            if pres.is_involution(g) {
                inv.push(a);
                forward.push(a);
                backward.push(a);
            } else {
                inv.push(a + 1);
                inv.push(a);
                forward.push(a);
                backward.push(a + 1);
            }
        }
        let mut alphabet = Alphabet { len: inv.len(), inv, forward, backward, relators: Vec::new() };
        alphabet.relators = pres
            .relators
            .iter()
            .filter(|r| !(r.len() == 1 && r[0].1.abs() == 2 && pres.is_involution(r[0].0)))
            .map(|r| alphabet.letters(r))
            .collect();
        alphabet
    }

    pub fn letters(&self, word: &[(usize, i32)]) -> Vec<usize> {
        let mut out = Vec::new();
        for &(g, e) in word {
            let l = if e > 0 { self.forward[g] } else { self.backward[g] };
            out.extend(std::iter::repeat(l).take(e.unsigned_abs() as usize));
        }
        out
    }
}
