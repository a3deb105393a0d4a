//! HLT coset enumeration with coincidence processing.

use serde::{Deserialize, Serialize};

use super::presentation::{Alphabet, Presentation, Word};
use super::GroupError;

const NONE: usize = usize::MAX;

/// Default limit on the number of cosets defined during enumeration.
pub const DEFAULT_COSET_CAP: usize = 1_000_000;

/// A complete, standardized coset table: coset 0 is the subgroup and
/// cosets are numbered in breadth-first order over the generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CosetTable {
    pub index: usize,
    /// `action[g][c]` is the image of coset `c` under generator `g`.
    pub action: Vec<Vec<usize>>,
}

impl CosetTable {
    /// Builds a table from generator permutations, renumbering cosets
    /// breadth-first from `base`. Fails if the action is not transitive.
    pub fn from_action(action: Vec<Vec<usize>>, base: usize) -> Result<Self, GroupError> {
        let n = action.first().map_or(1, Vec::len);
        let inverse: Vec<Vec<usize>> = action
            .iter()
            .map(|perm| {
                let mut inv = vec![NONE; n];
                for (c, &d) in perm.iter().enumerate() {
                    inv[d] = c;
                }
                inv
            })
            .collect();
        if inverse.iter().flatten().any(|&x| x == NONE) {
            return Err(GroupError::NotAPermutation);
        }
        let mut order = vec![base];
        let mut number = vec![NONE; n];
        number[base] = 0;
        let mut i = 0;
        while i < order.len() {
            let c = order[i];
            i += 1;
            for g in 0..action.len() {
                for d in [action[g][c], inverse[g][c]] {
                    if number[d] == NONE {
                        number[d] = order.len();
                        order.push(d);
                    }
                }
            }
        }
        if order.len() != n {
            return Err(GroupError::NotTransitive);
        }
        let action = action
            .iter()
            .map(|perm| order.iter().map(|&c| number[perm[c]]).collect())
            .collect();
        Ok(CosetTable { index: n, action })
    }

    /// Rebased table that is least in row-major order; equal for
    /// conjugate subgroups.
    pub fn conjugacy_canonical(&self) -> CosetTable {
        (0..self.index)
            .map(|b| CosetTable::from_action(self.action.clone(), b).expect("rebasing a transitive table"))
            .min_by_key(|t| t.row_major())
            .expect("tables have at least one coset")
    }

    fn row_major(&self) -> Vec<usize> {
        (0..self.index).flat_map(|c| self.action.iter().map(move |perm| perm[c])).collect()
    }

    pub fn generators(&self) -> usize {
        self.action.len()
    }

    pub fn inverse_action(&self, g: usize) -> Vec<usize> {
        let mut inv = vec![0; self.index];
        for (c, &d) in self.action[g].iter().enumerate() {
            inv[d] = c;
        }
        inv
    }

    /// Image of coset `c` under a word.
    pub fn apply(&self, c: usize, word: &[(usize, i32)]) -> usize {
        let mut x = c;
        for &(g, e) in word {
            let inv;
            let perm = if e > 0 {
                &self.action[g]
            } else {
                inv = self.inverse_action(g);
                &inv
            };
            for _ in 0..e.unsigned_abs() {
                x = perm[x];
            }
        }
        x
    }

    /// Permutation of a word, as an image list.
    pub fn word_permutation(&self, word: &[(usize, i32)]) -> Vec<usize> {
        (0..self.index).map(|c| self.apply(c, word)).collect()
    }

    /// Whether every relator acts trivially.
    pub fn satisfies(&self, pres: &Presentation) -> bool {
        pres.relators.iter().all(|r| (0..self.index).all(|c| self.apply(c, r) == c))
    }

    /// Coset representatives along the breadth-first spanning tree.
    pub fn representatives(&self) -> Vec<Word> {
        let mut reps: Vec<Option<Word>> = vec![None; self.index];
        reps[0] = Some(Vec::new());
        let mut queue = vec![0];
        let mut i = 0;
        while i < queue.len() {
            let c = queue[i];
            i += 1;
            for g in 0..self.generators() {
                let inv = self.inverse_action(g);
                for (d, e) in [(self.action[g][c], 1), (inv[c], -1)] {
                    if reps[d].is_none() {
                        let mut w = reps[c].clone().unwrap();
                        w.push((g, e));
                        reps[d] = Some(w);
                        queue.push(d);
                    }
                }
            }
        }
        reps.into_iter().map(Option::unwrap).collect()
    }

    /// Schreier generators of the subgroup: `rep(c) g rep(c g)⁻¹` for every
    /// edge off the spanning tree, freely reduced.
    pub fn schreier_generators(&self, pres: &Presentation) -> Vec<Word> {
        let reps = self.representatives();
        let mut out = Vec::new();
        for g in 0..self.generators() {
            let involution = pres.is_involution(g);
            for c in 0..self.index {
                let d = self.action[g][c];
                if involution && d < c {
                    continue;
                }
                let mut w = reps[c].clone();
                w.push((g, 1));
                w.extend(super::presentation::inverse(&reps[d]));
                let w = free_reduce(&w, pres);
                if !w.is_empty() && !out.contains(&w) {
                    out.push(w);
                }
            }
        }
        out
    }
}

/// Free reduction, also cancelling squares of involutions.
fn free_reduce(word: &[(usize, i32)], pres: &Presentation) -> Word {
    let mut out: Word = Vec::new();
    for &(g, e) in word {
        let e = if pres.is_involution(g) { e.rem_euclid(2) } else { e };
        if e == 0 {
            continue;
        }
        match out.last_mut() {
            Some((h, f)) if *h == g => {
                *f += e;
                if pres.is_involution(g) {
                    *f = f.rem_euclid(2);
                }
                if *f == 0 {
                    out.pop();
                }
            }
            _ => out.push((g, e)),
        }
    }
    out
}

struct Enumerator<'a> {
    alphabet: &'a Alphabet,
    table: Vec<Vec<usize>>,
    parent: Vec<usize>,
    live: Vec<bool>,
    cap: usize,
    queue: Vec<usize>,
}

impl Enumerator<'_> {
    fn rep(&mut self, mut c: usize) -> usize {
        let mut root = c;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[c] != root {
            let next = self.parent[c];
            self.parent[c] = root;
            c = next;
        }
        root
    }

    fn define(&mut self, c: usize, x: usize) -> Result<usize, GroupError> {
        if self.table.len() >= self.cap {
            return Err(GroupError::CapExceeded { cap: self.cap });
        }
        let d = self.table.len();
        self.table.push(vec![NONE; self.alphabet.len]);
        self.parent.push(d);
        self.live.push(true);
        self.table[c][x] = d;
        self.table[d][self.alphabet.inv[x]] = c;
        Ok(d)
    }

    fn merge(&mut self, a: usize, b: usize) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (keep, kill) = (a.min(b), a.max(b));
        self.parent[kill] = keep;
        self.live[kill] = false;
        self.queue.push(kill);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let dead = self.queue[i];
            i += 1;
            for x in 0..self.alphabet.len {
                let d = self.table[dead][x];
                if d == NONE {
                    continue;
                }
                let xi = self.alphabet.inv[x];
                self.table[d][xi] = NONE;
                let mu = self.rep(dead);
                let nu = self.rep(d);
                if self.table[mu][x] != NONE {
                    let t = self.table[mu][x];
                    self.merge(nu, t);
                } else if self.table[nu][xi] != NONE {
                    let t = self.table[nu][xi];
                    self.merge(mu, t);
                } else {
                    self.table[mu][x] = nu;
                    self.table[nu][xi] = mu;
                }
            }
        }
    }

    fn scan_and_fill(&mut self, c: usize, word: &[usize]) -> Result<(), GroupError> {
        let inv = &self.alphabet.inv;
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0isize, word.len() as isize - 1);
        loop {
            while i <= j && self.table[f][word[i as usize]] != NONE {
                f = self.table[f][word[i as usize]];
                i += 1;
            }
            if i > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i && self.table[b][inv[word[j as usize]]] != NONE {
                b = self.table[b][inv[word[j as usize]]];
                j -= 1;
            }
            if j < i {
                self.coincidence(f, b);
                return Ok(());
            }
            if i == j {
                let x = word[i as usize];
                self.table[f][x] = b;
                self.table[b][inv[x]] = f;
                return Ok(());
            }
            self.define(f, word[i as usize])?;
        }
    }
}

/// Enumerates the cosets of the subgroup generated by `subgroup` words.
pub fn coset_enumerate(
    pres: &Presentation,
    subgroup: &[Word],
    cap: usize,
) -> Result<CosetTable, GroupError> {
    let alphabet = pres.alphabet();
    let mut e = Enumerator {
        alphabet: &alphabet,
        table: vec![vec![NONE; alphabet.len]],
        parent: vec![0],
        live: vec![true],
        cap: cap.max(1),
        queue: Vec::new(),
    };
    for w in subgroup {
        let letters = alphabet.letters(w);
        e.scan_and_fill(0, &letters)?;
    }
    let mut c = 0;
    while c < e.table.len() {
        if e.live[c] {
            for r in &alphabet.relators {
                e.scan_and_fill(c, r)?;
                if !e.live[c] {
                    break;
                }
            }
            if e.live[c] {
                for x in 0..alphabet.len {
                    if e.table[c][x] == NONE {
                        e.define(c, x)?;
                    }
                }
            }
        }
        c += 1;
    }
    let live: Vec<usize> = (0..e.table.len()).filter(|&c| e.live[c]).collect();
    let mut number = vec![NONE; e.table.len()];
    for (i, &c) in live.iter().enumerate() {
        number[c] = i;
    }
    let action = (0..pres.generators)
        .map(|g| live.iter().map(|&c| number[e.table[c][alphabet.forward[g]]]).collect())
        .collect();
    CosetTable::from_action(action, 0)
}
