//! Low-index subgroups by backtracking over partial coset tables.
//!
//! Tables are filled at the first undefined entry in row-major order, so
//! every partial table is standard. Relator cycles are scanned after each
//! assignment (Felsch-style) to force deductions or detect conflicts. A
//! branch is dropped when some rebasing of the partial table is already
//! lexicographically smaller, which leaves one table per conjugacy class.

use super::enumerate::CosetTable;
use super::presentation::{Alphabet, Presentation};
use super::GroupError;

const NONE: usize = usize::MAX;

/// Default bound on search nodes.
pub const DEFAULT_NODE_CAP: u64 = 200_000_000;

/// A word whose powers below `order` must act without fixed points.
#[derive(Debug, Clone)]
pub struct TorsionWord {
    pub letters: Vec<usize>,
    pub order: usize,
}

pub(crate) struct LowIndex<'a> {
    alphabet: &'a Alphabet,
    index: usize,
    width: usize,
    table: Vec<usize>,
    defined: usize,
    trail: Vec<usize>,
    /// rotations of relators, grouped by first letter
    rotations: Vec<Vec<Vec<usize>>>,
    torsion: Vec<TorsionWord>,
    queue: Vec<(usize, usize)>,
    nodes: u64,
    node_cap: u64,
    pub found: Vec<CosetTable>,
    generators: usize,
    pub(crate) prune_conjugates: bool,
}

impl<'a> LowIndex<'a> {
    pub fn new(
        pres: &Presentation,
        alphabet: &'a Alphabet,
        index: usize,
        torsion: Vec<TorsionWord>,
        node_cap: u64,
    ) -> Self {
        let width = alphabet.len;
        let mut rotations = vec![Vec::new(); width];
        for r in &alphabet.relators {
            for k in 0..r.len() {
                let rot: Vec<usize> = r[k..].iter().chain(&r[..k]).copied().collect();
                if !rotations[rot[0]].contains(&rot) {
                    rotations[rot[0]].push(rot);
                }
            }
        }
        LowIndex {
            alphabet,
            index,
            width,
            table: vec![NONE; index * width],
            defined: 1,
            trail: Vec::new(),
            rotations,
            torsion,
            queue: Vec::new(),
            nodes: 0,
            node_cap,
            found: Vec::new(),
            generators: pres.generators,
            prune_conjugates: true,
        }
    }

    #[inline]
    fn get(&self, c: usize, x: usize) -> usize {
        self.table[c * self.width + x]
    }

    fn set(&mut self, c: usize, x: usize, d: usize) {
        let xi = self.alphabet.inv[x];
        self.table[c * self.width + x] = d;
        self.trail.push(c * self.width + x);
        self.queue.push((c, x));
        if !(xi == x && c == d) {
            self.table[d * self.width + xi] = c;
            self.trail.push(d * self.width + xi);
            self.queue.push((d, xi));
        }
    }

    fn undo(&mut self, mark: usize) {
        for pos in self.trail.drain(mark..) {
            self.table[pos] = NONE;
        }
    }

    /// Scans one relator rotation at `c`; false on a conflict.
    fn scan(&mut self, c: usize, word: &[usize]) -> bool {
        let inv = &self.alphabet.inv;
        let mut f = c;
        let mut i = 0;
        while i < word.len() {
            let t = self.get(f, word[i]);
            if t == NONE {
                break;
            }
            f = t;
            i += 1;
        }
        if i == word.len() {
            return f == c;
        }
        let mut b = c;
        let mut j = word.len() - 1;
        loop {
            let t = self.get(b, inv[word[j]]);
            if t == NONE {
                break;
            }
            b = t;
            if j == i {
                // the backward scan passed the forward gap
                return false;
            }
            j -= 1;
        }
        if j == i {
            let x = word[i];
            if self.get(f, x) != NONE || self.get(b, inv[x]) != NONE {
                return false;
            }
            self.set(f, x, b);
        }
        true
    }

    fn deduce(&mut self) -> bool {
        while let Some((c, x)) = self.queue.pop() {
            for k in 0..self.rotations[x].len() {
                let rot = std::mem::take(&mut self.rotations[x][k]);
                let ok = self.scan(c, &rot);
                self.rotations[x][k] = rot;
                if !ok {
                    self.queue.clear();
                    return false;
                }
            }
        }
        true
    }

    /// False if some defined coset is fixed by a proper power of a
    /// torsion word.
    fn torsion_ok(&self) -> bool {
        for t in &self.torsion {
            for c in 0..self.defined {
                let mut x = c;
                'walk: for _ in 1..t.order {
                    for &l in &t.letters {
                        x = self.get(x, l);
                        if x == NONE {
                            break 'walk;
                        }
                    }
                    if x == c {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// False if rebasing at another coset gives a smaller table.
    fn canonical(&self) -> bool {
        let n = self.defined;
        let mut map = vec![NONE; n];
        let mut rev = vec![NONE; n];
        'base: for b in 1..n {
            map.iter_mut().for_each(|m| *m = NONE);
            map[b] = 0;
            rev[0] = b;
            let mut next = 1;
            for row in 0..n {
                if row >= next {
                    continue 'base;
                }
                let old = rev[row];
                for x in 0..self.width {
                    let a = self.get(row, x);
                    let o = self.get(old, x);
                    if a == NONE || o == NONE {
                        continue 'base;
                    }
                    if map[o] == NONE {
                        map[o] = next;
                        rev[next] = o;
                        next += 1;
                    }
                    let m = map[o];
                    if m < a {
                        return false;
                    }
                    if m > a {
                        continue 'base;
                    }
                }
            }
        }
        true
    }

    fn first_gap(&self, from: usize) -> Option<usize> {
        (from..self.defined * self.width).find(|&pos| self.table[pos] == NONE)
    }

    fn record(&mut self) {
        let action = (0..self.generators)
            .map(|g| {
                let x = self.alphabet.forward[g];
                (0..self.index).map(|c| self.get(c, x)).collect()
            })
            .collect();
        let table = CosetTable::from_action(action, 0).expect("complete transitive table");
        self.found.push(table);
    }

    pub fn run(&mut self) -> Result<(), GroupError> {
        self.search(0)
    }

    fn search(&mut self, from: usize) -> Result<(), GroupError> {
        self.nodes += 1;
        if self.nodes > self.node_cap {
            return Err(GroupError::SearchCapExceeded { nodes: self.node_cap });
        }
        let Some(pos) = self.first_gap(from) else {
            if self.defined == self.index {
                self.record();
            }
            return Ok(());
        };
        let (c, x) = (pos / self.width, pos % self.width);
        let xi = self.alphabet.inv[x];
        let candidates = self.defined + usize::from(self.defined < self.index);
        for d in 0..candidates {
            let new = d == self.defined;
            if !new && self.get(d, xi) != NONE {
                continue;
            }
            if xi == x && d == c && self.get(c, x) != NONE {
                continue;
            }
            let mark = self.trail.len();
            if new {
                self.defined += 1;
            }
            self.set(c, x, d);
            if self.deduce() && self.torsion_ok() && (!self.prune_conjugates || self.canonical()) {
                self.search(pos + 1)?;
            }
            self.queue.clear();
            self.undo(mark);
            if new {
                self.defined -= 1;
            }
        }
        Ok(())
    }
}
