//! Level tables for recursions with an ℓ₂ combination over the family:
//!
//! ```text
//! v_{n+1}(S) = max( v_n(S), θ sup_{(E_j)} (∑_j v_n(E_j ∩ S)²)^{1/2} )
//! ```
//!
//! Subsets of the support are bitmasks over its positions. Enlarging a set
//! never decreases `v_n`, so the supremum runs over partitions of the tails
//! `S ∩ {k, …}` into at most `f(k)` blocks. For a fixed tail this is a
//! maximum-weight set partition with a block budget, solved by dynamic
//! programming over subsets.

use alloc::vec;
use alloc::vec::Vec;


use crate::allowable::{AllowableFamily, Budget};
use crate::bound::FamilyTree;
#[allow(unused_imports)]
use num_traits::Float;

const NEG: f64 = f64::NEG_INFINITY;

/// The support positions and their block budgets.
pub(crate) struct Lattice {
    pub idx: Vec<usize>,
    /// `min(f(idx[j]), n)`.
    caps: Vec<usize>,
    budget: Budget,
}

impl Lattice {
    pub fn new(idx: Vec<usize>, budget: Budget) -> Self {
        let n = idx.len();
        let caps = idx.iter().map(|&k| budget.cap(k, n)).collect();
        Lattice { idx, caps, budget }
    }

    pub fn n(&self) -> usize {
        self.idx.len()
    }

    pub fn full(&self) -> usize {
        (1usize << self.n()) - 1
    }

    pub fn indices(&self, mask: usize) -> Vec<usize> {
        (0..self.n()).filter(|&j| mask >> j & 1 == 1).map(|j| self.idx[j]).collect()
    }

    /// The family with the least admissible `k` for the given blocks of the tail at `j`.
    fn family(&self, j: usize, blocks: &[usize]) -> AllowableFamily {
        let count = blocks.len();
        let k = (1..=self.idx[j])
            .find(|&k| self.budget.allows(k, count))
            .unwrap_or(self.idx[j]);
        AllowableFamily::new(k, blocks.iter().map(|&b| self.indices(b)).collect())
    }
}

/// Values of every level, plus the partition tables that produced them.
pub(crate) struct Tables {
    /// `vals[n][mask]`.
    pub vals: Vec<Vec<f64>>,
    /// `parts[n]` holds, for every mask `T` and block budget `c`, the largest
    /// `∑ v_n(B)²` over partitions of `T` into at most `c` blocks.
    parts: Vec<Vec<f64>>,
    /// Whether the last level repeats the one before, i.e. a fixed point.
    pub fixed: bool,
}

impl Tables {
    /// Runs the recursion from `base` until a fixed point or `max_depth`.
    /// When `cap` is given each level is clipped to it (used for upper bounds
    /// that are known to hold at every level).
    pub fn run(lat: &Lattice, base: Vec<f64>, cap: Option<&[f64]>, theta: f64, max_depth: usize) -> Self {
        let mut t = Tables {
            vals: vec![base],
            parts: Vec::new(),
            fixed: false,
        };
        while t.vals.len() <= max_depth {
            let cur = t.vals.last().expect("nonempty");
            let part = partition_table(lat.n(), cur);
            let mut next = cur.clone();
            for s in 1..=lat.full() {
                let (sup, _) = best_tail(lat, &part, s);
                let mut v = next[s].max(theta * sup.max(0.0).sqrt());
                if let Some(c) = cap {
                    v = v.min(c[s]).max(cur[s]);
                }
                next[s] = v;
            }
            let same = next == *cur;
            t.parts.push(part);
            t.vals.push(next);
            if same {
                t.fixed = true;
                break;
            }
        }
        t
    }

    pub fn levels(&self) -> usize {
        self.vals.len()
    }

    /// `θ sup (∑ v_{n}(E_j)²)^{1/2}` for mask `s`, with the maximising family.
    pub fn branch(&self, lat: &Lattice, theta: f64, n: usize, s: usize) -> (f64, Option<AllowableFamily>) {
        let Some(part) = self.parts.get(n) else {
            return (0.0, None);
        };
        let (sup, j) = best_tail(lat, part, s);
        let Some(j) = j else {
            return (0.0, None);
        };
        let tail = s & !((1usize << j) - 1);
        let c = lat.caps[j].min(tail.count_ones() as usize);
        let blocks = reconstruct(lat.n(), &self.vals[n], part, tail, c);
        (theta * sup.max(0.0).sqrt(), Some(lat.family(j, &blocks)))
    }

    /// Tree of maximising families realising `vals[n][s]`.
    pub fn tree(&self, lat: &Lattice, n: usize, s: usize) -> FamilyTree {
        let v = self.vals[n][s];
        let m = (0..=n).find(|&m| self.vals[m][s] == v).unwrap_or(n);
        if m == 0 {
            return FamilyTree {
                support: lat.indices(s),
                value: v,
                family: None,
                children: Vec::new(),
            };
        }
        let (_, j) = best_tail(lat, &self.parts[m - 1], s);
        let Some(j) = j else {
            return FamilyTree {
                support: lat.indices(s),
                value: v,
                family: None,
                children: Vec::new(),
            };
        };
        let tail = s & !((1usize << j) - 1);
        let c = lat.caps[j].min(tail.count_ones() as usize);
        let blocks = reconstruct(lat.n(), &self.vals[m - 1], &self.parts[m - 1], tail, c);
        let children = blocks.iter().map(|&b| self.tree(lat, m - 1, b)).collect();
        FamilyTree {
            support: lat.indices(s),
            value: v,
            family: Some(lat.family(j, &blocks)),
            children,
        }
    }
}

/// Best tail of `s`: returns `max_j P[tail_j][cap_j]` and the first maximising position.
fn best_tail(lat: &Lattice, part: &[f64], s: usize) -> (f64, Option<usize>) {
    let n = lat.n();
    let mut best = NEG;
    let mut arg = None;
    for j in 0..n {
        if s >> j & 1 == 0 {
            continue;
        }
        let tail = s & !((1usize << j) - 1);
        let c = lat.caps[j].min(tail.count_ones() as usize);
        let v = part[tail * (n + 1) + c];
        if v > best {
            best = v;
            arg = Some(j);
        }
    }
    (best, arg)
}

/// `P[T][c] = max ∑_{B} val(B)²` over partitions of `T` into at most `c` blocks.
fn partition_table(n: usize, val: &[f64]) -> Vec<f64> {
    let width = n + 1;
    let size = 1usize << n;
    let mut p = vec![NEG; size * width];
    for c in 0..width {
        p[c] = 0.0;
    }
    for t in 1..size {
        let low = t & t.wrapping_neg();
        let rest = t ^ low;
        let pc = t.count_ones() as usize;
        let mut sub = rest;
        loop {
            let b = sub | low;
            let w = val[b] * val[b];
            let r = t ^ b;
            for c in 1..=pc {
                let prev = p[r * width + c - 1];
                if prev > NEG {
                    let cand = w + prev;
                    if cand > p[t * width + c] {
                        p[t * width + c] = cand;
                    }
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        for c in pc + 1..width {
            p[t * width + c] = p[t * width + pc];
        }
    }
    p
}

/// Blocks of a partition of `t` into at most `c` blocks attaining `P[t][c]`.
fn reconstruct(n: usize, val: &[f64], part: &[f64], mut t: usize, mut c: usize) -> Vec<usize> {
    let width = n + 1;
    let mut blocks = Vec::new();
    while t != 0 && c > 0 {
        let target = part[t * width + c];
        let low = t & t.wrapping_neg();
        let rest = t ^ low;
        let mut sub = rest;
        let mut chosen = t;
        let mut best = NEG;
        loop {
            let b = sub | low;
            let prev = part[(t ^ b) * width + c - 1];
            if prev > NEG {
                let cand = val[b] * val[b] + prev;
                if cand == target {
                    chosen = b;
                    break;
                }
                if cand > best {
                    best = cand;
                    chosen = b;
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        blocks.push(chosen);
        t ^= chosen;
        c -= 1;
    }
    blocks
}
