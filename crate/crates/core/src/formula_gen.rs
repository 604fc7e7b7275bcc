//! Streaming enumeration of implicational formulas of a given size: binary
//! tree shapes crossed with set partitions of their leaves.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::syntax::Formula;

/// A binary tree with unlabeled leaves, stored as its preorder node kinds
/// (`true` for an internal node).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TreeSkeleton {
    preorder: Vec<bool>,
}

impl TreeSkeleton {
    pub fn preorder(&self) -> &[bool] {
        &self.preorder
    }

    pub fn size(&self) -> usize {
        self.preorder.iter().filter(|&&b| b).count()
    }

    pub fn leaf_count(&self) -> usize {
        self.preorder.len() - self.size()
    }

    /// Label the leaves, left to right, with `labels`.
    pub fn label(&self, labels: &[u32]) -> Formula {
        assert_eq!(labels.len(), self.leaf_count(), "one label per leaf");
        fn build(pre: &[bool], pos: &mut usize, labels: &[u32], leaf: &mut usize) -> Formula {
            let internal = pre[*pos];
            *pos += 1;
            if internal {
                let l = build(pre, pos, labels, leaf);
                let r = build(pre, pos, labels, leaf);
                Formula::imp(l, r)
            } else {
                *leaf += 1;
                Formula::Atom(labels[*leaf - 1])
            }
        }
        build(&self.preorder, &mut 0, labels, &mut 0)
    }

    /// The tree with every leaf labeled by a distinct atom.
    pub fn to_formula(&self) -> Formula {
        let labels: Vec<u32> = (0..self.leaf_count() as u32).collect();
        self.label(&labels)
    }

    /// Polarity of each leaf, left to right: `true` for positive.
    pub fn leaf_polarities(&self) -> Vec<bool> {
        // each pending slot remembers its polarity
        let mut pending = vec![true];
        let mut out = Vec::with_capacity(self.leaf_count());
        for &internal in &self.preorder {
            let p = pending.pop().expect("well-formed preorder");
            if internal {
                pending.push(p);
                pending.push(!p);
            } else {
                out.push(p);
            }
        }
        out
    }
}

/// All binary trees with `n` internal nodes. At each position a leaf is tried
/// before an internal node.
pub fn gen_trees(n: usize) -> Trees {
    Trees {
        n,
        preorder: Vec::with_capacity(2 * n + 1),
        internal: 0,
        open: 1,
        started: false,
        done: false,
    }
}

#[derive(Clone, Debug)]
pub struct Trees {
    n: usize,
    preorder: Vec<bool>,
    internal: usize,
    // subtrees still to be filled
    open: usize,
    started: bool,
    done: bool,
}

impl Trees {
    fn descend(&mut self) {
        while self.open > 0 {
            self.preorder.push(false);
            self.open -= 1;
        }
    }

    /// Retract choices until one can be switched from leaf to internal node.
    fn retreat(&mut self) -> bool {
        while let Some(internal) = self.preorder.pop() {
            if internal {
                self.internal -= 1;
                self.open -= 1;
            } else {
                self.open += 1;
                if self.internal < self.n {
                    self.preorder.push(true);
                    self.internal += 1;
                    self.open += 1;
                    return true;
                }
            }
        }
        false
    }
}

impl Iterator for Trees {
    type Item = TreeSkeleton;

    fn next(&mut self) -> Option<TreeSkeleton> {
        if self.done {
            return None;
        }
        if self.started && !self.retreat() {
            self.done = true;
            return None;
        }
        self.started = true;
        loop {
            self.descend();
            if self.internal == self.n {
                return Some(TreeSkeleton {
                    preorder: self.preorder.clone(),
                });
            }
            if !self.retreat() {
                self.done = true;
                return None;
            }
        }
    }
}

/// All restricted growth strings of length `k`, in lexicographic order.
/// `k = 0` yields a single empty string.
pub fn set_partitions(k: usize) -> Partitions {
    Partitions {
        rgs: vec![0; k],
        prefix_max: vec![0; k],
        started: false,
        done: false,
    }
}

#[derive(Clone, Debug)]
pub struct Partitions {
    rgs: Vec<u32>,
    // prefix_max[i] = max(rgs[0..=i])
    prefix_max: Vec<u32>,
    started: bool,
    done: bool,
}

impl Partitions {
    /// Advance in place; returns false when exhausted.
    pub fn advance(&mut self) -> bool {
        if self.done {
            return false;
        }
        if !self.started {
            self.started = true;
            return true;
        }
        let k = self.rgs.len();
        for i in (1..k).rev() {
            if self.rgs[i] <= self.prefix_max[i - 1] {
                self.rgs[i] += 1;
                self.prefix_max[i] = self.prefix_max[i - 1].max(self.rgs[i]);
                for j in i + 1..k {
                    self.rgs[j] = 0;
                    self.prefix_max[j] = self.prefix_max[i];
                }
                return true;
            }
        }
        self.done = true;
        false
    }

    pub fn current(&self) -> &[u32] {
        &self.rgs
    }
}

impl Iterator for Partitions {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        self.advance().then(|| self.rgs.clone())
    }
}

/// Every formula with `n` implications whose atoms are labeled `0..k` in
/// order of first occurrence. Trees vary slowest.
pub fn gen_formulas(n: usize) -> Formulas {
    let mut trees = gen_trees(n);
    let tree = trees.next();
    Formulas {
        trees,
        tree,
        parts: set_partitions(n + 1),
    }
}

#[derive(Clone, Debug)]
pub struct Formulas {
    trees: Trees,
    tree: Option<TreeSkeleton>,
    parts: Partitions,
}

impl Iterator for Formulas {
    type Item = Formula;

    fn next(&mut self) -> Option<Formula> {
        loop {
            let tree = self.tree.as_ref()?;
            if self.parts.advance() {
                return Some(tree.label(self.parts.current()));
            }
            self.tree = self.trees.next();
            self.parts = set_partitions(self.parts.rgs.len());
        }
    }
}

/// Largest size accepted by [`count_formulas`].
pub const MAX_COUNT_SIZE: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[error("size {0} exceeds the counting bound {MAX_COUNT_SIZE}")]
pub struct CountBoundError(pub usize);

pub fn catalan(n: usize) -> BigUint {
    // C(i+1) = C(i) * 2(2i+1) / (i+2)
    let mut c = BigUint::one();
    for i in 0..n {
        c = c * BigUint::from(2 * (2 * i + 1)) / BigUint::from(i + 2);
    }
    c
}

pub fn bell(k: usize) -> BigUint {
    // Bell triangle
    let mut row = vec![BigUint::one()];
    for _ in 0..k {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(row.last().unwrap().clone());
        for x in &row {
            let v = next.last().unwrap() + x;
            next.push(v);
        }
        row = next;
    }
    row[0].clone()
}

/// Number of canonical-labeled formulas of size `n`, `Catalan(n) * Bell(n + 1)`.
pub fn count_formulas(n: usize) -> Result<BigUint, CountBoundError> {
    if n > MAX_COUNT_SIZE {
        return Err(CountBoundError(n));
    }
    let c = catalan(n);
    if c.is_zero() {
        return Ok(c);
    }
    Ok(c * bell(n + 1))
}
