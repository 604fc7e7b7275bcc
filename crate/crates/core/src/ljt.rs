//! Proof-term extracting prover for implicational intuitionistic logic in
//! Dyckhoff's contraction-free LJT calculus, the linearity filter on its
//! proofs, and the sweep that runs it over every formula of a size.
//!
//! The search is committed-choice: the first applicable rule wins and later
//! alternatives are never revisited, so each formula gets at most one proof
//! term, and which term it gets is fixed by the order below.
//!
//! 1. axiom: the newest hypothesis whose formula equals the goal.
//! 2. `A -o B` goal: assume `x : A` and prove `B`.
//! 3. atomic goal `G`: if no hypothesis has head `G`, fail. Otherwise take
//!    the newest hypothesis `S : A -o B` for which the auxiliary step below
//!    succeeds with `T`, replace it by `S T : B` and prove `G` again.
//!
//! Auxiliary step for `S : A -o B`: if `A = C -o D`, prove `C -o D` under
//! the extra hypothesis `y : D -o B` and take `T = \y. proof`; if `A` is an
//! atom, take the proof of the newest hypothesis with formula `A`.

use rayon::prelude::*;

use crate::formula_gen::{gen_trees, set_partitions, Partitions, TreeSkeleton, Trees};
use crate::syntax::{Formula, Term};

/// An assumption in a sequent: a proof fragment and the formula it proves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypothesis {
    pub proof: Term,
    pub formula: Formula,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum FNode {
    Atom(u32),
    Imp(u32, u32),
}

#[derive(Clone, Copy, Debug)]
enum PNode {
    Var(u32),
    Lam(u32, u32),
    App(u32, u32),
}

#[derive(Clone, Copy, Debug)]
struct Hyp {
    proof: u32,
    formula: u32,
}

/// Per-call scratch space. Formula nodes are hash-consed by linear scan, so
/// formula equality is index equality.
#[derive(Default)]
struct Prover {
    formulas: Vec<FNode>,
    proofs: Vec<PNode>,
    next_binder: u32,
}

impl Prover {
    fn intern(&mut self, node: FNode) -> u32 {
        if let Some(i) = self.formulas.iter().position(|n| *n == node) {
            return i as u32;
        }
        self.formulas.push(node);
        (self.formulas.len() - 1) as u32
    }

    fn add_formula(&mut self, f: &Formula) -> u32 {
        match f {
            Formula::Atom(a) => self.intern(FNode::Atom(*a)),
            Formula::Imp(l, r) => {
                let l = self.add_formula(l);
                let r = self.add_formula(r);
                self.intern(FNode::Imp(l, r))
            }
        }
    }

    fn add_proof(&mut self, t: &Term) -> u32 {
        let node = match t {
            Term::Var(b) => PNode::Var(b.0),
            Term::Lam(b, body) => {
                let body = self.add_proof(body);
                PNode::Lam(b.0, body)
            }
            Term::App(f, a) => {
                let f = self.add_proof(f);
                let a = self.add_proof(a);
                PNode::App(f, a)
            }
        };
        self.proof(node)
    }

    fn proof(&mut self, node: PNode) -> u32 {
        self.proofs.push(node);
        (self.proofs.len() - 1) as u32
    }

    fn fresh(&mut self) -> u32 {
        self.next_binder += 1;
        self.next_binder - 1
    }

    fn head(&self, mut f: u32) -> u32 {
        loop {
            match self.formulas[f as usize] {
                FNode::Atom(a) => return a,
                FNode::Imp(_, r) => f = r,
            }
        }
    }

    // `ctx` is stored oldest first; the newest hypothesis is last.
    fn prove(&mut self, goal: u32, ctx: &[Hyp]) -> Option<u32> {
        if let Some(h) = ctx.iter().rev().find(|h| h.formula == goal) {
            return Some(h.proof);
        }
        match self.formulas[goal as usize] {
            FNode::Imp(a, b) => {
                let x = self.fresh();
                let var = self.proof(PNode::Var(x));
                let mut inner = ctx.to_vec();
                inner.push(Hyp { proof: var, formula: a });
                let body = self.prove(b, &inner)?;
                Some(self.proof(PNode::Lam(x, body)))
            }
            FNode::Atom(g) => {
                if !ctx.iter().any(|h| self.head(h.formula) == g) {
                    return None;
                }
                for i in (0..ctx.len()).rev() {
                    let FNode::Imp(a, b) = self.formulas[ctx[i].formula as usize] else {
                        continue;
                    };
                    let mut rest = Vec::with_capacity(ctx.len());
                    rest.extend_from_slice(&ctx[..i]);
                    rest.extend_from_slice(&ctx[i + 1..]);
                    if let Some(t) = self.prove_imp(a, b, &rest) {
                        let app = self.proof(PNode::App(ctx[i].proof, t));
                        rest.push(Hyp { proof: app, formula: b });
                        return self.prove(goal, &rest);
                    }
                }
                None
            }
        }
    }

    fn prove_imp(&mut self, a: u32, b: u32, ctx: &[Hyp]) -> Option<u32> {
        match self.formulas[a as usize] {
            FNode::Imp(_, d) => {
                let y = self.fresh();
                let var = self.proof(PNode::Var(y));
                let db = self.intern(FNode::Imp(d, b));
                let mut inner = ctx.to_vec();
                inner.push(Hyp { proof: var, formula: db });
                let body = self.prove(a, &inner)?;
                Some(self.proof(PNode::Lam(y, body)))
            }
            FNode::Atom(_) => ctx.iter().rev().find(|h| h.formula == a).map(|h| h.proof),
        }
    }

    fn extract(&self, p: u32) -> Term {
        match self.proofs[p as usize] {
            PNode::Var(x) => Term::var(x),
            PNode::Lam(x, body) => Term::lam(x, self.extract(body)),
            PNode::App(f, a) => Term::app(self.extract(f), self.extract(a)),
        }
    }
}

/// The rightmost atom of a formula.
pub fn head_of(f: &Formula) -> u32 {
    f.head()
}

/// Prove `goal` from the empty context. Binders of the returned term are
/// numbered in preorder.
pub fn prove_ipc(goal: &Formula) -> Option<Term> {
    prove_sequent(&[], goal)
}

/// Prove `goal` under hypotheses given newest first. Fresh binders are
/// numbered after every binder already used in the hypotheses' proofs.
pub fn prove_sequent(context: &[Hypothesis], goal: &Formula) -> Option<Term> {
    let mut p = Prover::default();
    let mut ctx = Vec::with_capacity(context.len());
    for h in context.iter().rev() {
        let proof = p.add_proof(&h.proof);
        let formula = p.add_formula(&h.formula);
        ctx.push(Hyp { proof, formula });
    }
    p.next_binder = p
        .proofs
        .iter()
        .filter_map(|n| match n {
            PNode::Var(x) | PNode::Lam(x, _) => Some(x + 1),
            PNode::App(..) => None,
        })
        .max()
        .unwrap_or(0);
    let goal = p.add_formula(goal);
    let proof = p.prove(goal, &ctx)?;
    let term = p.extract(proof);
    Some(if context.is_empty() { term.canonical() } else { term })
}

/// The extracted proof, kept only if it is linear.
pub fn prove_lin(goal: &Formula) -> Option<Term> {
    prove_ipc(goal).filter(|t| t.is_linear() == Ok(true))
}

/// Formulas rejected before proving in a tautology sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Prefilter {
    /// Prove every formula.
    None,
    /// Skip formulas where some atom occurs a different number of times
    /// positively and negatively. Any closed linear term's type has equal
    /// counts, so this never drops a formula `prove_lin` would accept.
    #[default]
    PolarityEven,
}

/// Pairs of formula and linear proof term over all formulas of size `n`, in
/// [`gen_formulas`](crate::formula_gen::gen_formulas) order.
pub fn gen_taut(n: usize) -> GenTaut {
    gen_taut_with(n, Prefilter::default())
}

pub fn gen_taut_with(n: usize, prefilter: Prefilter) -> GenTaut {
    GenTaut {
        trees: gen_trees(n),
        shape: None,
        prefilter,
    }
}

/// One tree shape and the labelings still to try on it.
struct Shape {
    tree: TreeSkeleton,
    polarities: Vec<bool>,
    parts: Partitions,
    balance: Vec<i32>,
}

impl Shape {
    fn new(tree: TreeSkeleton) -> Shape {
        let leaves = tree.leaf_count();
        Shape {
            polarities: tree.leaf_polarities(),
            parts: set_partitions(leaves),
            balance: vec![0; leaves],
            tree,
        }
    }

    /// Whether the current labeling gives every atom as many positive as
    /// negative occurrences. Checked on the labels, before any formula is
    /// built.
    fn polarity_even(&mut self) -> bool {
        self.balance.iter_mut().for_each(|b| *b = 0);
        for (label, &p) in self.parts.current().iter().zip(&self.polarities) {
            self.balance[*label as usize] += if p { 1 } else { -1 };
        }
        self.balance.iter().all(|&b| b == 0)
    }

    /// Advance to the next labeling and prove it, or `None` once exhausted.
    fn next_proof(&mut self, prefilter: Prefilter) -> Option<Option<(Formula, Term)>> {
        if !self.parts.advance() {
            return None;
        }
        if prefilter == Prefilter::PolarityEven && !self.polarity_even() {
            return Some(None);
        }
        let f = self.tree.label(self.parts.current());
        Some(prove_lin(&f).map(|t| (f, t)))
    }
}

pub struct GenTaut {
    trees: Trees,
    shape: Option<Shape>,
    prefilter: Prefilter,
}

impl Iterator for GenTaut {
    type Item = (Formula, Term);

    fn next(&mut self) -> Option<(Formula, Term)> {
        loop {
            let shape = match &mut self.shape {
                Some(s) => s,
                None => self.shape.insert(Shape::new(self.trees.next()?)),
            };
            match shape.next_proof(self.prefilter) {
                Some(Some(pair)) => return Some(pair),
                Some(None) => {}
                None => self.shape = None,
            }
        }
    }
}

/// Number of items [`gen_taut`] yields for `n`, computed in parallel over
/// tree shapes.
pub fn count_taut(n: usize) -> u64 {
    let trees: Vec<_> = gen_trees(n).collect();
    trees
        .into_par_iter()
        .map(|tree| {
            let mut shape = Shape::new(tree);
            let mut found = 0u64;
            while let Some(r) = shape.next_proof(Prefilter::PolarityEven) {
                found += r.is_some() as u64;
            }
            found
        })
        .sum()
}
