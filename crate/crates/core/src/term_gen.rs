//! Staged generators of closed lambda terms: linear Motzkin skeletons,
//! almost-linear, linear and affine terms, linear normal forms, and linear
//! normal forms paired with their principal types.
//!
//! All families run on one depth-first search engine. The engine keeps a
//! stack of pending goals (positions of the term still to be built) and a
//! stack of decisions. Each decision records which alternative was taken for
//! a goal and everything needed to undo it, including a rewind point into
//! the type store. Backtracking pops a decision, undoes it and tries the
//! goal's next alternative. A solution is reached when no goal is pending
//! and both node budgets are spent; the iterator suspends there and resumes
//! by backtracking. Resident state is proportional to the term size.
//!
//! A term with parameter `n` has `n` application nodes and `n + 1` lambda
//! nodes. Binders are numbered in preorder, and at a variable position
//! in-scope binders are tried innermost first.

use rayon::prelude::*;

use crate::syntax::{BinderId, Formula, OpenTermError, Skeleton, Term};
use crate::unify::{BindingStore, MetaVar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// Motzkin trees with `n` binary, `n + 1` unary nodes and `n + 1` leaves.
    Skeletons,
    /// Closed terms, each leaf pointing at any binder in scope.
    AlmostLinear,
    /// Closed terms in which every binder is used exactly once.
    Linear,
    /// Closed terms in which every binder is used at most once.
    Affine,
    /// Linear terms with no redex.
    NormalForms,
    /// Linear normal forms with their principal types inferred on the fly.
    TypedNormalForms,
}

impl Family {
    fn tracks_usage(self) -> bool {
        matches!(
            self,
            Family::Linear | Family::Affine | Family::NormalForms | Family::TypedNormalForms
        )
    }

    fn requires_use(self) -> bool {
        matches!(
            self,
            Family::Linear | Family::NormalForms | Family::TypedNormalForms
        )
    }

    fn normal(self) -> bool {
        matches!(self, Family::NormalForms | Family::TypedNormalForms)
    }
}

#[derive(Clone, Copy, Debug)]
enum Goal {
    Any,
    Normal(MetaVar),
    Neutral(MetaVar),
    /// leave the innermost binder's scope
    Close,
}

#[derive(Clone, Copy, Debug)]
enum Node {
    Leaf(u32),
    Lam(u32),
    App,
}

#[derive(Clone, Copy, Debug)]
struct Slot {
    binder: u32,
    used: bool,
    ty: MetaVar,
}

#[derive(Clone, Copy, Debug)]
enum Applied {
    Leaf { slot: Option<usize>, marked: bool },
    Lam { scoped: bool },
    App,
    ToNeutral,
    Close(Slot),
}

#[derive(Clone, Copy, Debug)]
struct Decision {
    goal: Goal,
    alt: u32,
    applied: Applied,
    goals_len: usize,
    trail: usize,
    cells: usize,
}

enum Outcome {
    Applied(Applied),
    Skip,
    Exhausted,
}

/// Restricts a search to every `shards`-th subtree below the first `depth`
/// choice points, counted in enumeration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Split {
    pub depth: usize,
    pub shards: usize,
    pub index: usize,
}

/// High-water marks of the engine's resident state.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EnumStats {
    pub peak_goals: usize,
    pub peak_decisions: usize,
    pub peak_scope: usize,
    pub peak_cells: usize,
    pub peak_trail: usize,
    pub solutions: u64,
}

impl EnumStats {
    /// Sum of every peak, a single measure of live enumeration state.
    pub fn peak_state(&self) -> usize {
        self.peak_goals + self.peak_decisions + self.peak_scope + self.peak_cells + self.peak_trail
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Phase {
    Fresh,
    Suspended,
    Done,
}

/// The search engine behind every term family.
#[derive(Clone, Debug)]
pub struct Enumerator {
    family: Family,
    occurs_check: bool,
    apps: usize,
    lams: usize,
    lams_total: usize,
    goals: Vec<Goal>,
    decisions: Vec<Decision>,
    scope: Vec<Slot>,
    nodes: Vec<Node>,
    store: BindingStore,
    root_ty: MetaVar,
    choice_depth: usize,
    split: Option<Split>,
    prefixes: u64,
    phase: Phase,
    stats: EnumStats,
}

impl Enumerator {
    pub fn new(family: Family, n: usize) -> Self {
        let mut store = BindingStore::new();
        let root_ty = store.fresh_meta();
        let root = if family.normal() { Goal::Normal(root_ty) } else { Goal::Any };
        Enumerator {
            family,
            occurs_check: false,
            apps: n,
            lams: n + 1,
            lams_total: n + 1,
            goals: vec![root],
            decisions: Vec::with_capacity(4 * n + 4),
            scope: Vec::with_capacity(n + 1),
            nodes: Vec::with_capacity(3 * n + 2),
            store,
            root_ty,
            choice_depth: 0,
            split: None,
            prefixes: 0,
            phase: Phase::Fresh,
            stats: EnumStats::default(),
        }
    }

    /// A typed normal-form search whose root type is unified up front with
    /// the ground formula `goal`. Occurs check is on for the whole search.
    pub fn typed_against(n: usize, goal: &Formula) -> Self {
        let mut e = Enumerator::new(Family::TypedNormalForms, n);
        e.occurs_check = true;
        let ground = e.store.intern(&crate::unify::MetaType::from_formula(goal));
        let ok = e.store.unify_vars(e.root_ty, ground, true);
        debug_assert!(ok, "fresh root unifies with anything");
        e
    }

    pub fn with_split(mut self, split: Split) -> Self {
        assert!(split.shards >= 1 && split.index < split.shards);
        self.split = Some(split);
        self
    }

    pub fn with_occurs_check(mut self, on: bool) -> Self {
        self.occurs_check = on;
        self
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn stats(&self) -> EnumStats {
        self.stats
    }

    /// Advance to the next solution. Returns false once the search space is
    /// exhausted.
    pub fn next_solution(&mut self) -> bool {
        let mut alt = 0;
        match self.phase {
            Phase::Done => return false,
            Phase::Fresh => {
                self.phase = Phase::Suspended;
                // with no choice point fixed the whole search is prefix 0
                if matches!(self.split, Some(s) if s.depth == 0 && s.index != 0) {
                    return self.finish();
                }
            }
            Phase::Suspended => match self.backtrack() {
                Some(a) => alt = a,
                None => return self.finish(),
            },
        }
        loop {
            let Some(goal) = self.goals.pop() else {
                if self.apps == 0 && self.lams == 0 && self.accept_shallow_solution() {
                    self.stats.solutions += 1;
                    return true;
                }
                match self.backtrack() {
                    Some(a) => {
                        alt = a;
                        continue;
                    }
                    None => return self.finish(),
                }
            };
            let progressed = self.apply(goal, alt) && !self.rejected_by_split();
            if !progressed {
                match self.backtrack() {
                    Some(a) => alt = a,
                    None => return self.finish(),
                }
            } else {
                alt = 0;
                self.track();
            }
        }
    }

    fn finish(&mut self) -> bool {
        self.phase = Phase::Done;
        false
    }

    fn track(&mut self) {
        let s = &mut self.stats;
        s.peak_goals = s.peak_goals.max(self.goals.len());
        s.peak_decisions = s.peak_decisions.max(self.decisions.len());
        s.peak_scope = s.peak_scope.max(self.scope.len());
        s.peak_cells = s.peak_cells.max(self.store.len());
        s.peak_trail = s.peak_trail.max(self.store.trail_len());
    }

    /// Try alternatives of `goal` from `alt` on. On failure the goal is
    /// pushed back so that backtracking finds the stack as it was.
    fn apply(&mut self, goal: Goal, mut alt: u32) -> bool {
        let goals_len = self.goals.len();
        let trail = self.store.trail_len();
        let cells = self.store.len();
        loop {
            match self.try_alt(goal, alt) {
                Outcome::Applied(applied) => {
                    if !matches!(goal, Goal::Close) {
                        self.choice_depth += 1;
                    }
                    self.decisions.push(Decision {
                        goal,
                        alt,
                        applied,
                        goals_len,
                        trail,
                        cells,
                    });
                    return true;
                }
                Outcome::Skip => {
                    self.store.rewind(trail, cells);
                    alt += 1;
                }
                Outcome::Exhausted => {
                    self.store.rewind(trail, cells);
                    self.goals.push(goal);
                    return false;
                }
            }
        }
    }

    /// Undo the newest decision and return the alternative to try next for
    /// its goal, which is back on top of the goal stack.
    fn backtrack(&mut self) -> Option<u32> {
        let d = self.decisions.pop()?;
        match d.applied {
            Applied::Leaf { slot, marked } => {
                self.nodes.pop();
                if marked {
                    self.scope[slot.unwrap()].used = false;
                }
            }
            Applied::Lam { scoped } => {
                self.nodes.pop();
                self.lams += 1;
                if scoped {
                    self.scope.pop();
                }
            }
            Applied::App => {
                self.nodes.pop();
                self.apps += 1;
            }
            Applied::ToNeutral => {}
            Applied::Close(slot) => self.scope.push(slot),
        }
        if !matches!(d.goal, Goal::Close) {
            self.choice_depth -= 1;
        }
        self.goals.truncate(d.goals_len);
        self.goals.push(d.goal);
        self.store.rewind(d.trail, d.cells);
        Some(d.alt + 1)
    }

    fn try_alt(&mut self, goal: Goal, alt: u32) -> Outcome {
        match goal {
            Goal::Close => self.close(alt),
            Goal::Any if self.family == Family::Skeletons => match alt {
                0 => {
                    self.nodes.push(Node::Leaf(u32::MAX));
                    Outcome::Applied(Applied::Leaf {
                        slot: None,
                        marked: false,
                    })
                }
                1 => self.lam(None),
                2 => self.app(None),
                _ => Outcome::Exhausted,
            },
            Goal::Any => {
                let k = self.scope.len() as u32;
                if alt < k {
                    self.leaf(alt, None)
                } else if alt == k {
                    self.lam(None)
                } else if alt == k + 1 {
                    self.app(None)
                } else {
                    Outcome::Exhausted
                }
            }
            Goal::Normal(ty) => match alt {
                0 => self.lam(Some(ty)),
                1 => {
                    self.goals.push(Goal::Neutral(ty));
                    Outcome::Applied(Applied::ToNeutral)
                }
                _ => Outcome::Exhausted,
            },
            Goal::Neutral(ty) => {
                let k = self.scope.len() as u32;
                if alt < k {
                    self.leaf(alt, Some(ty))
                } else if alt == k {
                    self.app(Some(ty))
                } else {
                    Outcome::Exhausted
                }
            }
        }
    }

    fn typed(&self) -> bool {
        self.family == Family::TypedNormalForms
    }

    /// Variable pointing at the `alt`-th innermost binder.
    fn leaf(&mut self, alt: u32, ty: Option<MetaVar>) -> Outcome {
        let i = self.scope.len() - 1 - alt as usize;
        let slot = self.scope[i];
        let track = self.family.tracks_usage();
        if track && slot.used {
            return Outcome::Skip;
        }
        if self.typed() && !self.store.unify_vars(slot.ty, ty.unwrap(), self.occurs_check) {
            return Outcome::Skip;
        }
        if track {
            self.scope[i].used = true;
        }
        self.nodes.push(Node::Leaf(slot.binder));
        Outcome::Applied(Applied::Leaf {
            slot: Some(i),
            marked: track,
        })
    }

    fn lam(&mut self, ty: Option<MetaVar>) -> Outcome {
        if self.lams == 0 {
            return Outcome::Skip;
        }
        let binder = (self.lams_total - self.lams) as u32;
        let (arg_ty, body_ty) = if self.typed() {
            let s = self.store.fresh_meta();
            let t = self.store.fresh_meta();
            let st = self.store.imp(s, t);
            if !self.store.unify_vars(ty.unwrap(), st, self.occurs_check) {
                return Outcome::Skip;
            }
            (s, t)
        } else {
            (self.root_ty, self.root_ty)
        };
        self.lams -= 1;
        self.nodes.push(Node::Lam(binder));
        let scoped = self.family != Family::Skeletons;
        if scoped {
            self.scope.push(Slot {
                binder,
                used: false,
                ty: arg_ty,
            });
            self.goals.push(Goal::Close);
        }
        self.goals.push(if self.family.normal() {
            Goal::Normal(body_ty)
        } else {
            Goal::Any
        });
        Outcome::Applied(Applied::Lam { scoped })
    }

    fn app(&mut self, ty: Option<MetaVar>) -> Outcome {
        if self.apps == 0 {
            return Outcome::Skip;
        }
        self.apps -= 1;
        self.nodes.push(Node::App);
        if self.family.normal() {
            let (arg_ty, fun_ty) = if self.typed() {
                let s = self.store.fresh_meta();
                let fun = self.store.imp(s, ty.unwrap());
                (s, fun)
            } else {
                (self.root_ty, self.root_ty)
            };
            self.goals.push(Goal::Normal(arg_ty));
            self.goals.push(Goal::Neutral(fun_ty));
        } else {
            self.goals.push(Goal::Any);
            self.goals.push(Goal::Any);
        }
        Outcome::Applied(Applied::App)
    }

    fn close(&mut self, alt: u32) -> Outcome {
        if alt > 0 {
            return Outcome::Exhausted;
        }
        let slot = *self.scope.last().expect("close without open scope");
        if self.family.requires_use() && !slot.used {
            return Outcome::Skip;
        }
        self.scope.pop();
        Outcome::Applied(Applied::Close(slot))
    }

    fn rejected_by_split(&mut self) -> bool {
        let Some(split) = self.split else {
            return false;
        };
        let last = self.decisions.last().unwrap();
        if matches!(last.goal, Goal::Close) || self.choice_depth != split.depth {
            return false;
        }
        let ordinal = self.prefixes;
        self.prefixes += 1;
        ordinal % split.shards as u64 != split.index as u64
    }

    fn accept_shallow_solution(&mut self) -> bool {
        let Some(split) = self.split else {
            return true;
        };
        if self.choice_depth >= split.depth {
            return true;
        }
        let ordinal = self.prefixes;
        self.prefixes += 1;
        ordinal % split.shards as u64 == split.index as u64
    }

    /// The current solution as a term. Not meaningful for skeletons.
    pub fn term(&self) -> Term {
        fn build(nodes: &[Node], pos: &mut usize) -> Term {
            let node = nodes[*pos];
            *pos += 1;
            match node {
                Node::Leaf(b) => Term::Var(BinderId(b)),
                Node::Lam(b) => Term::lam(b, build(nodes, pos)),
                Node::App => {
                    let f = build(nodes, pos);
                    Term::app(f, build(nodes, pos))
                }
            }
        }
        build(&self.nodes, &mut 0)
    }

    pub fn skeleton(&self) -> Skeleton {
        fn build(nodes: &[Node], pos: &mut usize) -> Skeleton {
            let node = nodes[*pos];
            *pos += 1;
            match node {
                Node::Leaf(_) => Skeleton::Leaf,
                Node::Lam(_) => Skeleton::Lam(Box::new(build(nodes, pos))),
                Node::App => {
                    let f = build(nodes, pos);
                    Skeleton::App(Box::new(f), Box::new(build(nodes, pos)))
                }
            }
        }
        build(&self.nodes, &mut 0)
    }

    /// Canonical principal type of the current solution (typed family only).
    pub fn principal_type(&self) -> Formula {
        assert!(self.typed(), "only the typed family infers types");
        self.store
            .canonicalize_var(self.root_ty)
            .expect("types built during linear generation are acyclic")
    }

    /// Number of remaining solutions, without building terms.
    pub fn count_remaining(&mut self) -> u64 {
        let mut c = 0;
        while self.next_solution() {
            c += 1;
        }
        c
    }
}

macro_rules! family_iter {
    ($(#[$doc:meta])* $name:ident, $item:ty, |$e:ident| $make:expr) => {
        $(#[$doc])*
        #[derive(Clone, Debug)]
        pub struct $name(Enumerator);

        impl $name {
            pub fn stats(&self) -> EnumStats {
                self.0.stats()
            }
        }

        impl Iterator for $name {
            type Item = $item;

            fn next(&mut self) -> Option<$item> {
                let $e = &mut self.0;
                if $e.next_solution() {
                    Some($make)
                } else {
                    None
                }
            }
        }
    };
}

family_iter!(
    /// Stream of skeletons.
    Skeletons, Skeleton, |e| e.skeleton()
);
family_iter!(
    /// Stream of closed terms of one family.
    Terms, Term, |e| e.term()
);
family_iter!(
    /// Stream of linear normal forms with their canonical principal types.
    TypedTerms, (Term, Formula), |e| (e.term(), e.principal_type())
);

impl From<Enumerator> for Terms {
    fn from(e: Enumerator) -> Self {
        Terms(e)
    }
}

impl From<Enumerator> for TypedTerms {
    fn from(e: Enumerator) -> Self {
        assert_eq!(e.family(), Family::TypedNormalForms);
        TypedTerms(e)
    }
}

pub fn linear_motzkin_skeletons(n: usize) -> Skeletons {
    Skeletons(Enumerator::new(Family::Skeletons, n))
}

pub fn closed_almost_linear_terms(n: usize) -> Terms {
    Terms(Enumerator::new(Family::AlmostLinear, n))
}

pub fn closed_linear_terms(n: usize) -> Terms {
    Terms(Enumerator::new(Family::Linear, n))
}

pub fn closed_affine_terms(n: usize) -> Terms {
    Terms(Enumerator::new(Family::Affine, n))
}

pub fn linear_normal_forms(n: usize) -> Terms {
    Terms(Enumerator::new(Family::NormalForms, n))
}

pub fn typed_normal_forms(n: usize) -> TypedTerms {
    TypedTerms(Enumerator::new(Family::TypedNormalForms, n))
}

/// Count a family at `n` without materializing terms.
pub fn count(family: Family, n: usize) -> u64 {
    Enumerator::new(family, n).count_remaining()
}

/// Count a family at `n` with the search split across rayon workers.
pub fn count_parallel(family: Family, n: usize, depth: usize, shards: usize) -> u64 {
    (0..shards)
        .into_par_iter()
        .map(|index| {
            Enumerator::new(family, n)
                .with_split(Split {
                    depth,
                    shards,
                    index,
                })
                .count_remaining()
        })
        .sum()
}

/// Principal type of a closed term by unification with occurs check, or
/// `None` if the term has no simple type.
pub fn infer_principal_type(t: &Term) -> Result<Option<Formula>, OpenTermError> {
    let mut store = BindingStore::new();
    Ok(infer(t, &mut store, &mut Vec::new())?.map(|ty| {
        store
            .canonicalize_var(ty)
            .expect("occurs check keeps types acyclic")
    }))
}

/// Whether `f` is a substitution instance of the principal type of `t`,
/// i.e. `t` has type `f`.
pub fn has_type(t: &Term, f: &Formula) -> Result<bool, OpenTermError> {
    let mut store = BindingStore::new();
    let Some(ty) = infer(t, &mut store, &mut Vec::new())? else {
        return Ok(false);
    };
    let ground = store.intern(&crate::unify::MetaType::from_formula(f));
    Ok(store.unify_vars(ty, ground, true))
}

fn infer(
    t: &Term,
    store: &mut BindingStore,
    env: &mut Vec<(BinderId, MetaVar)>,
) -> Result<Option<MetaVar>, OpenTermError> {
    Ok(match t {
        Term::Var(b) => Some(
            env.iter()
                .rev()
                .find(|(x, _)| x == b)
                .map(|&(_, ty)| ty)
                .ok_or(OpenTermError(*b))?,
        ),
        Term::Lam(b, body) => {
            let a = store.fresh_meta();
            env.push((*b, a));
            let r = infer(body, store, env);
            env.pop();
            r?.map(|r| store.imp(a, r))
        }
        Term::App(f, x) => {
            let (Some(tf), Some(tx)) = (infer(f, store, env)?, infer(x, store, env)?) else {
                return Ok(None);
            };
            let r = store.fresh_meta();
            let want = store.imp(tx, r);
            store.unify_vars(tf, want, true).then_some(r)
        }
    })
}
