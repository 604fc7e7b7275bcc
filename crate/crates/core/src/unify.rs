//! Metavariables with trailed, reversible bindings and first-order
//! unification over implicational type expressions.
//!
//! Structure is stored flat: every `-o` node and every atom lives in a cell
//! of its own, bound at allocation time. Binding a metavariable records it on
//! the trail; `undo_to` pops the trail and truncates cells allocated after the
//! mark, so a fully unwound store is indistinguishable from a fresh one.

use thiserror::Error;

use crate::syntax::Formula;

/// Index of a cell in a [`BindingStore`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MetaVar(pub u32);

/// A type expression that may contain metavariables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MetaType {
    Meta(MetaVar),
    Atom(u32),
    Imp(Box<MetaType>, Box<MetaType>),
}

impl MetaType {
    pub fn imp(l: MetaType, r: MetaType) -> MetaType {
        MetaType::Imp(Box::new(l), Box::new(r))
    }

    /// Ground type with the formula's atoms as constants.
    pub fn from_formula(f: &Formula) -> MetaType {
        match f {
            Formula::Atom(a) => MetaType::Atom(*a),
            Formula::Imp(l, r) => MetaType::imp(MetaType::from_formula(l), MetaType::from_formula(r)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Cell {
    Unbound,
    Ref(MetaVar),
    Atom(u32),
    Imp(MetaVar, MetaVar),
}

/// The resolved head of a cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Unbound(MetaVar),
    Atom(u32),
    Imp(MetaVar, MetaVar),
}

/// Position in the store to return to on backtracking.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mark {
    depth: usize,
    trail: usize,
    cells: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[error("mark is stale: it was already undone or belongs to another store state")]
pub struct StaleMark;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum CanonicalizeError {
    #[error("type mixes metavariable and constant leaves")]
    MixedLeaves,
    #[error("type is cyclic")]
    Cyclic,
}

#[derive(Clone, Debug, Default)]
pub struct BindingStore {
    cells: Vec<Cell>,
    trail: Vec<MetaVar>,
    marks: Vec<Mark>,
}

impl BindingStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty() && self.trail.is_empty() && self.marks.is_empty()
    }

    pub fn trail_len(&self) -> usize {
        self.trail.len()
    }

    fn push(&mut self, c: Cell) -> MetaVar {
        let v = MetaVar(self.cells.len() as u32);
        self.cells.push(c);
        v
    }

    pub fn fresh_meta(&mut self) -> MetaVar {
        self.push(Cell::Unbound)
    }

    /// A new cell holding `left -o right`.
    pub fn imp(&mut self, left: MetaVar, right: MetaVar) -> MetaVar {
        self.push(Cell::Imp(left, right))
    }

    pub fn atom(&mut self, a: u32) -> MetaVar {
        self.push(Cell::Atom(a))
    }

    /// Allocate cells for a type expression. Metavariables already in the
    /// store are referenced, not copied.
    pub fn intern(&mut self, t: &MetaType) -> MetaVar {
        match t {
            MetaType::Meta(v) => *v,
            MetaType::Atom(a) => self.atom(*a),
            MetaType::Imp(l, r) => {
                let l = self.intern(l);
                let r = self.intern(r);
                self.imp(l, r)
            }
        }
    }

    /// Follow reference chains to the representative cell.
    pub fn find(&self, mut v: MetaVar) -> MetaVar {
        while let Cell::Ref(next) = self.cells[v.0 as usize] {
            v = next;
        }
        v
    }

    pub fn shape(&self, v: MetaVar) -> Shape {
        let v = self.find(v);
        match self.cells[v.0 as usize] {
            Cell::Unbound => Shape::Unbound(v),
            Cell::Atom(a) => Shape::Atom(a),
            Cell::Imp(l, r) => Shape::Imp(l, r),
            Cell::Ref(_) => unreachable!(),
        }
    }

    pub fn is_bound(&self, v: MetaVar) -> bool {
        !matches!(self.cells[v.0 as usize], Cell::Unbound)
    }

    /// Fully apply the current bindings. Unbound metavariables resolve to
    /// themselves. Panics on a cyclic binding; use [`Self::try_resolve`] when
    /// cycles are possible.
    pub fn resolve(&self, t: &MetaType) -> MetaType {
        self.try_resolve(t).expect("cyclic binding")
    }

    pub fn try_resolve(&self, t: &MetaType) -> Result<MetaType, CanonicalizeError> {
        match t {
            MetaType::Meta(v) => self.reify(*v),
            MetaType::Atom(a) => Ok(MetaType::Atom(*a)),
            MetaType::Imp(l, r) => Ok(MetaType::imp(self.try_resolve(l)?, self.try_resolve(r)?)),
        }
    }

    /// The type held by a cell, with bindings applied.
    pub fn reify(&self, v: MetaVar) -> Result<MetaType, CanonicalizeError> {
        // a tree reachable from here cannot have more nodes than the store has cells
        // unless it loops
        let mut budget = 2 * self.cells.len() + 1;
        self.reify_bounded(v, &mut budget)
    }

    fn reify_bounded(&self, v: MetaVar, budget: &mut usize) -> Result<MetaType, CanonicalizeError> {
        let mut depth = 0;
        let mut v = v;
        while let Cell::Ref(next) = self.cells[v.0 as usize] {
            v = next;
            depth += 1;
            if depth > self.cells.len() {
                return Err(CanonicalizeError::Cyclic);
            }
        }
        if *budget == 0 {
            return Err(CanonicalizeError::Cyclic);
        }
        *budget -= 1;
        match self.cells[v.0 as usize] {
            Cell::Unbound => Ok(MetaType::Meta(v)),
            Cell::Atom(a) => Ok(MetaType::Atom(a)),
            Cell::Imp(l, r) => Ok(MetaType::imp(
                self.reify_bounded(l, budget)?,
                self.reify_bounded(r, budget)?,
            )),
            Cell::Ref(_) => unreachable!(),
        }
    }

    pub fn mark(&mut self) -> Mark {
        let m = Mark {
            depth: self.marks.len(),
            trail: self.trail.len(),
            cells: self.cells.len(),
        };
        self.marks.push(m);
        m
    }

    /// Remove every binding and cell created since `mark`, along with any
    /// marks nested inside it.
    pub fn undo_to(&mut self, mark: Mark) -> Result<(), StaleMark> {
        if self.marks.get(mark.depth) != Some(&mark) {
            return Err(StaleMark);
        }
        self.marks.truncate(mark.depth);
        self.rewind(mark.trail, mark.cells);
        Ok(())
    }

    /// Unchecked rewind to raw trail and cell positions.
    pub(crate) fn rewind(&mut self, trail: usize, cells: usize) {
        while self.trail.len() > trail {
            let v = self.trail.pop().unwrap();
            self.cells[v.0 as usize] = Cell::Unbound;
        }
        self.cells.truncate(cells);
    }

    fn bind(&mut self, v: MetaVar, to: MetaVar) {
        debug_assert!(matches!(self.cells[v.0 as usize], Cell::Unbound));
        self.cells[v.0 as usize] = Cell::Ref(to);
        self.trail.push(v);
    }

    fn occurs(&self, v: MetaVar, t: MetaVar) -> bool {
        let mut todo = vec![t];
        while let Some(t) = todo.pop() {
            match self.shape(t) {
                Shape::Unbound(u) if u == v => return true,
                Shape::Imp(l, r) => {
                    todo.push(l);
                    todo.push(r);
                }
                _ => {}
            }
        }
        false
    }

    /// Unify two cells. On failure every binding made during the attempt is
    /// undone.
    pub fn unify_vars(&mut self, a: MetaVar, b: MetaVar, occurs_check: bool) -> bool {
        let trail = self.trail.len();
        let mut todo = vec![(a, b)];
        while let Some((a, b)) = todo.pop() {
            let a = self.find(a);
            let b = self.find(b);
            if a == b {
                continue;
            }
            let ok = match (self.cells[a.0 as usize], self.cells[b.0 as usize]) {
                (Cell::Unbound, _) => {
                    if occurs_check && self.occurs(a, b) {
                        false
                    } else {
                        self.bind(a, b);
                        true
                    }
                }
                (_, Cell::Unbound) => {
                    if occurs_check && self.occurs(b, a) {
                        false
                    } else {
                        self.bind(b, a);
                        true
                    }
                }
                (Cell::Atom(x), Cell::Atom(y)) => x == y,
                (Cell::Imp(l1, r1), Cell::Imp(l2, r2)) => {
                    todo.push((r1, r2));
                    todo.push((l1, l2));
                    true
                }
                _ => false,
            };
            if !ok {
                while self.trail.len() > trail {
                    let v = self.trail.pop().unwrap();
                    self.cells[v.0 as usize] = Cell::Unbound;
                }
                return false;
            }
        }
        true
    }

    /// Unify two type expressions. On failure the store is left exactly as it
    /// was before the call.
    pub fn unify(&mut self, a: &MetaType, b: &MetaType, occurs_check: bool) -> bool {
        let cells = self.cells.len();
        let trail = self.trail.len();
        let a = self.intern(a);
        let b = self.intern(b);
        if self.unify_vars(a, b, occurs_check) {
            true
        } else {
            self.rewind(trail, cells);
            false
        }
    }

    /// Convert a resolved type into a formula whose leaves are renamed to
    /// `0, 1, 2, ...` by first occurrence. Leaves must be all metavariables or
    /// all atoms.
    pub fn canonicalize(&self, t: &MetaType) -> Result<Formula, CanonicalizeError> {
        let t = self.try_resolve(t)?;
        let mut metas: Vec<MetaVar> = Vec::new();
        let mut atoms: Vec<u32> = Vec::new();
        fn walk(t: &MetaType, metas: &mut Vec<MetaVar>, atoms: &mut Vec<u32>) -> Result<Formula, CanonicalizeError> {
            fn slot<T: PartialEq + Copy>(seen: &mut Vec<T>, x: T) -> u32 {
                match seen.iter().position(|s| *s == x) {
                    Some(i) => i as u32,
                    None => {
                        seen.push(x);
                        (seen.len() - 1) as u32
                    }
                }
            }
            match t {
                MetaType::Meta(v) => {
                    if !atoms.is_empty() {
                        return Err(CanonicalizeError::MixedLeaves);
                    }
                    Ok(Formula::Atom(slot(metas, *v)))
                }
                MetaType::Atom(a) => {
                    if !metas.is_empty() {
                        return Err(CanonicalizeError::MixedLeaves);
                    }
                    Ok(Formula::Atom(slot(atoms, *a)))
                }
                MetaType::Imp(l, r) => {
                    let l = walk(l, metas, atoms)?;
                    Ok(Formula::imp(l, walk(r, metas, atoms)?))
                }
            }
        }
        walk(&t, &mut metas, &mut atoms)
    }

    pub fn canonicalize_var(&self, v: MetaVar) -> Result<Formula, CanonicalizeError> {
        self.canonicalize(&MetaType::Meta(v))
    }
}
