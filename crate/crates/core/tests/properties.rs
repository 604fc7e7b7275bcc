use std::collections::{HashMap, HashSet};

use proptest::prelude::*;

use lintaut::balanced::{balanced_proofs, prove_balanced};
use lintaut::formula_gen::{count_formulas, gen_formulas};
use lintaut::ljt::gen_taut;
use lintaut::syntax::{Formula, Term};
use lintaut::term_gen::{
    closed_affine_terms, closed_almost_linear_terms, closed_linear_terms, has_type, linear_motzkin_skeletons,
    linear_normal_forms, typed_normal_forms, Enumerator, Family, Split, Terms, TypedTerms,
};
use lintaut::unify::{BindingStore, MetaType, MetaVar};

fn set<T: std::hash::Hash + Eq>(it: impl IntoIterator<Item = T>) -> HashSet<T> {
    it.into_iter().collect()
}

// ---- unification -------------------------------------------------------

/// Textbook substitution-based unifier with occurs check.
fn robinson(a: &MetaType, b: &MetaType) -> bool {
    fn walk(t: &MetaType, s: &HashMap<MetaVar, MetaType>) -> MetaType {
        match t {
            MetaType::Meta(v) => match s.get(v) {
                Some(u) => walk(u, s),
                None => t.clone(),
            },
            MetaType::Imp(l, r) => MetaType::imp(walk(l, s), walk(r, s)),
            atom => atom.clone(),
        }
    }
    fn occurs(v: MetaVar, t: &MetaType) -> bool {
        match t {
            MetaType::Meta(u) => *u == v,
            MetaType::Imp(l, r) => occurs(v, l) || occurs(v, r),
            MetaType::Atom(_) => false,
        }
    }
    let mut s = HashMap::new();
    let mut work = vec![(a.clone(), b.clone())];
    while let Some((x, y)) = work.pop() {
        match (walk(&x, &s), walk(&y, &s)) {
            (MetaType::Meta(u), MetaType::Meta(v)) if u == v => {}
            (MetaType::Meta(v), t) | (t, MetaType::Meta(v)) => {
                if occurs(v, &t) {
                    return false;
                }
                s.insert(v, t);
            }
            (MetaType::Atom(p), MetaType::Atom(q)) => {
                if p != q {
                    return false;
                }
            }
            (MetaType::Imp(l1, r1), MetaType::Imp(l2, r2)) => {
                work.push((*l1, *l2));
                work.push((*r1, *r2));
            }
            _ => return false,
        }
    }
    true
}

/// Every type up to `depth` levels (a leaf is depth 1) over two
/// metavariables and two atoms.
fn small_types(depth: usize) -> Vec<MetaType> {
    let leaves = vec![
        MetaType::Meta(MetaVar(0)),
        MetaType::Meta(MetaVar(1)),
        MetaType::Atom(0),
        MetaType::Atom(1),
    ];
    let mut all = leaves.clone();
    for _ in 1..depth {
        let mut next = leaves.clone();
        for l in &all {
            for r in &all {
                next.push(MetaType::imp(l.clone(), r.clone()));
            }
        }
        all = next;
    }
    all
}

fn store_unify(a: &MetaType, b: &MetaType, occurs: bool) -> bool {
    let mut s = BindingStore::new();
    s.fresh_meta();
    s.fresh_meta();
    let ok = s.unify(a, b, occurs);
    if !ok {
        // a failed unification leaves no bindings behind
        assert_eq!(s.trail_len(), 0);
    }
    ok
}

#[test]
fn unify_is_symmetric_and_agrees_with_robinson() {
    let types = small_types(3);
    assert_eq!(types.len(), 404);
    for a in &types {
        for b in &types {
            let ab = store_unify(a, b, true);
            assert_eq!(ab, store_unify(b, a, true), "{a:?} ~ {b:?}");
            assert_eq!(ab, robinson(a, b), "{a:?} ~ {b:?}");
        }
    }
}

#[derive(Clone, Debug)]
enum Op {
    Fresh,
    Atom(u32),
    Imp(usize, usize),
    Unify(usize, usize),
    Mark,
    Undo,
}

fn op() -> impl Strategy<Value = Op> {
    prop_oneof![
        Just(Op::Fresh),
        (0u32..3).prop_map(Op::Atom),
        (any::<usize>(), any::<usize>()).prop_map(|(a, b)| Op::Imp(a, b)),
        (any::<usize>(), any::<usize>()).prop_map(|(a, b)| Op::Unify(a, b)),
        Just(Op::Mark),
        Just(Op::Undo),
    ]
}

proptest! {
    #[test]
    fn store_is_empty_after_unwinding_every_mark(ops in prop::collection::vec(op(), 0..60)) {
        let mut s = BindingStore::new();
        let mut marks = vec![s.mark()];
        for op in ops {
            let n = s.len();
            match op {
                Op::Fresh => { s.fresh_meta(); }
                Op::Atom(a) => { s.atom(a); }
                Op::Imp(a, b) if n > 0 => { s.imp(MetaVar((a % n) as u32), MetaVar((b % n) as u32)); }
                Op::Unify(a, b) if n > 0 => {
                    s.unify_vars(MetaVar((a % n) as u32), MetaVar((b % n) as u32), true);
                }
                Op::Mark => marks.push(s.mark()),
                Op::Undo if marks.len() > 1 => { s.undo_to(marks.pop().unwrap()).unwrap(); }
                _ => {}
            }
        }
        while let Some(m) = marks.pop() {
            prop_assert!(s.undo_to(m).is_ok());
        }
        prop_assert!(s.is_empty());
        prop_assert_eq!(s.len(), 0);
    }
}

#[test]
fn no_cycles_without_occurs_check() {
    for n in 0..=4 {
        let plain: Vec<_> = typed_normal_forms(n).collect();
        let checked: Vec<_> =
            TypedTerms::from(Enumerator::new(Family::TypedNormalForms, n).with_occurs_check(true)).collect();
        assert_eq!(plain, checked, "n = {n}");
    }
}

// ---- syntax round trips -------------------------------------------------

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = (0u32..4).prop_map(Formula::Atom);
    leaf.prop_recursive(6, 40, 2, |inner| {
        (inner.clone(), inner).prop_map(|(l, r)| Formula::imp(l, r))
    })
}

/// Closed terms: binders numbered by depth, variables drawn from the scope.
fn closed_term() -> impl Strategy<Value = Term> {
    #[derive(Clone, Debug)]
    enum Shape {
        Var(usize),
        Lam(Box<Shape>),
        App(Box<Shape>, Box<Shape>),
    }
    fn build(s: &Shape, scope: &mut Vec<u32>, next: &mut u32) -> Term {
        match s {
            Shape::Var(i) => Term::var(scope[scope.len() - 1 - i % scope.len()]),
            Shape::Lam(b) => {
                let x = *next;
                *next += 1;
                scope.push(x);
                let body = build(b, scope, next);
                scope.pop();
                Term::lam(x, body)
            }
            Shape::App(f, a) => Term::app(build(f, scope, next), build(a, scope, next)),
        }
    }
    let leaf = any::<usize>().prop_map(Shape::Var);
    let shape = leaf.prop_recursive(8, 48, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|b| Shape::Lam(Box::new(b))),
            (inner.clone(), inner).prop_map(|(f, a)| Shape::App(Box::new(f), Box::new(a))),
        ]
    });
    shape.prop_map(|s| build(&Shape::Lam(Box::new(s)), &mut Vec::new(), &mut 0))
}

proptest! {
    #[test]
    fn formula_print_parse(f in formula()) {
        prop_assert_eq!(Formula::parse(&f.to_string()), Ok(f.clone()));
        let c = f.relabel_canonical();
        prop_assert!(c.is_canonically_labeled());
        prop_assert_eq!(c.relabel_canonical(), c.clone());
        prop_assert_eq!(c.size(), f.size());
        prop_assert_eq!(f.leaf_count(), f.size() + 1);
    }

    #[test]
    fn term_print_parse_and_postfix(t in closed_term()) {
        prop_assert_eq!(Term::parse(&t.to_string()), Ok(t.clone()));
        let post = t.to_postfix_string().unwrap();
        prop_assert_eq!(Term::from_postfix_str(&post), Ok(t.canonical()));
        prop_assert_eq!(t.size(), t.lambda_count() + t.app_count());
    }
}

// ---- generators ---------------------------------------------------------

#[test]
fn formula_stream_matches_closed_form() {
    for n in 0..=6 {
        let c = count_formulas(n).unwrap();
        assert_eq!(c, (gen_formulas(n).count() as u64).into(), "n = {n}");
    }
}

#[test]
fn chain_inclusions() {
    for n in 0..=3 {
        let nf = set(linear_normal_forms(n));
        let lin = set(closed_linear_terms(n));
        let aff = set(closed_affine_terms(n));
        let all = set(closed_almost_linear_terms(n));
        assert!(nf.is_subset(&lin) && lin.is_subset(&aff) && aff.is_subset(&all), "n = {n}");
        assert_eq!(nf, lin.iter().filter(|t| t.is_normal()).cloned().collect(), "n = {n}");
    }
}

#[test]
fn skeletons_of_terms_are_generated_skeletons() {
    for n in 0..=3 {
        let skels = set(linear_motzkin_skeletons(n));
        for t in closed_almost_linear_terms(n) {
            assert!(skels.contains(&t.skeleton()), "{t}");
            assert_eq!(t.lambda_count(), n + 1);
            assert_eq!(t.leaf_count(), n + 1);
        }
    }
}

#[test]
fn two_way_splits_partition_every_family() {
    for family in [Family::AlmostLinear, Family::Linear, Family::NormalForms, Family::TypedNormalForms] {
        for depth in [0, 1, 3, 6] {
            let whole: Vec<Term> = Terms::from(Enumerator::new(family, 3)).collect();
            let mut parts = Vec::new();
            for index in 0..2 {
                let e = Enumerator::new(family, 3).with_split(Split { depth, shards: 2, index });
                parts.extend(Terms::from(e));
            }
            assert_eq!(parts.len(), whole.len(), "{family:?} depth {depth}");
            assert_eq!(set(parts), set(whole), "{family:?} depth {depth}");
        }
    }
}

// ---- provers ------------------------------------------------------------

#[test]
fn ljt_proofs_have_their_formulas_as_types() {
    for n in 0..=5 {
        for (f, t) in gen_taut(n) {
            assert!(t.is_closed());
            assert_eq!(t.is_linear(), Ok(true), "{t}");
            assert_eq!(has_type(&t, &f), Ok(true), "{t} : {f}");
        }
    }
}

#[test]
fn balanced_prover_inverts_type_inference() {
    for n in 0..=3 {
        for (t, f) in typed_normal_forms(n) {
            assert_eq!(prove_balanced(&f), Some(t), "{f}");
        }
    }
}

#[test]
fn balanced_proofs_are_unique() {
    for size in [3, 5, 7] {
        let mut balanced = 0;
        let mut proved = 0;
        for f in gen_formulas(size).filter(Formula::is_balanced) {
            balanced += 1;
            let proofs = balanced_proofs(&f).count();
            assert!(proofs <= 1, "{f} has {proofs} proofs");
            proved += proofs;
        }
        assert!(proved <= balanced);
    }
}
