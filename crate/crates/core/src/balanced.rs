//! Reverse-mode prover for balanced formulas.
//!
//! Linear normal forms and their principal types are in size-preserving
//! bijection, and those types are exactly the balanced formulas that are
//! theorems. Running the typed normal-form generator with its root type
//! fixed to the goal therefore finds the goal's unique normal proof, if any.

use rayon::prelude::*;

use crate::formula_gen::{gen_trees, set_partitions};
use crate::syntax::{Formula, Term};
use crate::term_gen::{Enumerator, Terms};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BalanceReport {
    pub balanced: bool,
    /// Distinct atoms, when balanced.
    pub pair_count: usize,
    /// Term parameter `n` with formula size `2n + 1`, when balanced.
    pub n: usize,
}

pub fn analyze_balance(f: &Formula) -> BalanceReport {
    if !f.is_balanced() {
        return BalanceReport {
            balanced: false,
            pair_count: 0,
            n: 0,
        };
    }
    BalanceReport {
        balanced: true,
        pair_count: f.polarity_profile().len(),
        n: (f.size() - 1) / 2,
    }
}

/// Every normal linear term whose type has `f` as an instance at the size
/// fixed by `f`. Empty for unbalanced formulas.
pub fn balanced_proofs(f: &Formula) -> Terms {
    let report = analyze_balance(f);
    let mut e = Enumerator::typed_against(report.n, f);
    if !report.balanced {
        // exhaust a trivial search so the stream is empty
        while e.next_solution() {}
    }
    Terms::from(e)
}

/// The normal linear proof of a balanced formula, or `None` when the
/// formula is unbalanced or not a theorem.
pub fn prove_balanced(f: &Formula) -> Option<Term> {
    balanced_proofs(f).next()
}

/// How many canonical-labeled formulas of `size` the balanced prover
/// proves, computed in parallel over tree shapes. Labelings that are not
/// balanced are skipped before building the formula.
pub fn sweep_count(size: usize) -> u64 {
    let trees: Vec<_> = gen_trees(size).collect();
    trees
        .par_iter()
        .map(|tree| {
            let pol = tree.leaf_polarities();
            let mut parts = set_partitions(tree.leaf_count());
            let mut seen = vec![(0u8, 0u8); tree.leaf_count()];
            let mut found = 0;
            while parts.advance() {
                let rgs = parts.current();
                seen.iter_mut().for_each(|s| *s = (0, 0));
                for (label, &p) in rgs.iter().zip(&pol) {
                    let s = &mut seen[*label as usize];
                    if p {
                        s.0 += 1;
                    } else {
                        s.1 += 1;
                    }
                }
                let atoms = rgs.iter().max().map_or(0, |m| *m as usize + 1);
                if seen[..atoms].iter().any(|&s| s != (1, 1)) {
                    continue;
                }
                if prove_balanced(&tree.label(rgs)).is_some() {
                    found += 1;
                }
            }
            found
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Formula {
        Formula::parse(s).unwrap()
    }

    #[test]
    fn reports() {
        assert_eq!(
            analyze_balance(&f("0 -o (0 -o 1) -o 1")),
            BalanceReport {
                balanced: true,
                pair_count: 2,
                n: 1
            }
        );
        assert!(!analyze_balance(&f("0 -o 1 -o 0")).balanced);
        assert!(!analyze_balance(&f("0")).balanced);
    }

    #[test]
    fn proofs() {
        assert_eq!(
            prove_balanced(&f("0 -o (0 -o 1) -o 1")),
            Some(Term::parse("l(x0,l(x1,a(x1,x0)))").unwrap())
        );
        assert_eq!(
            prove_balanced(&f("((0 -o 0) -o 1) -o 1")),
            Some(Term::parse("l(x0,a(x0,l(x1,x1)))").unwrap())
        );
        assert!(analyze_balance(&f("(0 -o 0) -o 1 -o 1")).balanced);
        assert_eq!(prove_balanced(&f("(0 -o 0) -o 1 -o 1")), None);
        assert!(!analyze_balance(&f("(0 -o 1) -o 1 -o 0")).balanced);
        assert_eq!(prove_balanced(&f("(0 -o 1) -o 1 -o 0")), None);
        assert_eq!(prove_balanced(&f("0 -o 1 -o 0")), None);
        assert_eq!(prove_balanced(&f("(0 -o 0) -o 0 -o 0")), None);
        assert_eq!(prove_balanced(&f("0 -o 0")), Some(Term::parse("l(x0,x0)").unwrap()));
    }

    #[test]
    fn sweeps() {
        assert_eq!(sweep_count(1), 1);
        assert_eq!(sweep_count(2), 0);
        assert_eq!(sweep_count(3), 3);
    }

    #[test]
    fn atom_names_do_not_matter() {
        assert_eq!(
            prove_balanced(&f("7 -o (7 -o 3) -o 3")),
            prove_balanced(&f("0 -o (0 -o 1) -o 1"))
        );
    }
}
