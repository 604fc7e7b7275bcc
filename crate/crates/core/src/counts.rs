//! Enumerated families and their expected counts per size.

use std::fmt;
use std::str::FromStr;

use crate::balanced;
use crate::formula_gen::{count_formulas, gen_trees, set_partitions};
use crate::ljt::count_taut;
use crate::term_gen::{count, count_parallel, Family};

/// Every sequence the CLI can enumerate or count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sequence {
    Trees,
    Partitions,
    Formulas,
    Skeletons,
    AlmostLinear,
    Linear,
    Affine,
    Nf,
    TypedNf,
    TheoremsLjt,
    TheoremsBalanced,
}

impl Sequence {
    pub const ALL: [Sequence; 11] = [
        Sequence::Trees,
        Sequence::Partitions,
        Sequence::Formulas,
        Sequence::Skeletons,
        Sequence::AlmostLinear,
        Sequence::Linear,
        Sequence::Affine,
        Sequence::Nf,
        Sequence::TypedNf,
        Sequence::TheoremsLjt,
        Sequence::TheoremsBalanced,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Sequence::Trees => "trees",
            Sequence::Partitions => "partitions",
            Sequence::Formulas => "formulas",
            Sequence::Skeletons => "skeletons",
            Sequence::AlmostLinear => "almost-linear",
            Sequence::Linear => "linear",
            Sequence::Affine => "affine",
            Sequence::Nf => "nf",
            Sequence::TypedNf => "typed-nf",
            Sequence::TheoremsLjt => "theorems-ljt",
            Sequence::TheoremsBalanced => "theorems-balanced",
        }
    }

    pub fn term_family(self) -> Option<Family> {
        Some(match self {
            Sequence::Skeletons => Family::Skeletons,
            Sequence::AlmostLinear => Family::AlmostLinear,
            Sequence::Linear => Family::Linear,
            Sequence::Affine => Family::Affine,
            Sequence::Nf => Family::NormalForms,
            Sequence::TypedNf => Family::TypedNormalForms,
            _ => return None,
        })
    }

    /// Largest size enumerated unless `LINTAUT_MAX_SIZE` says otherwise.
    pub fn default_max_size(self) -> usize {
        match self {
            Sequence::Trees | Sequence::Partitions => 14,
            Sequence::Formulas | Sequence::TheoremsLjt => 9,
            Sequence::TheoremsBalanced => 7,
            Sequence::Skeletons | Sequence::AlmostLinear | Sequence::Linear | Sequence::Affine => 7,
            Sequence::Nf | Sequence::TypedNf => 8,
        }
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Sequence {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Sequence::ALL
            .into_iter()
            .find(|q| q.name() == s)
            .ok_or_else(|| format!("unknown family '{s}'"))
    }
}

/// Where an expected count comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Published integer sequence.
    Published,
    /// Computed from a closed formula.
    ClosedForm,
    /// Pinned from this crate's own brute-force enumeration.
    Pinned,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Published => "published",
            Provenance::ClosedForm => "closed-form",
            Provenance::Pinned => "pinned",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Expected {
    pub size: usize,
    pub count: u64,
    pub provenance: Provenance,
}

const CATALAN: [u64; 11] = [1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796];
const BELL: [u64; 7] = [1, 1, 2, 5, 15, 52, 203];
const FORMULAS: [u64; 8] = [1, 2, 10, 75, 728, 8526, 115764, 1776060];
const SKELETONS: [u64; 6] = [1, 6, 70, 1050, 18018, 336336];
const LINEAR: [u64; 6] = [1, 5, 60, 1105, 27120, 828250];
const NORMAL: [u64; 9] = [1, 3, 26, 367, 7142, 176766, 5304356, 186954535, 7566084686];
const THEOREMS_LJT: [u64; 10] = [0, 1, 0, 4, 0, 27, 0, 315, 0, 5565];
// Pinned from the brute-force oracle in tests/oracles.rs. With n + 1 leaves
// and n + 1 binders, "each binder used at most once" forces "exactly once",
// so the affine row coincides with the linear one.
const ALMOST_LINEAR: [u64; 5] = [1, 9, 284, 15810, 1261938];
const AFFINE: [u64; 5] = [1, 5, 60, 1105, 27120];

/// Expected counts per family.
#[derive(Clone, Debug)]
pub struct CountTable {
    rows: Vec<(Sequence, Vec<Expected>)>,
}

impl Default for CountTable {
    fn default() -> Self {
        fn rows(values: &[u64], provenance: Provenance) -> Vec<Expected> {
            values
                .iter()
                .enumerate()
                .map(|(size, &count)| Expected {
                    size,
                    count,
                    provenance,
                })
                .collect()
        }
        use Provenance::*;
        let balanced = (0..=7)
            .map(|size| Expected {
                size,
                count: if size % 2 == 1 { NORMAL[size / 2] } else { 0 },
                provenance: Published,
            })
            .collect();
        CountTable {
            rows: vec![
                (Sequence::Trees, rows(&CATALAN, ClosedForm)),
                (Sequence::Partitions, rows(&BELL, Published)),
                (Sequence::Formulas, rows(&FORMULAS, Published)),
                (Sequence::Skeletons, rows(&SKELETONS, Published)),
                (Sequence::AlmostLinear, rows(&ALMOST_LINEAR, Pinned)),
                (Sequence::Linear, rows(&LINEAR, Published)),
                (Sequence::Affine, rows(&AFFINE, Pinned)),
                (Sequence::Nf, rows(&NORMAL, Published)),
                (Sequence::TypedNf, rows(&NORMAL, Published)),
                (Sequence::TheoremsLjt, rows(&THEOREMS_LJT, Published)),
                (Sequence::TheoremsBalanced, balanced),
            ],
        }
    }
}

impl CountTable {
    pub fn expected(&self, seq: Sequence) -> &[Expected] {
        self.rows
            .iter()
            .find(|(s, _)| *s == seq)
            .map(|(_, r)| r.as_slice())
            .unwrap_or(&[])
    }

    pub fn lookup(&self, seq: Sequence, size: usize) -> Option<Expected> {
        self.expected(seq).iter().find(|e| e.size == size).copied()
    }
}

/// Count one family at one size by enumeration.
pub fn enumerate_count(seq: Sequence, size: usize) -> u64 {
    match seq {
        Sequence::Trees => gen_trees(size).count() as u64,
        Sequence::Partitions => set_partitions(size).count() as u64,
        Sequence::Formulas => {
            // trees times partitions, without labeling each formula
            let parts = set_partitions(size + 1).count() as u64;
            gen_trees(size).map(|_| parts).sum()
        }
        Sequence::TheoremsLjt => count_taut(size),
        Sequence::TheoremsBalanced => balanced::sweep_count(size),
        _ => {
            let family = seq.term_family().unwrap();
            if size >= 4 {
                count_parallel(family, size, 6, 64)
            } else {
                count(family, size)
            }
        }
    }
}

/// Closed-form check value for the formula family, when it fits in `u64`.
pub fn closed_form_formulas(size: usize) -> Option<u64> {
    count_formulas(size).ok().and_then(|c| u64::try_from(c).ok())
}
