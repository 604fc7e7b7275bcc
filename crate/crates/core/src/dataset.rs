//! The theorem dataset: every linear normal form of a size with its
//! principal type, written as TSV records
//! `id \t n \t formula \t postfix-term \n`.

use std::collections::HashSet;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::counts::{CountTable, Sequence};
use crate::syntax::{Formula, Term};
use crate::term_gen::{infer_principal_type, EnumStats, Enumerator, Family, Split, TypedTerms};

/// Choice points fixed when splitting generation into shards.
pub const SHARD_SPLIT_DEPTH: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DatasetRecord {
    pub id: u64,
    pub n: usize,
    pub formula: Formula,
    pub term: Term,
}

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("record {id}: {msg}")]
    Invalid { id: u64, msg: String },
    #[error("shards hold {got} records, expected {expected}")]
    ShardCount { got: u64, expected: u64 },
    #[error("shards overlap: a record appears in more than one shard")]
    ShardOverlap,
}

impl DatasetRecord {
    pub fn to_tsv(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\n",
            self.id,
            self.n,
            self.formula,
            self.term.to_postfix_string().expect("dataset terms are closed")
        )
    }

    pub fn parse_tsv(line: &str) -> Result<DatasetRecord, String> {
        let fields: Vec<&str> = line.trim_end_matches('\n').split('\t').collect();
        let [id, n, formula, term] = fields[..] else {
            return Err(format!("expected 4 tab-separated fields, found {}", fields.len()));
        };
        Ok(DatasetRecord {
            id: id.parse().map_err(|e| format!("bad id: {e}"))?,
            n: n.parse().map_err(|e| format!("bad n: {e}"))?,
            formula: Formula::parse(formula).map_err(|e| e.to_string())?,
            term: Term::from_postfix_str(term).map_err(|e| e.to_string())?,
        })
    }

    /// `% `-prefixed LaTeX trees of the term and the formula.
    pub fn latex_comments(&self) -> String {
        format!(
            "% {}\n% {}\n",
            self.term.to_tree_latex(),
            self.formula.to_tree_latex()
        )
    }

    /// Check that the record is a theorem with its proof: sizes agree, the
    /// term is a closed linear normal form and the formula is its principal
    /// type.
    pub fn verify(&self) -> Result<(), String> {
        let want = 2 * self.n + 1;
        if self.formula.size() != want || self.term.size() != want {
            return Err(format!(
                "sizes {} (formula) and {} (term), expected {want}",
                self.formula.size(),
                self.term.size()
            ));
        }
        match self.term.is_linear() {
            Ok(true) => {}
            Ok(false) => return Err("term is not linear".into()),
            Err(e) => return Err(e.to_string()),
        }
        if !self.term.is_normal() {
            return Err("term has a redex".into());
        }
        match infer_principal_type(&self.term) {
            Ok(Some(ty)) if ty == self.formula => Ok(()),
            Ok(Some(ty)) => Err(format!("principal type is {ty}")),
            _ => Err("term is untypable".into()),
        }
    }
}

fn records(
    n: usize,
    terms: impl Iterator<Item = (Term, Formula)>,
) -> impl Iterator<Item = DatasetRecord> {
    terms.enumerate().map(move |(id, (term, formula))| DatasetRecord {
        id: id as u64,
        n,
        formula,
        term,
    })
}

/// Stream every record for `n` to `out`. Returns the number of records and
/// the search's resident-state statistics.
pub fn write_dataset<W: Write>(
    n: usize,
    out: W,
    latex: bool,
) -> io::Result<(u64, EnumStats)> {
    write_records(n, TypedTerms::from(Enumerator::new(Family::TypedNormalForms, n)), out, latex)
}

fn write_records<W: Write>(
    n: usize,
    mut terms: TypedTerms,
    out: W,
    latex: bool,
) -> io::Result<(u64, EnumStats)> {
    let mut out = BufWriter::new(out);
    let mut written = 0;
    for rec in records(n, terms.by_ref()) {
        out.write_all(rec.to_tsv().as_bytes())?;
        if latex {
            out.write_all(rec.latex_comments().as_bytes())?;
        }
        written += 1;
    }
    out.flush()?;
    Ok((written, terms.stats()))
}

pub fn shard_path(base: &Path, index: usize) -> PathBuf {
    let mut s = base.as_os_str().to_owned();
    s.push(format!(".{index}"));
    PathBuf::from(s)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShardReport {
    pub paths: Vec<PathBuf>,
    pub counts: Vec<u64>,
    pub total: u64,
}

/// Generate the dataset for `n`. With one shard the records go to `path`;
/// otherwise shard `i` goes to `path.i`, generated on its own thread. The
/// shards are validated against the expected count before returning.
pub fn write_sharded(
    n: usize,
    path: &Path,
    shards: usize,
    latex: bool,
) -> Result<ShardReport, DatasetError> {
    assert!(shards >= 1);
    let paths: Vec<PathBuf> = if shards == 1 {
        vec![path.to_path_buf()]
    } else {
        (0..shards).map(|i| shard_path(path, i)).collect()
    };
    let counts = std::thread::scope(|scope| {
        let handles: Vec<_> = paths
            .iter()
            .enumerate()
            .map(|(index, p)| {
                scope.spawn(move || -> io::Result<u64> {
                    let mut e = Enumerator::new(Family::TypedNormalForms, n);
                    if shards > 1 {
                        e = e.with_split(Split {
                            depth: SHARD_SPLIT_DEPTH,
                            shards,
                            index,
                        });
                    }
                    let file = File::create(p)?;
                    Ok(write_records(n, TypedTerms::from(e), file, latex)?.0)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("shard worker panicked"))
            .collect::<io::Result<Vec<u64>>>()
    })?;
    let total = counts.iter().sum();
    if let Some(e) = CountTable::default().lookup(Sequence::TypedNf, n) {
        if e.count != total {
            return Err(DatasetError::ShardCount {
                got: total,
                expected: e.count,
            });
        }
    }
    // disjointness is checked outright while the level is small enough to hold
    if shards > 1 && total <= 1_000_000 {
        let mut seen = HashSet::with_capacity(total as usize);
        for p in &paths {
            for rec in read_dataset(p)? {
                if !seen.insert(rec.term) {
                    return Err(DatasetError::ShardOverlap);
                }
            }
        }
    }
    Ok(ShardReport {
        paths,
        counts,
        total,
    })
}

/// Read a dataset file, skipping `%` comment lines.
pub fn read_dataset(path: &Path) -> Result<Vec<DatasetRecord>, DatasetError> {
    let reader = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.starts_with('%') || line.is_empty() {
            continue;
        }
        out.push(
            DatasetRecord::parse_tsv(&line)
                .map_err(|msg| DatasetError::Malformed { line: i + 1, msg })?,
        );
    }
    Ok(out)
}

/// Read a dataset file and check every record. Returns the record count.
pub fn verify_dataset(path: &Path) -> Result<u64, DatasetError> {
    let records = read_dataset(path)?;
    for rec in &records {
        rec.verify()
            .map_err(|msg| DatasetError::Invalid { id: rec.id, msg })?;
    }
    Ok(records.len() as u64)
}
