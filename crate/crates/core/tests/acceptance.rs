//! Acceptance suite. Runs every criterion in sequence so the timings are not
//! disturbed by other tests, prints one line per criterion and exits
//! non-zero if any fails.
//!
//! Set `LINTAUT_STRETCH=1` to also run the slow n = 6, 7 normal-form counts.

use std::collections::HashSet;
use std::io;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use lintaut::balanced::prove_balanced;
use lintaut::cli;
use lintaut::dataset::write_dataset;
use lintaut::formula_gen::{gen_formulas, gen_trees, set_partitions};
use lintaut::ljt::{gen_taut, prove_lin};
use lintaut::syntax::{Formula, Term};
use lintaut::term_gen::{
    closed_almost_linear_terms, closed_linear_terms, infer_principal_type, linear_motzkin_skeletons,
    typed_normal_forms,
};

type Outcome = Result<String, String>;

fn check_counts(got: &[u64], want: &[u64]) -> Outcome {
    if got == want {
        Ok(format!("{got:?}"))
    } else {
        Err(format!("got {got:?}, expected {want:?}"))
    }
}

fn c1_catalan() -> Outcome {
    // by the convolution recurrence, independent of the generator
    let mut want = vec![1u64];
    for n in 1..=10 {
        want.push((0..n).map(|i| want[i] * want[n - 1 - i]).sum());
    }
    let got: Vec<u64> = (0..=10).map(|n| gen_trees(n).count() as u64).collect();
    check_counts(&got, &want)
}

fn c2_bell() -> Outcome {
    let got: Vec<u64> = (0..=6).map(|k| set_partitions(k).count() as u64).collect();
    check_counts(&got, &[1, 1, 2, 5, 15, 52, 203])
}

fn c3_formulas() -> Outcome {
    let got: Vec<u64> = (0..=6).map(|n| gen_formulas(n).count() as u64).collect();
    check_counts(&got, &[1, 2, 10, 75, 728, 8526, 115764])
}

fn c4_gen_taut() -> Outcome {
    let got: Vec<u64> = (0..=9).map(|n| gen_taut(n).count() as u64).collect();
    check_counts(&got, &[0, 1, 0, 4, 0, 27, 0, 315, 0, 5565])
}

fn c5_skeletons() -> Outcome {
    let got: Vec<u64> = (0..=5).map(|n| linear_motzkin_skeletons(n).count() as u64).collect();
    check_counts(&got, &[1, 6, 70, 1050, 18018, 336336])
}

fn c6_linear() -> Outcome {
    let got: Vec<u64> = (0..=5).map(|n| closed_linear_terms(n).count() as u64).collect();
    check_counts(&got, &[1, 5, 60, 1105, 27120, 828250])
}

fn c7_normal_forms() -> Outcome {
    let got: Vec<u64> = (0..=5).map(|n| typed_normal_forms(n).count() as u64).collect();
    check_counts(&got, &[1, 3, 26, 367, 7142, 176766])
}

fn c7_stretch() -> Outcome {
    let got: Vec<u64> = (6..=7).map(|n| typed_normal_forms(n).count() as u64).collect();
    check_counts(&got, &[5304356, 186954535])
}

fn c8_eureka() -> Outcome {
    let mut checked = 0;
    for n in 0..=4 {
        let mut types = HashSet::new();
        for (t, f) in typed_normal_forms(n) {
            if t.size() != 2 * n + 1 || f.size() != 2 * n + 1 {
                return Err(format!("size mismatch: {t} : {f}"));
            }
            if !f.is_balanced() {
                return Err(format!("unbalanced type {f} for {t}"));
            }
            if infer_principal_type(&t) != Ok(Some(f.clone())) {
                return Err(format!("re-inference disagrees for {t} : {f}"));
            }
            if !types.insert(f.clone()) {
                return Err(format!("type {f} emitted twice"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} pairs, zero violations"))
}

fn c9_balanced_sweep() -> Outcome {
    let got: Vec<u64> = [3, 5]
        .iter()
        .map(|&n| gen_formulas(n).filter(|f| prove_balanced(f).is_some()).count() as u64)
        .collect();
    check_counts(&got, &[3, 26])
}

fn c10_witnesses() -> Outcome {
    let f = |s: &str| Formula::parse(s).unwrap();
    let t = |s: &str| Some(Term::parse(s).unwrap());
    let checks = [
        ("prove_lin 0 -o (0 -o 1) -o 1", prove_lin(&f("0 -o (0 -o 1) -o 1")), t("l(x0,l(x1,a(x1,x0)))")),
        ("prove_lin (0 -o 0) -o 0 -o 0", prove_lin(&f("(0 -o 0) -o 0 -o 0")), t("l(x0,x0)")),
        ("prove_lin ((0 -o 0) -o 1) -o 1", prove_lin(&f("((0 -o 0) -o 1) -o 1")), None),
        (
            "prove_balanced ((0 -o 0) -o 1) -o 1",
            prove_balanced(&f("((0 -o 0) -o 1) -o 1")),
            t("l(x0,a(x0,l(x1,x1)))"),
        ),
    ];
    for (what, got, want) in checks {
        if got != want {
            return Err(format!("{what}: got {got:?}, expected {want:?}"));
        }
    }
    Ok("4 assertions".into())
}

/// Peak live search state per record stream. The engine keeps goal and
/// decision stacks, the binder scope and the unification store; each grows
/// by a bounded amount per node of the term being built, so the peak must
/// stay under a fixed multiple of the term size regardless of how many
/// records have streamed past.
const STATE_PER_NODE: usize = 24;

fn c11_streaming_memory() -> Outcome {
    let mut peaks = Vec::new();
    for n in 1..=5 {
        let (records, stats) = write_dataset(n, io::sink(), false).map_err(|e| e.to_string())?;
        let bound = STATE_PER_NODE * (2 * n + 2);
        if stats.peak_state() > bound {
            return Err(format!(
                "n = {n}: peak state {} exceeds {bound} ({stats:?})",
                stats.peak_state()
            ));
        }
        peaks.push((n, records, stats.peak_state()));
    }
    let summary: Vec<String> = peaks.iter().map(|(n, r, p)| format!("n={n}: {r} records, peak {p}")).collect();
    Ok(summary.join("; "))
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(std::iter::once("lintaut").chain(args.iter().copied()), &mut out, &mut err);
    if code != 0 {
        return Err(format!("{args:?} exited {code}: {}", String::from_utf8_lossy(&err)));
    }
    Ok(out)
}

fn c12_determinism_round_trips() -> Outcome {
    // repeated runs are byte-identical
    let runs: [&[&str]; 4] = [
        &["gen", "formulas", "--size", "4"],
        &["gen", "typed-nf", "--size", "4", "--format", "tsv"],
        &["gen", "theorems-ljt", "--size", "5"],
        &["gen", "linear", "--size", "3", "--format", "postfix"],
    ];
    for args in runs {
        if run_cli(args)? != run_cli(args)? {
            return Err(format!("{args:?} differs between runs"));
        }
    }
    let mut a = Vec::new();
    let mut b = Vec::new();
    write_dataset(4, &mut a, true).map_err(|e| e.to_string())?;
    write_dataset(4, &mut b, true).map_err(|e| e.to_string())?;
    if a != b {
        return Err("dataset n = 4 differs between runs".into());
    }

    let mut formulas = 0;
    for n in 0..=3 {
        for f in gen_formulas(n) {
            if Formula::parse(&f.to_string()).as_ref() != Ok(&f) {
                return Err(format!("formula round-trip fails for {f}"));
            }
            formulas += 1;
        }
    }
    let mut terms = 0;
    for n in 0..=3 {
        // the almost-linear family holds every other term family
        for t in closed_almost_linear_terms(n) {
            if Term::parse(&t.to_string()).as_ref() != Ok(&t) {
                return Err(format!("term round-trip fails for {t}"));
            }
            let post = t.to_postfix_string().map_err(|e| e.to_string())?;
            if Term::from_postfix_str(&post).as_ref() != Ok(&t) {
                return Err(format!("postfix round-trip fails for {t} ({post})"));
            }
            terms += 1;
        }
    }
    Ok(format!("5 repeated runs identical; {formulas} formulas and {terms} terms round-trip"))
}

struct Criterion {
    id: &'static str,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let secs = |s| Some(Duration::from_secs(s));
    let mut criteria = vec![
        Criterion { id: "1", name: "Catalan counts", limit: secs(5), run: c1_catalan },
        Criterion { id: "2", name: "Bell counts", limit: secs(1), run: c2_bell },
        Criterion { id: "3", name: "formula counts", limit: secs(30), run: c3_formulas },
        Criterion { id: "4", name: "prover-sweep counts", limit: secs(600), run: c4_gen_taut },
        Criterion { id: "5", name: "skeleton counts", limit: secs(30), run: c5_skeletons },
        Criterion { id: "6", name: "linear-term counts", limit: secs(60), run: c6_linear },
        Criterion { id: "7", name: "normal-form counts", limit: secs(60), run: c7_normal_forms },
        Criterion { id: "8", name: "Eureka properties", limit: None, run: c8_eureka },
        Criterion { id: "9", name: "reverse-prover sweep", limit: secs(120), run: c9_balanced_sweep },
        Criterion { id: "10", name: "fixed witnesses", limit: None, run: c10_witnesses },
        Criterion { id: "11", name: "streaming memory", limit: None, run: c11_streaming_memory },
        Criterion { id: "12", name: "determinism and round-trips", limit: None, run: c12_determinism_round_trips },
    ];
    if std::env::var_os("LINTAUT_STRETCH").is_some() {
        criteria.push(Criterion { id: "7s", name: "normal-form counts n = 6, 7", limit: None, run: c7_stretch });
    }

    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let took = start.elapsed();
        let outcome = match (outcome, c.limit) {
            (Ok(_), Some(limit)) if took > limit => Err(format!("took {took:.2?}, limit {limit:?}")),
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {} ({took:.2?}): {detail}", c.id, c.name),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {} ({took:.2?}): {why}", c.id, c.name);
            }
        }
    }
    if std::env::var_os("LINTAUT_STRETCH").is_none() {
        println!("criterion 7s SKIP  normal-form counts n = 6, 7 (set LINTAUT_STRETCH=1)");
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
